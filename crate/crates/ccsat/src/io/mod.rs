//! File formats: CCNF theories, DIMACS CNF, `.col` graphs, latin-square
//! instances, and solver model output.
//!
//! All writers are deterministic; for every format `parse(write(x)) == x`.

mod ccnf;
mod col;
mod dimacs;
mod latin;
mod model;

pub use ccnf::{parse_ccnf, parse_ccnf_document, write_ccnf, write_ccnf_document, CcnfDocument};
pub use col::{parse_col_graph, write_col_graph, GraphInstance};
pub use dimacs::{parse_dimacs, write_dimacs, write_dimacs_cnf, Cnf};
pub use latin::{parse_latin, write_latin, LatinInstance};
pub use model::{parse_model, write_model, ModelValues};

use thiserror::Error;

/// Parse failure with the 1-based line where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(line: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing problem header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("unexpected token `{0}`")]
    BadToken(String),
    #[error("atom id {atom} out of range 1..={num_atoms}")]
    AtomOutOfRange { atom: i64, num_atoms: u32 },
    #[error("vertex {vertex} out of range 1..={num_vertices}")]
    VertexOutOfRange { vertex: u32, num_vertices: u32 },
    #[error("clause not terminated by 0")]
    UnterminatedClause,
    #[error("declared {declared} clauses, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("declared {declared} entries, found {found}")]
    EntryCountMismatch { declared: usize, found: usize },
    #[error("empty clause")]
    EmptyClause,
    #[error("cardinality atom has no bounds")]
    CardMissingBounds,
    #[error("duplicate atom in cardinality atom")]
    CardDuplicateAtom,
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),
    #[error("cell ({row},{col}) assigned twice")]
    DuplicateCell { row: u32, col: u32 },
    #[error("value {value} out of range 1..={order}")]
    LatinValueOutOfRange { value: u32, order: u32 },
    #[error("{0}")]
    Other(String),
}
