//! DIMACS CNF reading and writing.

use super::{ParseError, ParseErrorKind};
use crate::compile::CompiledCnf;
use crate::theory::{AtomId, Clause, Literal, Theory, TheoryError};

/// Plain CNF over atoms `1..=num_atoms`, clauses as signed literal lists.
/// Empty clauses are representable (the formula is then unsatisfiable).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cnf {
    pub num_atoms: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// Converts to a [`Theory`] of purely propositional clauses. Fails on
    /// empty clauses, which theories cannot represent.
    pub fn to_theory(&self) -> Result<Theory, TheoryError> {
        let clauses = self
            .clauses
            .iter()
            .map(|lits| {
                Clause::new(
                    lits.iter()
                        .map(|&l| {
                            let id = AtomId::new(l.unsigned_abs());
                            if l > 0 {
                                Literal::Pos(id)
                            } else {
                                Literal::Neg(id)
                            }
                        })
                        .collect(),
                )
            })
            .collect::<Result<_, _>>()?;
        Theory::new(self.num_atoms, clauses)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }
}

pub fn parse_dimacs(input: &str) -> Result<Cnf, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut header_line = 0;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut open_clause = false;

    for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim_start();
        if trimmed.starts_with('c') && (trimmed.len() == 1 || trimmed[1..].starts_with(' ')) {
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::BadHeader("repeated header".into()),
                ));
            }
            let mut it = trimmed.split_whitespace();
            let _p = it.next();
            if it.next() != Some("cnf") {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::BadHeader("expected `p cnf <atoms> <clauses>`".into()),
                ));
            }
            let atoms = it
                .next()
                .and_then(|t| t.parse::<u32>().ok())
                .ok_or_else(|| {
                    ParseError::new(lineno, ParseErrorKind::BadHeader("bad atom count".into()))
                })?;
            let n_clauses = it
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| {
                    ParseError::new(lineno, ParseErrorKind::BadHeader("bad clause count".into()))
                })?;
            header = Some((atoms, n_clauses));
            header_line = lineno;
            continue;
        }
        let Some((num_atoms, _)) = header else {
            return Err(ParseError::new(lineno, ParseErrorKind::MissingHeader));
        };
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| ParseError::new(lineno, ParseErrorKind::BadToken(tok.into())))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                open_clause = false;
            } else {
                if lit.unsigned_abs() > num_atoms as u64 {
                    return Err(ParseError::new(
                        lineno,
                        ParseErrorKind::AtomOutOfRange {
                            atom: lit,
                            num_atoms,
                        },
                    ));
                }
                current.push(lit as i32);
                open_clause = true;
            }
        }
    }

    let (num_atoms, declared) = header.ok_or_else(|| {
        ParseError::new(input.lines().count().max(1), ParseErrorKind::MissingHeader)
    })?;
    if open_clause {
        return Err(ParseError::new(
            input.lines().count().max(1),
            ParseErrorKind::UnterminatedClause,
        ));
    }
    if clauses.len() != declared {
        return Err(ParseError::new(
            header_line,
            ParseErrorKind::ClauseCountMismatch {
                declared,
                found: clauses.len(),
            },
        ));
    }
    Ok(Cnf { num_atoms, clauses })
}

pub fn write_dimacs_cnf(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_atoms, cnf.clauses.len());
    for clause in &cnf.clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Writes a compiled CNF with its auxiliary-atom map as leading
/// `c map <aux_id> <description>` comment lines. The comments are
/// informational; tools consume the structured [`crate::compile::AtomMap`].
pub fn write_dimacs(compiled: &CompiledCnf) -> String {
    let mut out = String::new();
    for (aux, role) in compiled.atom_map.iter() {
        out.push_str(&format!("c map {} {}\n", aux, role.describe()));
    }
    out.push_str(&write_dimacs_cnf(&Cnf {
        num_atoms: compiled.num_atoms,
        clauses: compiled.clauses.clone(),
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_standard_form() {
        let cnf = Cnf {
            num_atoms: 2,
            clauses: vec![vec![-1, -2], vec![1, 2]],
        };
        assert_eq!(write_dimacs_cnf(&cnf), "p cnf 2 2\n-1 -2 0\n1 2 0\n");
    }

    #[test]
    fn parse_round_trips() {
        let text = "p cnf 2 2\n-1 -2 0\n1 2 0\n";
        let cnf = parse_dimacs(text).unwrap();
        assert_eq!(
            cnf,
            Cnf {
                num_atoms: 2,
                clauses: vec![vec![-1, -2], vec![1, 2]],
            }
        );
        assert_eq!(write_dimacs_cnf(&cnf), text);
    }

    #[test]
    fn empty_cnf() {
        let cnf = Cnf {
            num_atoms: 3,
            clauses: vec![],
        };
        assert_eq!(write_dimacs_cnf(&cnf), "p cnf 3 0\n");
        assert_eq!(parse_dimacs("p cnf 3 0\n").unwrap(), cnf);
    }

    #[test]
    fn rejects_literal_exceeding_header() {
        let err = parse_dimacs("p cnf 2 1\n3 0\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::AtomOutOfRange {
                atom: 3,
                num_atoms: 2
            }
        );
    }

    #[test]
    fn rejects_malformed_header() {
        let err = parse_dimacs("p cnf x 1\n1 0\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::BadHeader(_)));
    }

    #[test]
    fn clauses_may_span_lines() {
        let cnf = parse_dimacs("p cnf 3 1\n1 2\n3 0\n").unwrap();
        assert_eq!(cnf.clauses, vec![vec![1, 2, 3]]);
    }
}
