//! Problem encodings, model decoders, and planted instance generators.
//!
//! Atom numbering is fixed so decoding is deterministic:
//!
//! - coloring: vertex `i`, color `j` -> atom `(i-1)*k + j`
//! - vertex cover: vertex `i` -> atom `i`
//! - latin square: cell `(i,j)` value `v` -> atom `((i-1)*n + (j-1))*n + v`
//!
//! The planted generators construct instances around a hidden witness, so
//! the encoded theories are satisfiable by construction; the witness is
//! returned for test assertions.

mod gen;
mod problems;

pub use gen::{gen_latin_instance, gen_planted_color_graph, gen_planted_cover_graph, GenError};
pub use problems::{
    decode_coloring, decode_cover, decode_latin, encode_coloring, encode_latin,
    encode_vertex_cover, ColoringSolution, CoverSolution, DecodeError, LatinSolution,
};
