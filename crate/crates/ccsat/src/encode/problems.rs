//! The three problem encodings and their decoders.

use thiserror::Error;

use crate::io::{GraphInstance, LatinInstance};
use crate::theory::{Assignment, AtomId, CAtom, Clause, Literal, Theory};

/// Proper coloring: `color[v-1]` is the color of vertex `v`, in `1..=k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoringSolution {
    pub color: Vec<u32>,
}

/// Vertex cover: the chosen vertices, ascending.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverSolution {
    pub chosen: Vec<u32>,
}

/// Completed latin square: `square[i-1][j-1]` is the value of cell `(i,j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatinSolution {
    pub square: Vec<Vec<u32>>,
}

/// A model failed to decode into a valid solution. Since encoders only
/// produce theories whose models decode cleanly, this signals an encoder or
/// solver bug rather than user error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("model does not decode into a valid solution: {0}")]
pub struct DecodeError(pub String);

fn color_atom(vertex: u32, color: u32, k: u32) -> AtomId {
    AtomId::new((vertex - 1) * k + color)
}

fn latin_atom(row: u32, col: u32, value: u32, n: u32) -> AtomId {
    AtomId::new(((row - 1) * n + (col - 1)) * n + value)
}

/// `k`-coloring of `g`: per vertex an exactly-one cardinality atom over its
/// color atoms, per edge and color a binary conflict clause.
pub fn encode_coloring(g: &GraphInstance, k: u32) -> Theory {
    assert!(k >= 1, "at least one color");
    let n = g.num_vertices();
    let mut clauses = Vec::with_capacity(n as usize + g.num_edges() * k as usize);
    for v in 1..=n {
        let atoms = (1..=k).map(|c| color_atom(v, c, k)).collect();
        clauses.push(
            Clause::new(vec![Literal::Card(
                CAtom::new(Some(1), Some(1), atoms).unwrap(),
            )])
            .unwrap(),
        );
    }
    for &(p, r) in g.edges() {
        for c in 1..=k {
            clauses.push(
                Clause::new(vec![
                    Literal::Neg(color_atom(p, c, k)),
                    Literal::Neg(color_atom(r, c, k)),
                ])
                .unwrap(),
            );
        }
    }
    Theory::new(n * k, clauses).unwrap()
}

pub fn decode_coloring(
    g: &GraphInstance,
    k: u32,
    sigma: &Assignment,
) -> Result<ColoringSolution, DecodeError> {
    let mut color = Vec::with_capacity(g.num_vertices() as usize);
    for v in 1..=g.num_vertices() {
        let chosen: Vec<u32> = (1..=k)
            .filter(|&c| sigma.get(color_atom(v, c, k)))
            .collect();
        match chosen.as_slice() {
            [c] => color.push(*c),
            _ => {
                return Err(DecodeError(format!(
                    "vertex {v} has {} colors",
                    chosen.len()
                )))
            }
        }
    }
    for &(p, r) in g.edges() {
        if color[p as usize - 1] == color[r as usize - 1] {
            return Err(DecodeError(format!("edge ({p},{r}) monochromatic")));
        }
    }
    Ok(ColoringSolution { color })
}

/// Vertex cover of size at most `k`: one at-most-`k` cardinality atom over
/// all vertex atoms, one positive binary clause per edge.
pub fn encode_vertex_cover(g: &GraphInstance, k: u32) -> Theory {
    let n = g.num_vertices();
    let mut clauses = Vec::with_capacity(1 + g.num_edges());
    let atoms = (1..=n).map(AtomId::new).collect();
    clauses.push(
        Clause::new(vec![Literal::Card(
            CAtom::new(None, Some(k), atoms).unwrap(),
        )])
        .unwrap(),
    );
    for &(p, r) in g.edges() {
        clauses.push(
            Clause::new(vec![
                Literal::Pos(AtomId::new(p)),
                Literal::Pos(AtomId::new(r)),
            ])
            .unwrap(),
        );
    }
    Theory::new(n, clauses).unwrap()
}

pub fn decode_cover(
    g: &GraphInstance,
    k: u32,
    sigma: &Assignment,
) -> Result<CoverSolution, DecodeError> {
    let chosen: Vec<u32> = (1..=g.num_vertices())
        .filter(|&v| sigma.get(AtomId::new(v)))
        .collect();
    if chosen.len() as u32 > k {
        return Err(DecodeError(format!(
            "cover has {} vertices, bound is {k}",
            chosen.len()
        )));
    }
    for &(p, r) in g.edges() {
        if !chosen.contains(&p) && !chosen.contains(&r) {
            return Err(DecodeError(format!("edge ({p},{r}) uncovered")));
        }
    }
    Ok(CoverSolution { chosen })
}

/// Open latin square: unit clauses for the givens, exactly-one per cell,
/// at-most-one per (row, value) and per (column, value).
pub fn encode_latin(inst: &LatinInstance) -> Theory {
    let n = inst.order();
    let mut clauses = Vec::new();
    for &(i, j, v) in inst.givens() {
        clauses.push(Clause::new(vec![Literal::Pos(latin_atom(i, j, v, n))]).unwrap());
    }
    for i in 1..=n {
        for j in 1..=n {
            let atoms = (1..=n).map(|v| latin_atom(i, j, v, n)).collect();
            clauses.push(
                Clause::new(vec![Literal::Card(
                    CAtom::new(Some(1), Some(1), atoms).unwrap(),
                )])
                .unwrap(),
            );
        }
    }
    for i in 1..=n {
        for v in 1..=n {
            let atoms = (1..=n).map(|j| latin_atom(i, j, v, n)).collect();
            clauses.push(
                Clause::new(vec![Literal::Card(
                    CAtom::new(None, Some(1), atoms).unwrap(),
                )])
                .unwrap(),
            );
        }
    }
    for j in 1..=n {
        for v in 1..=n {
            let atoms = (1..=n).map(|i| latin_atom(i, j, v, n)).collect();
            clauses.push(
                Clause::new(vec![Literal::Card(
                    CAtom::new(None, Some(1), atoms).unwrap(),
                )])
                .unwrap(),
            );
        }
    }
    Theory::new(n * n * n, clauses).unwrap()
}

pub fn decode_latin(
    inst: &LatinInstance,
    sigma: &Assignment,
) -> Result<LatinSolution, DecodeError> {
    let n = inst.order();
    let mut square = vec![vec![0u32; n as usize]; n as usize];
    for i in 1..=n {
        for j in 1..=n {
            let values: Vec<u32> = (1..=n)
                .filter(|&v| sigma.get(latin_atom(i, j, v, n)))
                .collect();
            match values.as_slice() {
                [v] => square[i as usize - 1][j as usize - 1] = *v,
                _ => {
                    return Err(DecodeError(format!(
                        "cell ({i},{j}) has {} values",
                        values.len()
                    )))
                }
            }
        }
    }
    #[allow(clippy::needless_range_loop)]
    for i in 0..n as usize {
        for j in 0..n as usize {
            for jj in j + 1..n as usize {
                if square[i][j] == square[i][jj] {
                    return Err(DecodeError(format!("row {} repeats a value", i + 1)));
                }
                if square[j][i] == square[jj][i] {
                    return Err(DecodeError(format!("column {} repeats a value", i + 1)));
                }
            }
        }
    }
    for &(i, j, v) in inst.givens() {
        if square[i as usize - 1][j as usize - 1] != v {
            return Err(DecodeError(format!("given ({i},{j}) = {v} violated")));
        }
    }
    Ok(LatinSolution { square })
}
