//! DIMACS-style `.col` graph files: `p edge <n> <m>` header, `e u v` lines.

use std::collections::BTreeSet;

use super::{ParseError, ParseErrorKind};

/// Undirected graph over vertices `1..=num_vertices`. Edges are stored
/// normalized (`u < v`), sorted, and deduplicated; self-loops are rejected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphInstance {
    num_vertices: u32,
    edges: Vec<(u32, u32)>,
}

impl GraphInstance {
    pub fn new(num_vertices: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> GraphInstance {
        let set: BTreeSet<(u32, u32)> = edges
            .into_iter()
            .map(|(u, v)| {
                assert!(u != v, "self-loop on vertex {u}");
                assert!(
                    (1..=num_vertices).contains(&u) && (1..=num_vertices).contains(&v),
                    "vertex out of range"
                );
                (u.min(v), u.max(v))
            })
            .collect();
        GraphInstance {
            num_vertices,
            edges: set.into_iter().collect(),
        }
    }

    pub fn num_vertices(&self) -> u32 {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

pub fn parse_col_graph(input: &str) -> Result<GraphInstance, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();

    for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        match it.next() {
            Some("p") => {
                if it.next() != Some("edge") {
                    return Err(ParseError::new(
                        lineno,
                        ParseErrorKind::BadHeader("expected `p edge <n> <m>`".into()),
                    ));
                }
                let n = it
                    .next()
                    .and_then(|t| t.parse::<u32>().ok())
                    .ok_or_else(|| {
                        ParseError::new(
                            lineno,
                            ParseErrorKind::BadHeader("bad vertex count".into()),
                        )
                    })?;
                let m = it
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| {
                        ParseError::new(lineno, ParseErrorKind::BadHeader("bad edge count".into()))
                    })?;
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(ParseError::new(lineno, ParseErrorKind::MissingHeader));
                };
                let u = parse_vertex(it.next(), n, lineno)?;
                let v = parse_vertex(it.next(), n, lineno)?;
                if u == v {
                    return Err(ParseError::new(lineno, ParseErrorKind::SelfLoop(u)));
                }
                edges.insert((u.min(v), u.max(v)));
            }
            Some(tok) => {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::BadToken(tok.into()),
                ));
            }
            None => unreachable!("line is non-empty"),
        }
    }

    let (n, _declared) = header.ok_or_else(|| {
        ParseError::new(input.lines().count().max(1), ParseErrorKind::MissingHeader)
    })?;
    // Many published .col files declare an edge count that disagrees with the
    // deduplicated body, so the declared count is not enforced.
    Ok(GraphInstance {
        num_vertices: n,
        edges: edges.into_iter().collect(),
    })
}

fn parse_vertex(tok: Option<&str>, n: u32, line: usize) -> Result<u32, ParseError> {
    let tok =
        tok.ok_or_else(|| ParseError::new(line, ParseErrorKind::BadToken("<missing>".into())))?;
    let v: u32 = tok
        .parse()
        .map_err(|_| ParseError::new(line, ParseErrorKind::BadToken(tok.into())))?;
    if v < 1 || v > n {
        return Err(ParseError::new(
            line,
            ParseErrorKind::VertexOutOfRange {
                vertex: v,
                num_vertices: n,
            },
        ));
    }
    Ok(v)
}

pub fn write_col_graph(g: &GraphInstance) -> String {
    let mut out = format!("p edge {} {}\n", g.num_vertices(), g.num_edges());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle() {
        let g = parse_col_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn dedups_reversed_edges() {
        let g = parse_col_graph("p edge 2 2\ne 1 2\ne 2 1\n").unwrap();
        assert_eq!(g.edges(), &[(1, 2)]);
    }

    #[test]
    fn rejects_vertex_out_of_range() {
        let err = parse_col_graph("p edge 3 3\ne 4 1\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::VertexOutOfRange {
                vertex: 4,
                num_vertices: 3
            }
        );
    }

    #[test]
    fn rejects_missing_header() {
        let err = parse_col_graph("e 1 2\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeader);
    }

    #[test]
    fn rejects_self_loop() {
        let err = parse_col_graph("p edge 3 1\ne 2 2\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::SelfLoop(2));
    }

    #[test]
    fn write_is_parse_inverse() {
        let g = GraphInstance::new(4, vec![(3, 1), (2, 4), (1, 3)]);
        assert_eq!(parse_col_graph(&write_col_graph(&g)).unwrap(), g);
    }
}
