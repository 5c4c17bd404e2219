//! Latin-square instance files: `p latin <n> <d>` header followed by `d`
//! lines `i j k`, each fixing cell `(i,j)` to value `k`.

use std::collections::HashSet;

use super::{ParseError, ParseErrorKind};

/// A partial latin square of order `n`: a set of fixed cells. No two givens
/// share a cell; rows, columns and values are in `1..=n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatinInstance {
    order: u32,
    givens: Vec<(u32, u32, u32)>,
}

/// Construction failures for [`LatinInstance`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatinError {
    #[error("entry ({0},{1},{2}) out of range")]
    OutOfRange(u32, u32, u32),
    #[error("cell ({0},{1}) assigned twice")]
    DuplicateCell(u32, u32),
}

impl LatinInstance {
    pub fn new(order: u32, givens: Vec<(u32, u32, u32)>) -> Result<LatinInstance, LatinError> {
        let mut cells = HashSet::new();
        for &(i, j, k) in &givens {
            let ok = |v: u32| (1..=order).contains(&v);
            if !ok(i) || !ok(j) || !ok(k) {
                return Err(LatinError::OutOfRange(i, j, k));
            }
            if !cells.insert((i, j)) {
                return Err(LatinError::DuplicateCell(i, j));
            }
        }
        Ok(LatinInstance { order, givens })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn givens(&self) -> &[(u32, u32, u32)] {
        &self.givens
    }
}

pub fn parse_latin(input: &str) -> Result<LatinInstance, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut header_line = 0;
    let mut givens: Vec<(u32, u32, u32)> = Vec::new();
    let mut cells: HashSet<(u32, u32)> = HashSet::new();

    for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            let mut it = trimmed.split_whitespace();
            let _p = it.next();
            if it.next() != Some("latin") {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::BadHeader("expected `p latin <n> <d>`".into()),
                ));
            }
            let n = it
                .next()
                .and_then(|t| t.parse::<u32>().ok())
                .ok_or_else(|| {
                    ParseError::new(lineno, ParseErrorKind::BadHeader("bad order".into()))
                })?;
            let d = it
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| {
                    ParseError::new(lineno, ParseErrorKind::BadHeader("bad entry count".into()))
                })?;
            header = Some((n, d));
            header_line = lineno;
            continue;
        }
        let Some((n, _)) = header else {
            return Err(ParseError::new(lineno, ParseErrorKind::MissingHeader));
        };
        let mut nums = trimmed.split_whitespace().map(|t| t.parse::<u32>());
        let mut next = || -> Result<u32, ParseError> {
            nums.next()
                .and_then(|r| r.ok())
                .ok_or_else(|| ParseError::new(lineno, ParseErrorKind::BadToken(trimmed.into())))
        };
        let (i, j, k) = (next()?, next()?, next()?);
        for v in [i, j, k] {
            if v < 1 || v > n {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::LatinValueOutOfRange { value: v, order: n },
                ));
            }
        }
        if !cells.insert((i, j)) {
            return Err(ParseError::new(
                lineno,
                ParseErrorKind::DuplicateCell { row: i, col: j },
            ));
        }
        givens.push((i, j, k));
    }

    let (order, declared) = header.ok_or_else(|| {
        ParseError::new(input.lines().count().max(1), ParseErrorKind::MissingHeader)
    })?;
    if givens.len() != declared {
        return Err(ParseError::new(
            header_line,
            ParseErrorKind::EntryCountMismatch {
                declared,
                found: givens.len(),
            },
        ));
    }
    Ok(LatinInstance { order, givens })
}

pub fn write_latin(inst: &LatinInstance) -> String {
    let mut out = format!("p latin {} {}\n", inst.order(), inst.givens().len());
    for (i, j, k) in inst.givens() {
        out.push_str(&format!("{i} {j} {k}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_given() {
        let inst = parse_latin("p latin 4 1\n1 1 3\n").unwrap();
        assert_eq!(inst.order(), 4);
        assert_eq!(inst.givens(), &[(1, 1, 3)]);
    }

    #[test]
    fn rejects_repeated_cell() {
        let err = parse_latin("p latin 4 2\n1 1 3\n1 1 2\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.kind, ParseErrorKind::DuplicateCell { row: 1, col: 1 });
    }

    #[test]
    fn rejects_value_out_of_range() {
        let err = parse_latin("p latin 4 1\n1 1 5\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::LatinValueOutOfRange { value: 5, order: 4 }
        );
    }

    #[test]
    fn accepts_paper_sized_instances() {
        let mut text = String::from("p latin 30 10\n");
        for i in 1..=10 {
            text.push_str(&format!("{i} {i} {i}\n"));
        }
        let inst = parse_latin(&text).unwrap();
        assert_eq!(inst.order(), 30);
        assert_eq!(inst.givens().len(), 10);
    }

    #[test]
    fn write_is_parse_inverse() {
        let inst = LatinInstance::new(5, vec![(2, 3, 1), (1, 1, 5)]).unwrap();
        assert_eq!(parse_latin(&write_latin(&inst)).unwrap(), inst);
    }
}
