//! The CCNF theory format.
//!
//! ```text
//! c optional comments
//! p ccnf <num_atoms> <num_clauses>
//! -4 7 0
//! d 1 1 3 1 2 3 0
//! nd -1 1 2 5 6 9 0
//! ```
//!
//! Each clause is a whitespace-separated token sequence terminated by `0`. A
//! nonzero signed integer is a propositional literal. The token `d` starts a
//! positive cardinality atom and `nd` a negated one, each followed by
//! `<lo> <hi> <cnt>` and then `cnt` positive atom ids; `lo`/`hi` are
//! non-negative integers or `-1` for an absent bound. The writer emits one
//! clause per line; the parser accepts any token layout.

use super::{ParseError, ParseErrorKind};
use crate::theory::{AtomId, CAtom, Clause, Literal, Theory, TheoryError};

/// A parsed CCNF file: the theory plus its comment lines (without the
/// leading `c `).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CcnfDocument {
    pub theory: Theory,
    pub comments: Vec<String>,
}

pub fn parse_ccnf(input: &str) -> Result<Theory, ParseError> {
    parse_ccnf_document(input).map(|d| d.theory)
}

pub fn parse_ccnf_document(input: &str) -> Result<CcnfDocument, ParseError> {
    let mut comments = Vec::new();
    let mut header: Option<(u32, usize)> = None;
    let mut header_line = 0;
    // tokens from the clause body, each with its source line
    let mut tokens: Vec<(&str, usize)> = Vec::new();

    for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim_start();
        if trimmed.starts_with('c') && (trimmed.len() == 1 || trimmed[1..].starts_with(' ')) {
            if header.is_none() {
                comments.push(trimmed[1..].strip_prefix(' ').unwrap_or("").to_string());
            }
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
            if it.next() != Some("ccnf") {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::BadHeader("expected `p ccnf <atoms> <clauses>`".into()),
                ));
            }
            let atoms = parse_num::<u32>(it.next(), lineno)?;
            let clauses = parse_num::<usize>(it.next(), lineno)?;
            if it.next().is_some() {
                return Err(ParseError::new(
                    lineno,
                    ParseErrorKind::BadHeader("trailing tokens".into()),
                ));
            }
            header = Some((atoms, clauses));
            header_line = lineno;
            continue;
        }
        if header.is_none() {
            return Err(ParseError::new(lineno, ParseErrorKind::MissingHeader));
        }
        for tok in trimmed.split_whitespace() {
            tokens.push((tok, lineno));
        }
    }

    let (num_atoms, num_clauses) = header.ok_or_else(|| {
        ParseError::new(input.lines().count().max(1), ParseErrorKind::MissingHeader)
    })?;

    let mut clauses = Vec::with_capacity(num_clauses);
    let mut pos = 0;
    while pos < tokens.len() {
        let (clause, next) = parse_clause(&tokens, pos, num_atoms)?;
        clauses.push(clause);
        pos = next;
    }

    if clauses.len() != num_clauses {
        return Err(ParseError::new(
            header_line,
            ParseErrorKind::ClauseCountMismatch {
                declared: num_clauses,
                found: clauses.len(),
            },
        ));
    }

    let theory = Theory::new(num_atoms, clauses).map_err(|e| theory_error(e, header_line))?;
    Ok(CcnfDocument { theory, comments })
}

fn parse_clause(
    tokens: &[(&str, usize)],
    mut pos: usize,
    num_atoms: u32,
) -> Result<(Clause, usize), ParseError> {
    let mut literals = Vec::new();
    let clause_line = tokens[pos].1;
    loop {
        let Some(&(tok, line)) = tokens.get(pos) else {
            return Err(ParseError::new(
                tokens.last().map_or(1, |t| t.1),
                ParseErrorKind::UnterminatedClause,
            ));
        };
        pos += 1;
        match tok {
            "0" => {
                let clause = Clause::new(literals)
                    .map_err(|_| ParseError::new(line, ParseErrorKind::EmptyClause))?;
                return Ok((clause, pos));
            }
            "d" | "nd" => {
                let negated = tok == "nd";
                let (catom, next) = parse_catom(tokens, pos, num_atoms, clause_line)?;
                pos = next;
                literals.push(if negated {
                    Literal::NegCard(catom)
                } else {
                    Literal::Card(catom)
                });
            }
            _ => {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| ParseError::new(line, ParseErrorKind::BadToken(tok.into())))?;
                let atom = lit.unsigned_abs();
                if atom == 0 || atom > num_atoms as u64 {
                    return Err(ParseError::new(
                        line,
                        ParseErrorKind::AtomOutOfRange {
                            atom: lit,
                            num_atoms,
                        },
                    ));
                }
                let id = AtomId::new(atom as u32);
                literals.push(if lit > 0 {
                    Literal::Pos(id)
                } else {
                    Literal::Neg(id)
                });
            }
        }
    }
}

fn parse_catom(
    tokens: &[(&str, usize)],
    mut pos: usize,
    num_atoms: u32,
    clause_line: usize,
) -> Result<(CAtom, usize), ParseError> {
    let mut next = |what: &str| -> Result<(i64, usize), ParseError> {
        let Some(&(tok, line)) = tokens.get(pos) else {
            return Err(ParseError::new(
                clause_line,
                ParseErrorKind::UnterminatedClause,
            ));
        };
        pos += 1;
        let v: i64 = tok.parse().map_err(|_| {
            ParseError::new(
                line,
                ParseErrorKind::BadToken(format!("{tok} (expected {what})")),
            )
        })?;
        Ok((v, line))
    };

    let (lo, lo_line) = next("lower bound")?;
    let (hi, hi_line) = next("upper bound")?;
    let (cnt, cnt_line) = next("atom count")?;

    let lower = bound(lo, lo_line)?;
    let upper = bound(hi, hi_line)?;
    if cnt < 0 {
        return Err(ParseError::new(
            cnt_line,
            ParseErrorKind::BadToken(cnt.to_string()),
        ));
    }

    let mut atoms = Vec::with_capacity(cnt as usize);
    let mut last_line = cnt_line;
    for _ in 0..cnt {
        let (id, line) = next("atom id")?;
        last_line = line;
        if id < 1 || id > num_atoms as i64 {
            return Err(ParseError::new(
                line,
                ParseErrorKind::AtomOutOfRange {
                    atom: id,
                    num_atoms,
                },
            ));
        }
        atoms.push(AtomId::new(id as u32));
    }

    let catom = CAtom::new(lower, upper, atoms).map_err(|e| match e {
        TheoryError::MissingBounds => ParseError::new(last_line, ParseErrorKind::CardMissingBounds),
        TheoryError::DuplicateAtom(_) => {
            ParseError::new(last_line, ParseErrorKind::CardDuplicateAtom)
        }
        _ => ParseError::new(last_line, ParseErrorKind::Other(e.to_string())),
    })?;
    Ok((catom, pos))
}

fn bound(v: i64, line: usize) -> Result<Option<u32>, ParseError> {
    match v {
        -1 => Ok(None),
        v if v >= 0 && v <= u32::MAX as i64 => Ok(Some(v as u32)),
        v => Err(ParseError::new(
            line,
            ParseErrorKind::BadToken(v.to_string()),
        )),
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize) -> Result<T, ParseError> {
    let tok = tok
        .ok_or_else(|| ParseError::new(line, ParseErrorKind::BadHeader("missing count".into())))?;
    tok.parse()
        .map_err(|_| ParseError::new(line, ParseErrorKind::BadToken(tok.into())))
}

fn theory_error(e: TheoryError, line: usize) -> ParseError {
    ParseError::new(line, ParseErrorKind::Other(e.to_string()))
}

pub fn write_ccnf(theory: &Theory) -> String {
    write_ccnf_document(&CcnfDocument {
        theory: theory.clone(),
        comments: Vec::new(),
    })
}

pub fn write_ccnf_document(doc: &CcnfDocument) -> String {
    let mut out = String::new();
    for comment in &doc.comments {
        if comment.is_empty() {
            out.push_str("c\n");
        } else {
            out.push_str("c ");
            out.push_str(comment);
            out.push('\n');
        }
    }
    let theory = &doc.theory;
    out.push_str(&format!(
        "p ccnf {} {}\n",
        theory.num_atoms(),
        theory.clauses().len()
    ));
    for clause in theory.clauses() {
        let mut toks: Vec<String> = Vec::new();
        for lit in clause.literals() {
            match lit {
                Literal::Pos(a) => toks.push(a.get().to_string()),
                Literal::Neg(a) => toks.push(format!("-{}", a.get())),
                Literal::Card(c) | Literal::NegCard(c) => {
                    toks.push(
                        if matches!(lit, Literal::Card(_)) {
                            "d"
                        } else {
                            "nd"
                        }
                        .into(),
                    );
                    toks.push(c.lower().map_or("-1".into(), |v| v.to_string()));
                    toks.push(c.upper().map_or("-1".into(), |v| v.to_string()));
                    toks.push(c.size().to_string());
                    toks.extend(c.atoms().iter().map(|a| a.get().to_string()));
                }
            }
        }
        toks.push("0".into());
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_catom_clause() {
        let t = parse_ccnf("p ccnf 3 1\nd 1 1 3 1 2 3 0\n").unwrap();
        assert_eq!(t.num_atoms(), 3);
        let expect = Clause::new(vec![Literal::Card(
            CAtom::new(
                Some(1),
                Some(1),
                vec![AtomId::new(1), AtomId::new(2), AtomId::new(3)],
            )
            .unwrap(),
        )])
        .unwrap();
        assert_eq!(t.clauses(), &[expect]);
    }

    #[test]
    fn parses_propositional_clause() {
        let t = parse_ccnf("p ccnf 7 1\n-4 7 0\n").unwrap();
        let expect = Clause::new(vec![
            Literal::Neg(AtomId::new(4)),
            Literal::Pos(AtomId::new(7)),
        ])
        .unwrap();
        assert_eq!(t.clauses(), &[expect]);
    }

    #[test]
    fn parses_negated_catom_clause() {
        let t = parse_ccnf("p ccnf 9 1\nnd -1 1 2 5 6 9 0\n").unwrap();
        let expect = Clause::new(vec![
            Literal::NegCard(
                CAtom::new(None, Some(1), vec![AtomId::new(5), AtomId::new(6)]).unwrap(),
            ),
            Literal::Pos(AtomId::new(9)),
        ])
        .unwrap();
        assert_eq!(t.clauses(), &[expect]);
    }

    #[test]
    fn write_is_parse_inverse() {
        let input = "p ccnf 9 3\nd 1 1 3 1 2 3 0\n-4 7 0\nnd -1 1 2 5 6 9 0\n";
        let t = parse_ccnf(input).unwrap();
        assert_eq!(write_ccnf(&t), input);
    }

    #[test]
    fn comments_survive_document_round_trip() {
        let doc = CcnfDocument {
            theory: parse_ccnf("p ccnf 2 1\n1 -2 0\n").unwrap(),
            comments: vec!["generated".into(), String::new()],
        };
        let text = write_ccnf_document(&doc);
        assert_eq!(parse_ccnf_document(&text).unwrap(), doc);
    }

    #[test]
    fn error_carries_line_number() {
        let err = parse_ccnf("p ccnf 2 1\n1 x 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ParseErrorKind::BadToken(_)));
    }

    #[test]
    fn rejects_atom_out_of_range() {
        let err = parse_ccnf("p ccnf 2 1\n3 0\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::AtomOutOfRange {
                atom: 3,
                num_atoms: 2
            }
        );
    }

    #[test]
    fn rejects_unterminated_clause() {
        let err = parse_ccnf("p ccnf 2 1\n1 2\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnterminatedClause);
    }

    #[test]
    fn rejects_clause_count_mismatch() {
        let err = parse_ccnf("p ccnf 2 2\n1 0\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::ClauseCountMismatch {
                declared: 2,
                found: 1
            }
        );
    }

    #[test]
    fn rejects_catom_without_bounds() {
        let err = parse_ccnf("p ccnf 2 1\nd -1 -1 2 1 2 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::CardMissingBounds);
    }
}
