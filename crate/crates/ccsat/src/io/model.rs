//! Solver model output in the usual SAT-solver convention.

use super::{ParseError, ParseErrorKind};
use crate::theory::{Assignment, AtomId};

/// Literal values from a model file, in file order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelValues {
    values: Vec<(u32, bool)>,
}

impl ModelValues {
    pub fn values(&self) -> &[(u32, bool)] {
        &self.values
    }

    /// Builds a total assignment over `num_atoms` atoms. Ids beyond
    /// `num_atoms` (auxiliary atoms of a compiled formula) are ignored;
    /// missing ids are an error.
    pub fn to_assignment(&self, num_atoms: u32) -> Result<Assignment, String> {
        let mut seen = vec![false; num_atoms as usize];
        let mut sigma = Assignment::new(num_atoms);
        for &(atom, value) in &self.values {
            if atom == 0 || atom > num_atoms {
                continue;
            }
            let id = AtomId::new(atom);
            seen[id.index()] = true;
            sigma.set(id, value);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(format!("model does not assign atom x{}", missing + 1));
        }
        Ok(sigma)
    }
}

/// Writes `s SATISFIABLE` with a `v` line of signed atom ids, or `s UNKNOWN`
/// with no value lines.
pub fn write_model(model: Option<&Assignment>) -> String {
    match model {
        None => "s UNKNOWN\n".to_string(),
        Some(sigma) => {
            let mut out = String::from("s SATISFIABLE\nv");
            for (i, &value) in sigma.values().iter().enumerate() {
                let id = i as i64 + 1;
                out.push(' ');
                out.push_str(&(if value { id } else { -id }).to_string());
            }
            out.push_str(" 0\n");
            out
        }
    }
}

/// Parses a model file. Returns `None` for `s UNKNOWN`.
pub fn parse_model(input: &str) -> Result<Option<ModelValues>, ParseError> {
    let mut status: Option<bool> = None;
    let mut values = Vec::new();
    let mut terminated = false;

    for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNKNOWN" => Some(false),
                other => {
                    return Err(ParseError::new(
                        lineno,
                        ParseErrorKind::BadToken(other.into()),
                    ))
                }
            };
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('v') {
            for tok in rest.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| ParseError::new(lineno, ParseErrorKind::BadToken(tok.into())))?;
                if lit == 0 {
                    terminated = true;
                } else {
                    values.push((lit.unsigned_abs() as u32, lit > 0));
                }
            }
            continue;
        }
        return Err(ParseError::new(
            lineno,
            ParseErrorKind::BadToken(trimmed.into()),
        ));
    }

    match status {
        Some(true) => {
            if !terminated {
                return Err(ParseError::new(
                    input.lines().count().max(1),
                    ParseErrorKind::UnterminatedClause,
                ));
            }
            Ok(Some(ModelValues { values }))
        }
        Some(false) => Ok(None),
        None => Err(ParseError::new(1, ParseErrorKind::MissingHeader)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_model_line() {
        let sigma = Assignment::from_values(vec![true, false]);
        assert_eq!(write_model(Some(&sigma)), "s SATISFIABLE\nv 1 -2 0\n");
    }

    #[test]
    fn writes_unknown() {
        assert_eq!(write_model(None), "s UNKNOWN\n");
    }

    #[test]
    fn writes_empty_model() {
        let sigma = Assignment::new(0);
        assert_eq!(write_model(Some(&sigma)), "s SATISFIABLE\nv 0\n");
    }

    #[test]
    fn parse_round_trips() {
        let sigma = Assignment::from_values(vec![true, false, true]);
        let text = write_model(Some(&sigma));
        let parsed = parse_model(&text).unwrap().unwrap();
        assert_eq!(parsed.to_assignment(3).unwrap(), sigma);
    }

    #[test]
    fn parse_unknown() {
        assert_eq!(parse_model("s UNKNOWN\n").unwrap(), None);
    }

    #[test]
    fn assignment_requires_all_atoms() {
        let parsed = parse_model("s SATISFIABLE\nv 1 -2 0\n").unwrap().unwrap();
        assert!(parsed.to_assignment(3).is_err());
    }

    #[test]
    fn auxiliary_atoms_are_ignored() {
        let parsed = parse_model("s SATISFIABLE\nv 1 -2 5 0\n").unwrap().unwrap();
        let sigma = parsed.to_assignment(2).unwrap();
        assert_eq!(sigma.values(), &[true, false]);
    }
}
