//! Classification of simple theories.
//!
//! A theory is *simple* when it splits into a set of unit clauses of
//! pairwise-disjoint positive cardinality atoms (the counting part) and a set
//! of purely propositional clauses. Additionally every counting constraint
//! `k X m` must leave room to move: `k < |X|` and `m > 0` (effective bounds).
//! The double-flip solver only applies to simple theories.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{AtomId, CAtom, Literal, Theory};

/// A unit cardinality-atom clause of the counting part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TccConstraint {
    pub clause_index: usize,
    pub catom: CAtom,
}

/// Partition of a simple theory.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplePartition {
    /// Unit cardinality-atom clauses with pairwise-disjoint atom sets.
    pub tcc: Vec<TccConstraint>,
    /// Indices of the purely propositional clauses.
    pub tcnf: Vec<usize>,
    /// Atoms that occur in no counting constraint.
    pub free_atoms: Vec<AtomId>,
}

/// Why a theory is not simple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NotSimpleReason {
    /// A clause mixes a cardinality atom with other literals, or contains a
    /// negated cardinality atom.
    NonUnitCardClause,
    /// A counting constraint shares an atom with an earlier one.
    SharedAtom { atom: u32 },
    /// Effective lower bound does not satisfy `k < |X|`.
    LowerBoundTooHigh,
    /// Effective upper bound is 0.
    UpperBoundZero,
}

impl fmt::Display for NotSimpleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotSimpleReason::NonUnitCardClause => {
                write!(f, "cardinality atom in a non-unit or negated position")
            }
            NotSimpleReason::SharedAtom { atom } => {
                write!(f, "atom x{atom} occurs in two counting constraints")
            }
            NotSimpleReason::LowerBoundTooHigh => write!(f, "lower bound not below set size"),
            NotSimpleReason::UpperBoundZero => write!(f, "upper bound is zero"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("theory is not simple: clause {clause_index}: {reason}")]
pub struct NotSimple {
    pub clause_index: usize,
    pub reason: NotSimpleReason,
}

/// Splits a normalized theory into counting and propositional parts, or
/// reports the first clause that violates the simplicity conditions.
pub fn classify_simple(theory: &Theory) -> Result<SimplePartition, NotSimple> {
    let mut tcc = Vec::new();
    let mut tcnf = Vec::new();
    let mut owner: HashMap<u32, usize> = HashMap::new();

    for (idx, clause) in theory.clauses().iter().enumerate() {
        let purely_propositional = clause.literals().iter().all(Literal::is_propositional);
        if purely_propositional {
            tcnf.push(idx);
            continue;
        }
        let catom = match clause.literals() {
            [Literal::Card(c)] => c,
            _ => {
                return Err(NotSimple {
                    clause_index: idx,
                    reason: NotSimpleReason::NonUnitCardClause,
                })
            }
        };
        if catom.effective_lower() >= catom.size() {
            return Err(NotSimple {
                clause_index: idx,
                reason: NotSimpleReason::LowerBoundTooHigh,
            });
        }
        if catom.effective_upper() == 0 {
            return Err(NotSimple {
                clause_index: idx,
                reason: NotSimpleReason::UpperBoundZero,
            });
        }
        for atom in catom.atoms() {
            if owner.insert(atom.get(), idx).is_some() {
                return Err(NotSimple {
                    clause_index: idx,
                    reason: NotSimpleReason::SharedAtom { atom: atom.get() },
                });
            }
        }
        tcc.push(TccConstraint {
            clause_index: idx,
            catom: catom.clone(),
        });
    }

    let free_atoms = (1..=theory.num_atoms())
        .filter(|id| !owner.contains_key(id))
        .map(AtomId::new)
        .collect();

    Ok(SimplePartition {
        tcc,
        tcnf,
        free_atoms,
    })
}
