//! Translations that eliminate cardinality atoms into plain CNF.
//!
//! Three schemes are provided:
//!
//! - [`compile_basic`]: replaces each cardinality atom by its subset-expansion
//!   clauses and distributes over the clause. No auxiliary atoms; output size
//!   is binomial in the bounds, so a clause budget guards the expansion.
//! - [`compile_uc`]: unary counters. For `k X m` over `n` atoms, counter
//!   atoms `b(i,j)` ("at least `j` of the first `i` atoms are true") are
//!   defined by CNF equivalences; the atom is replaced by
//!   `b(n,k) & -b(n,m+1)`. Output size is linear in the largest bound.
//! - [`compile_bc`]: binary counters. A balanced tree of saturating binary
//!   adders sums the indicator bits, clamped just above the largest bound,
//!   and comparator circuits decide the two bound checks. Output size is
//!   logarithmic in the largest bound.
//!
//! Original atoms keep their ids; auxiliary ids are allocated contiguously
//! above them and described by the [`AtomMap`].

mod basic;
mod binary;
mod builder;
mod unary;

pub use basic::{catom_basic_clauses, compile_basic};
pub use binary::compile_bc;
pub use unary::compile_uc;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

/// Default clause budget for the subset expansion.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("expansion needs {required} clauses, budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: u64 },
}

/// Position of a cardinality atom in the source theory.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CAtomRef {
    pub clause: usize,
    pub literal: usize,
}

impl fmt::Display for CAtomRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause{}.lit{}", self.clause, self.literal)
    }
}

/// What an auxiliary atom stands for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AuxRole {
    /// Unary counter atom `b(prefix, threshold)`.
    CounterCell {
        catom: CAtomRef,
        prefix: u32,
        threshold: u32,
    },
    /// Node of a binary adder circuit (sum, carry or saturation bit).
    AdderNode { catom: CAtomRef },
    /// Node of a comparator circuit against a constant.
    ComparatorNode { catom: CAtomRef, constant: u64 },
    /// Definitional literal standing for the whole cardinality atom.
    Definition { catom: CAtomRef },
}

impl AuxRole {
    pub fn describe(&self) -> String {
        match self {
            AuxRole::CounterCell {
                catom,
                prefix,
                threshold,
            } => format!("counter b({prefix},{threshold}) of {catom}"),
            AuxRole::AdderNode { catom } => format!("adder node of {catom}"),
            AuxRole::ComparatorNode { catom, constant } => {
                format!("comparator(>={constant}) node of {catom}")
            }
            AuxRole::Definition { catom } => format!("definition of {catom}"),
        }
    }
}

/// Map from auxiliary atom ids to their roles. Auxiliary ids are contiguous,
/// starting right above the original atoms; every auxiliary atom has exactly
/// one entry.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AtomMap {
    first_aux: u32,
    roles: Vec<AuxRole>,
}

impl AtomMap {
    pub(crate) fn new(first_aux: u32, roles: Vec<AuxRole>) -> AtomMap {
        AtomMap { first_aux, roles }
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn get(&self, aux_atom: u32) -> Option<&AuxRole> {
        aux_atom
            .checked_sub(self.first_aux)
            .and_then(|i| self.roles.get(i as usize))
    }

    /// Iterates `(aux_atom_id, role)` pairs in id order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &AuxRole)> {
        self.roles
            .iter()
            .enumerate()
            .map(|(i, r)| (self.first_aux + i as u32, r))
    }
}

/// Output size counters.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CompileStats {
    pub clauses: usize,
    pub literals: usize,
    pub aux_atoms: usize,
}

/// A plain CNF image of a theory, plus the auxiliary-atom bookkeeping.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompiledCnf {
    /// Atoms of the source theory; they keep their ids.
    pub num_original: u32,
    /// Original plus auxiliary atoms.
    pub num_atoms: u32,
    pub clauses: Vec<Vec<i32>>,
    pub atom_map: AtomMap,
    pub stats: CompileStats,
}

impl CompiledCnf {
    pub(crate) fn from_parts(
        num_original: u32,
        num_atoms: u32,
        clauses: Vec<Vec<i32>>,
        atom_map: AtomMap,
    ) -> CompiledCnf {
        let stats = CompileStats {
            clauses: clauses.len(),
            literals: clauses.iter().map(Vec::len).sum(),
            aux_atoms: (num_atoms - num_original) as usize,
        };
        CompiledCnf {
            num_original,
            num_atoms,
            clauses,
            atom_map,
            stats,
        }
    }

    /// View as a plain CNF.
    pub fn to_cnf(&self) -> crate::io::Cnf {
        crate::io::Cnf {
            num_atoms: self.num_atoms,
            clauses: self.clauses.clone(),
        }
    }

    /// Restriction of a full model to the original atoms.
    pub fn project_model(&self, full: &[bool]) -> Vec<bool> {
        full[..self.num_original as usize].to_vec()
    }
}

/// Projects a set of output models onto the original atoms, deduplicating.
pub fn project_models<I>(compiled: &CompiledCnf, models: I) -> BTreeSet<Vec<bool>>
where
    I: IntoIterator<Item = Vec<bool>>,
{
    models
        .into_iter()
        .map(|m| compiled.project_model(&m))
        .collect()
}

/// Exact binomial coefficient, with `C(n,k) = 0` for `k > n`.
pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut r = BigUint::from(1u32);
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// Effective lower bound clamped into `0..=n+1`. Values above `n+1` behave
/// exactly like `n+1` (the atom is unsatisfiable either way), and `n+1` is
/// the largest value the counting formulas distinguish.
pub(crate) fn clamped_lower(c: &crate::theory::CAtom) -> u32 {
    c.effective_lower().min(c.size() + 1)
}

/// Effective upper bound clamped into `0..=n`; values above `n` are vacuous.
pub(crate) fn clamped_upper(c: &crate::theory::CAtom) -> u32 {
    c.effective_upper().min(c.size())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 0), BigUint::from(1u32));
        assert_eq!(binomial(3, 4), BigUint::ZERO);
        assert_eq!(binomial(200, 104).to_string().len(), 59);
    }

    #[test]
    fn project_models_drops_auxiliaries_and_dedups() {
        let theory = crate::io::parse_ccnf("p ccnf 2 1\nd 1 1 2 1 2 0\n").unwrap();
        let compiled = compile_uc(&theory);
        let total = compiled.num_atoms;
        let full_models = (0..1u64 << total).filter_map(|bits| {
            let vals: Vec<bool> = (0..total).map(|i| bits & (1 << i) != 0).collect();
            compiled
                .clauses
                .iter()
                .all(|cl| {
                    cl.iter()
                        .any(|&l| vals[l.unsigned_abs() as usize - 1] == (l > 0))
                })
                .then_some(vals)
        });
        let projected = project_models(&compiled, full_models);
        let expect: BTreeSet<Vec<bool>> =
            [vec![true, false], vec![false, true]].into_iter().collect();
        assert_eq!(projected, expect);
    }
}
