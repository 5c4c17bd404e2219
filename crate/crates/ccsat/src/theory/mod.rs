//! Clausal theories over propositional atoms and cardinality atoms.
//!
//! Atoms are dense 1-based integer ids; names are optional metadata. A
//! cardinality atom `k X m` carries an ordered set of distinct atoms and
//! optional lower/upper bounds. Bound combinations that make the atom
//! trivially false (`k > |X|`, `k > m`) or trivially true are legal; they are
//! reported by [`Theory::lint`] but never simplified away.

mod normalize;
mod simple;

pub use simple::{classify_simple, NotSimple, NotSimpleReason, SimplePartition, TccConstraint};

use std::fmt;

use rand::Rng;
use thiserror::Error;

/// 1-based identifier of a propositional atom.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AtomId(u32);

impl AtomId {
    /// Creates an atom id. Ids start at 1.
    ///
    /// Panics if `id` is zero.
    pub fn new(id: u32) -> AtomId {
        assert!(id >= 1, "atom ids are 1-based");
        AtomId(id)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based index for array lookups.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Errors raised while constructing theories.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("duplicate atom x{0} inside a cardinality atom")]
    DuplicateAtom(u32),
    #[error("cardinality atom needs at least one bound")]
    MissingBounds,
    #[error("clause must contain at least one literal")]
    EmptyClause,
    #[error("atom x{atom} out of range, theory declares {num_atoms} atoms")]
    AtomOutOfRange { atom: u32, num_atoms: u32 },
}

/// Cardinality atom `k X m`: at least `k` and at most `m` atoms of `X` true.
///
/// Either bound may be absent; an absent lower bound behaves as 0 and an
/// absent upper bound as `|X|`. Present bounds are not clamped: values above
/// `|X|` are legal (a vacuous upper bound, an unsatisfiable lower bound), as
/// is `k > m` (unsatisfiable).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CAtom {
    lower: Option<u32>,
    upper: Option<u32>,
    atoms: Vec<AtomId>,
}

impl CAtom {
    /// Builds a cardinality atom. The atoms must be pairwise distinct and at
    /// least one bound must be present.
    pub fn new(
        lower: Option<u32>,
        upper: Option<u32>,
        atoms: Vec<AtomId>,
    ) -> Result<CAtom, TheoryError> {
        if lower.is_none() && upper.is_none() {
            return Err(TheoryError::MissingBounds);
        }
        let mut seen = atoms.iter().map(|a| a.get()).collect::<Vec<_>>();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(TheoryError::DuplicateAtom(w[0]));
            }
        }
        Ok(CAtom {
            lower,
            upper,
            atoms,
        })
    }

    pub fn lower(&self) -> Option<u32> {
        self.lower
    }

    pub fn upper(&self) -> Option<u32> {
        self.upper
    }

    pub fn atoms(&self) -> &[AtomId] {
        &self.atoms
    }

    /// Number of atoms in the set `X`.
    pub fn size(&self) -> u32 {
        self.atoms.len() as u32
    }

    /// Lower bound with the absent case resolved to 0.
    pub fn effective_lower(&self) -> u32 {
        self.lower.unwrap_or(0)
    }

    /// Upper bound with the absent case resolved to `|X|`.
    pub fn effective_upper(&self) -> u32 {
        self.upper.unwrap_or_else(|| self.size())
    }

    /// Number of atoms of `X` true under `sigma`.
    pub fn true_count(&self, sigma: &Assignment) -> u32 {
        self.atoms.iter().filter(|a| sigma.get(**a)).count() as u32
    }

    /// Satisfaction at a given true count.
    pub fn sat_at(&self, true_count: u32) -> bool {
        self.effective_lower() <= true_count && true_count <= self.effective_upper()
    }

    /// True iff at least `k` and at most `m` atoms of `X` are true.
    pub fn eval(&self, sigma: &Assignment) -> bool {
        self.sat_at(self.true_count(sigma))
    }

    /// Satisfied by every assignment.
    pub fn is_trivially_true(&self) -> bool {
        self.effective_lower() == 0 && self.effective_upper() >= self.size()
    }

    /// Satisfied by no assignment.
    pub fn is_trivially_false(&self) -> bool {
        let lo = self.effective_lower();
        lo > self.size() || lo > self.effective_upper()
    }
}

impl fmt::Display for CAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.lower {
            write!(f, "{k}")?;
        }
        write!(f, "{{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")?;
        if let Some(m) = self.upper {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// A literal: a propositional atom or a cardinality atom, possibly negated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Literal {
    Pos(AtomId),
    Neg(AtomId),
    Card(CAtom),
    NegCard(CAtom),
}

impl Literal {
    pub fn eval(&self, sigma: &Assignment) -> bool {
        match self {
            Literal::Pos(a) => sigma.get(*a),
            Literal::Neg(a) => !sigma.get(*a),
            Literal::Card(c) => c.eval(sigma),
            Literal::NegCard(c) => !c.eval(sigma),
        }
    }

    pub fn is_propositional(&self) -> bool {
        matches!(self, Literal::Pos(_) | Literal::Neg(_))
    }

    /// All atoms mentioned by the literal.
    pub fn atoms(&self) -> &[AtomId] {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => std::slice::from_ref(a),
            Literal::Card(c) | Literal::NegCard(c) => c.atoms(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "-{a}"),
            Literal::Card(c) => write!(f, "{c}"),
            Literal::NegCard(c) => write!(f, "-({c})"),
        }
    }
}

/// Disj, a non-empty disjunction of literals. Duplicate literals are legal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Clause, TheoryError> {
        if literals.is_empty() {
            return Err(TheoryError::EmptyClause);
        }
        Ok(Clause { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    /// Always false: clauses are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// True iff some literal is true under `sigma`.
    pub fn eval(&self, sigma: &Assignment) -> bool {
        self.literals.iter().any(|l| l.eval(sigma))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Findings of [`Theory::lint`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Lint {
    /// A clause contains two identical literals.
    DuplicateLiteral { clause: usize },
    /// A cardinality atom no assignment satisfies (`k > |X|` or `k > m`).
    TriviallyFalseCAtom { clause: usize, catom: String },
    /// A cardinality atom every assignment satisfies.
    TriviallyTrueCAtom { clause: usize, catom: String },
}

impl fmt::Display for Lint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lint::DuplicateLiteral { clause } => {
                write!(f, "clause {clause}: duplicate literal")
            }
            Lint::TriviallyFalseCAtom { clause, catom } => {
                write!(
                    f,
                    "clause {clause}: trivially false cardinality atom {catom}"
                )
            }
            Lint::TriviallyTrueCAtom { clause, catom } => {
                write!(
                    f,
                    "clause {clause}: trivially true cardinality atom {catom}"
                )
            }
        }
    }
}

/// A set of clauses over atoms `1..=num_atoms`.
///
/// Immutable after construction; safe to share across worker threads.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Theory {
    num_atoms: u32,
    clauses: Vec<Clause>,
    atom_names: Option<Vec<String>>,
}

impl Theory {
    pub fn new(num_atoms: u32, clauses: Vec<Clause>) -> Result<Theory, TheoryError> {
        for clause in &clauses {
            for lit in clause.literals() {
                for atom in lit.atoms() {
                    if atom.get() > num_atoms {
                        return Err(TheoryError::AtomOutOfRange {
                            atom: atom.get(),
                            num_atoms,
                        });
                    }
                }
            }
        }
        Ok(Theory {
            num_atoms,
            clauses,
            atom_names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Theory {
        assert_eq!(names.len() as u32, self.num_atoms);
        self.atom_names = Some(names);
        self
    }

    pub fn num_atoms(&self) -> u32 {
        self.num_atoms
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn atom_names(&self) -> Option<&[String]> {
        self.atom_names.as_deref()
    }

    /// Conjunction of clause evaluations.
    pub fn eval(&self, sigma: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.eval(sigma))
    }

    /// Reports duplicate literals and trivially true/false cardinality atoms.
    /// None of these are errors; solvers and compilers handle them.
    pub fn lint(&self) -> Vec<Lint> {
        let mut out = Vec::new();
        for (idx, clause) in self.clauses.iter().enumerate() {
            for (i, lit) in clause.literals().iter().enumerate() {
                if clause.literals()[..i].contains(lit) {
                    out.push(Lint::DuplicateLiteral { clause: idx });
                    break;
                }
            }
            for lit in clause.literals() {
                let c = match lit {
                    Literal::Card(c) | Literal::NegCard(c) => c,
                    _ => continue,
                };
                if c.is_trivially_false() {
                    out.push(Lint::TriviallyFalseCAtom {
                        clause: idx,
                        catom: c.to_string(),
                    });
                } else if c.is_trivially_true() {
                    out.push(Lint::TriviallyTrueCAtom {
                        clause: idx,
                        catom: c.to_string(),
                    });
                }
            }
        }
        out
    }
}

/// Total truth assignment over the atoms `1..=len`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    /// All-false assignment over `num_atoms` atoms.
    pub fn new(num_atoms: u32) -> Assignment {
        Assignment {
            values: vec![false; num_atoms as usize],
        }
    }

    pub fn from_values(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    /// Uniform random assignment.
    pub fn random<R: Rng>(num_atoms: u32, rng: &mut R) -> Assignment {
        Assignment {
            values: (0..num_atoms).map(|_| rng.random()).collect(),
        }
    }

    pub fn len(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, atom: AtomId) -> bool {
        self.values[atom.index()]
    }

    pub fn set(&mut self, atom: AtomId, value: bool) {
        self.values[atom.index()] = value;
    }

    pub fn flip(&mut self, atom: AtomId) {
        self.values[atom.index()] ^= true;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}
