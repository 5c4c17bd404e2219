//! Shared clause emission with constant folding.
//!
//! Gates are encoded as full equivalences so any model of the output forces
//! the auxiliary atoms to their intended values given the original atoms.

use super::{AtomMap, AuxRole};

/// A signed literal or a boolean constant, the currency of the circuit
/// builders. Folding constants here keeps the emitted CNF free of trivial
/// clauses and unused atoms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum LitOrConst {
    Const(bool),
    Lit(i32),
}

pub(crate) use LitOrConst::{Const, Lit};

impl LitOrConst {
    pub(crate) fn negate(self) -> LitOrConst {
        match self {
            Const(b) => Const(!b),
            Lit(l) => Lit(-l),
        }
    }
}

pub(crate) struct Builder {
    num_original: u32,
    next_atom: u32,
    pub(crate) clauses: Vec<Vec<i32>>,
    roles: Vec<AuxRole>,
}

impl Builder {
    pub(crate) fn new(num_original: u32) -> Builder {
        Builder {
            num_original,
            next_atom: num_original,
            clauses: Vec::new(),
            roles: Vec::new(),
        }
    }

    pub(crate) fn fresh(&mut self, role: AuxRole) -> i32 {
        self.next_atom += 1;
        self.roles.push(role);
        self.next_atom as i32
    }

    pub(crate) fn emit(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }

    pub(crate) fn into_parts(self) -> (u32, Vec<Vec<i32>>, AtomMap) {
        (
            self.next_atom,
            self.clauses,
            AtomMap::new(self.num_original + 1, self.roles),
        )
    }

    /// `d <-> a | b`; returns the literal standing for the disjunction.
    pub(crate) fn or2(&mut self, a: LitOrConst, b: LitOrConst, role: AuxRole) -> LitOrConst {
        match (a, b) {
            (Const(true), _) | (_, Const(true)) => Const(true),
            (Const(false), x) | (x, Const(false)) => x,
            (Lit(a), Lit(b)) => {
                let d = self.fresh(role);
                self.emit(vec![-d, a, b]);
                self.emit(vec![-a, d]);
                self.emit(vec![-b, d]);
                Lit(d)
            }
        }
    }

    /// `d <-> a & b`.
    pub(crate) fn and2(&mut self, a: LitOrConst, b: LitOrConst, role: AuxRole) -> LitOrConst {
        match (a, b) {
            (Const(false), _) | (_, Const(false)) => Const(false),
            (Const(true), x) | (x, Const(true)) => x,
            (Lit(a), Lit(b)) => {
                let d = self.fresh(role);
                self.emit(vec![-d, a]);
                self.emit(vec![-d, b]);
                self.emit(vec![-a, -b, d]);
                Lit(d)
            }
        }
    }

    /// `d <-> e | (f & g)`, the unary counter recurrence shape.
    pub(crate) fn or_and(
        &mut self,
        e: LitOrConst,
        f: LitOrConst,
        g: LitOrConst,
        role: AuxRole,
    ) -> LitOrConst {
        match (e, f, g) {
            (Const(true), _, _) => Const(true),
            (e, Const(false), _) | (e, _, Const(false)) => e,
            (e, Const(true), g) => self.or2(e, g, role),
            (e, f, Const(true)) => self.or2(e, f, role),
            (Const(false), f, g) => self.and2(f, g, role),
            (Lit(e), Lit(f), Lit(g)) => {
                let d = self.fresh(role);
                self.emit(vec![-d, e, f]);
                self.emit(vec![-d, e, g]);
                self.emit(vec![-e, d]);
                self.emit(vec![-f, -g, d]);
                Lit(d)
            }
        }
    }

    /// `d <-> a ^ b`.
    pub(crate) fn xor2(&mut self, a: LitOrConst, b: LitOrConst, role: AuxRole) -> LitOrConst {
        match (a, b) {
            (Const(false), x) | (x, Const(false)) => x,
            (Const(true), x) | (x, Const(true)) => x.negate(),
            (Lit(a), Lit(b)) => {
                let d = self.fresh(role);
                self.emit(vec![-d, a, b]);
                self.emit(vec![-d, -a, -b]);
                self.emit(vec![d, -a, b]);
                self.emit(vec![d, a, -b]);
                Lit(d)
            }
        }
    }

    /// `d <-> majority(a, b, c)`, the carry of a full adder.
    pub(crate) fn maj3(
        &mut self,
        a: LitOrConst,
        b: LitOrConst,
        c: LitOrConst,
        role: AuxRole,
    ) -> LitOrConst {
        match (a, b, c) {
            (Const(false), y, z) | (y, Const(false), z) | (y, z, Const(false)) => {
                self.and2(y, z, role)
            }
            (Const(true), y, z) | (y, Const(true), z) | (y, z, Const(true)) => self.or2(y, z, role),
            (Lit(a), Lit(b), Lit(c)) => {
                let d = self.fresh(role);
                self.emit(vec![-a, -b, d]);
                self.emit(vec![-a, -c, d]);
                self.emit(vec![-b, -c, d]);
                self.emit(vec![a, b, -d]);
                self.emit(vec![a, c, -d]);
                self.emit(vec![b, c, -d]);
                Lit(d)
            }
        }
    }
}

/// What a cardinality atom compiles to, before clause assembly.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Replacement {
    Const(bool),
    Single(LitOrConst),
    /// Conjunction of the lower-bound and upper-bound output literals.
    Both(i32, i32),
}

/// Rebuilds the source clauses with cardinality atoms replaced.
///
/// A trivially true replacement drops its clause, a trivially false one
/// drops the literal (possibly leaving an empty, unsatisfiable clause). A
/// two-literal conjunction becomes two unit clauses when the source clause
/// was unit; otherwise a fresh definitional atom ties it into the clause.
pub(crate) fn assemble_clauses(
    builder: &mut Builder,
    theory: &crate::theory::Theory,
    replacement_for: impl Fn(super::CAtomRef) -> Replacement,
) {
    use crate::theory::Literal;
    for (ci, clause) in theory.clauses().iter().enumerate() {
        let unit = clause.len() == 1;
        let mut out: Vec<i32> = Vec::with_capacity(clause.len());
        let mut satisfied = false;
        for (li, lit) in clause.literals().iter().enumerate() {
            match lit {
                Literal::Pos(a) => out.push(a.get() as i32),
                Literal::Neg(a) => out.push(-(a.get() as i32)),
                Literal::NegCard(_) => unreachable!("theory is normalized"),
                Literal::Card(_) => {
                    let catom_ref = super::CAtomRef {
                        clause: ci,
                        literal: li,
                    };
                    match replacement_for(catom_ref) {
                        Replacement::Const(true) | Replacement::Single(Const(true)) => {
                            satisfied = true;
                            break;
                        }
                        Replacement::Const(false) | Replacement::Single(Const(false)) => {}
                        Replacement::Single(Lit(l)) => out.push(l),
                        Replacement::Both(lo, hi) => {
                            if unit {
                                builder.emit(vec![lo]);
                                builder.emit(vec![hi]);
                                satisfied = true; // the units stand in for the clause
                            } else {
                                let d =
                                    builder.fresh(super::AuxRole::Definition { catom: catom_ref });
                                builder.emit(vec![-d, lo]);
                                builder.emit(vec![-d, hi]);
                                builder.emit(vec![-lo, -hi, d]);
                                out.push(d);
                            }
                        }
                    }
                }
            }
        }
        if !satisfied {
            builder.emit(out);
        }
    }
}
