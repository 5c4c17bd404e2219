//! Unary counting translation.
//!
//! For a cardinality atom over atoms `a_1..a_n`, counter cells `b(i,j)` mean
//! "at least `j` of `a_1..a_i` are true" and satisfy
//!
//! ```text
//! b(i,0) <-> true          b(0,j) <-> false (j >= 1)
//! b(i,j) <-> b(i-1,j) | (b(i-1,j-1) & a_i)
//! ```
//!
//! Constant cells are folded away rather than emitted, and only cells the
//! bound checks actually reach are materialized. The atom `k X m` becomes
//! `b(n,k) & -b(n,m+1)`; a conjunct whose bound is absent or vacuous is
//! dropped.

use std::collections::HashMap;

use super::builder::{assemble_clauses, Builder, Const, Lit, LitOrConst, Replacement};
use super::{clamped_lower, clamped_upper, AuxRole, CAtomRef, CompiledCnf};
use crate::theory::{CAtom, Literal, Theory};

pub fn compile_uc(theory: &Theory) -> CompiledCnf {
    let theory = theory.normalize();
    let mut builder = Builder::new(theory.num_atoms());

    let mut replacements: HashMap<(usize, usize), Replacement> = HashMap::new();
    for (ci, clause) in theory.clauses().iter().enumerate() {
        for (li, lit) in clause.literals().iter().enumerate() {
            if let Literal::Card(c) = lit {
                let catom_ref = CAtomRef {
                    clause: ci,
                    literal: li,
                };
                replacements.insert((ci, li), compile_catom(&mut builder, c, catom_ref));
            }
        }
    }

    assemble_clauses(&mut builder, &theory, |r| {
        replacements[&(r.clause, r.literal)]
    });

    let (num_atoms, clauses, atom_map) = builder.into_parts();
    CompiledCnf::from_parts(theory.num_atoms(), num_atoms, clauses, atom_map)
}

fn compile_catom(builder: &mut Builder, c: &CAtom, catom_ref: CAtomRef) -> Replacement {
    let n = c.size();
    let k = clamped_lower(c);
    let m = clamped_upper(c);

    let mut counters = CounterGrid {
        atoms: c.atoms().iter().map(|a| a.get() as i32).collect(),
        cells: HashMap::new(),
        catom_ref,
    };

    // lower check: at least k true. k = 0 is vacuous, k = n+1 unsatisfiable.
    let lower = match k {
        0 => None,
        k if k > n => Some(Const(false)),
        k => Some(counters.cell(builder, n, k)),
    };
    // upper check: at most m true, i.e. not at least m+1 true. m = n is
    // vacuous (more than n of n atoms is impossible).
    let upper = if m < n {
        Some(counters.cell(builder, n, m + 1).negate())
    } else {
        None
    };

    combine(lower, upper)
}

/// Combines optional lower/upper output literals into a replacement.
pub(crate) fn combine(lower: Option<LitOrConst>, upper: Option<LitOrConst>) -> Replacement {
    let mut conjuncts = Vec::new();
    for part in [lower, upper].into_iter().flatten() {
        match part {
            Const(true) => {}
            Const(false) => return Replacement::Const(false),
            Lit(l) => conjuncts.push(l),
        }
    }
    match conjuncts.as_slice() {
        [] => Replacement::Const(true),
        [l] => Replacement::Single(Lit(*l)),
        [lo, hi] => Replacement::Both(*lo, *hi),
        _ => unreachable!(),
    }
}

struct CounterGrid {
    atoms: Vec<i32>,
    cells: HashMap<(u32, u32), LitOrConst>,
    catom_ref: CAtomRef,
}

impl CounterGrid {
    /// The literal for "at least `j` of the first `i` atoms are true",
    /// materializing the defining clauses on first use.
    fn cell(&mut self, builder: &mut Builder, i: u32, j: u32) -> LitOrConst {
        if j == 0 {
            return Const(true);
        }
        if j > i {
            return Const(false);
        }
        if let Some(&cell) = self.cells.get(&(i, j)) {
            return cell;
        }
        let prev_same = self.cell(builder, i - 1, j);
        let prev_less = self.cell(builder, i - 1, j - 1);
        let atom = Lit(self.atoms[i as usize - 1]);
        let cell = builder.or_and(
            prev_same,
            prev_less,
            atom,
            AuxRole::CounterCell {
                catom: self.catom_ref,
                prefix: i,
                threshold: j,
            },
        );
        self.cells.insert((i, j), cell);
        cell
    }
}
