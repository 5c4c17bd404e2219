//! Binary counting translation.
//!
//! The indicator bits of a cardinality atom's set are summed by a balanced
//! tree of ripple-carry adders. With `B` the largest bound that matters,
//! every intermediate word saturates at `B+1` and is clamped to width
//! `ceil(log2(B+2))`, so word sizes never depend on `|X|` alone. Comparator
//! circuits against the constants `k` and `m+1` decide the two bound checks;
//! the atom is replaced like in the unary translation.

use std::collections::{HashMap, VecDeque};

use super::builder::{assemble_clauses, Builder, Const, Lit, LitOrConst, Replacement};
use super::unary::combine;
use super::{clamped_lower, clamped_upper, AuxRole, CAtomRef, CompiledCnf};
use crate::theory::{CAtom, Literal, Theory};

pub fn compile_bc(theory: &Theory) -> CompiledCnf {
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

/// Little-endian word of circuit bits with its largest reachable value.
#[derive(Clone, Debug)]
struct Word {
    bits: Vec<LitOrConst>,
    max_val: u64,
}

fn compile_catom(builder: &mut Builder, c: &CAtom, catom_ref: CAtomRef) -> Replacement {
    let n = c.size();
    let k = clamped_lower(c);
    let m = clamped_upper(c);

    let needs_lower = k >= 1 && k <= n;
    let needs_upper = m < n;

    // trivial lower bounds need no circuitry at all
    if k > n {
        return Replacement::Const(false);
    }
    if !needs_lower && !needs_upper {
        return Replacement::Const(true);
    }

    // saturation threshold: one above the largest constant we compare against
    let bound =
        u64::from(if needs_lower { k } else { 0 }).max(u64::from(if needs_upper { m } else { 0 }));
    let threshold = bound + 1;

    let mut circuit = Circuit {
        builder,
        catom_ref,
        threshold,
    };

    let mut queue: VecDeque<Word> = c
        .atoms()
        .iter()
        .map(|a| Word {
            bits: vec![Lit(a.get() as i32)],
            max_val: 1,
        })
        .collect();
    while queue.len() > 1 {
        let a = queue.pop_front().unwrap();
        let b = queue.pop_front().unwrap();
        queue.push_back(circuit.saturating_add(a, b));
    }
    let sum = queue
        .pop_front()
        .expect("cardinality atoms are non-empty here");

    let lower = needs_lower.then(|| circuit.compare_ge(&sum, u64::from(k)));
    let upper = needs_upper.then(|| circuit.compare_ge(&sum, u64::from(m) + 1).negate());
    combine(lower, upper)
}

struct Circuit<'b> {
    builder: &'b mut Builder,
    catom_ref: CAtomRef,
    threshold: u64,
}

impl Circuit<'_> {
    fn adder_role(&self) -> AuxRole {
        AuxRole::AdderNode {
            catom: self.catom_ref,
        }
    }

    /// `min(a + b, threshold)`.
    fn saturating_add(&mut self, a: Word, b: Word) -> Word {
        let raw = self.ripple_add(&a, &b);
        if raw.max_val <= self.threshold {
            return raw;
        }
        let over = self.compare_ge(&raw, self.threshold);
        // mux each bit between the raw sum and the threshold constant
        let width = width_for(self.threshold);
        let bits = (0..width)
            .map(|i| {
                let raw_bit = raw.bits.get(i as usize).copied().unwrap_or(Const(false));
                if self.threshold & (1 << i) != 0 {
                    self.builder.or2(over, raw_bit, self.adder_role())
                } else {
                    self.builder.and2(over.negate(), raw_bit, self.adder_role())
                }
            })
            .collect();
        Word {
            bits,
            max_val: self.threshold,
        }
    }

    fn ripple_add(&mut self, a: &Word, b: &Word) -> Word {
        let width = a.bits.len().max(b.bits.len());
        let mut bits = Vec::with_capacity(width + 1);
        let mut carry = Const(false);
        for i in 0..width {
            let x = a.bits.get(i).copied().unwrap_or(Const(false));
            let y = b.bits.get(i).copied().unwrap_or(Const(false));
            let xy = self.builder.xor2(x, y, self.adder_role());
            bits.push(self.builder.xor2(xy, carry, self.adder_role()));
            carry = self.builder.maj3(x, y, carry, self.adder_role());
        }
        bits.push(carry);
        Word {
            bits,
            max_val: a.max_val + b.max_val,
        }
    }

    /// Literal for `word >= constant`, walking bits from the most
    /// significant down.
    fn compare_ge(&mut self, word: &Word, constant: u64) -> LitOrConst {
        let role = AuxRole::ComparatorNode {
            catom: self.catom_ref,
            constant,
        };
        let width = (word.bits.len() as u32).max(width_for(constant));
        let mut acc = Const(true); // empty suffix compares equal
        for i in 0..width {
            let w = word.bits.get(i as usize).copied().unwrap_or(Const(false));
            acc = if constant & (1 << i) != 0 {
                // need this bit set and the rest at least equal
                self.builder.and2(w, acc, role.clone())
            } else {
                // a set bit wins outright
                self.builder.or2(w, acc, role.clone())
            };
        }
        acc
    }
}

fn width_for(value: u64) -> u32 {
    64 - value.leading_zeros()
}
