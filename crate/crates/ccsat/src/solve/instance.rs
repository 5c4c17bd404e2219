//! Indexed form of a theory for local search, with incrementally maintained
//! search state.
//!
//! [`SolverInstance`] is immutable after construction and shared across
//! tries; each try owns one [`SearchState`]. A flip updates the state in time
//! proportional to the flipped atom's occurrence count.

use num_bigint::BigUint;
use num_traits::Zero;

use super::falsecount_parts;
use crate::theory::{Assignment, Literal, Theory};

/// One occurrence of a cardinality atom in the theory, with precomputed
/// false-clause tables indexed by true count.
pub(crate) struct CardOccurrence {
    pub clause: u32,
    pub atoms: Vec<u32>,
    sorted_atoms: Vec<u32>,
    pub eff_lower: u32,
    pub eff_upper: u32,
    /// `neg_false[t]`: expansion clauses from the upper bound that are fully
    /// false at true count `t` (`C(t, m+1)`).
    pub neg_false: Vec<BigUint>,
    /// `pos_false[t]`: expansion clauses from the lower bound fully false at
    /// true count `t` (`C(n-t, n-k+1)`).
    pub pos_false: Vec<BigUint>,
}

impl CardOccurrence {
    pub fn contains(&self, atom: u32) -> bool {
        self.sorted_atoms.binary_search(&atom).is_ok()
    }

    /// Satisfaction at a true count (effective bounds, unclamped).
    pub fn sat_at(&self, t: u32) -> bool {
        self.eff_lower <= t && t <= self.eff_upper
    }

    /// Expansion clauses fully false at true count `t`.
    pub fn falsecount(&self, t: u32) -> BigUint {
        &self.neg_false[t as usize] + &self.pos_false[t as usize]
    }
}

/// A literal in indexed form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum SLit {
    /// Propositional literal: atom id, negated flag.
    Prop(u32, bool),
    /// Index into [`SolverInstance::card`].
    Card(u32),
}

pub struct SolverInstance {
    num_atoms: u32,
    pub(crate) clauses: Vec<Vec<SLit>>,
    pub(crate) card: Vec<CardOccurrence>,
    /// Per atom: clauses it occurs in (deduplicated, ascending).
    clauses_of_atom: Vec<Vec<u32>>,
    /// Per atom: propositional occurrences `(clause, negated)`, ascending by
    /// clause.
    prop_occs: Vec<Vec<(u32, bool)>>,
    /// Per atom: cardinality occurrences it belongs to.
    card_occs: Vec<Vec<u32>>,
    /// Per clause: distinct atoms, in order of first appearance.
    candidates: Vec<Vec<u32>>,
}

impl SolverInstance {
    /// Indexes a normalized theory. Negated cardinality atoms are rejected
    /// by construction elsewhere; this panics on them.
    pub fn new(theory: &Theory) -> SolverInstance {
        let num_atoms = theory.num_atoms();
        let mut clauses = Vec::with_capacity(theory.clauses().len());
        let mut card: Vec<CardOccurrence> = Vec::new();
        let mut clauses_of_atom = vec![Vec::new(); num_atoms as usize];
        let mut prop_occs = vec![Vec::new(); num_atoms as usize];
        let mut card_occs = vec![Vec::new(); num_atoms as usize];
        let mut candidates = Vec::with_capacity(theory.clauses().len());

        for (ci, clause) in theory.clauses().iter().enumerate() {
            let ci = ci as u32;
            let mut slits = Vec::with_capacity(clause.len());
            let mut clause_atoms: Vec<u32> = Vec::new();
            let mut note_atom = |atom: u32, clause_atoms: &mut Vec<u32>| {
                if !clause_atoms.contains(&atom) {
                    clause_atoms.push(atom);
                }
                let list: &mut Vec<u32> = &mut clauses_of_atom[atom as usize - 1];
                if list.last() != Some(&ci) {
                    list.push(ci);
                }
            };
            for lit in clause.literals() {
                match lit {
                    Literal::Pos(a) | Literal::Neg(a) => {
                        let atom = a.get();
                        let negated = matches!(lit, Literal::Neg(_));
                        slits.push(SLit::Prop(atom, negated));
                        prop_occs[atom as usize - 1].push((ci, negated));
                        note_atom(atom, &mut clause_atoms);
                    }
                    Literal::Card(c) => {
                        let idx = card.len() as u32;
                        let n = c.size() as u64;
                        let (m_hat, k_hat) = (
                            c.effective_upper().min(c.size()) as u64,
                            c.effective_lower().min(c.size() + 1) as u64,
                        );
                        let (neg_false, pos_false) = falsecount_parts(n, k_hat, m_hat);
                        let atoms: Vec<u32> = c.atoms().iter().map(|a| a.get()).collect();
                        let mut sorted_atoms = atoms.clone();
                        sorted_atoms.sort_unstable();
                        for &atom in &atoms {
                            card_occs[atom as usize - 1].push(idx);
                            note_atom(atom, &mut clause_atoms);
                        }
                        card.push(CardOccurrence {
                            clause: ci,
                            atoms,
                            sorted_atoms,
                            eff_lower: c.effective_lower(),
                            eff_upper: c.effective_upper(),
                            neg_false,
                            pos_false,
                        });
                        slits.push(SLit::Card(idx));
                    }
                    Literal::NegCard(_) => {
                        panic!("solver requires a normalized theory")
                    }
                }
            }
            clauses.push(slits);
            candidates.push(clause_atoms);
        }

        SolverInstance {
            num_atoms,
            clauses,
            card,
            clauses_of_atom,
            prop_occs,
            card_occs,
            candidates,
        }
    }

    pub fn num_atoms(&self) -> u32 {
        self.num_atoms
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Distinct atoms of a clause, the flip candidates when it is selected.
    pub fn candidates(&self, clause: u32) -> &[u32] {
        &self.candidates[clause as usize]
    }

    /// Number of cardinality-atom occurrences in the theory.
    pub fn card_count(&self) -> usize {
        self.card.len()
    }

    /// Atom set of a cardinality occurrence, in source order.
    pub fn card_atoms(&self, occurrence: u32) -> &[u32] {
        &self.card[occurrence as usize].atoms
    }

    /// Whether a cardinality occurrence is satisfied in `state`.
    pub fn card_satisfied(&self, state: &SearchState, occurrence: u32) -> bool {
        self.card[occurrence as usize].sat_at(state.true_count(occurrence))
    }

    /// Effective bounds of a cardinality occurrence.
    pub fn card_bounds(&self, occurrence: u32) -> (u32, u32) {
        let occ = &self.card[occurrence as usize];
        (occ.eff_lower, occ.eff_upper)
    }

    /// The occurrence index of the cardinality atom in `clause`, if any.
    /// Occurrences are stored in clause order.
    pub(crate) fn card_index_of_clause(&self, clause: u32) -> Option<u32> {
        self.card
            .binary_search_by_key(&clause, |occ| occ.clause)
            .ok()
            .map(|i| i as u32)
    }

    /// Builds the search state for an assignment by full recomputation.
    pub fn new_state(&self, sigma: Vec<bool>) -> SearchState {
        assert_eq!(sigma.len(), self.num_atoms as usize);
        let true_count: Vec<u32> = self
            .card
            .iter()
            .map(|c| c.atoms.iter().filter(|&&a| sigma[a as usize - 1]).count() as u32)
            .collect();
        let mut state = SearchState {
            sigma,
            true_count,
            sat_lits: vec![0; self.clauses.len()],
            unsat: Vec::new(),
            unsat_pos: vec![u32::MAX; self.clauses.len()],
        };
        for (ci, clause) in self.clauses.iter().enumerate() {
            let mut sat = 0;
            for lit in clause {
                if state.lit_true(self, *lit) {
                    sat += 1;
                }
            }
            state.sat_lits[ci] = sat;
            if sat == 0 {
                state.unsat_pos[ci] = state.unsat.len() as u32;
                state.unsat.push(ci as u32);
            }
        }
        state
    }

    /// Flips one atom, updating counts and the unsatisfied set.
    pub fn flip(&self, state: &mut SearchState, atom: u32) {
        let was_true = state.sigma[atom as usize - 1];
        state.sigma[atom as usize - 1] = !was_true;

        for &ci in &self.card_occs[atom as usize - 1] {
            let occ = &self.card[ci as usize];
            let t = state.true_count[ci as usize];
            let t_new = if was_true { t - 1 } else { t + 1 };
            state.true_count[ci as usize] = t_new;
            match (occ.sat_at(t), occ.sat_at(t_new)) {
                (false, true) => self.gain_lit(state, occ.clause),
                (true, false) => self.lose_lit(state, occ.clause),
                _ => {}
            }
        }
        for &(ci, negated) in &self.prop_occs[atom as usize - 1] {
            // literal value after the flip
            if !was_true != negated {
                self.gain_lit(state, ci);
            } else {
                self.lose_lit(state, ci);
            }
        }
    }

    fn gain_lit(&self, state: &mut SearchState, clause: u32) {
        let sat = &mut state.sat_lits[clause as usize];
        *sat += 1;
        if *sat == 1 {
            // left the unsatisfied set
            let pos = state.unsat_pos[clause as usize];
            let last = *state.unsat.last().expect("clause was unsatisfied");
            state.unsat.swap_remove(pos as usize);
            if last != clause {
                state.unsat_pos[last as usize] = pos;
            }
            state.unsat_pos[clause as usize] = u32::MAX;
        }
    }

    fn lose_lit(&self, state: &mut SearchState, clause: u32) {
        let sat = &mut state.sat_lits[clause as usize];
        *sat -= 1;
        if *sat == 0 {
            state.unsat_pos[clause as usize] = state.unsat.len() as u32;
            state.unsat.push(clause);
        }
    }

    /// Expansion clauses of `clause` that are fully false under the current
    /// assignment: the product over literals of per-literal false counts.
    pub fn virtual_unsat_count(&self, state: &SearchState, clause: u32) -> BigUint {
        let mut product = BigUint::from(1u32);
        for lit in &self.clauses[clause as usize] {
            match *lit {
                SLit::Prop(atom, negated) => {
                    if state.sigma[atom as usize - 1] != negated {
                        return BigUint::ZERO;
                    }
                }
                SLit::Card(ci) => {
                    let f = self.card[ci as usize].falsecount(state.true_count[ci as usize]);
                    if f.is_zero() {
                        return BigUint::ZERO;
                    }
                    product *= f;
                }
            }
        }
        product
    }

    /// Virtual break-count of flipping `atom`: how many expansion clauses of
    /// the subset-expansion image are satisfied now and false after the flip.
    ///
    /// Per clause containing the atom this is `U' - Z`, where `U'` is the
    /// number of expansion clauses fully false after the flip and `Z` counts
    /// those fully false after the flip that do not mention the atom (which
    /// therefore were false before too).
    pub fn vb_break(&self, state: &SearchState, atom: u32) -> BigUint {
        let new_val = !state.sigma[atom as usize - 1];
        let mut total = BigUint::ZERO;

        'clauses: for &ci in &self.clauses_of_atom[atom as usize - 1] {
            let mut u = BigUint::from(1u32);
            let mut z = BigUint::from(1u32);
            let mut z_zero = false;
            for lit in &self.clauses[ci as usize] {
                match *lit {
                    SLit::Prop(a, negated) => {
                        let val = if a == atom {
                            new_val
                        } else {
                            state.sigma[a as usize - 1]
                        };
                        if val != negated {
                            // literal true after the flip: factor 0
                            continue 'clauses;
                        }
                        if a == atom {
                            // the lone expansion clause of this literal
                            // mentions the atom
                            z_zero = true;
                        }
                    }
                    SLit::Card(cc) => {
                        let occ = &self.card[cc as usize];
                        let t = state.true_count[cc as usize];
                        if occ.contains(atom) {
                            let t_new = if new_val { t + 1 } else { t - 1 };
                            let f = occ.falsecount(t_new);
                            if f.is_zero() {
                                continue 'clauses;
                            }
                            u *= &f;
                            if !z_zero {
                                // fully-false expansion clauses avoiding the
                                // atom: choose only among the other members
                                let zf = if new_val {
                                    &occ.neg_false[t_new as usize - 1]
                                        + &occ.pos_false[t_new as usize]
                                } else {
                                    &occ.neg_false[t_new as usize]
                                        + &occ.pos_false[t_new as usize + 1]
                                };
                                if zf.is_zero() {
                                    z_zero = true;
                                } else {
                                    z *= zf;
                                }
                            }
                        } else {
                            let f = occ.falsecount(t);
                            if f.is_zero() {
                                continue 'clauses;
                            }
                            u *= &f;
                            if !z_zero {
                                z *= f;
                            }
                        }
                    }
                }
            }
            if z_zero {
                total += u;
            } else {
                total += u - z;
            }
        }
        total
    }

    /// Standard break-count: clauses (restricted by `mask` if given)
    /// satisfied now and falsified by flipping `atom` alone.
    pub fn cnf_break(&self, state: &SearchState, atom: u32, mask: Option<&[bool]>) -> u64 {
        let mut count = 0;
        let occs = &self.prop_occs[atom as usize - 1];
        let mut i = 0;
        while i < occs.len() {
            let clause = occs[i].0;
            let mut gain = 0i64;
            let mut j = i;
            while j < occs.len() && occs[j].0 == clause {
                let (_, negated) = occs[j];
                if state.sigma[atom as usize - 1] != negated {
                    gain -= 1;
                } else {
                    gain += 1;
                }
                j += 1;
            }
            i = j;
            if mask.is_some_and(|m| !m[clause as usize]) {
                continue;
            }
            let sat = state.sat_lits[clause as usize] as i64;
            if sat > 0 && sat + gain == 0 {
                count += 1;
            }
        }
        count
    }

    /// Break-count of flipping `atom_a` and `atom_b` together, over the
    /// clauses `mask` selects.
    pub fn cnf_break_joint(
        &self,
        state: &SearchState,
        atom_a: u32,
        atom_b: u32,
        mask: Option<&[bool]>,
    ) -> u64 {
        let occs_a = &self.prop_occs[atom_a as usize - 1];
        let occs_b = &self.prop_occs[atom_b as usize - 1];
        let delta = |occs: &[(u32, bool)], idx: &mut usize, clause: u32, atom: u32| -> i64 {
            let mut d = 0;
            while *idx < occs.len() && occs[*idx].0 == clause {
                let (_, negated) = occs[*idx];
                if state.sigma[atom as usize - 1] != negated {
                    d -= 1;
                } else {
                    d += 1;
                }
                *idx += 1;
            }
            d
        };
        let mut count = 0;
        let (mut i, mut j) = (0, 0);
        while i < occs_a.len() || j < occs_b.len() {
            let ca = occs_a.get(i).map(|o| o.0).unwrap_or(u32::MAX);
            let cb = occs_b.get(j).map(|o| o.0).unwrap_or(u32::MAX);
            let clause = ca.min(cb);
            let mut gain = 0i64;
            if ca == clause {
                gain += delta(occs_a, &mut i, clause, atom_a);
            }
            if cb == clause {
                gain += delta(occs_b, &mut j, clause, atom_b);
            }
            if mask.is_some_and(|m| !m[clause as usize]) {
                continue;
            }
            let sat = state.sat_lits[clause as usize] as i64;
            if sat > 0 && sat + gain == 0 {
                count += 1;
            }
        }
        count
    }
}

/// Mutable search position: the assignment plus derived counters.
pub struct SearchState {
    pub(crate) sigma: Vec<bool>,
    /// Per cardinality occurrence: atoms of its set currently true.
    pub(crate) true_count: Vec<u32>,
    /// Per clause: literals currently true.
    pub(crate) sat_lits: Vec<u32>,
    /// Clauses with no true literal.
    pub(crate) unsat: Vec<u32>,
    unsat_pos: Vec<u32>,
}

impl SearchState {
    fn lit_true(&self, inst: &SolverInstance, lit: SLit) -> bool {
        match lit {
            SLit::Prop(atom, negated) => self.sigma[atom as usize - 1] != negated,
            SLit::Card(ci) => inst.card[ci as usize].sat_at(self.true_count[ci as usize]),
        }
    }

    pub fn sigma(&self) -> &[bool] {
        &self.sigma
    }

    pub fn is_model(&self) -> bool {
        self.unsat.is_empty()
    }

    pub fn num_unsat(&self) -> usize {
        self.unsat.len()
    }

    pub fn unsat_clauses(&self) -> &[u32] {
        &self.unsat
    }

    pub fn true_count(&self, card_occurrence: u32) -> u32 {
        self.true_count[card_occurrence as usize]
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::from_values(self.sigma.clone())
    }
}
