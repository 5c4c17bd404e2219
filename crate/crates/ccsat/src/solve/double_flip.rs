//! Double-flip machinery for simple theories.
//!
//! On a simple theory the counting constraints are pairwise disjoint unit
//! clauses, so a fresh assignment can satisfy all of them by construction
//! and a flip that would break one can be repaired in place: flip an
//! opposite-valued companion from the same constraint, keeping its true
//! count unchanged. Every assignment a try visits then satisfies the whole
//! counting part, and break-counts only need to look at the propositional
//! clauses.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::instance::{SearchState, SolverInstance};
use crate::theory::SimplePartition;

pub struct DfContext {
    /// Per atom: the counting constraint owning it, as an index into the
    /// instance's cardinality occurrences. At most one under disjointness.
    owner: Vec<Option<u32>>,
    /// Per clause: whether it belongs to the propositional part.
    tcnf_mask: Vec<bool>,
    /// Per counting occurrence: inclusive cardinality range `[lo, hi]` an
    /// initial assignment draws from.
    ranges: Vec<Option<(u32, u32)>>,
    feasible: bool,
    num_atoms: u32,
}

impl DfContext {
    /// Prepares double-flip data for an instance whose theory classified
    /// into `partition`.
    pub fn new(inst: &SolverInstance, partition: &SimplePartition) -> DfContext {
        let num_atoms = inst.num_atoms();
        let mut owner = vec![None; num_atoms as usize];
        let mut tcnf_mask = vec![false; inst.num_clauses()];
        for &ci in &partition.tcnf {
            tcnf_mask[ci] = true;
        }

        let mut ranges = vec![None; inst.card_count()];
        let mut feasible = true;
        for tcc in &partition.tcc {
            let occ = inst
                .card_index_of_clause(tcc.clause_index as u32)
                .expect("tcc clause holds one cardinality atom");
            for atom in tcc.catom.atoms() {
                owner[atom.index()] = Some(occ);
            }
            let n = tcc.catom.size();
            let lo = tcc.catom.effective_lower();
            let hi = tcc.catom.effective_upper().min(n);
            if lo > hi {
                feasible = false;
            }
            ranges[occ as usize] = Some((lo, hi));
        }

        DfContext {
            owner,
            tcnf_mask,
            ranges,
            feasible,
            num_atoms,
        }
    }

    /// False when some counting constraint admits no assignment (its bounds
    /// cross); no try can then start.
    pub fn feasible(&self) -> bool {
        self.feasible
    }

    /// Random assignment satisfying every counting constraint: per
    /// constraint, a uniformly drawn target cardinality in `[k, min(m,|X|)]`
    /// realized by a uniformly random subset; free atoms uniform.
    pub fn initial_assignment(&self, inst: &SolverInstance, rng: &mut ChaCha8Rng) -> Vec<bool> {
        assert!(self.feasible, "infeasible counting constraint");
        let mut sigma = vec![None::<bool>; self.num_atoms as usize];
        for (occ, range) in self.ranges.iter().enumerate() {
            let Some((lo, hi)) = *range else { continue };
            let atoms = inst.card_atoms(occ as u32);
            let target = rng.random_range(lo..=hi) as usize;
            for &atom in atoms {
                sigma[atom as usize - 1] = Some(false);
            }
            for i in rand::seq::index::sample(rng, atoms.len(), target) {
                sigma[atoms[i] as usize - 1] = Some(true);
            }
        }
        sigma
            .into_iter()
            .map(|v| v.unwrap_or_else(|| rng.random()))
            .collect()
    }

    /// Standard break-count of a single flip, restricted to the
    /// propositional clauses.
    pub fn break_count(&self, inst: &SolverInstance, state: &SearchState, atom: u32) -> u64 {
        inst.cnf_break(state, atom, Some(&self.tcnf_mask))
    }

    /// The companion-triggering condition: flipping `atom` alone would break
    /// its counting constraint.
    fn breaks_owner(&self, state: &SearchState, atom: u32) -> Option<u32> {
        let occ = self.owner[atom as usize - 1]?;
        let (lo, hi) = self.ranges[occ as usize]?;
        let t = state.true_count(occ);
        let breaking = if state.sigma()[atom as usize - 1] {
            t == lo
        } else {
            t == hi
        };
        breaking.then_some(occ)
    }

    /// Break-count under the joint reading: the breakage of flipping `atom`
    /// together with the best companion that would accompany it.
    pub fn joint_break(&self, inst: &SolverInstance, state: &SearchState, atom: u32) -> u64 {
        match self.breaks_owner(state, atom) {
            None => self.break_count(inst, state, atom),
            Some(occ) => {
                let value = state.sigma()[atom as usize - 1];
                inst.card_atoms(occ)
                    .iter()
                    .filter(|&&b| b != atom && state.sigma()[b as usize - 1] != value)
                    .map(|&b| inst.cnf_break_joint(state, atom, b, Some(&self.tcnf_mask)))
                    .min()
                    .expect("an opposite-valued companion always exists")
            }
        }
    }

    /// Flips `atom`; if that would break its counting constraint, first
    /// flips the best opposite-valued companion (minimum break-count over
    /// the propositional clauses, ties uniform).
    pub fn flip(
        &self,
        inst: &SolverInstance,
        state: &mut SearchState,
        atom: u32,
        joint: bool,
        rng: &mut ChaCha8Rng,
    ) {
        if let Some(occ) = self.breaks_owner(state, atom) {
            let value = state.sigma()[atom as usize - 1];
            let mut best: Vec<u32> = Vec::new();
            let mut best_score: Option<u64> = None;
            for &b in inst.card_atoms(occ) {
                if b == atom || state.sigma()[b as usize - 1] == value {
                    continue;
                }
                let score = if joint {
                    inst.cnf_break_joint(state, atom, b, Some(&self.tcnf_mask))
                } else {
                    inst.cnf_break(state, b, Some(&self.tcnf_mask))
                };
                match best_score {
                    Some(s) if score > s => {}
                    Some(s) if score == s => best.push(b),
                    _ => {
                        best_score = Some(score);
                        best.clear();
                        best.push(b);
                    }
                }
            }
            let companion = best[rng.random_range(0..best.len())];
            inst.flip(state, companion);
        }
        inst.flip(state, atom);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_ccnf;
    use crate::theory::classify_simple;
    use rand::SeedableRng;

    fn setup(text: &str) -> (SolverInstance, DfContext) {
        let theory = parse_ccnf(text).unwrap().normalize();
        let inst = SolverInstance::new(&theory);
        let partition = classify_simple(&theory).unwrap();
        let ctx = DfContext::new(&inst, &partition);
        (inst, ctx)
    }

    #[test]
    fn initial_assignment_forces_exactly_one() {
        let (inst, ctx) = setup("p ccnf 3 1\nd 1 1 3 1 2 3 0\n");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = [0u32; 3];
        for _ in 0..3000 {
            let sigma = ctx.initial_assignment(&inst, &mut rng);
            let trues: Vec<usize> = (0..3).filter(|&i| sigma[i]).collect();
            assert_eq!(trues.len(), 1);
            seen[trues[0]] += 1;
        }
        // roughly uniform across the three atoms
        for count in seen {
            assert!((700..=1300).contains(&count), "skewed: {seen:?}");
        }
    }

    #[test]
    fn initial_assignment_cardinality_uniform_over_range() {
        // {in1..in5}2: target cardinality 0, 1 or 2 with equal probability
        let (inst, ctx) = setup("p ccnf 5 1\nd -1 2 5 1 2 3 4 5 0\n");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws = 10_000usize;
        let mut histogram = [0u32; 6];
        for _ in 0..draws {
            let sigma = ctx.initial_assignment(&inst, &mut rng);
            histogram[sigma.iter().filter(|&&b| b).count()] += 1;
        }
        assert_eq!(histogram[3..].iter().sum::<u32>(), 0);
        // chi-square against uniform over {0,1,2}: 2 degrees of freedom,
        // 13.8 is the 0.999 quantile
        let expected = draws as f64 / 3.0;
        let chi2: f64 = histogram[..3]
            .iter()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 13.8, "chi2 = {chi2}, histogram {histogram:?}");
    }

    #[test]
    fn double_flip_preserves_two_of_four() {
        // 2{a,b,c,d}2, a and b true; flipping a drags in c or d
        let (inst, ctx) = setup("p ccnf 4 1\nd 2 2 4 1 2 3 4 0\n");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut state = inst.new_state(vec![true, true, false, false]);
            ctx.flip(&inst, &mut state, 1, false, &mut rng);
            assert!(!state.sigma()[0]);
            assert!(state.sigma()[2] ^ state.sigma()[3]);
            assert_eq!(state.true_count(0), 2);
        }
    }

    #[test]
    fn single_flip_outside_counting_part() {
        let (inst, ctx) = setup("p ccnf 3 2\nd 1 1 2 1 2 0\n-3 0\n");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state = inst.new_state(vec![true, false, true]);
        ctx.flip(&inst, &mut state, 3, false, &mut rng);
        assert_eq!(state.sigma(), &[true, false, false]);
        assert_eq!(state.true_count(0), 1);
    }

    #[test]
    fn forced_companion_is_the_unique_true_atom() {
        // 1{a,b,c}1 with a true; flipping b (false -> true) at t = m = 1
        // must flip a back
        let (inst, ctx) = setup("p ccnf 3 1\nd 1 1 3 1 2 3 0\n");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut state = inst.new_state(vec![true, false, false]);
        ctx.flip(&inst, &mut state, 2, false, &mut rng);
        assert_eq!(state.sigma(), &[false, true, false]);
    }

    #[test]
    fn companion_minimizes_cnf_break() {
        // 1{a,b,c}1 with a true; flipping a must pick b or c as companion.
        // Clause (-b | d) with d false breaks if b turns true, so c wins.
        let (inst, ctx) = setup("p ccnf 4 2\nd 1 1 3 1 2 3 0\n-2 4 0\n");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let mut state = inst.new_state(vec![true, false, false, false]);
            ctx.flip(&inst, &mut state, 1, false, &mut rng);
            assert_eq!(state.sigma(), &[false, false, true, false]);
        }
    }
}
