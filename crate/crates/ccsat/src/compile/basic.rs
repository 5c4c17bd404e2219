//! Subset-expansion translation.
//!
//! A cardinality atom `k X m` over `n` atoms is equivalent to the CNF with
//! one negative clause per `(m+1)`-subset of `X` (not all of any `m+1` atoms
//! true) and one positive clause per `(n-k+1)`-subset (at least `k` true).
//! That is `C(n,m+1) + C(n,k-1)` clauses. Replacing every cardinality atom by
//! this conjunction and distributing over the clause yields a CNF over the
//! original atoms with exactly the same models.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{binomial, clamped_lower, clamped_upper, AtomMap, CompileError, CompiledCnf};
use crate::theory::{CAtom, Literal, Theory};

/// Number of clauses the expansion of one cardinality atom produces.
pub(crate) fn expansion_count(c: &CAtom) -> BigUint {
    let n = c.size() as u64;
    let m = clamped_upper(c) as u64;
    let k = clamped_lower(c) as u64;
    let negative = if m < n {
        binomial(n, m + 1)
    } else {
        BigUint::ZERO
    };
    let positive = if k > 0 {
        binomial(n, n + 1 - k)
    } else {
        BigUint::ZERO
    };
    negative + positive
}

/// The expansion clauses of one cardinality atom, over its own atom ids.
/// Fails if the exact clause count exceeds `budget`.
pub fn catom_basic_clauses(c: &CAtom, budget: u64) -> Result<Vec<Vec<i32>>, CompileError> {
    let required = expansion_count(c);
    if required > BigUint::from(budget) {
        return Err(CompileError::BudgetExceeded { required, budget });
    }
    Ok(expand_catom(c))
}

fn expand_catom(c: &CAtom) -> Vec<Vec<i32>> {
    let n = c.size();
    let m = clamped_upper(c);
    let k = clamped_lower(c);
    let ids: Vec<i32> = c.atoms().iter().map(|a| a.get() as i32).collect();
    let mut out = Vec::new();
    if m < n {
        for subset in subsets(n, m + 1) {
            out.push(subset.iter().map(|&i| -ids[i as usize]).collect());
        }
    }
    if k > 0 {
        for subset in subsets(n, n + 1 - k) {
            out.push(subset.iter().map(|&i| ids[i as usize]).collect());
        }
    }
    out
}

/// All `size`-subsets of `0..n` in lexicographic order.
fn subsets(n: u32, size: u32) -> Vec<Vec<u32>> {
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: Vec<u32> = (0..size).collect();
    loop {
        out.push(current.clone());
        if size == 0 {
            break;
        }
        // advance to the next combination
        let mut i = size as i64 - 1;
        while i >= 0 && current[i as usize] == n - size + i as u32 {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        current[i] += 1;
        for j in i + 1..size as usize {
            current[j] = current[j - 1] + 1;
        }
    }
    out
}

/// Replaces every cardinality atom by its expansion and distributes, keeping
/// the model set identical. The exact output clause count is checked against
/// `budget` before anything is allocated.
pub fn compile_basic(theory: &Theory, budget: u64) -> Result<CompiledCnf, CompileError> {
    let theory = theory.normalize();

    // exact output size: per clause, the product of per-literal expansion
    // counts (propositional literals contribute one singleton clause each)
    let mut required = BigUint::ZERO;
    for clause in theory.clauses() {
        let mut product = BigUint::from(1u32);
        for lit in clause.literals() {
            match lit {
                Literal::Pos(_) | Literal::Neg(_) => {}
                Literal::Card(c) => product *= expansion_count(c),
                Literal::NegCard(_) => unreachable!("theory is normalized"),
            }
        }
        required += product;
    }
    if required > BigUint::from(budget) {
        return Err(CompileError::BudgetExceeded { required, budget });
    }

    let mut clauses = Vec::with_capacity(required.to_usize().unwrap_or(0));
    for clause in theory.clauses() {
        // per-literal alternatives to distribute over
        let parts: Vec<Vec<Vec<i32>>> = clause
            .literals()
            .iter()
            .map(|lit| match lit {
                Literal::Pos(a) => vec![vec![a.get() as i32]],
                Literal::Neg(a) => vec![vec![-(a.get() as i32)]],
                Literal::Card(c) => expand_catom(c),
                Literal::NegCard(_) => unreachable!(),
            })
            .collect();
        distribute(&parts, &mut clauses);
    }

    Ok(CompiledCnf::from_parts(
        theory.num_atoms(),
        theory.num_atoms(),
        clauses,
        AtomMap::default(),
    ))
}

/// Cross product of the per-literal clause lists, concatenating literals.
fn distribute(parts: &[Vec<Vec<i32>>], out: &mut Vec<Vec<i32>>) {
    if parts.iter().any(|p| p.is_empty()) {
        // some literal is trivially true, the whole clause is
        return;
    }
    let mut choice = vec![0usize; parts.len()];
    loop {
        let mut clause = Vec::new();
        for (part, &c) in parts.iter().zip(&choice) {
            clause.extend_from_slice(&part[c]);
        }
        out.push(clause);
        // advance the mixed-radix counter
        let mut i = parts.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < parts[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{Assignment, AtomId, Clause};

    fn atoms(ids: &[u32]) -> Vec<AtomId> {
        ids.iter().map(|&i| AtomId::new(i)).collect()
    }

    fn catom(lo: Option<u32>, hi: Option<u32>, ids: &[u32]) -> CAtom {
        CAtom::new(lo, hi, atoms(ids)).unwrap()
    }

    #[test]
    fn exactly_one_over_three() {
        let clauses = catom_basic_clauses(&catom(Some(1), Some(1), &[1, 2, 3]), 1000).unwrap();
        assert_eq!(
            clauses,
            vec![vec![-1, -2], vec![-1, -3], vec![-2, -3], vec![1, 2, 3],]
        );
    }

    #[test]
    fn upper_zero_forces_all_false() {
        let clauses = catom_basic_clauses(&catom(None, Some(0), &[1, 2]), 1000).unwrap();
        assert_eq!(clauses, vec![vec![-1], vec![-2]]);
    }

    #[test]
    fn astronomical_expansion_hits_budget() {
        let ids: Vec<u32> = (1..=200).collect();
        let c = catom(None, Some(103), &ids);
        let err = catom_basic_clauses(&c, 1_000_000).unwrap_err();
        let CompileError::BudgetExceeded { required, budget } = err;
        assert_eq!(budget, 1_000_000);
        assert!(required > BigUint::from(u128::MAX));
    }

    #[test]
    fn unsatisfiable_lower_bound_yields_empty_clause() {
        // lower bound above |X|+1 behaves like |X|+1: one empty clause
        for k in [3, 7] {
            let clauses = catom_basic_clauses(&catom(Some(k), None, &[1, 2]), 1000).unwrap();
            assert_eq!(clauses, vec![Vec::<i32>::new()]);
        }
    }

    #[test]
    fn distributes_over_clause() {
        let t = Theory::new(
            3,
            vec![Clause::new(vec![
                Literal::Card(catom(Some(1), Some(1), &[1, 2])),
                Literal::Pos(AtomId::new(3)),
            ])
            .unwrap()],
        )
        .unwrap();
        let out = compile_basic(&t, 1000).unwrap();
        assert_eq!(out.clauses, vec![vec![-1, -2, 3], vec![1, 2, 3]]);
        assert_eq!(out.stats.aux_atoms, 0);
    }

    #[test]
    fn propositional_theory_unchanged() {
        let t = Theory::new(
            2,
            vec![
                Clause::new(vec![
                    Literal::Pos(AtomId::new(1)),
                    Literal::Neg(AtomId::new(2)),
                ])
                .unwrap(),
                Clause::new(vec![Literal::Pos(AtomId::new(2))]).unwrap(),
            ],
        )
        .unwrap();
        let out = compile_basic(&t, 1000).unwrap();
        assert_eq!(out.clauses, vec![vec![1, -2], vec![2]]);
        assert_eq!(out.num_atoms, 2);
    }

    #[test]
    fn model_set_preserved_on_small_theory() {
        let t = Theory::new(
            3,
            vec![
                Clause::new(vec![Literal::Card(catom(Some(1), Some(1), &[1, 2, 3]))]).unwrap(),
                Clause::new(vec![
                    Literal::Neg(AtomId::new(1)),
                    Literal::Pos(AtomId::new(2)),
                ])
                .unwrap(),
            ],
        )
        .unwrap();
        let out = compile_basic(&t, 1000).unwrap();
        for bits in 0..8u32 {
            let vals: Vec<bool> = (0..3).map(|i| bits & (1 << i) != 0).collect();
            let sigma = Assignment::from_values(vals.clone());
            let cnf_sat = out.clauses.iter().all(|cl| {
                cl.iter()
                    .any(|&l| vals[l.unsigned_abs() as usize - 1] == (l > 0))
            });
            assert_eq!(t.eval(&sigma), cnf_sat);
        }
    }

    #[test]
    fn subsets_enumerates_lexicographically() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets(3, 0), vec![Vec::<u32>::new()]);
        assert_eq!(subsets(2, 3), Vec::<Vec<u32>>::new());
    }
}
