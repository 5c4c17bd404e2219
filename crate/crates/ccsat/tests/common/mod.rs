//! Shared oracles for the integration suites: independent brute-force
//! machinery the library code under test never touches.

#![allow(dead_code)]

use ccsat::theory::{Assignment, AtomId, CAtom, Clause, Literal, Theory};
use rand::prelude::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Binomial coefficient, computed the slow recursive way on purpose.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// All `size`-subsets of `items`, by recursion.
pub fn subsets(items: &[i32], size: usize) -> Vec<Vec<i32>> {
    if size > items.len() {
        return Vec::new();
    }
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        if items.len() - i < size {
            break;
        }
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Subset-expansion clauses of one cardinality atom, straight from the
/// definition: negative clauses over `(m+1)`-subsets, positive clauses over
/// `(n-k+1)`-subsets, with vacuous bounds omitted and a lower bound above
/// `n+1` treated as `n+1`.
pub fn catom_expansion(c: &CAtom) -> Vec<Vec<i32>> {
    let ids: Vec<i32> = c.atoms().iter().map(|a| a.get() as i32).collect();
    let n = ids.len();
    let m = (c.effective_upper() as usize).min(n);
    let k = (c.effective_lower() as usize).min(n + 1);
    let mut out = Vec::new();
    if m < n {
        for subset in subsets(&ids, m + 1) {
            out.push(subset.into_iter().map(|l| -l).collect());
        }
    }
    if k > 0 {
        for subset in subsets(&ids, n + 1 - k) {
            out.push(subset);
        }
    }
    out
}

/// Full subset-expansion image of a normalized theory: per clause, the cross
/// product over per-literal expansions.
pub fn materialize_expansion(theory: &Theory) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for clause in theory.clauses() {
        let parts: Vec<Vec<Vec<i32>>> = clause
            .literals()
            .iter()
            .map(|lit| match lit {
                Literal::Pos(a) => vec![vec![a.get() as i32]],
                Literal::Neg(a) => vec![vec![-(a.get() as i32)]],
                Literal::Card(c) => catom_expansion(c),
                Literal::NegCard(_) => panic!("expansion oracle needs a normalized theory"),
            })
            .collect();
        cross(&parts, &mut Vec::new(), 0, &mut out);
    }
    out
}

fn cross(parts: &[Vec<Vec<i32>>], prefix: &mut Vec<i32>, at: usize, out: &mut Vec<Vec<i32>>) {
    if at == parts.len() {
        out.push(prefix.clone());
        return;
    }
    for option in &parts[at] {
        let mark = prefix.len();
        prefix.extend_from_slice(option);
        cross(parts, prefix, at + 1, out);
        prefix.truncate(mark);
    }
}

pub fn cnf_clause_sat(clause: &[i32], sigma: &[bool]) -> bool {
    clause
        .iter()
        .any(|&l| sigma[l.unsigned_abs() as usize - 1] == (l > 0))
}

pub fn cnf_sat(clauses: &[Vec<i32>], sigma: &[bool]) -> bool {
    clauses.iter().all(|c| cnf_clause_sat(c, sigma))
}

/// Clauses of `expansion` satisfied under `sigma` and falsified by flipping
/// `atom`, counted clause by clause.
pub fn brute_break_count(expansion: &[Vec<i32>], sigma: &[bool], atom: u32) -> u64 {
    let mut flipped = sigma.to_vec();
    flipped[atom as usize - 1] ^= true;
    expansion
        .iter()
        .filter(|c| cnf_clause_sat(c, sigma) && !cnf_clause_sat(c, &flipped))
        .count() as u64
}

/// Complete satisfiability search with unit propagation, used to decide
/// whether a partial assignment extends to a model of a CNF.
pub fn dpll_sat(clauses: &[Vec<i32>], num_atoms: u32, fixed: &[(u32, bool)]) -> bool {
    let mut assign: Vec<Option<bool>> = vec![None; num_atoms as usize];
    for &(atom, value) in fixed {
        assign[atom as usize - 1] = Some(value);
    }
    dpll(clauses, assign)
}

fn dpll(clauses: &[Vec<i32>], mut assign: Vec<Option<bool>>) -> bool {
    // unit propagation to fixpoint
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unit: Option<i32> = None;
            let mut satisfied = false;
            let mut open = 0;
            for &l in clause {
                match assign[l.unsigned_abs() as usize - 1] {
                    Some(v) if v == (l > 0) => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unit = Some(l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open, unit) {
                (0, _) => return false,
                (1, Some(l)) => {
                    assign[l.unsigned_abs() as usize - 1] = Some(l > 0);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let Some(branch) = assign.iter().position(Option::is_none) else {
        return true;
    };
    for value in [true, false] {
        let mut next = assign.clone();
        next[branch] = Some(value);
        if dpll(clauses, next) {
            return true;
        }
    }
    false
}

/// All models of a theory by exhaustive enumeration of assignments, as
/// bitmasks (bit i = atom i+1).
pub fn theory_models(theory: &Theory) -> Vec<u32> {
    let n = theory.num_atoms();
    assert!(n <= 20, "too many atoms to enumerate");
    (0..1u32 << n)
        .filter(|bits| theory.eval(&assignment_from_bits(*bits, n)))
        .collect()
}

pub fn assignment_from_bits(bits: u32, n: u32) -> Assignment {
    Assignment::from_values((0..n).map(|i| bits & (1 << i) != 0).collect())
}

/// Knobs for the random theory generators.
#[derive(Clone, Copy)]
pub struct TheoryShape {
    pub max_atoms: u32,
    pub max_clauses: usize,
    pub max_clause_len: usize,
    pub max_catom_size: usize,
    /// Chance that a literal is a cardinality atom.
    pub catom_prob: f64,
    /// Chance that a cardinality literal is negated (0 for normalized
    /// theories).
    pub negcard_prob: f64,
}

impl TheoryShape {
    pub fn small_normalized() -> TheoryShape {
        TheoryShape {
            max_atoms: 10,
            max_clauses: 5,
            max_clause_len: 3,
            max_catom_size: 5,
            catom_prob: 0.55,
            negcard_prob: 0.0,
        }
    }
}

/// Random theory; bounds may be absent, zero, crossing, or above the set
/// size, because the machinery has to cope with all of them.
pub fn random_theory(rng: &mut ChaCha8Rng, shape: &TheoryShape) -> Theory {
    let num_atoms = rng.random_range(1..=shape.max_atoms);
    let num_clauses = rng.random_range(1..=shape.max_clauses);
    let clauses = (0..num_clauses)
        .map(|_| {
            let len = rng.random_range(1..=shape.max_clause_len);
            let literals = (0..len)
                .map(|_| {
                    if rng.random::<f64>() < shape.catom_prob {
                        let c = random_catom(rng, num_atoms, shape.max_catom_size);
                        if rng.random::<f64>() < shape.negcard_prob {
                            Literal::NegCard(c)
                        } else {
                            Literal::Card(c)
                        }
                    } else {
                        let atom = AtomId::new(rng.random_range(1..=num_atoms));
                        if rng.random() {
                            Literal::Pos(atom)
                        } else {
                            Literal::Neg(atom)
                        }
                    }
                })
                .collect();
            Clause::new(literals).unwrap()
        })
        .collect();
    Theory::new(num_atoms, clauses).unwrap()
}

pub fn random_catom(rng: &mut ChaCha8Rng, num_atoms: u32, max_size: usize) -> CAtom {
    let size = rng.random_range(1..=max_size.min(num_atoms as usize));
    let mut pool: Vec<u32> = (1..=num_atoms).collect();
    let mut atoms = Vec::with_capacity(size);
    for _ in 0..size {
        let i = rng.random_range(0..pool.len());
        atoms.push(AtomId::new(pool.swap_remove(i)));
    }
    let n = size as u32;
    let lower_present = rng.random::<f64>() < 0.7;
    let upper_present = !lower_present || rng.random::<f64>() < 0.7;
    let lower = lower_present.then(|| rng.random_range(0..=n + 2));
    let upper = upper_present.then(|| rng.random_range(0..=n + 2));
    CAtom::new(lower, upper, atoms).unwrap()
}

/// Random *simple* theory with satisfiable counting constraints: disjoint
/// cardinality atoms with `k < |X|`, `m > 0`, `k <= m`, plus random
/// propositional clauses.
pub fn random_simple_theory(rng: &mut ChaCha8Rng, max_atoms: u32) -> Theory {
    let num_atoms = rng.random_range(4..=max_atoms);
    let mut unused: Vec<u32> = (1..=num_atoms).collect();
    let mut clauses = Vec::new();

    let constraints = rng.random_range(1..=3);
    for _ in 0..constraints {
        if unused.len() < 2 {
            break;
        }
        let size = rng.random_range(2..=unused.len().min(5));
        let mut atoms = Vec::with_capacity(size);
        for _ in 0..size {
            let i = rng.random_range(0..unused.len());
            atoms.push(AtomId::new(unused.swap_remove(i)));
        }
        let n = size as u32;
        // k < n, m > 0, k <= m so an assignment exists
        let k = rng.random_range(0..n);
        let m = rng.random_range(k.max(1)..=n + 1);
        let lower = (k > 0 || rng.random()).then_some(k);
        let upper = (m <= n || rng.random()).then_some(m);
        if lower.is_none() && upper.is_none() {
            continue;
        }
        clauses.push(
            Clause::new(vec![Literal::Card(
                CAtom::new(lower, upper, atoms).unwrap(),
            )])
            .unwrap(),
        );
    }

    for _ in 0..rng.random_range(1..=4) {
        let len = rng.random_range(1..=3);
        let literals = (0..len)
            .map(|_| {
                let atom = AtomId::new(rng.random_range(1..=num_atoms));
                if rng.random() {
                    Literal::Pos(atom)
                } else {
                    Literal::Neg(atom)
                }
            })
            .collect();
        clauses.push(Clause::new(literals).unwrap());
    }

    Theory::new(num_atoms, clauses).unwrap()
}

/// Uniformly random element, for test-side choices.
pub fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("non-empty")
}
