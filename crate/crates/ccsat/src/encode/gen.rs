//! Planted instance generators.
//!
//! Random families in general carry no satisfiability guarantee, which makes
//! success-rate assertions circular. These generators build each instance
//! around a hidden witness instead, so the encoded decision problem is
//! satisfiable by construction; the witness comes back alongside the
//! instance.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{ColoringSolution, CoverSolution, LatinSolution};
use crate::io::{GraphInstance, LatinInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("requested {requested} edges, only {available} available")]
    TooManyEdges { requested: usize, available: usize },
    #[error("requested {requested} givens, grid has {available} cells")]
    TooManyGivens { requested: usize, available: usize },
    #[error("{0}")]
    BadParameters(String),
}

/// Random graph that is `k`-colorable by construction: vertices fall into
/// `k` near-equal classes (contiguous blocks) and the requested number of
/// distinct edges is sampled uniformly among cross-class pairs.
pub fn gen_planted_color_graph(
    n: u32,
    k: u32,
    edges: usize,
    seed: u64,
) -> Result<(GraphInstance, ColoringSolution), GenError> {
    if n == 0 || k == 0 {
        return Err(GenError::BadParameters("need vertices and colors".into()));
    }
    // contiguous blocks; the first `n mod k` classes get the extra vertex
    let base = n / k;
    let extra = n % k;
    let mut color = Vec::with_capacity(n as usize);
    for class in 0..k {
        let size = base + u32::from(class < extra);
        color.extend(std::iter::repeat_n(class + 1, size as usize));
    }

    let class_count = |c: u32| base as u64 + u64::from(c < extra);
    let total_pairs = (n as u64 * (n as u64 - 1)) / 2;
    let same_pairs: u64 = (1..=k)
        .map(|c| class_count(c - 1) * (class_count(c - 1) - 1) / 2)
        .sum();
    let available = (total_pairs - same_pairs) as usize;
    if edges > available {
        return Err(GenError::TooManyEdges {
            requested: edges,
            available,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set: HashSet<(u32, u32)> = HashSet::with_capacity(edges);
    while set.len() < edges {
        let u = rng.random_range(1..=n);
        let v = rng.random_range(1..=n);
        if u == v || color[u as usize - 1] == color[v as usize - 1] {
            continue;
        }
        set.insert((u.min(v), u.max(v)));
    }

    Ok((GraphInstance::new(n, set), ColoringSolution { color }))
}

/// Random graph with a hidden vertex cover: every sampled edge touches the
/// hidden set, so a cover of `cover_size` vertices exists by construction.
pub fn gen_planted_cover_graph(
    n: u32,
    cover_size: u32,
    edges: usize,
    seed: u64,
) -> Result<(GraphInstance, CoverSolution), GenError> {
    if n == 0 || cover_size > n {
        return Err(GenError::BadParameters(
            "cover size must not exceed vertex count".into(),
        ));
    }
    let outside = (n - cover_size) as u64;
    let total_pairs = (n as u64 * (n as u64 - 1)) / 2;
    let outside_pairs = outside * (outside - 1) / 2;
    let available = (total_pairs - outside_pairs) as usize;
    if edges > available {
        return Err(GenError::TooManyEdges {
            requested: edges,
            available,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rand::seq::index::sample(&mut rng, n as usize, cover_size as usize);
    let mut in_cover = vec![false; n as usize];
    for i in chosen {
        in_cover[i] = true;
    }

    let mut set: HashSet<(u32, u32)> = HashSet::with_capacity(edges);
    while set.len() < edges {
        let u = rng.random_range(1..=n);
        let v = rng.random_range(1..=n);
        if u == v || (!in_cover[u as usize - 1] && !in_cover[v as usize - 1]) {
            continue;
        }
        set.insert((u.min(v), u.max(v)));
    }

    let chosen: Vec<u32> = (1..=n).filter(|&v| in_cover[v as usize - 1]).collect();
    Ok((GraphInstance::new(n, set), CoverSolution { chosen }))
}

/// Open latin-square instance revealed from a full random square, so it is
/// always completable. The square comes from the cyclic construction with
/// random row, column and symbol permutations.
pub fn gen_latin_instance(
    n: u32,
    givens: usize,
    seed: u64,
) -> Result<(LatinInstance, LatinSolution), GenError> {
    if n == 0 {
        return Err(GenError::BadParameters("order must be positive".into()));
    }
    if givens > (n * n) as usize {
        return Err(GenError::TooManyGivens {
            requested: givens,
            available: (n * n) as usize,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let row_perm = permutation(n, &mut rng);
    let col_perm = permutation(n, &mut rng);
    let sym_perm = permutation(n, &mut rng);
    let mut square = vec![vec![0u32; n as usize]; n as usize];
    for i in 0..n {
        for j in 0..n {
            let value = (row_perm[i as usize] + col_perm[j as usize]) % n;
            square[i as usize][j as usize] = sym_perm[value as usize] + 1;
        }
    }

    let cells = rand::seq::index::sample(&mut rng, (n * n) as usize, givens);
    let revealed: Vec<(u32, u32, u32)> = cells
        .iter()
        .map(|c| {
            let i = (c as u32) / n + 1;
            let j = (c as u32) % n + 1;
            (i, j, square[i as usize - 1][j as usize - 1])
        })
        .collect();

    let inst = LatinInstance::new(n, revealed).expect("revealed cells are distinct and in range");
    Ok((inst, LatinSolution { square }))
}

fn permutation(n: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut perm: Vec<u32> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
