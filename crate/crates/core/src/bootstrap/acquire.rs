use std::collections::HashSet;

use rand::Rng;

use super::forest::SurrogateForest;
use crate::ansatz::AngleVector;
use crate::error::{check_len, Error, Result};

const TIE_EPS: f64 = 1e-12;

fn candidate_pool<R: Rng + ?Sized>(
    incumbent: &AngleVector,
    evaluated: &HashSet<AngleVector>,
    pool_size: usize,
    mutation_count: usize,
    rng: &mut R,
) -> Vec<AngleVector> {
    let d = incumbent.len();
    let mut seen = HashSet::new();
    let uniform = (0..pool_size).map(|_| AngleVector::random(d, rng)).collect::<Vec<_>>();
    let mutants = (0..mutation_count)
        .map(|_| {
            let slot = rng.random_range(0..d);
            let cur = incumbent.entries()[slot];
            let k = (cur + rng.random_range(1..4u8)) % 4;
            incumbent.with_slot(slot, k)
        })
        .collect::<Vec<_>>();
    uniform
        .into_iter()
        .chain(mutants)
        .filter(|c| !evaluated.contains(c) && seen.insert(c.clone()))
        .collect()
}

fn min_hamming(c: &AngleVector, evaluated: &HashSet<AngleVector>) -> usize {
    evaluated.iter().map(|e| c.hamming(e)).min().unwrap_or(c.len())
}

/// Picks the unevaluated candidate with the lowest predicted loss. Near-ties go
/// to the candidate farthest (in minimum Hamming distance) from everything
/// already evaluated, then to the earliest in the pool. The pool is redrawn once
/// if every candidate was already evaluated.
pub fn greedy_acquire<R: Rng + ?Sized>(
    forest: &SurrogateForest,
    incumbent: &AngleVector,
    evaluated: &HashSet<AngleVector>,
    pool_size: usize,
    mutation_count: usize,
    rng: &mut R,
) -> Result<AngleVector> {
    if pool_size == 0 {
        return Err(Error::InvalidParameter("pool_size must be at least 1".into()));
    }
    if incumbent.is_empty() {
        return Err(Error::InvalidParameter("angle vectors are empty".into()));
    }
    forest.predict(incumbent)?;
    for e in evaluated {
        check_len(incumbent.len(), e.len())?;
    }

    let mut pool = candidate_pool(incumbent, evaluated, pool_size, mutation_count, rng);
    if pool.is_empty() {
        pool = candidate_pool(incumbent, evaluated, pool_size, mutation_count, rng);
    }
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }

    let means: Vec<f64> = pool.iter().map(|c| forest.predict_unchecked(c.entries()).0).collect();
    let best_mean = means.iter().copied().fold(f64::INFINITY, f64::min);
    let mut choice: Option<(usize, usize)> = None;
    for (i, (c, &m)) in pool.iter().zip(&means).enumerate() {
        if m > best_mean + TIE_EPS {
            continue;
        }
        let h = min_hamming(c, evaluated);
        if choice.is_none_or(|(_, bh)| h > bh) {
            choice = Some((i, h));
        }
    }
    let (i, _) = choice.expect("pool is non-empty");
    Ok(pool.swap_remove(i))
}
