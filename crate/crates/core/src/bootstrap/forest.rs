//! Random-forest regressor over categorical quarter-turn slots. Every split
//! tests `slot == level` and is chosen by variance reduction among a random
//! subset of slots drawn per node.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::AngleVector;
use crate::error::{check_len, Error, Result};
use crate::rng::trial_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub min_leaf: usize,
    pub feature_subsample_fraction: f64,
    pub max_depth: usize,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            min_leaf: 2,
            feature_subsample_fraction: 0.5,
            max_depth: 32,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 || self.min_leaf == 0 || self.max_depth == 0 {
            return Err(Error::InvalidParameter(
                "n_trees, min_leaf and max_depth must be positive".into(),
            ));
        }
        if !(self.feature_subsample_fraction > 0.0 && self.feature_subsample_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "feature_subsample_fraction {} outside (0, 1]",
                self.feature_subsample_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf { value: f64, count: usize },
    Split { slot: usize, level: u8, equal: usize, other: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tree {
    nodes: Vec<Node>,
    /// Multiplicity of each training observation in this tree's bootstrap sample.
    in_bag: Vec<u32>,
}

impl Tree {
    fn predict(&self, x: &[u8]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value, .. } => return value,
                Node::Split { slot, level, equal, other } => {
                    i = if x[slot] == level { equal } else { other };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateForest {
    trees: Vec<Tree>,
    n_slots: usize,
    n_train: usize,
    params: ForestParams,
}

struct Builder<'a> {
    xs: &'a [&'a [u8]],
    ys: &'a [f64],
    params: &'a ForestParams,
    mtry: usize,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn leaf(&mut self, idx: &[usize]) -> usize {
        let value = idx.iter().map(|&i| self.ys[i]).sum::<f64>() / idx.len() as f64;
        self.nodes.push(Node::Leaf { value, count: idx.len() });
        self.nodes.len() - 1
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let n = idx.len();
        let min_leaf = self.params.min_leaf;
        if depth >= self.params.max_depth || n < 2 * min_leaf {
            return self.leaf(&idx);
        }
        let (sum, sumsq) = idx.iter().fold((0.0, 0.0), |(s, q), &i| (s + self.ys[i], q + self.ys[i] * self.ys[i]));
        let parent_sse = sumsq - sum * sum / n as f64;
        if parent_sse <= 1e-12 {
            return self.leaf(&idx);
        }

        let n_slots = self.xs[0].len();
        let mut best: Option<(f64, usize, u8)> = None;
        for slot in sample(rng, n_slots, self.mtry).into_iter() {
            let mut cnt = [0usize; 4];
            let mut s = [0.0f64; 4];
            let mut q = [0.0f64; 4];
            for &i in &idx {
                let l = self.xs[i][slot] as usize;
                cnt[l] += 1;
                s[l] += self.ys[i];
                q[l] += self.ys[i] * self.ys[i];
            }
            for level in 0..4 {
                let (ce, co) = (cnt[level], n - cnt[level]);
                if ce < min_leaf || co < min_leaf {
                    continue;
                }
                let (se, qe) = (s[level], q[level]);
                let (so, qo) = (sum - se, sumsq - qe);
                let sse = (qe - se * se / ce as f64) + (qo - so * so / co as f64);
                let gain = parent_sse - sse;
                if gain > 1e-12 && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, slot, level as u8));
                }
            }
        }
        let Some((_, slot, level)) = best else {
            return self.leaf(&idx);
        };
        let (eq, ne): (Vec<usize>, Vec<usize>) = idx.into_iter().partition(|&i| self.xs[i][slot] == level);
        let at = self.nodes.len();
        self.nodes.push(Node::Split { slot, level, equal: 0, other: 0 });
        let equal = self.build(eq, depth + 1, rng);
        let other = self.build(ne, depth + 1, rng);
        self.nodes[at] = Node::Split { slot, level, equal, other };
        at
    }
}

/// Trains `n_trees` trees on bootstrap resamples; tree `t` uses stream `t` of `seed`.
pub fn fit_forest(observations: &[(AngleVector, f64)], params: &ForestParams, seed: u64) -> Result<SurrogateForest> {
    params.validate()?;
    if observations.len() < 2 {
        return Err(Error::TooFewObservations(observations.len()));
    }
    let n_slots = observations[0].0.len();
    for (a, _) in observations {
        check_len(n_slots, a.len())?;
    }
    if n_slots == 0 {
        return Err(Error::InvalidParameter("angle vectors are empty".into()));
    }
    let xs: Vec<&[u8]> = observations.iter().map(|(a, _)| a.entries()).collect();
    let ys: Vec<f64> = observations.iter().map(|(_, y)| *y).collect();
    let mtry = ((params.feature_subsample_fraction * n_slots as f64).ceil() as usize).clamp(1, n_slots);
    let n = observations.len();

    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let mut in_bag = vec![0u32; n];
            let idx: Vec<usize> = (0..n)
                .map(|_| {
                    let i = rng.random_range(0..n);
                    in_bag[i] += 1;
                    i
                })
                .collect();
            let mut b = Builder {
                xs: &xs,
                ys: &ys,
                params,
                mtry,
                nodes: Vec::new(),
            };
            b.build(idx, 0, &mut rng);
            Tree { nodes: b.nodes, in_bag }
        })
        .collect();

    Ok(SurrogateForest {
        trees,
        n_slots,
        n_train: n,
        params: *params,
    })
}

impl SurrogateForest {
    /// Mean and standard deviation of the per-tree predictions.
    pub fn predict(&self, x: &AngleVector) -> Result<(f64, f64)> {
        check_len(self.n_slots, x.len())?;
        Ok(self.predict_unchecked(x.entries()))
    }

    pub(crate) fn predict_unchecked(&self, x: &[u8]) -> (f64, f64) {
        let k = self.trees.len() as f64;
        let (s, q) = self.trees.iter().fold((0.0, 0.0), |(s, q), t| {
            let v = t.predict(x);
            (s + v, q + v * v)
        });
        let mean = s / k;
        let var = (q / k - mean * mean).max(0.0);
        (mean, var.sqrt())
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn params(&self) -> &ForestParams {
        &self.params
    }

    /// Smallest leaf population across all trees (bootstrap multiplicities counted).
    pub fn min_leaf_count(&self) -> usize {
        self.trees
            .iter()
            .flat_map(|t| t.nodes.iter())
            .filter_map(|n| match n {
                Node::Leaf { count, .. } => Some(*count),
                _ => None,
            })
            .min()
            .unwrap_or(0)
    }

    /// Out-of-bag R² over observations left out by at least one tree.
    pub fn oob_r2(&self, observations: &[(AngleVector, f64)]) -> Option<f64> {
        if observations.len() != self.n_train {
            return None;
        }
        let mut pairs = Vec::new();
        for (i, (x, y)) in observations.iter().enumerate() {
            let preds: Vec<f64> = self
                .trees
                .iter()
                .filter(|t| t.in_bag[i] == 0)
                .map(|t| t.predict(x.entries()))
                .collect();
            if !preds.is_empty() {
                pairs.push((*y, preds.iter().sum::<f64>() / preds.len() as f64));
            }
        }
        if pairs.len() < 2 {
            return None;
        }
        let mean = pairs.iter().map(|p| p.0).sum::<f64>() / pairs.len() as f64;
        let ss_tot: f64 = pairs.iter().map(|p| (p.0 - mean).powi(2)).sum();
        let ss_res: f64 = pairs.iter().map(|p| (p.0 - p.1).powi(2)).sum();
        if ss_tot == 0.0 {
            return None;
        }
        Some(1.0 - ss_res / ss_tot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_obs(n: usize, slots: usize, seed: u64, f: impl Fn(&AngleVector) -> f64) -> Vec<(AngleVector, f64)> {
        let mut rng = trial_rng(seed, 0);
        (0..n)
            .map(|_| {
                let a = AngleVector::random(slots, &mut rng);
                let y = f(&a);
                (a, y)
            })
            .collect()
    }

    #[test]
    fn constant_data_predicts_constant() {
        let obs = random_obs(50, 6, 1, |_| 0.75);
        let forest = fit_forest(&obs, &ForestParams::default(), 2).unwrap();
        let mut rng = trial_rng(3, 0);
        for _ in 0..20 {
            let (m, s) = forest.predict(&AngleVector::random(6, &mut rng)).unwrap();
            assert!((m - 0.75).abs() < 1e-12);
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn recovers_single_slot_signal() {
        let obs = random_obs(200, 8, 4, |a| if a.entries()[0] == 0 { 1.0 } else { 0.0 });
        let forest = fit_forest(&obs, &ForestParams::default(), 5).unwrap();
        let r2 = forest.oob_r2(&obs).unwrap();
        assert!(r2 > 0.8, "oob r2 = {r2}");
    }

    #[test]
    fn memorizes_with_min_leaf_one() {
        let obs = random_obs(30, 5, 6, |a| a.entries().iter().map(|&k| k as f64).sum());
        let params = ForestParams {
            n_trees: 50,
            min_leaf: 1,
            feature_subsample_fraction: 1.0,
            max_depth: 64,
        };
        let forest = fit_forest(&obs, &params, 7).unwrap();
        for (x, y) in &obs {
            let (m, s) = forest.predict(x).unwrap();
            assert!((m - y).abs() < 2.0, "{m} vs {y}");
            assert!(s >= 0.0);
        }
    }

    #[test]
    fn deterministic_and_leaf_sizes() {
        let obs = random_obs(80, 6, 8, |a| (a.entries()[1] as f64 - 1.5).abs());
        let a = fit_forest(&obs, &ForestParams::default(), 9).unwrap();
        let b = fit_forest(&obs, &ForestParams::default(), 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_trees(), 100);
        assert!(a.min_leaf_count() >= 2);
    }

    #[test]
    fn errors() {
        let obs = random_obs(1, 3, 0, |_| 0.0);
        assert_eq!(
            fit_forest(&obs, &ForestParams::default(), 0).unwrap_err(),
            Error::TooFewObservations(1)
        );
        let obs = random_obs(5, 3, 0, |_| 0.0);
        let f = fit_forest(&obs, &ForestParams::default(), 0).unwrap();
        assert!(f.predict(&AngleVector::zeros(4)).is_err());
        let bad = ForestParams {
            feature_subsample_fraction: 0.0,
            ..ForestParams::default()
        };
        assert!(fit_forest(&obs, &bad, 0).is_err());
    }
}
