//! Two-phase bootstrap over the discrete angle space: a uniform sampling
//! phase, then rounds of forest fitting and greedy acquisition.

mod acquire;
mod ei;
mod forest;
mod trace;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use acquire::greedy_acquire;
pub use ei::expected_improvement;
pub use forest::{fit_forest, ForestParams, SurrogateForest};
pub use trace::{trace_metrics, Phase, Trace, TraceMetrics, TraceRecord};

use crate::ansatz::{AngleVector, AnsatzSpec};
use crate::dataset::{mse_loss, Dataset};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::rng::{derive_seed, trial_rng};

const SALT_SAMPLE: u64 = 1;
const SALT_ACQUIRE: u64 = 2;
const SALT_FOREST: u64 = 3;
const SALT_RANDOM: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub sample_budget: usize,
    pub opt_iterations: usize,
    pub forest: ForestParams,
    pub pool_size: usize,
    pub mutation_count: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            sample_budget: 200,
            opt_iterations: 50,
            forest: ForestParams::default(),
            pool_size: 512,
            mutation_count: 64,
            seed: 0,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_budget == 0 {
            return Err(Error::InvalidParameter("sample_budget must be at least 1".into()));
        }
        if self.pool_size == 0 {
            return Err(Error::InvalidParameter("pool_size must be at least 1".into()));
        }
        if self.opt_iterations > 0 && self.sample_budget < 2 {
            return Err(Error::InvalidParameter(
                "the surrogate needs sample_budget >= 2 when opt_iterations > 0".into(),
            ));
        }
        self.forest.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapOutcome {
    pub trace: Trace,
    pub best: AngleVector,
    pub best_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min_loss: f64,
    pub sample_variance: f64,
    pub sample_variance_defined: bool,
    pub best_angles: AngleVector,
    pub config: BootstrapConfig,
    pub seed: u64,
}

impl BootstrapOutcome {
    fn from_trace(trace: Trace) -> Self {
        let best = trace.best().expect("trace is non-empty");
        Self {
            best: best.angles.clone(),
            best_loss: best.loss,
            trace,
        }
    }

    pub fn summary(&self, config: &BootstrapConfig) -> Summary {
        let m = trace_metrics(&self.trace).expect("trace is non-empty");
        Summary {
            min_loss: m.min_loss,
            sample_variance: m.sample_variance,
            sample_variance_defined: m.variance_defined,
            best_angles: self.best.clone(),
            config: *config,
            seed: config.seed,
        }
    }
}

fn evaluate<F>(loss: &F, a: &AngleVector) -> Result<f64>
where
    F: Fn(&AngleVector) -> Result<f64> + Sync,
{
    loss(a).map_err(|e| Error::Evaluation {
        angles: a.entries().to_vec(),
        reason: e.to_string(),
    })
}

fn uniform_batch<F>(seed: u64, count: usize, n_slots: usize, loss: &F) -> Result<Vec<(AngleVector, f64)>>
where
    F: Fn(&AngleVector) -> Result<f64> + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|i| {
            let a = AngleVector::random(n_slots, &mut trial_rng(seed, i as u64));
            let y = evaluate(loss, &a)?;
            Ok((a, y))
        })
        .collect()
}

/// Evaluates `sample_budget` uniform vectors of length `n_slots`. Vector `i`
/// depends only on the seed and `i`.
pub fn sample_phase<F>(cfg: &BootstrapConfig, n_slots: usize, loss: &F) -> Result<Trace>
where
    F: Fn(&AngleVector) -> Result<f64> + Sync,
{
    if cfg.sample_budget == 0 {
        return Err(Error::InvalidParameter("sample_budget must be at least 1".into()));
    }
    let mut trace = Trace::new();
    for (a, y) in uniform_batch(derive_seed(cfg.seed, SALT_SAMPLE), cfg.sample_budget, n_slots, loss)? {
        trace.push(Phase::Sample, a, y);
    }
    Ok(trace)
}

pub fn run_bootstrap_with<F>(cfg: &BootstrapConfig, n_slots: usize, loss: &F) -> Result<BootstrapOutcome>
where
    F: Fn(&AngleVector) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let mut trace = sample_phase(cfg, n_slots, loss)?;
    let mut observations: Vec<(AngleVector, f64)> =
        trace.records().iter().map(|r| (r.angles.clone(), r.loss)).collect();
    let mut evaluated: HashSet<AngleVector> = observations.iter().map(|o| o.0.clone()).collect();
    let forest_seed = derive_seed(cfg.seed, SALT_FOREST);
    let acquire_seed = derive_seed(cfg.seed, SALT_ACQUIRE);

    for it in 0..cfg.opt_iterations {
        let forest = fit_forest(&observations, &cfg.forest, derive_seed(forest_seed, it as u64))?;
        let incumbent = trace.best().expect("trace is non-empty").angles.clone();
        let mut rng = trial_rng(acquire_seed, it as u64);
        let next = greedy_acquire(&forest, &incumbent, &evaluated, cfg.pool_size, cfg.mutation_count, &mut rng)?;
        let y = evaluate(loss, &next)?;
        evaluated.insert(next.clone());
        observations.push((next.clone(), y));
        trace.push(Phase::Optimize, next, y);
    }
    Ok(BootstrapOutcome::from_trace(trace))
}

/// Full bootstrap on the MSE loss of `spec`'s ansatz against `data`.
pub fn run_bootstrap(cfg: &BootstrapConfig, spec: &AnsatzSpec, obs: &PauliString, data: &Dataset) -> Result<BootstrapOutcome> {
    if data.n_features != spec.n_qubits {
        return Err(Error::LengthMismatch {
            expected: spec.n_qubits,
            actual: data.n_features,
        });
    }
    let loss = |a: &AngleVector| mse_loss(a, spec, obs, data);
    run_bootstrap_with(cfg, spec.n_params(), &loss)
}

/// Budget-matched uniform search: the same sample phase as the bootstrap,
/// followed by `opt_iterations` further independent uniform draws.
pub fn random_search_with<F>(cfg: &BootstrapConfig, n_slots: usize, loss: &F) -> Result<BootstrapOutcome>
where
    F: Fn(&AngleVector) -> Result<f64> + Sync,
{
    let mut trace = sample_phase(cfg, n_slots, loss)?;
    for (a, y) in uniform_batch(derive_seed(cfg.seed, SALT_RANDOM), cfg.opt_iterations, n_slots, loss)? {
        trace.push(Phase::Optimize, a, y);
    }
    Ok(BootstrapOutcome::from_trace(trace))
}

pub fn random_search(cfg: &BootstrapConfig, spec: &AnsatzSpec, obs: &PauliString, data: &Dataset) -> Result<BootstrapOutcome> {
    let loss = |a: &AngleVector| mse_loss(a, spec, obs, data);
    random_search_with(cfg, spec.n_params(), &loss)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(sample_budget: usize, opt_iterations: usize) -> BootstrapConfig {
        BootstrapConfig {
            sample_budget,
            opt_iterations,
            forest: ForestParams {
                n_trees: 20,
                ..ForestParams::default()
            },
            pool_size: 64,
            mutation_count: 16,
            seed: 5,
        }
    }

    #[test]
    fn budget_one() {
        let loss = |a: &AngleVector| Ok(a.entries()[0] as f64);
        let t = sample_phase(&small_cfg(1, 0), 4, &loss).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.best_so_far(), &[t.records()[0].loss]);
    }

    #[test]
    fn zero_iterations_equals_sample_phase() {
        let loss = |a: &AngleVector| Ok(a.entries().iter().map(|&k| k as f64).sum());
        let cfg = small_cfg(30, 0);
        let out = run_bootstrap_with(&cfg, 5, &loss).unwrap();
        assert_eq!(out.trace, sample_phase(&cfg, 5, &loss).unwrap());
    }

    #[test]
    fn optimizer_finds_separable_minimum() {
        // Separable objective; the optimum is all-zero.
        let loss = |a: &AngleVector| Ok(a.entries().iter().map(|&k| k as f64).sum());
        let cfg = small_cfg(40, 40);
        let boot = run_bootstrap_with(&cfg, 6, &loss).unwrap();
        let rand = random_search_with(&cfg, 6, &loss).unwrap();
        assert!(boot.best_loss <= rand.best_loss);
        assert!(boot.best_loss <= 2.0, "{}", boot.best_loss);
        let bsf = boot.trace.best_so_far();
        assert!(bsf.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*bsf.last().unwrap(), boot.best_loss);
    }

    #[test]
    fn evaluator_errors_carry_the_vector() {
        let loss = |a: &AngleVector| {
            if a.entries()[0] == 3 {
                Err(Error::InvalidParameter("boom".into()))
            } else {
                Ok(0.0)
            }
        };
        match sample_phase(&small_cfg(50, 0), 3, &loss) {
            Err(Error::Evaluation { angles, .. }) => assert_eq!(angles[0], 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_config() {
        let loss = |_: &AngleVector| Ok(0.0);
        assert!(run_bootstrap_with(&small_cfg(0, 0), 3, &loss).is_err());
        assert!(run_bootstrap_with(&small_cfg(1, 1), 3, &loss).is_err());
    }
}
