//! wasm-bindgen entry points for the static demo page in `www/`. Every
//! function returns a JSON string so the page needs no generated bindings
//! beyond the functions themselves.

use serde::Serialize;
use stabboot::bootstrap::{random_search, run_bootstrap, BootstrapConfig, ForestParams, Phase};
use stabboot::dataset::generate_classification;
use stabboot::prob::{exact_counts, mc_counts, theory_probability, ObservableKind};
use stabboot::{AnsatzSpec, Entanglement, PauliString};
use wasm_bindgen::prelude::*;

/// Largest n the table enumerates exhaustively; beyond it the browser stalls.
pub const TABLE_N_MAX: usize = 7;

#[derive(Debug, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub ent: Entanglement,
    pub observable: &'static str,
    pub theory: f64,
    pub exact: f64,
    pub zero: f64,
}

#[derive(Debug, Serialize)]
pub struct ScanPoint {
    pub r: f64,
    pub x_count: usize,
    pub p_hat: f64,
    pub stderr: f64,
}

#[derive(Debug, Serialize)]
pub struct BootstrapView {
    pub losses: Vec<f64>,
    pub sample_count: usize,
    pub best_so_far: Vec<f64>,
    pub random_best_so_far: Vec<f64>,
    pub best_loss: f64,
    pub best_angles: Vec<u8>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(err)
}

pub fn theorem_rows(n_max: usize) -> Result<Vec<TableRow>, String> {
    if n_max == 0 || n_max > TABLE_N_MAX {
        return Err(format!("n_max must be in 1..={TABLE_N_MAX}"));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for ent in Entanglement::ALL {
            let spec = AnsatzSpec::new(n, 1, ent).map_err(err)?;
            for kind in ObservableKind::ALL {
                let c = exact_counts(&spec, &kind.build(n).map_err(err)?).map_err(err)?;
                rows.push(TableRow {
                    n,
                    ent,
                    observable: kind.as_str(),
                    theory: theory_probability(n, kind, ent).map_err(err)?.to_f64(),
                    exact: c.p_hat(),
                    zero: c.zero as f64 / c.total as f64,
                });
            }
        }
    }
    Ok(rows)
}

pub fn scan_points(n: usize, layers: usize, ent: &str, samples: u64, steps: usize, seed: u64) -> Result<Vec<ScanPoint>, String> {
    if steps < 2 {
        return Err("steps must be at least 2".into());
    }
    let spec = AnsatzSpec::new(n, layers, ent.parse().map_err(err)?).map_err(err)?;
    (0..steps)
        .map(|i| {
            let r = i as f64 / (steps - 1) as f64;
            let obs = PauliString::domain_wall(n, r).map_err(err)?;
            let c = mc_counts(&spec, &obs, samples, seed.wrapping_add(i as u64)).map_err(err)?;
            Ok(ScanPoint {
                r,
                x_count: stabboot::pauli::domain_wall_x_count(n, r),
                p_hat: c.p_hat(),
                stderr: c.stderr(),
            })
        })
        .collect()
}

pub fn bootstrap_view(
    n: usize,
    n_samples: usize,
    layers: usize,
    sample_budget: usize,
    opt_iterations: usize,
    seed: u64,
) -> Result<BootstrapView, String> {
    let data = generate_classification(n_samples, n, 1.0, 0.5, seed).map_err(err)?;
    let spec = AnsatzSpec::new(n, layers, Entanglement::ReverseLinear).map_err(err)?;
    let obs = PauliString::z_string(n).map_err(err)?;
    let cfg = BootstrapConfig {
        sample_budget,
        opt_iterations,
        forest: ForestParams {
            n_trees: 30,
            ..ForestParams::default()
        },
        pool_size: 128,
        mutation_count: 32,
        seed,
    };
    let boot = run_bootstrap(&cfg, &spec, &obs, &data).map_err(err)?;
    let rand = random_search(&cfg, &spec, &obs, &data).map_err(err)?;
    let records = boot.trace.records();
    Ok(BootstrapView {
        losses: records.iter().map(|r| r.loss).collect(),
        sample_count: records.iter().filter(|r| r.phase == Phase::Sample).count(),
        best_so_far: boot.trace.best_so_far().to_vec(),
        random_best_so_far: rand.trace.best_so_far().to_vec(),
        best_loss: boot.best_loss,
        best_angles: boot.best.entries().to_vec(),
    })
}

/// Closed-form vs exhaustive single-layer probabilities for n = 1..n_max.
#[wasm_bindgen]
pub fn theorem_table(n_max: usize) -> Result<String, String> {
    to_json(&theorem_rows(n_max)?)
}

/// Monte Carlo p(+1) of domain-wall observables at `steps` evenly spaced r.
#[wasm_bindgen]
pub fn domain_wall_scan(n: usize, layers: usize, ent: &str, samples: u32, steps: usize, seed: u32) -> Result<String, String> {
    to_json(&scan_points(n, layers, ent, samples as u64, steps, seed as u64)?)
}

/// Bootstrap and budget-matched random search on a synthetic dataset.
#[wasm_bindgen]
pub fn bootstrap_trace(
    n: usize,
    n_samples: usize,
    layers: usize,
    sample_budget: usize,
    opt_iterations: usize,
    seed: u32,
) -> Result<String, String> {
    to_json(&bootstrap_view(n, n_samples, layers, sample_budget, opt_iterations, seed as u64)?)
}
