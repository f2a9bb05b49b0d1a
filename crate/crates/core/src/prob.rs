//! Probability of non-trivial sampling: exact enumeration over the quarter-turn
//! space, seeded Monte Carlo estimates, closed-form values and the critical
//! exponent `ν` defined by `p = 1 / (4 n^ν)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_with_convention, AngleVector, AnsatzSpec, Entanglement, EntanglementConvention};
use crate::error::{check_len, Error, Result};
use crate::heisenberg::expectation_heisenberg;
use crate::pauli::PauliString;
use crate::rng::{derive_seed, trial_rng};

/// Largest enumeration, `4^(n·L) ≤ 2^24`.
pub const ENUMERATION_BUDGET_LOG4: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub total: u64,
    pub plus_one: u64,
    pub minus_one: u64,
    pub zero: u64,
}

impl OutcomeCounts {
    pub fn record(&mut self, value: i8) {
        self.total += 1;
        match value {
            1 => self.plus_one += 1,
            -1 => self.minus_one += 1,
            _ => self.zero += 1,
        }
    }

    pub fn merge(mut self, other: OutcomeCounts) -> OutcomeCounts {
        self.total += other.total;
        self.plus_one += other.plus_one;
        self.minus_one += other.minus_one;
        self.zero += other.zero;
        self
    }

    /// Estimated probability of a `+1` outcome.
    pub fn p_hat(&self) -> f64 {
        self.plus_one as f64 / self.total as f64
    }

    /// Binomial standard error `sqrt(p̂(1-p̂)/total)`.
    pub fn stderr(&self) -> f64 {
        let p = self.p_hat();
        (p * (1.0 - p) / self.total as f64).sqrt()
    }

    pub fn is_consistent(&self) -> bool {
        self.total >= 1 && self.plus_one + self.minus_one + self.zero == self.total
    }
}

/// Exact probability of the form `numer / 2^log2_denom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dyadic {
    pub numer: u64,
    pub log2_denom: u32,
}

impl Dyadic {
    pub fn unit(log2_denom: u32) -> Self {
        Self { numer: 1, log2_denom }
    }

    pub fn to_f64(self) -> f64 {
        self.numer as f64 * (-(self.log2_denom as f64)).exp2()
    }

    /// `count / total == self`, exactly. `total` must be a power of two times
    /// something that fits; falls back to `false` on overflow.
    pub fn equals_ratio(self, count: u64, total: u64) -> bool {
        if self.log2_denom >= 64 {
            return count == 0 && self.numer == 0;
        }
        let lhs = (count as u128) << self.log2_denom;
        let rhs = self.numer as u128 * total as u128;
        lhs == rhs
    }

    /// `1 - self`.
    pub fn complement(self) -> Self {
        Self {
            numer: (1u64 << self.log2_denom) - self.numer,
            log2_denom: self.log2_denom,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numer, self.log2_denom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObservableKind {
    ZString,
    XString,
}

impl ObservableKind {
    pub const ALL: [ObservableKind; 2] = [ObservableKind::ZString, ObservableKind::XString];

    pub fn build(self, n: usize) -> Result<PauliString> {
        match self {
            ObservableKind::ZString => PauliString::z_string(n),
            ObservableKind::XString => PauliString::x_string(n),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ObservableKind::ZString => "Z",
            ObservableKind::XString => "X",
        }
    }
}

impl FromStr for ObservableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "z" | "zstring" => Ok(ObservableKind::ZString),
            "X" | "x" | "xstring" => Ok(ObservableKind::XString),
            other => Err(Error::Parse(format!("unknown observable kind {other:?}"))),
        }
    }
}

/// `⌈n/2 + 1⌉ = ⌈n/2⌉ + 1`.
fn weak_exponent(n: usize) -> u32 {
    (n.div_ceil(2) + 1) as u32
}

/// Closed-form `+1` probability for a single layer: `1/4` in the strong cases
/// (Z with reverse-linear, X with linear) and `1/2^⌈n/2+1⌉` otherwise.
pub fn theory_probability(n: usize, kind: ObservableKind, ent: Entanglement) -> Result<Dyadic> {
    if n == 0 {
        return Err(Error::ZeroQubits);
    }
    Ok(match (kind, ent) {
        (ObservableKind::ZString, Entanglement::ReverseLinear) | (ObservableKind::XString, Entanglement::Linear) => {
            Dyadic::unit(2)
        }
        _ => Dyadic::unit(weak_exponent(n)),
    })
}

/// Closed-form probability of a `0` outcome, `1 - 2·p(+1)`.
pub fn theory_zero_probability(n: usize, kind: ObservableKind, ent: Entanglement) -> Result<Dyadic> {
    let p = theory_probability(n, kind, ent)?;
    Ok(Dyadic::unit(p.log2_denom - 1).complement())
}

fn evaluate(spec: &AnsatzSpec, obs: &PauliString, angles: &AngleVector, conv: EntanglementConvention) -> Result<i8> {
    let c = build_with_convention(spec, angles, conv)?;
    expectation_heisenberg(&c, obs)
}

pub fn exact_counts(spec: &AnsatzSpec, obs: &PauliString) -> Result<OutcomeCounts> {
    exact_counts_with(spec, obs, EntanglementConvention::FROZEN)
}

/// Enumerates all `4^(n·L)` angle vectors in base-4 counter order.
pub fn exact_counts_with(
    spec: &AnsatzSpec,
    obs: &PauliString,
    conv: EntanglementConvention,
) -> Result<OutcomeCounts> {
    check_len(spec.n_qubits, obs.n())?;
    let slots = spec.n_params();
    if slots > ENUMERATION_BUDGET_LOG4 {
        return Err(Error::BudgetExceeded { exponent: slots });
    }
    let total = 1u64 << (2 * slots);
    (0..total)
        .into_par_iter()
        .try_fold(OutcomeCounts::default, |mut acc, idx| {
            acc.record(evaluate(spec, obs, &AngleVector::from_index(idx, slots), conv)?);
            Ok(acc)
        })
        .try_reduce(OutcomeCounts::default, |a, b| Ok(a.merge(b)))
}

pub fn mc_counts(spec: &AnsatzSpec, obs: &PauliString, samples: u64, seed: u64) -> Result<OutcomeCounts> {
    mc_counts_with(spec, obs, samples, seed, EntanglementConvention::FROZEN)
}

/// Uniform angle vectors; trial `t` draws from stream `t` of `seed`.
pub fn mc_counts_with(
    spec: &AnsatzSpec,
    obs: &PauliString,
    samples: u64,
    seed: u64,
    conv: EntanglementConvention,
) -> Result<OutcomeCounts> {
    check_len(spec.n_qubits, obs.n())?;
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let slots = spec.n_params();
    (0..samples)
        .into_par_iter()
        .try_fold(OutcomeCounts::default, |mut acc, t| {
            let angles = AngleVector::random(slots, &mut trial_rng(seed, t));
            acc.record(evaluate(spec, obs, &angles, conv)?);
            Ok(acc)
        })
        .try_reduce(OutcomeCounts::default, |a, b| Ok(a.merge(b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub n: usize,
    pub p_hat: f64,
    pub nu: f64,
    pub stderr: f64,
    /// `p̂ > 1/4`, which gives a negative exponent.
    pub noise_excursion: bool,
}

/// Inverts `p = 1/(4 n^ν)`: `ν = ln(1/(4p)) / ln n`.
pub fn fit_exponent(p_hat: f64, n: usize) -> Result<ExponentFit> {
    if n < 2 {
        return Err(Error::Unfittable(format!("n = {n} has ln n <= 0")));
    }
    if p_hat.is_nan() || p_hat <= 0.0 || !p_hat.is_finite() {
        return Err(Error::Unfittable(format!("p_hat = {p_hat}")));
    }
    let nu = (1.0 / (4.0 * p_hat)).ln() / (n as f64).ln();
    Ok(ExponentFit {
        n,
        p_hat,
        nu,
        stderr: 0.0,
        noise_excursion: p_hat > 0.25,
    })
}

impl ExponentFit {
    pub fn from_counts(counts: &OutcomeCounts, n: usize) -> Result<Self> {
        let mut fit = fit_exponent(counts.p_hat(), n)?;
        fit.stderr = counts.stderr();
        Ok(fit)
    }
}

/// Weak-endpoint exponent for even `n`: `((n/2 - 1) ln 2) / ln n`.
pub fn weak_endpoint_nu(n: usize) -> f64 {
    ((n as f64 / 2.0 - 1.0) * std::f64::consts::LN_2) / (n as f64).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: usize,
    pub r: f64,
    pub layers: usize,
    pub ent: Entanglement,
    pub counts: OutcomeCounts,
    pub fit: Option<ExponentFit>,
}

impl ScanRecord {
    pub const CSV_HEADER: &'static str = "n,r,layers,ent,samples,plus,minus,zero,p_hat,stderr,nu";

    pub fn csv_row(&self) -> String {
        let nu = self.fit.map(|f| format!("{:.12}", f.nu)).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{:.12},{:.12},{}",
            self.n,
            self.r,
            self.layers,
            self.ent,
            self.counts.total,
            self.counts.plus_one,
            self.counts.minus_one,
            self.counts.zero,
            self.counts.p_hat(),
            self.counts.stderr(),
            nu
        )
    }
}

/// Monte Carlo over the `n × r` grid with domain-wall observables. Grid point
/// `i` (row-major, `n` outer) uses the sub-seed `derive_seed(seed, i)`.
pub fn scan(
    n_values: &[usize],
    r_values: &[f64],
    layers: usize,
    ent: Entanglement,
    samples: u64,
    seed: u64,
) -> Result<Vec<ScanRecord>> {
    if n_values.is_empty() || r_values.is_empty() {
        return Err(Error::InvalidParameter("scan grids must be non-empty".into()));
    }
    let mut out = Vec::with_capacity(n_values.len() * r_values.len());
    for (i, (&n, &r)) in n_values
        .iter()
        .flat_map(|n| r_values.iter().map(move |r| (n, r)))
        .enumerate()
    {
        let spec = AnsatzSpec::new(n, layers, ent)?;
        let obs = PauliString::domain_wall(n, r)?;
        let counts = mc_counts(&spec, &obs, samples, derive_seed(seed, i as u64))?;
        let fit = ExponentFit::from_counts(&counts, n).ok();
        out.push(ScanRecord {
            n,
            r,
            layers,
            ent,
            counts,
            fit,
        });
    }
    Ok(out)
}
