//! Layered quarter-turn `R_y` ansätze with CNOT-chain entanglers, and the
//! Clifford feature encoding.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entanglement {
    Linear,
    #[serde(rename = "revlinear")]
    ReverseLinear,
}

impl Entanglement {
    pub const ALL: [Entanglement; 2] = [Entanglement::Linear, Entanglement::ReverseLinear];

    pub fn as_str(self) -> &'static str {
        match self {
            Entanglement::Linear => "linear",
            Entanglement::ReverseLinear => "revlinear",
        }
    }
}

impl fmt::Display for Entanglement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Entanglement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Entanglement::Linear),
            "revlinear" | "reverse_linear" | "reverse-linear" | "rev" => Ok(Entanglement::ReverseLinear),
            other => Err(Error::Parse(format!("unknown entanglement {other:?}"))),
        }
    }
}

/// One way of laying out an `n-1` gate nearest-neighbour CNOT chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainLayout {
    /// Gates on pairs `(0,1), (1,2), …` in that order when true, reversed otherwise.
    pub ascending: bool,
    /// `CNOT(i, i+1)` when true, `CNOT(i+1, i)` otherwise.
    pub forward: bool,
}

impl ChainLayout {
    pub fn gates(self, n: usize) -> impl Iterator<Item = Gate> {
        let pairs = n.saturating_sub(1);
        (0..pairs).map(move |j| {
            let i = if self.ascending { j } else { pairs - 1 - j };
            if self.forward {
                Gate::Cnot { control: i, target: i + 1 }
            } else {
                Gate::Cnot { control: i + 1, target: i }
            }
        })
    }
}

/// Assignment of chain layouts to the two named entanglement structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntanglementConvention {
    pub linear: ChainLayout,
    pub reverse_linear: ChainLayout,
}

impl EntanglementConvention {
    /// Linear: `CNOT(0,1), CNOT(1,2), …`; reverse linear: the same pairs in
    /// descending order. Selected by exact enumeration against the closed-form
    /// probabilities (see `tests/convention_selection.rs`).
    pub const FROZEN: Self = Self {
        linear: ChainLayout { ascending: true, forward: true },
        reverse_linear: ChainLayout { ascending: false, forward: true },
    };

    /// Reverse linear as direction-flipped `CNOT(i+1, i)` in ascending order.
    pub const DIRECTION_FLIP: Self = Self {
        linear: ChainLayout { ascending: true, forward: true },
        reverse_linear: ChainLayout { ascending: true, forward: false },
    };

    /// The frozen layouts with the two names exchanged; fails every theorem check.
    pub const SWAPPED: Self = Self {
        linear: ChainLayout { ascending: false, forward: true },
        reverse_linear: ChainLayout { ascending: true, forward: true },
    };

    pub fn layout(&self, ent: Entanglement) -> ChainLayout {
        match ent {
            Entanglement::Linear => self.linear,
            Entanglement::ReverseLinear => self.reverse_linear,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "frozen" | "default" => Ok(Self::FROZEN),
            "direction-flip" => Ok(Self::DIRECTION_FLIP),
            "swapped" => Ok(Self::SWAPPED),
            other => Err(Error::Parse(format!("unknown convention {other:?}"))),
        }
    }
}

impl Default for EntanglementConvention {
    fn default() -> Self {
        Self::FROZEN
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    pub n_layers: usize,
    pub entanglement: Entanglement,
}

impl AnsatzSpec {
    pub fn new(n_qubits: usize, n_layers: usize, entanglement: Entanglement) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::ZeroQubits);
        }
        if n_layers == 0 {
            return Err(Error::InvalidParameter("an ansatz needs at least one layer".into()));
        }
        Ok(Self {
            n_qubits,
            n_layers,
            entanglement,
        })
    }

    /// Number of quarter-turn slots, `n_qubits · n_layers`.
    pub fn n_params(&self) -> usize {
        self.n_qubits * self.n_layers
    }

    pub fn gate_count(&self) -> usize {
        self.n_layers * (2 * self.n_qubits - 1)
    }
}

impl fmt::Display for AnsatzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},layers={},ent={}", self.n_qubits, self.n_layers, self.entanglement)
    }
}

impl FromStr for AnsatzSpec {
    type Err = Error;

    /// `n=<int>,layers=<int>,ent=linear|revlinear`; `layers` defaults to 1 and
    /// `ent` to `revlinear`.
    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut layers = 1;
        let mut ent = Entanglement::ReverseLinear;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            let int = || {
                value
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{key}: {e}")))
            };
            match key.trim() {
                "n" => n = Some(int()?),
                "layers" | "L" => layers = int()?,
                "ent" => ent = value.parse()?,
                other => return Err(Error::Parse(format!("unknown ansatz key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("ansatz descriptor needs n=<int>".into()))?;
        AnsatzSpec::new(n, layers, ent)
    }
}

/// Quarter-turn indices, one per `R_y` slot, laid out qubit-major within each layer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleVector(Vec<u8>);

impl AngleVector {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&k| k > 3) {
            return Err(Error::InvalidQuarterTurn(bad));
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random_range(0..4u8)).collect())
    }

    /// Digits of `index` in base 4, least significant slot first.
    pub fn from_index(mut index: u64, len: usize) -> Self {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push((index & 3) as u8);
            index >>= 2;
        }
        Self(v)
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn hamming(&self, other: &AngleVector) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn with_slot(&self, slot: usize, k: u8) -> Self {
        let mut v = self.0.clone();
        v[slot] = k & 3;
        Self(v)
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

pub fn build_ansatz_circuit(spec: &AnsatzSpec, angles: &AngleVector) -> Result<Circuit> {
    build_with_convention(spec, angles, EntanglementConvention::FROZEN)
}

pub fn build_with_convention(
    spec: &AnsatzSpec,
    angles: &AngleVector,
    convention: EntanglementConvention,
) -> Result<Circuit> {
    if angles.len() != spec.n_params() {
        return Err(Error::AngleLength {
            expected: spec.n_params(),
            actual: angles.len(),
        });
    }
    let n = spec.n_qubits;
    let layout = convention.layout(spec.entanglement);
    let mut gates = Vec::with_capacity(spec.gate_count());
    for layer in angles.entries().chunks(n) {
        gates.extend(layer.iter().enumerate().map(|(q, &k)| Gate::RyQuarter { q, k }));
        gates.extend(layout.gates(n));
    }
    Circuit::with_gates(n, gates)
}

/// Feature level → quarter-turn index: levels 0, 1, 2, 3 encode the angles
/// 0, π, π/2, -π/2.
pub fn level_to_quarter(level: u8) -> Result<u8> {
    match level {
        0 => Ok(0),
        1 => Ok(2),
        2 => Ok(1),
        3 => Ok(3),
        other => Err(Error::InvalidLevel(other)),
    }
}

pub fn encode_features(levels: &[u8]) -> Result<Circuit> {
    if levels.is_empty() {
        return Err(Error::ZeroQubits);
    }
    let gates = levels
        .iter()
        .enumerate()
        .map(|(q, &l)| Ok(Gate::RyQuarter { q, k: level_to_quarter(l)? }))
        .collect::<Result<Vec<_>>>()?;
    Circuit::with_gates(levels.len(), gates)
}

/// Encoding first, then the variational circuit.
pub fn compose(encoding: &Circuit, ansatz: &Circuit) -> Result<Circuit> {
    encoding.clone().then(ansatz)
}
