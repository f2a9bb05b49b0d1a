//! Two-cluster binary classification data, quartile-binned to the four
//! Clifford encoding levels, and the MSE loss of a Clifford classifier.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz_circuit, compose, encode_features, AngleVector, AnsatzSpec};
use crate::error::{Error, Result};
use crate::heisenberg::{expectation_heisenberg, propagate};
use crate::pauli::{Letter, PauliString};
use crate::rng::trial_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub class_sep: f64,
    pub informative_fraction: f64,
    /// Feature indices that carry the class signal.
    pub informative: Vec<usize>,
    /// Always `"pm1"`: labels are stored as -1/+1.
    pub label_convention: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub n_samples: usize,
    pub n_features: usize,
    /// Row-major `n_samples × n_features`, every entry in `0..4`.
    pub features: Vec<u8>,
    pub labels: Vec<i8>,
    pub seed: u64,
    pub params: GeneratorParams,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    n_samples: usize,
    n_features: usize,
    seed: u64,
    params: GeneratorParams,
}

impl Dataset {
    pub fn row(&self, i: usize) -> &[u8] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.features.chunks(self.n_features)
    }

    /// Builds a dataset from explicit levels and labels.
    pub fn from_parts(n_features: usize, features: Vec<u8>, labels: Vec<i8>) -> Result<Self> {
        let ds = Dataset {
            n_samples: labels.len(),
            n_features,
            features,
            labels,
            seed: 0,
            params: GeneratorParams {
                class_sep: 0.0,
                informative_fraction: 0.0,
                informative: Vec::new(),
                label_convention: "pm1".into(),
            },
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_features == 0 || self.n_samples == 0 {
            return Err(Error::InvalidParameter("dataset must be non-empty".into()));
        }
        if self.features.len() != self.n_samples * self.n_features || self.labels.len() != self.n_samples {
            return Err(Error::InvalidParameter("dataset shape mismatch".into()));
        }
        if let Some(&l) = self.features.iter().find(|&&l| l > 3) {
            return Err(Error::InvalidLevel(l));
        }
        if self.labels.iter().any(|&y| y != 1 && y != -1) {
            return Err(Error::InvalidParameter("labels must be -1 or +1".into()));
        }
        Ok(())
    }

    /// JSON header line, then CSV `label,f1,…,fd`.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = Header {
            n_samples: self.n_samples,
            n_features: self.n_features,
            seed: self.seed,
            params: self.params.clone(),
        };
        writeln!(w, "{}", serde_json::to_string(&header).map_err(std::io::Error::other)?)?;
        let cols: Vec<String> = (1..=self.n_features).map(|f| format!("f{f}")).collect();
        writeln!(w, "label,{}", cols.join(","))?;
        for (y, row) in self.labels.iter().zip(self.rows()) {
            let mut line = y.to_string();
            for l in row {
                line.push(',');
                line.push(char::from(b'0' + l));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Parse("unexpected end of dataset file".into()))?
                .map_err(|e| Error::Parse(e.to_string()))
        };
        let header: Header = serde_json::from_str(&next()?).map_err(|e| Error::Parse(e.to_string()))?;
        let columns = next()?;
        if columns.split(',').count() != header.n_features + 1 {
            return Err(Error::Parse("column header does not match n_features".into()));
        }
        let mut features = Vec::with_capacity(header.n_samples * header.n_features);
        let mut labels = Vec::with_capacity(header.n_samples);
        for _ in 0..header.n_samples {
            let line = next()?;
            let mut fields = line.split(',');
            let y: i8 = fields
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad label in {line:?}")))?;
            labels.push(y);
            let before = features.len();
            for f in fields {
                features.push(f.trim().parse::<u8>().map_err(|e| Error::Parse(e.to_string()))?);
            }
            if features.len() - before != header.n_features {
                return Err(Error::Parse(format!("row has wrong width: {line:?}")));
            }
        }
        let ds = Dataset {
            n_samples: header.n_samples,
            n_features: header.n_features,
            features,
            labels,
            seed: header.seed,
            params: header.params,
        };
        ds.validate()?;
        Ok(ds)
    }
}

/// Class `±1` shifts informative features by `±class_sep`; all features get
/// unit Gaussian noise and are then binned by rank into quartiles.
pub fn generate_classification(
    n_samples: usize,
    n_features: usize,
    class_sep: f64,
    informative_fraction: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_samples < 2 || n_features == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n_samples >= 2 and n_features >= 1, got {n_samples} x {n_features}"
        )));
    }
    if !(informative_fraction > 0.0 && informative_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "informative_fraction {informative_fraction} outside (0, 1]"
        )));
    }
    if !class_sep.is_finite() {
        return Err(Error::InvalidParameter("class_sep must be finite".into()));
    }
    let mut rng = trial_rng(seed, 0);

    let mut labels: Vec<i8> = (0..n_samples).map(|i| if i < n_samples.div_ceil(2) { 1 } else { -1 }).collect();
    labels.shuffle(&mut rng);

    let k = ((informative_fraction * n_features as f64).ceil() as usize).clamp(1, n_features);
    let mut dims: Vec<usize> = (0..n_features).collect();
    dims.shuffle(&mut rng);
    let mut informative = dims[..k].to_vec();
    informative.sort_unstable();
    let mut is_informative = vec![false; n_features];
    for &f in &informative {
        is_informative[f] = true;
    }

    let mut raw = vec![0.0f64; n_samples * n_features];
    for (i, &y) in labels.iter().enumerate() {
        for f in 0..n_features {
            let noise: f64 = rng.sample(StandardNormal);
            let shift = if is_informative[f] { y as f64 * class_sep } else { 0.0 };
            raw[i * n_features + f] = shift + noise;
        }
    }

    let mut features = vec![0u8; n_samples * n_features];
    let mut order: Vec<usize> = (0..n_samples).collect();
    for f in 0..n_features {
        order.sort_by(|&a, &b| raw[a * n_features + f].total_cmp(&raw[b * n_features + f]).then(a.cmp(&b)));
        for (rank, &i) in order.iter().enumerate() {
            features[i * n_features + f] = (rank * 4 / n_samples) as u8;
        }
    }

    Ok(Dataset {
        n_samples,
        n_features,
        features,
        labels,
        seed,
        params: GeneratorParams {
            class_sep,
            informative_fraction,
            informative,
            label_convention: "pm1".into(),
        },
    })
}

/// Single-qubit value of `letter` on `R_y(k·π/2)|0⟩`, i.e. on `|0⟩, |+⟩, |1⟩, |−⟩`
/// for `k = 0, 1, 2, 3`.
fn letter_value(letter: Letter, k: u8) -> i8 {
    match (letter, k) {
        (Letter::Z, 0) | (Letter::X, 1) => 1,
        (Letter::Z, 2) | (Letter::X, 3) => -1,
        _ => 0,
    }
}

/// Precomputed `A† P A` for one ansatz circuit `A`. Since the encoding is a
/// product state, each row is then evaluated in time proportional to the
/// propagated support.
pub struct Predictor {
    support: Vec<(usize, Letter)>,
    sign: i8,
}

impl Predictor {
    pub fn new(spec: &AnsatzSpec, angles: &AngleVector, obs: &PauliString) -> Result<Self> {
        let circuit = build_ansatz_circuit(spec, angles)?;
        let q = propagate(&circuit, obs)?;
        let sign = q
            .sign()
            .ok_or_else(|| Error::InvalidParameter(format!("propagated observable {q} is not Hermitian")))?;
        let support = (0..q.n())
            .filter_map(|i| match q.letter(i) {
                Letter::I => None,
                l => Some((i, l)),
            })
            .collect();
        Ok(Self { support, sign })
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    /// Prediction for one row of encoding levels (each in `0..4`).
    pub fn predict_levels(&self, levels: &[u8]) -> i8 {
        let mut v = self.sign;
        for &(q, letter) in &self.support {
            let k = match levels[q] {
                0 => 0,
                1 => 2,
                2 => 1,
                _ => 3,
            };
            v *= letter_value(letter, k);
            if v == 0 {
                return 0;
            }
        }
        v
    }
}

fn squared_error(y: i8, yhat: i8) -> u64 {
    let d = (y - yhat) as i64;
    (d * d) as u64
}

/// `(1/N) Σ (y_i - ŷ_i)²` with `ŷ_i = ⟨0| (E_i A)† P (E_i A) |0⟩`.
pub fn mse_loss(angles: &AngleVector, spec: &AnsatzSpec, obs: &PauliString, data: &Dataset) -> Result<f64> {
    if data.n_features != spec.n_qubits {
        return Err(Error::LengthMismatch {
            expected: spec.n_qubits,
            actual: data.n_features,
        });
    }
    let predictor = Predictor::new(spec, angles, obs)?;
    let total: u64 = (0..data.n_samples)
        .into_par_iter()
        .map(|i| squared_error(data.labels[i], predictor.predict_levels(data.row(i))))
        .sum();
    Ok(total as f64 / data.n_samples as f64)
}

/// Same loss evaluated literally: one composed circuit per row.
pub fn mse_loss_reference(angles: &AngleVector, spec: &AnsatzSpec, obs: &PauliString, data: &Dataset) -> Result<f64> {
    if data.n_features != spec.n_qubits {
        return Err(Error::LengthMismatch {
            expected: spec.n_qubits,
            actual: data.n_features,
        });
    }
    let ansatz = build_ansatz_circuit(spec, angles)?;
    let mut total = 0u64;
    for (y, row) in data.labels.iter().zip(data.rows()) {
        let c = compose(&encode_features(row)?, &ansatz)?;
        total += squared_error(*y, expectation_heisenberg(&c, obs)?);
    }
    Ok(total as f64 / data.n_samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::Entanglement;

    fn tiny(labels: Vec<i8>, rows: Vec<u8>, d: usize) -> Dataset {
        Dataset::from_parts(d, rows, labels).unwrap()
    }

    #[test]
    fn generator_is_deterministic_and_balanced() {
        let a = generate_classification(4, 2, 1.0, 0.5, 11).unwrap();
        let b = generate_classification(4, 2, 1.0, 0.5, 11).unwrap();
        assert_eq!(a, b);
        let c = generate_classification(5, 3, 1.0, 0.5, 11).unwrap();
        let pos = c.labels.iter().filter(|&&y| y == 1).count();
        assert!(pos == 2 || pos == 3);
        assert_eq!(c.params.informative.len(), 2);
        assert!(generate_classification(1, 2, 1.0, 0.5, 0).is_err());
        assert!(generate_classification(4, 2, 1.0, 0.0, 0).is_err());
        assert!(generate_classification(4, 0, 1.0, 0.5, 0).is_err());
    }

    #[test]
    fn quartile_levels_are_exact_for_multiples_of_four() {
        let ds = generate_classification(40, 3, 2.0, 1.0, 5).unwrap();
        for f in 0..3 {
            let mut hist = [0usize; 4];
            for row in ds.rows() {
                hist[row[f] as usize] += 1;
            }
            assert_eq!(hist, [10, 10, 10, 10]);
        }
    }

    #[test]
    fn loss_examples() {
        // X observable on |0⟩-type encodings always predicts 0
        let spec = AnsatzSpec::new(1, 1, Entanglement::Linear).unwrap();
        let x: PauliString = "X".parse().unwrap();
        let z: PauliString = "Z".parse().unwrap();
        let ds = tiny(vec![1, -1, 1, -1], vec![0, 1, 0, 1], 1);
        let zero = AngleVector::zeros(1);
        assert_eq!(mse_loss(&zero, &spec, &x, &ds).unwrap(), 1.0);
        // level 0 → |0⟩ (+1), level 1 → |1⟩ (-1): perfect
        assert_eq!(mse_loss(&zero, &spec, &z, &ds).unwrap(), 0.0);
        let single = tiny(vec![1], vec![1], 1);
        assert_eq!(mse_loss(&zero, &spec, &z, &single).unwrap(), 4.0);
        let wide = AnsatzSpec::new(2, 1, Entanglement::Linear).unwrap();
        assert!(mse_loss(&AngleVector::zeros(2), &wide, &"ZZ".parse().unwrap(), &ds).is_err());
    }

    #[test]
    fn fast_loss_matches_literal_composition() {
        let ds = generate_classification(30, 5, 1.0, 0.6, 3).unwrap();
        let mut rng = trial_rng(99, 0);
        for ent in Entanglement::ALL {
            for layers in 1..=3 {
                let spec = AnsatzSpec::new(5, layers, ent).unwrap();
                for obs in ["ZZZZZ", "XXXXX", "ZZXXX", "-ZIXIZ"] {
                    let obs: PauliString = obs.parse().unwrap();
                    for _ in 0..10 {
                        let a = AngleVector::random(spec.n_params(), &mut rng);
                        assert_eq!(
                            mse_loss(&a, &spec, &obs, &ds).unwrap(),
                            mse_loss_reference(&a, &spec, &obs, &ds).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let ds = generate_classification(12, 4, 1.5, 0.5, 8).unwrap();
        let mut buf = Vec::new();
        ds.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("label,f1,f2,f3,f4"));
        let back = Dataset::read_from(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back, ds);
        assert!(Dataset::read_from(std::io::Cursor::new(b"{}\n".to_vec())).is_err());
    }
}
