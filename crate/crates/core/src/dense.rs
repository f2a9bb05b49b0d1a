//! Brute-force statevector simulation, used only to validate the stabilizer
//! paths. Basis index bit `q` is qubit `q`.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{check_len, Error, Result};
use crate::pauli::PauliString;

pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    fn single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.n)?;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *g {
            Gate::RyQuarter { q, .. } | Gate::Ry { q, .. } => {
                let theta = g.angle().expect("rotation");
                let (s, co) = (theta / 2.0).sin_cos();
                self.single(q, [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]);
            }
            Gate::H(q) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                self.single(q, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]);
            }
            Gate::S(q) => self.single(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]),
            Gate::X(q) => self.single(q, [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            Gate::Z(q) => self.single(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
            Gate::Cnot { control, target } => {
                let (cb, tb) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
        }
        Ok(())
    }
}

fn masks(p: &PauliString) -> (usize, usize) {
    (p.x_words()[0] as usize, p.z_words()[0] as usize)
}

fn phase_factor(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

pub fn simulate_dense(c: &Circuit) -> Result<StateVector> {
    let mut s = StateVector::zero_state(c.n())?;
    for g in c.gates() {
        s.apply(g)?;
    }
    Ok(s)
}

/// `⟨s|P|s⟩`; the imaginary part is dropped after checking it is below `1e-9`
/// for Hermitian strings.
pub fn expectation_dense(s: &StateVector, p: &PauliString) -> Result<f64> {
    let v = expectation_dense_complex(s, p)?;
    if p.is_hermitian() && v.im.abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "Hermitian expectation has imaginary part {}",
            v.im
        )));
    }
    Ok(v.re)
}

pub fn expectation_dense_complex(s: &StateVector, p: &PauliString) -> Result<Complex64> {
    check_len(s.n, p.n())?;
    let (x, z) = masks(p);
    let phase = phase_factor(p.phase_exp());
    // P|b⟩ = i^k (-1)^{b·z} |b ⊕ x⟩
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, amp) in s.amps.iter().enumerate() {
        let sign = if (b & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        acc += s.amps[b ^ x].conj() * amp * sign;
    }
    Ok(acc * phase)
}

/// Full `2^n × 2^n` matrix of a Pauli string, row-major, for `n ≤ 6`.
pub fn pauli_matrix(p: &PauliString) -> Result<Vec<Complex64>> {
    if p.n() > 6 {
        return Err(Error::TooManyQubits { n: p.n(), max: 6 });
    }
    let dim = 1usize << p.n();
    let (x, z) = masks(p);
    let phase = phase_factor(p.phase_exp());
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for b in 0..dim {
        let sign = if (b & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        m[(b ^ x) * dim + b] = phase * sign;
    }
    Ok(m)
}

pub fn matmul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}
