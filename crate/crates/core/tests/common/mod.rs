#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use stabboot::dense::StateVector;
use stabboot::{Circuit, Gate, Letter, PauliString};

pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let q = rng.random_range(0..n);
    let choice = if n > 1 { rng.random_range(0..8) } else { rng.random_range(0..7) };
    match choice {
        0 | 1 => Gate::RyQuarter { q, k: rng.random_range(0..4) },
        2 => Gate::H(q),
        3 => Gate::S(q),
        4 => Gate::X(q),
        5 => Gate::Z(q),
        6 => Gate::Ry {
            q,
            theta: rng.random_range(-4i32..=4) as f64 * std::f64::consts::FRAC_PI_2,
        },
        _ => {
            let mut t = rng.random_range(0..n - 1);
            if t >= q {
                t += 1;
            }
            Gate::Cnot { control: q, target: t }
        }
    }
}

pub fn random_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> Circuit {
    let gates = (0..len).map(|_| random_gate(n, rng)).collect();
    Circuit::with_gates(n, gates).unwrap()
}

pub fn random_pauli<R: Rng>(n: usize, letters: &[Letter], rng: &mut R) -> PauliString {
    let ls: Vec<Letter> = (0..n).map(|_| letters[rng.random_range(0..letters.len())]).collect();
    PauliString::from_letters(ls, rng.random_bool(0.5)).unwrap()
}

/// Column `j` is `g|j⟩`; row-major `dim × dim`.
pub fn gate_unitary(n: usize, g: &Gate) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut u = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        let mut s = StateVector::zero_state(n).unwrap();
        for q in 0..n {
            if j >> q & 1 == 1 {
                s.apply(&Gate::X(q)).unwrap();
            }
        }
        s.apply(g).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            u[i * dim + j] = *a;
        }
    }
    u
}

pub fn dagger(m: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            out[j * dim + i] = m[i * dim + j].conj();
        }
    }
    out
}

pub fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
}
