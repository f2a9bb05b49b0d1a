//! Stabilizer tableau with destabilizers, updated with the Aaronson–Gottesman
//! rules. This path shares no conjugation code with [`crate::heisenberg`]; the
//! two are cross-checked in tests.
//!
//! Rows use the letter convention: `(-1)^sign · ⊗ σ_q` where `x = z = 1` is `Y`.

use crate::circuit::{Circuit, Gate};
use crate::error::{check_len, Error, Result};
use crate::pauli::{word_count, Letter, PauliString};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    x: Vec<u64>,
    z: Vec<u64>,
    sign: bool,
}

impl Row {
    fn zero(words: usize) -> Self {
        Self {
            x: vec![0; words],
            z: vec![0; words],
            sign: false,
        }
    }

    #[inline]
    fn get(v: &[u64], q: usize) -> bool {
        v[q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    fn flip(v: &mut [u64], q: usize) {
        v[q / 64] ^= 1 << (q % 64);
    }

    fn anticommutes(&self, other: &Row) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= (self.x[w] & other.z[w]).count_ones() ^ (self.z[w] & other.x[w]).count_ones();
        }
        parity & 1 == 1
    }

    /// `self ← other · self`, with the sign resolved by summing the per-qubit
    /// powers of `i` produced by each letter product.
    fn left_mul(&mut self, other: &Row) {
        let mut plus = 0i64;
        let mut minus = 0i64;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (other.x[w], other.z[w], self.x[w], self.z[w]);
            let p = (x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2);
            let m = (x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2);
            plus += p.count_ones() as i64;
            minus += m.count_ones() as i64;
            self.x[w] ^= x1;
            self.z[w] ^= z1;
        }
        let total = 2 * (self.sign as i64) + 2 * (other.sign as i64) + plus - minus;
        // commuting rows always give an even power of i
        debug_assert_eq!(total.rem_euclid(2), 0);
        self.sign = total.rem_euclid(4) == 2;
    }

    fn to_pauli(&self, n: usize) -> PauliString {
        let letters = (0..n).map(|q| match (Self::get(&self.x, q), Self::get(&self.z, q)) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        });
        PauliString::from_letters(letters, self.sign).expect("n >= 1")
    }

    fn from_pauli(p: &PauliString) -> Result<Row> {
        let sign = match p.sign() {
            Some(1) => false,
            Some(_) => true,
            None => {
                return Err(Error::InvalidParameter(format!(
                    "observable {p} is not Hermitian"
                )))
            }
        };
        Ok(Row {
            x: p.x_words().to_vec(),
            z: p.z_words().to_vec(),
            sign,
        })
    }
}

/// `rows[0..n]` are destabilizers and `rows[n..2n]` the stabilizer generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<Row>,
}

impl StabilizerTableau {
    /// Tableau of `|0…0⟩`: destabilizers `X_q`, stabilizers `Z_q`.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        let words = word_count(n);
        let mut rows = vec![Row::zero(words); 2 * n];
        for q in 0..n {
            Row::flip(&mut rows[q].x, q);
            Row::flip(&mut rows[n + q].z, q);
        }
        Ok(Self { n, rows })
    }

    pub fn from_circuit(c: &Circuit) -> Result<Self> {
        let mut t = Self::zero_state(c.n())?;
        for g in c.gates() {
            t.apply(g)?;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        self.rows[self.n..].iter().map(|r| r.to_pauli(self.n)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        self.rows[..self.n].iter().map(|r| r.to_pauli(self.n)).collect()
    }

    /// Functional form of [`StabilizerTableau::apply`].
    pub fn apply_gate(&self, g: &Gate) -> Result<Self> {
        let mut out = self.clone();
        out.apply(g)?;
        Ok(out)
    }

    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.n)?;
        match g.to_clifford()? {
            Gate::Cnot { control, target } => self.cnot(control, target),
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q),
            Gate::X(q) => self.x(q),
            Gate::Z(q) => self.z(q),
            // R_y(π/2) = H·Z, R_y(π) = X·Z, R_y(-π/2) = Z·H (rightmost acts first)
            Gate::RyQuarter { q, k } => match k {
                0 => {}
                1 => {
                    self.z(q);
                    self.h(q);
                }
                2 => {
                    self.z(q);
                    self.x(q);
                }
                _ => {
                    self.h(q);
                    self.z(q);
                }
            },
            Gate::Ry { .. } => unreachable!(),
        }
        Ok(())
    }

    fn cnot(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            let (xa, zb) = (Row::get(&r.x, a), Row::get(&r.z, b));
            let (xb, za) = (Row::get(&r.x, b), Row::get(&r.z, a));
            if xa && zb && (xb == za) {
                r.sign = !r.sign;
            }
            if xa {
                Row::flip(&mut r.x, b);
            }
            if zb {
                Row::flip(&mut r.z, a);
            }
        }
    }

    fn h(&mut self, q: usize) {
        for r in &mut self.rows {
            let (x, z) = (Row::get(&r.x, q), Row::get(&r.z, q));
            if x && z {
                r.sign = !r.sign;
            }
            if x != z {
                Row::flip(&mut r.x, q);
                Row::flip(&mut r.z, q);
            }
        }
    }

    fn s(&mut self, q: usize) {
        for r in &mut self.rows {
            let (x, z) = (Row::get(&r.x, q), Row::get(&r.z, q));
            if x && z {
                r.sign = !r.sign;
            }
            if x {
                Row::flip(&mut r.z, q);
            }
        }
    }

    fn x(&mut self, q: usize) {
        for r in &mut self.rows {
            if Row::get(&r.z, q) {
                r.sign = !r.sign;
            }
        }
    }

    fn z(&mut self, q: usize) {
        for r in &mut self.rows {
            if Row::get(&r.x, q) {
                r.sign = !r.sign;
            }
        }
    }

    /// `⟨ψ|P|ψ⟩ ∈ {-1, 0, 1}` for a Hermitian Pauli string.
    pub fn expectation(&self, p: &PauliString) -> Result<i8> {
        check_len(self.n, p.n())?;
        let target = Row::from_pauli(p)?;
        let n = self.n;
        if self.rows[n..].iter().any(|s| s.anticommutes(&target)) {
            return Ok(0);
        }
        // p commutes with every stabilizer, so it is ± the product of the
        // stabilizers whose paired destabilizer anticommutes with it.
        let mut acc = Row::zero(target.x.len());
        for i in 0..n {
            if self.rows[i].anticommutes(&target) {
                acc.left_mul(&self.rows[n + i]);
            }
        }
        debug_assert!(acc.x == target.x && acc.z == target.z);
        Ok(if acc.sign == target.sign { 1 } else { -1 })
    }

    /// Checks mutual commutation, the destabilizer pairing and full symplectic rank.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        for i in 0..n {
            for j in 0..n {
                let stab_pair = self.rows[n + i].anticommutes(&self.rows[n + j]);
                if stab_pair {
                    return fail(format!("stabilizers {i} and {j} anticommute"));
                }
                let paired = self.rows[i].anticommutes(&self.rows[n + j]);
                if paired != (i == j) {
                    return fail(format!("destabilizer {i} / stabilizer {j} pairing broken"));
                }
            }
        }
        if symplectic_rank(&self.rows[n..], n) != n {
            return fail("stabilizer generators are dependent".into());
        }
        Ok(())
    }
}

fn symplectic_rank(rows: &[Row], n: usize) -> usize {
    let words = word_count(n);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.x.iter().chain(&r.z).copied().collect())
        .collect();
    let mut rank = 0;
    for col in 0..2 * n {
        let (w, b) = if col < n { (col / 64, col % 64) } else { (words + (col - n) / 64, (col - n) % 64) };
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][w] >> b & 1 == 1) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                row.iter_mut().zip(&pivot_row).for_each(|(a, p)| *a ^= p);
            }
        }
        rank += 1;
    }
    rank
}

/// Convenience wrapper: evolve `|0…0⟩` through `c` and evaluate `p`.
pub fn expectation_tableau(t: &StabilizerTableau, p: &PauliString) -> Result<i8> {
    t.expectation(p)
}
