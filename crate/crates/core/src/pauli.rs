//! Signed Pauli strings in bit-packed symplectic form.
//!
//! A string over `n` qubits is stored as two bit masks plus a phase exponent,
//! and denotes the operator
//!
//! ```text
//! i^phase_exp · ⊗_q X_q^{x_q} Z_q^{z_q}
//! ```
//!
//! with the X factor to the left of the Z factor on every qubit. Under this
//! convention the letter `Y` is `i·XZ`, so a Hermitian string carries
//! `phase_exp ≡ popcount(x ∧ z) (mod 2)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
fn locate(q: usize) -> (usize, u64) {
    (q / WORD_BITS, 1u64 << (q % WORD_BITS))
}

/// One single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' | '_' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            other => Err(Error::InvalidLetter(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase_exp: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        let w = word_count(n);
        Ok(Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase_exp: 0,
        })
    }

    /// Builds a Hermitian string from letters, with qubit 0 first.
    pub fn from_letters<I>(letters: I, negative: bool) -> Result<Self>
    where
        I: IntoIterator<Item = Letter>,
    {
        let letters: Vec<Letter> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::EmptyString);
        }
        let mut p = Self::identity(letters.len())?;
        let mut ys = 0u32;
        for (q, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            p.set_x(q, xb);
            p.set_z(q, zb);
            if *l == Letter::Y {
                ys += 1;
            }
        }
        p.phase_exp = ((ys + if negative { 2 } else { 0 }) % 4) as u8;
        Ok(p)
    }

    pub fn z_string(n: usize) -> Result<Self> {
        Self::from_letters(std::iter::repeat_n(Letter::Z, n), false)
    }

    pub fn x_string(n: usize) -> Result<Self> {
        Self::from_letters(std::iter::repeat_n(Letter::X, n), false)
    }

    /// `Z…ZX…X` with `floor(r·n + 0.5)` X letters on the highest-index qubits.
    pub fn domain_wall(n: usize, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::FractionOutOfRange(r));
        }
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        let k = domain_wall_x_count(n, r);
        let letters = (0..n).map(|q| if q >= n - k { Letter::X } else { Letter::Z });
        Self::from_letters(letters, false)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        let (w, m) = locate(q);
        self.x[w] & m != 0
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        let (w, m) = locate(q);
        self.z[w] & m != 0
    }

    #[inline]
    pub(crate) fn set_x(&mut self, q: usize, v: bool) {
        let (w, m) = locate(q);
        if v {
            self.x[w] |= m
        } else {
            self.x[w] &= !m
        }
    }

    #[inline]
    pub(crate) fn set_z(&mut self, q: usize, v: bool) {
        let (w, m) = locate(q);
        if v {
            self.z[w] |= m
        } else {
            self.z[w] &= !m
        }
    }

    #[inline]
    pub(crate) fn add_phase(&mut self, k: u8) {
        self.phase_exp = (self.phase_exp + k) & 3;
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn letter(&self, q: usize) -> Letter {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn letters(&self) -> String {
        (0..self.n).map(|q| self.letter(q).as_char()).collect()
    }

    pub fn has_x_support(&self) -> bool {
        self.x.iter().any(|&w| w != 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(a, b)| (a & b).count_ones()).sum()
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase_exp as u32 + self.y_count()).is_multiple_of(2)
    }

    /// Phase relative to the letter form: 0 → `+`, 1 → `+i`, 2 → `-`, 3 → `-i`.
    pub fn letter_phase(&self) -> u8 {
        ((self.phase_exp as u32 + 4 - self.y_count() % 4) % 4) as u8
    }

    /// `+1`/`-1` for Hermitian strings.
    pub fn sign(&self) -> Option<i8> {
        match self.letter_phase() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        check_len(self.n, other.n)?;
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= (self.x[w] & other.z[w]).count_ones() ^ (self.z[w] & other.x[w]).count_ones();
        }
        Ok(parity & 1 == 0)
    }

    /// Operator product `self · other` with exact phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_len(self.n, other.n)?;
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self ← self · other`; lengths must already agree.
    pub(crate) fn mul_assign_right(&mut self, other: &Self) {
        // X^a Z^b X^c Z^d = (-1)^{b·c} X^{a⊕c} Z^{b⊕d}
        let mut swaps = 0u32;
        for w in 0..self.x.len() {
            swaps += (self.z[w] & other.x[w]).count_ones();
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        self.phase_exp = ((self.phase_exp as u32 + other.phase_exp as u32 + 2 * (swaps & 1)) % 4) as u8;
    }
}

/// Number of X letters in a domain-wall string (round half up).
pub fn domain_wall_x_count(n: usize, r: f64) -> usize {
    ((r * n as f64 + 0.5).floor() as usize).min(n)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.letter_phase() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.letters())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Letter form such as `ZZXX`, `+XZ` or `-ZZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let letters = body.chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        Self::from_letters(letters, negative)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn letter_examples() {
        let zz = p("ZZ");
        assert_eq!(zz.z_words()[0], 0b11);
        assert_eq!(zz.x_words()[0], 0);
        assert_eq!(zz.sign(), Some(1));
        assert_eq!(p("XXXX").x_words()[0], 0b1111);
        assert_eq!(p("-XZ").sign(), Some(-1));
        assert!(matches!("ZQ".parse::<PauliString>(), Err(Error::InvalidLetter('Q'))));
        assert_eq!("".parse::<PauliString>(), Err(Error::EmptyString));
    }

    #[test]
    fn y_letters_are_hermitian() {
        for s in ["Y", "YY", "XYZ", "-YIY", "YYY"] {
            let q = p(s);
            assert!(q.is_hermitian(), "{s}");
            assert_eq!(q.to_string().trim_start_matches('+'), s.trim_start_matches('+'));
        }
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("XI").commutes(&p("IZ")).unwrap());
        assert!(p("X").commutes(&p("ZZ")).is_err());
    }

    #[test]
    fn multiply_examples() {
        let xx = p("X").multiply(&p("X")).unwrap();
        assert_eq!(xx, PauliString::identity(1).unwrap());
        // X·Z is the XZ product itself, which equals -iY
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(xz.letters(), "Y");
        assert_eq!(xz.phase_exp(), 0);
        assert_eq!(xz.letter_phase(), 3);
        // Z·X = iY
        let zx = p("Z").multiply(&p("X")).unwrap();
        assert_eq!(zx.letter_phase(), 1);
        // Y·Y = I
        assert_eq!(p("Y").multiply(&p("Y")).unwrap(), PauliString::identity(1).unwrap());
    }

    #[test]
    fn domain_wall_examples() {
        assert_eq!(PauliString::domain_wall(4, 0.0).unwrap().letters(), "ZZZZ");
        assert_eq!(PauliString::domain_wall(4, 1.0).unwrap().letters(), "XXXX");
        assert_eq!(PauliString::domain_wall(4, 0.5).unwrap(), p("ZZXX"));
        assert_eq!(PauliString::domain_wall(5, 0.5).unwrap().letters(), "ZZXXX");
        assert!(PauliString::domain_wall(4, 1.5).is_err());
        assert!(PauliString::domain_wall(4, -0.1).is_err());
    }

    #[test]
    fn domain_wall_counts_on_grid() {
        for n in 1..=64usize {
            for step in 0..=100 {
                let r = step as f64 / 100.0;
                let s = PauliString::domain_wall(n, r).unwrap();
                let xs = (0..n).filter(|&q| s.x_bit(q)).count();
                assert_eq!(xs, (r * n as f64 + 0.5).floor() as usize);
                assert!(s.is_hermitian());
            }
        }
    }

    #[test]
    fn masks_span_multiple_words() {
        let s = PauliString::domain_wall(130, 0.5).unwrap();
        assert_eq!(s.x_words().len(), 3);
        assert!(s.x_bit(129) && !s.z_bit(129));
        assert!(s.z_bit(0) && !s.x_bit(0));
        assert_eq!(s.weight(), 130);
    }

    #[test]
    fn serde_uses_letter_form() {
        let s = p("-ZX");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"-ZX\"");
        let back: PauliString = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
