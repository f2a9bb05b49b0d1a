use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `RyQuarter { k }` is `R_y(k·π/2)`, so `k = 3` is `R_y(-π/2)`. `Ry` carries an
/// arbitrary angle and is only Clifford when that angle is a quarter turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    RyQuarter { q: usize, k: u8 },
    Ry { q: usize, theta: f64 },
    Cnot { control: usize, target: usize },
    H(usize),
    S(usize),
    X(usize),
    Z(usize),
}

impl Gate {
    pub fn ry(q: usize, k: u8) -> Result<Self> {
        if k > 3 {
            return Err(Error::InvalidQuarterTurn(k));
        }
        Ok(Gate::RyQuarter { q, k })
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::SameControlTarget(control));
        }
        Ok(Gate::Cnot { control, target })
    }

    fn max_qubit(&self) -> usize {
        match *self {
            Gate::RyQuarter { q, .. } | Gate::Ry { q, .. } | Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Z(q) => q,
            Gate::Cnot { control, target } => control.max(target),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Gate::RyQuarter { k, .. } if k > 3 => return Err(Error::InvalidQuarterTurn(k)),
            Gate::Cnot { control, target } if control == target => {
                return Err(Error::SameControlTarget(control))
            }
            _ => {}
        }
        let index = self.max_qubit();
        if index >= n {
            return Err(Error::QubitOutOfRange { index, n });
        }
        Ok(())
    }

    /// Rotation angle in radians for the `R_y` variants, `None` otherwise.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::RyQuarter { k, .. } => Some(k as f64 * std::f64::consts::FRAC_PI_2),
            Gate::Ry { theta, .. } => Some(theta),
            _ => None,
        }
    }

    /// Rewrites an arbitrary-angle `Ry` as `RyQuarter` when its angle is a quarter
    /// turn within `1e-9`; every other gate passes through unchanged.
    pub fn to_clifford(&self) -> Result<Gate> {
        match *self {
            Gate::Ry { q, theta } => {
                let turns = theta / std::f64::consts::FRAC_PI_2;
                let nearest = turns.round();
                if !theta.is_finite() || (turns - nearest).abs() > 1e-9 {
                    return Err(Error::NonClifford(format!("R_y({theta}) on qubit {q}")));
                }
                Ok(Gate::RyQuarter {
                    q,
                    k: nearest.rem_euclid(4.0) as u8,
                })
            }
            g => Ok(g),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::RyQuarter { q, k } => write!(f, "RY {q} {k}"),
            Gate::Ry { q, theta } => write!(f, "RYA {q} {theta}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        Ok(Self { n, gates: Vec::new() })
    }

    pub fn with_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n)?;
        c.gates.reserve(gates.len());
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Concatenation with `self` applied first.
    pub fn then(mut self, other: &Circuit) -> Result<Circuit> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(self)
    }

    /// One gate per line, e.g. `RY 0 2` or `CNOT 0 1`.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.gates.len() * 10);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_dump(n: usize, text: &str) -> Result<Circuit> {
        let mut c = Circuit::new(n)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<usize> {
                parts
                    .get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: {line:?}", lineno + 1)))
            };
            let g = match parts[0].to_ascii_uppercase().as_str() {
                "RY" => Gate::ry(num(1)?, num(2)? as u8)?,
                "RYA" => Gate::Ry {
                    q: num(1)?,
                    theta: parts
                        .get(2)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("line {}: {line:?}", lineno + 1)))?,
                },
                "CNOT" | "CX" => Gate::cnot(num(1)?, num(2)?)?,
                "H" => Gate::H(num(1)?),
                "S" => Gate::S(num(1)?),
                "X" => Gate::X(num(1)?),
                "Z" => Gate::Z(num(1)?),
                other => return Err(Error::Parse(format!("line {}: unknown gate {other}", lineno + 1))),
            };
            c.push(g)?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(Gate::cnot(0, 1).unwrap()).is_ok());
        assert_eq!(
            c.push(Gate::H(2)),
            Err(Error::QubitOutOfRange { index: 2, n: 2 })
        );
        assert!(Gate::cnot(1, 1).is_err());
        assert!(Gate::ry(0, 4).is_err());
        assert!(Circuit::new(0).is_err());
    }

    #[test]
    fn arbitrary_angles_snap_to_quarter_turns() {
        let g = Gate::Ry { q: 0, theta: -std::f64::consts::FRAC_PI_2 };
        assert_eq!(g.to_clifford().unwrap(), Gate::RyQuarter { q: 0, k: 3 });
        let g = Gate::Ry { q: 0, theta: 2.0 * std::f64::consts::PI };
        assert_eq!(g.to_clifford().unwrap(), Gate::RyQuarter { q: 0, k: 0 });
        let g = Gate::Ry { q: 1, theta: 0.3 };
        assert!(matches!(g.to_clifford(), Err(Error::NonClifford(_))));
    }

    #[test]
    fn dump_round_trip() {
        let c = Circuit::with_gates(
            3,
            vec![
                Gate::ry(0, 3).unwrap(),
                Gate::cnot(2, 1).unwrap(),
                Gate::H(1),
                Gate::S(2),
            ],
        )
        .unwrap();
        let text = c.dump();
        assert_eq!(text.lines().next(), Some("RY 0 3"));
        assert_eq!(text.lines().nth(1), Some("CNOT 2 1"));
        assert_eq!(Circuit::parse_dump(3, &text).unwrap(), c);
    }

    #[test]
    fn concatenation_checks_width() {
        let a = Circuit::with_gates(2, vec![Gate::H(0)]).unwrap();
        let b = Circuit::with_gates(2, vec![Gate::X(1), Gate::Z(0)]).unwrap();
        assert_eq!(a.clone().then(&b).unwrap().len(), 3);
        assert!(a.then(&Circuit::new(3).unwrap()).is_err());
    }
}
