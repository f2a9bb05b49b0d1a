//! Heisenberg-picture evaluation: the observable is pulled back through the
//! circuit one gate at a time (`P ← g† P g`, last gate first) and then read off
//! against `|0…0⟩`. Cost is linear in the gate count and independent of `2^n`.

use crate::circuit::{Circuit, Gate};
use crate::error::{check_len, Error, Result};
use crate::pauli::PauliString;

/// `g† p g` for a single gate.
pub fn conjugate_gate(p: &PauliString, g: &Gate) -> Result<PauliString> {
    g.validate(p.n())?;
    let mut out = p.clone();
    conjugate_in_place(&mut out, &g.to_clifford()?);
    Ok(out)
}

/// Gate must already be validated and in Clifford form.
pub(crate) fn conjugate_in_place(p: &mut PauliString, g: &Gate) {
    match *g {
        Gate::RyQuarter { q, k } => {
            let (x, z) = (p.x_bit(q) as u8, p.z_bit(q) as u8);
            match k & 3 {
                0 => {}
                // X → Z, Z → -X
                1 => {
                    p.set_x(q, z == 1);
                    p.set_z(q, x == 1);
                    p.add_phase(2 * ((z + x * z) & 1));
                }
                // X → -X, Z → -Z
                2 => p.add_phase(2 * ((x + z) & 1)),
                // X → -Z, Z → X
                _ => {
                    p.set_x(q, z == 1);
                    p.set_z(q, x == 1);
                    p.add_phase(2 * ((x + x * z) & 1));
                }
            }
        }
        Gate::Cnot { control, target } => {
            // X_c → X_c X_t, Z_t → Z_c Z_t; the X-before-Z ordering needs no sign fix.
            if p.x_bit(control) {
                let v = p.x_bit(target);
                p.set_x(target, !v);
            }
            if p.z_bit(target) {
                let v = p.z_bit(control);
                p.set_z(control, !v);
            }
        }
        Gate::H(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            p.set_x(q, z);
            p.set_z(q, x);
            if x && z {
                p.add_phase(2);
            }
        }
        Gate::S(q) => {
            // S† X S = -Y = i^3 XZ
            if p.x_bit(q) {
                let z = p.z_bit(q);
                p.set_z(q, !z);
                p.add_phase(3);
            }
        }
        Gate::X(q) => {
            if p.z_bit(q) {
                p.add_phase(2);
            }
        }
        Gate::Z(q) => {
            if p.x_bit(q) {
                p.add_phase(2);
            }
        }
        Gate::Ry { .. } => unreachable!("arbitrary R_y must be converted before conjugation"),
    }
}

/// Pulls `p` back through the whole circuit: returns `C† p C`.
pub fn propagate(c: &Circuit, p: &PauliString) -> Result<PauliString> {
    check_len(c.n(), p.n())?;
    let mut out = p.clone();
    for g in c.gates().iter().rev() {
        let g = match g {
            Gate::Ry { .. } => g.to_clifford()?,
            other => *other,
        };
        conjugate_in_place(&mut out, &g);
    }
    Ok(out)
}

/// Reads `⟨0…0| P |0…0⟩` for a Pauli string: zero unless the string is diagonal.
pub fn vacuum_value(p: &PauliString) -> Result<i8> {
    if p.has_x_support() {
        return Ok(0);
    }
    match p.phase_exp() {
        0 => Ok(1),
        2 => Ok(-1),
        other => Err(Error::InvalidParameter(format!(
            "non-Hermitian diagonal string with phase i^{other}"
        ))),
    }
}

/// `⟨0…0| C† P C |0…0⟩ ∈ {-1, 0, 1}`.
pub fn expectation_heisenberg(c: &Circuit, p: &PauliString) -> Result<i8> {
    vacuum_value(&propagate(c, p)?)
}
