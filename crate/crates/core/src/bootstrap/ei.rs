use statrs::function::erf::erfc;

use crate::error::{Error, Result};

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `(μ - f*)·Φ(Z) + σ·φ(Z)` with `Z = (μ - f*)/σ`, in the improvement-positive
/// orientation (larger `μ` is better). For loss minimization pass `-μ` and `-f*`.
/// At `σ = 0` this is `max(μ - f*, 0)`.
pub fn expected_improvement(mu: f64, sigma: f64, f_best: f64) -> Result<f64> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must be non-negative")));
    }
    let d = mu - f_best;
    if sigma == 0.0 {
        return Ok(d.max(0.0));
    }
    let z = d / sigma;
    Ok(d * std_normal_cdf(z) + sigma * std_normal_pdf(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_values() {
        let v = expected_improvement(0.0, 1.0, 0.0).unwrap();
        assert!((v - 0.398_942_280_4).abs() < 1e-9);
        let root_two_pi = (2.0 * std::f64::consts::PI).sqrt();
        assert!((expected_improvement(0.5, root_two_pi, 0.5).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(expected_improvement(-1.0, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(expected_improvement(2.0, 0.0, 0.5).unwrap(), 1.5);
        assert!(expected_improvement(0.0, -0.1, 0.0).is_err());
        assert!(expected_improvement(0.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn monotone() {
        let mut prev = 0.0;
        for i in 0..200 {
            let s = i as f64 * 0.05;
            let v = expected_improvement(0.3, s, 0.3).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        for s in [0.0, 0.1, 1.0, 3.0] {
            let mut prev = f64::NEG_INFINITY;
            for i in -100..100 {
                let v = expected_improvement(i as f64 * 0.05, s, 0.0).unwrap();
                assert!(v >= prev - 1e-15);
                prev = v;
            }
        }
    }
}
