//! Statistical checks on the synthetic classification generator at N = 10⁴.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use stabboot::dataset::{generate_classification, Dataset};

fn chi2_p_value(observed: &[f64], expected: &[f64]) -> f64 {
    let stat: f64 = observed.iter().zip(expected).map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = (observed.len() - 1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

#[test]
fn levels_are_uniform_per_feature() {
    let data = generate_classification(10_000, 8, 1.0, 0.5, 7).unwrap();
    for f in 0..8 {
        let mut counts = [0usize; 4];
        for row in data.rows() {
            counts[row[f] as usize] += 1;
        }
        assert_eq!(counts, [2500; 4], "feature {f}");
    }
}

#[test]
fn labels_are_balanced_and_informative_features_carry_signal() {
    let data = generate_classification(10_000, 10, 1.0, 0.3, 11).unwrap();
    let pos = data.labels.iter().filter(|&&y| y == 1).count();
    assert_eq!(pos, 5000);
    assert_eq!(data.params.informative.len(), 3);

    for f in 0..10 {
        // Level histogram of the positive class against a flat expectation.
        let mut counts = [0.0f64; 4];
        for (row, &y) in data.rows().zip(&data.labels) {
            if y == 1 {
                counts[row[f] as usize] += 1.0;
            }
        }
        let p = chi2_p_value(&counts, &[pos as f64 / 4.0; 4]);
        if data.params.informative.contains(&f) {
            assert!(p < 1e-6, "informative feature {f}: p = {p}");
        } else {
            assert!(p > 1e-4, "noise feature {f}: p = {p}");
        }
    }
}

#[test]
fn informative_levels_shift_with_the_label() {
    let data = generate_classification(10_000, 4, 2.0, 1.0, 3).unwrap();
    let mean_level = |label: i8| {
        let rows: Vec<&[u8]> = data.rows().zip(&data.labels).filter(|(_, &y)| y == label).map(|(r, _)| r).collect();
        rows.iter().map(|r| r[0] as f64).sum::<f64>() / rows.len() as f64
    };
    assert!(mean_level(1) > mean_level(-1) + 1.5);
}

#[test]
fn file_round_trip_preserves_everything() {
    let data = generate_classification(500, 6, 0.5, 0.5, 99).unwrap();
    let mut buf = Vec::new();
    data.write_to(&mut buf).unwrap();
    let back = Dataset::read_from(&buf[..]).unwrap();
    assert_eq!(back, data);
}
