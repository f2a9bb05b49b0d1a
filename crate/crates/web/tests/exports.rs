use serde_json::Value;
use stabboot_web::{bootstrap_trace, domain_wall_scan, theorem_table};

#[test]
fn table_matches_theory() {
    let rows: Vec<Value> = serde_json::from_str(&theorem_table(5).unwrap()).unwrap();
    assert_eq!(rows.len(), 20);
    for r in rows {
        assert_eq!(r["theory"], r["exact"], "{r}");
    }
    assert!(theorem_table(0).is_err());
}

#[test]
fn scan_endpoints() {
    let pts: Vec<Value> = serde_json::from_str(&domain_wall_scan(8, 1, "revlinear", 20_000, 5, 1).unwrap()).unwrap();
    assert_eq!(pts.len(), 5);
    let p0 = pts[0]["p_hat"].as_f64().unwrap();
    let p1 = pts[4]["p_hat"].as_f64().unwrap();
    assert!((p0 - 0.25).abs() < 0.02, "{p0}");
    assert!((p1 - 1.0 / 32.0).abs() < 0.01, "{p1}");
    assert_eq!(pts[4]["x_count"], 8);
    assert!(domain_wall_scan(8, 1, "ring", 10, 5, 1).is_err());
}

#[test]
fn bootstrap_curves_are_monotone() {
    let v: Value = serde_json::from_str(&bootstrap_trace(8, 20, 2, 30, 10, 3).unwrap()).unwrap();
    let curve: Vec<f64> = v["best_so_far"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(curve.len(), 40);
    assert!(curve.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(v["sample_count"], 30);
    assert_eq!(*curve.last().unwrap(), v["best_loss"].as_f64().unwrap());
}
