//! Ansatz circuits evaluated by the Heisenberg path, the tableau and (for small
//! n) the statevector, plus the fast MSE path against the literal one.

use rand::Rng;
use stabboot::ansatz::{build_ansatz_circuit, compose, encode_features};
use stabboot::dataset::{generate_classification, mse_loss, mse_loss_reference};
use stabboot::dense::{expectation_dense, simulate_dense};
use stabboot::rng::trial_rng;
use stabboot::{
    expectation_heisenberg, expectation_tableau, AngleVector, AnsatzSpec, Entanglement, PauliString,
    StabilizerTableau,
};

fn observables(n: usize) -> Vec<PauliString> {
    let mut v = vec![PauliString::z_string(n).unwrap(), PauliString::x_string(n).unwrap()];
    for r in [0.25, 0.5, 0.75] {
        v.push(PauliString::domain_wall(n, r).unwrap());
    }
    v
}

#[test]
fn exhaustive_small_ansatze() {
    for n in 1..=4 {
        for ent in Entanglement::ALL {
            let spec = AnsatzSpec::new(n, 1, ent).unwrap();
            for idx in 0..(1u64 << (2 * n)) {
                let angles = AngleVector::from_index(idx, n);
                let c = build_ansatz_circuit(&spec, &angles).unwrap();
                let t = StabilizerTableau::from_circuit(&c).unwrap();
                let s = simulate_dense(&c).unwrap();
                for p in observables(n) {
                    let h = expectation_heisenberg(&c, &p).unwrap();
                    assert_eq!(h, expectation_tableau(&t, &p).unwrap());
                    assert!((expectation_dense(&s, &p).unwrap() - h as f64).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn randomized_up_to_64_qubits() {
    let mut rng = trial_rng(300, 0);
    for _ in 0..200 {
        let n = rng.random_range(1..=64);
        let layers = rng.random_range(1..=3);
        let ent = Entanglement::ALL[rng.random_range(0..2)];
        let spec = AnsatzSpec::new(n, layers, ent).unwrap();
        let angles = AngleVector::random(spec.n_params(), &mut rng);
        let c = build_ansatz_circuit(&spec, &angles).unwrap();
        let t = StabilizerTableau::from_circuit(&c).unwrap();
        for p in observables(n) {
            assert_eq!(expectation_heisenberg(&c, &p).unwrap(), expectation_tableau(&t, &p).unwrap());
        }
    }
}

#[test]
fn encoded_rows_match_literal_composition() {
    let mut rng = trial_rng(301, 0);
    for _ in 0..100 {
        let n = rng.random_range(1..=8);
        let spec = AnsatzSpec::new(n, 2, Entanglement::ALL[rng.random_range(0..2)]).unwrap();
        let angles = AngleVector::random(spec.n_params(), &mut rng);
        let levels: Vec<u8> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let c = compose(&encode_features(&levels).unwrap(), &build_ansatz_circuit(&spec, &angles).unwrap()).unwrap();
        let s = simulate_dense(&c).unwrap();
        for p in observables(n) {
            let h = expectation_heisenberg(&c, &p).unwrap();
            assert!((expectation_dense(&s, &p).unwrap() - h as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn fast_loss_equals_reference_loss() {
    for seed in 0..6 {
        let n = 3 + seed as usize * 5;
        let data = generate_classification(40, n, 1.0, 0.5, seed).unwrap();
        let mut rng = trial_rng(302, seed);
        for ent in Entanglement::ALL {
            let spec = AnsatzSpec::new(n, 2, ent).unwrap();
            for obs in observables(n) {
                for _ in 0..5 {
                    let a = AngleVector::random(spec.n_params(), &mut rng);
                    assert_eq!(
                        mse_loss(&a, &spec, &obs, &data).unwrap(),
                        mse_loss_reference(&a, &spec, &obs, &data).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn multi_layer_counts_match_dense_enumeration() {
    use stabboot::prob::exact_counts;
    for (n, layers) in [(2usize, 3usize), (3, 2), (3, 3)] {
        let spec = AnsatzSpec::new(n, layers, Entanglement::ReverseLinear).unwrap();
        let obs = PauliString::z_string(n).unwrap();
        let slots = spec.n_params();
        let mut plus = 0u64;
        for idx in 0..(1u64 << (2 * slots)) {
            let c = build_ansatz_circuit(&spec, &AngleVector::from_index(idx, slots)).unwrap();
            let v = expectation_dense(&simulate_dense(&c).unwrap(), &obs).unwrap();
            plus += (v > 0.5) as u64;
        }
        assert_eq!(exact_counts(&spec, &obs).unwrap().plus_one, plus, "n={n} L={layers}");
    }
}
