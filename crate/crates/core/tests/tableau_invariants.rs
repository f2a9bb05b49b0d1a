mod common;

use common::*;
use rand::Rng;
use stabboot::rng::trial_rng;
use stabboot::{expectation_heisenberg, Circuit, Letter, PauliString, StabilizerTableau};

#[test]
fn invariants_hold_along_a_long_random_circuit() {
    let n = 24;
    let mut rng = trial_rng(200, 0);
    let mut t = StabilizerTableau::zero_state(n).unwrap();
    let mut gates = Vec::new();
    for step in 0..10_000 {
        let g = random_gate(n, &mut rng);
        t.apply(&g).unwrap();
        gates.push(g);
        if step % 500 == 499 {
            t.check_invariants().unwrap();
        }
    }
    t.check_invariants().unwrap();
    for s in t.stabilizers() {
        assert!(s.is_hermitian());
        assert!(s.sign().is_some());
    }
    let c = Circuit::with_gates(n, gates).unwrap();
    for _ in 0..50 {
        let p = random_pauli(n, &[Letter::I, Letter::X, Letter::Y, Letter::Z], &mut rng);
        assert_eq!(t.expectation(&p).unwrap(), expectation_heisenberg(&c, &p).unwrap());
    }
    for s in t.stabilizers() {
        assert_eq!(t.expectation(&s).unwrap(), 1);
    }
}

#[test]
fn stabilizers_have_expectation_one_across_word_boundaries() {
    let mut rng = trial_rng(201, 0);
    for n in [63, 64, 65, 130] {
        let mut t = StabilizerTableau::zero_state(n).unwrap();
        for _ in 0..(20 * n) {
            t.apply(&random_gate(n, &mut rng)).unwrap();
        }
        t.check_invariants().unwrap();
        let st = t.stabilizers();
        for _ in 0..10 {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let prod = st[i].multiply(&st[j]).unwrap();
            assert_eq!(t.expectation(&prod).unwrap(), 1);
            let minus_one = PauliString::from_letters(vec![Letter::I; n], true).unwrap();
            let neg = prod.multiply(&minus_one).unwrap();
            assert_eq!(t.expectation(&neg).unwrap(), -1);
        }
    }
}
