//! Which CNOT-chain layouts may be called "linear" and "reverse linear"? Every
//! candidate pair is enumerated exactly against the closed-form single-layer
//! probabilities for n = 1..6.

use stabboot::ansatz::ChainLayout;
use stabboot::prob::{exact_counts_with, theory_probability, theory_zero_probability, ObservableKind};
use stabboot::{AnsatzSpec, Entanglement, EntanglementConvention};

fn satisfies_theorems(conv: EntanglementConvention) -> bool {
    for n in 1..=6 {
        for ent in Entanglement::ALL {
            let spec = AnsatzSpec::new(n, 1, ent).unwrap();
            for kind in ObservableKind::ALL {
                let c = exact_counts_with(&spec, &kind.build(n).unwrap(), conv).unwrap();
                let p = theory_probability(n, kind, ent).unwrap();
                let z = theory_zero_probability(n, kind, ent).unwrap();
                if !(p.equals_ratio(c.plus_one, c.total)
                    && p.equals_ratio(c.minus_one, c.total)
                    && z.equals_ratio(c.zero, c.total))
                {
                    return false;
                }
            }
        }
    }
    true
}

fn layouts() -> Vec<ChainLayout> {
    let mut v = Vec::new();
    for ascending in [true, false] {
        for forward in [true, false] {
            v.push(ChainLayout { ascending, forward });
        }
    }
    v
}

#[test]
fn frozen_convention_is_consistent() {
    assert!(satisfies_theorems(EntanglementConvention::FROZEN));
    assert!(!satisfies_theorems(EntanglementConvention::SWAPPED));
}

/// The theorems pin down the layouts only up to the order/direction pairings
/// below; the frozen choice is the one whose gate order matches the usual
/// circuit-library naming.
#[test]
fn consistent_conventions() {
    let cascade = [
        ChainLayout { ascending: true, forward: true },
        ChainLayout { ascending: false, forward: false },
    ];
    let fan = [
        ChainLayout { ascending: true, forward: false },
        ChainLayout { ascending: false, forward: true },
    ];
    let mut passing = Vec::new();
    for linear in layouts() {
        for reverse_linear in layouts() {
            let conv = EntanglementConvention { linear, reverse_linear };
            if satisfies_theorems(conv) {
                passing.push(conv);
            }
        }
    }
    assert_eq!(passing.len(), 4, "{passing:?}");
    for conv in &passing {
        assert!(cascade.contains(&conv.linear) && fan.contains(&conv.reverse_linear), "{conv:?}");
    }
    assert!(passing.contains(&EntanglementConvention::FROZEN));
    assert!(passing.contains(&EntanglementConvention::DIRECTION_FLIP));
}
