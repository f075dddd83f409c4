mod common;

use atlas::fingrp::clifford::{self, c_irr_system, clifford_count, extended_quotient_2};
use atlas::fingrp::corpus::{corpus, twisted_example};
use proptest::prelude::*;

use common::*;

#[test]
fn corpus_counts_agree_with_class_counts() {
    for e in corpus() {
        let g = clifford::semidirect_product(&e.n, &e.gamma, &e.action).unwrap();
        let oracle = brute_class_count(&g);
        let rep = clifford_count(&e.n, &e.gamma, &e.action).unwrap();
        assert_eq!(rep.irr_semidirect, oracle, "{}", e.name);
        assert_eq!(rep.extended_quotient_count, oracle, "{}", e.name);
        if rep.n_abelian {
            assert!(rep.cocycle_trivial_everywhere, "{}", e.name);
        }
    }
}

#[test]
fn twisted_example_differs() {
    let e = twisted_example();
    let g = clifford::semidirect_product(&e.n, &e.gamma, &e.action).unwrap();
    let rep = clifford_count(&e.n, &e.gamma, &e.action).unwrap();
    assert_eq!(rep.irr_semidirect, brute_class_count(&g));
    assert_eq!((rep.irr_semidirect, rep.extended_quotient_count), (17, 20));
    assert!(!rep.cocycle_trivial_everywhere);
}

fn action_strategy() -> impl Strategy<Value = (usize, usize, Vec<u32>, Vec<u32>)> {
    (0usize..8, 0usize..4, prop::collection::vec(0u32..24, 0..3), prop::collection::vec(0u32..24, 0..3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fibers_of_both_extended_quotients_agree((gi, kind, g1, g2) in action_strategy()) {
        let (_, g) = small_groups().swap_remove(gi);
        let n = g.order() as u32;
        let g1: Vec<u32> = g1.into_iter().map(|x| x % n).collect();
        let g2: Vec<u32> = g2.into_iter().map(|x| x % n).collect();
        let x = match kind {
            0 => coset_action(&g, &g1),
            1 => conjugation_action(&g),
            2 => disjoint_union(&coset_action(&g, &g1), &coset_action(&g, &g2)),
            _ => product_action(&coset_action(&g, &g1), &coset_action(&g, &g2)),
        };
        let eq = extended_quotient_2(&g, &x).unwrap();
        let first = clifford::extended_quotient_fibers(&g, &x);
        for (i, o) in eq.orbits.iter().enumerate() {
            let oracle = brute_subgroup_classes(&g, &o.stabilizer);
            prop_assert_eq!(first[i], oracle);
            prop_assert_eq!(o.n_irr, oracle);
        }
        let sys = c_irr_system(&g, &x).unwrap();
        prop_assert!(sys.epsilon_bijective);
        prop_assert!(sys.equivariant);
    }
}
