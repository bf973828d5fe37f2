mod common;

use std::f64::consts::TAU;

use dirnet_core::clustering::{
    merge_tree, minimax_directed_cost, nonreciprocal, reciprocal, validate_ultrametric,
};
use dirnet_core::network::FiniteNetwork;
use proptest::prelude::*;
use rand::Rng;

fn assert_matrix_eq(got: &[Vec<f64>], want: &[Vec<f64>], what: &str) {
    assert_eq!(got.len(), want.len());
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        for (j, (a, b)) in g.iter().zip(w).enumerate() {
            assert_eq!(a, b, "{what} differs at ({i},{j})");
        }
    }
}

#[test]
fn both_methods_match_chain_enumeration() {
    let mut rng = common::rng(21);
    for trial in 0..150u32 {
        let n = rng.gen_range(1..=7);
        let net = common::random_network(&mut rng, n, trial);
        assert_matrix_eq(
            nonreciprocal(&net).matrix(),
            &common::nonreciprocal_by_chains(&net),
            "nonreciprocal",
        );
        assert_matrix_eq(
            reciprocal(&net).matrix(),
            &common::reciprocal_by_chains(&net),
            "reciprocal",
        );
    }
}

#[test]
fn outputs_are_ultrametrics_and_nested() {
    let mut rng = common::rng(22);
    for trial in 0..200u32 {
        let n = rng.gen_range(1..=12);
        let net = common::random_network(&mut rng, n, trial);
        let nr = nonreciprocal(&net);
        let r = reciprocal(&net);
        assert_eq!(validate_ultrametric(nr.matrix()).unwrap(), None);
        assert_eq!(validate_ultrametric(r.matrix()).unwrap(), None);
        for i in 0..n {
            assert_eq!(nr.get(i, i), net.weight(i, i));
            assert_eq!(r.get(i, i), net.weight(i, i));
            for j in 0..n {
                assert!(nr.get(i, j) <= r.get(i, j));
            }
        }
    }
}

#[test]
fn directed_cost_is_a_chain_minimum() {
    let mut rng = common::rng(23);
    for trial in 0..60u32 {
        let net = common::random_network(&mut rng, 6, trial);
        let m = minimax_directed_cost(&net);
        let cost = |a: usize, b: usize| net.modified_weight(a, b).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m[i][j], common::min_chain_cost(6, i, j, &cost));
            }
        }
    }
}

#[test]
fn symmetric_inputs_collapse_to_single_linkage() {
    let mut rng = common::rng(24);
    for _ in 0..100 {
        let n = rng.gen_range(1..=10);
        let net = common::random_symmetric(&mut rng, n);
        let nr = nonreciprocal(&net);
        let r = reciprocal(&net);
        assert_eq!(nr, r);
        assert_matrix_eq(nr.matrix(), &common::single_linkage(&net), "single linkage");
    }
}

#[test]
fn relabelling_commutes_with_clustering() {
    let mut rng = common::rng(25);
    for trial in 0..60u32 {
        let n = rng.gen_range(2..=9);
        let net = common::random_network(&mut rng, n, trial);
        let p = common::random_permutation(&mut rng, n);
        let permuted = net.permuted(&p).unwrap();
        let (nr, nr_p) = (nonreciprocal(&net), nonreciprocal(&permuted));
        let (r, r_p) = (reciprocal(&net), reciprocal(&permuted));
        for i in 0..n {
            for j in 0..n {
                assert_eq!(nr_p.get(i, j), nr.get(p[i], p[j]));
                assert_eq!(r_p.get(i, j), r.get(p[i], p[j]));
            }
        }
    }
}

#[test]
fn circle_nonreciprocal_is_one_step() {
    for n in 2..=16 {
        let c = FiniteNetwork::directed_circle(n).unwrap();
        let u = nonreciprocal(&c);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 0.0 } else { TAU / n as f64 };
                assert!((u.get(i, j) - want).abs() < 1e-12, "n={n} ({i},{j})");
            }
        }
    }
}

#[test]
fn circle_reciprocal_matches_chains() {
    for n in 2..=8 {
        let c = FiniteNetwork::directed_circle(n).unwrap();
        assert_matrix_eq(
            reciprocal(&c).matrix(),
            &common::reciprocal_by_chains(&c),
            "reciprocal circle",
        );
    }
    // beyond the enumeration range: every pair costs at least the cheapest
    // symmetrised edge, which is half-way round (π) for even n
    for n in (10..=16).step_by(2) {
        let u = reciprocal(&FiniteNetwork::directed_circle(n).unwrap());
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!(u.get(i, j) >= std::f64::consts::PI - 1e-12);
                }
            }
        }
        assert!((u.get(0, n / 2) - std::f64::consts::PI).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn merge_tree_round_trips(n in 1usize..9, seed in any::<u64>(), flavour in 0u32..3) {
        let net = common::random_network(&mut common::rng(seed), n, flavour);
        for u in [nonreciprocal(&net), reciprocal(&net)] {
            let tree = merge_tree(&u).unwrap();
            prop_assert_eq!(tree.to_ultrametric().unwrap(), u);
            let heights: Vec<f64> = tree.merges.iter().map(|m| m.height).collect();
            let sorted = { let mut h = heights.clone(); h.sort_by(f64::total_cmp); h };
            prop_assert_eq!(&heights, &sorted);
        }
    }
}
