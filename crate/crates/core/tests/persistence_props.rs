mod common;

use dirnet_core::distance::dn_exact;
use dirnet_core::network::FiniteNetwork;
use dirnet_core::persistence::{
    bottleneck, build_filtration, diagrams, dowker_duality_check, persistence, Diagram,
    FiltrationKind, DEFAULT_SIMPLEX_BUDGET,
};
use proptest::prelude::*;
use rand::Rng;

const KINDS: [FiltrationKind; 3] = [
    FiltrationKind::Rips,
    FiltrationKind::DowkerSink,
    FiltrationKind::DowkerSource,
];

fn dgms(net: &FiniteNetwork, kind: FiltrationKind, dim: usize) -> Vec<Diagram> {
    diagrams(net, kind, dim, DEFAULT_SIMPLEX_BUDGET).unwrap()
}

/// Value of a vertex set under each filtration, computed from scratch.
fn simplex_value(net: &FiniteNetwork, kind: FiltrationKind, vs: &[usize]) -> f64 {
    let n = net.len();
    match kind {
        FiltrationKind::Rips => vs
            .iter()
            .flat_map(|&a| vs.iter().map(move |&b| net.weight(a, b)))
            .fold(f64::NEG_INFINITY, f64::max),
        FiltrationKind::DowkerSink => (0..n)
            .map(|p| vs.iter().map(|&x| net.weight(x, p)).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::INFINITY, f64::min),
        FiltrationKind::DowkerSource => (0..n)
            .map(|p| vs.iter().map(|&x| net.weight(p, x)).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::INFINITY, f64::min),
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

/// Rank over the two-element field by Gaussian elimination on bit rows.
fn rank_z2(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let mask = 1u64 << bit;
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) {
            rows.swap(rank, p);
            let pivot = rows[rank];
            for r in 0..rows.len() {
                if r != rank && rows[r] & mask != 0 {
                    rows[r] ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// `β_k` of the subcomplex of simplices with value `≤ t`.
fn betti(net: &FiniteNetwork, kind: FiltrationKind, k: usize, t: f64) -> usize {
    let n = net.len();
    let alive = |size: usize| -> Vec<Vec<usize>> {
        subsets_of_size(n, size)
            .into_iter()
            .filter(|s| simplex_value(net, kind, s) <= t)
            .collect()
    };
    let boundary_rank = |faces: &[Vec<usize>], cofaces: &[Vec<usize>]| -> usize {
        assert!(faces.len() <= 64);
        let rows = cofaces
            .iter()
            .map(|c| {
                faces
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.iter().all(|v| c.contains(v)))
                    .fold(0u64, |acc, (i, _)| acc | (1 << i))
            })
            .collect();
        rank_z2(rows)
    };
    let ck = alive(k + 1);
    let below = if k == 0 { 0 } else { boundary_rank(&alive(k), &ck) };
    let above = boundary_rank(&ck, &alive(k + 2));
    ck.len() - below - above
}

fn bars_alive(d: &Diagram, t: f64) -> usize {
    d.pairs().iter().filter(|&&(b, death)| b <= t && t < death).count()
}

#[test]
fn bar_counts_match_betti_numbers() {
    let mut rng = common::rng(41);
    for trial in 0..40u32 {
        let n = rng.gen_range(1..=6);
        let net = common::random_network(&mut rng, n, trial);
        for kind in KINDS {
            let top = 2;
            let ds = dgms(&net, kind, top);
            let mut thresholds: Vec<f64> = net.values().to_vec();
            thresholds.sort_by(f64::total_cmp);
            thresholds.dedup();
            for &t in &thresholds {
                for k in 0..=top {
                    assert_eq!(
                        bars_alive(&ds[k], t),
                        betti(&net, kind, k, t),
                        "{kind:?} trial {trial} dim {k} at {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn zero_dimensional_bars_track_components() {
    let mut rng = common::rng(42);
    for trial in 0..40u32 {
        let n = rng.gen_range(2..=9);
        let net = common::random_network(&mut rng, n, trial);
        for kind in KINDS {
            let d0 = &dgms(&net, kind, 0)[0];
            let mut thresholds: Vec<f64> = net.values().to_vec();
            thresholds.sort_by(f64::total_cmp);
            thresholds.dedup();
            for &t in &thresholds {
                let verts: Vec<usize> =
                    (0..n).filter(|&v| simplex_value(&net, kind, &[v]) <= t).collect();
                let edges: Vec<(usize, usize)> = verts
                    .iter()
                    .flat_map(|&a| verts.iter().map(move |&b| (a, b)))
                    .filter(|&(a, b)| a < b && simplex_value(&net, kind, &[a, b]) <= t)
                    .collect();
                assert_eq!(bars_alive(d0, t), common::component_count(&verts, &edges));
            }
            // exactly one class survives
            assert_eq!(d0.essential().count(), 1);
        }
    }
}

#[test]
fn faces_enter_no_later_than_cofaces() {
    let mut rng = common::rng(43);
    for trial in 0..30u32 {
        let net = common::random_network(&mut rng, 6, trial);
        for kind in KINDS {
            let f = build_filtration(&net, kind, 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
            f.validate().unwrap();
            for (s, v) in &f.simplices {
                let vs: Vec<usize> = s.vertices().iter().map(|&x| x as usize).collect();
                assert_eq!(*v, simplex_value(&net, kind, &vs));
            }
        }
    }
}

#[test]
fn sink_and_source_agree() {
    let mut rng = common::rng(44);
    for trial in 0..60u32 {
        let n = rng.gen_range(1..=8);
        let net = common::random_network(&mut rng, n, trial);
        assert!(dowker_duality_check(&net, 2).unwrap(), "trial {trial}");
    }
}

#[test]
fn relabelling_leaves_diagrams_unchanged() {
    let mut rng = common::rng(45);
    for trial in 0..30u32 {
        let n = rng.gen_range(2..=8);
        let net = common::random_network(&mut rng, n, trial);
        let p = common::random_permutation(&mut rng, n);
        let q = net.permuted(&p).unwrap();
        for kind in KINDS {
            assert_eq!(dgms(&net, kind, 2), dgms(&q, kind, 2));
        }
    }
}

#[test]
fn diagrams_are_stable_under_network_distance() {
    let mut rng = common::rng(46);
    for trial in 0..40u32 {
        let a = rng.gen_range(1..=4);
        let b = rng.gen_range(1..=4);
        let x = common::random_network(&mut rng, a, trial);
        // a perturbed copy half the time so the distance is small
        let y = if trial % 2 == 0 {
            FiniteNetwork::from_fn(a, |i, j| x.weight(i, j) + rng.gen_range(-0.3..0.3)).unwrap()
        } else {
            common::random_network(&mut rng, b, trial)
        };
        let d = dn_exact(&x, &y).unwrap();
        for kind in KINDS {
            let (dx, dy) = (dgms(&x, kind, 1), dgms(&y, kind, 1));
            for k in 0..=1 {
                let bn = bottleneck(&dx[k], &dy[k]);
                assert!(bn <= 2.0 * d + 1e-12, "{kind:?} dim {k}: {bn} > 2·{d}");
            }
        }
    }
}

#[test]
fn circle_loops() {
    // the directed circle carries one persistent loop for every n ≥ 3
    for n in 3..=12 {
        let c = FiniteNetwork::directed_circle(n).unwrap();
        let d = dgms(&c, FiltrationKind::DowkerSink, 1);
        assert_eq!(d[1].len(), 1, "n={n}");
        let (b, death) = d[1].pairs()[0];
        assert!((b - std::f64::consts::TAU / n as f64).abs() < 1e-12);
        assert!(death.is_finite() && death > b);
    }
}

#[test]
fn early_exit_keeps_lower_diagrams() {
    let mut rng = common::rng(47);
    for trial in 0..20u32 {
        let net = common::random_network(&mut rng, 7, trial);
        for kind in KINDS {
            let full = dgms(&net, kind, 2);
            let f1 = build_filtration(&net, kind, 1, DEFAULT_SIMPLEX_BUDGET).unwrap();
            let low = persistence(&f1).unwrap();
            assert_eq!(&full[..2], &low[..]);
        }
    }
}

#[test]
fn budget_guard() {
    let c = FiniteNetwork::directed_circle(30).unwrap();
    let err = diagrams(&c, FiltrationKind::Rips, 2, 1000).unwrap_err();
    assert!(err.is_budget());
}

fn finite_diagram() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..5.0f64, 0.01..3.0f64), 0..5)
        .prop_map(|v| v.into_iter().map(|(b, l)| (b, b + l)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bottleneck_matches_matching_enumeration(a in finite_diagram(), b in finite_diagram()) {
        let got = bottleneck(&Diagram::new(1, a.clone()), &Diagram::new(1, b.clone()));
        let want = if a.is_empty() && b.is_empty() {
            0.0
        } else {
            common::bottleneck_by_matchings(&a, &b)
        };
        prop_assert!((got - want).abs() < 1e-12, "{} vs {}", got, want);
    }

    #[test]
    fn bottleneck_is_a_pseudometric(
        a in finite_diagram(), b in finite_diagram(), c in finite_diagram(),
        ea in prop::collection::vec(0.0..5.0f64, 1..3),
    ) {
        let with_essential = |p: &[(f64, f64)]| {
            let mut v = p.to_vec();
            v.extend(ea.iter().map(|&e| (e, f64::INFINITY)));
            Diagram::new(0, v)
        };
        let (da, db, dc) = (with_essential(&a), with_essential(&b), with_essential(&c));
        prop_assert_eq!(bottleneck(&da, &da), 0.0);
        prop_assert_eq!(bottleneck(&da, &db), bottleneck(&db, &da));
        prop_assert!(bottleneck(&da, &dc) <= bottleneck(&da, &db) + bottleneck(&db, &dc) + 1e-12);
    }
}

#[test]
fn mismatched_essential_counts_are_infinitely_far() {
    let a = Diagram::new(0, vec![(0.0, f64::INFINITY)]);
    let b = Diagram::new(0, vec![(0.0, f64::INFINITY), (1.0, f64::INFINITY)]);
    assert_eq!(bottleneck(&a, &b), f64::INFINITY);
    let c = Diagram::new(0, vec![(0.5, f64::INFINITY), (0.0, 2.0)]);
    assert_eq!(bottleneck(&a, &c), 1.0);
}
