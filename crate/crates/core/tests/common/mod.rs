//! Independent brute-force oracles and seeded generators shared by the
//! integration suites. Nothing here calls the solver it is used to check.

#![allow(dead_code)]

use dirnet_core::network::FiniteNetwork;
use dirnet_core::persistence::Diagram;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random network with `n` nodes. Alternates between small-integer weights
/// (many ties), continuous weights, and weights with nonzero, possibly
/// negative self-weights, depending on `flavour`.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, flavour: u32) -> FiniteNetwork {
    FiniteNetwork::from_fn(n, |i, j| match flavour % 3 {
        0 => rng.gen_range(0..5) as f64,
        1 => {
            if i == j {
                0.0
            } else {
                rng.gen_range(0.1..10.0)
            }
        }
        _ => rng.gen_range(-2.0..6.0),
    })
    .unwrap()
}

/// Random dissimilarity network (zero diagonal, positive off-diagonal).
pub fn random_dissimilarity(rng: &mut ChaCha8Rng, n: usize) -> FiniteNetwork {
    FiniteNetwork::from_fn(n, |i, j| if i == j { 0.0 } else { rng.gen_range(0.1..10.0) }).unwrap()
}

/// Random symmetric dissimilarity network.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> FiniteNetwork {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..i {
            let w = rng.gen_range(0.1..10.0);
            m[i][j] = w;
            m[j][i] = w;
        }
    }
    FiniteNetwork::from_rows(m).unwrap()
}

/// Random metric: Euclidean distances between random planar points.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteNetwork {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
        .collect();
    FiniteNetwork::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt()
        }
    })
    .unwrap()
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// `½ · min dis(R)` over every relation `R ⊆ X × Y` with surjective
/// projections, by depth-first enumeration of pair subsets.
pub fn dn_by_correspondences(x: &FiniteNetwork, y: &FiniteNetwork) -> f64 {
    let pairs: Vec<(usize, usize)> = (0..x.len())
        .flat_map(|a| (0..y.len()).map(move |b| (a, b)))
        .collect();
    let mut best = f64::INFINITY;
    let mut chosen = Vec::new();
    enumerate(x, y, &pairs, 0, &mut chosen, 0.0, &mut best);
    0.5 * best
}

fn enumerate(
    x: &FiniteNetwork,
    y: &FiniteNetwork,
    pairs: &[(usize, usize)],
    k: usize,
    chosen: &mut Vec<(usize, usize)>,
    dis: f64,
    best: &mut f64,
) {
    if dis >= *best {
        // adding pairs never lowers the distortion
        return;
    }
    if k == pairs.len() {
        let covers_x = (0..x.len()).all(|a| chosen.iter().any(|p| p.0 == a));
        let covers_y = (0..y.len()).all(|b| chosen.iter().any(|p| p.1 == b));
        if covers_x && covers_y {
            *best = dis;
        }
        return;
    }
    enumerate(x, y, pairs, k + 1, chosen, dis, best);
    let (a, b) = pairs[k];
    let mut new_dis = dis.max((x.weight(a, a) - y.weight(b, b)).abs());
    for &(a2, b2) in chosen.iter() {
        new_dis = new_dis
            .max((x.weight(a, a2) - y.weight(b, b2)).abs())
            .max((x.weight(a2, a) - y.weight(b2, b)).abs());
    }
    chosen.push((a, b));
    enumerate(x, y, pairs, k + 1, chosen, new_dis, best);
    chosen.pop();
}

fn modified(net: &FiniteNetwork, i: usize, j: usize) -> f64 {
    net.weight(i, i).max(net.weight(i, j)).max(net.weight(j, j))
}

/// Least cost over simple chains `i → j` under the edge cost `cost`, with a
/// singleton chain costing `cost(i, i)`.
pub fn min_chain_cost(
    n: usize,
    i: usize,
    j: usize,
    cost: &dyn Fn(usize, usize) -> f64,
) -> f64 {
    if i == j {
        return cost(i, i);
    }
    let mut best = f64::INFINITY;
    let mut visited = vec![false; n];
    visited[i] = true;
    walk(n, i, j, cost, &mut visited, f64::NEG_INFINITY, &mut best);
    best
}

fn walk(
    n: usize,
    at: usize,
    target: usize,
    cost: &dyn Fn(usize, usize) -> f64,
    visited: &mut [bool],
    so_far: f64,
    best: &mut f64,
) {
    for next in 0..n {
        if visited[next] {
            continue;
        }
        let c = so_far.max(cost(at, next));
        if next == target {
            *best = best.min(c);
            continue;
        }
        visited[next] = true;
        walk(n, next, target, cost, visited, c, best);
        visited[next] = false;
    }
}

/// Nonreciprocal ultrametric by explicit simple-chain enumeration.
pub fn nonreciprocal_by_chains(net: &FiniteNetwork) -> Vec<Vec<f64>> {
    let n = net.len();
    let cost = |a: usize, b: usize| modified(net, a, b);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| min_chain_cost(n, i, j, &cost).max(min_chain_cost(n, j, i, &cost)))
                .collect()
        })
        .collect()
}

/// Reciprocal ultrametric by explicit simple-chain enumeration.
pub fn reciprocal_by_chains(net: &FiniteNetwork) -> Vec<Vec<f64>> {
    let n = net.len();
    let cost = |a: usize, b: usize| modified(net, a, b).max(modified(net, b, a));
    (0..n)
        .map(|i| (0..n).map(|j| min_chain_cost(n, i, j, &cost)).collect())
        .collect()
}

/// Classical single linkage: the largest edge on the minimum spanning tree
/// path (Kruskal), zero diagonal.
pub fn single_linkage(net: &FiniteNetwork) -> Vec<Vec<f64>> {
    let n = net.len();
    let mut edges: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (net.weight(i, j), i, j))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut label: Vec<usize> = (0..n).collect();
    let mut u = vec![vec![0.0; n]; n];
    for (w, i, j) in edges {
        let (li, lj) = (label[i], label[j]);
        if li == lj {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                if label[a] == li && label[b] == lj {
                    u[a][b] = w;
                    u[b][a] = w;
                }
            }
        }
        for l in label.iter_mut() {
            if *l == lj {
                *l = li;
            }
        }
    }
    u
}

/// Bottleneck distance by enumerating every partial matching (tiny diagrams
/// with finite deaths only).
pub fn bottleneck_by_matchings(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    let mut used = vec![false; b.len()];
    match_rec(a, b, 0, &mut used, 0.0, &mut best);
    best
}

fn match_rec(
    a: &[(f64, f64)],
    b: &[(f64, f64)],
    k: usize,
    used: &mut [bool],
    cost: f64,
    best: &mut f64,
) {
    if k == a.len() {
        let rest = b
            .iter()
            .zip(used.iter())
            .filter(|(_, &u)| !u)
            .map(|(p, _)| (p.1 - p.0) / 2.0)
            .fold(cost, f64::max);
        *best = best.min(rest);
        return;
    }
    let p = a[k];
    match_rec(a, b, k + 1, used, cost.max((p.1 - p.0) / 2.0), best);
    for j in 0..b.len() {
        if !used[j] {
            used[j] = true;
            let q = b[j];
            let c = (p.0 - q.0).abs().max((p.1 - q.1).abs());
            match_rec(a, b, k + 1, used, cost.max(c), best);
            used[j] = false;
        }
    }
}

/// Sorted pair list for multiset comparisons.
pub fn sorted_pairs(d: &Diagram) -> Vec<(f64, f64)> {
    let mut p = d.pairs().to_vec();
    p.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    p
}

/// Number of connected components of the graph with the given vertices and
/// edges, via union-find.
pub fn component_count(vertices: &[usize], edges: &[(usize, usize)]) -> usize {
    let max = vertices.iter().copied().max().map_or(0, |m| m + 1);
    let mut parent: Vec<usize> = (0..max).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let n = p[c];
            p[c] = r;
            c = n;
        }
        r
    }
    let mut count = vertices.len();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}
