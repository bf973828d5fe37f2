//! Persistence diagrams and the bottleneck distance.

use std::fmt::Write as _;

/// A multiset of `(birth, death)` pairs in one homology dimension. Deaths may
/// be `+∞`; zero-persistence pairs are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagram {
    dim: usize,
    pairs: Vec<(f64, f64)>,
}

impl Diagram {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            pairs: Vec::new(),
        }
    }

    /// Builds a diagram, dropping pairs with `birth == death`. Panics when a
    /// death precedes its birth.
    pub fn new(dim: usize, pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut d = Self::empty(dim);
        for (b, death) in pairs {
            d.push(b, death);
        }
        d.sort();
        d
    }

    pub(crate) fn push(&mut self, birth: f64, death: f64) {
        assert!(birth <= death, "death {death} precedes birth {birth}");
        if birth < death {
            self.pairs.push((birth, death));
        }
    }

    pub(crate) fn sort(&mut self) {
        self.pairs
            .sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Pairs sorted by birth, then death.
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn finite(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pairs.iter().copied().filter(|p| p.1.is_finite())
    }

    pub fn essential(&self) -> impl Iterator<Item = f64> + '_ {
        self.pairs
            .iter()
            .filter(|p| p.1.is_infinite())
            .map(|p| p.0)
    }

    /// One `[b, d)` line per bar, sorted by birth.
    pub fn barcode(&self) -> String {
        let mut out = String::new();
        for &(b, d) in &self.pairs {
            if d.is_finite() {
                let _ = writeln!(out, "[{b}, {d})");
            } else {
                let _ = writeln!(out, "[{b}, inf)");
            }
        }
        out
    }
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn half_persistence(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Bottleneck distance: the least, over partial matchings where unmatched
/// points go to the diagonal at half their persistence, of the largest
/// `L∞` displacement. Infinite bars only match infinite bars; differing
/// counts give `+∞`.
pub fn bottleneck(d1: &Diagram, d2: &Diagram) -> f64 {
    let mut e1: Vec<f64> = d1.essential().collect();
    let mut e2: Vec<f64> = d2.essential().collect();
    if e1.len() != e2.len() {
        return f64::INFINITY;
    }
    e1.sort_by(f64::total_cmp);
    e2.sort_by(f64::total_cmp);
    // sorted order is optimal for bottleneck matching on a line
    let essential_cost = e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let a: Vec<(f64, f64)> = d1.finite().collect();
    let b: Vec<(f64, f64)> = d2.finite().collect();
    essential_cost.max(finite_bottleneck(&a, &b))
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = a.iter().chain(b).map(|&p| half_persistence(p)).collect();
    for &p in a {
        for &q in b {
            candidates.push(linf(p, q));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // the largest candidate always admits a matching (send everything to the diagonal)
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_exists(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Left side: points of `a`, then diagonal copies of `b`. Right side: points
/// of `b`, then diagonal copies of `a`.
fn perfect_matching_exists(a: &[(f64, f64)], b: &[(f64, f64)], t: f64) -> bool {
    let (na, nb) = (a.len(), b.len());
    let size = na + nb;
    let adjacency: Vec<Vec<usize>> = (0..size)
        .map(|l| {
            if l < na {
                let mut adj: Vec<usize> = (0..nb).filter(|&j| linf(a[l], b[j]) <= t).collect();
                if half_persistence(a[l]) <= t {
                    adj.push(nb + l);
                }
                adj
            } else {
                let j = l - na;
                let mut adj = Vec::with_capacity(na + 1);
                if half_persistence(b[j]) <= t {
                    adj.push(j);
                }
                adj.extend(nb..nb + na);
                adj
            }
        })
        .collect();
    let mut match_right = vec![usize::MAX; size];
    for l in 0..size {
        let mut visited = vec![false; size];
        if !augment(l, &adjacency, &mut match_right, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(
    l: usize,
    adjacency: &[Vec<usize>],
    match_right: &mut [usize],
    visited: &mut [bool],
) -> bool {
    for &r in &adjacency[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if match_right[r] == usize::MAX || augment(match_right[r], adjacency, match_right, visited)
        {
            match_right[r] = l;
            return true;
        }
    }
    false
}
