//! Network distance `d_N`: correspondences, distortions, and an exact solver
//! over pairs of maps `φ: X → Y`, `ψ: Y → X`.
//!
//! The exact solver minimises `½·max(dis φ, dis ψ, C_{X,Y}, C_{Y,X})`. Every
//! term is an absolute difference `|a − b|` with `a` a weight of `X` and `b`
//! a weight of `Y`, so the optimum is one of finitely many candidate values.
//! The solver binary-searches that candidate list and, for each threshold,
//! runs a backtracking search over map pairs with forward checking. This is
//! the same minimum as plain enumeration; it only skips map pairs that are
//! already known to exceed the threshold.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::epsilon::Cover;
use crate::network::FiniteNetwork;

/// Default cap on `|X|^|Y| · |Y|^|X|`, the number of map pairs (6 nodes each).
pub const DEFAULT_DN_BUDGET: f64 = 2_176_782_336.0;

/// A relation between node indices of `X` and `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    /// Validates that both projections are surjective. Duplicate pairs are
    /// collapsed.
    pub fn new(pairs: Vec<(usize, usize)>, x_len: usize, y_len: usize) -> Result<Self> {
        let mut seen_x = vec![false; x_len];
        let mut seen_y = vec![false; y_len];
        for &(x, y) in &pairs {
            if x >= x_len || y >= y_len {
                return Err(Error::InvalidCorrespondence(format!(
                    "pair ({x}, {y}) out of range for sizes ({x_len}, {y_len})"
                )));
            }
            seen_x[x] = true;
            seen_y[y] = true;
        }
        if let Some(x) = seen_x.iter().position(|s| !s) {
            return Err(Error::InvalidCorrespondence(format!(
                "node {x} of the first network is uncovered"
            )));
        }
        if let Some(y) = seen_y.iter().position(|s| !s) {
            return Err(Error::InvalidCorrespondence(format!(
                "node {y} of the second network is uncovered"
            )));
        }
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        Ok(Self {
            pairs: pairs.into_iter().collect(),
        })
    }

    /// `{(i, i)}` between two networks of the same size.
    pub fn diagonal(n: usize) -> Self {
        Self {
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The correspondence `graph(φ) ∪ graph(ψ)ᵀ` induced by a map pair.
    pub fn from_maps(maps: &MapPair) -> Self {
        let mut pairs: BTreeSet<(usize, usize)> =
            maps.phi.iter().enumerate().map(|(x, &y)| (x, y)).collect();
        pairs.extend(maps.psi.iter().enumerate().map(|(y, &x)| (x, y)));
        Self {
            pairs: pairs.into_iter().collect(),
        }
    }
}

/// Total maps `phi: X → Y` and `psi: Y → X`, as index vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapPair {
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

/// `max |e_X(x, x') − e_Y(y, y')|` over pairs of pairs of `R`.
pub fn distortion_correspondence(
    x: &FiniteNetwork,
    y: &FiniteNetwork,
    r: &Correspondence,
) -> Result<f64> {
    // Re-validate: a correspondence may have been built for other networks.
    let r = Correspondence::new(r.pairs.clone(), x.len(), y.len())?;
    let mut dis: f64 = 0.0;
    for &(a, b) in r.pairs() {
        for &(a2, b2) in r.pairs() {
            dis = dis.max((x.weight(a, a2) - y.weight(b, b2)).abs());
        }
    }
    Ok(dis)
}

fn check_map(map: &[usize], from: usize, to: usize, name: &str) -> Result<()> {
    if map.len() != from {
        return Err(Error::InvalidArgument(format!(
            "{name} has {} entries, domain has {from} nodes",
            map.len()
        )));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= to) {
        return Err(Error::InvalidArgument(format!(
            "{name} maps to {v}, codomain has {to} nodes"
        )));
    }
    Ok(())
}

/// `dis(φ) = max |e_X(x, x') − e_Y(φx, φx')|`.
pub fn distortion_map(x: &FiniteNetwork, y: &FiniteNetwork, phi: &[usize]) -> Result<f64> {
    check_map(phi, x.len(), y.len(), "phi")?;
    let mut dis: f64 = 0.0;
    for a in 0..x.len() {
        for b in 0..x.len() {
            dis = dis.max((x.weight(a, b) - y.weight(phi[a], phi[b])).abs());
        }
    }
    Ok(dis)
}

/// The two co-distortion terms `(C_{X,Y}(φ, ψ), C_{Y,X}(ψ, φ))`.
pub fn codistortion(
    x: &FiniteNetwork,
    y: &FiniteNetwork,
    phi: &[usize],
    psi: &[usize],
) -> Result<(f64, f64)> {
    check_map(phi, x.len(), y.len(), "phi")?;
    check_map(psi, y.len(), x.len(), "psi")?;
    let mut c_xy: f64 = 0.0;
    let mut c_yx: f64 = 0.0;
    for a in 0..x.len() {
        for b in 0..y.len() {
            c_xy = c_xy.max((x.weight(a, psi[b]) - y.weight(phi[a], b)).abs());
            c_yx = c_yx.max((y.weight(b, phi[a]) - x.weight(psi[b], a)).abs());
        }
    }
    Ok((c_xy, c_yx))
}

/// `½·max(dis φ, dis ψ, C_{X,Y}, C_{Y,X})`, an upper bound on `d_N(X, Y)`.
pub fn map_pair_cost(x: &FiniteNetwork, y: &FiniteNetwork, maps: &MapPair) -> Result<f64> {
    let dis_phi = distortion_map(x, y, &maps.phi)?;
    let dis_psi = distortion_map(y, x, &maps.psi)?;
    let (c_xy, c_yx) = codistortion(x, y, &maps.phi, &maps.psi)?;
    Ok(0.5 * dis_phi.max(dis_psi).max(c_xy).max(c_yx))
}

/// Closed form for the distance to the one-node network `(α)`.
pub fn dn_to_point(x: &FiniteNetwork, alpha: f64) -> f64 {
    0.5 * x
        .values()
        .iter()
        .fold(0.0_f64, |m, &w| m.max((w - alpha).abs()))
}

/// Half the entrywise `ℓ∞` distance between two weight matrices on the same
/// node count; bounds `d_N` from above through the diagonal correspondence.
pub fn dn_upper_linf(x: &FiniteNetwork, other: &[Vec<f64>]) -> Result<f64> {
    let n = x.len();
    if other.len() != n || other.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "weight matrix shape does not match {n}x{n}"
        )));
    }
    let mut worst: f64 = 0.0;
    for (i, row) in other.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            worst = worst.max((x.weight(i, j) - w).abs());
        }
    }
    Ok(0.5 * worst)
}

/// Correspondence between `x` and its subnetwork on `sample` (indices into
/// `sample`) in which every pair lies inside a single cover block.
///
/// Each block `U_i` picks a representative `s_i`, the first sample node it
/// contains. Nodes are assigned to the first block of the disjointified
/// cover that holds them, sample representatives to themselves, and two
/// nodes are related when they share a representative. For an ε-system the
/// result has distortion below `4ε`.
pub fn correspondence_from_cover(
    x: &FiniteNetwork,
    cover: &Cover,
    sample: &[usize],
) -> Result<Correspondence> {
    let n = x.len();
    cover.check_covers(n)?;
    if sample.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut sample_pos = vec![usize::MAX; n];
    for (k, &s) in sample.iter().enumerate() {
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, len: n });
        }
        if sample_pos[s] != usize::MAX {
            return Err(Error::InvalidArgument(format!("sample repeats node {s}")));
        }
        sample_pos[s] = k;
    }
    let reps: Vec<usize> = cover
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, block)| {
            sample
                .iter()
                .copied()
                .find(|s| block.contains(s))
                .ok_or_else(|| {
                    Error::InvalidCover(format!("sample misses cover block {i}"))
                })
        })
        .collect::<Result<_>>()?;

    // representative[v] is the sample node that v is matched through
    let mut representative = vec![usize::MAX; n];
    for &s in &reps {
        representative[s] = s;
    }
    for (i, block) in cover.blocks().iter().enumerate() {
        for &v in block {
            if representative[v] == usize::MAX {
                representative[v] = reps[i];
            }
        }
    }
    let mut pairs = Vec::new();
    for v in 0..n {
        for (k, &s) in sample.iter().enumerate() {
            if representative[v] == representative[s] {
                pairs.push((v, k));
            }
        }
    }
    Correspondence::new(pairs, n, sample.len())
}

/// Options for [`dn_exact_with`].
#[derive(Debug, Clone, Copy)]
pub struct DnOptions {
    /// Maximum allowed `|X|^|Y| · |Y|^|X|`.
    pub budget: f64,
    /// Also return the lexicographically first optimal map pair.
    pub witness: bool,
}

impl Default for DnOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_DN_BUDGET,
            witness: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DnResult {
    pub value: f64,
    pub witness: Option<MapPair>,
}

/// Number of map pairs between networks of the given sizes, as a float.
pub fn map_pair_count(x_len: usize, y_len: usize) -> f64 {
    (x_len as f64).powi(y_len as i32) * (y_len as f64).powi(x_len as i32)
}

/// Exact network distance under the default budget.
pub fn dn_exact(x: &FiniteNetwork, y: &FiniteNetwork) -> Result<f64> {
    dn_exact_with(x, y, DnOptions::default()).map(|r| r.value)
}

pub fn dn_exact_with(x: &FiniteNetwork, y: &FiniteNetwork, opts: DnOptions) -> Result<DnResult> {
    let largest = x.len().max(y.len());
    if largest > MAX_EXACT_NODES {
        return Err(Error::BudgetExceeded {
            guard: "dn node limit",
            required: largest as f64,
            allowed: MAX_EXACT_NODES as f64,
        });
    }
    let required = map_pair_count(x.len(), y.len());
    if required > opts.budget {
        return Err(Error::BudgetExceeded {
            guard: "dn map-pair budget",
            required,
            allowed: opts.budget,
        });
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(x.values().len() * y.values().len());
    for &a in x.values() {
        for &b in y.values() {
            candidates.push((a - b).abs());
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let search = MapPairSearch::new(x, y);
    // The largest candidate is always feasible: every term is at most it.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if search.feasible(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let threshold = candidates[lo];
    let witness = if opts.witness {
        search.feasible(threshold)
    } else {
        None
    };
    Ok(DnResult {
        value: 0.5 * threshold,
        witness,
    })
}

/// Constraint model over the variables `φ(x_0..x_{n-1}), ψ(y_0..y_{m-1})`.
struct MapPairSearch<'a> {
    x: &'a FiniteNetwork,
    y: &'a FiniteNetwork,
}

/// Bitmask domain, one bit per candidate image node.
type Domain = u128;

/// Largest network the exact solver accepts, whatever the map-pair budget.
pub const MAX_EXACT_NODES: usize = Domain::BITS as usize;

impl<'a> MapPairSearch<'a> {
    fn new(x: &'a FiniteNetwork, y: &'a FiniteNetwork) -> Self {
        Self { x, y }
    }

    fn vars(&self) -> usize {
        self.x.len() + self.y.len()
    }

    fn domain_size(&self, var: usize) -> usize {
        if var < self.x.len() {
            self.y.len()
        } else {
            self.x.len()
        }
    }

    /// Whether `var_a = val_a` and `var_b = val_b` respect threshold `t`
    /// on every term that involves only these two variables (or one of them
    /// when `var_a == var_b`).
    fn compatible(&self, t: f64, var_a: usize, val_a: usize, var_b: usize, val_b: usize) -> bool {
        let (x, y) = (self.x, self.y);
        let n = x.len();
        let ok = |d: f64| d <= t;
        match (var_a < n, var_b < n) {
            // φ(a) = val_a, φ(b) = val_b
            (true, true) => {
                let (a, b) = (var_a, var_b);
                ok((x.weight(a, b) - y.weight(val_a, val_b)).abs())
                    && ok((x.weight(b, a) - y.weight(val_b, val_a)).abs())
            }
            // ψ(a) = val_a, ψ(b) = val_b
            (false, false) => {
                let (a, b) = (var_a - n, var_b - n);
                ok((y.weight(a, b) - x.weight(val_a, val_b)).abs())
                    && ok((y.weight(b, a) - x.weight(val_b, val_a)).abs())
            }
            (true, false) => self.cross_ok(t, var_a, val_a, var_b - n, val_b),
            (false, true) => self.cross_ok(t, var_b, val_b, var_a - n, val_a),
        }
    }

    /// Co-distortion terms for `φ(xi) = phi_x`, `ψ(yj) = psi_y`.
    fn cross_ok(&self, t: f64, xi: usize, phi_x: usize, yj: usize, psi_y: usize) -> bool {
        let (x, y) = (self.x, self.y);
        (x.weight(xi, psi_y) - y.weight(phi_x, yj)).abs() <= t
            && (y.weight(yj, phi_x) - x.weight(psi_y, xi)).abs() <= t
    }

    /// Returns the lexicographically first map pair whose cost is at most
    /// `t`, if any.
    fn feasible(&self, t: f64) -> Option<MapPair> {
        let vars = self.vars();
        let mut domains: Vec<Domain> = (0..vars)
            .map(|v| {
                (0..self.domain_size(v))
                    .filter(|&val| self.compatible(t, v, val, v, val))
                    .fold(0, |d, val| d | (1 << val))
            })
            .collect();
        if domains.contains(&0) {
            return None;
        }
        // compat[v][val][w] = values of w compatible with v = val
        let compat: Vec<Vec<Vec<Domain>>> = (0..vars)
            .map(|v| {
                (0..self.domain_size(v))
                    .map(|val| {
                        (0..vars)
                            .map(|w| {
                                if w == v {
                                    return 1 << val;
                                }
                                (0..self.domain_size(w))
                                    .filter(|&wv| self.compatible(t, v, val, w, wv))
                                    .fold(0, |d, wv| d | (1 << wv))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut assignment = vec![0usize; vars];
        if self.extend(0, &mut domains, &compat, &mut assignment) {
            let n = self.x.len();
            Some(MapPair {
                phi: assignment[..n].to_vec(),
                psi: assignment[n..].to_vec(),
            })
        } else {
            None
        }
    }

    fn extend(
        &self,
        var: usize,
        domains: &mut [Domain],
        compat: &[Vec<Vec<Domain>>],
        assignment: &mut [usize],
    ) -> bool {
        if var == domains.len() {
            return true;
        }
        let mut remaining = domains[var];
        while remaining != 0 {
            let val = remaining.trailing_zeros() as usize;
            remaining &= remaining - 1;
            let saved: Vec<Domain> = domains[var + 1..].to_vec();
            let row = &compat[var][val];
            let mut wiped = false;
            for w in var + 1..domains.len() {
                domains[w] &= row[w];
                if domains[w] == 0 {
                    wiped = true;
                    break;
                }
            }
            if !wiped {
                assignment[var] = val;
                if self.extend(var + 1, domains, compat, assignment) {
                    return true;
                }
            }
            domains[var + 1..].copy_from_slice(&saved);
        }
        false
    }
}
