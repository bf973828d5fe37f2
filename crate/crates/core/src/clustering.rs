//! Nonreciprocal and reciprocal hierarchical clustering of directed networks.
//!
//! Both methods are minimax path problems over the modified weight `ē` and
//! are solved by a Floyd-Warshall relaxation in the `(min, max)` semiring.
//! A chain consisting of a single node costs `ē(x, x) = e(x, x)`, so the
//! diagonal of every output equals the self-weights of the input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{FiniteNetwork, MeasuredNetwork};

/// Slack allowed by [`validate_ultrametric`].
pub const ULTRAMETRIC_SLACK: f64 = 1e-12;

/// A symmetric matrix satisfying the strong triangle inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Ultrametric {
    nodes: Vec<String>,
    u: Vec<Vec<f64>>,
}

impl Ultrametric {
    /// Checks symmetry and the strong triangle inequality.
    pub fn new(nodes: Vec<String>, u: Vec<Vec<f64>>) -> Result<Self> {
        if nodes.len() != u.len() {
            return Err(Error::InvalidUltrametric(format!(
                "{} nodes but {} rows",
                nodes.len(),
                u.len()
            )));
        }
        if let Some(t) = validate_ultrametric(&u)? {
            return Err(Error::InvalidUltrametric(format!(
                "strong triangle inequality fails at {t:?}"
            )));
        }
        Ok(Self { nodes, u })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.u[i][j]
    }

    /// The ultrametric viewed as a network on the same nodes.
    pub fn to_network(&self) -> FiniteNetwork {
        FiniteNetwork::new(self.nodes.clone(), self.u.clone())
            .expect("ultrametric matrices are square with finite entries")
    }
}

/// `m[i][j]` = least directed chain cost from `i` to `j` under `ē`.
pub fn minimax_directed_cost(net: &FiniteNetwork) -> Vec<Vec<f64>> {
    let n = net.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| net.modified_weight_unchecked(i, j)).collect())
        .collect();
    relax_minimax(&mut m);
    m
}

/// Floyd-Warshall over `(min, max)`: `m[i][k] ← min(m[i][k], max(m[i][j], m[j][k]))`.
fn relax_minimax(m: &mut [Vec<f64>]) {
    let n = m.len();
    for via in 0..n {
        for i in 0..n {
            let through = m[i][via];
            for k in 0..n {
                let candidate = through.max(m[via][k]);
                if candidate < m[i][k] {
                    m[i][k] = candidate;
                }
            }
        }
    }
}

/// `u(x, x') = max(m(x, x'), m(x', x))`.
pub fn nonreciprocal(net: &FiniteNetwork) -> Ultrametric {
    let m = minimax_directed_cost(net);
    let n = net.len();
    let u = (0..n)
        .map(|i| (0..n).map(|j| m[i][j].max(m[j][i])).collect())
        .collect();
    Ultrametric {
        nodes: net.nodes().to_vec(),
        u,
    }
}

/// Minimax over chains of the symmetrised modified weight
/// `max(ē(x_i, x_{i+1}), ē(x_{i+1}, x_i))`.
pub fn reciprocal(net: &FiniteNetwork) -> Ultrametric {
    let n = net.len();
    let mut u: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    net.modified_weight_unchecked(i, j)
                        .max(net.modified_weight_unchecked(j, i))
                })
                .collect()
        })
        .collect();
    relax_minimax(&mut u);
    Ultrametric {
        nodes: net.nodes().to_vec(),
        u,
    }
}

/// Returns the first triple `(i, j, k)` with `u[i][k] > max(u[i][j], u[j][k])`
/// (beyond [`ULTRAMETRIC_SLACK`]), or `None` when `u` is an ultrametric.
pub fn validate_ultrametric(u: &[Vec<f64>]) -> Result<Option<(usize, usize, usize)>> {
    let n = u.len();
    if let Some(i) = u.iter().position(|row| row.len() != n) {
        return Err(Error::InvalidUltrametric(format!(
            "row {i} has {} entries, expected {n}",
            u[i].len()
        )));
    }
    for i in 0..n {
        for j in 0..i {
            if u[i][j] != u[j][i] {
                return Err(Error::InvalidUltrametric(format!(
                    "asymmetric at ({j}, {i}): {} vs {}",
                    u[j][i], u[i][j]
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if u[i][k] > u[i][j].max(u[j][k]) + ULTRAMETRIC_SLACK {
                    return Ok(Some((i, j, k)));
                }
            }
        }
    }
    Ok(None)
}

/// One merge in a dendrogram: at `height`, the listed blocks fuse into one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub height: f64,
    pub blocks: Vec<Vec<String>>,
}

/// Lossless dendrogram form of an [`Ultrametric`]. Leaf heights carry the
/// diagonal, which need not be zero for network ultrametrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeTree {
    pub leaves: Vec<String>,
    pub leaf_heights: Vec<f64>,
    pub merges: Vec<MergeEvent>,
}

/// Builds the dendrogram of `u`: one event per cluster formed at each
/// distinct off-diagonal value, in increasing height.
pub fn merge_tree(u: &Ultrametric) -> Result<MergeTree> {
    if let Some(t) = validate_ultrametric(&u.u)? {
        return Err(Error::InvalidUltrametric(format!(
            "strong triangle inequality fails at {t:?}"
        )));
    }
    let n = u.len();
    let mut heights: Vec<f64> = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| u.u[i][j])
        .collect();
    heights.sort_by(f64::total_cmp);
    heights.dedup();

    // cluster[i] = index of the current cluster containing leaf i
    let mut cluster: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut merges = Vec::new();
    for h in heights {
        // clusters at level h are the classes of {u ≤ h}; with the strong
        // triangle inequality these are unions of current clusters
        let mut seen = vec![false; members.len()];
        let mut next_members: Vec<Vec<usize>> = Vec::new();
        let mut next_cluster = vec![0; n];
        for start in 0..members.len() {
            if seen[start] || members[start].is_empty() {
                continue;
            }
            let rep = members[start][0];
            let mut joined: Vec<usize> = (0..members.len())
                .filter(|&c| !seen[c] && !members[c].is_empty())
                // the diagonal may exceed h, so the start cluster joins itself
                .filter(|&c| c == start || u.u[rep][members[c][0]] <= h)
                .collect();
            joined.sort_unstable();
            for &c in &joined {
                seen[c] = true;
            }
            let merged: Vec<usize> = joined.iter().flat_map(|&c| members[c].clone()).collect();
            if joined.len() > 1 {
                merges.push(MergeEvent {
                    height: h,
                    blocks: joined
                        .iter()
                        .map(|&c| members[c].iter().map(|&i| u.nodes[i].clone()).collect())
                        .collect(),
                });
            }
            for &i in &merged {
                next_cluster[i] = next_members.len();
            }
            next_members.push(merged);
        }
        members = next_members;
        cluster = next_cluster;
    }
    debug_assert!(n == 0 || cluster.iter().all(|&c| c == 0));
    Ok(MergeTree {
        leaves: u.nodes.clone(),
        leaf_heights: (0..n).map(|i| u.u[i][i]).collect(),
        merges,
    })
}

impl MergeTree {
    /// Rebuilds the ultrametric: `u(i, j)` is the height at which `i` and `j`
    /// first share a block, `u(i, i)` the leaf height.
    pub fn to_ultrametric(&self) -> Result<Ultrametric> {
        let n = self.leaves.len();
        if self.leaf_heights.len() != n {
            return Err(Error::InvalidUltrametric(
                "leaf_heights length differs from leaves".into(),
            ));
        }
        let index = |id: &str| {
            self.leaves
                .iter()
                .position(|l| l == id)
                .ok_or_else(|| Error::InvalidUltrametric(format!("unknown leaf {id:?}")))
        };
        let mut u = vec![vec![f64::NAN; n]; n];
        for (i, &h) in self.leaf_heights.iter().enumerate() {
            u[i][i] = h;
        }
        for event in &self.merges {
            let blocks: Vec<Vec<usize>> = event
                .blocks
                .iter()
                .map(|b| b.iter().map(|id| index(id)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            for (a, ba) in blocks.iter().enumerate() {
                for bb in &blocks[a + 1..] {
                    for &i in ba {
                        for &j in bb {
                            u[i][j] = event.height;
                            u[j][i] = event.height;
                        }
                    }
                }
            }
        }
        if u.iter().flatten().any(|v| v.is_nan()) {
            return Err(Error::InvalidUltrametric(
                "merge tree does not join every pair of leaves".into(),
            ));
        }
        Ultrametric::new(self.leaves.clone(), u)
    }
}

/// Limit of nonreciprocal clustering on samples: clustering of the induced
/// component network `ν`.
pub fn component_target_nr(m: &MeasuredNetwork) -> Result<Ultrametric> {
    Ok(nonreciprocal(&m.induced_nu()?))
}

/// Limit of reciprocal clustering on samples: clustering of the induced
/// symmetric component network `λ`.
pub fn component_target_r(m: &MeasuredNetwork) -> Result<Ultrametric> {
    Ok(reciprocal(&m.induced_lambda()?))
}
