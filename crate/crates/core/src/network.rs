//! Finite directed networks: a node list together with an arbitrary real
//! weight matrix, optionally equipped with a probability measure and a
//! declared partition into components.
//!
//! Weights carry no metric axioms. They may be negative, asymmetric, and the
//! diagonal is ordinary data (self-weights feed the modified weight and every
//! chain cost).

use std::collections::HashSet;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Tolerance on the total mass of a measure.
pub const MEASURE_SUM_TOLERANCE: f64 = 1e-12;

/// A finite network `(X, e_X)`; `weights` is stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteNetwork {
    nodes: Vec<String>,
    weights: Vec<f64>,
}

impl FiniteNetwork {
    /// Builds a network from node ids and a square row-major matrix.
    pub fn new(nodes: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::InvalidNetwork("network has no nodes".into()));
        }
        if rows.len() != n {
            return Err(Error::InvalidNetwork(format!(
                "weights has {} rows but there are {} nodes",
                rows.len(),
                n
            )));
        }
        let mut weights = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidNetwork(format!(
                    "weights row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            if let Some(j) = row.iter().position(|w| !w.is_finite()) {
                return Err(Error::InvalidNetwork(format!(
                    "weights[{i}][{j}] is not a finite real"
                )));
            }
            weights.extend(row);
        }
        let mut seen = HashSet::with_capacity(n);
        for id in &nodes {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidNetwork(format!("duplicate node id {id:?}")));
            }
        }
        Ok(Self { nodes, weights })
    }

    /// Builds a network whose node ids are `"0"`, `"1"`, ...
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nodes = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(nodes, rows)
    }

    /// Builds a network from a weight function evaluated on every ordered pair.
    pub fn from_fn(n: usize, mut weight: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| weight(i, j)).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// `e_X(x_i, x_j)`. Panics on out-of-range indices.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.nodes.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.nodes.len();
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// All weights in row-major order.
    pub fn values(&self) -> &[f64] {
        &self.weights
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    /// `max(e(x_i, x_i), e(x_i, x_j), e(x_j, x_j))`.
    pub fn modified_weight(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.modified_weight_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn modified_weight_unchecked(&self, i: usize, j: usize) -> f64 {
        self.weight(i, i).max(self.weight(i, j)).max(self.weight(j, j))
    }

    /// Restriction of the weight function to `subset`, in subset order.
    pub fn subnetwork(&self, subset: &[usize]) -> Result<FiniteNetwork> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        for &i in subset {
            self.check_index(i)?;
        }
        let mut seen = HashSet::with_capacity(subset.len());
        if let Some(&dup) = subset.iter().find(|&&i| !seen.insert(i)) {
            return Err(Error::InvalidArgument(format!(
                "subset repeats index {dup}"
            )));
        }
        let nodes = subset.iter().map(|&i| self.nodes[i].clone()).collect();
        let mut weights = Vec::with_capacity(subset.len() * subset.len());
        for &i in subset {
            for &j in subset {
                weights.push(self.weight(i, j));
            }
        }
        Ok(FiniteNetwork { nodes, weights })
    }

    /// The directed circle on `n` equally spaced nodes.
    pub fn directed_circle(n: usize) -> Result<FiniteNetwork> {
        DirectedCircle::Discrete(n).to_network()
    }

    /// Zero diagonal, strictly positive off-diagonal.
    pub fn is_dissimilarity(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let w = self.weight(i, j);
                if i == j {
                    w == 0.0
                } else {
                    w > 0.0
                }
            })
        })
    }

    /// Worst ratio `e(x, x') / e(x', x)` over ordered pairs of distinct nodes.
    /// Defined for dissimilarity networks only; always at least 1.
    pub fn reversibility(&self) -> Result<f64> {
        if !self.is_dissimilarity() {
            return Err(Error::NotDissimilarity);
        }
        let n = self.len();
        let mut rho: f64 = 1.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    rho = rho.max(self.weight(i, j) / self.weight(j, i));
                }
            }
        }
        Ok(rho)
    }

    /// Largest absolute weight, useful for bounding distances to constants.
    pub fn max_abs_weight(&self) -> f64 {
        self.weights.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    /// Reorders nodes: node `perm[k]` of `self` becomes node `k` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Result<FiniteNetwork> {
        if perm.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, network has {} nodes",
                perm.len(),
                self.len()
            )));
        }
        self.subnetwork(perm)
    }
}

/// The directed circle, either as the continuous model or its `n`-point
/// equally spaced discretisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectedCircle {
    Continuous,
    Discrete(usize),
}

impl DirectedCircle {
    /// Counterclockwise arc length from angle `from` to angle `to`, in `[0, 2π)`.
    pub fn arc(from: f64, to: f64) -> f64 {
        let d = (to - from).rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs.
        if d >= TAU {
            0.0
        } else {
            d
        }
    }

    /// Grid angle of node `j` in the `n`-point discretisation.
    pub fn grid_angle(n: usize, j: usize) -> f64 {
        TAU * j as f64 / n as f64
    }

    /// Materialises the discrete circle; the continuous model has no finite
    /// weight matrix.
    pub fn to_network(self) -> Result<FiniteNetwork> {
        match self {
            DirectedCircle::Continuous => Err(Error::InvalidArgument(
                "the continuous circle has no finite weight matrix".into(),
            )),
            DirectedCircle::Discrete(0) => Err(Error::InvalidArgument(
                "directed circle needs at least one node".into(),
            )),
            DirectedCircle::Discrete(n) => FiniteNetwork::from_fn(n, |j, k| {
                let steps = (k + n - j) % n;
                TAU * steps as f64 / n as f64
            }),
        }
    }

    /// Network on the given angles under counterclockwise arc length.
    pub fn network_on_angles(angles: &[f64]) -> Result<FiniteNetwork> {
        FiniteNetwork::from_fn(angles.len(), |i, j| {
            if i == j {
                0.0
            } else {
                Self::arc(angles[i], angles[j])
            }
        })
    }
}

/// A finite network with a probability measure and an optional declared
/// partition of its nodes into components.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredNetwork {
    network: FiniteNetwork,
    measure: Vec<f64>,
    components: Option<Vec<Vec<usize>>>,
}

impl MeasuredNetwork {
    pub fn new(
        network: FiniteNetwork,
        measure: Vec<f64>,
        components: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = network.len();
        if measure.len() != n {
            return Err(Error::InvalidMeasure(format!(
                "measure has {} entries, network has {} nodes",
                measure.len(),
                n
            )));
        }
        if let Some(i) = measure
            .iter()
            .position(|&p| !p.is_finite() || !(0.0..=1.0).contains(&p))
        {
            return Err(Error::InvalidMeasure(format!(
                "measure[{i}] = {} is not in [0, 1]",
                measure[i]
            )));
        }
        let total: f64 = measure.iter().sum();
        if (total - 1.0).abs() > MEASURE_SUM_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "measure sums to {total}, expected 1"
            )));
        }
        if let Some(blocks) = &components {
            validate_partition(blocks, n)?;
        }
        Ok(Self {
            network,
            measure,
            components,
        })
    }

    /// Uniform measure on every node, no components.
    pub fn uniform(network: FiniteNetwork) -> Self {
        let n = network.len();
        Self {
            network,
            measure: vec![1.0 / n as f64; n],
            components: None,
        }
    }

    pub fn with_components(self, components: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(self.network, self.measure, Some(components))
    }

    pub fn network(&self) -> &FiniteNetwork {
        &self.network
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn components(&self) -> Option<&[Vec<usize>]> {
        self.components.as_deref()
    }

    /// Indices carrying positive mass, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.measure.len())
            .filter(|&i| self.measure[i] > 0.0)
            .collect()
    }

    /// Restriction to the support. Components are intersected with the
    /// support and emptied blocks dropped.
    pub fn restrict_to_support(&self) -> MeasuredNetwork {
        let support = self.support();
        let mut position = vec![usize::MAX; self.network.len()];
        for (k, &i) in support.iter().enumerate() {
            position[i] = k;
        }
        let network = self
            .network
            .subnetwork(&support)
            .expect("support of a probability measure is nonempty");
        let measure = support.iter().map(|&i| self.measure[i]).collect();
        let components = self.components.as_ref().map(|blocks| {
            blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .filter(|&&i| position[i] != usize::MAX)
                        .map(|&i| position[i])
                        .collect::<Vec<_>>()
                })
                .filter(|b| !b.is_empty())
                .collect()
        });
        MeasuredNetwork {
            network,
            measure,
            components,
        }
    }

    fn blocks(&self) -> Result<&[Vec<usize>]> {
        self.components().ok_or(Error::MissingComponents)
    }

    /// Component-level network with entry `(a, a')` the least modified weight
    /// from block `a` to block `a'`.
    pub fn induced_nu(&self) -> Result<FiniteNetwork> {
        let net = &self.network;
        self.induced(|x, y| net.modified_weight_unchecked(x, y))
    }

    /// Symmetric component-level network with entry `(a, a')` the least
    /// value of `max(ē(x, x'), ē(x', x))` between the two blocks.
    pub fn induced_lambda(&self) -> Result<FiniteNetwork> {
        let net = &self.network;
        self.induced(|x, y| {
            net.modified_weight_unchecked(x, y)
                .max(net.modified_weight_unchecked(y, x))
        })
    }

    fn induced(&self, cost: impl Fn(usize, usize) -> f64) -> Result<FiniteNetwork> {
        let blocks = self.blocks()?;
        let k = blocks.len();
        let nodes = (0..k).map(|a| format!("C{a}")).collect();
        let rows = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        let mut best = f64::INFINITY;
                        for &x in &blocks[a] {
                            for &y in &blocks[b] {
                                best = best.min(cost(x, y));
                            }
                        }
                        best
                    })
                    .collect()
            })
            .collect();
        FiniteNetwork::new(nodes, rows)
    }

    /// Per declared block, the common self-weight if all self-weights in the
    /// block agree (the path-connectivity constant of that block), else `None`.
    pub fn component_constants(&self) -> Result<Vec<Option<f64>>> {
        let blocks = self.blocks()?;
        Ok(blocks
            .iter()
            .map(|b| {
                let first = self.network.weight(b[0], b[0]);
                b.iter()
                    .all(|&i| self.network.weight(i, i) == first)
                    .then_some(first)
            })
            .collect())
    }

    /// Total mass of a set of node indices.
    pub fn mass_of(&self, block: &[usize]) -> f64 {
        block.iter().map(|&i| self.measure[i]).sum()
    }
}

fn validate_partition(blocks: &[Vec<usize>], n: usize) -> Result<()> {
    let mut owner = vec![None; n];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidComponents(format!("component {b} is empty")));
        }
        for &i in block {
            if i >= n {
                return Err(Error::InvalidComponents(format!(
                    "component {b} names index {i}, network has {n} nodes"
                )));
            }
            if let Some(prev) = owner[i].replace(b) {
                return Err(Error::InvalidComponents(format!(
                    "node {i} lies in components {prev} and {b}"
                )));
            }
        }
    }
    if let Some(i) = owner.iter().position(Option::is_none) {
        return Err(Error::InvalidComponents(format!(
            "node {i} is not in any component"
        )));
    }
    Ok(())
}
