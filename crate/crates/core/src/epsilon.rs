//! ε-systems on finite networks and the minimal-mass functionals that drive
//! the sampling bounds.
//!
//! A cover is an ε-system when, for every ordered pair of blocks `(U_i, U_j)`,
//! the finite value set `{e(x, x') : x ∈ U_i, x' ∈ U_j}` fits inside an open
//! interval of radius ε, i.e. its spread `max − min` is strictly below `2ε`.

use crate::error::{Error, Result};
use crate::network::{FiniteNetwork, MeasuredNetwork};

/// Largest support size accepted by the exact max-min-mass search.
pub const EXACT_MASS_SUPPORT_LIMIT: usize = 10;

/// A finite cover of the node set by nonempty, possibly overlapping blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    blocks: Vec<Vec<usize>>,
}

impl Cover {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidCover("cover has no blocks".into()));
        }
        if let Some(i) = blocks.iter().position(Vec::is_empty) {
            return Err(Error::InvalidCover(format!("block {i} is empty")));
        }
        Ok(Self { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Checks that every index is in range and every node is covered.
    pub fn check_covers(&self, n: usize) -> Result<()> {
        let mut covered = vec![false; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidCover(format!(
                        "block {b} names index {i}, network has {n} nodes"
                    )));
                }
                covered[i] = true;
            }
        }
        match covered.iter().position(|c| !c) {
            Some(i) => Err(Error::InvalidCover(format!("node {i} is not covered"))),
            None => Ok(()),
        }
    }
}

/// `max − min` of `{e(x, x') : x ∈ from, x' ∈ to}`.
pub fn block_pair_spread(net: &FiniteNetwork, from: &[usize], to: &[usize]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in from {
        for &y in to {
            let w = net.weight(x, y);
            lo = lo.min(w);
            hi = hi.max(w);
        }
    }
    hi - lo
}

/// Whether `cover` is an ε-system on `net`. With `refined`, every block must
/// also sit inside a single declared component.
pub fn is_epsilon_system(
    net: &FiniteNetwork,
    cover: &Cover,
    eps: f64,
    refined: bool,
    components: Option<&[Vec<usize>]>,
) -> Result<bool> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    cover.check_covers(net.len())?;
    if refined {
        let components = components.ok_or(Error::MissingComponents)?;
        let owner = component_owner(components, net.len())?;
        let split = cover
            .blocks()
            .iter()
            .any(|b| b.iter().any(|&i| owner[i] != owner[b[0]]));
        if split {
            return Ok(false);
        }
    }
    let limit = 2.0 * eps;
    Ok(cover.blocks().iter().all(|u| {
        cover
            .blocks()
            .iter()
            .all(|v| block_pair_spread(net, u, v) < limit)
    }))
}

fn component_owner(components: &[Vec<usize>], n: usize) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; n];
    for (c, block) in components.iter().enumerate() {
        for &i in block {
            if i >= n {
                return Err(Error::InvalidComponents(format!(
                    "component {c} names index {i}, network has {n} nodes"
                )));
            }
            owner[i] = c;
        }
    }
    if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidComponents(format!(
            "node {i} is not in any component"
        )));
    }
    Ok(owner)
}

/// Least positive block mass of `cover` under the measure of `m`.
pub fn minimal_mass(cover: &Cover, m: &MeasuredNetwork) -> Result<f64> {
    let n = m.network().len();
    for (b, block) in cover.blocks().iter().enumerate() {
        if let Some(&i) = block.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidCover(format!(
                "block {b} names index {i}, network has {n} nodes"
            )));
        }
    }
    cover
        .blocks()
        .iter()
        .map(|b| m.mass_of(b))
        .filter(|&mass| mass > 0.0)
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::InvalidCover("every block has zero mass".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassMode {
    Exact,
    Greedy,
}

/// Result of a max-min-mass search.
#[derive(Debug, Clone, PartialEq)]
pub struct MassSearch {
    pub value: f64,
    /// A refined ε-system attaining `value`, in indices of the full network.
    pub cover: Cover,
    /// No components were declared, so the whole support was treated as one.
    pub components_assumed: bool,
}

/// The supremum of [`minimal_mass`] over refined ε-systems on the support of
/// `m` (exact mode), or a greedy lower bound on it.
pub fn max_min_mass(m: &MeasuredNetwork, eps: f64, mode: MassMode) -> Result<MassSearch> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let support = m.support();
    let restricted = m.restrict_to_support();
    let components_assumed = restricted.components().is_none();
    let components: Vec<Vec<usize>> = match restricted.components() {
        Some(c) => c.to_vec(),
        None => vec![(0..support.len()).collect()],
    };
    let problem = MassProblem {
        net: restricted.network(),
        measure: restricted.measure(),
        owner: component_owner(&components, support.len())?,
        limit: 2.0 * eps,
    };
    let local = match mode {
        MassMode::Exact => {
            if support.len() > EXACT_MASS_SUPPORT_LIMIT {
                return Err(Error::BudgetExceeded {
                    guard: "exact max-min-mass support size",
                    required: support.len() as f64,
                    allowed: EXACT_MASS_SUPPORT_LIMIT as f64,
                });
            }
            problem.exact()
        }
        MassMode::Greedy => problem.greedy(),
    };
    let (value, blocks) = local;
    let blocks = blocks
        .into_iter()
        .map(|b| b.into_iter().map(|i| support[i]).collect())
        .collect();
    Ok(MassSearch {
        value,
        cover: Cover::new(blocks)?,
        components_assumed,
    })
}

/// `(1 − M)^n / M`, the raw sampling bound; may exceed 1.
pub fn sampling_bound(mass: f64, n: usize) -> f64 {
    (1.0 - mass).powi(n as i32) / mass
}

struct MassProblem<'a> {
    net: &'a FiniteNetwork,
    measure: &'a [f64],
    owner: Vec<usize>,
    limit: f64,
}

impl MassProblem<'_> {
    fn mass(&self, block: &[usize]) -> f64 {
        block.iter().map(|&i| self.measure[i]).sum()
    }

    fn compatible(&self, a: &[usize], b: &[usize]) -> bool {
        block_pair_spread(self.net, a, b) < self.limit
            && block_pair_spread(self.net, b, a) < self.limit
    }

    fn singleton_cover(&self) -> (f64, Vec<Vec<usize>>) {
        let value = self
            .measure
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        (value, (0..self.measure.len()).map(|i| vec![i]).collect())
    }

    /// Branch and bound over irredundant covers: the lowest uncovered node
    /// must lie in some block, so branch on the admissible blocks holding it.
    fn exact(&self) -> (f64, Vec<Vec<usize>>) {
        let n = self.measure.len();
        let mut candidates: Vec<(Vec<usize>, f64)> = (1u32..(1 << n))
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|b| b.iter().all(|&i| self.owner[i] == self.owner[b[0]]))
            .filter(|b| block_pair_spread(self.net, b, b) < self.limit)
            .map(|b| {
                let mass = self.mass(&b);
                (b, mass)
            })
            .collect();
        candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

        let (mut best, mut best_cover) = self.singleton_cover();
        let mut chosen: Vec<usize> = Vec::new();
        self.branch(&candidates, 0, f64::INFINITY, &mut chosen, &mut best, &mut best_cover);
        (best, best_cover)
    }

    fn branch(
        &self,
        candidates: &[(Vec<usize>, f64)],
        covered: u32,
        current_min: f64,
        chosen: &mut Vec<usize>,
        best: &mut f64,
        best_cover: &mut Vec<Vec<usize>>,
    ) {
        let n = self.measure.len();
        let full = (1u32 << n) - 1;
        if covered == full {
            if current_min > *best {
                *best = current_min;
                *best_cover = chosen.iter().map(|&c| candidates[c].0.clone()).collect();
            }
            return;
        }
        let v = (!covered).trailing_zeros() as usize;
        for (c, (block, mass)) in candidates.iter().enumerate() {
            if *mass <= *best {
                // sorted by mass, nothing further can improve
                break;
            }
            if !block.contains(&v) {
                continue;
            }
            if !chosen
                .iter()
                .all(|&o| self.compatible(block, &candidates[o].0))
            {
                continue;
            }
            let mask = block.iter().fold(covered, |m, &i| m | (1 << i));
            chosen.push(c);
            self.branch(candidates, mask, current_min.min(*mass), chosen, best, best_cover);
            chosen.pop();
        }
    }

    /// Grow blocks from the heaviest uncovered node, adding further nodes
    /// (heaviest first) while the partial cover stays an ε-system. Falls back
    /// to the singleton cover when that is at least as good or when greedy
    /// growth strands a node.
    fn greedy(&self) -> (f64, Vec<Vec<usize>>) {
        let n = self.measure.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.measure[b].total_cmp(&self.measure[a]).then(a.cmp(&b)));
        let mut covered = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut stranded = false;
        for &seed in &order {
            if covered[seed] {
                continue;
            }
            let mut block = vec![seed];
            if !blocks.iter().all(|b| self.compatible(&block, b)) {
                stranded = true;
                break;
            }
            for &u in &order {
                if covered[u] || u == seed || self.owner[u] != self.owner[seed] {
                    continue;
                }
                block.push(u);
                let ok = block_pair_spread(self.net, &block, &block) < self.limit
                    && blocks.iter().all(|b| self.compatible(&block, b));
                if !ok {
                    block.pop();
                }
            }
            for &i in &block {
                covered[i] = true;
            }
            block.sort_unstable();
            blocks.push(block);
        }
        let singleton = self.singleton_cover();
        if stranded {
            return singleton;
        }
        let value = blocks
            .iter()
            .map(|b| self.mass(b))
            .fold(f64::INFINITY, f64::min);
        if value >= singleton.0 {
            (value, blocks)
        } else {
            singleton
        }
    }
}
