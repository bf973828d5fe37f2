//! Rips and Dowker filtrations on finite directed networks.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::FiniteNetwork;

/// Default cap on the number of simplices in a filtration.
pub const DEFAULT_SIMPLEX_BUDGET: usize = 2_000_000;

/// Highest homology dimension supported.
pub const MAX_HOMOLOGY_DIM: usize = 3;

/// A simplex on at most `MAX_HOMOLOGY_DIM + 2` vertices, sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    len: u8,
    verts: [u32; MAX_HOMOLOGY_DIM + 2],
}

impl Simplex {
    /// Panics on unsorted, repeated or too many vertices.
    pub fn new(vertices: &[u32]) -> Self {
        assert!(
            !vertices.is_empty() && vertices.len() <= MAX_HOMOLOGY_DIM + 2,
            "simplex must have 1..={} vertices",
            MAX_HOMOLOGY_DIM + 2
        );
        assert!(
            vertices.windows(2).all(|w| w[0] < w[1]),
            "simplex vertices must be strictly increasing"
        );
        let mut verts = [0; MAX_HOMOLOGY_DIM + 2];
        verts[..vertices.len()].copy_from_slice(vertices);
        Self {
            len: vertices.len() as u8,
            verts,
        }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts[..self.len as usize]
    }

    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    /// Codimension-one faces, the `k`-th omitting vertex `k`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let len = self.len as usize;
        (0..if len > 1 { len } else { 0 }).map(move |skip| {
            let mut verts = [0; MAX_HOMOLOGY_DIM + 2];
            let mut k = 0;
            for (i, &v) in self.vertices().iter().enumerate() {
                if i != skip {
                    verts[k] = v;
                    k += 1;
                }
            }
            Simplex {
                len: (len - 1) as u8,
                verts,
            }
        })
    }
}

/// Simplices with filtration values. `homology_dim` is the highest dimension
/// whose diagram is reported; simplices go one dimension higher so that
/// classes in that dimension can die.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    pub simplices: Vec<(Simplex, f64)>,
    pub homology_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationKind {
    Rips,
    DowkerSink,
    DowkerSource,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of simplices in the complete complex on `n` vertices needed to
/// report homology through `homology_dim`.
pub fn simplex_count(n: usize, homology_dim: usize) -> f64 {
    (1..=homology_dim + 2).map(|k| binomial(n, k)).sum()
}

/// Every vertex subset of size `1..=homology_dim + 2`, in lexicographic order
/// within each size.
fn all_simplices(n: usize, max_size: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::with_capacity(max_size);
    fn rec(n: u32, max_size: usize, stack: &mut Vec<u32>, out: &mut Vec<Simplex>) {
        let start = stack.last().map_or(0, |&v| v + 1);
        for v in start..n {
            stack.push(v);
            out.push(Simplex::new(stack));
            if stack.len() < max_size {
                rec(n, max_size, stack, out);
            }
            stack.pop();
        }
    }
    rec(n as u32, max_size, &mut stack, &mut out);
    out
}

pub fn build_filtration(
    net: &FiniteNetwork,
    kind: FiltrationKind,
    homology_dim: usize,
    budget: usize,
) -> Result<Filtration> {
    if homology_dim > MAX_HOMOLOGY_DIM {
        return Err(Error::InvalidArgument(format!(
            "homology dimension {homology_dim} exceeds the supported maximum {MAX_HOMOLOGY_DIM}"
        )));
    }
    let n = net.len();
    let required = simplex_count(n, homology_dim);
    if required > budget as f64 {
        return Err(Error::BudgetExceeded {
            guard: "simplex budget",
            required,
            allowed: budget as f64,
        });
    }
    let simplices = all_simplices(n, homology_dim + 2);
    let value = |s: &Simplex| -> f64 {
        let vs = s.vertices();
        match kind {
            FiltrationKind::Rips => {
                let mut v = f64::NEG_INFINITY;
                for &a in vs {
                    for &b in vs {
                        v = v.max(net.weight(a as usize, b as usize));
                    }
                }
                v
            }
            FiltrationKind::DowkerSink => (0..n)
                .map(|p| {
                    vs.iter()
                        .map(|&x| net.weight(x as usize, p))
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::INFINITY, f64::min),
            FiltrationKind::DowkerSource => (0..n)
                .map(|p| {
                    vs.iter()
                        .map(|&x| net.weight(p, x as usize))
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::INFINITY, f64::min),
        }
    };
    let simplices = simplices
        .into_par_iter()
        .with_min_len(4096)
        .map(|s| {
            let v = value(&s);
            (s, v)
        })
        .collect();
    Ok(Filtration {
        simplices,
        homology_dim,
    })
}

/// Rips filtration: a simplex enters at the largest weight between any two of
/// its vertices, self-weights included.
pub fn rips_filtration(net: &FiniteNetwork, homology_dim: usize) -> Result<Filtration> {
    build_filtration(net, FiltrationKind::Rips, homology_dim, DEFAULT_SIMPLEX_BUDGET)
}

/// Dowker sink filtration: a simplex enters once some node is reached from
/// every vertex within the resolution.
pub fn dowker_sink_filtration(net: &FiniteNetwork, homology_dim: usize) -> Result<Filtration> {
    build_filtration(net, FiltrationKind::DowkerSink, homology_dim, DEFAULT_SIMPLEX_BUDGET)
}

/// Dowker source filtration: a simplex enters once some node reaches every
/// vertex within the resolution.
pub fn dowker_source_filtration(net: &FiniteNetwork, homology_dim: usize) -> Result<Filtration> {
    build_filtration(
        net,
        FiltrationKind::DowkerSource,
        homology_dim,
        DEFAULT_SIMPLEX_BUDGET,
    )
}

impl Filtration {
    /// Checks face-closure and monotonicity.
    pub fn validate(&self) -> Result<()> {
        let index: std::collections::HashMap<Simplex, f64> =
            self.simplices.iter().copied().collect();
        if index.len() != self.simplices.len() {
            return Err(Error::InvalidFiltration("repeated simplex".into()));
        }
        for (s, v) in &self.simplices {
            if s.dim() > self.homology_dim + 1 {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {:?} exceeds dimension {}",
                    s.vertices(),
                    self.homology_dim + 1
                )));
            }
            if v.is_nan() {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {:?} has NaN value",
                    s.vertices()
                )));
            }
            for f in s.facets() {
                match index.get(&f) {
                    None => {
                        return Err(Error::InvalidFiltration(format!(
                            "face {:?} of {:?} is missing",
                            f.vertices(),
                            s.vertices()
                        )))
                    }
                    Some(fv) if fv > v => {
                        return Err(Error::InvalidFiltration(format!(
                            "face {:?} enters at {fv} after {:?} at {v}",
                            f.vertices(),
                            s.vertices()
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}
