//! Rips and Dowker persistent homology of directed networks over the
//! two-element field.
//!
//! Finite filtrations always have finitely many bars, so every diagram
//! computed here is well defined.

mod diagram;
mod filtration;
mod reduction;

pub use diagram::{bottleneck, Diagram};
pub use filtration::{
    build_filtration, dowker_sink_filtration, dowker_source_filtration, rips_filtration,
    simplex_count, Filtration, FiltrationKind, Simplex, DEFAULT_SIMPLEX_BUDGET,
    MAX_HOMOLOGY_DIM,
};
pub use reduction::persistence;

use crate::error::Result;
use crate::network::FiniteNetwork;

/// Diagrams of `net` under the given filtration, dimensions `0..=homology_dim`.
pub fn diagrams(
    net: &FiniteNetwork,
    kind: FiltrationKind,
    homology_dim: usize,
    budget: usize,
) -> Result<Vec<Diagram>> {
    persistence(&build_filtration(net, kind, homology_dim, budget)?)
}

/// Whether the Dowker sink and source diagrams agree exactly in every
/// dimension up to `homology_dim`.
pub fn dowker_duality_check(net: &FiniteNetwork, homology_dim: usize) -> Result<bool> {
    dowker_duality_check_with_budget(net, homology_dim, DEFAULT_SIMPLEX_BUDGET)
}

pub fn dowker_duality_check_with_budget(
    net: &FiniteNetwork,
    homology_dim: usize,
    budget: usize,
) -> Result<bool> {
    let sink = diagrams(net, FiltrationKind::DowkerSink, homology_dim, budget)?;
    let source = diagrams(net, FiltrationKind::DowkerSource, homology_dim, budget)?;
    Ok(sink == source)
}
