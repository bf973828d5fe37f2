//! Directed network analysis: network distance, hierarchical clustering,
//! Rips/Dowker persistent homology, ε-systems and sampling convergence
//! experiments.
//!
//! Networks are finite node sets with an arbitrary real weight matrix. No
//! symmetry, triangle inequality or zero diagonal is assumed anywhere unless a
//! function says so.
//!
//! ```
//! use dirnet_core::{clustering, network::FiniteNetwork, persistence};
//!
//! let circle = FiniteNetwork::directed_circle(6).unwrap();
//! let u = clustering::nonreciprocal(&circle);
//! assert!((u.get(0, 3) - std::f64::consts::PI / 3.0).abs() < 1e-12);
//!
//! let f = persistence::dowker_sink_filtration(&circle, 1).unwrap();
//! let dgms = persistence::persistence(&f).unwrap();
//! assert_eq!(dgms[1].len(), 1);
//! ```

pub mod clustering;
pub mod distance;
pub mod epsilon;
pub mod error;
pub mod io;
pub mod network;
pub mod persistence;
pub mod sampling;

pub use clustering::{MergeTree, Ultrametric};
pub use distance::{Correspondence, MapPair};
pub use epsilon::Cover;
pub use error::{Error, Result};
pub use network::{DirectedCircle, FiniteNetwork, MeasuredNetwork};
pub use persistence::{Diagram, Filtration};
pub use sampling::{ExperimentConfig, ExperimentReport, ExperimentRow, GroundTruth, Method};
