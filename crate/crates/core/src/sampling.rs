//! Seeded i.i.d. sampling and convergence experiments.
//!
//! Every trial draws from its own ChaCha stream seeded by mixing the master
//! seed with `(sample size, trial index)`, so results do not depend on the
//! order or the thread in which trials run.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{component_target_nr, component_target_r, nonreciprocal, reciprocal};
use crate::distance::{dn_exact_with, map_pair_count, DnOptions, DEFAULT_DN_BUDGET};
use crate::epsilon::{max_min_mass, sampling_bound, MassMode};
use crate::error::{Error, Result};
use crate::network::{DirectedCircle, FiniteNetwork, MeasuredNetwork};
use crate::persistence::{diagrams, bottleneck, Diagram, FiltrationKind, DEFAULT_SIMPLEX_BUDGET};

/// SplitMix64 finaliser.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the RNG stream for one trial.
pub fn trial_seed(master: u64, size: usize, trial: usize) -> u64 {
    splitmix(splitmix(master ^ splitmix(size as u64)) ^ trial as u64)
}

fn check_sample_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("sample size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Draws `n` node indices i.i.d. from the measure of `m` and returns the
/// distinct ones in ascending order.
pub fn sample_indices<R: Rng + ?Sized>(m: &MeasuredNetwork, n: usize, rng: &mut R) -> Vec<usize> {
    let dist = WeightedIndex::new(m.measure()).expect("a probability vector has positive total");
    let mut drawn = vec![false; m.network().len()];
    for _ in 0..n {
        drawn[dist.sample(rng)] = true;
    }
    (0..drawn.len()).filter(|&i| drawn[i]).collect()
}

/// The subnetwork on the distinct nodes of an i.i.d. sample of size `n`.
pub fn sample_iid(m: &MeasuredNetwork, n: usize, seed: u64) -> Result<FiniteNetwork> {
    check_sample_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    m.network().subnetwork(&sample_indices(m, n, &mut rng))
}

/// `n` angles drawn uniformly from `[0, 2π)`.
pub fn sample_circle_angles<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect()
}

/// An i.i.d. uniform sample of `n` points from the continuous directed circle.
pub fn sample_circle(n: usize, seed: u64) -> Result<FiniteNetwork> {
    check_sample_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DirectedCircle::network_on_angles(&sample_circle_angles(n, &mut rng))
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroundTruth {
    Finite(MeasuredNetwork),
    /// Uniform measure on the continuous directed circle.
    ContinuousCircle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `d_N` between the support and the sample.
    Dn,
    /// `d_N` between the component-level nonreciprocal target and the
    /// nonreciprocal clustering of the sample.
    Nr,
    /// Same with reciprocal clustering.
    R,
    /// Bottleneck distance between Dowker sink diagrams.
    Dowker,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dn => "dn",
            Method::Nr => "nr",
            Method::R => "r",
            Method::Dowker => "dowker",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ground_truth: GroundTruth,
    pub epsilon: f64,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub method: Method,
    /// Homology dimension compared by the Dowker method.
    pub dowker_dim: usize,
    pub dn_budget: f64,
    pub simplex_budget: usize,
}

impl ExperimentConfig {
    pub fn new(ground_truth: GroundTruth, method: Method, epsilon: f64) -> Self {
        Self {
            ground_truth,
            epsilon,
            sizes: vec![10, 20, 40],
            trials: 100,
            seed: 0,
            method,
            dowker_dim: 1,
            dn_budget: DEFAULT_DN_BUDGET,
            simplex_budget: DEFAULT_SIMPLEX_BUDGET,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::InvalidArgument(
                "sample sizes must be a nonempty list of positive integers".into(),
            ));
        }
        if matches!(self.ground_truth, GroundTruth::ContinuousCircle)
            && self.method != Method::Dowker
        {
            return Err(Error::InvalidArgument(format!(
                "method {} needs a finite ground truth; the continuous circle supports dowker only",
                self.method.name()
            )));
        }
        Ok(())
    }
}

/// One row of experiment output, per sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub trials: usize,
    pub empirical_freq: f64,
    /// `(1 − M)^n / M`; absent when `M` is not computable (continuous truth).
    pub bound_raw: Option<f64>,
    pub bound_clamped: Option<f64>,
    pub statistic_median: f64,
    pub epsilon: f64,
    pub method: Method,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    /// `M_{ε/2}` (or `M_{ε/4}` for dowker) on the support, when finite.
    pub max_min_mass: Option<f64>,
    /// No components were declared; the whole support counted as one.
    pub components_assumed: bool,
    /// Per-size trial statistics, in trial order.
    #[serde(skip)]
    pub statistics: Vec<Vec<f64>>,
}

pub const CSV_HEADER: &str =
    "n,trials,empirical_freq,bound_raw,bound_clamped,statistic_median,epsilon,method,seed";

impl ExperimentRow {
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.trials,
            self.empirical_freq,
            opt(self.bound_raw),
            opt(self.bound_clamped),
            self.statistic_median,
            self.epsilon,
            self.method.name(),
            self.seed
        )
    }
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }
}

/// Median; mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

enum Target {
    Support(FiniteNetwork),
    Clustering(FiniteNetwork),
    Diagram(Diagram),
}

/// Runs every trial of every sample size and tabulates the frequency of
/// `{statistic ≥ ε}` next to the sampling bound.
pub fn run_convergence_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let dn_opts = DnOptions {
        budget: cfg.dn_budget,
        witness: false,
    };

    let (support, target, mass, components_assumed) = match &cfg.ground_truth {
        GroundTruth::ContinuousCircle => {
            let limit = Diagram::new(cfg.dowker_dim, circle_limit_pairs(cfg.dowker_dim));
            (None, Target::Diagram(limit), None, false)
        }
        GroundTruth::Finite(m) => {
            let support = m.restrict_to_support();
            let assumed = support.components().is_none();
            let with_components = if assumed {
                let all = (0..support.network().len()).collect();
                support.clone().with_components(vec![all])?
            } else {
                support.clone()
            };
            let scale = if cfg.method == Method::Dowker { 0.25 } else { 0.5 };
            let mass = max_min_mass(&with_components, scale * cfg.epsilon, MassMode::Exact)?.value;
            let s = support.network().len();
            let target = match cfg.method {
                Method::Dn => {
                    check_dn_budget(s, s, cfg.dn_budget)?;
                    Target::Support(support.network().clone())
                }
                Method::Nr => {
                    let t = component_target_nr(&with_components)?.to_network();
                    check_dn_budget(t.len(), s, cfg.dn_budget)?;
                    Target::Clustering(t)
                }
                Method::R => {
                    let t = component_target_r(&with_components)?.to_network();
                    check_dn_budget(t.len(), s, cfg.dn_budget)?;
                    Target::Clustering(t)
                }
                Method::Dowker => {
                    let d = diagrams(
                        support.network(),
                        FiltrationKind::DowkerSink,
                        cfg.dowker_dim,
                        cfg.simplex_budget,
                    )?;
                    Target::Diagram(d[cfg.dowker_dim].clone())
                }
            };
            (Some(support), target, Some(mass), assumed)
        }
    };

    let trial = |size: usize, t: usize| -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, size, t));
        let sample = match &support {
            Some(m) => m.network().subnetwork(&sample_indices(m, size, &mut rng))?,
            None => DirectedCircle::network_on_angles(&sample_circle_angles(size, &mut rng))?,
        };
        match &target {
            Target::Support(x) => Ok(dn_exact_with(x, &sample, dn_opts)?.value),
            Target::Clustering(x) => {
                let clustered = match cfg.method {
                    Method::Nr => nonreciprocal(&sample),
                    _ => reciprocal(&sample),
                };
                Ok(dn_exact_with(x, &clustered.to_network(), dn_opts)?.value)
            }
            Target::Diagram(d) => {
                let ds = diagrams(
                    &sample,
                    FiltrationKind::DowkerSink,
                    cfg.dowker_dim,
                    cfg.simplex_budget,
                )?;
                Ok(bottleneck(d, &ds[cfg.dowker_dim]))
            }
        }
    };

    let mut rows = Vec::with_capacity(cfg.sizes.len());
    let mut statistics = Vec::with_capacity(cfg.sizes.len());
    for &size in &cfg.sizes {
        let stats: Vec<f64> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| trial(size, t))
            .collect::<Result<_>>()?;
        let hits = stats.iter().filter(|&&s| s >= cfg.epsilon).count();
        let bound_raw = mass.map(|m| sampling_bound(m, size));
        rows.push(ExperimentRow {
            n: size,
            trials: cfg.trials,
            empirical_freq: hits as f64 / cfg.trials as f64,
            bound_raw,
            bound_clamped: bound_raw.map(|b| b.min(1.0)),
            statistic_median: median(&stats),
            epsilon: cfg.epsilon,
            method: cfg.method,
            seed: cfg.seed,
        });
        statistics.push(stats);
    }
    Ok(ExperimentReport {
        rows,
        max_min_mass: mass,
        components_assumed,
        statistics,
    })
}

/// Known Dowker diagram of the continuous directed circle: one bar `(0, π)`
/// in dimension 1; dimension 0 has a single infinite bar from 0.
fn circle_limit_pairs(dim: usize) -> Vec<(f64, f64)> {
    match dim {
        0 => vec![(0.0, f64::INFINITY)],
        1 => vec![(0.0, std::f64::consts::PI)],
        _ => vec![],
    }
}

fn check_dn_budget(a: usize, b: usize, budget: f64) -> Result<()> {
    let required = map_pair_count(a, b);
    if required > budget {
        Err(Error::BudgetExceeded {
            guard: "dn map-pair budget",
            required,
            allowed: budget,
        })
    } else {
        Ok(())
    }
}
