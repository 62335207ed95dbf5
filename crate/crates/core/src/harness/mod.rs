//! Seeded Monte-Carlo experiments.
//!
//! Replicate `r` draws its signals from `derive_seed(seed, SIGNAL, r)` and
//! its projection and subset from `derive_seed(seed, SCHEME, r)`. Workers
//! only read the config, and results are collected in replicate order, so
//! a run is bit-identical for any thread count.

mod blocks;
mod budget;
mod region;

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::estimators::{evaluate_kinds, EstimatorKind, SchemeReuse, SketchConfig};
use crate::models::{Ar1Model, SignalWindow};
use crate::projection::SchemeKind;
use crate::rng::{derive_seed, stream};
use crate::stats::{jackknife_variance, Moments};

pub use blocks::{rmse, run_blocks, BlockConfig, BlockEstimate, BlockReport};
pub use budget::{bit_budget_compare, BudgetConfig, BudgetRow};
pub use region::{bisect_threshold, region_scan, RegionConfig, RegionMc, RegionPoint, RegionScan, RegionThreshold};

/// Compressed dimension for rate `alpha`: `M = floor(N / alpha)`.
///
/// Returns `M` and whether `N / alpha` was an integer.
pub fn m_for_rate(n: usize, alpha: f64) -> Result<(usize, bool)> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(domain(format!("compression rate must satisfy alpha >= 1, got {alpha}")));
    }
    let ratio = n as f64 / alpha;
    let m = ratio.floor() as usize;
    if m == 0 {
        return Err(domain(format!("N={n} at rate {alpha} leaves M < 1")));
    }
    let exact = (ratio - m as f64).abs() <= 1e-9 * ratio;
    Ok((m, exact))
}

/// How projections relate across replicates and lags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeMode {
    /// New projection for every replicate, shared across its lags.
    #[default]
    FreshPerReplicate,
    /// One projection for the whole run (conditional variance).
    FixedAcrossReplicates,
    /// New projection for every replicate and every lag.
    FreshPerLag,
}

impl SchemeMode {
    pub fn name(self) -> &'static str {
        match self {
            SchemeMode::FreshPerReplicate => "fresh-per-replicate",
            SchemeMode::FixedAcrossReplicates => "fixed",
            SchemeMode::FreshPerLag => "fresh-per-lag",
        }
    }
}

impl std::str::FromStr for SchemeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SchemeMode::FreshPerReplicate, SchemeMode::FixedAcrossReplicates, SchemeMode::FreshPerLag]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| domain(format!("unknown scheme mode '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: Ar1Model,
    pub n: usize,
    pub m: usize,
    pub lags: Vec<i64>,
    pub estimators: Vec<EstimatorKind>,
    pub scheme: SchemeKind,
    pub scheme_mode: SchemeMode,
    pub replicates: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Config with every estimator, lags `0..20` and a fresh Gaussian
    /// projection per replicate.
    pub fn new(model: Ar1Model, n: usize, m: usize, replicates: usize, seed: u64) -> Self {
        Self {
            model,
            n,
            m,
            lags: (0..20).collect(),
            estimators: EstimatorKind::ALL.to_vec(),
            scheme: SchemeKind::DenseGaussian,
            scheme_mode: SchemeMode::FreshPerReplicate,
            replicates,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 2 {
            return Err(domain(format!("need at least 2 replicates, got {}", self.replicates)));
        }
        if self.lags.is_empty() {
            return Err(Error::Empty("lag list"));
        }
        if self.estimators.is_empty() {
            return Err(Error::Empty("estimator list"));
        }
        if self.n == 0 {
            return Err(Error::Empty("window length N"));
        }
        if self.m == 0 || self.m > self.n {
            return Err(Error::Dimension(format!("need 1 <= M <= N, got N={}, M={}", self.n, self.m)));
        }
        Ok(())
    }
}

/// Window layout covering every lag in `lags` with `n` aligned samples.
///
/// Returns `(x_len, total_len)`: the `x` window is the first `x_len`
/// samples and `y` spans all `total_len`.
pub(crate) fn lag_layout(n: usize, lags: &[i64]) -> (usize, usize) {
    let lo = lags.iter().copied().min().unwrap_or(0);
    let hi = lags.iter().copied().max().unwrap_or(0);
    let back = lo.min(0).unsigned_abs() as usize;
    let ahead = hi.max(0) as usize;
    (n + back, n + back + ahead)
}

/// Statistics of one estimator at one lag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRow {
    pub estimator: EstimatorKind,
    pub tau: i64,
    pub mean: f64,
    pub variance: f64,
    pub se_mean: f64,
    /// Jackknife standard error of `variance`.
    pub se_variance: f64,
    pub replicates: usize,
}

/// Result of [`run_mc`]. Equality ignores `elapsed`.
#[derive(Debug, Clone)]
pub struct McSummary {
    pub config: ExperimentConfig,
    /// Estimator-major, then lag.
    pub rows: Vec<McRow>,
    /// `samples[kind][lag][replicate]`
    pub samples: Vec<Vec<Vec<f64>>>,
    pub elapsed: Duration,
}

impl PartialEq for McSummary {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.rows == other.rows && self.samples == other.samples
    }
}

impl McSummary {
    fn index(&self, kind: EstimatorKind, tau: i64) -> Option<(usize, usize)> {
        let k = self.config.estimators.iter().position(|&e| e == kind)?;
        let l = self.config.lags.iter().position(|&t| t == tau)?;
        Some((k, l))
    }

    pub fn row(&self, kind: EstimatorKind, tau: i64) -> Option<&McRow> {
        let (k, l) = self.index(kind, tau)?;
        self.rows.get(k * self.config.lags.len() + l)
    }

    pub fn samples(&self, kind: EstimatorKind, tau: i64) -> Option<&[f64]> {
        let (k, l) = self.index(kind, tau)?;
        Some(&self.samples[k][l])
    }
}

fn replicate_values(cfg: &ExperimentConfig, r: u64, x_len: usize, total: usize) -> Result<Vec<Vec<f64>>> {
    let (x, y) = cfg.model.generate_pair(total, derive_seed(cfg.seed, stream::SIGNAL, r))?;
    let x = if x_len < total { x.slice(0, x_len)? } else { x };
    let draws = match cfg.scheme_mode {
        SchemeMode::FixedAcrossReplicates => derive_seed(cfg.seed, stream::SCHEME, u64::MAX),
        _ => derive_seed(cfg.seed, stream::SCHEME, r),
    };
    let sketch = SketchConfig {
        scheme: cfg.scheme,
        m: cfg.m,
        reuse: match cfg.scheme_mode {
            SchemeMode::FreshPerLag => SchemeReuse::FreshPerLag,
            _ => SchemeReuse::Shared,
        },
    };
    evaluate_kinds(&x, &y, cfg.n, &cfg.lags, &cfg.estimators, &sketch, draws)
}

/// Runs `config.replicates` independent replicates on the rayon pool.
pub fn run_mc(config: &ExperimentConfig) -> Result<McSummary> {
    config.validate()?;
    let start = Instant::now();
    let (x_len, total) = lag_layout(config.n, &config.lags);
    let per_rep: Vec<Vec<Vec<f64>>> = (0..config.replicates as u64)
        .into_par_iter()
        .map(|r| replicate_values(config, r, x_len, total))
        .collect::<Result<_>>()?;

    let nl = config.lags.len();
    let mut samples = vec![vec![Vec::with_capacity(config.replicates); nl]; config.estimators.len()];
    for rep in &per_rep {
        for (k, row) in rep.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                samples[k][l].push(v);
            }
        }
    }
    drop(per_rep);

    let mut rows = Vec::with_capacity(config.estimators.len() * nl);
    for (k, &kind) in config.estimators.iter().enumerate() {
        for (l, &tau) in config.lags.iter().enumerate() {
            let col = &samples[k][l];
            let m = Moments::of(col);
            rows.push(McRow {
                estimator: kind,
                tau,
                mean: m.mean,
                variance: m.variance,
                se_mean: m.se_mean(),
                se_variance: jackknife_variance(col).se,
                replicates: col.len(),
            });
        }
    }
    Ok(McSummary { config: config.clone(), rows, samples, elapsed: start.elapsed() })
}

/// Standardizes a series to zero mean and unit variance.
pub(crate) fn standardize(v: &[f64]) -> Result<Vec<f64>> {
    let m = Moments::of(v);
    if !(m.variance > 0.0) {
        return Err(Error::InsufficientData("series has zero variance".into()));
    }
    let sd = m.variance.sqrt();
    Ok(v.iter().map(|x| (x - m.mean) / sd).collect())
}

pub(crate) fn window(v: Vec<f64>) -> Result<SignalWindow> {
    SignalWindow::new(v, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{var_CN_finite, var_cN_finite, var_consecutive};

    fn base(a: f64, r: usize) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(Ar1Model::new(a).unwrap(), 200, 20, r, 11);
        c.lags = vec![0, 1, 3];
        c.estimators = vec![EstimatorKind::Plain, EstimatorKind::Compressed, EstimatorKind::Consecutive];
        c
    }

    #[test]
    fn rate_rounding() {
        assert_eq!(m_for_rate(1000, 10.0).unwrap(), (100, true));
        assert_eq!(m_for_rate(1024, 10.0).unwrap(), (102, false));
        assert!(m_for_rate(5, 10.0).is_err());
        assert!(m_for_rate(5, 0.5).is_err());
    }

    #[test]
    fn two_replicates_are_legal() {
        let s = run_mc(&base(0.5, 2)).unwrap();
        for row in &s.rows {
            assert_eq!(row.replicates, 2);
            assert!(row.variance.is_finite() && row.variance >= 0.0);
        }
        assert!(run_mc(&base(0.5, 1)).is_err());
    }

    #[test]
    fn identical_across_thread_counts() {
        let cfg = base(0.7, 40);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_mc(&cfg)).unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(|| run_mc(&cfg)).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn negative_and_positive_lags() {
        let mut c = base(0.7, 5);
        c.lags = vec![-4, 0, 6];
        let s = run_mc(&c).unwrap();
        assert_eq!(s.rows.len(), 9);
        assert!(s.row(EstimatorKind::Plain, -4).is_some());
    }

    #[test]
    fn fixed_mode_only_changes_sketched_estimators() {
        // With the signal as the only randomness left, plain estimates are
        // unchanged and compressed ones differ from the fresh mode.
        let mut fixed = base(0.0, 30);
        fixed.scheme_mode = SchemeMode::FixedAcrossReplicates;
        let fresh = base(0.0, 30);
        let a = run_mc(&fixed).unwrap();
        let b = run_mc(&fresh).unwrap();
        assert_eq!(a.samples(EstimatorKind::Plain, 0), b.samples(EstimatorKind::Plain, 0));
        assert_ne!(a.samples(EstimatorKind::Compressed, 0), b.samples(EstimatorKind::Compressed, 0));
    }

    #[test]
    fn variance_ordering_for_correlated_and_white_signals() {
        // Smaller copy of the Fig. 1 setting.
        let mut c = base(0.7, 1500);
        c.lags = vec![0, 1];
        let s = run_mc(&c).unwrap();
        for tau in [0, 1] {
            let plain = s.row(EstimatorKind::Plain, tau).unwrap().variance;
            let comp = s.row(EstimatorKind::Compressed, tau).unwrap().variance;
            let cons = s.row(EstimatorKind::Consecutive, tau).unwrap().variance;
            assert!(plain < comp && comp < cons, "tau={tau}: {plain} {comp} {cons}");
        }
        let mut w = base(0.0, 1500);
        w.lags = vec![0];
        let s = run_mc(&w).unwrap();
        let comp = s.row(EstimatorKind::Compressed, 0).unwrap().variance;
        let cons = s.row(EstimatorKind::Consecutive, 0).unwrap().variance;
        assert!(comp > cons);
    }

    #[test]
    fn variances_agree_with_theory() {
        let mut c = base(0.5, 3000);
        c.lags = vec![0, 2];
        let s = run_mc(&c).unwrap();
        let model = c.model;
        for tau in [0, 2] {
            let checks = [
                (EstimatorKind::Plain, var_cN_finite(&model, c.n, tau).unwrap()),
                (EstimatorKind::Compressed, var_CN_finite(&model, c.n, c.m, 0.0, tau).unwrap()),
                (EstimatorKind::Consecutive, var_consecutive(&model, c.m, tau).unwrap()),
            ];
            for (kind, theory) in checks {
                let row = s.row(kind, tau).unwrap();
                let z = (row.variance - theory) / row.se_variance;
                assert!(z.abs() < 5.0, "{kind:?} tau={tau}: mc {} theory {theory} z {z}", row.variance);
            }
        }
    }

    #[test]
    fn layout_covers_lags() {
        assert_eq!(lag_layout(10, &[0, 5]), (10, 15));
        assert_eq!(lag_layout(10, &[-3, 2]), (13, 15));
        assert_eq!(lag_layout(10, &[-3, -1]), (13, 13));
    }
}
