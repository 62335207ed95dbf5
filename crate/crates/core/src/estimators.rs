//! Plain, compressed, subsampled and one-bit estimators of `Gamma_xy(tau)`.
//!
//! All quantized estimators use `sign(0) = +1` and count agreements in
//! integers, so their raw values are exact multiples of `2/len` in `[-1, 1]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{dimension, domain, Error, Result};
use crate::models::{lagged_pair, SignalWindow};
use crate::projection::{ProjectionScheme, RealizedScheme, SchemeKind, SparseMap};
use crate::rng::{derive_seed, stream};
use crate::stats::{pairwise_dot, pairwise_sum_by};

/// Aligned windows `x` and `y` at lag `tau`, both of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaggedPair {
    x: Vec<f64>,
    y: Vec<f64>,
    tau: i64,
}

impl LaggedPair {
    pub fn new(x: Vec<f64>, y: Vec<f64>, tau: i64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Empty("lagged pair"));
        }
        if x.len() != y.len() {
            return Err(dimension(format!("x has {} samples, y has {}", x.len(), y.len())));
        }
        Ok(Self { x, y, tau })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn tau(&self) -> i64 {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[inline]
fn positive(v: f64) -> bool {
    v >= 0.0
}

/// `(2 * agree - len) / len`, computed from integer counts.
fn sign_average(agree: usize, len: usize) -> f64 {
    (2 * agree as i64 - len as i64) as f64 / len as f64
}

/// `c_N = x^T y / N`.
pub fn plain_corr(p: &LaggedPair) -> f64 {
    pairwise_dot(&p.x, &p.y) / p.len() as f64
}

/// `c_M`: the plain estimator over the first `m` entries of the pair.
pub fn consecutive_corr(p: &LaggedPair, m: usize) -> Result<f64> {
    if m == 0 || m > p.len() {
        return Err(dimension(format!("need 1 <= M <= N, got N={}, M={m}", p.len())));
    }
    Ok(pairwise_dot(&p.x[..m], &p.y[..m]) / m as f64)
}

/// `C_N = (Phi x)^T (Phi y)` from already-projected vectors.
pub fn compressed_from_projections(px: &[f64], py: &[f64]) -> f64 {
    pairwise_dot(px, py)
}

/// `C_N = (Phi x)^T (Phi y)` for an i.i.d.-entry scheme.
///
/// Subsampling without replacement is not a matrix estimator; use
/// [`subsampled_corr`] with its index map instead.
pub fn compressed_corr(p: &LaggedPair, s: &RealizedScheme) -> Result<f64> {
    if s.kind() == SchemeKind::SubsampleWithoutReplacement {
        return Err(Error::Unsupported(
            "compressed_corr needs an i.i.d. scheme; use subsampled_corr for without-replacement".into(),
        ));
    }
    Ok(compressed_from_projections(&s.apply(&p.x)?, &s.apply(&p.y)?))
}

fn sorted_indices(p: &LaggedPair, idx: &SparseMap) -> Result<Vec<usize>> {
    if idx.bucket.is_empty() {
        return Err(Error::Empty("subset"));
    }
    let mut sorted = idx.bucket.clone();
    sorted.sort_unstable();
    if let Some(&last) = sorted.last() {
        if last >= p.len() {
            return Err(Error::Range(format!("subset index {last} outside 0..{}", p.len())));
        }
    }
    Ok(sorted)
}

/// `C_M = M^-1 sum_{i in S} x_i y_i`.
///
/// Terms are summed in index order, so a full selection reproduces
/// [`plain_corr`] bit for bit.
pub fn subsampled_corr(p: &LaggedPair, idx: &SparseMap) -> Result<f64> {
    let s = sorted_indices(p, idx)?;
    Ok(pairwise_sum_by(s.len(), |k| p.x[s[k]] * p.y[s[k]]) / s.len() as f64)
}

/// `c^q_N = N^-1 sign(x)^T sign(y)`.
pub fn quantized_plain(p: &LaggedPair) -> f64 {
    let agree = p.x.iter().zip(&p.y).filter(|(a, b)| positive(**a) == positive(**b)).count();
    sign_average(agree, p.len())
}

/// `M^-1 Sign(Phi x)^T Sign(Phi y)`.
///
/// For the without-replacement kind the projection is the selected samples
/// themselves, which makes this the quantized subsampled estimator.
pub fn quantized_compressed(p: &LaggedPair, s: &RealizedScheme) -> Result<f64> {
    Ok(quantized_from_projections(&s.apply(&p.x)?, &s.apply(&p.y)?))
}

pub fn quantized_from_projections(px: &[f64], py: &[f64]) -> f64 {
    let agree = px.iter().zip(py).filter(|(a, b)| positive(**a) == positive(**b)).count();
    sign_average(agree, px.len())
}

/// Mean of `sign(x_i) sign(y_i)` over the subset.
pub fn quantized_subsampled(p: &LaggedPair, idx: &SparseMap) -> Result<f64> {
    let s = sorted_indices(p, idx)?;
    let agree = s.iter().filter(|&&i| positive(p.x[i]) == positive(p.y[i])).count();
    Ok(sign_average(agree, s.len()))
}

/// `sin(pi * raw / 2)`, the inverse of the arcsin distortion.
pub fn arcsin_correct(raw: f64) -> Result<f64> {
    if !(raw.abs() <= 1.0) {
        return Err(domain(format!("quantized raw value must lie in [-1, 1], got {raw}")));
    }
    Ok((std::f64::consts::FRAC_PI_2 * raw).sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    /// `c_N`
    Plain,
    /// `c_M` on `M` consecutive samples
    Consecutive,
    /// `C_N`
    Compressed,
    /// `C_M` (without replacement)
    Subsampled,
    /// `c^q_N`
    Quantized,
    QuantizedSin,
    /// `C^q_N`
    QuantizedCompressed,
    QuantizedCompressedSin,
    /// `C^q_M`
    QuantizedSubsampled,
    QuantizedSubsampledSin,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 10] = [
        EstimatorKind::Plain,
        EstimatorKind::Consecutive,
        EstimatorKind::Compressed,
        EstimatorKind::Subsampled,
        EstimatorKind::Quantized,
        EstimatorKind::QuantizedSin,
        EstimatorKind::QuantizedCompressed,
        EstimatorKind::QuantizedCompressedSin,
        EstimatorKind::QuantizedSubsampled,
        EstimatorKind::QuantizedSubsampledSin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Plain => "plain",
            EstimatorKind::Consecutive => "consecutive",
            EstimatorKind::Compressed => "compressed",
            EstimatorKind::Subsampled => "subsampled",
            EstimatorKind::Quantized => "quantized",
            EstimatorKind::QuantizedSin => "quantized-sin",
            EstimatorKind::QuantizedCompressed => "quantized-compressed",
            EstimatorKind::QuantizedCompressedSin => "quantized-compressed-sin",
            EstimatorKind::QuantizedSubsampled => "quantized-subsampled",
            EstimatorKind::QuantizedSubsampledSin => "quantized-subsampled-sin",
        }
    }

    pub fn is_quantized(self) -> bool {
        !matches!(
            self,
            EstimatorKind::Plain | EstimatorKind::Consecutive | EstimatorKind::Compressed | EstimatorKind::Subsampled
        )
    }

    pub fn is_sin_corrected(self) -> bool {
        matches!(
            self,
            EstimatorKind::QuantizedSin | EstimatorKind::QuantizedCompressedSin | EstimatorKind::QuantizedSubsampledSin
        )
    }

    /// Whether the estimator works on `M` values rather than `N`.
    pub fn uses_m(self) -> bool {
        !matches!(self, EstimatorKind::Plain | EstimatorKind::Quantized | EstimatorKind::QuantizedSin)
    }

    pub fn uses_scheme(self) -> bool {
        matches!(
            self,
            EstimatorKind::Compressed | EstimatorKind::QuantizedCompressed | EstimatorKind::QuantizedCompressedSin
        )
    }

    pub fn uses_subset(self) -> bool {
        matches!(
            self,
            EstimatorKind::Subsampled | EstimatorKind::QuantizedSubsampled | EstimatorKind::QuantizedSubsampledSin
        )
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| domain(format!("unknown estimator '{s}'")))
    }
}

/// Whether one projection is drawn per call and reused for every lag, or
/// redrawn for each lag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeReuse {
    #[default]
    Shared,
    FreshPerLag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchConfig {
    pub scheme: SchemeKind,
    pub m: usize,
    pub reuse: SchemeReuse,
}

/// One estimator evaluated over a list of lags.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSeries {
    pub kind: EstimatorKind,
    pub lags: Vec<i64>,
    pub values: Vec<f64>,
    pub n: usize,
    pub m: Option<usize>,
    pub scheme: Option<SchemeKind>,
}

/// Evaluates one estimator at each lag.
///
/// Random draws derive from `seed`: the projection from the `SCHEME`
/// stream and the subset from the `SUBSET` stream, either once or per lag
/// index depending on `sketch.reuse`.
pub fn estimate_series(
    x: &SignalWindow,
    y: &SignalWindow,
    n: usize,
    lags: &[i64],
    kind: EstimatorKind,
    sketch: &SketchConfig,
    seed: u64,
) -> Result<EstimateSeries> {
    let values = evaluate_kinds(x, y, n, lags, &[kind], sketch, seed)?.pop().expect("one kind");
    Ok(EstimateSeries {
        kind,
        lags: lags.to_vec(),
        values,
        n,
        m: kind.uses_m().then_some(sketch.m),
        scheme: kind.uses_scheme().then_some(sketch.scheme),
    })
}

struct Draws {
    scheme: Option<RealizedScheme>,
    subset: Option<SparseMap>,
}

impl Draws {
    fn new(kinds: &[EstimatorKind], scheme: &Option<ProjectionScheme>, n: usize, m: usize, seed: u64) -> Result<Self> {
        let scheme = match scheme {
            Some(s) if kinds.iter().any(|k| k.uses_scheme()) => Some(s.sample(derive_seed(seed, stream::SCHEME, 0))),
            _ => None,
        };
        let subset = if kinds.iter().any(|k| k.uses_subset()) {
            Some(crate::projection::subsample_without_replacement(n, m, derive_seed(seed, stream::SUBSET, 0))?)
        } else {
            None
        };
        Ok(Self { scheme, subset })
    }
}

/// Evaluates several estimators on the same draws; returns one row of
/// values per kind, one column per lag.
///
/// All kinds share the projection and the subset, and the projection of
/// `x` is computed once when the scheme is shared (the `x` window does not
/// depend on the lag).
pub fn evaluate_kinds(
    x: &SignalWindow,
    y: &SignalWindow,
    n: usize,
    lags: &[i64],
    kinds: &[EstimatorKind],
    sketch: &SketchConfig,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let m = sketch.m;
    let any_m = kinds.iter().any(|k| k.uses_m());
    let scheme = if kinds.iter().any(|k| k.uses_scheme()) {
        Some(ProjectionScheme::new(sketch.scheme, n, m)?)
    } else {
        if any_m && (m == 0 || m > n) {
            return Err(dimension(format!("need 1 <= M <= N, got N={n}, M={m}")));
        }
        None
    };
    let shared = match sketch.reuse {
        SchemeReuse::Shared => Some(Draws::new(kinds, &scheme, n, m, seed)?),
        SchemeReuse::FreshPerLag => None,
    };
    let mut out = vec![Vec::with_capacity(lags.len()); kinds.len()];
    let mut px = vec![0.0; m];
    let mut py = vec![0.0; m];
    let mut px_ready = false;
    for (li, &tau) in lags.iter().enumerate() {
        let pair = lagged_pair(x, y, tau, n)?;
        let fresh;
        let draws = match &shared {
            Some(d) => d,
            None => {
                fresh = Draws::new(kinds, &scheme, n, m, derive_seed(seed, stream::LAG, li as u64))?;
                &fresh
            }
        };
        if let Some(s) = &draws.scheme {
            if shared.is_none() || !px_ready {
                s.apply_into(pair.x(), &mut px)?;
                px_ready = true;
            }
            s.apply_into(pair.y(), &mut py)?;
        }
        for (row, &kind) in out.iter_mut().zip(kinds) {
            row.push(evaluate_one(kind, &pair, m, draws, &px, &py)?);
        }
    }
    Ok(out)
}

fn evaluate_one(
    kind: EstimatorKind,
    pair: &LaggedPair,
    m: usize,
    draws: &Draws,
    px: &[f64],
    py: &[f64],
) -> Result<f64> {
    let without_repl = draws.scheme.as_ref().map(|s| s.kind()) == Some(SchemeKind::SubsampleWithoutReplacement);
    let raw = match kind {
        EstimatorKind::Plain => return Ok(plain_corr(pair)),
        EstimatorKind::Consecutive => return consecutive_corr(pair, m),
        EstimatorKind::Compressed if without_repl => {
            let s = draws.scheme.as_ref().expect("scheme drawn");
            return subsampled_corr(pair, s.sparse_map().expect("subset map"));
        }
        EstimatorKind::Compressed => return Ok(compressed_from_projections(px, py)),
        EstimatorKind::Subsampled => return subsampled_corr(pair, draws.subset.as_ref().expect("subset drawn")),
        EstimatorKind::Quantized | EstimatorKind::QuantizedSin => quantized_plain(pair),
        EstimatorKind::QuantizedCompressed | EstimatorKind::QuantizedCompressedSin => {
            quantized_from_projections(px, py)
        }
        EstimatorKind::QuantizedSubsampled | EstimatorKind::QuantizedSubsampledSin => {
            quantized_subsampled(pair, draws.subset.as_ref().expect("subset drawn"))?
        }
    };
    if kind.is_sin_corrected() {
        arcsin_correct(raw)
    } else {
        Ok(raw)
    }
}
