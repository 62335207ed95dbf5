//! Block evaluation of a single long recording.
//!
//! Both series are standardized with their full-data mean and standard
//! deviation, so every estimator targets the correlation function. The
//! reference is the plain estimate over the whole record; each estimator
//! is applied to `B` disjoint blocks and scored by its RMSE against the
//! reference, pooled over blocks and lags.

use crate::error::{Error, Result};
use crate::estimators::{evaluate_kinds, plain_corr, EstimatorKind, SchemeReuse, SketchConfig};
use crate::models::lagged_pair;
use crate::projection::SchemeKind;
use crate::rng::{derive_seed, stream};
use crate::stats::{pairwise_sum_by, Moments};

use super::{lag_layout, standardize, window};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockConfig {
    pub n: usize,
    pub m: usize,
    pub lags: Vec<i64>,
    pub estimators: Vec<EstimatorKind>,
    pub scheme: SchemeKind,
    pub seed: u64,
}

impl BlockConfig {
    /// The six estimators of the block table, lags `0..=50` and a ternary
    /// projection.
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            lags: (0..=50).collect(),
            estimators: vec![
                EstimatorKind::Plain,
                EstimatorKind::QuantizedSin,
                EstimatorKind::Compressed,
                EstimatorKind::QuantizedCompressedSin,
                EstimatorKind::QuantizedSubsampledSin,
                EstimatorKind::Consecutive,
            ],
            scheme: SchemeKind::TernaryHalf,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockEstimate {
    pub kind: EstimatorKind,
    /// `per_block[block][lag]`
    pub per_block: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Sample standard deviation across blocks.
    pub std: Vec<f64>,
    pub rmse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    pub lags: Vec<i64>,
    pub reference: Vec<f64>,
    pub blocks: usize,
    pub block_len: usize,
    pub n: usize,
    pub m: usize,
    pub estimates: Vec<BlockEstimate>,
}

impl BlockReport {
    pub fn estimate(&self, kind: EstimatorKind) -> Option<&BlockEstimate> {
        self.estimates.iter().find(|e| e.kind == kind)
    }
}

/// Root mean square of `estimates[b][l] - reference[l]` over all `b, l`.
pub fn rmse(estimates: &[Vec<f64>], reference: &[f64]) -> f64 {
    let nl = reference.len();
    let count = estimates.len() * nl;
    if count == 0 {
        return f64::NAN;
    }
    let ss = pairwise_sum_by(count, |i| (estimates[i / nl][i % nl] - reference[i % nl]).powi(2));
    (ss / count as f64).sqrt()
}

/// Evaluates `config.estimators` on `blocks` disjoint blocks of `x`
/// (and `y`, or `x` itself for an autocorrelation).
///
/// Blocks have length `floor(len / blocks)` and must hold `N` samples plus
/// the lag span. Block `b` draws its projection from
/// `derive_seed(seed, BLOCK, b)`.
pub fn run_blocks(x: &[f64], y: Option<&[f64]>, blocks: usize, config: &BlockConfig) -> Result<BlockReport> {
    if blocks < 2 {
        return Err(Error::Domain(format!("need at least 2 blocks, got {blocks}")));
    }
    if config.lags.is_empty() {
        return Err(Error::Empty("lag list"));
    }
    if config.estimators.is_empty() {
        return Err(Error::Empty("estimator list"));
    }
    if let Some(y) = y {
        if y.len() != x.len() {
            return Err(Error::Dimension(format!("x has {} samples, y has {}", x.len(), y.len())));
        }
    }
    let (x_len, need) = lag_layout(config.n, &config.lags);
    let block_len = x.len() / blocks;
    if block_len < need {
        return Err(Error::InsufficientData(format!(
            "{} samples in {blocks} blocks give {block_len} per block, need {need} (N={} plus lag span)",
            x.len(),
            config.n
        )));
    }
    let xs = standardize(x)?;
    let ys = match y {
        Some(y) => standardize(y)?,
        None => xs.clone(),
    };

    let span = need - config.n;
    let n_ref = x.len() - span;
    let xw = window(xs[..n_ref + (x_len - config.n)].to_vec())?;
    let yw = window(ys.clone())?;
    let reference = config
        .lags
        .iter()
        .map(|&tau| Ok(plain_corr(&lagged_pair(&xw, &yw, tau, n_ref)?)))
        .collect::<Result<Vec<f64>>>()?;

    let sketch = SketchConfig { scheme: config.scheme, m: config.m, reuse: SchemeReuse::Shared };
    let mut per_kind = vec![Vec::with_capacity(blocks); config.estimators.len()];
    for b in 0..blocks {
        let lo = b * block_len;
        let bx = window(xs[lo..lo + x_len].to_vec())?;
        let by = window(ys[lo..lo + block_len].to_vec())?;
        let seed = derive_seed(config.seed, stream::BLOCK, b as u64);
        let values = evaluate_kinds(&bx, &by, config.n, &config.lags, &config.estimators, &sketch, seed)?;
        for (k, row) in values.into_iter().enumerate() {
            per_kind[k].push(row);
        }
    }

    let nl = config.lags.len();
    let estimates = config
        .estimators
        .iter()
        .zip(per_kind)
        .map(|(&kind, per_block)| {
            let (mean, std) = (0..nl)
                .map(|l| {
                    let col: Vec<f64> = per_block.iter().map(|row| row[l]).collect();
                    let m = Moments::of(&col);
                    (m.mean, m.variance.sqrt())
                })
                .unzip();
            let rmse = rmse(&per_block, &reference);
            BlockEstimate { kind, per_block, mean, std, rmse }
        })
        .collect();

    Ok(BlockReport {
        lags: config.lags.clone(),
        reference,
        blocks,
        block_len,
        n: config.n,
        m: config.m,
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ar1_generate;

    fn series(len: usize) -> Vec<f64> {
        ar1_generate(0.7, len, 5).unwrap().into_samples()
    }

    #[test]
    fn reference_against_itself_is_zero() {
        let r = vec![0.3, -0.1, 0.9];
        assert_eq!(rmse(&[r.clone(), r.clone()], &r), 0.0);
        assert!((rmse(&[vec![1.0, 1.0]], &[0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_block_is_rejected() {
        let cfg = BlockConfig::new(100, 10, 1);
        assert!(matches!(run_blocks(&series(1000), None, 1, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn too_many_blocks_is_insufficient_data() {
        let cfg = BlockConfig::new(100, 10, 1);
        let err = run_blocks(&series(1000), None, 8, &cfg).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
    }

    #[test]
    fn report_shapes_and_reference() {
        let mut cfg = BlockConfig::new(300, 30, 2);
        cfg.lags = (0..=10).collect();
        let x = series(2000);
        let rep = run_blocks(&x, None, 6, &cfg).unwrap();
        assert_eq!(rep.block_len, 333);
        assert_eq!(rep.estimates.len(), 6);
        // Standardized data: the reference at lag 0 is close to 1.
        assert!((rep.reference[0] - 1.0).abs() < 0.05);
        for e in &rep.estimates {
            assert_eq!(e.per_block.len(), 6);
            assert_eq!(e.mean.len(), 11);
            assert!(e.rmse >= 0.0 && e.std.iter().all(|s| *s >= 0.0));
        }
        // Quantized, sin-corrected estimates are exact at lag 0.
        let q = rep.estimate(EstimatorKind::QuantizedSin).unwrap();
        assert!(q.per_block.iter().all(|row| row[0] == 1.0));
        assert_eq!(run_blocks(&x, None, 6, &cfg).unwrap(), rep);
    }

    #[test]
    fn cross_series_must_match_length() {
        let cfg = BlockConfig::new(100, 10, 1);
        let x = series(1000);
        assert!(run_blocks(&x, Some(&x[..999]), 2, &cfg).is_err());
        assert!(run_blocks(&x, Some(&x), 2, &cfg).is_ok());
    }
}
