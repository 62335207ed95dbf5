//! Equal-bit-budget comparison of one-bit and full-precision sketches.
//!
//! A sketch of `M` signs costs as many bits as `M / f` floats of `f` bits,
//! so the quantized estimator at rate `alpha` is compared with the
//! compressed estimator at rate `f alpha`.

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::models::Ar1Model;
use crate::projection::SchemeKind;

use super::{m_for_rate, run_mc, ExperimentConfig, McSummary};

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetConfig {
    pub model: Ar1Model,
    pub n: usize,
    pub alpha: f64,
    pub f_bits: Vec<usize>,
    pub lags: Vec<i64>,
    pub scheme: SchemeKind,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetRow {
    pub f_bits: usize,
    pub tau: i64,
    pub m_quantized: usize,
    pub m_compressed: usize,
    pub var_quantized: f64,
    pub se_quantized: f64,
    pub var_compressed: f64,
    pub se_compressed: f64,
    /// `var_compressed / var_quantized`; infinite where the quantized
    /// variance is zero.
    pub ratio: f64,
}

fn run(cfg: &BudgetConfig, m: usize, kind: EstimatorKind) -> Result<McSummary> {
    let mut e = ExperimentConfig::new(cfg.model, cfg.n, m, cfg.replicates, cfg.seed);
    e.lags = cfg.lags.clone();
    e.estimators = vec![kind];
    e.scheme = cfg.scheme;
    run_mc(&e)
}

/// Both runs share the master seed and hence the signal replicates.
pub fn bit_budget_compare(config: &BudgetConfig) -> Result<Vec<BudgetRow>> {
    if config.f_bits.is_empty() {
        return Err(Error::Empty("bit width list"));
    }
    if config.f_bits.contains(&0) {
        return Err(Error::Domain("bit widths must be at least 1".into()));
    }
    let (m_q, _) = m_for_rate(config.n, config.alpha)?;
    let quantized = run(config, m_q, EstimatorKind::QuantizedCompressedSin)?;
    let mut rows = Vec::new();
    for &f in &config.f_bits {
        let (m_c, _) = m_for_rate(config.n, config.alpha * f as f64)?;
        let compressed = run(config, m_c, EstimatorKind::Compressed)?;
        for (q, c) in quantized.rows.iter().zip(&compressed.rows) {
            rows.push(BudgetRow {
                f_bits: f,
                tau: q.tau,
                m_quantized: m_q,
                m_compressed: m_c,
                var_quantized: q.variance,
                se_quantized: q.se_variance,
                var_compressed: c.variance,
                se_compressed: c.se_variance,
                ratio: c.variance / q.variance,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(f_bits: Vec<usize>, seed: u64) -> BudgetConfig {
        BudgetConfig {
            model: Ar1Model::new(0.7).unwrap(),
            n: 256,
            alpha: 4.0,
            f_bits,
            lags: vec![0, 1, 2],
            scheme: SchemeKind::DenseGaussian,
            replicates: 300,
            seed,
        }
    }

    #[test]
    fn equal_rate_is_degenerate_but_runs() {
        let rows = bit_budget_compare(&cfg(vec![1], 1)).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.m_quantized == r.m_compressed));
        assert_eq!(rows[0].var_quantized, 0.0);
        assert!(rows[0].ratio.is_infinite());
    }

    #[test]
    fn quantized_wins_at_equal_budget() {
        let rows = bit_budget_compare(&cfg(vec![8], 2)).unwrap();
        assert_eq!(rows[0].m_compressed, 8);
        for r in &rows[1..] {
            assert!(r.ratio > 1.0, "{r:?}");
        }
    }

    #[test]
    fn too_few_rows_after_rounding() {
        assert!(bit_budget_compare(&cfg(vec![128], 1)).is_err());
        assert!(bit_budget_compare(&cfg(vec![], 1)).is_err());
    }
}
