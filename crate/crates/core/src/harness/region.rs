//! Where compression beats consecutive samples, over the AR(1) coefficient.
//!
//! For each rate `alpha` and cumulant constant `c4` the scan reports the
//! sign of `delta(C_N, c_M)` at lag 0 on a grid of `a`, and the crossing
//! `a*` from the closed form, from bisection of the asymptotic delta, from
//! the exact finite-`N` variances and, optionally, from Monte Carlo.

use crate::error::{domain, Error, Result};
use crate::estimators::EstimatorKind;
use crate::models::Ar1Model;
use crate::projection::SchemeKind;
use crate::stats::jackknife_moments;
use crate::theory::{asymptotics, singularity_threshold, var_CN_finite, var_consecutive};

use super::{m_for_rate, run_mc, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionMc {
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionConfig {
    pub alphas: Vec<f64>,
    pub a_grid: Vec<f64>,
    pub c4s: Vec<f64>,
    /// Window length for the finite-`N` and Monte-Carlo deltas.
    pub n: usize,
    pub mc: Option<RegionMc>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub alpha: f64,
    pub c4: f64,
    pub a: f64,
    pub delta_asymptotic: f64,
    /// `N (Var[C_N] - Var[c_M])` from the exact finite-`N` formulas.
    pub delta_finite: f64,
    pub delta_mc: Option<f64>,
    pub delta_mc_se: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionThreshold {
    pub alpha: f64,
    pub c4: f64,
    pub a_star: f64,
    pub a_star_bisect: f64,
    pub a_star_finite: Option<f64>,
    pub a_star_mc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionScan {
    pub points: Vec<RegionPoint>,
    pub thresholds: Vec<RegionThreshold>,
}

fn asymptotic_delta(a: f64, alpha: f64, c4: f64) -> Result<f64> {
    Ok(asymptotics(&Ar1Model::new(a)?, 0, alpha, c4, 0)?.delta_CN_cM)
}

fn finite_delta(a: f64, n: usize, m: usize, c4: f64) -> Result<f64> {
    let model = Ar1Model::new(a)?;
    let (nf, mf) = (n as f64, m as f64);
    let cum4 = c4 / (mf * nf * nf);
    Ok(nf * (var_CN_finite(&model, n, m, cum4, 0)? - var_consecutive(&model, m, 0)?))
}

/// Root of `f` on `[lo, hi]` given a sign change, to absolute width `tol`.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut f_lo = f(lo)?;
    if f_lo.signum() == f(hi)?.signum() {
        return Err(domain(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection of the asymptotic `delta(C_N, c_M)` at lag 0 over `a`.
pub fn bisect_threshold(alpha: f64, c4: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(domain(format!("a threshold needs alpha > 1, got {alpha}")));
    }
    bisect(0.0, 1.0 - 1e-12, 1e-13, |a| asymptotic_delta(a, alpha, c4))
}

/// Scheme with the given asymptotic cumulant constant, if one is built in.
fn scheme_for_c4(c4: f64) -> Option<SchemeKind> {
    if c4 == 0.0 {
        Some(SchemeKind::DenseGaussian)
    } else if c4 == 0.5 {
        Some(SchemeKind::TernaryHalf)
    } else {
        None
    }
}

fn mc_delta(a: f64, n: usize, m: usize, scheme: SchemeKind, mc: &RegionMc) -> Result<(f64, f64)> {
    let mut cfg = ExperimentConfig::new(Ar1Model::new(a)?, n, m, mc.replicates, mc.seed);
    cfg.lags = vec![0];
    cfg.estimators = vec![EstimatorKind::Compressed, EstimatorKind::Consecutive];
    cfg.scheme = scheme;
    let s = run_mc(&cfg)?;
    let jk = jackknife_moments(&[&s.samples[0][0], &s.samples[1][0]], |m| m[0].variance - m[1].variance);
    Ok((n as f64 * jk.estimate, n as f64 * jk.se))
}

/// First `+` to `-` crossing on the grid, linearly interpolated.
fn grid_crossing(a: &[f64], d: &[f64]) -> Option<f64> {
    (1..a.len()).find(|&i| d[i - 1] > 0.0 && d[i] <= 0.0).map(|i| {
        let (a0, a1, d0, d1) = (a[i - 1], a[i], d[i - 1], d[i]);
        a0 + (a1 - a0) * d0 / (d0 - d1)
    })
}

pub fn region_scan(config: &RegionConfig) -> Result<RegionScan> {
    if config.alphas.is_empty() {
        return Err(Error::Empty("alpha grid"));
    }
    if config.a_grid.is_empty() {
        return Err(Error::Empty("a grid"));
    }
    if config.c4s.is_empty() {
        return Err(Error::Empty("c4 list"));
    }
    if let Some(a) = config.a_grid.iter().find(|a| !(a.abs() < 1.0)) {
        return Err(domain(format!("AR(1) coefficient must satisfy |a| < 1, got {a}")));
    }
    let mut grid = config.a_grid.clone();
    grid.sort_by(f64::total_cmp);

    let mut points = Vec::new();
    let mut thresholds = Vec::new();
    for &alpha in &config.alphas {
        if !(alpha > 1.0) {
            return Err(domain(format!("region scan needs alpha > 1, got {alpha}")));
        }
        let (m, _) = m_for_rate(config.n, alpha)?;
        for &c4 in &config.c4s {
            let scheme = config.mc.as_ref().and_then(|mc| scheme_for_c4(c4).map(|s| (s, mc)));
            let mut finite = Vec::with_capacity(grid.len());
            let mut mc_vals = Vec::with_capacity(grid.len());
            for &a in &grid {
                let delta_finite = finite_delta(a, config.n, m, c4)?;
                let mc = match scheme {
                    Some((s, mc)) => Some(mc_delta(a, config.n, m, s, mc)?),
                    None => None,
                };
                finite.push(delta_finite);
                mc_vals.push(mc.map(|v| v.0).unwrap_or(f64::NAN));
                points.push(RegionPoint {
                    alpha,
                    c4,
                    a,
                    delta_asymptotic: asymptotic_delta(a, alpha, c4)?,
                    delta_finite,
                    delta_mc: mc.map(|v| v.0),
                    delta_mc_se: mc.map(|v| v.1),
                });
            }
            let a_star_finite = (1..grid.len())
                .find(|&i| finite[i - 1] > 0.0 && finite[i] <= 0.0)
                .map(|i| bisect(grid[i - 1], grid[i], 1e-10, |a| finite_delta(a, config.n, m, c4)))
                .transpose()?;
            thresholds.push(RegionThreshold {
                alpha,
                c4,
                a_star: singularity_threshold(alpha, c4)?,
                a_star_bisect: bisect_threshold(alpha, c4)?,
                a_star_finite,
                a_star_mc: scheme.and_then(|_| grid_crossing(&grid, &mc_vals)),
            });
        }
    }
    Ok(RegionScan { points, thresholds })
}
