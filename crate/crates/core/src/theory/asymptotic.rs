//! Limits at a fixed compression rate `alpha = N/M` as `N -> infinity`.
//!
//! All quantities are `N`-scaled variances or variance differences:
//! `v = sum_k f(k)` is the limit of `N Var[c_N]`, and
//! `delta(A, B) = lim N (Var[A] - Var[B])`.

use crate::error::{domain, Error, Result};
use crate::models::CorrelationModel;
use crate::stats::pairwise_sum_by;

use super::{check_alpha_gt1, Kernels};

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticReport {
    pub tau: i64,
    pub alpha: f64,
    pub c4_phi: f64,
    pub v: f64,
    pub lim_var_cN: f64,
    pub lim_var_cM: f64,
    pub lim_var_CN: f64,
    pub lim_var_subsampled: f64,
    pub delta_CN_cN: f64,
    pub delta_CN_cM: f64,
    pub delta_sub_cN: f64,
}

/// Closed-form `v(tau)` for a pair of AR(1) processes with coefficient `a`
/// and innovation coupling `r`:
///
/// ```text
/// v = r^2 ((2|tau|+1) a^(2|tau|) + 2 a^(2|tau|+2) / (1-a^2)) + (1+a^2)/(1-a^2)
/// ```
///
/// With `r = 1` this is the autocorrelation value
/// `1 + (2|tau|+1) a^(2|tau|) + 2 a^2 (1 + a^(2|tau|)) / (1-a^2)`.
pub fn ar1_v(a: f64, coupling: f64, tau: i64) -> f64 {
    let t = tau.unsigned_abs() as i32;
    let a2 = a * a;
    let a2t = a2.powi(t);
    coupling * coupling * ((2 * t + 1) as f64 * a2t + 2.0 * a2t * a2 / (1.0 - a2)) + (1.0 + a2) / (1.0 - a2)
}

fn check_tail(k: &Kernels<'_>, truncation: usize) -> Result<()> {
    let kk = truncation as i64;
    let tail = (k.f(kk).abs() + k.g(kk).abs()).max(k.f(-kk).abs() + k.g(-kk).abs());
    let tolerance = 1e-12 * (k.f(0).abs() + k.g(0).abs());
    if tail >= tolerance && tail > 0.0 || tail.is_nan() {
        return Err(Error::Truncation { lag: truncation, tail, tolerance });
    }
    Ok(())
}

/// `sum_{|k| <= K} f(k)`, failing if the kernels have not decayed at `K`.
pub fn v_truncated(model: &dyn CorrelationModel, tau: i64, truncation: usize) -> Result<f64> {
    let k = Kernels::new(model, tau)?;
    check_tail(&k, truncation)?;
    let kk = truncation as i64;
    Ok(pairwise_sum_by(2 * truncation + 1, |j| k.f(j as i64 - kk)))
}

fn v_of(model: &dyn CorrelationModel, tau: i64, truncation: usize) -> Result<f64> {
    match model.as_ar1() {
        Some(ar) => Ok(ar1_v(ar.a(), ar.coupling(), tau)),
        None => v_truncated(model, tau, truncation),
    }
}

/// Asymptotic variances and losses at lag `tau`.
///
/// AR(1) models use the exact geometric sums; other models sum the kernels
/// over `|k| <= truncation` and fail with [`Error::Truncation`] if
/// `|f(K)| + |g(K)|` is not below `1e-12 (|f(0)| + |g(0)|)`.
pub fn asymptotics(
    model: &dyn CorrelationModel,
    tau: i64,
    alpha: f64,
    c4_phi: f64,
    truncation: usize,
) -> Result<AsymptoticReport> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(domain(format!("compression rate must satisfy alpha >= 1, got {alpha}")));
    }
    let k = Kernels::new(model, tau)?;
    let v = v_of(model, tau, truncation)?;
    let p0 = model.gamma_xx(0) * model.gamma_yy(0);
    let gxy2 = model.gamma_xy(tau).powi(2);
    let delta_cn_cn = alpha * (p0 + gxy2) + (p0 + k.g(0)) * c4_phi;
    let delta_sub = (alpha - 1.0) * k.f(0);
    Ok(AsymptoticReport {
        tau,
        alpha,
        c4_phi,
        v,
        lim_var_cN: v,
        lim_var_cM: alpha * v,
        lim_var_CN: v + delta_cn_cn,
        lim_var_subsampled: v + delta_sub,
        delta_CN_cN: delta_cn_cn,
        delta_CN_cM: (1.0 - alpha) * v + delta_cn_cn,
        delta_sub_cN: delta_sub,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCondition {
    /// Whether compression beats `M` consecutive samples.
    pub holds: bool,
    /// `lhs - rhs`
    pub margin: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Jointly Gaussian criterion for `delta(C_N, c_M) < 0`:
///
/// ```text
/// sum_{k>=1} (rho_xy(tau-k) rho_xy(tau+k) + rho_xx(k) rho_yy(k))
///     > (1 + c4 + rho_xy(tau)^2 (1 + 2 c4)) / (2 (alpha - 1))
/// ```
pub fn gaussian_gain_condition(
    model: &dyn CorrelationModel,
    tau: i64,
    alpha: f64,
    c4_phi: f64,
    truncation: usize,
) -> Result<GainCondition> {
    if !model.is_gaussian() {
        return Err(Error::Unsupported("the gain criterion assumes jointly Gaussian signals".into()));
    }
    check_alpha_gt1(alpha)?;
    let rho = model.rho_xy(tau);
    let lhs = match model.as_ar1() {
        // v = 1 + rho^2 + 2 * lhs in normalized units (G(0) = 1)
        Some(ar) => (ar1_v(ar.a(), ar.coupling(), tau) - 1.0 - rho * rho) / 2.0,
        None => {
            check_tail(&Kernels::new(model, tau)?, truncation)?;
            pairwise_sum_by(truncation, |j| {
                let k = j as i64 + 1;
                model.rho_xy(tau - k) * model.rho_xy(tau + k) + model.rho_xx(k) * model.rho_yy(k)
            })
        }
    };
    let rhs = (1.0 + c4_phi + rho * rho * (1.0 + 2.0 * c4_phi)) / (2.0 * (alpha - 1.0));
    let margin = lhs - rhs;
    Ok(GainCondition { holds: margin > 0.0, margin, lhs, rhs })
}

/// AR(1) coefficient at which `delta(C_N, c_M)` changes sign at `tau = 0`:
/// `a* = sqrt((2 + 3 c4) / (4 alpha - 2 + 3 c4))`.
pub fn singularity_threshold(alpha: f64, c4_phi: f64) -> Result<f64> {
    check_alpha_gt1(alpha)?;
    let num = 2.0 + 3.0 * c4_phi;
    let den = 4.0 * alpha - 2.0 + 3.0 * c4_phi;
    if !(num > 0.0 && den > 0.0) {
        return Err(domain(format!("no threshold for alpha={alpha}, c4={c4_phi}")));
    }
    Ok((num / den).sqrt())
}

/// `delta(C_N, c_M) / G_xx(0)^2` for an autocorrelation (`y = x`):
///
/// ```text
/// (alpha + c4) + (alpha + 2 c4) rho(tau)^2
///     + (1 - alpha) sum_k (rho(tau-k) rho(tau+k) + rho(k)^2)
/// ```
pub fn autocorr_delta(
    model: &dyn CorrelationModel,
    tau: i64,
    alpha: f64,
    c4_phi: f64,
    truncation: usize,
) -> Result<f64> {
    if !model.is_autocorrelation() {
        return Err(Error::Unsupported("autocorr_delta needs an autocorrelation model (y = x)".into()));
    }
    if !model.is_gaussian() {
        return Err(Error::Unsupported("autocorr_delta assumes a Gaussian signal".into()));
    }
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(domain(format!("compression rate must satisfy alpha >= 1, got {alpha}")));
    }
    let rho = model.rho_xx(tau);
    let sum = match model.as_ar1() {
        Some(ar) => ar1_v(ar.a(), 1.0, tau),
        None => {
            check_tail(&Kernels::new(model, tau)?, truncation)?;
            let kk = truncation as i64;
            pairwise_sum_by(2 * truncation + 1, |j| {
                let k = j as i64 - kk;
                model.rho_xx(tau - k) * model.rho_xx(tau + k) + model.rho_xx(k).powi(2)
            })
        }
    };
    Ok((alpha + c4_phi) + (alpha + 2.0 * c4_phi) * rho * rho + (1.0 - alpha) * sum)
}
