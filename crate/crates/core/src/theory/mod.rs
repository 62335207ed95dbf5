//! Closed-form variances of the estimators.
//!
//! Finite-`N` formulas are exact sums over the kernels
//!
//! ```text
//! f(k) = C(tau, k, tau+k) + G_xy(tau+k) G_xy(tau-k) + G_xx(k) G_yy(k)
//! g(k) = C(k+tau, 0, tau+k) + 2 G_xy(tau+k)^2
//! ```
//!
//! where `C` is the fourth-order cumulant of `(x(t), y(t+a), x(t+b), y(t+c))`
//! and vanishes for Gaussian models.

mod asymptotic;
mod quantized;

pub use asymptotic::{
    ar1_v, asymptotics, autocorr_delta, gaussian_gain_condition, singularity_threshold, AsymptoticReport,
    GainCondition,
};
pub use quantized::{delta_method_var, mc_w_tau, quantized_mean, quantized_sub_var, WEstimate};

use crate::error::{dimension, domain, Error, Result};
use crate::models::CorrelationModel;
use crate::projection::{ProjectionScheme, SchemeKind};
use crate::stats::pairwise_sum_by;

/// The variance kernels `f` and `g` of a model at a fixed lag.
#[derive(Clone, Copy)]
pub struct Kernels<'a> {
    model: &'a dyn CorrelationModel,
    tau: i64,
}

impl<'a> Kernels<'a> {
    /// Fails with [`Error::MissingCumulant`] for a non-Gaussian model
    /// without a cumulant kernel.
    pub fn new(model: &'a dyn CorrelationModel, tau: i64) -> Result<Self> {
        if !model.is_gaussian() && model.cum4(0, 0, 0).is_none() {
            return Err(Error::MissingCumulant);
        }
        Ok(Self { model, tau })
    }

    fn cum(&self, a: i64, b: i64, c: i64) -> f64 {
        if self.model.is_gaussian() {
            0.0
        } else {
            self.model.cum4(a, b, c).unwrap_or(f64::NAN)
        }
    }

    pub fn tau(&self) -> i64 {
        self.tau
    }

    pub fn f(&self, k: i64) -> f64 {
        let (m, t) = (self.model, self.tau);
        self.cum(t, k, t + k) + m.gamma_xy(t + k) * m.gamma_xy(t - k) + m.gamma_xx(k) * m.gamma_yy(k)
    }

    pub fn g(&self, k: i64) -> f64 {
        let (m, t) = (self.model, self.tau);
        self.cum(k + t, 0, t + k) + 2.0 * m.gamma_xy(t + k).powi(2)
    }

    /// `N^-2 sum_{|k|<N} (N - |k|) h(k)` for `h = f` or `g`.
    fn triangle<F: Fn(i64) -> f64>(n: usize, h: F) -> f64 {
        let n_i = n as i64;
        let total = pairwise_sum_by(2 * n - 1, |j| {
            let k = j as i64 - (n_i - 1);
            (n_i - k.abs()) as f64 * h(k)
        });
        total / (n as f64 * n as f64)
    }

    pub fn triangle_f(&self, n: usize) -> f64 {
        Self::triangle(n, |k| self.f(k))
    }

    pub fn triangle_g(&self, n: usize) -> f64 {
        Self::triangle(n, |k| self.g(k))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty("window length N"));
    }
    Ok(())
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    check_n(n)?;
    if m == 0 || m > n {
        return Err(dimension(format!("need 1 <= M <= N, got N={n}, M={m}")));
    }
    Ok(())
}

/// Exact `Var[c_N]`.
#[allow(non_snake_case)]
pub fn var_cN_finite(model: &dyn CorrelationModel, n: usize, tau: i64) -> Result<f64> {
    check_n(n)?;
    Ok(Kernels::new(model, tau)?.triangle_f(n))
}

/// `E[|x|^2 |y|^2] = N^2 G_xx(0) G_yy(0) + sum_{|k|<N} (N - |k|) g(k)`.
pub fn expected_norm_product(model: &dyn CorrelationModel, n: usize, tau: i64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let k = Kernels::new(model, tau)?;
    Ok(nf * nf * (model.gamma_xx(0) * model.gamma_yy(0) + k.triangle_g(n)))
}

/// Exact `Var[C_N]` for a projection with i.i.d. entries of fourth
/// cumulant `cum4`:
///
/// ```text
/// (1 + 1/M) Var[c_N] + M N cum4 (g(0) + G_xx(0) G_yy(0))
///   + (G_xx(0) G_yy(0) + G_xy(tau)^2 + N^-2 sum (N-|k|) g(k)) / M
/// ```
#[allow(non_snake_case)]
pub fn var_CN_finite(model: &dyn CorrelationModel, n: usize, m: usize, cum4: f64, tau: i64) -> Result<f64> {
    check_nm(n, m)?;
    let k = Kernels::new(model, tau)?;
    let (nf, mf) = (n as f64, m as f64);
    let var_c = k.triangle_f(n);
    let p0 = model.gamma_xx(0) * model.gamma_yy(0);
    Ok((1.0 + 1.0 / mf) * var_c
        + mf * nf * cum4 * (k.g(0) + p0)
        + (p0 + model.gamma_xy(tau).powi(2) + k.triangle_g(n)) / mf)
}

/// Exact `Var[C_M]` for subsampling without replacement:
/// `Var[c_N] + (alpha - 1)/(N - 1) (f(0) - Var[c_N])`.
pub fn var_subsampled(model: &dyn CorrelationModel, n: usize, m: usize, tau: i64) -> Result<f64> {
    check_nm(n, m)?;
    let k = Kernels::new(model, tau)?;
    let var_c = k.triangle_f(n);
    if m == n {
        return Ok(var_c);
    }
    let alpha = n as f64 / m as f64;
    Ok(var_c + (alpha - 1.0) / (n as f64 - 1.0) * (k.f(0) - var_c))
}

/// Exact `Var[C_N]` for subsampling with replacement.
///
/// The estimator is the mean of `M` products drawn with replacement, so
/// `Var = (1 - 1/M) Var[c_N] + f(0)/M`. The i.i.d.-entry formula does not
/// apply: the entries of a row are dependent.
pub fn var_with_replacement(model: &dyn CorrelationModel, n: usize, m: usize, tau: i64) -> Result<f64> {
    check_nm(n, m)?;
    let k = Kernels::new(model, tau)?;
    let var_c = k.triangle_f(n);
    let mf = m as f64;
    Ok((1.0 - 1.0 / mf) * var_c + k.f(0) / mf)
}

/// Exact variance of the compressed estimator for any scheme kind.
///
/// Dense and half-density ternary kinds use [`var_CN_finite`] with their
/// cumulant; the hash kind uses the Bernoulli cumulant `-2/(MN)^2`, which
/// accounts for its one-nonzero-per-column coupling; the subsampling kinds
/// use their own closed forms.
pub fn var_compressed(model: &dyn CorrelationModel, scheme: &ProjectionScheme, tau: i64) -> Result<f64> {
    let (n, m) = (scheme.n(), scheme.m());
    match scheme.kind() {
        SchemeKind::SubsampleWithReplacement => var_with_replacement(model, n, m, tau),
        SchemeKind::SubsampleWithoutReplacement => var_subsampled(model, n, m, tau),
        _ => var_CN_finite(model, n, m, scheme.variance_cum4().expect("i.i.d. kind"), tau),
    }
}

/// Exact `Var[c_M]` on `M` consecutive samples.
pub fn var_consecutive(model: &dyn CorrelationModel, m: usize, tau: i64) -> Result<f64> {
    var_cN_finite(model, m, tau)
}

pub(crate) fn check_alpha_gt1(alpha: f64) -> Result<()> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(domain(format!("compression rate must satisfy alpha > 1, got {alpha}")));
    }
    Ok(())
}
