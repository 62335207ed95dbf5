//! Moments of the one-bit estimators.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::estimators::quantized_plain;
use crate::models::{lagged_pair, Ar1Model, CorrelationModel};
use crate::rng::{derive_seed, stream};
use crate::stats::{jackknife_variance, Moments};

/// Arcsin law: `E[c^q] = (2/pi) arcsin(rho_xy(tau))` for Gaussian pairs.
pub fn quantized_mean(model: &dyn CorrelationModel, tau: i64) -> Result<f64> {
    if !model.is_gaussian() {
        return Err(Error::Unsupported("the arcsin law is only claimed for Gaussian signals".into()));
    }
    let rho = model.rho_xy(tau).clamp(-1.0, 1.0);
    Ok(std::f64::consts::FRAC_2_PI * rho.asin())
}

/// `Var[C^q_M] = Var[c^q_N] + (alpha - 1)/(N - 1) (1 - E[c^q]^2 - Var[c^q_N])`.
///
/// The per-sample variance `1 - E^2` holds for any pair of signs.
pub fn quantized_sub_var(var_cq: f64, mean_cq: f64, n: usize, m: usize) -> Result<f64> {
    if !(var_cq >= 0.0) {
        return Err(domain(format!("variance must be nonnegative, got {var_cq}")));
    }
    if !(mean_cq.abs() <= 1.0) {
        return Err(domain(format!("mean of a sign product must lie in [-1, 1], got {mean_cq}")));
    }
    if m == 0 || m > n {
        return Err(crate::error::dimension(format!("need 1 <= M <= N, got N={n}, M={m}")));
    }
    if m == n {
        return Ok(var_cq);
    }
    let alpha = n as f64 / m as f64;
    Ok(var_cq + (alpha - 1.0) / (n as f64 - 1.0) * (1.0 - mean_cq * mean_cq - var_cq))
}

/// Delta-method asymptotic variance of the sin-corrected estimator,
/// `pi^2 w (1 - rho^2) / 4`, with `w = lim N Var[c^q]`.
pub fn delta_method_var(w_tau: f64, rho: f64) -> Result<f64> {
    if !(w_tau >= 0.0) {
        return Err(domain(format!("w must be nonnegative, got {w_tau}")));
    }
    if !(rho.abs() <= 1.0) {
        return Err(domain(format!("correlation must lie in [-1, 1], got {rho}")));
    }
    Ok(std::f64::consts::PI.powi(2) * w_tau * (1.0 - rho * rho) / 4.0)
}

/// Monte-Carlo estimate of `w(tau) = N Var[c^q_N]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WEstimate {
    pub w: f64,
    /// Jackknife standard error of `w`.
    pub se: f64,
    /// Replicate mean of `c^q_N`.
    pub mean: f64,
    pub replicates: usize,
}

/// Estimates `w(tau)` from `replicates` independent AR(1) pairs of length
/// `n`. Replicate `r` uses the signal seed `derive_seed(seed, SIGNAL, r)`,
/// so the result does not depend on the number of worker threads.
pub fn mc_w_tau(model: &Ar1Model, n: usize, tau: i64, replicates: usize, seed: u64) -> Result<WEstimate> {
    if replicates < 100 {
        return Err(domain(format!("need at least 100 replicates, got {replicates}")));
    }
    if n == 0 {
        return Err(Error::Empty("window length N"));
    }
    let lag = tau.unsigned_abs() as usize;
    let values: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let (x, y) = model.generate_pair(n + lag, derive_seed(seed, stream::SIGNAL, r))?;
            // Anchor x so that y covers t + tau for either sign of tau.
            let x = if tau > 0 { x.slice(0, n)? } else { x };
            Ok(quantized_plain(&lagged_pair(&x, &y, tau, n)?))
        })
        .collect::<Result<_>>()?;
    let jk = jackknife_variance(&values);
    let nf = n as f64;
    Ok(WEstimate { w: nf * jk.estimate, se: nf * jk.se, mean: Moments::of(&values).mean, replicates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcsin_values() {
        let m = Ar1Model::new(0.7).unwrap();
        assert_eq!(quantized_mean(&m, 0).unwrap(), 1.0);
        assert!((quantized_mean(&m, 1).unwrap() - 0.493_633_377_786_73).abs() < 1e-12);
        let half = Ar1Model::coupled(0.0, 0.5).unwrap();
        assert!((quantized_mean(&half, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let m = crate::models::CustomModel::non_gaussian_unknown(|_| 1.0, |_| 1.0, |_| 0.5);
        assert!(matches!(quantized_mean(&m, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sub_var_special_cases() {
        assert_eq!(quantized_sub_var(0.01, 0.3, 100, 100).unwrap(), 0.01);
        let v = quantized_sub_var(0.01, 0.0, 100, 10).unwrap();
        assert!((v - (0.01 + 9.0 / 99.0 * 0.99)).abs() < 1e-15);
        assert!(quantized_sub_var(-0.1, 0.0, 100, 10).is_err());
        assert!(quantized_sub_var(0.1, 1.5, 100, 10).is_err());
    }

    #[test]
    fn delta_method_values() {
        assert_eq!(delta_method_var(2.0, 1.0).unwrap(), 0.0);
        assert_eq!(delta_method_var(2.0, -1.0).unwrap(), 0.0);
        assert!((delta_method_var(2.0, 0.0).unwrap() - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-15);
        assert!(delta_method_var(-1.0, 0.0).is_err());
        assert!(delta_method_var(1.0, 1.1).is_err());
    }

    #[test]
    fn white_noise_w_is_one() {
        // Independent sign products: Var = 1 - 0^2 per sample.
        let m = Ar1Model::coupled(0.0, 0.0).unwrap();
        let w = mc_w_tau(&m, 500, 0, 4000, 1).unwrap();
        assert!((w.w - 1.0).abs() < 3.0 * w.se, "{} (se {})", w.w, w.se);
    }

    #[test]
    fn identical_signs_have_zero_w() {
        let m = Ar1Model::new(0.7).unwrap();
        let w = mc_w_tau(&m, 200, 0, 100, 4).unwrap();
        assert_eq!(w.w, 0.0);
        assert_eq!(w.mean, 1.0);
    }

    #[test]
    fn ar1_w_is_reproducible() {
        let m = Ar1Model::new(0.7).unwrap();
        let a = mc_w_tau(&m, 1000, 1, 10_000, 11).unwrap();
        let b = mc_w_tau(&m, 1000, 1, 10_000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.se / a.w < 0.02, "relative se {}", a.se / a.w);
        let c = mc_w_tau(&m, 1000, 1, 10_000, 12).unwrap();
        let z = (a.w - c.w) / (a.se.hypot(c.se));
        assert!(z.abs() < 4.0, "seeds disagree by {z} SE");
        let neg = mc_w_tau(&m, 1000, -1, 200, 11).unwrap();
        assert!(neg.w > 0.0);
    }

    #[test]
    fn too_few_replicates() {
        let m = Ar1Model::new(0.7).unwrap();
        assert!(mc_w_tau(&m, 100, 0, 99, 0).is_err());
    }
}
