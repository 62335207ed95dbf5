//! Analytic correlation models and the signal generators built on them.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Error, Result};
use crate::estimators::LaggedPair;
use crate::rng::{derive_seed, rng_from_seed, stream};

/// Second-order (and optionally fourth-order) description of a jointly
/// stationary zero-mean pair `(x, y)`.
///
/// `gamma_xy(k) = E[x(t) y(t + k)]`. The fourth-order kernel is
/// `C_xyxy(a, b, c) = Cum[x(t), y(t+a), x(t+b), y(t+c)]` and must be
/// supplied for any model that is not jointly Gaussian.
pub trait CorrelationModel: Send + Sync {
    fn gamma_xx(&self, lag: i64) -> f64;
    fn gamma_yy(&self, lag: i64) -> f64;
    fn gamma_xy(&self, lag: i64) -> f64;

    fn is_gaussian(&self) -> bool {
        true
    }

    /// `C_xyxy(a, b, c)`; `None` for Gaussian models.
    fn cum4(&self, _a: i64, _b: i64, _c: i64) -> Option<f64> {
        None
    }

    /// True when `x` and `y` are the same process.
    fn is_autocorrelation(&self) -> bool {
        false
    }

    /// Exposes the AR(1) parameters so the theory can use closed forms.
    fn as_ar1(&self) -> Option<&Ar1Model> {
        None
    }

    fn rho_xy(&self, lag: i64) -> f64 {
        self.gamma_xy(lag) / (self.gamma_xx(0) * self.gamma_yy(0)).sqrt()
    }

    fn rho_xx(&self, lag: i64) -> f64 {
        self.gamma_xx(lag) / self.gamma_xx(0)
    }

    fn rho_yy(&self, lag: i64) -> f64 {
        self.gamma_yy(lag) / self.gamma_yy(0)
    }
}

/// Checks the model invariants on lags `-max_lag..=max_lag`.
pub fn check_model(model: &dyn CorrelationModel, max_lag: i64) -> Result<()> {
    let (gx0, gy0) = (model.gamma_xx(0), model.gamma_yy(0));
    if !(gx0 > 0.0 && gy0 > 0.0) {
        return Err(domain("zero-lag autocovariances must be positive"));
    }
    let bound = (gx0 * gy0).sqrt() * (1.0 + 1e-12);
    for k in 0..=max_lag {
        for g in [model.gamma_xx(k), model.gamma_xx(-k), model.gamma_yy(k), model.gamma_xy(k), model.gamma_xy(-k)] {
            if !g.is_finite() {
                return Err(domain(format!("non-finite covariance at lag {k}")));
            }
        }
        if model.gamma_xx(k) != model.gamma_xx(-k) || model.gamma_yy(k) != model.gamma_yy(-k) {
            return Err(domain(format!("autocovariance is not symmetric at lag {k}")));
        }
        if model.gamma_xy(k).abs() > bound || model.gamma_xy(-k).abs() > bound {
            return Err(domain(format!("cross-covariance violates Cauchy-Schwarz at lag {k}")));
        }
    }
    if !model.is_gaussian() && model.cum4(0, 0, 0).is_none() {
        return Err(Error::MissingCumulant);
    }
    Ok(())
}

/// Gaussian AR(1) pair with unit marginal variance.
///
/// `x_t = a x_{t-1} + sqrt(1 - a^2) e_t`, and `y` follows the same recursion
/// with innovations of correlation `coupling` with `e_t`. With the default
/// coupling of 1, `y = x` and the model describes an autocorrelation:
/// `gamma(k) = a^|k|`. In general `gamma_xy(k) = coupling * a^|k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Model {
    a: f64,
    coupling: f64,
}

impl Ar1Model {
    pub fn new(a: f64) -> Result<Self> {
        Self::coupled(a, 1.0)
    }

    /// Two AR(1) processes whose innovations have correlation `coupling`.
    pub fn coupled(a: f64, coupling: f64) -> Result<Self> {
        if !a.is_finite() || a.abs() >= 1.0 {
            return Err(domain(format!("AR(1) coefficient must satisfy |a| < 1, got {a}")));
        }
        if !coupling.is_finite() || coupling.abs() > 1.0 {
            return Err(domain(format!("coupling must lie in [-1, 1], got {coupling}")));
        }
        Ok(Self { a, coupling })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    fn decay(&self, lag: i64) -> f64 {
        let k = lag.unsigned_abs();
        if k > i32::MAX as u64 {
            return 0.0;
        }
        self.a.powi(k as i32)
    }

    /// Generates `n` samples of `(x, y)` starting at time 0.
    ///
    /// The `x` component equals [`ar1_generate`] with the same seed.
    pub fn generate_pair(&self, n: usize, seed: u64) -> Result<(SignalWindow, SignalWindow)> {
        let x = ar1_generate(self.a, n, seed)?;
        if self.coupling == 1.0 {
            return Ok((x.clone(), x));
        }
        let r = self.coupling;
        let s = (1.0 - r * r).sqrt();
        let b = (1.0 - self.a * self.a).sqrt();
        // x's innovations are recovered from the x path so that y uses the
        // same e_t without replaying the generator.
        let mut own = rng_from_seed(derive_seed(seed, stream::SIGNAL, 1));
        let xs = &x.samples;
        let mut ys = Vec::with_capacity(n);
        let u0: f64 = StandardNormal.sample(&mut own);
        ys.push(r * xs[0] + s * u0);
        for t in 1..n {
            let e = if b > 0.0 { (xs[t] - self.a * xs[t - 1]) / b } else { 0.0 };
            let eta: f64 = StandardNormal.sample(&mut own);
            let prev = ys[t - 1];
            ys.push(self.a * prev + b * (r * e + s * eta));
        }
        Ok((x, SignalWindow::new(ys, 0)?))
    }
}

impl CorrelationModel for Ar1Model {
    fn gamma_xx(&self, lag: i64) -> f64 {
        self.decay(lag)
    }

    fn gamma_yy(&self, lag: i64) -> f64 {
        self.decay(lag)
    }

    fn gamma_xy(&self, lag: i64) -> f64 {
        self.coupling * self.decay(lag)
    }

    fn is_autocorrelation(&self) -> bool {
        self.coupling == 1.0
    }

    fn as_ar1(&self) -> Option<&Ar1Model> {
        Some(self)
    }
}

type LagFn = Box<dyn Fn(i64) -> f64 + Send + Sync>;
type Cum4Fn = Box<dyn Fn(i64, i64, i64) -> f64 + Send + Sync>;

/// A model assembled from user-supplied covariance functions.
pub struct CustomModel {
    gamma_xx: LagFn,
    gamma_yy: LagFn,
    gamma_xy: LagFn,
    cum4: Option<Cum4Fn>,
    auto: bool,
}

impl CustomModel {
    /// Jointly Gaussian pair; the fourth-order cumulant vanishes.
    pub fn gaussian(
        gamma_xx: impl Fn(i64) -> f64 + Send + Sync + 'static,
        gamma_yy: impl Fn(i64) -> f64 + Send + Sync + 'static,
        gamma_xy: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            gamma_xx: Box::new(gamma_xx),
            gamma_yy: Box::new(gamma_yy),
            gamma_xy: Box::new(gamma_xy),
            cum4: None,
            auto: false,
        }
    }

    /// Gaussian autocorrelation model (`y = x`).
    pub fn gaussian_auto(gamma: impl Fn(i64) -> f64 + Send + Sync + Clone + 'static) -> Self {
        let mut m = Self::gaussian(gamma.clone(), gamma.clone(), gamma);
        m.auto = true;
        m
    }

    /// Non-Gaussian pair with an explicit `C_xyxy(a, b, c)` kernel.
    pub fn with_cumulant(
        gamma_xx: impl Fn(i64) -> f64 + Send + Sync + 'static,
        gamma_yy: impl Fn(i64) -> f64 + Send + Sync + 'static,
        gamma_xy: impl Fn(i64) -> f64 + Send + Sync + 'static,
        cum4: impl Fn(i64, i64, i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let mut m = Self::gaussian(gamma_xx, gamma_yy, gamma_xy);
        m.cum4 = Some(Box::new(cum4));
        m
    }

    /// A non-Gaussian model whose cumulant kernel is not known.
    ///
    /// Theory operations reject it with [`Error::MissingCumulant`].
    pub fn non_gaussian_unknown(
        gamma_xx: impl Fn(i64) -> f64 + Send + Sync + 'static,
        gamma_yy: impl Fn(i64) -> f64 + Send + Sync + 'static,
        gamma_xy: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let mut m = Self::gaussian(gamma_xx, gamma_yy, gamma_xy);
        m.cum4 = Some(Box::new(|_, _, _| f64::NAN));
        m.auto = false;
        m
    }
}

impl std::fmt::Debug for CustomModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CustomModel")
            .field("gaussian", &self.cum4.is_none())
            .field("auto", &self.auto)
            .finish_non_exhaustive()
    }
}

impl CorrelationModel for CustomModel {
    fn gamma_xx(&self, lag: i64) -> f64 {
        (self.gamma_xx)(lag)
    }

    fn gamma_yy(&self, lag: i64) -> f64 {
        (self.gamma_yy)(lag)
    }

    fn gamma_xy(&self, lag: i64) -> f64 {
        (self.gamma_xy)(lag)
    }

    fn is_gaussian(&self) -> bool {
        self.cum4.is_none()
    }

    fn cum4(&self, a: i64, b: i64, c: i64) -> Option<f64> {
        self.cum4.as_ref().map(|k| k(a, b, c)).filter(|v| v.is_finite())
    }

    fn is_autocorrelation(&self) -> bool {
        self.auto
    }
}

/// Consecutive samples of one signal; `origin` is the absolute time of
/// `samples[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalWindow {
    samples: Vec<f64>,
    origin: i64,
}

impl SignalWindow {
    pub fn new(samples: Vec<f64>, origin: i64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("signal window"));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("non-finite sample at index {i}")));
        }
        Ok(Self { samples, origin })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Absolute time of the last sample.
    pub fn end(&self) -> i64 {
        self.origin + self.samples.len() as i64 - 1
    }

    pub fn at(&self, time: i64) -> Option<f64> {
        let i = time.checked_sub(self.origin)?;
        usize::try_from(i).ok().and_then(|i| self.samples.get(i).copied())
    }

    /// Sub-window of `len` samples starting at absolute time `start`.
    pub fn slice(&self, start: i64, len: usize) -> Result<SignalWindow> {
        let off = start - self.origin;
        if off < 0 || off as usize + len > self.samples.len() || len == 0 {
            return Err(Error::Range(format!(
                "window [{start}, {}) not inside [{}, {}]",
                start + len as i64,
                self.origin,
                self.end()
            )));
        }
        let off = off as usize;
        Ok(SignalWindow { samples: self.samples[off..off + len].to_vec(), origin: start })
    }
}

/// Stationary Gaussian AR(1) path of length `n`.
///
/// `x_0 ~ N(0, 1)` so no burn-in is needed; innovations are standard normal
/// draws from a ChaCha8 stream seeded with `seed`.
pub fn ar1_generate(a: f64, n: usize, seed: u64) -> Result<SignalWindow> {
    if !a.is_finite() || a.abs() >= 1.0 {
        return Err(domain(format!("AR(1) coefficient must satisfy |a| < 1, got {a}")));
    }
    if n == 0 {
        return Err(Error::Empty("AR(1) length"));
    }
    let mut rng = rng_from_seed(seed);
    let b = (1.0 - a * a).sqrt();
    let mut out = Vec::with_capacity(n);
    let mut prev: f64 = StandardNormal.sample(&mut rng);
    out.push(prev);
    for _ in 1..n {
        let e: f64 = StandardNormal.sample(&mut rng);
        prev = a * prev + b * e;
        out.push(prev);
    }
    SignalWindow::new(out, 0)
}

pub fn white_gaussian(n: usize, seed: u64) -> Result<SignalWindow> {
    ar1_generate(0.0, n, seed)
}

/// Aligns `x` and `y` for lag `tau`.
///
/// The anchor `t` is the last sample of `x`; entry `i` pairs `x_{t-i}` with
/// `y_{t+tau-i}` for `i = 0..n`. Both ranges must be present, nothing is
/// padded or wrapped.
pub fn lagged_pair(x: &SignalWindow, y: &SignalWindow, tau: i64, n: usize) -> Result<LaggedPair> {
    if n == 0 {
        return Err(Error::Empty("lagged pair length"));
    }
    let t = x.end();
    let n_i = n as i64;
    let x_first = t - n_i + 1;
    let y_last = t + tau;
    let y_first = y_last - n_i + 1;
    if x_first < x.origin() {
        return Err(Error::Range(format!(
            "x needs times {x_first}..={t}, window starts at {}",
            x.origin()
        )));
    }
    if y_first < y.origin() || y_last > y.end() {
        return Err(Error::Range(format!(
            "lag {tau} needs y times {y_first}..={y_last}, window covers {}..={}",
            y.origin(),
            y.end()
        )));
    }
    let xs = x.samples();
    let ys = y.samples();
    let xo = (t - x.origin()) as usize;
    let yo = (y_last - y.origin()) as usize;
    let xv: Vec<f64> = (0..n).map(|i| xs[xo - i]).collect();
    let yv: Vec<f64> = (0..n).map(|i| ys[yo - i]).collect();
    LaggedPair::new(xv, yv, tau)
}
