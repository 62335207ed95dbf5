//! Summation and replicate statistics.
//!
//! All inner products in the crate go through [`pairwise_sum_by`], so two
//! estimators that visit the same terms in the same order agree bit for bit.

/// Block size below which the cascade falls back to a straight loop.
const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (cascade) sum of `term(0) + ... + term(len - 1)`.
pub fn pairwise_sum_by<F: Fn(usize) -> f64>(len: usize, term: F) -> f64 {
    fn rec<F: Fn(usize) -> f64>(lo: usize, hi: usize, term: &F) -> f64 {
        let n = hi - lo;
        if n <= PAIRWISE_BLOCK {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += term(i);
            }
            acc
        } else {
            let mid = lo + n / 2;
            rec(lo, mid, term) + rec(mid, hi, term)
        }
    }
    rec(0, len, &term)
}

pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i])
}

/// Pairwise-summed inner product. Panics if lengths differ.
///
/// Uses the same split points as [`pairwise_sum_by`], so it equals
/// `pairwise_sum_by(n, |i| x[i] * y[i])` bit for bit.
pub fn pairwise_dot(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "pairwise_dot: length mismatch");
    fn rec(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        if n <= PAIRWISE_BLOCK {
            let mut acc = 0.0;
            for (a, b) in x.iter().zip(y) {
                acc += a * b;
            }
            acc
        } else {
            let mid = n / 2;
            rec(&x[..mid], &y[..mid]) + rec(&x[mid..], &y[mid..])
        }
    }
    rec(x, y)
}

/// Sample mean and unbiased sample variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

impl Moments {
    /// Two-pass mean/variance. Variance is NaN for fewer than two values.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { count: 0, mean: f64::NAN, variance: f64::NAN };
        }
        let mean = pairwise_sum(values) / n as f64;
        let variance = if n < 2 {
            f64::NAN
        } else {
            pairwise_sum_by(n, |i| {
                let d = values[i] - mean;
                d * d
            }) / (n - 1) as f64
        };
        Self { count: n, mean, variance }
    }

    pub fn se_mean(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }

    /// Moments with observation `i` removed, computed in O(1).
    fn leave_one_out(&self, value: f64) -> Self {
        let n = self.count as f64;
        let mean = (n * self.mean - value) / (n - 1.0);
        let d = value - self.mean;
        let variance = ((n - 1.0) * self.variance - n / (n - 1.0) * d * d) / (n - 2.0);
        Self { count: self.count - 1, mean, variance: variance.max(0.0) }
    }
}

/// A jackknifed statistic: full-sample value and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jackknife {
    pub estimate: f64,
    pub se: f64,
}

/// Jackknife over replicates of a statistic of several columns' moments.
///
/// All columns must hold the same replicates in the same order; the
/// statistic receives one [`Moments`] per column. Needs at least three
/// replicates, otherwise the standard error is NaN.
pub fn jackknife_moments<F>(columns: &[&[f64]], stat: F) -> Jackknife
where
    F: Fn(&[Moments]) -> f64,
{
    assert!(!columns.is_empty(), "jackknife needs at least one column");
    let r = columns[0].len();
    assert!(
        columns.iter().all(|c| c.len() == r),
        "jackknife columns must have equal length"
    );
    let full: Vec<Moments> = columns.iter().map(|c| Moments::of(c)).collect();
    let estimate = stat(&full);
    if r < 3 {
        return Jackknife { estimate, se: f64::NAN };
    }
    let mut scratch = full.clone();
    let loo: Vec<f64> = (0..r)
        .map(|i| {
            for (slot, (m, col)) in scratch.iter_mut().zip(full.iter().zip(columns)) {
                *slot = m.leave_one_out(col[i]);
            }
            stat(&scratch)
        })
        .collect();
    let centre = pairwise_sum(&loo) / r as f64;
    let ss = pairwise_sum_by(r, |i| (loo[i] - centre).powi(2));
    Jackknife { estimate, se: ((r - 1) as f64 / r as f64 * ss).sqrt() }
}

/// Jackknife standard error of the sample variance of one column.
pub fn jackknife_variance(values: &[f64]) -> Jackknife {
    jackknife_moments(&[values], |m| m[0].variance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pairwise_matches_exact_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn moments_of_small_sample() {
        let m = Moments::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!(Moments::of(&[1.0]).variance.is_nan());
    }

    #[test]
    fn jackknife_of_mean_is_classical_se() {
        // For the mean, the jackknife SE equals s / sqrt(n) exactly.
        let v = [0.3, -1.2, 2.5, 0.7, 1.1, -0.4, 0.9];
        let jk = jackknife_moments(&[&v], |m| m[0].mean);
        let m = Moments::of(&v);
        assert!((jk.se - m.se_mean()).abs() < 1e-12);
    }

    #[test]
    fn jackknife_variance_matches_brute_force() {
        let v = [0.3, -1.2, 2.5, 0.7, 1.1, -0.4, 0.9, 3.3];
        let jk = jackknife_variance(&v);
        let n = v.len();
        let loo: Vec<f64> = (0..n)
            .map(|i| {
                let rest: Vec<f64> = v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect();
                Moments::of(&rest).variance
            })
            .collect();
        let c = loo.iter().sum::<f64>() / n as f64;
        let se = ((n - 1) as f64 / n as f64 * loo.iter().map(|x| (x - c).powi(2)).sum::<f64>()).sqrt();
        assert!((jk.se - se).abs() < 1e-12);
    }

    #[test]
    fn two_replicates_have_no_se() {
        let jk = jackknife_variance(&[1.0, 2.0]);
        assert_eq!(jk.estimate, 0.5);
        assert!(jk.se.is_nan());
    }

    proptest! {
        #[test]
        fn dot_matches_sum_by(v in proptest::collection::vec(-1e3f64..1e3, 0..300)) {
            let w: Vec<f64> = v.iter().map(|x| x * 0.37 - 1.0).collect();
            let a = pairwise_dot(&v, &w);
            let b = pairwise_sum_by(v.len(), |i| v[i] * w[i]);
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }

        #[test]
        fn pairwise_close_to_naive(v in proptest::collection::vec(-1e3f64..1e3, 0..300)) {
            let naive: f64 = v.iter().sum();
            let scale: f64 = v.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
            prop_assert!((pairwise_sum(&v) - naive).abs() <= 1e-12 * scale);
        }
    }
}
