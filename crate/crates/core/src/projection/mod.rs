//! Random compression operators `Phi: R^N -> R^M`.
//!
//! Five i.i.d.-entry constructions are normalized so that
//! `M * N * E[phi^2] = 1`, which makes `(Phi x)^T (Phi y)` an unbiased
//! estimate of `x^T y / N`. Subsampling without replacement is provided as
//! a sixth kind; it is not an i.i.d.-entry matrix and its estimator is the
//! plain average of the selected products.
//!
//! Sparse kinds never materialize the `M x N` matrix: the hash kind scatters
//! each input sample into one bucket (O(N)), the subsampling kinds gather
//! `M` samples (O(M)), and the half-density ternary kind keeps a compressed
//! row list of its ~`2N` nonzeros.

mod subsample;

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, Geometric, StandardNormal};

use crate::error::{dimension, domain, Error, Result};
use crate::rng::rng_from_seed;
use crate::stats::pairwise_dot;

pub use subsample::subsample_without_replacement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    /// `phi ~ N(0, 1/(MN))`.
    DenseGaussian,
    /// `phi = +-1/sqrt(MN)` equiprobably.
    DenseBernoulli,
    /// `phi = +-1/sqrt(2N)` with probability `1/M` each, else 0.
    TernaryHalf,
    /// One `+-1/sqrt(N)` per column at a uniform row.
    TernaryHash,
    /// One `+-1/sqrt(M)` per row at a uniform column.
    SubsampleWithReplacement,
    /// `M` distinct sample indices.
    SubsampleWithoutReplacement,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::DenseGaussian,
        SchemeKind::DenseBernoulli,
        SchemeKind::TernaryHalf,
        SchemeKind::TernaryHash,
        SchemeKind::SubsampleWithReplacement,
        SchemeKind::SubsampleWithoutReplacement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::DenseGaussian => "gaussian",
            SchemeKind::DenseBernoulli => "bernoulli",
            SchemeKind::TernaryHalf => "ternary-half",
            SchemeKind::TernaryHash => "ternary-hash",
            SchemeKind::SubsampleWithReplacement => "with-repl",
            SchemeKind::SubsampleWithoutReplacement => "without-repl",
        }
    }

    /// Whether the matrix has i.i.d. entries in the marginal sense, i.e.
    /// whether a fourth cumulant of `phi` is defined.
    pub fn is_iid(self) -> bool {
        self != SchemeKind::SubsampleWithoutReplacement
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| domain(format!("unknown scheme '{s}'")))
    }
}

/// Fourth-order cumulant of a generic entry and its limit constant
/// `c4_phi = lim M N^2 Cum4[phi]` at fixed `N/M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantInfo {
    pub cum4: f64,
    pub c4_phi: f64,
}

/// Validated `(kind, N, M)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionScheme {
    kind: SchemeKind,
    n: usize,
    m: usize,
}

impl ProjectionScheme {
    pub fn new(kind: SchemeKind, n: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(dimension(format!("need 1 <= M <= N, got N={n}, M={m}")));
        }
        if kind == SchemeKind::TernaryHalf && m < 2 {
            return Err(domain("ternary-half needs M >= 2 (nonzero probability 2/M)"));
        }
        Ok(Self { kind, n, m })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    pub fn cumulants(&self) -> Result<CumulantInfo> {
        let (n, m) = (self.n as f64, self.m as f64);
        let mn2 = m * n * n;
        let info = match self.kind {
            SchemeKind::DenseGaussian => CumulantInfo { cum4: 0.0, c4_phi: 0.0 },
            SchemeKind::DenseBernoulli => CumulantInfo { cum4: -2.0 / (m * n).powi(2), c4_phi: 0.0 },
            SchemeKind::TernaryHalf => CumulantInfo { cum4: (0.5 - 3.0 / m) / mn2, c4_phi: 0.5 },
            SchemeKind::TernaryHash => CumulantInfo { cum4: (1.0 - 3.0 / m) / mn2, c4_phi: 1.0 },
            SchemeKind::SubsampleWithReplacement => {
                CumulantInfo { cum4: (n / m - 3.0 / m) / mn2, c4_phi: n / m }
            }
            SchemeKind::SubsampleWithoutReplacement => {
                return Err(Error::Unsupported(
                    "subsampling without replacement has no i.i.d. entries, Cum4[phi] is undefined".into(),
                ))
            }
        };
        Ok(info)
    }

    /// The cumulant that makes the i.i.d.-entry variance formula exact.
    ///
    /// The hash kind couples the rows of each column (one nonzero), which
    /// adds a `-Cov` term equal to `-(M-1)/(M N^2) sum x^2 y^2`; the net
    /// effect is the Bernoulli value `-2/(MN)^2`. Subsampling with
    /// replacement couples the entries of a row and is not of this form at
    /// all, so `None` is returned for it (and for the without-replacement
    /// kind).
    pub fn variance_cum4(&self) -> Option<f64> {
        let (n, m) = (self.n as f64, self.m as f64);
        match self.kind {
            SchemeKind::DenseGaussian | SchemeKind::DenseBernoulli | SchemeKind::TernaryHalf => {
                self.cumulants().ok().map(|c| c.cum4)
            }
            SchemeKind::TernaryHash => Some(-2.0 / (m * n).powi(2)),
            SchemeKind::SubsampleWithReplacement | SchemeKind::SubsampleWithoutReplacement => None,
        }
    }

    pub fn sample(&self, seed: u64) -> RealizedScheme {
        let (n, m) = (self.n, self.m);
        let mut rng = rng_from_seed(seed);
        let op = match self.kind {
            SchemeKind::DenseGaussian => {
                let scale = 1.0 / ((m * n) as f64).sqrt();
                let entries = (0..m * n)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        z * scale
                    })
                    .collect();
                Operator::Dense(entries)
            }
            SchemeKind::DenseBernoulli => {
                let scale = 1.0 / ((m * n) as f64).sqrt();
                let mut entries = Vec::with_capacity(m * n);
                while entries.len() < m * n {
                    let bits: u64 = rng.random();
                    let take = (m * n - entries.len()).min(64);
                    entries.extend((0..take).map(|b| if bits >> b & 1 == 1 { scale } else { -scale }));
                }
                Operator::Dense(entries)
            }
            SchemeKind::TernaryHalf => {
                // Gaps between nonzeros of an i.i.d. Bernoulli(2/M) pattern
                // over the row-major entries are geometric.
                let p = 2.0 / m as f64;
                let total = (m * n) as u64;
                let mut row_start = vec![0usize; m + 1];
                let mut cols = Vec::with_capacity(2 * n + 16);
                let mut sign = Vec::with_capacity(2 * n + 16);
                let mut pos: u64 = 0;
                if p >= 1.0 {
                    for _ in 0..total {
                        let r = (pos / n as u64) as usize;
                        cols.push((pos % n as u64) as usize);
                        sign.push(if rng.random::<bool>() { 1i8 } else { -1 });
                        row_start[r + 1] += 1;
                        pos += 1;
                    }
                } else {
                    let geo = Geometric::new(p).expect("0 < p < 1");
                    loop {
                        pos = pos.saturating_add(geo.sample(&mut rng));
                        if pos >= total {
                            break;
                        }
                        let r = (pos / n as u64) as usize;
                        cols.push((pos % n as u64) as usize);
                        sign.push(if rng.random::<bool>() { 1i8 } else { -1 });
                        row_start[r + 1] += 1;
                        pos += 1;
                    }
                }
                for r in 0..m {
                    row_start[r + 1] += row_start[r];
                }
                Operator::Ternary { row_start, cols, sign, scale: 1.0 / (2.0 * n as f64).sqrt() }
            }
            SchemeKind::TernaryHash => {
                let bucket = (0..n).map(|_| rng.random_range(0..m)).collect();
                let sign = (0..n).map(|_| if rng.random::<bool>() { 1i8 } else { -1 }).collect();
                Operator::Hash { map: SparseMap { bucket, sign }, scale: 1.0 / (n as f64).sqrt() }
            }
            SchemeKind::SubsampleWithReplacement => {
                let bucket = (0..m).map(|_| rng.random_range(0..n)).collect();
                let sign = (0..m).map(|_| if rng.random::<bool>() { 1i8 } else { -1 }).collect();
                Operator::Gather { map: SparseMap { bucket, sign }, scale: 1.0 / (m as f64).sqrt() }
            }
            SchemeKind::SubsampleWithoutReplacement => {
                let map = subsample_without_replacement(n, m, seed).expect("validated m <= n");
                Operator::Select(map)
            }
        };
        RealizedScheme { scheme: *self, op }
    }
}

/// Draws a realized operator for `(kind, n, m)`.
pub fn sample_scheme(kind: SchemeKind, n: usize, m: usize, seed: u64) -> Result<RealizedScheme> {
    Ok(ProjectionScheme::new(kind, n, m)?.sample(seed))
}

pub fn scheme_cumulants(kind: SchemeKind, n: usize, m: usize) -> Result<CumulantInfo> {
    ProjectionScheme::new(kind, n, m)?.cumulants()
}

/// Index/sign representation of a one-nonzero-per-column (hash) or
/// one-nonzero-per-row (subsampling) operator. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMap {
    /// Hash: row of each column (length N). Subsampling: column of each row
    /// (length M).
    pub bucket: Vec<usize>,
    pub sign: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq)]
enum Operator {
    /// Row-major `M x N` entries, already scaled.
    Dense(Vec<f64>),
    Ternary { row_start: Vec<usize>, cols: Vec<usize>, sign: Vec<i8>, scale: f64 },
    Hash { map: SparseMap, scale: f64 },
    Gather { map: SparseMap, scale: f64 },
    Select(SparseMap),
}

/// An immutable draw of a projection operator.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedScheme {
    scheme: ProjectionScheme,
    op: Operator,
}

#[inline]
fn signed(s: i8, v: f64) -> f64 {
    if s < 0 {
        -v
    } else {
        v
    }
}

impl RealizedScheme {
    pub fn scheme(&self) -> &ProjectionScheme {
        &self.scheme
    }

    pub fn kind(&self) -> SchemeKind {
        self.scheme.kind
    }

    pub fn n(&self) -> usize {
        self.scheme.n
    }

    pub fn m(&self) -> usize {
        self.scheme.m
    }

    /// The index map for hash and subsampling kinds.
    pub fn sparse_map(&self) -> Option<&SparseMap> {
        match &self.op {
            Operator::Hash { map, .. } | Operator::Gather { map, .. } | Operator::Select(map) => Some(map),
            _ => None,
        }
    }

    pub fn nonzeros(&self) -> usize {
        match &self.op {
            Operator::Dense(e) => e.iter().filter(|v| **v != 0.0).count(),
            Operator::Ternary { cols, .. } => cols.len(),
            Operator::Hash { map, .. } | Operator::Gather { map, .. } | Operator::Select(map) => map.bucket.len(),
        }
    }

    /// `Phi v`. For the without-replacement kind this is the selected
    /// samples in draw order, unscaled.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.m()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        let (n, m) = (self.n(), self.m());
        if v.len() != n {
            return Err(dimension(format!("input has length {}, operator expects {n}", v.len())));
        }
        if out.len() != m {
            return Err(dimension(format!("output has length {}, operator yields {m}", out.len())));
        }
        match &self.op {
            Operator::Dense(entries) => {
                for (o, row) in out.iter_mut().zip(entries.chunks_exact(n)) {
                    *o = pairwise_dot(row, v);
                }
            }
            Operator::Ternary { row_start, cols, sign, scale } => {
                for (r, o) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for k in row_start[r]..row_start[r + 1] {
                        acc += signed(sign[k], v[cols[k]]);
                    }
                    *o = acc * scale;
                }
            }
            Operator::Hash { map, scale } => {
                out.fill(0.0);
                for (j, (&h, &s)) in map.bucket.iter().zip(&map.sign).enumerate() {
                    out[h] += signed(s, v[j]);
                }
                for o in out.iter_mut() {
                    *o *= scale;
                }
            }
            Operator::Gather { map, scale } => {
                for (o, (&g, &s)) in out.iter_mut().zip(map.bucket.iter().zip(&map.sign)) {
                    *o = signed(s, v[g]) * scale;
                }
            }
            Operator::Select(map) => {
                for (o, &g) in out.iter_mut().zip(&map.bucket) {
                    *o = v[g];
                }
            }
        }
        Ok(())
    }

    /// Materializes the operator as row-major `M x N` entries.
    ///
    /// Diagnostics only; estimators never call it.
    pub fn to_dense(&self) -> Vec<f64> {
        let (n, m) = (self.n(), self.m());
        let mut d = vec![0.0; m * n];
        match &self.op {
            Operator::Dense(e) => d.copy_from_slice(e),
            Operator::Ternary { row_start, cols, sign, scale } => {
                for r in 0..m {
                    for k in row_start[r]..row_start[r + 1] {
                        d[r * n + cols[k]] = signed(sign[k], *scale);
                    }
                }
            }
            Operator::Hash { map, scale } => {
                for (j, (&h, &s)) in map.bucket.iter().zip(&map.sign).enumerate() {
                    d[h * n + j] = signed(s, *scale);
                }
            }
            Operator::Gather { map, scale } => {
                for (i, (&g, &s)) in map.bucket.iter().zip(&map.sign).enumerate() {
                    d[i * n + g] = signed(s, *scale);
                }
            }
            Operator::Select(map) => {
                for (i, &g) in map.bucket.iter().enumerate() {
                    d[i * n + g] = 1.0;
                }
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const IID: [SchemeKind; 5] = [
        SchemeKind::DenseGaussian,
        SchemeKind::DenseBernoulli,
        SchemeKind::TernaryHalf,
        SchemeKind::TernaryHash,
        SchemeKind::SubsampleWithReplacement,
    ];

    #[test]
    fn dimension_checks() {
        assert!(matches!(sample_scheme(SchemeKind::DenseGaussian, 4, 5, 0), Err(Error::Dimension(_))));
        assert!(matches!(sample_scheme(SchemeKind::DenseGaussian, 4, 0, 0), Err(Error::Dimension(_))));
        assert!(matches!(sample_scheme(SchemeKind::TernaryHalf, 4, 1, 0), Err(Error::Domain(_))));
        let s = sample_scheme(SchemeKind::TernaryHash, 6, 3, 1).unwrap();
        assert!(matches!(s.apply(&[1.0; 5]), Err(Error::Dimension(_))));
    }

    #[test]
    fn names_round_trip() {
        for k in SchemeKind::ALL {
            assert_eq!(k.name().parse::<SchemeKind>().unwrap(), k);
        }
        assert!("hadamard".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn bernoulli_entries_are_signed_constants() {
        let s = sample_scheme(SchemeKind::DenseBernoulli, 4, 2, 9).unwrap();
        let v = 1.0 / 8f64.sqrt();
        for e in s.to_dense() {
            assert!(e == v || e == -v, "{e}");
        }
    }

    #[test]
    fn hash_has_one_nonzero_per_column() {
        let s = sample_scheme(SchemeKind::TernaryHash, 6, 3, 4).unwrap();
        let d = s.to_dense();
        let v = 1.0 / 6f64.sqrt();
        assert_eq!(d.iter().filter(|e| **e != 0.0).count(), 6);
        for j in 0..6 {
            let col: Vec<f64> = (0..3).map(|i| d[i * 6 + j]).filter(|e| *e != 0.0).collect();
            assert_eq!(col.len(), 1);
            assert!((col[0].abs() - v).abs() < 1e-15);
        }
    }

    #[test]
    fn with_replacement_has_one_nonzero_per_row() {
        let s = sample_scheme(SchemeKind::SubsampleWithReplacement, 10, 4, 4).unwrap();
        let d = s.to_dense();
        for i in 0..4 {
            assert_eq!(d[i * 10..(i + 1) * 10].iter().filter(|e| **e != 0.0).count(), 1);
        }
        assert!(s.sparse_map().unwrap().bucket.iter().all(|&g| g < 10));
    }

    #[test]
    fn hash_on_unit_vector() {
        let s = sample_scheme(SchemeKind::TernaryHash, 8, 3, 21).unwrap();
        let map = s.sparse_map().unwrap().clone();
        for j in 0..8 {
            let mut e = vec![0.0; 8];
            e[j] = 1.0;
            let out = s.apply(&e).unwrap();
            for (i, o) in out.iter().enumerate() {
                if i == map.bucket[j] {
                    assert_eq!(*o, map.sign[j] as f64 / 8f64.sqrt());
                } else {
                    assert_eq!(*o, 0.0);
                }
            }
        }
    }

    #[test]
    fn full_selection_returns_entries_in_draw_order() {
        let v: Vec<f64> = (0..7).map(|i| i as f64 * 1.5).collect();
        let s = sample_scheme(SchemeKind::SubsampleWithoutReplacement, 7, 7, 2).unwrap();
        let out = s.apply(&v).unwrap();
        let map = s.sparse_map().unwrap();
        for (o, &g) in out.iter().zip(&map.bucket) {
            assert_eq!(*o, v[g]);
        }
        let mut sorted = out.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sorted, v);
    }

    #[test]
    fn apply_matches_dense_product() {
        let v: Vec<f64> = (0..30).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        for kind in SchemeKind::ALL {
            let s = sample_scheme(kind, 30, 6, 13).unwrap();
            let d = s.to_dense();
            let out = s.apply(&v).unwrap();
            for i in 0..6 {
                let expect: f64 = (0..30).map(|j| d[i * 30 + j] * v[j]).sum();
                assert!((out[i] - expect).abs() < 1e-12, "{kind}: row {i}");
            }
        }
    }

    #[test]
    fn cumulant_table() {
        let (n, m) = (1000usize, 100usize);
        let (nf, mf) = (n as f64, m as f64);
        let mn2 = mf * nf * nf;
        let g = scheme_cumulants(SchemeKind::DenseGaussian, n, m).unwrap();
        assert_eq!((g.cum4, g.c4_phi), (0.0, 0.0));
        let b = scheme_cumulants(SchemeKind::DenseBernoulli, n, m).unwrap();
        assert!((b.cum4 - (-2.0 / (mf * nf).powi(2))).abs() < 1e-25);
        assert_eq!(b.c4_phi, 0.0);
        let t = scheme_cumulants(SchemeKind::TernaryHalf, n, m).unwrap();
        assert!((mn2 * t.cum4 - (0.5 - 3.0 / mf)).abs() < 1e-12);
        assert_eq!(t.c4_phi, 0.5);
        let h = scheme_cumulants(SchemeKind::TernaryHash, n, m).unwrap();
        assert!((mn2 * h.cum4 - (1.0 - 3.0 / mf)).abs() < 1e-12);
        assert_eq!(h.c4_phi, 1.0);
        let w = scheme_cumulants(SchemeKind::SubsampleWithReplacement, n, m).unwrap();
        assert!((mn2 * w.cum4 - (nf / mf - 3.0 / mf)).abs() < 1e-12);
        assert_eq!(w.c4_phi, 10.0);
        assert!(matches!(
            scheme_cumulants(SchemeKind::SubsampleWithoutReplacement, n, m),
            Err(Error::Unsupported(_))
        ));
    }

    /// Entry moments of 10^6 realized entries at (N=50, M=10), pooled over
    /// 2000 matrices. Standard errors are jackknifed over whole matrices,
    /// which accounts for the within-column (hash) and within-row
    /// (with-replacement) coupling.
    #[test]
    fn realized_entry_moments() {
        use crate::stats::jackknife_moments;
        let (n, m) = (50usize, 10usize);
        let matrices = 2000;
        for kind in IID {
            let scheme = ProjectionScheme::new(kind, n, m).unwrap();
            let info = scheme.cumulants().unwrap();
            let (mut m1s, mut m2s, mut m4s) = (vec![], vec![], vec![]);
            for s in 0..matrices {
                let d = scheme.sample(1_000 + s as u64).to_dense();
                let len = d.len() as f64;
                m1s.push(d.iter().sum::<f64>() / len);
                m2s.push(d.iter().map(|e| e * e).sum::<f64>() / len);
                m4s.push(d.iter().map(|e| e.powi(4)).sum::<f64>() / len);
            }
            let target_var = 1.0 / (m * n) as f64;
            let mean = jackknife_moments(&[&m1s], |c| c[0].mean);
            let var = jackknife_moments(&[&m2s], |c| c[0].mean);
            let cum4 = jackknife_moments(&[&m2s, &m4s], |c| c[1].mean - 3.0 * c[0].mean * c[0].mean);
            for (label, jk, target) in [("mean", mean, 0.0), ("var", var, target_var), ("cum4", cum4, info.cum4)] {
                // Bernoulli moments are constants, so allow for rounding.
                let tol = 5.0 * jk.se + 1e-12 * target_var.powi(if label == "cum4" { 2 } else { 1 });
                assert!((jk.estimate - target).abs() <= tol, "{kind} {label}: {} vs {target} (se {})", jk.estimate, jk.se);
            }
        }
    }

    #[test]
    fn ternary_half_mean_nonzeros_is_2n() {
        let (n, m) = (200usize, 20usize);
        let scheme = ProjectionScheme::new(SchemeKind::TernaryHalf, n, m).unwrap();
        let draws = 4000;
        let counts: Vec<f64> = (0..draws).map(|s| scheme.sample(s).nonzeros() as f64).collect();
        let mm = crate::stats::Moments::of(&counts);
        assert!((mm.mean - 2.0 * n as f64).abs() < 5.0 * mm.se_mean(), "{}", mm.mean);
    }

    #[test]
    fn gaussian_norm_is_preserved_on_average() {
        // E||Phi v||^2 = M E[phi^2] ||v||^2 = ||v||^2 / N
        let (n, m) = (40usize, 8usize);
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let vals: Vec<f64> = (0..2000)
            .map(|s| {
                let p = sample_scheme(SchemeKind::DenseGaussian, n, m, s).unwrap().apply(&v).unwrap();
                p.iter().map(|x| x * x).sum()
            })
            .collect();
        let mm = crate::stats::Moments::of(&vals);
        assert!((mm.mean - norm2 / n as f64).abs() < 3.0 * mm.se_mean(), "{} vs {}", mm.mean, norm2 / n as f64);
    }

    #[test]
    fn sampling_is_deterministic() {
        for kind in SchemeKind::ALL {
            let a = sample_scheme(kind, 64, 8, 77).unwrap();
            let b = sample_scheme(kind, 64, 8, 77).unwrap();
            assert_eq!(a, b);
        }
    }

    proptest! {
        #[test]
        fn apply_is_linear(seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0, k in 0usize..6) {
            let kind = SchemeKind::ALL[k];
            let s = sample_scheme(kind, 24, 5, seed).unwrap();
            let v: Vec<f64> = (0..24).map(|i| (i as f64 + seed as f64).cos()).collect();
            let w: Vec<f64> = (0..24).map(|i| (i as f64 * 0.7).sin()).collect();
            let comb: Vec<f64> = v.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
            let lhs = s.apply(&comb).unwrap();
            let pv = s.apply(&v).unwrap();
            let pw = s.apply(&w).unwrap();
            for i in 0..5 {
                prop_assert!((lhs[i] - (a * pv[i] + b * pw[i])).abs() < 1e-12);
            }
        }
    }
}
