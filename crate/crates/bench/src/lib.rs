//! Benchmark fixtures.

use qcorr_core::{ar1_generate, LaggedPair};

/// A lag-1 pair cut from a standard AR(1) path with `a = 0.7`.
pub fn ar1_pair(n: usize, seed: u64) -> LaggedPair {
    let s = ar1_generate(0.7, n + 1, seed).expect("valid AR(1)").into_samples();
    LaggedPair::new(s[..n].to_vec(), s[1..].to_vec(), 1).expect("equal lengths")
}
