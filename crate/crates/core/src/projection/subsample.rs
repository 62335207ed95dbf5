use rand::Rng as _;

use crate::error::{dimension, Result};
use crate::rng::rng_from_seed;

use super::SparseMap;

/// Draws `m` distinct indices from `0..n` with a partial Fisher-Yates
/// shuffle. Indices are returned in draw order; every size-`m` subset is
/// equally likely.
pub fn subsample_without_replacement(n: usize, m: usize, seed: u64) -> Result<SparseMap> {
    if m > n {
        return Err(dimension(format!("cannot draw {m} distinct indices out of {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(m);
    Ok(SparseMap { bucket: pool, sign: vec![1; m] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_draw_is_a_permutation() {
        let s = subsample_without_replacement(5, 5, 3).unwrap();
        let mut b = s.bucket.clone();
        b.sort_unstable();
        assert_eq!(b, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn too_many_is_an_error() {
        assert!(subsample_without_replacement(3, 4, 0).is_err());
    }

    #[test]
    fn inclusion_frequencies() {
        // P(i in S) = M/N = 0.3 and P(i, j in S) = M(M-1)/(N(N-1)) = 6/90.
        let (n, m, draws) = (10usize, 3usize, 100_000usize);
        let mut single = vec![0usize; n];
        let mut pair = vec![vec![0usize; n]; n];
        for d in 0..draws {
            let s = subsample_without_replacement(n, m, d as u64).unwrap();
            let mut seen = [false; 10];
            for &i in &s.bucket {
                assert!(!seen[i], "duplicate index");
                seen[i] = true;
                single[i] += 1;
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j && seen[i] && seen[j] {
                        pair[i][j] += 1;
                    }
                }
            }
        }
        let p1 = 0.3;
        let se1 = (p1 * (1.0 - p1) / draws as f64).sqrt();
        for (i, &c) in single.iter().enumerate() {
            let f = c as f64 / draws as f64;
            assert!((f - p1).abs() < 3.0 * se1, "index {i}: {f}");
        }
        let p2 = 6.0 / 90.0;
        let se2 = (p2 * (1.0 - p2) / draws as f64).sqrt();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let f = pair[i][j] as f64 / draws as f64;
                    worst = worst.max((f - p2).abs() / se2);
                }
            }
        }
        // 90 ordered pairs (45 distinct); allow the usual 3 SE per pair
        // with a Bonferroni margin for the maximum over 45 cells.
        assert!(worst < 3.9, "worst pair deviation {worst} SE");
    }
}
