//! Monte-Carlo checks of the closed forms through the public API.

use proptest::prelude::*;
use qcorr_core::theory::{expected_norm_product, Kernels};
use qcorr_core::{
    asymptotics, run_mc, var_CN_finite, var_cN_finite, var_compressed, Ar1Model, EstimatorKind, ExperimentConfig,
    ProjectionScheme, SchemeKind,
};

fn mc_config(a: f64, scheme: SchemeKind, replicates: usize, seed: u64) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(Ar1Model::new(a).unwrap(), 128, 16, replicates, seed);
    c.lags = vec![0, 1, 4];
    c.estimators = vec![EstimatorKind::Compressed];
    c.scheme = scheme;
    c
}

#[test]
fn compressed_variance_matches_theory_for_every_scheme() {
    for (i, kind) in SchemeKind::ALL.into_iter().enumerate() {
        let cfg = mc_config(0.6, kind, 4000, 100 + i as u64);
        let s = run_mc(&cfg).unwrap();
        let scheme = ProjectionScheme::new(kind, cfg.n, cfg.m).unwrap();
        for &tau in &cfg.lags {
            let row = s.row(EstimatorKind::Compressed, tau).unwrap();
            let theory = var_compressed(&cfg.model, &scheme, tau).unwrap();
            let z = (row.variance - theory) / row.se_variance;
            assert!(z.abs() < 5.0, "{kind} tau={tau}: mc {} theory {theory} z={z:.2}", row.variance);
            let bias = (row.mean - cfg.model.a().powi(tau as i32)) / row.se_mean;
            assert!(bias.abs() < 5.0, "{kind} tau={tau}: mean {} z={bias:.2}", row.mean);
        }
    }
}

#[test]
fn fresh_per_lag_leaves_per_lag_variance_unchanged() {
    let mut cfg = mc_config(0.6, SchemeKind::TernaryHalf, 3000, 7);
    cfg.scheme_mode = qcorr_core::SchemeMode::FreshPerLag;
    let s = run_mc(&cfg).unwrap();
    let scheme = ProjectionScheme::new(cfg.scheme, cfg.n, cfg.m).unwrap();
    for &tau in &cfg.lags {
        let row = s.row(EstimatorKind::Compressed, tau).unwrap();
        let theory = var_compressed(&cfg.model, &scheme, tau).unwrap();
        assert!(((row.variance - theory) / row.se_variance).abs() < 5.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_decomposition(a in -0.95f64..0.95, tau in -10i64..10, alpha in 1.0f64..100.0, c4 in 0.0f64..2.0) {
        let r = asymptotics(&Ar1Model::new(a).unwrap(), tau, alpha, c4, 0).unwrap();
        let rhs = r.delta_CN_cN + (1.0 - alpha) * r.v;
        prop_assert!((r.delta_CN_cM - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn kernel_identity_at_zero(a in -0.95f64..0.95, r in -1.0f64..1.0, tau in -8i64..8) {
        let model = Ar1Model::coupled(a, r).unwrap();
        let k = Kernels::new(&model, tau).unwrap();
        let want = a.powi(tau.abs() as i32).powi(2) * r * r - 1.0;
        prop_assert!((k.g(0) - k.f(0) - want).abs() < 1e-12);
    }

    #[test]
    fn gaussian_loss_is_bounded(a in 0.0f64..0.9, n in 16usize..200, m_frac in 0.05f64..1.0, tau in 0i64..4) {
        let m = ((n as f64 * m_frac) as usize).max(1);
        let model = Ar1Model::new(a).unwrap();
        let nf = n as f64;
        let loss = var_CN_finite(&model, n, m, 0.0, tau).unwrap() - var_cN_finite(&model, n, tau).unwrap();
        let bound = 2.0 / (m as f64 * nf * nf) * expected_norm_product(&model, n, tau).unwrap();
        prop_assert!(loss <= bound * (1.0 + 1e-12), "loss {} bound {}", loss, bound);
    }
}
