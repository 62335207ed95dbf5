//! Compressed and one-bit correlation estimators with their variance theory.
//!
//! The crate covers four layers:
//!
//! * [`models`]: analytic covariance models and AR(1) signal generation,
//! * [`projection`]: random compression operators and subsampling,
//! * [`estimators`]: plain, compressed, subsampled and quantized estimates,
//! * [`theory`] and [`harness`]: closed-form variances and the Monte-Carlo
//!   runner that checks them.

pub mod error;
pub mod estimators;
pub mod harness;
pub mod models;
pub mod projection;
pub mod rng;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use estimators::{
    arcsin_correct, compressed_corr, consecutive_corr, estimate_series, evaluate_kinds, plain_corr,
    quantized_compressed, quantized_plain, quantized_subsampled, subsampled_corr, EstimateSeries, EstimatorKind,
    LaggedPair, SchemeReuse, SketchConfig,
};
pub use models::{ar1_generate, lagged_pair, white_gaussian, Ar1Model, CorrelationModel, CustomModel, SignalWindow};
pub use projection::{
    sample_scheme, scheme_cumulants, subsample_without_replacement, CumulantInfo, ProjectionScheme, RealizedScheme,
    SchemeKind, SparseMap,
};
pub use harness::{
    bit_budget_compare, m_for_rate, region_scan, run_blocks, run_mc, BlockConfig, BlockReport, BudgetConfig, BudgetRow,
    ExperimentConfig, McRow, McSummary, RegionConfig, RegionMc, RegionScan, SchemeMode,
};
pub use theory::{
    asymptotics, singularity_threshold, var_CN_finite, var_cN_finite, var_compressed, var_consecutive,
    var_subsampled, AsymptoticReport, Kernels,
};
