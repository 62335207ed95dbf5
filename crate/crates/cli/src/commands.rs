//! Command implementations. Each returns its output files in memory.

use std::path::Path;

use qcorr_core::harness::RegionMc;
use qcorr_core::{
    ar1_generate, asymptotics, bit_budget_compare, m_for_rate, region_scan, run_blocks, run_mc,
    var_CN_finite, var_cN_finite, var_consecutive, Ar1Model, BlockConfig, BudgetConfig,
    EstimatorKind, ExperimentConfig, RegionConfig, SchemeKind, SchemeMode,
};

use crate::args::{
    parse_lags, parse_list, BlocksArgs, BudgetArgs, GenerateArgs, RegionArgs, SimulateArgs,
    TheoryArgs,
};
use crate::error::CliError;
use crate::ingest::{encode_signal, parse_signal};
use crate::manifest::{digest, OutputDigest};

/// A file produced by a command, relative to the output directory.
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Default)]
pub struct CommandResult {
    pub files: Vec<OutputFile>,
    pub warnings: Vec<String>,
    pub inputs: Vec<OutputDigest>,
}

impl CommandResult {
    fn warn(&mut self, msg: String) {
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }
}

/// Shortest round-trip float text.
fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

struct Table {
    w: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        Ok(Self { w })
    }

    fn row(&mut self, fields: Vec<String>) -> Result<(), CliError> {
        self.w.write_record(&fields)?;
        Ok(())
    }

    fn finish(self, name: &str) -> Result<OutputFile, CliError> {
        let bytes = self
            .w
            .into_inner()
            .map_err(|e| CliError::data(format!("csv buffer: {e}")))?;
        Ok(OutputFile {
            name: name.to_string(),
            bytes,
        })
    }
}

fn check_model(name: &str) -> Result<(), CliError> {
    if name != "ar1" {
        return Err(CliError::usage(format!(
            "--model: only 'ar1' is supported, got '{name}'"
        )));
    }
    Ok(())
}

fn scheme(name: &str) -> Result<SchemeKind, CliError> {
    name.parse().map_err(|_| {
        let known: Vec<&str> = SchemeKind::ALL.iter().map(|k| k.name()).collect();
        CliError::usage(format!(
            "--scheme: unknown scheme '{name}' (expected one of {})",
            known.join(", ")
        ))
    })
}

fn estimators(list: &str) -> Result<Vec<EstimatorKind>, CliError> {
    if list.trim() == "all" {
        return Ok(EstimatorKind::ALL.to_vec());
    }
    parse_list::<String>("estimators", list)?
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|e: qcorr_core::Error| CliError::usage(format!("--estimators: {e}")))
        })
        .collect()
}

fn rate_m(n: usize, alpha: f64, res: &mut CommandResult) -> Result<usize, CliError> {
    let (m, exact) = m_for_rate(n, alpha)?;
    if !exact {
        res.warn(format!(
            "N/alpha = {n}/{alpha} is not an integer; using M = {m}"
        ));
    }
    Ok(m)
}

fn alpha_gt1(alpha: f64) -> Result<(), CliError> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(CliError::usage(format!(
            "--alpha: the compression loss needs alpha > 1, got {alpha}"
        )));
    }
    Ok(())
}

pub fn theory(args: &TheoryArgs) -> Result<CommandResult, CliError> {
    check_model(&args.model)?;
    let a_list: Vec<f64> = parse_list("a", &args.a)?;
    let alphas: Vec<f64> = parse_list("alpha", &args.alpha)?;
    let c4s: Vec<f64> = parse_list("c4", &args.c4)?;
    let lags = parse_lags("lags", &args.lags)?;
    alphas.iter().try_for_each(|&a| alpha_gt1(a))?;
    let mut res = CommandResult::default();

    let mut header = vec![
        "a",
        "tau",
        "alpha",
        "c4",
        "v",
        "lim_var_cN",
        "lim_var_cM",
        "lim_var_CN",
        "lim_var_sub",
        "delta_CN_cM",
    ];
    if args.n.is_some() {
        header.extend(["N", "M", "var_cN", "var_cM", "var_CN"]);
    }
    let mut t = Table::new(&header)?;
    let ms = match args.n {
        Some(n) => alphas
            .iter()
            .map(|&al| rate_m(n, al, &mut res).map(Some))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![None; alphas.len()],
    };
    for &a in &a_list {
        let model = Ar1Model::coupled(a, args.coupling)?;
        for (&alpha, &m) in alphas.iter().zip(&ms) {
            for &c4 in &c4s {
                for &tau in &lags {
                    let r = asymptotics(&model, tau, alpha, c4, 0)?;
                    let mut row = vec![
                        num(a),
                        tau.to_string(),
                        num(alpha),
                        num(c4),
                        num(r.v),
                        num(r.lim_var_cN),
                        num(r.lim_var_cM),
                        num(r.lim_var_CN),
                        num(r.lim_var_subsampled),
                        num(r.delta_CN_cM),
                    ];
                    if let (Some(n), Some(m)) = (args.n, m) {
                        let (nf, mf) = (n as f64, m as f64);
                        row.extend([
                            n.to_string(),
                            m.to_string(),
                            num(var_cN_finite(&model, n, tau)?),
                            num(var_consecutive(&model, m, tau)?),
                            num(var_CN_finite(&model, n, m, c4 / (mf * nf * nf), tau)?),
                        ]);
                    }
                    t.row(row)?;
                }
            }
        }
    }
    res.files.push(t.finish("theory.csv")?);
    Ok(res)
}

pub fn simulate(args: &SimulateArgs) -> Result<CommandResult, CliError> {
    check_model(&args.model)?;
    let a_list: Vec<f64> = parse_list("a", &args.a)?;
    let lags = parse_lags("lags", &args.lags)?;
    let kinds = estimators(&args.estimators)?;
    let scheme = scheme(&args.scheme)?;
    let mode: SchemeMode = args
        .scheme_mode
        .parse()
        .map_err(|e: qcorr_core::Error| CliError::usage(format!("--scheme-mode: {e}")))?;
    let mut res = CommandResult::default();
    let m = match args.m {
        Some(m) => m,
        None => rate_m(args.n, args.alpha, &mut res)?,
    };

    let mut t = Table::new(&[
        "a",
        "estimator",
        "scheme",
        "tau",
        "mean",
        "var",
        "se",
        "R",
        "se_mean",
    ])?;
    for &a in &a_list {
        let mut cfg = ExperimentConfig::new(
            Ar1Model::coupled(a, args.coupling)?,
            args.n,
            m,
            args.replicates,
            args.seed,
        );
        cfg.lags = lags.clone();
        cfg.estimators = kinds.clone();
        cfg.scheme = scheme;
        cfg.scheme_mode = mode;
        let s = run_mc(&cfg)?;
        for row in &s.rows {
            let scheme_name = if row.estimator.uses_scheme() {
                scheme.name()
            } else {
                "none"
            };
            t.row(vec![
                num(a),
                row.estimator.name().to_string(),
                scheme_name.to_string(),
                row.tau.to_string(),
                num(row.mean),
                num(row.variance),
                num(row.se_variance),
                row.replicates.to_string(),
                num(row.se_mean),
            ])?;
        }
    }
    res.files.push(t.finish("simulate.csv")?);
    Ok(res)
}

fn default_grid() -> Vec<f64> {
    (0..100).map(|i| i as f64 / 100.0).collect()
}

pub fn region(args: &RegionArgs) -> Result<CommandResult, CliError> {
    let alphas: Vec<f64> = parse_list("alpha", &args.alpha)?;
    alphas.iter().try_for_each(|&a| alpha_gt1(a))?;
    let a_grid = match &args.a {
        Some(s) => parse_list("a", s)?,
        None => default_grid(),
    };
    let c4s: Vec<f64> = parse_list("c4", &args.c4)?;
    let mut res = CommandResult::default();
    for &alpha in &alphas {
        rate_m(args.n, alpha, &mut res)?;
    }
    let mc = (args.replicates > 0).then_some(RegionMc {
        replicates: args.replicates,
        seed: args.seed,
    });
    if mc.is_some() {
        for c4 in c4s.iter().filter(|&&c| c != 0.0 && c != 0.5) {
            res.warn(format!(
                "no built-in scheme has c4 = {c4}; Monte Carlo skipped for it"
            ));
        }
    }
    let scan = region_scan(&RegionConfig {
        alphas,
        a_grid,
        c4s,
        n: args.n,
        mc,
    })?;

    let mut p = Table::new(&[
        "alpha",
        "c4",
        "a",
        "delta_asymptotic",
        "delta_finite",
        "delta_mc",
        "delta_mc_se",
    ])?;
    for pt in &scan.points {
        p.row(vec![
            num(pt.alpha),
            num(pt.c4),
            num(pt.a),
            num(pt.delta_asymptotic),
            num(pt.delta_finite),
            opt(pt.delta_mc),
            opt(pt.delta_mc_se),
        ])?;
    }
    let mut t = Table::new(&[
        "alpha",
        "c4",
        "a_star",
        "a_star_bisect",
        "a_star_finite",
        "a_star_mc",
    ])?;
    for th in &scan.thresholds {
        t.row(vec![
            num(th.alpha),
            num(th.c4),
            num(th.a_star),
            num(th.a_star_bisect),
            opt(th.a_star_finite),
            opt(th.a_star_mc),
        ])?;
    }
    res.files.push(p.finish("region_points.csv")?);
    res.files.push(t.finish("region_thresholds.csv")?);
    Ok(res)
}

fn read_input(
    path: &Path,
    args: &BlocksArgs,
    res: &mut CommandResult,
) -> Result<Vec<f64>, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    res.inputs.push(digest(&path.display().to_string(), &bytes));
    parse_signal(&bytes, path, args.format)
}

pub fn blocks(args: &BlocksArgs) -> Result<CommandResult, CliError> {
    let alphas: Vec<f64> = parse_list("alpha", &args.alpha)?;
    let lags = parse_lags("lags", &args.lags)?;
    let kinds = estimators(&args.estimators)?;
    let scheme = scheme(&args.scheme)?;
    let mut res = CommandResult::default();
    let x = read_input(&args.input, args, &mut res)?;
    let y = match &args.input_y {
        Some(p) => Some(read_input(p, args, &mut res)?),
        None => None,
    };

    let mut detail = Table::new(&["alpha", "M", "estimator", "tau", "reference", "mean", "std"])?;
    let mut header = vec!["alpha".to_string(), "M".to_string()];
    header.extend(kinds.iter().map(|k| k.name().to_string()));
    let mut table = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>())?;
    for &alpha in &alphas {
        let m = rate_m(args.n, alpha, &mut res)?;
        let cfg = BlockConfig {
            n: args.n,
            m,
            lags: lags.clone(),
            estimators: kinds.clone(),
            scheme,
            seed: args.seed,
        };
        let rep = run_blocks(&x, y.as_deref(), args.blocks, &cfg)?;
        let mut rmse_row = vec![num(alpha), m.to_string()];
        for e in &rep.estimates {
            for (l, &tau) in rep.lags.iter().enumerate() {
                detail.row(vec![
                    num(alpha),
                    m.to_string(),
                    e.kind.name().to_string(),
                    tau.to_string(),
                    num(rep.reference[l]),
                    num(e.mean[l]),
                    num(e.std[l]),
                ])?;
            }
            rmse_row.push(num(e.rmse));
        }
        table.row(rmse_row)?;
    }
    res.files.push(detail.finish("blocks.csv")?);
    res.files.push(table.finish("rmse.csv")?);
    Ok(res)
}

pub fn bit_budget(args: &BudgetArgs) -> Result<CommandResult, CliError> {
    let f_bits: Vec<usize> = parse_list("f", &args.f)?;
    let cfg = BudgetConfig {
        model: Ar1Model::new(args.a)?,
        n: args.n,
        alpha: args.alpha,
        f_bits,
        lags: parse_lags("lags", &args.lags)?,
        scheme: scheme(&args.scheme)?,
        replicates: args.replicates,
        seed: args.seed,
    };
    let mut res = CommandResult::default();
    rate_m(args.n, args.alpha, &mut res)?;
    let rows = bit_budget_compare(&cfg)?;
    let mut t = Table::new(&[
        "f",
        "tau",
        "m_quantized",
        "m_compressed",
        "var_quantized",
        "se_quantized",
        "var_compressed",
        "se_compressed",
        "ratio",
    ])?;
    for r in &rows {
        t.row(vec![
            r.f_bits.to_string(),
            r.tau.to_string(),
            r.m_quantized.to_string(),
            r.m_compressed.to_string(),
            num(r.var_quantized),
            num(r.se_quantized),
            num(r.var_compressed),
            num(r.se_compressed),
            num(r.ratio),
        ])?;
    }
    res.files.push(t.finish("bit_budget.csv")?);
    Ok(res)
}

pub fn generate(args: &GenerateArgs) -> Result<CommandResult, CliError> {
    let x = ar1_generate(args.a, args.n, args.seed)?;
    let name = match args.format {
        crate::args::SignalFormat::Csv => "signal.csv",
        crate::args::SignalFormat::Raw => "signal.bin",
    };
    let mut res = CommandResult::default();
    res.files.push(OutputFile {
        name: name.to_string(),
        bytes: encode_signal(x.samples(), args.format),
    });
    Ok(res)
}
