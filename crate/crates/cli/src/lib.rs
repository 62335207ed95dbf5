//! The `qcorr` command-line tool.
//!
//! Every command writes CSV files and a `manifest.json` into `--out`. The
//! manifest records the resolved arguments and a SHA-256 digest of each
//! output, and `qcorr replay` reruns a manifest and checks the digests.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod manifest;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;

pub use args::{Cli, Command};
pub use error::CliError;
pub use ingest::ingest_signal;
pub use manifest::RunManifest;

use commands::CommandResult;
use manifest::{digest, now_ms, read_manifest, MANIFEST_FILE};

/// What a finished command left on disk.
#[derive(Debug)]
pub struct Outcome {
    pub out_dir: PathBuf,
    pub manifest: RunManifest,
    /// For `replay`: whether every digest matched the original run.
    pub replay_matched: Option<bool>,
}

fn seed_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Simulate(a) => Some(a.seed),
        Command::Region(a) => Some(a.seed),
        Command::Blocks(a) => Some(a.seed),
        Command::BitBudget(a) => Some(a.seed),
        Command::Generate(a) => Some(a.seed),
        Command::Theory(_) | Command::Replay(_) => None,
    }
}

fn execute(cmd: &Command) -> Result<(CommandResult, serde_json::Value, PathBuf), CliError> {
    let json = |v: serde_json::Result<serde_json::Value>| {
        v.map_err(|e| CliError::data(format!("config echo: {e}")))
    };
    Ok(match cmd {
        Command::Theory(a) => (
            commands::theory(a)?,
            json(serde_json::to_value(a))?,
            a.output.out.clone(),
        ),
        Command::Simulate(a) => (
            commands::simulate(a)?,
            json(serde_json::to_value(a))?,
            a.output.out.clone(),
        ),
        Command::Region(a) => (
            commands::region(a)?,
            json(serde_json::to_value(a))?,
            a.output.out.clone(),
        ),
        Command::Blocks(a) => (
            commands::blocks(a)?,
            json(serde_json::to_value(a))?,
            a.output.out.clone(),
        ),
        Command::BitBudget(a) => (
            commands::bit_budget(a)?,
            json(serde_json::to_value(a))?,
            a.output.out.clone(),
        ),
        Command::Generate(a) => (
            commands::generate(a)?,
            json(serde_json::to_value(a))?,
            a.output.out.clone(),
        ),
        Command::Replay(_) => unreachable!("replay is dispatched separately"),
    })
}

fn write_outputs(
    cmd: &Command,
    args: Vec<String>,
    started: u64,
    result: CommandResult,
    config: serde_json::Value,
    out_dir: &Path,
) -> Result<RunManifest, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut outputs = Vec::new();
    for f in &result.files {
        let path = out_dir.join(&f.name);
        std::fs::write(&path, &f.bytes)
            .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
        outputs.push(digest(&f.name, &f.bytes));
    }
    let manifest = RunManifest {
        tool: "qcorr".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cmd.name().into(),
        args,
        config,
        seed: seed_of(cmd),
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
        warnings: result.warnings,
        inputs: result.inputs,
        outputs,
    };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::data(format!("manifest: {e}")))?;
    std::fs::write(out_dir.join(MANIFEST_FILE), text + "\n")?;
    Ok(manifest)
}

fn run_command(cmd: &Command, args: Vec<String>) -> Result<Outcome, CliError> {
    let started = now_ms();
    if let Command::Replay(r) = cmd {
        let original = read_manifest(&r.manifest)?;
        if original.args.len() < 2 {
            return Err(CliError::data("manifest has no command to replay"));
        }
        let mut argv = original.args.clone();
        argv.push("--out".into());
        argv.push(r.output.out.display().to_string());
        let cli = Cli::try_parse_from(&argv)
            .map_err(|e| CliError::data(format!("manifest arguments: {e}")))?;
        if matches!(cli.command, Command::Replay(_)) {
            return Err(CliError::data("a replay manifest cannot be replayed"));
        }
        let mut outcome = run_command(&cli.command, original.args.clone())?;
        let matched = outcome.manifest.outputs == original.outputs;
        for (new, old) in outcome.manifest.outputs.iter().zip(&original.outputs) {
            let state = if new == old { "identical" } else { "DIFFERS" };
            println!("{}: {state}", new.file);
        }
        if !matched {
            return Err(CliError::data("replayed outputs differ from the manifest"));
        }
        outcome.replay_matched = Some(true);
        return Ok(outcome);
    }
    let (result, config, out_dir) = execute(cmd)?;
    let manifest = write_outputs(cmd, args, started, result, config, &out_dir)?;
    Ok(Outcome {
        out_dir,
        manifest,
        replay_matched: None,
    })
}

/// Parses `argv` (program name first), runs the command and writes its
/// outputs.
pub fn run<I, T>(argv: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = config::expand(argv.into_iter().map(Into::into).collect())?;
    let cli = Cli::try_parse_from(&argv)?;
    let args = config::strip_placement(&argv);
    match cli.threads {
        Some(0) => Err(CliError::usage("--threads must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::usage(format!("--threads: {e}")))?;
            pool.install(|| run_command(&cli.command, args))
        }
        None => run_command(&cli.command, args),
    }
}
