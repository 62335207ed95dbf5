//! Config files.
//!
//! A config file is flat TOML whose keys are flag names without the
//! leading dashes (`N = 1000`, `lags = "0..19"`, `a = [0, 0.4]`). Its
//! entries are spliced into the argument list right after the subcommand,
//! and since every flag keeps its last occurrence, explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

const SUBCOMMANDS: [&str; 7] = [
    "theory",
    "simulate",
    "region",
    "blocks",
    "bit-budget",
    "generate",
    "replay",
];
const NOT_ALLOWED: [&str; 2] = ["config", "threads"];

fn scalar(key: &str, v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        _ => Err(CliError::usage(format!(
            "config key '{key}': expected a string, number or list of those"
        ))),
    }
}

/// Flag tokens for the entries of a config file, in key order.
pub fn config_tokens(text: &str) -> Result<Vec<String>, CliError> {
    let table: toml::Table =
        toml::from_str(text).map_err(|e| CliError::usage(format!("config file: {e}")))?;
    let mut out = Vec::new();
    for (key, value) in &table {
        if NOT_ALLOWED.contains(&key.as_str()) {
            return Err(CliError::usage(format!(
                "config key '{key}' is only accepted on the command line"
            )));
        }
        let text = match value {
            toml::Value::Array(items) => items
                .iter()
                .map(|v| scalar(key, v))
                .collect::<Result<Vec<_>, _>>()?
                .join(","),
            v => scalar(key, v)?,
        };
        out.push(format!("--{key}"));
        out.push(text);
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

/// Splices the `--config` file, if any, into `args`.
pub fn expand(args: Vec<OsString>) -> Result<Vec<String>, CliError> {
    let args: Vec<String> = args
        .into_iter()
        .map(|a| {
            a.into_string()
                .map_err(|a| CliError::usage(format!("argument is not UTF-8: {a:?}")))
        })
        .collect::<Result<_, _>>()?;
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::usage(format!("cannot read config file {path}: {e}")))?;
    let tokens = config_tokens(&text)?;
    let Some(at) = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(args);
    };
    let mut out = args[..=at].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}

/// Drops arguments that change where output goes or how fast, but not
/// what it contains, and names the program `qcorr`. The result is what
/// manifests record.
pub fn strip_placement(args: &[String]) -> Vec<String> {
    let mut out = vec!["qcorr".to_string()];
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if ["--out", "--config", "--threads"].contains(&a.as_str()) {
            skip = true;
            continue;
        }
        if ["--out=", "--config=", "--threads="]
            .iter()
            .any(|p| a.starts_with(p))
        {
            continue;
        }
        out.push(a.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_from_flat_table() {
        let t =
            config_tokens("N = 1000\na = [0, 0.4, 0.7]\nscheme = \"ternary-half\"\nalpha = 10.0\n")
                .unwrap();
        assert_eq!(
            t,
            [
                "--N",
                "1000",
                "--a",
                "0,0.4,0.7",
                "--alpha",
                "10",
                "--scheme",
                "ternary-half"
            ]
        );
        assert!(config_tokens("[section]\nx = 1\n").is_err());
        assert!(config_tokens("threads = 2\n").is_err());
        assert!(config_tokens("N = ").is_err());
    }

    #[test]
    fn placement_flags_are_stripped() {
        let args: Vec<String> = [
            "/bin/qcorr",
            "--threads",
            "3",
            "simulate",
            "--out=x",
            "--N",
            "5",
            "--config",
            "c.toml",
        ]
        .map(String::from)
        .to_vec();
        assert_eq!(strip_placement(&args), ["qcorr", "simulate", "--N", "5"]);
    }
}
