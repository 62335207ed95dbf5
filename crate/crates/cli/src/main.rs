use std::process::ExitCode;

use qcorr_cli::CliError;

fn main() -> ExitCode {
    match qcorr_cli::run(std::env::args_os()) {
        Ok(outcome) => {
            for f in &outcome.manifest.outputs {
                println!("{}", outcome.out_dir.join(&f.file).display());
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
