mod args;
mod commands;
mod manifest;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;
use itergcd::Error;

fn report_error(kind: &str, message: &str, code: i32) -> ExitCode {
    let obj = json!({"error": {"kind": kind, "message": message, "exit_code": code}});
    eprintln!("{obj}");
    ExitCode::from(code as u8)
}

fn fail(e: &Error) -> ExitCode {
    report_error(e.kind(), &e.to_string(), e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report_error("usage", e.to_string().trim(), 2),
    };
    match commands::run(&cli.command) {
        Ok(out) => {
            let text = match &out.stdout {
                serde_json::Value::String(text) => text.clone(),
                v => serde_json::to_string_pretty(v).expect("json") + "\n",
            };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            match out.truncated {
                Some(t) => {
                    let message = format!("stopped after n = {}: {}", t.last_completed, t.reason);
                    report_error("truncated", &message, 4)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => fail(&e),
    }
}
