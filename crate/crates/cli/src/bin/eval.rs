//! `alttextify-eval`: tally error annotations and summarize caption lengths.

use std::path::PathBuf;
use std::process::ExitCode;

use alttext_core::eval::{length_summary, parse_annotations, summarize_annotations};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "alttextify-eval",
    version,
    about = "Evaluation helpers for generated alt text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count errors per method from a JSON array of annotation records.
    Summarize { annotations: PathBuf },
    /// Token-length statistics for captions, one caption per line.
    Lengths { captions: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<String, String> {
    match cli.command {
        Command::Summarize { annotations } => {
            let records =
                parse_annotations(&read(&annotations)?).map_err(|e| format!("{}: {e}", annotations.display()))?;
            let summary = summarize_annotations(&records).map_err(|e| e.to_string())?;
            if cli.json {
                serde_json::to_string_pretty(&summary).map_err(|e| e.to_string())
            } else {
                Ok(summary.to_markdown())
            }
        }
        Command::Lengths { captions } => {
            let text = read(&captions)?;
            let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
            let s = length_summary(&lines).map_err(|e| e.to_string())?;
            if cli.json {
                return serde_json::to_string_pretty(&s).map_err(|e| e.to_string());
            }
            let mut out = format!(
                "captions: {}\nmean: {:.1}\nmedian: {}\nmin: {}\nmax: {}\nhistogram:",
                s.count, s.mean, s.median, s.min, s.max
            );
            for (start, count) in &s.histogram {
                out.push_str(&format!("\n  {start:>4}: {count}"));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
