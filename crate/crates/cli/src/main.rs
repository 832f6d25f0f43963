use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gamma0_cli::commands::{report_text, CliResult};
use gamma0_cli::{cmd_batch, cmd_gamma0, cmd_order, cmd_verify, parse_document, render_svg, Algorithm, CliError};
use gamma0_core::Seed;

#[derive(Parser)]
#[command(name = "farey", version, about = "Farey sequences and generators for Γ0(N)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Cllt,
    Dklt,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedArg {
    Unit,
    Fr,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Cllt => Algorithm::Cllt,
            AlgorithmArg::Dklt => Algorithm::Dklt,
        }
    }
}

impl From<SeedArg> for Seed {
    fn from(s: SeedArg) -> Self {
        match s {
            SeedArg::Unit => Seed::Unit,
            SeedArg::Fr => Seed::OrderR,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// The classical Farey sequence of order r.
    Order {
        #[arg(short = 'r', long = "order")]
        r: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A complete Farey sequence for Γ0(N) with its side pairings.
    Gamma0 {
        #[arg(short = 'N', long = "level")]
        level: i64,
        #[arg(long, value_enum, default_value = "dklt")]
        algorithm: AlgorithmArg,
        #[arg(long, value_enum, default_value = "unit")]
        seed: SeedArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks a sequence document; exits 1 if any check fails.
    Verify {
        /// Document path, or `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draws the polygon of a sequence document as SVG.
    Render {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constructs and verifies several levels.
    Batch {
        /// Comma-separated levels.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<i64>,
        #[arg(long, value_enum, default_value = "dklt")]
        algorithm: AlgorithmArg,
        #[arg(long, value_enum, default_value = "unit")]
        seed: SeedArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_input(input: &str) -> CliResult<String> {
    if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(input)?)
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Order { r, format, out } => {
            let doc = cmd_order(r)?;
            let text = match format {
                Format::Json => doc.to_json(),
                Format::Text => doc.brace_notation() + "\n",
            };
            emit(out.as_ref(), &text)?;
        }
        Command::Gamma0 { level, algorithm, seed, format, out } => {
            let doc = cmd_gamma0(level, algorithm.into(), seed.into())?;
            let text = match format {
                Format::Json => doc.to_json(),
                Format::Text => doc.brace_notation() + "\n",
            };
            emit(out.as_ref(), &text)?;
        }
        Command::Verify { input, format, out } => {
            let doc = parse_document(&read_input(&input)?)?;
            let report = cmd_verify(&doc)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Text => report_text(&report),
            };
            emit(out.as_ref(), &text)?;
            return Ok(if report.passed() { 0 } else { 1 });
        }
        Command::Render { input, out } => {
            let doc = parse_document(&read_input(&input)?)?;
            if doc.entries.is_empty() {
                return Err(CliError::Usage("document has no entries to render".into()));
            }
            emit(out.as_ref(), &render_svg(&doc))?;
        }
        Command::Batch { levels, algorithm, seed, jobs, format, out } => {
            let results = cmd_batch(&levels, algorithm.into(), seed.into(), jobs);
            let text = match format {
                Format::Json => json(&results),
                Format::Text => results
                    .iter()
                    .map(|r| {
                        format!(
                            "{} N={} members={} max={}{}\n",
                            if r.passed { "PASS" } else { "FAIL" },
                            r.level,
                            r.members,
                            r.max_denominator,
                            r.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
                        )
                    })
                    .collect(),
            };
            emit(out.as_ref(), &text)?;
            return Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("farey: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
