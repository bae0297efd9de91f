use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use monadcert::exactla::DEFAULT_PRIME;
use monadcert::pipeline::{
    appendix_b_sweep, random_monad_survey, run_scenario, scenario_tables, PipelineError, Report, ScenarioConfig,
    DEFAULT_MAX_RETRIES, DEFAULT_SAMPLES,
};

#[derive(Parser)]
#[command(name = "monadcert", version, about = "Exact F_p certificates for monads and bundles on P3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct FieldArgs {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Build the bundle for one genus and check every claimed dimension.
    Verify {
        #[arg(long)]
        genus: u32,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Points sampled by the pointwise checks.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
        max_retries: u32,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Sample random monads of the genus's shape.
    Survey {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 10)]
        trials: u32,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Random three-line, four-point configurations.
    AppendixB {
        #[arg(long, default_value_t = 100)]
        configs: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Cohomology tables of the sheaves built for a genus.
    Table {
        #[arg(long)]
        genus: u32,
        /// Twists as LMIN..LMAX, for example -3..4.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: (i64, i64),
        #[command(flatten)]
        field: FieldArgs,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected LMIN..LMAX, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("bad LMIN `{a}`: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("bad LMAX `{b}`: {e}"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok((a, b))
}

fn config(genus: u32, field: &FieldArgs) -> ScenarioConfig {
    ScenarioConfig { genus, prime: field.prime, seed: field.seed, ..Default::default() }
}

fn finish(report: &Report, json: Option<&PathBuf>) -> ExitCode {
    print!("{}", report.summary());
    if let Some(path) = json {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let failed = report.failures().count();
    if failed == 0 {
        println!("all {} certificates passed", report.certificates.len());
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} certificates failed", report.certificates.len());
        ExitCode::from(1)
    }
}

fn error(e: PipelineError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_config() { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { genus, field, trials, json, samples, max_retries, timings } => {
            let cfg = ScenarioConfig { trials, samples, max_retries, timings, ..config(genus, &field) };
            match run_scenario(&cfg) {
                Ok(r) => finish(&r, json.as_ref()),
                Err(e) => error(e),
            }
        }
        Command::Survey { genus, trials, field, json } => {
            let cfg = ScenarioConfig { trials, ..config(genus, &field) };
            match random_monad_survey(&cfg) {
                Ok(r) => finish(&r, json.as_ref()),
                Err(e) => error(e),
            }
        }
        Command::AppendixB { configs, field, json } => {
            let cfg = config(11, &field);
            match appendix_b_sweep(&cfg, configs) {
                Ok((r, s)) => {
                    println!(
                        "admissible {}, discarded {}, lemma {}/{}, corollary {}/{}",
                        s.admissible, s.discarded, s.lemma_pass, s.admissible, s.corollary_pass, s.admissible
                    );
                    finish(&r, json.as_ref())
                }
                Err(e) => error(e),
            }
        }
        Command::Table { genus, window, field } => match scenario_tables(&config(genus, &field), window.0, window.1) {
            Ok(tables) => {
                for t in tables {
                    println!("{t}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => error(e),
        },
    }
}
