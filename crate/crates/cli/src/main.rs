use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fuzzy_fif::io::{
    cmd_build, cmd_export, cmd_holder, cmd_levels, cmd_validate, RunConfig, HOLDER_FILE,
};
use fuzzy_fif::FifError;

#[derive(Parser)]
#[command(
    name = "fuzzy-fif",
    version,
    about = "Fuzzy-valued fractal interpolation"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check memberships, maps, the matching condition and contractivity.
    Validate(Common),
    /// Iterate to the fixed point and write fif_samples.csv.
    Build(Common),
    /// Write per-level fuzzy and scalar curves with their gap.
    Levels(Common),
    /// Report Hölder constants and check them on random pairs.
    Holder(Common),
    /// Samples, level tables and the Hölder report in one directory.
    Export(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (defaults to the config's output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated levels, e.g. 0,0.5,1. An empty string selects none.
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Evaluation grid cells N.
    #[arg(long)]
    grid: Option<usize>,
    /// Level count M.
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Iterate even if the matching condition fails.
    #[arg(long)]
    force: bool,
}

impl Common {
    fn load(&self) -> Result<RunConfig, FifError> {
        let mut c = RunConfig::load(&self.config)?;
        if let Some(v) = self.tol {
            c.tol = v;
        }
        if let Some(v) = self.grid {
            c.grid = v;
        }
        if let Some(v) = self.levels {
            c.levels = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.max_depth {
            c.max_depth = v;
        }
        if let Some(list) = &self.lambdas {
            c.lambdas = parse_lambdas(list)?;
        }
        c.force |= self.force;
        c.check_schema()?;
        Ok(c)
    }

    fn out_dir(&self, config: &RunConfig) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| config.output_dir.clone())
    }
}

fn parse_lambdas(list: &str) -> Result<Vec<f64>, FifError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| FifError::ConfigParse(format!("bad lambda {s:?}")))
        })
        .collect()
}

/// A check ran but did not pass.
struct Failed(&'static str, String);

enum Failure {
    Fif(FifError),
    Check(Failed),
}

impl From<FifError> for Failure {
    fn from(e: FifError) -> Self {
        Failure::Fif(e)
    }
}

fn run(verb: Verb) -> Result<(), Failure> {
    match verb {
        Verb::Validate(a) => {
            let config = a.load()?;
            let report = cmd_validate(&config)?;
            print!("{}", report.summary());
            if !report.passed {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(Failure::Check(Failed(
                    "ValidationFailed",
                    format!("failed checks: {}", failed.join(", ")),
                )));
            }
        }
        Verb::Build(a) => {
            let config = a.load()?;
            let b = cmd_build(&config, &a.out_dir(&config))?;
            println!(
                "depth {} residual {:e} certified error {:e}",
                b.manifest.depth, b.manifest.residual, b.manifest.certified_error
            );
            for t in &b.manifest.tables {
                println!("wrote {} ({} rows)", b.dir.join(&t.file).display(), t.rows);
            }
        }
        Verb::Levels(a) => {
            let config = a.load()?;
            let lambdas = config.lambdas.clone();
            let b = cmd_levels(&config, &lambdas, &a.out_dir(&config))?;
            for g in &b.manifest.level_gaps {
                println!(
                    "lambda {:<6} gap {:e}  tolerance {:e}  {}",
                    g.lambda,
                    g.gap(),
                    g.tolerance,
                    if g.passed { "PASS" } else { "FAIL" }
                );
            }
            println!(
                "wrote {} tables to {}",
                b.manifest.tables.len(),
                b.dir.display()
            );
        }
        Verb::Holder(a) => {
            let config = a.load()?;
            let out = cmd_holder(&config)?;
            print!("{}", out.summary());
            let dir = a.out_dir(&config);
            let path = dir.join(HOLDER_FILE);
            std::fs::create_dir_all(&dir)
                .and_then(|_| {
                    std::fs::write(
                        &path,
                        serde_json::to_string_pretty(&out).expect("report serializes") + "\n",
                    )
                })
                .map_err(|source| FifError::Io { path, source })?;
            if !out.verification.passed {
                return Err(Failure::Check(Failed(
                    "HoelderBoundViolated",
                    format!(
                        "{} of {} pairs exceed the bound",
                        out.verification.violations, out.verification.pairs
                    ),
                )));
            }
        }
        Verb::Export(a) => {
            let config = a.load()?;
            let b = cmd_export(&config, &a.out_dir(&config))?;
            for t in &b.manifest.tables {
                println!("{}  {}", t.sha256, t.file);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, message, status) = match failure {
                Failure::Fif(e) => (e.code(), e.to_string(), e.exit_code()),
                Failure::Check(Failed(code, message)) => (code, message, 2),
            };
            eprintln!(
                "{}",
                serde_json::json!({ "error": code, "message": message })
            );
            ExitCode::from(status as u8)
        }
    }
}
