use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::RunConfig;
use super::export::{ensure_dir, sha256_hex, write_bytes, write_table, TableEntry};
use crate::analysis::{
    data_bound, estimate_exponent, hoelder_constants, level_scalars, verify_hoelder_bound,
    EmpiricalHoelder, HoelderReport, HoelderVerdict, LevelGap, GAP_FLOOR,
};
use crate::engine::{iterate_rb, FuzzyFif};
use crate::error::Result;
use crate::ifs::{
    check_matching, lipschitz_estimates, rho_from_estimates, verify_theta_contraction,
    ContractionReport, MatchingReport, ThetaMetricParams,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub checks: Vec<Check>,
    pub matching: MatchingReport,
    pub contraction: ContractionReport,
    pub passed: bool,
}

/// Membership validation, map construction, the matching condition and a
/// Monte-Carlo θ-contraction check.
pub fn cmd_validate(config: &RunConfig) -> Result<ValidateReport> {
    let sys = config.build_system()?;
    let mut checks = vec![Check {
        name: "membership".into(),
        passed: true,
        detail: format!(
            "{} fuzzy values on {} levels",
            sys.knots().len(),
            config.levels + 1
        ),
    }];
    let ratios: Vec<String> = sys.maps().iter().map(|m| m.ratio().to_string()).collect();
    checks.push(Check {
        name: "maps".into(),
        passed: sys.maps().iter().all(|m| m.ratio() < 1.0),
        detail: format!("contraction ratios [{}]", ratios.join(", ")),
    });

    let matching = check_matching(&sys, config.matching_tol)?;
    let mut detail = format!(
        "worst residual {:e} (tol {:e})",
        matching.worst(),
        config.matching_tol
    );
    if config.force {
        detail.push_str("; force is set, iteration will proceed regardless");
    }
    checks.push(Check {
        name: "matching".into(),
        passed: matching.passed,
        detail,
    });

    let lip: Vec<f64> = lipschitz_estimates(&sys, config.lipschitz_samples)?
        .iter()
        .map(|l| l * config.rho_safety)
        .collect();
    let params = ThetaMetricParams::midpoint(&sys, lip)?;
    let contraction = verify_theta_contraction(&sys, &params, config.theta_trials, config.seed)?;
    checks.push(Check {
        name: "theta_contraction".into(),
        passed: contraction.passed,
        detail: format!(
            "theta {:e}, {} violations, worst ratio {:.6}",
            contraction.theta, contraction.violations, contraction.worst_ratio
        ),
    });

    let passed = checks.iter().all(|c| c.passed);
    Ok(ValidateReport {
        checks,
        matching,
        contraction,
        passed,
    })
}

impl ValidateReport {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{:<18} {}  {}", c.name, verdict(c.passed), c.detail);
        }
        let _ = writeln!(s, "{:<18} {}", "overall", verdict(self.passed));
        s
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Everything a run wrote, with checksums of every table.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub levels: usize,
    pub grid: usize,
    pub tol: f64,
    pub forced: bool,
    pub depth: usize,
    pub residual: f64,
    pub certified_error: f64,
    pub interpolation_error: f64,
    pub lambdas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<HoelderReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub level_gaps: Vec<LevelGap>,
    pub tables: Vec<TableEntry>,
}

#[derive(Debug, Clone)]
pub struct ExportBundle {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

pub const SAMPLES_FILE: &str = "fif_samples.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const HOLDER_FILE: &str = "holder.json";

pub fn levels_file(lambda: f64) -> String {
    format!("levels_{lambda}.csv")
}

fn sorted_lambdas(lambdas: &[f64]) -> Vec<f64> {
    let mut l = lambdas.to_vec();
    l.sort_by(f64::total_cmp);
    l.dedup();
    l
}

fn manifest_for(
    command: &str,
    config: &RunConfig,
    fif: &FuzzyFif,
    lambdas: Vec<f64>,
) -> Result<Manifest> {
    Ok(Manifest {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config_sha256: sha256_hex(config.to_json().as_bytes()),
        seed: config.seed,
        levels: config.levels,
        grid: config.grid,
        tol: config.tol,
        forced: config.force,
        depth: fif.depth(),
        residual: fif.residual(),
        certified_error: fif.certified_error(),
        interpolation_error: fif.interpolation_error()?,
        lambdas,
        constants: constants(config, fif).ok().map(|c| c.0),
        level_gaps: Vec::new(),
        tables: Vec::new(),
    })
}

fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    write_bytes(&dir.join(MANIFEST_FILE), text.as_bytes())
}

fn samples_table(dir: &Path, fif: &FuzzyFif, lambdas: &[f64]) -> Result<TableEntry> {
    let mut header = vec!["x".to_string()];
    let mut curves = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        header.push(format!("lower_{l}"));
        header.push(format!("upper_{l}"));
        curves.push(fif.extract_level(l)?);
    }
    let rows: Vec<Vec<f64>> = (0..fif.xs().len())
        .map(|k| {
            let mut row = vec![fif.xs()[k]];
            for c in &curves {
                row.push(c.lower[k]);
                row.push(c.upper[k]);
            }
            row
        })
        .collect();
    write_table(dir, SAMPLES_FILE, &header, &rows)
}

fn levels_tables(
    dir: &Path,
    config: &RunConfig,
    fif: &FuzzyFif,
    lambdas: &[f64],
) -> Result<(Vec<TableEntry>, Vec<LevelGap>)> {
    let header: Vec<String> = [
        "x",
        "fif_lower",
        "fif_upper",
        "scalar_lower",
        "scalar_upper",
        "gap",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let opts = config.scalar_options();
    let mut tables = Vec::with_capacity(lambdas.len());
    let mut gaps = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let curves = fif.extract_level(lambda)?;
        let scalars = level_scalars(fif, lambda, &opts)?;
        let mut rows = Vec::with_capacity(curves.xs.len());
        let (mut gap_lower, mut gap_upper) = (0.0_f64, 0.0_f64);
        for (k, &x) in curves.xs.iter().enumerate() {
            let sl = scalars.lower.eval(x)?;
            let su = scalars.upper.eval(x)?;
            let dl = (curves.lower[k] - sl).abs();
            let du = (curves.upper[k] - su).abs();
            gap_lower = gap_lower.max(dl);
            gap_upper = gap_upper.max(du);
            rows.push(vec![
                x,
                curves.lower[k],
                curves.upper[k],
                sl,
                su,
                dl.max(du),
            ]);
        }
        tables.push(write_table(dir, &levels_file(lambda), &header, &rows)?);
        let tolerance = fif.certified_error()
            + scalars
                .lower
                .certified_error()
                .max(scalars.upper.certified_error())
            + GAP_FLOOR;
        gaps.push(LevelGap {
            lambda,
            gap_lower,
            gap_upper,
            tolerance,
            passed: gap_lower.max(gap_upper) <= tolerance,
        });
    }
    Ok((tables, gaps))
}

/// Iterate to the fixed point and write `fif_samples.csv` plus the manifest.
pub fn cmd_build(config: &RunConfig, out: &Path) -> Result<ExportBundle> {
    let fif = iterate_rb(&config.build_system()?, &config.rb_options())?;
    ensure_dir(out)?;
    let lambdas = sorted_lambdas(&config.lambdas);
    let mut manifest = manifest_for("build", config, &fif, lambdas.clone())?;
    manifest.tables.push(samples_table(out, &fif, &lambdas)?);
    write_manifest(out, &manifest)?;
    Ok(ExportBundle {
        dir: out.to_path_buf(),
        manifest,
    })
}

/// Per-λ tables of the fuzzy FIF slices next to the independently built
/// scalar FIFs and their pointwise gap. An empty `lambdas` writes only the
/// manifest.
pub fn cmd_levels(config: &RunConfig, lambdas: &[f64], out: &Path) -> Result<ExportBundle> {
    let fif = iterate_rb(&config.build_system()?, &config.rb_options())?;
    ensure_dir(out)?;
    let lambdas = sorted_lambdas(lambdas);
    let mut manifest = manifest_for("levels", config, &fif, lambdas.clone())?;
    let (tables, gaps) = levels_tables(out, config, &fif, &lambdas)?;
    manifest.tables = tables;
    manifest.level_gaps = gaps;
    write_manifest(out, &manifest)?;
    Ok(ExportBundle {
        dir: out.to_path_buf(),
        manifest,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderOutput {
    pub lipschitz: Vec<f64>,
    pub constants: HoelderReport,
    pub verification: HoelderVerdict,
    pub empirical: EmpiricalHoelder,
}

fn constants(config: &RunConfig, fif: &FuzzyFif) -> Result<(HoelderReport, Vec<f64>)> {
    let sys = fif.system();
    let lipschitz = lipschitz_estimates(sys, config.lipschitz_samples)?;
    let rho = rho_from_estimates(&lipschitz, config.rho_safety);
    let report = hoelder_constants(sys, data_bound(sys.data()), rho, config.tau_eq)?;
    Ok((report, lipschitz))
}

fn holder_for(config: &RunConfig, fif: &FuzzyFif) -> Result<HolderOutput> {
    let (constants, lipschitz) = constants(config, fif)?;
    let verification = verify_hoelder_bound(fif, &constants, config.hoelder_pairs, config.seed)?;
    let empirical = estimate_exponent(fif, config.exponent_scales)?;
    Ok(HolderOutput {
        lipschitz,
        constants,
        verification,
        empirical,
    })
}

/// Theoretical constants, their Monte-Carlo check and the fitted exponent.
pub fn cmd_holder(config: &RunConfig) -> Result<HolderOutput> {
    let fif = iterate_rb(&config.build_system()?, &config.rb_options())?;
    holder_for(config, &fif)
}

impl HolderOutput {
    pub fn summary(&self) -> String {
        let c = &self.constants;
        let v = &self.verification;
        let mut s = String::new();
        let _ = writeln!(s, "case        {}", c.case.as_str());
        let _ = writeln!(s, "delta       {}", c.delta);
        let _ = writeln!(s, "tau         {}", c.tau);
        let _ = writeln!(s, "A, rho      {}, {}", c.a, c.rho);
        let _ = writeln!(s, "alpha, M    {}, {}", c.alpha, c.big_m);
        let _ = writeln!(s, "Q, K = H_f  {}, {}", c.q, c.h_f);
        let _ = writeln!(
            s,
            "fitted exp  {} (rms {})",
            self.empirical.fitted_exponent, self.empirical.fit_residual
        );
        let _ = write!(
            s,
            "bound check {} over {} pairs, {} violations, max ratio {}",
            verdict(v.passed),
            v.pairs,
            v.violations,
            v.max_ratio
        );
        if let Some(w) = &v.worst {
            let _ = write!(
                s,
                "; tightest pair ({}, {}) d = {} vs {}",
                w.x, w.x_prime, w.distance, w.bound
            );
        }
        s.push('\n');
        s
    }
}

/// Samples, level tables and the Hölder report in one directory under a
/// single manifest.
pub fn cmd_export(config: &RunConfig, out: &Path) -> Result<ExportBundle> {
    let fif = iterate_rb(&config.build_system()?, &config.rb_options())?;
    ensure_dir(out)?;
    let lambdas = sorted_lambdas(&config.lambdas);
    let mut manifest = manifest_for("export", config, &fif, lambdas.clone())?;
    manifest.tables.push(samples_table(out, &fif, &lambdas)?);
    let (tables, gaps) = levels_tables(out, config, &fif, &lambdas)?;
    manifest.tables.extend(tables);
    manifest.level_gaps = gaps;
    let holder = holder_for(config, &fif)?;
    let mut text = serde_json::to_string_pretty(&holder).expect("report serializes");
    text.push('\n');
    write_bytes(&out.join(HOLDER_FILE), text.as_bytes())?;
    manifest.tables.push(TableEntry {
        file: HOLDER_FILE.into(),
        rows: 0,
        sha256: sha256_hex(text.as_bytes()),
    });
    write_manifest(out, &manifest)?;
    Ok(ExportBundle {
        dir: out.to_path_buf(),
        manifest,
    })
}
