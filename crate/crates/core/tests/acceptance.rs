//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any fails.

mod common;

use std::time::Instant;

use fuzzy_fif::analysis::{
    data_bound, estimate_exponent, hoelder_constants, theorem4_harness, verify_hoelder_bound,
    DeltaCase, GAP_FLOOR,
};
use fuzzy_fif::engine::{iterate_rb, scalar_fif, FuzzyFif};
use fuzzy_fif::fuzzy::{FuzzyNumber, LevelGrid};
use fuzzy_fif::ifs::{
    lipschitz_estimates, rho_from_estimates, verify_theta_contraction, IfsSystem,
    ThetaMetricParams, LIPSCHITZ_SAFETY,
};
use fuzzy_fif::io::{cmd_build, RunConfig, SAMPLES_FILE};
use fuzzy_fif::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// log_4(5) − 1 to 30 digits.
#[allow(clippy::excessive_precision)]
const TAU_ORACLE: f64 = 0.160_964_047_443_681_173_935_159_714_74;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

/// Example 1 with the matching gate overridden: the data do not satisfy the
/// endpoint conditions, so the engine would otherwise refuse to iterate.
fn example1(grid: usize) -> RunConfig {
    let mut c = common::fixture("example1.json");
    c.grid = grid;
    c.force = true;
    c
}

fn fif_for(config: &RunConfig) -> Result<(IfsSystem, FuzzyFif)> {
    let sys = config.build_system()?;
    let fif = iterate_rb(&sys, &config.rb_options())?;
    Ok((sys, fif))
}

fn interpolation() -> Result<Outcome> {
    let config = example1(1024);
    let start = Instant::now();
    let (sys, fif) = fif_for(&config)?;
    let err = fif.interpolation_error()?;
    let secs = start.elapsed().as_secs_f64();
    let matching = fuzzy_fif::ifs::check_matching(&sys, config.matching_tol)?;
    outcome(
        err <= 1e-7 && secs <= 30.0,
        format!(
            "max d_inf(f(x_i), u_i) = {err:e} (target 1e-7), {secs:.2} s, depth {}; matching residual {:e}",
            fif.depth(),
            matching.worst()
        ),
    )
}

fn contraction_rate() -> Result<Outcome> {
    let (sys, fif) = fif_for(&example1(1024))?;
    let s = sys.max_scale();
    let worst = fif
        .history()
        .windows(2)
        .skip(1)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);
    outcome(
        worst <= s + 1e-6,
        format!(
            "worst displacement ratio {worst:.9} over {} sweeps (s = {s})",
            fif.depth()
        ),
    )
}

fn theorem4() -> Result<Outcome> {
    let lambdas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let gap_at = |n: usize| -> Result<f64> {
        let config = example1(n);
        let (_, fif) = fif_for(&config)?;
        Ok(theorem4_harness(&fif, &lambdas, &config.scalar_options())?.max_gap)
    };
    let coarse = gap_at(4096)?;
    let fine = gap_at(8192)?;
    // agreement at rounding level cannot shrink further
    let shrinks = fine * 1.5 <= coarse || fine.max(coarse) <= GAP_FLOOR;
    outcome(
        coarse <= 1e-6 && shrinks,
        format!("gap {coarse:e} at N = 4096, {fine:e} at N = 8192 (matching gate overridden)"),
    )
}

fn self_affinity() -> Result<Outcome> {
    let (_, fif) = fif_for(&example1(1024))?;
    let r = fif.self_affinity_residual(512)?;
    outcome(r <= 1e-6, format!("residual {r:e} (target 1e-6)"))
}

fn hoelder() -> Result<Outcome> {
    let config = example1(1024);
    let (sys, fif) = fif_for(&config)?;
    let lip = lipschitz_estimates(&sys, config.lipschitz_samples)?;
    let rho = rho_from_estimates(&lip, LIPSCHITZ_SAFETY);
    let report = hoelder_constants(&sys, data_bound(sys.data()), rho, config.tau_eq)?;
    let tau_ok = report.case == DeltaCase::DeltaGt1 && (report.tau - TAU_ORACLE).abs() <= 1e-12;
    let verdict = verify_hoelder_bound(&fif, &report, 10_000, config.seed)?;
    let fit = estimate_exponent(&fif, config.exponent_scales)?;
    let fit_ok = fit.fitted_exponent >= report.tau - 0.05;
    outcome(
        tau_ok && verdict.violations == 0 && fit_ok,
        format!(
            "case {}, tau {:.15} (oracle {TAU_ORACLE:.15}); {} violations / {} pairs, H_f {:e}; fitted exponent {:.4}",
            report.case.as_str(), report.tau, verdict.violations, verdict.pairs, report.h_f, fit.fitted_exponent
        ),
    )
}

fn theta_contraction() -> Result<Outcome> {
    let config = example1(1024);
    let sys = config.build_system()?;
    let lip = lipschitz_estimates(&sys, config.lipschitz_samples)?
        .iter()
        .map(|l| l * LIPSCHITZ_SAFETY)
        .collect();
    let params = ThetaMetricParams::midpoint(&sys, lip)?;
    let r = verify_theta_contraction(&sys, &params, 1000, config.seed)?;
    outcome(
        r.violations == 0,
        format!(
            "theta {:e}, {} violations over {} pairs per map, worst ratio {:.6}",
            r.theta, r.violations, r.trials_per_map, r.worst_ratio
        ),
    )
}

fn crisp_degeneration() -> Result<Outcome> {
    let config = common::fixture("crisp.json");
    let (sys, fif) = fif_for(&config)?;
    let opts = config.scalar_options();
    let y: Vec<f64> = sys.data().values().iter().map(|u| u.core().0).collect();
    let scalar = scalar_fif(
        sys.knots(),
        &y,
        sys.scales(),
        |i, x| sys.q(i, x).unwrap().core().0,
        &opts,
    )?;
    let mut worst = 0.0_f64;
    for &lambda in sys.grid().levels() {
        let c = fif.extract_level(lambda)?;
        for (k, &x) in c.xs.iter().enumerate() {
            let v = scalar.eval(x)?;
            worst = worst
                .max((c.lower[k] - v).abs())
                .max((c.upper[k] - v).abs());
        }
    }
    outcome(
        worst <= 1e-8,
        format!(
            "max |column − scalar| = {worst:e} over {} levels",
            sys.grid().len()
        ),
    )
}

fn random_number(grid: &std::sync::Arc<LevelGrid>, rng: &mut ChaCha8Rng) -> FuzzyNumber {
    let m = grid.len();
    let mut lo = vec![0.0; m];
    let mut hi = vec![0.0; m];
    let mid = rng.random_range(-5.0..5.0);
    lo[m - 1] = mid - rng.random_range(0.0..0.5);
    hi[m - 1] = mid + rng.random_range(0.0..0.5);
    for k in (0..m - 1).rev() {
        lo[k] = lo[k + 1] - rng.random_range(0.0..0.2);
        hi[k] = hi[k + 1] + rng.random_range(0.0..0.2);
    }
    FuzzyNumber::new(grid.clone(), lo, hi).unwrap()
}

fn invariants() -> Result<Outcome> {
    let grid = LevelGrid::uniform(20)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pool: Vec<FuzzyNumber> = (0..64).map(|_| random_number(&grid, &mut rng)).collect();
    let mut broken = 0;
    for step in 0..100_000 {
        let a = &pool[rng.random_range(0..pool.len())];
        let b = &pool[rng.random_range(0..pool.len())];
        let r = match rng.random_range(0..4) {
            0 => a.add(b)?,
            1 => a.scale(rng.random_range(-2.0..2.0)),
            2 => a.g_difference(b)?,
            _ => FuzzyNumber::combine(
                rng.random_range(-1.0..1.0),
                a,
                rng.random_range(-1.0..1.0),
                b,
            )?,
        };
        if !r.is_nested() {
            broken += 1;
        }
        // keep magnitudes bounded while feeding results back in
        let r = if r.support().1 - r.support().0 > 50.0 || r.core().0.abs() > 50.0 {
            random_number(&grid, &mut rng)
        } else {
            r
        };
        let slot = step % pool.len();
        pool[slot] = r;
    }
    let mut axiom_failures = 0;
    for _ in 0..10_000 {
        let u = random_number(&grid, &mut rng);
        let v = random_number(&grid, &mut rng);
        let w = random_number(&grid, &mut rng);
        let (uv, vu, vw, uw) = (
            u.d_infty(&v)?,
            v.d_infty(&u)?,
            v.d_infty(&w)?,
            u.d_infty(&w)?,
        );
        let ok = u.d_infty(&u)? == 0.0
            && uv >= 0.0
            && uv == vu
            && uw <= uv + vw + 1e-12
            && (uv > 0.0) == (u != v);
        if !ok {
            axiom_failures += 1;
        }
    }
    let zero = FuzzyNumber::crisp(grid.clone(), 0.0);
    let self_diff_ok = pool
        .iter()
        .all(|u| u.g_difference(u).map(|d| d == zero).unwrap_or(false));
    outcome(
        broken == 0 && axiom_failures == 0 && self_diff_ok,
        format!(
            "{broken} nesting breaks / 100000 ops, {axiom_failures} metric failures / 10000 triples, u ∨g u = 0: {self_diff_ok}"
        ),
    )
}

fn determinism() -> Result<Outcome> {
    let config = example1(1024);
    let a = tempfile::tempdir().expect("tempdir");
    let b = tempfile::tempdir().expect("tempdir");
    let ma = cmd_build(&config, a.path())?.manifest;
    let mb = cmd_build(&config, b.path())?.manifest;
    let bytes_a = std::fs::read(a.path().join(SAMPLES_FILE)).expect("table a");
    let bytes_b = std::fs::read(b.path().join(SAMPLES_FILE)).expect("table b");
    outcome(
        !bytes_a.is_empty() && bytes_a == bytes_b && ma.tables == mb.tables,
        format!("{} bytes, sha256 {}", bytes_a.len(), ma.tables[0].sha256),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("interpolation", interpolation),
        ("contraction rate", contraction_rate),
        ("level equivalence", theorem4),
        ("self-affinity", self_affinity),
        ("hoelder constants", hoelder),
        ("theta contraction", theta_contraction),
        ("crisp degeneration", crisp_degeneration),
        ("invariant suite", invariants),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| Outcome {
            passed: false,
            detail: format!("error {}: {e}", e.code()),
        });
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {} {:<20} {}  {}",
            k + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
