//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every exported function takes and returns JSON text. The `*_json`
//! functions hold the logic and run natively too.

use fuzzy_fif::analysis::{data_bound, hoelder_constants};
use fuzzy_fif::engine::iterate_rb;
use fuzzy_fif::ifs::{check_matching, lipschitz_estimates, rho_from_estimates};
use fuzzy_fif::io::RunConfig;
use fuzzy_fif::FifError;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const PRESETS: [(&str, &str); 3] = [
    (
        "compatible",
        include_str!("../../core/fixtures/compatible.json"),
    ),
    (
        "example1",
        include_str!("../../core/fixtures/example1.json"),
    ),
    ("crisp", include_str!("../../core/fixtures/crisp.json")),
];

fn fail(e: FifError) -> String {
    json!({ "error": e.code(), "message": e.to_string() }).to_string()
}

fn parse(config: &str) -> Result<RunConfig, String> {
    let c = RunConfig::from_json(config).map_err(fail)?;
    c.check_schema().map_err(fail)?;
    Ok(c)
}

pub fn preset_json(name: &str) -> Result<String, String> {
    PRESETS
        .iter()
        .find(|p| p.0 == name)
        .map(|p| p.1.to_string())
        .ok_or_else(|| format!("unknown preset {name:?}"))
}

/// λ-cut curves of the FIF for `config`, plus the data's λ-cuts at the knots.
pub fn level_curves_json(
    config: &str,
    lambda: f64,
    grid: usize,
    force: bool,
) -> Result<String, String> {
    let mut c = parse(config)?;
    c.grid = grid;
    c.force |= force;
    c.check_schema().map_err(fail)?;
    let sys = c.build_system().map_err(fail)?;
    let matching = check_matching(&sys, c.matching_tol).map_err(fail)?;
    let fif = iterate_rb(&sys, &c.rb_options()).map_err(fail)?;
    let curves = fif.extract_level(lambda).map_err(fail)?;
    let knots: Vec<Value> = sys
        .data()
        .values()
        .iter()
        .zip(sys.knots())
        .map(|(u, x)| {
            let (lo, hi) = u.at_level(lambda).unwrap_or((f64::NAN, f64::NAN));
            json!([x, lo, hi])
        })
        .collect();
    Ok(json!({
        "lambda": lambda,
        "xs": curves.xs,
        "lower": curves.lower,
        "upper": curves.upper,
        "knots": knots,
        "depth": fif.depth(),
        "residual": fif.residual(),
        "matching_residual": matching.worst(),
        "matching_passed": matching.passed,
    })
    .to_string())
}

/// Membership functions of the data values, sampled on their supports.
pub fn memberships_json(config: &str, samples: usize) -> Result<String, String> {
    let c = parse(config)?;
    let samples = samples.max(2);
    let mut out = Vec::with_capacity(c.values.len());
    for spec in &c.values {
        let (lo, hi) = spec.support().map_err(fail)?;
        let pad = 0.05 * (hi - lo).max(1e-3);
        let (a, b) = (lo - pad, hi + pad);
        let ys: Vec<f64> = (0..samples)
            .map(|k| a + (b - a) * k as f64 / (samples - 1) as f64)
            .collect();
        // the endpoints of the support and the core are added so peaks and jumps are drawn
        let mut pts: Vec<(f64, f64)> = ys.iter().map(|&y| (y, spec.membership(y))).collect();
        if let Ok((clo, chi)) = spec.level_set(1.0) {
            pts.push((clo, 1.0));
            pts.push((chi, 1.0));
        }
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        out.push(json!({
            "y": pts.iter().map(|p| p.0).collect::<Vec<_>>(),
            "mu": pts.iter().map(|p| p.1).collect::<Vec<_>>(),
        }));
    }
    Ok(Value::Array(out).to_string())
}

/// Theoretical Hölder constants for `config`.
pub fn hoelder_json(config: &str) -> Result<String, String> {
    let c = parse(config)?;
    let sys = c.build_system().map_err(fail)?;
    let lip = lipschitz_estimates(&sys, c.lipschitz_samples).map_err(fail)?;
    let rho = rho_from_estimates(&lip, c.rho_safety);
    let report = hoelder_constants(&sys, data_bound(sys.data()), rho, c.tau_eq).map_err(fail)?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn preset(name: &str) -> Result<String, JsValue> {
    preset_json(name).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn level_curves(
    config: &str,
    lambda: f64,
    grid: usize,
    force: bool,
) -> Result<String, JsValue> {
    level_curves_json(config, lambda, grid, force).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn memberships(config: &str, samples: usize) -> Result<String, JsValue> {
    memberships_json(config, samples).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn hoelder(config: &str) -> Result<String, JsValue> {
    hoelder_json(config).map_err(JsValue::from)
}
