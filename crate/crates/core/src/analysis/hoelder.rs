use std::f64::consts::E;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{par_map, FuzzyFif};
use crate::error::{FifError, Result};
use crate::ifs::{FuzzyDataSet, IfsSystem};

/// |δ − 1| below this is treated as the boundary case δ = 1.
pub const DELTA_EQ_TOL: f64 = 1e-12;

/// Default free exponent for the δ = 1 case.
pub const DEFAULT_TAU_EQ: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaCase {
    #[serde(rename = "delta_lt_1")]
    DeltaLt1,
    #[serde(rename = "delta_eq_1")]
    DeltaEq1,
    #[serde(rename = "delta_gt_1")]
    DeltaGt1,
}

impl DeltaCase {
    pub fn as_str(self) -> &'static str {
        match self {
            DeltaCase::DeltaLt1 => "delta_lt_1",
            DeltaCase::DeltaEq1 => "delta_eq_1",
            DeltaCase::DeltaGt1 => "delta_gt_1",
        }
    }
}

/// Certified Hölder data of a fuzzy FIF.
#[derive(Debug, Clone, Serialize)]
pub struct HoelderReport {
    /// Bound on every level endpoint of the data.
    pub a: f64,
    pub rho: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub s: f64,
    pub delta: f64,
    pub alpha: f64,
    pub big_m: f64,
    pub tau: f64,
    pub q: f64,
    pub k: f64,
    pub h_f: f64,
    pub case: DeltaCase,
}

/// `A = max_i max{|u_i⁻(0)|, |u_i⁺(0)|}`. Nesting puts every level inside the
/// level-0 interval, so this bounds all endpoints.
pub fn data_bound(data: &FuzzyDataSet) -> f64 {
    data.values()
        .iter()
        .map(|u| {
            let (lo, hi) = u.support();
            lo.abs().max(hi.abs())
        })
        .fold(0.0, f64::max)
}

pub fn hoelder_constants(sys: &IfsSystem, a: f64, rho: f64, tau_eq: f64) -> Result<HoelderReport> {
    let s = sys.max_scale();
    if !(s < 1.0) {
        let index = sys.scales().iter().position(|v| *v >= 1.0).unwrap_or(0) + 1;
        return Err(FifError::ScaleOutOfRange { index, value: s });
    }
    if !(rho > 0.0) || !(a >= 0.0) {
        return Err(FifError::InvalidParameters("need ρ > 0 and A ≥ 0".into()));
    }
    let span = sys.span();
    let c_min = sys.c_min();
    let c_max = sys.c_max();
    let alpha = (rho * c_max * span + (1.0 + s) * a) / (1.0 - s);
    let big_m = (2.0 * alpha / (c_min * span)).max(rho);
    let delta = s / c_min;
    let stretch = span.max(1.0);

    let (case, tau, q) = if (delta - 1.0).abs() <= DELTA_EQ_TOL {
        if !(tau_eq > 0.0 && tau_eq < 1.0) {
            return Err(FifError::InvalidTauChoice(tau_eq));
        }
        // 1 − 1/((1−τ)e·ln c_max) written with |ln c_max|
        let q = big_m * (1.0 + 1.0 / ((1.0 - tau_eq) * E * c_max.ln().abs())) * stretch;
        (DeltaCase::DeltaEq1, tau_eq, q)
    } else if delta < 1.0 {
        (DeltaCase::DeltaLt1, 1.0, big_m / (1.0 - delta))
    } else {
        let tau = delta.ln() / c_max.ln() + 1.0;
        if !(tau > 0.0) {
            return Err(FifError::NonPositiveExponent(tau));
        }
        (
            DeltaCase::DeltaGt1,
            tau,
            big_m * delta / (delta - 1.0) * stretch,
        )
    };
    let k = 2.0 * sys.intervals() as f64 * q;
    Ok(HoelderReport {
        a,
        rho,
        c_min,
        c_max,
        s,
        delta,
        alpha,
        big_m,
        tau,
        q,
        k,
        h_f: k,
        case,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstPair {
    pub x: f64,
    pub x_prime: f64,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HoelderVerdict {
    pub pairs: usize,
    pub violations: usize,
    /// Largest `d_∞(f(x), f(x'))/|x − x'|^τ` seen: an empirical lower bound
    /// on the best Hölder coefficient for this τ.
    pub max_ratio: f64,
    pub worst: Option<WorstPair>,
    pub passed: bool,
}

/// Check `d_∞(f(x), f(x')) ≤ H_f·|x − x'|^τ + 2·tol` on random pairs and on
/// dyadic-adjacent pairs around every knot.
pub fn verify_hoelder_bound(
    fif: &FuzzyFif,
    report: &HoelderReport,
    pairs: usize,
    seed: u64,
) -> Result<HoelderVerdict> {
    let sys = fif.system();
    let (x0, xn) = sys.domain();
    let span = xn - x0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(pairs);
    // adversarial: straddle each knot at dyadic distances
    for &knot in sys.knots() {
        for j in 4..24 {
            let h = span * 0.5f64.powi(j);
            let (a, b) = ((knot - h).max(x0), (knot + h).min(xn));
            if candidates.len() < pairs {
                candidates.push((a, b));
            }
        }
    }
    while candidates.len() < pairs {
        let x = rng.random_range(x0..=xn);
        let y = if rng.random_bool(0.5) {
            rng.random_range(x0..=xn)
        } else {
            // short pairs probe the small-scale regime
            let h = span * 0.5f64.powi(rng.random_range(3..20));
            (x + h).min(xn)
        };
        candidates.push((x, y));
    }

    let slack = 2.0 * fif.tol();
    let distances = par_map(candidates.len(), |k| -> Result<f64> {
        let (x, y) = candidates[k];
        fif.eval(x)?.d_infty(&fif.eval(y)?)
    });
    let mut violations = 0;
    let mut max_ratio = 0.0_f64;
    let mut worst: Option<WorstPair> = None;
    let mut worst_excess = f64::NEG_INFINITY;
    for ((x, y), distance) in candidates.iter().copied().zip(distances) {
        let distance = distance?;
        if x == y {
            continue;
        }
        let gap = (x - y).abs().powf(report.tau);
        let bound = report.h_f * gap + slack;
        max_ratio = max_ratio.max(distance / gap);
        if distance > bound {
            violations += 1;
        }
        if distance - bound > worst_excess {
            worst_excess = distance - bound;
            worst = Some(WorstPair {
                x,
                x_prime: y,
                distance,
                bound,
            });
        }
    }
    Ok(HoelderVerdict {
        pairs: candidates.len(),
        violations,
        max_ratio,
        worst,
        passed: violations == 0,
    })
}
