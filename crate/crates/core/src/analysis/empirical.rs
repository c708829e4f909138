use serde::Serialize;

use crate::engine::{par_map, FuzzyFif};
use crate::error::{FifError, Result};

/// Oscillation-based estimate of the Hölder exponent of a computed FIF.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalHoelder {
    pub scales: Vec<f64>,
    pub oscillations: Vec<f64>,
    pub fitted_exponent: f64,
    /// RMS of the log-log regression residuals.
    pub fit_residual: f64,
}

/// ω(h) = max over grid x of d_∞(f(x), f(x+h)) for h = L·2^{−j},
/// j = 3, …, 3 + num_scales − 1, followed by a least-squares fit of
/// log ω against log h.
pub fn estimate_exponent(fif: &FuzzyFif, num_scales: usize) -> Result<EmpiricalHoelder> {
    if num_scales < 4 {
        return Err(FifError::InvalidParameters(format!(
            "need at least 4 scales, got {num_scales}"
        )));
    }
    let xs = fif.xs();
    let (x0, xn) = (xs[0], xs[xs.len() - 1]);
    let span = xn - x0;
    let spacing = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let scales: Vec<f64> = (3..3 + num_scales as i32)
        .map(|j| span * 0.5f64.powi(j))
        .collect();
    let finest = scales[scales.len() - 1];
    if finest < spacing {
        return Err(FifError::InsufficientResolution {
            step: finest,
            spacing,
        });
    }

    let mut oscillations = Vec::with_capacity(scales.len());
    for &h in &scales {
        let usable = xs.partition_point(|x| *x + h <= xn);
        let per_point = par_map(usable, |k| -> Result<f64> {
            let shifted = fif.sample_at(xs[k] + h)?;
            fif.values()[k].d_infty(&shifted)
        });
        let mut omega = 0.0_f64;
        for v in per_point {
            omega = omega.max(v?);
        }
        oscillations.push(omega);
    }

    let points: Vec<(f64, f64)> = scales
        .iter()
        .zip(&oscillations)
        .filter(|(_, w)| **w > 0.0)
        .map(|(h, w)| (h.ln(), w.ln()))
        .collect();
    // a constant function has no oscillation at any scale; report it as Lipschitz
    let (fitted_exponent, fit_residual) = if points.len() < 2 {
        (1.0, 0.0)
    } else {
        least_squares(&points)
    };
    Ok(EmpiricalHoelder {
        scales,
        oscillations,
        fitted_exponent,
        fit_residual,
    })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    (slope, (sse / n).sqrt())
}
