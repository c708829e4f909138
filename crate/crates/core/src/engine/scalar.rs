use serde::Serialize;

use super::grid::evaluation_grid;
use super::par_map;
use crate::error::{FifError, Result};

#[derive(Debug, Clone)]
pub struct ScalarOptions {
    pub tol: f64,
    pub max_depth: usize,
    pub grid_points: usize,
    pub matching_tol: f64,
    pub enforce_matching: bool,
}

impl Default for ScalarOptions {
    fn default() -> Self {
        ScalarOptions {
            tol: 1e-8,
            max_depth: 1000,
            grid_points: 1024,
            matching_tol: 1e-9,
            enforce_matching: true,
        }
    }
}

/// Classical real-valued FIF `f_y(x) = s_i·f_y(l_i⁻¹(x)) + q_i(x)`.
///
/// Shares no arithmetic with the fuzzy engine: it works on plain `f64`
/// samples and resolves `l_i⁻¹` on its own.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarFif {
    pub knots: Vec<f64>,
    pub y: Vec<f64>,
    pub scales: Vec<f64>,
    pub xs: Vec<f64>,
    pub samples: Vec<f64>,
    pub depth: usize,
    pub residual: f64,
    pub history: Vec<f64>,
}

struct Lookup {
    interval: usize,
    lo: usize,
    frac: f64,
}

/// Build the FIF through `(knots[i], y[i])` with scaling factors `scales`
/// and Lipschitz maps `q(i, x)` (interval `i` is `[knots[i], knots[i+1]]`).
///
/// `q` must satisfy `q(i, x_i) = y_i − s_i·y_0` and
/// `q(i, x_{i+1}) = y_{i+1} − s_i·y_n`.
pub fn scalar_fif<Q>(
    knots: &[f64],
    y: &[f64],
    scales: &[f64],
    q: Q,
    opts: &ScalarOptions,
) -> Result<ScalarFif>
where
    Q: Fn(usize, f64) -> f64 + Sync + Send,
{
    let n = knots.len().saturating_sub(1);
    if n < 2 || y.len() != n + 1 || scales.len() != n {
        return Err(FifError::SchemaViolation(format!(
            "scalar FIF needs n >= 2 intervals with n + 1 values and n scales (got {} knots, {} values, {} scales)",
            knots.len(),
            y.len(),
            scales.len()
        )));
    }
    if knots.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(FifError::DegenerateInterval {
            left: knots[0],
            right: knots[n],
        });
    }
    if let Some(i) = scales.iter().position(|s| !(s.abs() < 1.0)) {
        return Err(FifError::ScaleOutOfRange {
            index: i + 1,
            value: scales[i],
        });
    }
    if opts.enforce_matching {
        for i in 0..n {
            let left = (q(i, knots[i]) - (y[i] - scales[i] * y[0])).abs();
            let right = (q(i, knots[i + 1]) - (y[i + 1] - scales[i] * y[n])).abs();
            if left > opts.matching_tol || right > opts.matching_tol {
                return Err(FifError::MatchingNotVerified(format!(
                    "scalar interval {}: residuals {left:e}, {right:e}",
                    i + 1
                )));
            }
        }
    }

    let (x0, xn) = (knots[0], knots[n]);
    let xs = evaluation_grid(knots, opts.grid_points)?;
    let lookups: Vec<Lookup> = xs
        .iter()
        .map(|&x| {
            let interval = knots.partition_point(|k| *k <= x).clamp(1, n) - 1;
            let (a, b) = (knots[interval], knots[interval + 1]);
            let pre = if x == a {
                x0
            } else if x == b {
                xn
            } else {
                x0 + (x - a) / (b - a) * (xn - x0)
            };
            let lo = xs.partition_point(|v| *v <= pre).clamp(1, xs.len() - 1) - 1;
            let frac = if xs[lo] == pre {
                0.0
            } else {
                ((pre - xs[lo]) / (xs[lo + 1] - xs[lo])).clamp(0.0, 1.0)
            };
            Lookup { interval, lo, frac }
        })
        .collect();
    let qv = par_map(xs.len(), |k| q(lookups[k].interval, xs[k]));

    // piecewise-linear interpolant of the data as the starting function
    let mut phi: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let i = knots.partition_point(|k| *k <= x).clamp(1, n) - 1;
            let t = (x - knots[i]) / (knots[i + 1] - knots[i]);
            (1.0 - t) * y[i] + t * y[i + 1]
        })
        .collect();

    let s = scales.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let target = if s > 0.0 {
        opts.tol * (1.0 - s) / s
    } else {
        f64::INFINITY
    };
    let mut history = Vec::new();
    for depth in 1..=opts.max_depth {
        let next = par_map(xs.len(), |k| {
            let l = &lookups[k];
            let prev = if l.frac == 0.0 {
                phi[l.lo]
            } else {
                (1.0 - l.frac) * phi[l.lo] + l.frac * phi[l.lo + 1]
            };
            scales[l.interval] * prev + qv[k]
        });
        let displacement = next
            .iter()
            .zip(&phi)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        history.push(displacement);
        phi = next;
        if displacement <= target || displacement == 0.0 {
            return Ok(ScalarFif {
                knots: knots.to_vec(),
                y: y.to_vec(),
                scales: scales.to_vec(),
                xs,
                samples: phi,
                depth,
                residual: displacement,
                history,
            });
        }
    }
    Err(FifError::NoConvergence {
        depth: opts.max_depth,
        residual: history.last().copied().unwrap_or(f64::NAN),
        target,
    })
}

impl ScalarFif {
    /// Linear interpolation of the samples.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.xs[0], *self.xs.last().unwrap());
        if !(lo..=hi).contains(&x) {
            return Err(FifError::OutOfDomain { value: x, lo, hi });
        }
        let j = self
            .xs
            .partition_point(|v| *v <= x)
            .clamp(1, self.xs.len() - 1)
            - 1;
        if self.xs[j] == x {
            return Ok(self.samples[j]);
        }
        let t = (x - self.xs[j]) / (self.xs[j + 1] - self.xs[j]);
        Ok((1.0 - t) * self.samples[j] + t * self.samples[j + 1])
    }

    pub fn certified_error(&self) -> f64 {
        let s = self.scales.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if s == 0.0 {
            0.0
        } else {
            s / (1.0 - s) * self.residual
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Affine `q_i` through the matching endpoints.
    fn affine_q(knots: &[f64], y: &[f64], s: &[f64]) -> impl Fn(usize, f64) -> f64 + Sync + Send {
        let knots = knots.to_vec();
        let y = y.to_vec();
        let s = s.to_vec();
        move |i, x| {
            let n = knots.len() - 1;
            let left = y[i] - s[i] * y[0];
            let right = y[i + 1] - s[i] * y[n];
            let t = (x - knots[i]) / (knots[i + 1] - knots[i]);
            (1.0 - t) * left + t * right
        }
    }

    #[test]
    fn zero_scales_give_piecewise_q() {
        let knots = [0.0, 0.5, 1.0];
        let y = [0.0, 1.0, 0.0];
        let s = [0.0, 0.0];
        let f = scalar_fif(
            &knots,
            &y,
            &s,
            affine_q(&knots, &y, &s),
            &ScalarOptions::default(),
        )
        .unwrap();
        assert_eq!(f.depth, 1);
        for (&x, &v) in f.xs.iter().zip(&f.samples) {
            let expected = if x <= 0.5 { 2.0 * x } else { 2.0 - 2.0 * x };
            assert!((v - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn barnsley_triangle_seed_interpolates() {
        let knots = [0.0, 0.5, 1.0];
        let y = [0.0, 1.0, 0.0];
        let s = [0.5, 0.5];
        let f = scalar_fif(
            &knots,
            &y,
            &s,
            affine_q(&knots, &y, &s),
            &ScalarOptions::default(),
        )
        .unwrap();
        for (&x, &v) in knots.iter().zip(&y) {
            assert_eq!(f.eval(x).unwrap(), v);
        }
        // successive displacements contract by at most s
        for w in f.history.windows(2) {
            assert!(w[1] <= 0.5 * w[0] + 1e-15);
        }
    }

    #[test]
    fn straight_line_is_reproduced() {
        // f(x) = 2x − 1 on [0, 1] with three unequal intervals
        let knots = [0.0, 0.2, 0.7, 1.0];
        let line = |x: f64| 2.0 * x - 1.0;
        let y: Vec<f64> = knots.iter().map(|&x| line(x)).collect();
        let s = [0.6, 0.3, 0.9];
        let (x0, xn) = (knots[0], knots[3]);
        let q = move |i: usize, x: f64| {
            let pre = x0 + (x - knots[i]) / (knots[i + 1] - knots[i]) * (xn - x0);
            line(x) - s[i] * line(pre)
        };
        let f = scalar_fif(&knots, &y, &s, q, &ScalarOptions::default()).unwrap();
        for (&x, &v) in f.xs.iter().zip(&f.samples) {
            assert!((v - line(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn broken_matching_is_rejected() {
        let knots = [0.0, 0.5, 1.0];
        let y = [0.0, 1.0, 0.0];
        let s = [0.5, 0.5];
        let q = affine_q(&knots, &y, &s);
        let bad = move |i: usize, x: f64| q(i, x) + if i == 1 { 0.01 } else { 0.0 };
        assert!(matches!(
            scalar_fif(&knots, &y, &s, bad, &ScalarOptions::default()),
            Err(FifError::MatchingNotVerified(_))
        ));
    }

    #[test]
    fn depth_limit_reports_no_convergence() {
        let knots = [0.0, 0.5, 1.0];
        let y = [0.0, 1.0, 0.0];
        let s = [0.9, 0.9];
        let opts = ScalarOptions {
            max_depth: 3,
            ..Default::default()
        };
        assert!(matches!(
            scalar_fif(&knots, &y, &s, affine_q(&knots, &y, &s), &opts),
            Err(FifError::NoConvergence { depth: 3, .. })
        ));
    }
}
