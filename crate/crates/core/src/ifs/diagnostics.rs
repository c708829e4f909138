use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::system::IfsSystem;
use crate::error::{FifError, Result};
use crate::fuzzy::FuzzyNumber;

/// Default safety factor applied to numerical Lipschitz estimates.
pub const LIPSCHITZ_SAFETY: f64 = 1.25;

/// Endpoint residuals of the matching condition for one interval.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingResidual {
    /// 1-based interval number.
    pub interval: usize,
    /// `d_∞(F_i(x_0, u_0), u_{i-1})`
    pub left: f64,
    /// `d_∞(F_i(x_n, u_n), u_i)`
    pub right: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingReport {
    pub tol: f64,
    pub residuals: Vec<MatchingResidual>,
    pub passed: bool,
}

impl MatchingReport {
    pub fn worst(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.left.max(r.right))
            .fold(0.0, f64::max)
    }
}

pub fn check_matching(sys: &IfsSystem, tol: f64) -> Result<MatchingReport> {
    let (x0, xn) = sys.domain();
    let values = sys.data().values();
    let n = sys.intervals();
    let mut residuals = Vec::with_capacity(n);
    for i in 0..n {
        let left = sys.apply_f(i, x0, &values[0])?.d_infty(&values[i])?;
        let right = sys.apply_f(i, xn, &values[n])?.d_infty(&values[i + 1])?;
        residuals.push(MatchingResidual {
            interval: i + 1,
            left,
            right,
        });
    }
    let passed = residuals.iter().all(|r| r.left <= tol && r.right <= tol);
    Ok(MatchingReport {
        tol,
        residuals,
        passed,
    })
}

/// Largest difference quotient of `q_i` over `samples` equispaced points of
/// interval `i`. This is a lower bound on the true Lipschitz constant.
pub fn estimate_lipschitz(sys: &IfsSystem, i: usize, samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(FifError::InvalidParameters(
            "need at least two samples".into(),
        ));
    }
    let knots = sys.knots();
    let (a, b) = (knots[i], knots[i + 1]);
    let xs: Vec<f64> = (0..samples)
        .map(|j| {
            if j + 1 == samples {
                b
            } else {
                a + (b - a) * j as f64 / (samples - 1) as f64
            }
        })
        .collect();
    let qs = xs
        .iter()
        .map(|&x| sys.q(i, x))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0.0_f64;
    for j in 1..samples {
        best = best.max(qs[j].d_infty(&qs[j - 1])? / (xs[j] - xs[j - 1]));
    }
    Ok(best)
}

pub fn lipschitz_estimates(sys: &IfsSystem, samples: usize) -> Result<Vec<f64>> {
    (0..sys.intervals())
        .map(|i| estimate_lipschitz(sys, i, samples))
        .collect()
}

/// `ρ = safety · max_i L_{q_i}`, kept strictly positive.
pub fn rho_from_estimates(estimates: &[f64], safety: f64) -> f64 {
    let l = estimates.iter().copied().fold(0.0, f64::max);
    (safety * l).max(1e-9)
}

/// θ and the contraction factors of the maps `w_i` in the metric
/// `d_θ((x,u),(x',u')) = |x − x'| + θ·d_∞(u, u')`.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaMetricParams {
    pub theta: f64,
    /// Lipschitz constants used for `q_i` (already inflated).
    pub lipschitz: Vec<f64>,
    /// `c_{w_i} = max{c_i + θ·L_i·c_i, s_i}`.
    pub contraction: Vec<f64>,
}

/// Supremum of admissible θ: `min_i (1 − c_i) / (L_i·c_i)`; infinite when
/// every `q_i` is constant.
pub fn admissible_theta_bound(sys: &IfsSystem, lipschitz: &[f64]) -> f64 {
    sys.maps()
        .iter()
        .zip(lipschitz)
        .map(|(m, &l)| {
            let c = m.ratio();
            if l == 0.0 {
                f64::INFINITY
            } else {
                (1.0 - c) / (l * c)
            }
        })
        .fold(f64::INFINITY, f64::min)
}

impl ThetaMetricParams {
    pub fn new(sys: &IfsSystem, theta: f64, lipschitz: Vec<f64>) -> Result<Self> {
        if lipschitz.len() != sys.intervals() {
            return Err(FifError::LengthMismatch {
                left: lipschitz.len(),
                right: sys.intervals(),
            });
        }
        if !(theta > 0.0 && theta < admissible_theta_bound(sys, &lipschitz)) {
            return Err(FifError::InvalidTheta(theta));
        }
        let contraction: Vec<f64> = sys
            .maps()
            .iter()
            .zip(&lipschitz)
            .zip(sys.scales())
            .map(|((m, l), &s)| (m.ratio() + theta * l * m.ratio()).max(s))
            .collect();
        debug_assert!(contraction.iter().all(|&c| c < 1.0));
        Ok(ThetaMetricParams {
            theta,
            lipschitz,
            contraction,
        })
    }

    /// θ at the midpoint of the admissible range (θ = 1 when unbounded).
    pub fn midpoint(sys: &IfsSystem, lipschitz: Vec<f64>) -> Result<Self> {
        let bound = admissible_theta_bound(sys, &lipschitz);
        let theta = if bound.is_finite() { 0.5 * bound } else { 1.0 };
        Self::new(sys, theta, lipschitz)
    }

    pub fn d_theta(&self, x: f64, u: &FuzzyNumber, y: f64, v: &FuzzyNumber) -> Result<f64> {
        Ok((x - y).abs() + self.theta * u.d_infty(v)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub theta: f64,
    pub trials_per_map: usize,
    pub violations: usize,
    pub sandwich_violations: usize,
    /// Largest observed `d_θ(w_i(p), w_i(p')) / (c_{w_i}·d_θ(p, p'))`.
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Random fuzzy number around the data range with power-law flanks.
pub(crate) fn random_fuzzy(sys: &IfsSystem, rng: &mut impl Rng, spread: f64) -> FuzzyNumber {
    let grid = sys.grid().clone();
    let center = rng.random_range(-spread..=spread);
    let left = rng.random_range(0.0..=spread * 0.5);
    let right = rng.random_range(0.0..=spread * 0.5);
    let p = rng.random_range(0.5..=2.0);
    let lower = grid
        .levels()
        .iter()
        .map(|l| center - left * (1.0 - l).powf(p))
        .collect();
    let upper = grid
        .levels()
        .iter()
        .map(|l| center + right * (1.0 - l).powf(p))
        .collect();
    FuzzyNumber::new(grid, lower, upper).expect("power flanks are nested")
}

/// Monte-Carlo check that every `w_i` contracts `d_θ` by `c_{w_i}`, plus the
/// equivalence sandwich between `d_θ` and `d_max`.
pub fn verify_theta_contraction(
    sys: &IfsSystem,
    params: &ThetaMetricParams,
    trials: usize,
    seed: u64,
) -> Result<ContractionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x0, xn) = sys.domain();
    let spread = 1.0
        + sys
            .data()
            .values()
            .iter()
            .map(|u| u.support().0.abs().max(u.support().1.abs()))
            .fold(0.0, f64::max);
    let theta = params.theta;
    let mut violations = 0;
    let mut sandwich_violations = 0;
    let mut worst_ratio = 0.0_f64;
    for i in 0..sys.intervals() {
        for _ in 0..trials {
            let x = rng.random_range(x0..=xn);
            let y = rng.random_range(x0..=xn);
            let u = random_fuzzy(sys, &mut rng, spread);
            let v = random_fuzzy(sys, &mut rng, spread);
            let before = params.d_theta(x, &u, y, &v)?;
            let (wx, wu) = sys.apply_w(i, x, &u)?;
            let (wy, wv) = sys.apply_w(i, y, &v)?;
            let after = params.d_theta(wx, &wu, wy, &wv)?;
            let bound = params.contraction[i] * before;
            if after > bound + 1e-9 {
                violations += 1;
            }
            if bound > 0.0 {
                worst_ratio = worst_ratio.max(after / bound);
            }
            let d_max = (x - y).abs().max(u.d_infty(&v)?);
            let (lo, hi) = if theta < 1.0 {
                (theta * d_max, 2.0 * d_max)
            } else {
                (d_max, 2.0 * theta * d_max)
            };
            if before < lo - 1e-12 || before > hi + 1e-12 {
                sandwich_violations += 1;
            }
        }
    }
    Ok(ContractionReport {
        theta,
        trials_per_map: trials,
        violations,
        sandwich_violations,
        worst_ratio,
        passed: violations == 0 && sandwich_violations == 0,
    })
}
