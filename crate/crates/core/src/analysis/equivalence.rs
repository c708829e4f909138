use serde::Serialize;

use crate::engine::{scalar_fif, FuzzyFif, ScalarFif, ScalarOptions};
use crate::error::Result;

/// Absolute floor added to the combined tolerance so that exact agreement
/// (both certified errors zero) is not judged against 0.
pub const GAP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct LevelGap {
    pub lambda: f64,
    pub gap_lower: f64,
    pub gap_upper: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl LevelGap {
    pub fn gap(&self) -> f64 {
        self.gap_lower.max(self.gap_upper)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub levels: Vec<LevelGap>,
    pub max_gap: f64,
    pub passed: bool,
}

/// Real-valued FIFs through the λ-cut endpoints of the data.
#[derive(Debug, Clone)]
pub struct LevelScalars {
    pub lambda: f64,
    pub lower: ScalarFif,
    pub upper: ScalarFif,
}

/// Build the two scalar FIFs for level λ: data `u_i^∓(λ)`, the same scales,
/// and `q_i^∓(λ)` taken from the fuzzy system's maps.
pub fn level_scalars(fif: &FuzzyFif, lambda: f64, opts: &ScalarOptions) -> Result<LevelScalars> {
    let sys = fif.system();
    let mut lo = Vec::with_capacity(sys.knots().len());
    let mut hi = Vec::with_capacity(sys.knots().len());
    for u in sys.data().values() {
        let (a, b) = u.at_level(lambda)?;
        lo.push(a);
        hi.push(b);
    }
    let side = |upper: bool| {
        move |i: usize, x: f64| match sys.q(i, x).and_then(|q| q.at_level(lambda)) {
            Ok((a, b)) => {
                if upper {
                    b
                } else {
                    a
                }
            }
            Err(_) => f64::NAN,
        }
    };
    let lower = scalar_fif(sys.knots(), &lo, sys.scales(), side(false), opts)?;
    let upper = scalar_fif(sys.knots(), &hi, sys.scales(), side(true), opts)?;
    Ok(LevelScalars {
        lambda,
        lower,
        upper,
    })
}

/// Compare `extract_level(λ)` with independently built scalar FIFs over
/// `P_λ^−` and `P_λ^+`. A level passes when its gap is within the sum of the
/// two engines' certified errors (plus [`GAP_FLOOR`]).
pub fn theorem4_harness(
    fif: &FuzzyFif,
    lambdas: &[f64],
    opts: &ScalarOptions,
) -> Result<EquivalenceReport> {
    let mut levels = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let curves = fif.extract_level(lambda)?;
        let scalars = level_scalars(fif, lambda, opts)?;
        let mut gap_lower = 0.0_f64;
        let mut gap_upper = 0.0_f64;
        for (k, &x) in curves.xs.iter().enumerate() {
            gap_lower = gap_lower.max((curves.lower[k] - scalars.lower.eval(x)?).abs());
            gap_upper = gap_upper.max((curves.upper[k] - scalars.upper.eval(x)?).abs());
        }
        let tolerance = fif.certified_error()
            + scalars
                .lower
                .certified_error()
                .max(scalars.upper.certified_error())
            + GAP_FLOOR;
        let passed = gap_lower.max(gap_upper) <= tolerance;
        levels.push(LevelGap {
            lambda,
            gap_lower,
            gap_upper,
            tolerance,
            passed,
        });
    }
    let max_gap = levels.iter().map(LevelGap::gap).fold(0.0, f64::max);
    let passed = levels.iter().all(|l| l.passed);
    Ok(EquivalenceReport {
        levels,
        max_gap,
        passed,
    })
}
