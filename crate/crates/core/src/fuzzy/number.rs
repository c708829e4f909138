use std::sync::Arc;

use super::grid::LevelGrid;
use crate::error::{FifError, Result};

/// A fuzzy number stored as its family of nested level intervals
/// `[lower[k], upper[k]]`, one per level of the shared [`LevelGrid`].
///
/// Invariants (checked on construction, debug-asserted on every operation):
/// `lower[k] <= upper[k]`, `lower` nondecreasing and `upper` nonincreasing in
/// `k`.
#[derive(Debug, Clone)]
pub struct FuzzyNumber {
    grid: Arc<LevelGrid>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PartialEq for FuzzyNumber {
    fn eq(&self, other: &Self) -> bool {
        self.grid.same_as(&other.grid) && self.lower == other.lower && self.upper == other.upper
    }
}

impl FuzzyNumber {
    /// Validating constructor.
    pub fn new(grid: Arc<LevelGrid>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != grid.len() || upper.len() != grid.len() {
            return Err(FifError::LengthMismatch {
                left: lower.len().max(upper.len()),
                right: grid.len(),
            });
        }
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(FifError::InvalidParameters(
                "non-finite level endpoint".into(),
            ));
        }
        let u = FuzzyNumber { grid, lower, upper };
        u.check_nesting()?;
        Ok(u)
    }

    pub(crate) fn from_parts(grid: Arc<LevelGrid>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let u = FuzzyNumber { grid, lower, upper };
        debug_assert!(u.is_nested(), "nesting violated: {u:?}");
        u
    }

    /// Embedding of a real number: every level is `[value, value]`.
    pub fn crisp(grid: Arc<LevelGrid>, value: f64) -> Self {
        let n = grid.len();
        FuzzyNumber {
            grid,
            lower: vec![value; n],
            upper: vec![value; n],
        }
    }

    pub fn grid(&self) -> &Arc<LevelGrid> {
        &self.grid
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Closure of the support (the level-0 interval).
    pub fn support(&self) -> (f64, f64) {
        (self.lower[0], self.upper[0])
    }

    /// The level-1 interval.
    pub fn core(&self) -> (f64, f64) {
        let k = self.lower.len() - 1;
        (self.lower[k], self.upper[k])
    }

    pub fn is_crisp(&self) -> bool {
        self.lower == self.upper && self.lower.windows(2).all(|w| w[0] == w[1])
    }

    /// Level interval at an arbitrary λ ∈ [0, 1]; endpoints are piecewise
    /// linear between grid levels.
    pub fn at_level(&self, lambda: f64) -> Result<(f64, f64)> {
        let (k, t) = self.grid.locate(lambda)?;
        if t == 0.0 {
            return Ok((self.lower[k], self.upper[k]));
        }
        let lerp = |v: &[f64]| (1.0 - t) * v[k] + t * v[k + 1];
        Ok((lerp(&self.lower), lerp(&self.upper)))
    }

    pub fn is_nested(&self) -> bool {
        self.check_nesting().is_ok()
    }

    fn check_nesting(&self) -> Result<()> {
        for k in 0..self.lower.len() {
            if self.lower[k] > self.upper[k] {
                return Err(FifError::NotNested(format!(
                    "empty level {k}: [{}, {}]",
                    self.lower[k], self.upper[k]
                )));
            }
            if k > 0 && (self.lower[k] < self.lower[k - 1] || self.upper[k] > self.upper[k - 1]) {
                return Err(FifError::NotNested(format!(
                    "level {k} escapes level {}",
                    k - 1
                )));
            }
        }
        Ok(())
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(FifError::GridMismatch)
        }
    }

    /// `u ⊕ v`: level-wise Minkowski sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let lower = self
            .lower
            .iter()
            .zip(&other.lower)
            .map(|(a, b)| a + b)
            .collect();
        let upper = self
            .upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_parts(self.grid.clone(), lower, upper))
    }

    /// `c · u`; negative factors swap the endpoints.
    pub fn scale(&self, c: f64) -> Self {
        let mul = |v: &[f64]| v.iter().map(|x| c * x).collect::<Vec<_>>();
        let (lower, upper) = if c >= 0.0 {
            (mul(&self.lower), mul(&self.upper))
        } else {
            (mul(&self.upper), mul(&self.lower))
        };
        Self::from_parts(self.grid.clone(), lower, upper)
    }

    /// `u ∨_g v`, the generalized difference.
    ///
    /// At level λ_k the interval is the inf/sup, over grid levels β ≥ λ_k, of
    /// the two endpoint differences. A single backward scan from λ = 1 keeps
    /// the running envelope, so the result is nested by construction.
    pub fn g_difference(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let n = self.lower.len();
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in (0..n).rev() {
            let dl = self.lower[k] - other.lower[k];
            let du = self.upper[k] - other.upper[k];
            lo = lo.min(dl.min(du));
            hi = hi.max(dl.max(du));
            lower[k] = lo;
            upper[k] = hi;
        }
        Ok(Self::from_parts(self.grid.clone(), lower, upper))
    }

    /// Supremum metric over the grid levels.
    pub fn d_infty(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self.d_infty_unchecked(other))
    }

    pub(crate) fn d_infty_unchecked(&self, other: &Self) -> f64 {
        let lo = self.lower.iter().zip(&other.lower);
        let up = self.upper.iter().zip(&other.upper);
        lo.chain(up).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `wa·a ⊕ wb·b` for nonnegative weights, the building block of the
    /// piecewise-linear fuzzy interpolants.
    pub fn combine(wa: f64, a: &Self, wb: f64, b: &Self) -> Result<Self> {
        a.scale(wa).add(&b.scale(wb))
    }
}

/// `D(f, g)` restricted to a common sample list: the largest `d_∞` over
/// paired samples.
pub fn sup_distance(f: &[FuzzyNumber], g: &[FuzzyNumber]) -> Result<f64> {
    if f.len() != g.len() {
        return Err(FifError::LengthMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    f.iter()
        .zip(g)
        .try_fold(0.0_f64, |m, (a, b)| Ok(m.max(a.d_infty(b)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<LevelGrid> {
        LevelGrid::uniform(100).unwrap()
    }

    fn tri(g: &Arc<LevelGrid>, a: f64, b: f64, c: f64) -> FuzzyNumber {
        let lower = g.levels().iter().map(|l| a + (b - a) * l).collect();
        let upper = g.levels().iter().map(|l| c - (c - b) * l).collect();
        FuzzyNumber::new(g.clone(), lower, upper).unwrap()
    }

    fn assert_levels(u: &FuzzyNumber, lo: impl Fn(f64) -> f64, hi: impl Fn(f64) -> f64) {
        for (k, &l) in u.grid().levels().iter().enumerate() {
            assert!((u.lower()[k] - lo(l)).abs() < 1e-12, "lower at {l}");
            assert!((u.upper()[k] - hi(l)).abs() < 1e-12, "upper at {l}");
        }
    }

    #[test]
    fn add_triangles() {
        let g = grid();
        let s = tri(&g, 0.0, 1.0, 2.0).add(&tri(&g, 2.0, 2.5, 3.0)).unwrap();
        assert_levels(&s, |l| 2.0 + 1.5 * l, |l| 5.0 - 1.5 * l);
    }

    #[test]
    fn crisp_is_homomorphic() {
        let g = grid();
        let u = tri(&g, 0.0, 1.0, 2.0);
        assert_eq!(u.add(&FuzzyNumber::crisp(g.clone(), 0.0)).unwrap(), u);
        let ab = FuzzyNumber::crisp(g.clone(), 1.25)
            .add(&FuzzyNumber::crisp(g.clone(), -3.5))
            .unwrap();
        assert_eq!(ab, FuzzyNumber::crisp(g.clone(), 1.25 - 3.5));
        assert_eq!(
            FuzzyNumber::crisp(g.clone(), 2.0).scale(-0.5),
            FuzzyNumber::crisp(g, -1.0)
        );
    }

    #[test]
    fn scaling() {
        let g = grid();
        let u = tri(&g, 0.0, 1.0, 2.0);
        assert_levels(&u.scale(0.3), |l| 0.3 * l, |l| 0.6 - 0.3 * l);
        assert_eq!(u.scale(0.0), FuzzyNumber::crisp(g.clone(), 0.0));
        let neg = u.scale(-1.0);
        assert!(neg.is_nested());
        assert_levels(&neg, |l| -2.0 + l, |l| -l);
    }

    #[test]
    fn g_difference_examples() {
        let g = grid();
        let u = tri(&g, 0.0, 1.0, 2.0);
        assert_eq!(
            u.g_difference(&u).unwrap(),
            FuzzyNumber::crisp(g.clone(), 0.0)
        );
        let d = u.g_difference(&tri(&g, 0.0, 0.5, 1.0)).unwrap();
        assert_levels(&d, |l| 0.5 * l, |l| 1.0 - 0.5 * l);
        let c = FuzzyNumber::crisp(g.clone(), 4.0)
            .g_difference(&FuzzyNumber::crisp(g.clone(), 1.5))
            .unwrap();
        assert_eq!(c, FuzzyNumber::crisp(g.clone(), 2.5));
        assert_eq!(u.g_difference(&FuzzyNumber::crisp(g, 0.0)).unwrap(), u);
    }

    #[test]
    fn g_difference_envelopes_incompatible_widths() {
        // narrow minus wide: the raw differences cross, the envelope keeps
        // the result a valid fuzzy number
        let g = grid();
        let d = tri(&g, 2.0, 2.5, 3.0)
            .g_difference(&tri(&g, 0.0, 0.8, 1.6))
            .unwrap();
        assert!(d.is_nested());
        assert_levels(&d, |l| 1.4 + 0.3 * l, |l| 2.0 - 0.3 * l);
    }

    #[test]
    fn metric_examples() {
        let g = grid();
        let u = tri(&g, 0.0, 1.0, 2.0);
        assert_eq!(u.d_infty(&u).unwrap(), 0.0);
        assert_eq!(u.d_infty(&FuzzyNumber::crisp(g.clone(), 0.0)).unwrap(), 2.0);
        let a = FuzzyNumber::crisp(g.clone(), -1.0);
        let b = FuzzyNumber::crisp(g.clone(), 2.5);
        assert_eq!(a.d_infty(&b).unwrap(), 3.5);
    }

    #[test]
    fn sup_distance_cases() {
        let g = grid();
        let u = tri(&g, 0.0, 1.0, 2.0);
        let v = tri(&g, 1.0, 3.0, 4.0);
        let f = vec![u.clone(), v.clone()];
        assert_eq!(sup_distance(&f, &f).unwrap(), 0.0);
        assert_eq!(
            sup_distance(&f[..1], &f[1..]).unwrap(),
            u.d_infty(&v).unwrap()
        );
        let shift = FuzzyNumber::crisp(g.clone(), -0.75);
        let shifted: Vec<_> = f.iter().map(|w| w.add(&shift).unwrap()).collect();
        assert!((sup_distance(&f, &shifted).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(
            sup_distance(&f, &f[..1]),
            Err(FifError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let u = tri(&grid(), 0.0, 1.0, 2.0);
        let v = FuzzyNumber::crisp(LevelGrid::uniform(10).unwrap(), 0.0);
        assert!(matches!(u.add(&v), Err(FifError::GridMismatch)));
        assert!(matches!(u.g_difference(&v), Err(FifError::GridMismatch)));
        assert!(matches!(u.d_infty(&v), Err(FifError::GridMismatch)));
    }

    #[test]
    fn constructor_rejects_broken_nesting() {
        let g = LevelGrid::uniform(2).unwrap();
        assert!(FuzzyNumber::new(g.clone(), vec![0.0, 0.5, 1.0], vec![2.0, 1.5, 1.0]).is_ok());
        assert!(FuzzyNumber::new(g.clone(), vec![0.0, 0.5, 0.4], vec![2.0, 1.5, 1.0]).is_err());
        assert!(FuzzyNumber::new(g.clone(), vec![0.0, 0.5, 1.2], vec![2.0, 1.5, 1.0]).is_err());
        assert!(FuzzyNumber::new(g, vec![0.0, 0.5], vec![2.0, 1.5]).is_err());
    }

    #[test]
    fn off_grid_level_interpolates() {
        let g = LevelGrid::uniform(4).unwrap();
        let u = tri(&g, 0.0, 1.0, 2.0);
        let (lo, hi) = u.at_level(0.3).unwrap();
        assert!((lo - 0.3).abs() < 1e-12 && (hi - 1.7).abs() < 1e-12);
    }
}
