use std::sync::Arc;

use super::maps::{build_maps, interval_index, AffineMap, FuzzyDataSet};
use crate::error::{FifError, Result};
use crate::fuzzy::{FuzzyNumber, LevelGrid};

/// User-supplied `q_i` for one interval, sampled at increasing abscissae
/// covering the whole interval and interpolated linearly in between.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    xs: Vec<f64>,
    values: Vec<FuzzyNumber>,
}

impl QTable {
    pub fn new(xs: Vec<f64>, values: Vec<FuzzyNumber>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(FifError::SchemaViolation(
                "q table needs at least two samples and one value per abscissa".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(FifError::SchemaViolation(
                "q table abscissae must increase".into(),
            ));
        }
        Ok(QTable { xs, values })
    }

    fn eval(&self, x: f64) -> Result<FuzzyNumber> {
        let j = interval_index(&self.xs, x.clamp(self.xs[0], *self.xs.last().unwrap()));
        let t = ((x - self.xs[j]) / (self.xs[j + 1] - self.xs[j])).clamp(0.0, 1.0);
        FuzzyNumber::combine(1.0 - t, &self.values[j], t, &self.values[j + 1])
    }
}

/// How the Lipschitz maps `q_i : I_i → R_F` are produced.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum QRecipe {
    /// `q_i(x) = b_i(x) ∨_g s_i·g_i(l_i⁻¹(x))` with `b_i` the linear
    /// interpolant of `u_{i-1}, u_i` over `I_i` and `g_i` the linear
    /// interpolant of `u_0, u_n` over `I`.
    #[default]
    Example,
    /// One table per interval.
    Table(Vec<QTable>),
}

/// The iterated function system `{I × R_F; w_i = (l_i, F_i)}`.
///
/// Intervals are indexed from zero: interval `i` is `[x_i, x_{i+1}]`.
#[derive(Debug, Clone)]
pub struct IfsSystem {
    data: FuzzyDataSet,
    maps: Vec<AffineMap>,
    scales: Vec<f64>,
    recipe: QRecipe,
}

impl IfsSystem {
    pub fn new(data: FuzzyDataSet, scales: Vec<f64>, recipe: QRecipe) -> Result<Self> {
        let n = data.intervals();
        if scales.len() != n {
            return Err(FifError::SchemaViolation(format!(
                "{} intervals need {} scaling factors, got {}",
                n,
                n,
                scales.len()
            )));
        }
        for (index, &value) in scales.iter().enumerate() {
            if !(0.0..1.0).contains(&value) {
                return Err(FifError::ScaleOutOfRange {
                    index: index + 1,
                    value,
                });
            }
        }
        if let QRecipe::Table(tables) = &recipe {
            if tables.len() != n {
                return Err(FifError::SchemaViolation(format!(
                    "{n} intervals need {n} q tables, got {}",
                    tables.len()
                )));
            }
            let knots = data.knots();
            for (i, t) in tables.iter().enumerate() {
                if t.xs[0] > knots[i] || *t.xs.last().unwrap() < knots[i + 1] {
                    return Err(FifError::SchemaViolation(format!(
                        "q table {} does not cover [{}, {}]",
                        i + 1,
                        knots[i],
                        knots[i + 1]
                    )));
                }
                if t.values.iter().any(|v| !v.grid().same_as(data.grid())) {
                    return Err(FifError::GridMismatch);
                }
            }
        }
        let maps = build_maps(data.knots())?;
        Ok(IfsSystem {
            data,
            maps,
            scales,
            recipe,
        })
    }

    pub fn data(&self) -> &FuzzyDataSet {
        &self.data
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn recipe(&self) -> &QRecipe {
        &self.recipe
    }

    pub fn grid(&self) -> &Arc<LevelGrid> {
        self.data.grid()
    }

    pub fn intervals(&self) -> usize {
        self.maps.len()
    }

    pub fn knots(&self) -> &[f64] {
        self.data.knots()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.data.domain()
    }

    pub fn span(&self) -> f64 {
        let (a, b) = self.domain();
        b - a
    }

    /// `s = max s_i`.
    pub fn max_scale(&self) -> f64 {
        self.scales.iter().copied().fold(0.0, f64::max)
    }

    pub fn c_min(&self) -> f64 {
        self.maps
            .iter()
            .map(AffineMap::ratio)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn c_max(&self) -> f64 {
        self.maps.iter().map(AffineMap::ratio).fold(0.0, f64::max)
    }

    /// Interval index owning `x` (`[x_i, x_{i+1})`, last interval closed).
    pub fn interval_of(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(FifError::OutOfDomain { value: x, lo, hi });
        }
        Ok(interval_index(self.knots(), x))
    }

    fn check_interval(&self, i: usize, x: f64) -> Result<()> {
        let knots = self.knots();
        if i >= self.intervals() {
            return Err(FifError::InvalidParameters(format!("no interval {i}")));
        }
        let (lo, hi) = (knots[i], knots[i + 1]);
        if !(lo..=hi).contains(&x) {
            return Err(FifError::OutOfInterval { x, lo, hi });
        }
        Ok(())
    }

    /// `b_i(x)`: linear interpolant of `u_i, u_{i+1}` on interval `i`.
    pub fn local_interpolant(&self, i: usize, x: f64) -> Result<FuzzyNumber> {
        self.check_interval(i, x)?;
        let knots = self.knots();
        let values = self.data.values();
        let (a, b) = (knots[i], knots[i + 1]);
        let wr = if x == b { 1.0 } else { (x - a) / (b - a) };
        let wl = if x == a { 1.0 } else { (x - b) / (a - b) };
        FuzzyNumber::combine(wr, &values[i + 1], wl, &values[i])
    }

    /// `g(x)`: linear interpolant of `u_0, u_n` on the whole domain.
    pub fn global_interpolant(&self, x: f64) -> Result<FuzzyNumber> {
        let (x0, xn) = self.domain();
        if !(x0..=xn).contains(&x) {
            return Err(FifError::OutOfDomain {
                value: x,
                lo: x0,
                hi: xn,
            });
        }
        let values = self.data.values();
        let wr = if x == xn { 1.0 } else { (x - x0) / (xn - x0) };
        let wl = if x == x0 { 1.0 } else { (x - xn) / (x0 - xn) };
        FuzzyNumber::combine(wr, &values[values.len() - 1], wl, &values[0])
    }

    /// `q_i(x)` for `x` in interval `i`.
    pub fn q(&self, i: usize, x: f64) -> Result<FuzzyNumber> {
        self.check_interval(i, x)?;
        match &self.recipe {
            QRecipe::Example => {
                let b = self.local_interpolant(i, x)?;
                let g = self.global_interpolant(self.maps[i].invert(x))?;
                b.g_difference(&g.scale(self.scales[i]))
            }
            QRecipe::Table(tables) => tables[i].eval(x),
        }
    }

    /// `F_i(x, u) = s_i·u ⊕ q_i(l_i(x))`.
    pub fn apply_f(&self, i: usize, x: f64, u: &FuzzyNumber) -> Result<FuzzyNumber> {
        self.check_domain(x)?;
        let q = self.q(i, self.maps[i].apply(x))?;
        u.scale(self.scales[i]).add(&q)
    }

    /// `w_i(x, u) = (l_i(x), F_i(x, u))`.
    pub fn apply_w(&self, i: usize, x: f64, u: &FuzzyNumber) -> Result<(f64, FuzzyNumber)> {
        Ok((self.maps[i].apply(x), self.apply_f(i, x, u)?))
    }

    /// `s_i·(u ∨_g g(x)) ⊕ b_i(l_i(x))`, the rewritten form of `F_i` for the
    /// example recipe. It agrees with [`apply_f`](Self::apply_f) only when
    /// both generalized differences are proper.
    pub fn difference_form(&self, i: usize, x: f64, u: &FuzzyNumber) -> Result<FuzzyNumber> {
        self.check_domain(x)?;
        let g = self.global_interpolant(x)?;
        let b = self.local_interpolant(i, self.maps[i].apply(x))?;
        u.g_difference(&g)?.scale(self.scales[i]).add(&b)
    }

    /// `d_∞` between the two forms of `F_i` at `(x, u)`.
    pub fn form_gap(&self, i: usize, x: f64, u: &FuzzyNumber) -> Result<f64> {
        self.apply_f(i, x, u)?
            .d_infty(&self.difference_form(i, x, u)?)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if (lo..=hi).contains(&x) {
            Ok(())
        } else {
            Err(FifError::OutOfDomain { value: x, lo, hi })
        }
    }
}
