use std::sync::Arc;

use crate::error::{FifError, Result};
use crate::fuzzy::{FuzzyNumber, LevelGrid};

/// Knots `x_0 < … < x_n` paired with fuzzy values `u_0, …, u_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyDataSet {
    knots: Vec<f64>,
    values: Vec<FuzzyNumber>,
}

impl FuzzyDataSet {
    pub fn new(knots: Vec<f64>, values: Vec<FuzzyNumber>) -> Result<Self> {
        if knots.len() < 3 {
            return Err(FifError::SchemaViolation(format!(
                "need at least three data points, got {}",
                knots.len()
            )));
        }
        if knots.len() != values.len() {
            return Err(FifError::LengthMismatch {
                left: knots.len(),
                right: values.len(),
            });
        }
        if knots.iter().any(|x| !x.is_finite()) {
            return Err(FifError::InvalidParameters("non-finite knot".into()));
        }
        for w in knots.windows(2) {
            if !(w[0] < w[1]) {
                return Err(FifError::DegenerateInterval {
                    left: w[0],
                    right: w[1],
                });
            }
        }
        let grid = values[0].grid();
        if values
            .iter()
            .any(|v| !Arc::ptr_eq(v.grid(), grid) && **v.grid() != **grid)
        {
            return Err(FifError::GridMismatch);
        }
        Ok(FuzzyDataSet { knots, values })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[FuzzyNumber] {
        &self.values
    }

    pub fn grid(&self) -> &Arc<LevelGrid> {
        self.values[0].grid()
    }

    /// Number of subintervals `n`.
    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    /// Level-wise piecewise-linear interpolant of the data at `x`.
    pub fn interpolant(&self, x: f64) -> Result<FuzzyNumber> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(FifError::OutOfDomain { value: x, lo, hi });
        }
        let i = interval_index(&self.knots, x);
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        let t = (x - a) / (b - a);
        FuzzyNumber::combine(1.0 - t, &self.values[i], t, &self.values[i + 1])
    }
}

/// Interval containing `x`: `[x_i, x_{i+1})`, with `x_n` assigned to the
/// last interval. `x` must already lie in `[x_0, x_n]`.
pub(crate) fn interval_index(knots: &[f64], x: f64) -> usize {
    let n = knots.len() - 1;
    let idx = knots.partition_point(|k| *k <= x);
    idx.clamp(1, n) - 1
}

/// Affine contraction `l(x) = slope·x + intercept` carrying `[x_0, x_n]`
/// onto one subinterval.
///
/// Endpoints are mapped exactly: `l(x_0)` and `l(x_n)` return the stored
/// image endpoints bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    slope: f64,
    intercept: f64,
    domain: (f64, f64),
    image: (f64, f64),
}

impl AffineMap {
    pub fn between(domain: (f64, f64), image: (f64, f64)) -> Result<Self> {
        if !(image.0 < image.1) {
            return Err(FifError::DegenerateInterval {
                left: image.0,
                right: image.1,
            });
        }
        if !(domain.0 < domain.1) {
            return Err(FifError::DegenerateInterval {
                left: domain.0,
                right: domain.1,
            });
        }
        let slope = (image.1 - image.0) / (domain.1 - domain.0);
        Ok(AffineMap {
            slope,
            intercept: image.0 - slope * domain.0,
            domain,
            image,
        })
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// Similitude ratio `c_l = |slope|`.
    pub fn ratio(&self) -> f64 {
        self.slope.abs()
    }

    pub fn image(&self) -> (f64, f64) {
        self.image
    }

    pub fn apply(&self, x: f64) -> f64 {
        if x == self.domain.0 {
            self.image.0
        } else if x == self.domain.1 {
            self.image.1
        } else {
            self.image.0 + self.slope * (x - self.domain.0)
        }
    }

    pub fn invert(&self, y: f64) -> f64 {
        if y == self.image.0 {
            self.domain.0
        } else if y == self.image.1 {
            self.domain.1
        } else {
            (self.domain.0 + (y - self.image.0) / self.slope).clamp(self.domain.0, self.domain.1)
        }
    }
}

/// The maps `l_i` with `l_i(x_0) = x_{i-1}` and `l_i(x_n) = x_i`.
pub fn build_maps(knots: &[f64]) -> Result<Vec<AffineMap>> {
    if knots.len() < 3 {
        return Err(FifError::SchemaViolation(
            "need at least three knots".into(),
        ));
    }
    let domain = (knots[0], *knots.last().unwrap());
    knots
        .windows(2)
        .map(|w| AffineMap::between(domain, (w[0], w[1])))
        .collect()
}
