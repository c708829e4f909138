use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::grid::LevelGrid;
use super::number::FuzzyNumber;
use crate::error::{FifError, Result};

/// A membership function counts as normal when its peak reaches `1 - NORMALITY_TOL`.
pub const NORMALITY_TOL: f64 = 1e-9;

/// Samples per piece used to locate level sets of piecewise memberships.
const PIECE_SAMPLES: usize = 512;

/// Shape of the flanks of a [`MembershipSpec::QuadraticFlank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    /// `μ = t²` rising from the support end to the peak.
    Convex,
    /// `μ = 1 − t²`, a parabolic bell.
    Concave,
}

/// One polynomial piece `μ(y) = Σ coeffs[j]·y^j` on `[from, to]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPiece {
    pub from: f64,
    pub to: f64,
    pub coeffs: Vec<f64>,
}

impl PolyPiece {
    fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }
}

/// Input description of a fuzzy number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MembershipSpec {
    Crisp {
        value: f64,
    },
    Triangular {
        a: f64,
        b: f64,
        c: f64,
    },
    Trapezoidal {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    /// `μ(y) = exp(−((y − center)/width)²)` on `support`, zero outside.
    TruncatedGaussian {
        center: f64,
        width: f64,
        support: [f64; 2],
    },
    /// Quadratic flanks on `[a, peak]` and `[peak, b]`.
    QuadraticFlank {
        a: f64,
        peak: f64,
        b: f64,
        curvature: Curvature,
    },
    /// Explicit level intervals; resampled onto the working grid by linear
    /// interpolation in λ.
    LevelTable {
        levels: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// Piecewise polynomial membership, zero outside the pieces. Level sets
    /// are found numerically.
    PiecewiseAnalytic {
        pieces: Vec<PolyPiece>,
    },
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(FifError::UnboundedSupport)
    }
}

fn ordered(values: &[f64], what: &str) -> Result<()> {
    if values.windows(2).all(|w| w[0] <= w[1]) {
        Ok(())
    } else {
        Err(FifError::InvalidParameters(format!(
            "{what} parameters must be ordered"
        )))
    }
}

impl MembershipSpec {
    pub fn triangular(a: f64, b: f64, c: f64) -> Self {
        MembershipSpec::Triangular { a, b, c }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MembershipSpec::Crisp { value } => finite(&[*value]),
            MembershipSpec::Triangular { a, b, c } => {
                finite(&[*a, *b, *c])?;
                ordered(&[*a, *b, *c], "triangular")
            }
            MembershipSpec::Trapezoidal { a, b, c, d } => {
                finite(&[*a, *b, *c, *d])?;
                ordered(&[*a, *b, *c, *d], "trapezoidal")
            }
            MembershipSpec::TruncatedGaussian {
                center,
                width,
                support,
            } => {
                finite(&[support[0], support[1]])?;
                if !(width.is_finite() && *width > 0.0) || !center.is_finite() {
                    return Err(FifError::InvalidParameters(
                        "gaussian needs a finite center and positive width".into(),
                    ));
                }
                ordered(support, "gaussian support")?;
                if *center < support[0] || *center > support[1] {
                    let peak = self.membership(center.clamp(support[0], support[1]));
                    return Err(FifError::NonNormal { peak });
                }
                Ok(())
            }
            MembershipSpec::QuadraticFlank { a, peak, b, .. } => {
                finite(&[*a, *peak, *b])?;
                ordered(&[*a, *peak, *b], "quadratic flank")
            }
            MembershipSpec::LevelTable {
                levels,
                lower,
                upper,
            } => {
                let grid = LevelGrid::from_levels(levels.clone())?;
                finite(lower)?;
                finite(upper)?;
                FuzzyNumber::new(grid, lower.clone(), upper.clone()).map(|_| ())
            }
            MembershipSpec::PiecewiseAnalytic { pieces } => {
                if pieces.is_empty() {
                    return Err(FifError::InvalidParameters("no pieces".into()));
                }
                for p in pieces {
                    finite(&[p.from, p.to])?;
                    if !(p.from < p.to) {
                        return Err(FifError::InvalidParameters("empty piece".into()));
                    }
                    if p.coeffs.is_empty() || p.coeffs.iter().any(|c| !c.is_finite()) {
                        return Err(FifError::InvalidParameters("bad polynomial".into()));
                    }
                }
                let peak = self.piecewise_peak();
                if peak < 1.0 - NORMALITY_TOL {
                    return Err(FifError::NonNormal { peak });
                }
                Ok(())
            }
        }
    }

    /// Membership degree `μ(y)`.
    pub fn membership(&self, y: f64) -> f64 {
        let ramp = |t: f64| t.clamp(0.0, 1.0);
        match self {
            MembershipSpec::Crisp { value } => f64::from(y == *value),
            MembershipSpec::Triangular { a, b, c } => {
                if y == *b {
                    1.0
                } else if y < *b {
                    if y < *a {
                        0.0
                    } else {
                        ramp((y - a) / (b - a))
                    }
                } else if y > *c {
                    0.0
                } else {
                    ramp((c - y) / (c - b))
                }
            }
            MembershipSpec::Trapezoidal { a, b, c, d } => {
                if (*b..=*c).contains(&y) {
                    1.0
                } else if y < *b {
                    if y < *a {
                        0.0
                    } else {
                        ramp((y - a) / (b - a))
                    }
                } else if y > *d {
                    0.0
                } else {
                    ramp((d - y) / (d - c))
                }
            }
            MembershipSpec::TruncatedGaussian {
                center,
                width,
                support,
            } => {
                if y < support[0] || y > support[1] {
                    0.0
                } else {
                    (-((y - center) / width).powi(2)).exp()
                }
            }
            MembershipSpec::QuadraticFlank {
                a,
                peak,
                b,
                curvature,
            } => {
                if y < *a || y > *b {
                    return 0.0;
                }
                if y == *peak {
                    return 1.0;
                }
                let t = if y < *peak {
                    (peak - y) / (peak - a)
                } else {
                    (y - peak) / (b - peak)
                };
                match curvature {
                    Curvature::Convex => (1.0 - t).powi(2),
                    Curvature::Concave => 1.0 - t * t,
                }
            }
            MembershipSpec::LevelTable {
                levels,
                lower,
                upper,
            } => {
                let mut best = 0.0_f64;
                if y < lower[0] || y > upper[0] {
                    return 0.0;
                }
                for k in 1..levels.len() {
                    if y >= lower[k] && y <= upper[k] {
                        best = levels[k];
                    } else {
                        // crossing between level k-1 and k on the violated flank
                        let frac = if y < lower[k] {
                            (y - lower[k - 1]) / (lower[k] - lower[k - 1])
                        } else {
                            (upper[k - 1] - y) / (upper[k - 1] - upper[k])
                        };
                        let frac = if frac.is_finite() {
                            frac.clamp(0.0, 1.0)
                        } else {
                            0.0
                        };
                        return best.max(levels[k - 1] + frac * (levels[k] - levels[k - 1]));
                    }
                }
                best
            }
            MembershipSpec::PiecewiseAnalytic { pieces } => pieces
                .iter()
                .filter(|p| p.from <= y && y <= p.to)
                .map(|p| p.eval(y))
                .fold(0.0, f64::max),
        }
    }

    /// Closure of `{y : μ(y) > 0}`.
    pub fn support(&self) -> Result<(f64, f64)> {
        self.level_set(0.0)
    }

    /// The level interval `{y : μ(y) ≥ λ}` (its closure for λ = 0).
    pub fn level_set(&self, lambda: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(FifError::OutOfDomain {
                value: lambda,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(match self {
            MembershipSpec::Crisp { value } => (*value, *value),
            MembershipSpec::Triangular { a, b, c } => (lerp(*a, *b, lambda), lerp(*c, *b, lambda)),
            MembershipSpec::Trapezoidal { a, b, c, d } => {
                (lerp(*a, *b, lambda), lerp(*d, *c, lambda))
            }
            MembershipSpec::TruncatedGaussian {
                center,
                width,
                support,
            } => {
                if lambda == 0.0 {
                    (support[0], support[1])
                } else {
                    let r = width * (-lambda.ln()).sqrt();
                    ((center - r).max(support[0]), (center + r).min(support[1]))
                }
            }
            MembershipSpec::QuadraticFlank {
                a,
                peak,
                b,
                curvature,
            } => {
                let t = match curvature {
                    Curvature::Convex => 1.0 - lambda.sqrt(),
                    Curvature::Concave => (1.0 - lambda).sqrt(),
                };
                (lerp(*peak, *a, t), lerp(*peak, *b, t))
            }
            MembershipSpec::LevelTable {
                levels,
                lower,
                upper,
            } => {
                let grid = LevelGrid::from_levels(levels.clone())?;
                FuzzyNumber::new(grid, lower.clone(), upper.clone())?.at_level(lambda)?
            }
            MembershipSpec::PiecewiseAnalytic { .. } => self.piecewise_level(lambda)?,
        })
    }

    /// Discretise onto `grid`.
    pub fn to_fuzzy(&self, grid: &Arc<LevelGrid>) -> Result<FuzzyNumber> {
        self.validate()?;
        if let MembershipSpec::LevelTable {
            levels,
            lower,
            upper,
        } = self
        {
            if levels.as_slice() == grid.levels() {
                return FuzzyNumber::new(grid.clone(), lower.clone(), upper.clone());
            }
        }
        let mut lower = Vec::with_capacity(grid.len());
        let mut upper = Vec::with_capacity(grid.len());
        for &l in grid.levels() {
            let (lo, hi) = self.level_set(l)?;
            lower.push(lo);
            upper.push(hi);
        }
        // numerically located levels may jitter by an ulp; enforce the
        // running envelope so nesting is exact
        if matches!(self, MembershipSpec::PiecewiseAnalytic { .. }) {
            for k in 1..lower.len() {
                lower[k] = lower[k].max(lower[k - 1]);
                upper[k] = upper[k].min(upper[k - 1]);
            }
        }
        FuzzyNumber::new(grid.clone(), lower, upper)
    }

    fn piecewise_samples(&self) -> Vec<(f64, f64)> {
        let MembershipSpec::PiecewiseAnalytic { pieces } = self else {
            return Vec::new();
        };
        let mut ys: Vec<f64> = pieces
            .iter()
            .flat_map(|p| {
                (0..=PIECE_SAMPLES)
                    .map(move |j| p.from + (p.to - p.from) * j as f64 / PIECE_SAMPLES as f64)
            })
            .collect();
        // one probe inside every gap between pieces, where μ = 0
        let mut spans: Vec<(f64, f64)> = pieces.iter().map(|p| (p.from, p.to)).collect();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        ys.extend(
            spans
                .windows(2)
                .filter(|w| w[0].1 < w[1].0)
                .map(|w| 0.5 * (w[0].1 + w[1].0)),
        );
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        ys.into_iter().map(|y| (y, self.membership(y))).collect()
    }

    fn piecewise_peak(&self) -> f64 {
        self.piecewise_samples()
            .iter()
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn piecewise_level(&self, lambda: f64) -> Result<(f64, f64)> {
        let samples = self.piecewise_samples();
        let peak = samples
            .iter()
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max);
        let level = lambda.min(peak);
        let inside = |mu: f64| if lambda == 0.0 { mu > 0.0 } else { mu >= level };
        let hits: Vec<usize> = (0..samples.len())
            .filter(|&j| inside(samples[j].1))
            .collect();
        let (&first, &last) = match (hits.first(), hits.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(FifError::NonNormal { peak }),
        };
        if hits.len() != last - first + 1 {
            return Err(FifError::NonConvexLevels { lambda });
        }
        // refine each boundary between the last outside and first inside sample
        let refine = |mut out: f64, mut inn: f64| {
            for _ in 0..200 {
                let mid = 0.5 * (out + inn);
                if mid == out || mid == inn {
                    break;
                }
                if inside(self.membership(mid)) {
                    inn = mid;
                } else {
                    out = mid;
                }
            }
            inn
        };
        let lo = if first == 0 {
            samples[0].0
        } else {
            refine(samples[first - 1].0, samples[first].0)
        };
        let hi = if last + 1 == samples.len() {
            samples[last].0
        } else {
            refine(samples[last + 1].0, samples[last].0)
        };
        Ok((lo, hi))
    }
}

/// `p + (q − p)·t`, exact at both ends and kept between `p` and `q`, so level
/// endpoints built from it stay nested to the last bit.
fn lerp(p: f64, q: f64, t: f64) -> f64 {
    if t == 1.0 {
        return q;
    }
    let v = p + (q - p) * t;
    if p <= q {
        v.clamp(p, q)
    } else {
        v.clamp(q, p)
    }
}

/// Discretise a membership specification onto `grid`.
pub fn from_membership(spec: &MembershipSpec, grid: &Arc<LevelGrid>) -> Result<FuzzyNumber> {
    spec.to_fuzzy(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<LevelGrid> {
        LevelGrid::uniform(100).unwrap()
    }

    #[test]
    fn triangular_levels() {
        let u = MembershipSpec::triangular(0.0, 1.0, 2.0)
            .to_fuzzy(&grid())
            .unwrap();
        for (k, l) in u.grid().levels().iter().enumerate() {
            assert!((u.lower()[k] - l).abs() < 1e-15);
            assert!((u.upper()[k] - (2.0 - l)).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_half_level() {
        let spec = MembershipSpec::TruncatedGaussian {
            center: 3.0,
            width: 1.0,
            support: [0.0, 6.0],
        };
        let (lo, hi) = spec.level_set(0.5).unwrap();
        let r = 2f64.ln().sqrt();
        assert!((lo - (3.0 - r)).abs() < 1e-14);
        assert!((hi - (3.0 + r)).abs() < 1e-14);
        assert_eq!(spec.level_set(0.0).unwrap(), (0.0, 6.0));
        // below e^{-9} the truncation binds
        assert_eq!(spec.level_set(1e-5).unwrap(), (0.0, 6.0));
    }

    #[test]
    fn level_table_on_same_grid_is_unchanged() {
        let g = LevelGrid::uniform(2).unwrap();
        let spec = MembershipSpec::LevelTable {
            levels: vec![0.0, 0.5, 1.0],
            lower: vec![-1.0, 0.0, 0.2],
            upper: vec![3.0, 1.0, 0.9],
        };
        let u = spec.to_fuzzy(&g).unwrap();
        assert_eq!(u.lower(), &[-1.0, 0.0, 0.2]);
        assert_eq!(u.upper(), &[3.0, 1.0, 0.9]);
    }

    #[test]
    fn level_table_resamples() {
        let spec = MembershipSpec::LevelTable {
            levels: vec![0.0, 1.0],
            lower: vec![0.0, 1.0],
            upper: vec![2.0, 1.0],
        };
        let u = spec.to_fuzzy(&LevelGrid::uniform(4).unwrap()).unwrap();
        assert_eq!(u.lower(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!((spec.membership(0.5) - 0.5).abs() < 1e-12);
        assert_eq!(spec.membership(1.0), 1.0);
        assert_eq!(spec.membership(3.0), 0.0);
    }

    #[test]
    fn concave_flank_matches_bell() {
        // 1 - 0.25 (y - 3)^2 on [1, 5]
        let spec = MembershipSpec::QuadraticFlank {
            a: 1.0,
            peak: 3.0,
            b: 5.0,
            curvature: Curvature::Concave,
        };
        for y in [1.0, 1.7, 3.0, 4.2, 5.0] {
            let expected = 1.0 - 0.25 * (y - 3.0f64).powi(2);
            assert!((spec.membership(y) - expected).abs() < 1e-14);
        }
        assert_eq!(spec.level_set(0.0).unwrap(), (1.0, 5.0));
    }

    #[test]
    fn convex_flank_matches_example_shape() {
        // (y-1)^2/9 on [1,4], (y-7)^2/9 on [4,7]
        let spec = MembershipSpec::QuadraticFlank {
            a: 1.0,
            peak: 4.0,
            b: 7.0,
            curvature: Curvature::Convex,
        };
        for y in [1.0, 2.5, 4.0, 5.5, 7.0] {
            let expected = if y <= 4.0 {
                (y - 1.0f64).powi(2)
            } else {
                (y - 7.0f64).powi(2)
            } / 9.0;
            assert!((spec.membership(y) - expected).abs() < 1e-14);
        }
        let (lo, hi) = spec.level_set(0.25).unwrap();
        assert!((lo - 2.5).abs() < 1e-14 && (hi - 5.5).abs() < 1e-14);
    }

    #[test]
    fn piecewise_triangle_matches_analytic() {
        let spec = MembershipSpec::PiecewiseAnalytic {
            pieces: vec![
                PolyPiece {
                    from: 0.0,
                    to: 1.0,
                    coeffs: vec![0.0, 1.0],
                },
                PolyPiece {
                    from: 1.0,
                    to: 2.0,
                    coeffs: vec![2.0, -1.0],
                },
            ],
        };
        let u = spec.to_fuzzy(&grid()).unwrap();
        let v = MembershipSpec::triangular(0.0, 1.0, 2.0)
            .to_fuzzy(&grid())
            .unwrap();
        assert!(u.d_infty(&v).unwrap() < 1e-9);
    }

    #[test]
    fn validation_errors() {
        let two_humps = MembershipSpec::PiecewiseAnalytic {
            pieces: vec![
                PolyPiece {
                    from: 0.0,
                    to: 1.0,
                    coeffs: vec![1.0],
                },
                PolyPiece {
                    from: 2.0,
                    to: 3.0,
                    coeffs: vec![1.0],
                },
            ],
        };
        assert!(matches!(
            two_humps.to_fuzzy(&grid()),
            Err(FifError::NonConvexLevels { .. })
        ));
        let flat = MembershipSpec::PiecewiseAnalytic {
            pieces: vec![PolyPiece {
                from: 0.0,
                to: 1.0,
                coeffs: vec![0.5],
            }],
        };
        assert!(matches!(flat.validate(), Err(FifError::NonNormal { .. })));
        let off_center = MembershipSpec::TruncatedGaussian {
            center: 8.0,
            width: 1.0,
            support: [0.0, 6.0],
        };
        assert!(matches!(
            off_center.validate(),
            Err(FifError::NonNormal { .. })
        ));
        let unbounded = MembershipSpec::TruncatedGaussian {
            center: 0.0,
            width: 1.0,
            support: [f64::NEG_INFINITY, f64::INFINITY],
        };
        assert!(matches!(
            unbounded.validate(),
            Err(FifError::UnboundedSupport)
        ));
        assert!(MembershipSpec::triangular(2.0, 1.0, 3.0)
            .validate()
            .is_err());
    }

    #[test]
    fn serde_tagging() {
        let spec: MembershipSpec =
            serde_json::from_str(r#"{"kind":"triangular","a":0,"b":1,"c":2}"#).unwrap();
        assert_eq!(spec, MembershipSpec::triangular(0.0, 1.0, 2.0));
        let flank: MembershipSpec = serde_json::from_str(
            r#"{"kind":"quadratic_flank","a":1,"peak":3,"b":5,"curvature":"concave"}"#,
        )
        .unwrap();
        assert!(matches!(
            flank,
            MembershipSpec::QuadraticFlank {
                curvature: Curvature::Concave,
                ..
            }
        ));
    }
}
