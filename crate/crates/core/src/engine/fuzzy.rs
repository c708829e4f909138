use serde::Serialize;

use super::grid::{bracket, evaluation_grid, Preimage};
use super::par_map;
use crate::error::{FifError, Result};
use crate::fuzzy::{sup_distance, FuzzyNumber};
use crate::ifs::{check_matching, IfsSystem};

#[derive(Debug, Clone)]
pub struct RbOptions {
    /// Target bound on `D(φ_m, f)`.
    pub tol: f64,
    pub max_depth: usize,
    /// Number of grid cells `N` on `[x_0, x_n]`.
    pub grid_points: usize,
    /// Unrolling depth of the functional equation for point queries.
    pub eval_depth: usize,
    /// Refuse to iterate unless the matching condition holds.
    pub enforce_matching: bool,
    pub matching_tol: f64,
}

impl Default for RbOptions {
    fn default() -> Self {
        RbOptions {
            tol: 1e-8,
            max_depth: 1000,
            grid_points: 1024,
            eval_depth: 40,
            enforce_matching: true,
            matching_tol: 1e-9,
        }
    }
}

/// Sampled fixed point `f` of the RB operator
/// `(Tφ)(x) = s_i·φ(l_i⁻¹(x)) ⊕ q_i(x)` for `x ∈ I_i`.
#[derive(Debug, Clone)]
pub struct FuzzyFif {
    sys: IfsSystem,
    xs: Vec<f64>,
    values: Vec<FuzzyNumber>,
    depth: usize,
    residual: f64,
    history: Vec<f64>,
    tol: f64,
    eval_depth: usize,
}

/// λ-slice of a fuzzy-valued function: `x ↦ f(x)⁻(λ)` and `x ↦ f(x)⁺(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelCurvePair {
    pub lambda: f64,
    pub xs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

pub(crate) fn preimages(sys: &IfsSystem, xs: &[f64]) -> Result<Vec<Preimage>> {
    xs.iter()
        .map(|&x| {
            let interval = sys.interval_of(x)?;
            let (index, weight) = bracket(xs, sys.maps()[interval].invert(x));
            Ok(Preimage {
                interval,
                index,
                weight,
            })
        })
        .collect()
}

fn interpolate(values: &[FuzzyNumber], index: usize, weight: f64) -> Result<FuzzyNumber> {
    if weight == 0.0 {
        Ok(values[index].clone())
    } else {
        FuzzyNumber::combine(1.0 - weight, &values[index], weight, &values[index + 1])
    }
}

/// Fixed point starting from the piecewise-linear interpolant of the data on
/// the default evaluation grid.
pub fn iterate_rb(sys: &IfsSystem, opts: &RbOptions) -> Result<FuzzyFif> {
    let xs = evaluation_grid(sys.knots(), opts.grid_points)?;
    let initial = xs
        .iter()
        .map(|&x| sys.data().interpolant(x))
        .collect::<Result<Vec<_>>>()?;
    iterate_rb_from(sys, xs, initial, opts)
}

/// Iterate `T` from the samples `initial` on the grid `xs` until the
/// a-posteriori bound `s/(1−s)·D(φ_m, φ_{m−1}) ≤ tol` holds.
pub fn iterate_rb_from(
    sys: &IfsSystem,
    xs: Vec<f64>,
    initial: Vec<FuzzyNumber>,
    opts: &RbOptions,
) -> Result<FuzzyFif> {
    if !(opts.tol > 0.0) {
        return Err(FifError::InvalidParameters("tol must be positive".into()));
    }
    if xs.len() != initial.len() {
        return Err(FifError::LengthMismatch {
            left: xs.len(),
            right: initial.len(),
        });
    }
    let (x0, xn) = sys.domain();
    if xs.first() != Some(&x0) || xs.last() != Some(&xn) || xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(FifError::InvalidParameters(
            "evaluation grid must increase strictly from x_0 to x_n".into(),
        ));
    }
    if opts.enforce_matching {
        let report = check_matching(sys, opts.matching_tol)?;
        if !report.passed {
            return Err(FifError::MatchingNotVerified(format!(
                "worst endpoint residual {:e} exceeds {:e}",
                report.worst(),
                opts.matching_tol
            )));
        }
    }

    let pre = preimages(sys, &xs)?;
    let qs = par_map(xs.len(), |k| sys.q(pre[k].interval, xs[k]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let s = sys.max_scale();
    let target = if s > 0.0 {
        opts.tol * (1.0 - s) / s
    } else {
        f64::INFINITY
    };

    let mut phi = initial;
    let mut history = Vec::new();
    for depth in 1..=opts.max_depth {
        let next = par_map(xs.len(), |k| {
            let p = pre[k];
            let prev = interpolate(&phi, p.index, p.weight)?;
            prev.scale(sys.scales()[p.interval]).add(&qs[k])
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let displacement = sup_distance(&next, &phi)?;
        history.push(displacement);
        phi = next;
        if displacement <= target || displacement == 0.0 {
            return Ok(FuzzyFif {
                sys: sys.clone(),
                xs,
                values: phi,
                depth,
                residual: displacement,
                history,
                tol: opts.tol,
                eval_depth: opts.eval_depth,
            });
        }
    }
    Err(FifError::NoConvergence {
        depth: opts.max_depth,
        residual: history.last().copied().unwrap_or(f64::NAN),
        target,
    })
}

impl FuzzyFif {
    pub fn system(&self) -> &IfsSystem {
        &self.sys
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[FuzzyNumber] {
        &self.values
    }

    /// Number of RB sweeps performed.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Last displacement `D(φ_m, φ_{m−1})`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Every displacement, in sweep order.
    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Certified bound `s/(1−s)·D(φ_m, φ_{m−1})` on the distance to the
    /// fixed point over the grid.
    pub fn certified_error(&self) -> f64 {
        let s = self.sys.max_scale();
        if s == 0.0 {
            0.0
        } else {
            s / (1.0 - s) * self.residual
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.sys.domain();
        if (lo..=hi).contains(&x) {
            Ok(())
        } else {
            Err(FifError::OutOfDomain { value: x, lo, hi })
        }
    }

    /// Grid samples interpolated level-wise at `x`.
    pub fn sample_at(&self, x: f64) -> Result<FuzzyNumber> {
        self.check_domain(x)?;
        let (j, t) = bracket(&self.xs, x);
        interpolate(&self.values, j, t)
    }

    /// Point query by unrolling `f(x) = s_i·f(l_i⁻¹(x)) ⊕ q_i(x)` along the
    /// address of `x`, closing the recursion with the stored samples.
    pub fn eval(&self, x: f64) -> Result<FuzzyNumber> {
        self.check_domain(x)?;
        let mut acc = FuzzyNumber::crisp(self.sys.grid().clone(), 0.0);
        let mut factor = 1.0;
        let mut y = x;
        for _ in 0..self.eval_depth {
            let i = self.sys.interval_of(y)?;
            acc = acc.add(&self.sys.q(i, y)?.scale(factor))?;
            factor *= self.sys.scales()[i];
            y = self.sys.maps()[i].invert(y);
            if factor < 1e-16 {
                break;
            }
        }
        if factor == 0.0 {
            return Ok(acc);
        }
        acc.add(&self.sample_at(y)?.scale(factor))
    }

    pub fn extract_level(&self, lambda: f64) -> Result<LevelCurvePair> {
        let mut lower = Vec::with_capacity(self.xs.len());
        let mut upper = Vec::with_capacity(self.xs.len());
        for v in &self.values {
            let (lo, hi) = v.at_level(lambda)?;
            lower.push(lo);
            upper.push(hi);
        }
        Ok(LevelCurvePair {
            lambda,
            xs: self.xs.clone(),
            lower,
            upper,
        })
    }

    /// Largest `d_∞(f(l_i(x)), F_i(x, f(x)))` over every map `i`.
    ///
    /// The x-points are the preimages `l_i⁻¹(y)` of up to `points` grid
    /// abscissae `y ∈ I_i` (evenly strided, both ends included), so `f(l_i(x))`
    /// is a stored sample and `f(x)` is read off the grid the same way the
    /// sweep reads it. Off-grid images would measure interpolation error of a
    /// rough function instead.
    pub fn self_affinity_residual(&self, points: usize) -> Result<f64> {
        let knots = self.sys.knots();
        let mut worst = 0.0_f64;
        for i in 0..self.sys.intervals() {
            let first = self.xs.partition_point(|x| *x < knots[i]);
            let last = self.xs.partition_point(|x| *x <= knots[i + 1]) - 1;
            let cells = last - first;
            let stride = (cells / points.max(1)).max(1);
            let mut picks: Vec<usize> = (first..=last).step_by(stride).collect();
            if picks.last() != Some(&last) {
                picks.push(last);
            }
            let map = &self.sys.maps()[i];
            let residuals = par_map(picks.len(), |p| -> Result<f64> {
                let j = picks[p];
                let x = map.invert(self.xs[j]);
                let mapped = self.sys.apply_f(i, x, &self.sample_at(x)?)?;
                self.values[j].d_infty(&mapped)
            });
            for r in residuals {
                worst = worst.max(r?);
            }
        }
        Ok(worst)
    }

    /// `max_i d_∞(f(x_i), u_i)` using point queries.
    pub fn interpolation_error(&self) -> Result<f64> {
        let data = self.sys.data();
        data.knots()
            .iter()
            .zip(data.values())
            .try_fold(0.0_f64, |m, (&x, u)| Ok(m.max(self.eval(x)?.d_infty(u)?)))
    }
}
