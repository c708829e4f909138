use crate::error::{FifError, Result};

/// `n + 1` equispaced points on `[x_0, x_n]` with every knot inserted (or
/// snapped onto, when a grid point already lies within `1e-12` of it).
pub fn evaluation_grid(knots: &[f64], n: usize) -> Result<Vec<f64>> {
    if n < 1 || knots.len() < 2 {
        return Err(FifError::InvalidParameters(
            "evaluation grid needs n >= 1".into(),
        ));
    }
    let (x0, xn) = (knots[0], *knots.last().unwrap());
    let span = xn - x0;
    let mut xs: Vec<f64> = (0..=n)
        .map(|k| match k {
            0 => x0,
            k if k == n => xn,
            k => x0 + span * (k as f64 / n as f64),
        })
        .collect();
    for &knot in knots {
        let j = xs.partition_point(|x| *x < knot);
        let snap = |idx: usize| idx < xs.len() && (xs[idx] - knot).abs() <= 1e-12 * span;
        if snap(j) {
            xs[j] = knot;
        } else if j > 0 && snap(j - 1) {
            xs[j - 1] = knot;
        } else {
            xs.insert(j, knot);
        }
    }
    Ok(xs)
}

/// Where `l_i⁻¹(x_k)` lands on the grid: between `index` and `index + 1` at
/// fraction `weight`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Preimage {
    pub interval: usize,
    pub index: usize,
    pub weight: f64,
}

/// Locate `y` in the sorted grid `xs`.
pub(crate) fn bracket(xs: &[f64], y: f64) -> (usize, f64) {
    let last = xs.len() - 1;
    let j = xs.partition_point(|x| *x <= y).clamp(1, last) - 1;
    if xs[j] == y {
        return (j, 0.0);
    }
    if xs[j + 1] == y {
        return (j + 1, 0.0);
    }
    let t = ((y - xs[j]) / (xs[j + 1] - xs[j])).clamp(0.0, 1.0);
    (j, t)
}
