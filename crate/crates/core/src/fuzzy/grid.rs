use std::sync::Arc;

use crate::error::{FifError, Result};

/// Discretisation of the membership axis: λ_0 = 0 < λ_1 < … < λ_M = 1.
///
/// Every [`FuzzyNumber`](super::FuzzyNumber) taking part in one computation
/// shares a single grid, held behind an `Arc`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelGrid {
    levels: Vec<f64>,
}

impl LevelGrid {
    /// Uniform grid with `m + 1` levels `k / m`.
    pub fn uniform(m: usize) -> Result<Arc<Self>> {
        if m == 0 {
            return Err(FifError::InvalidGrid("need at least two levels".into()));
        }
        let levels = (0..=m).map(|k| k as f64 / m as f64).collect();
        Ok(Arc::new(LevelGrid { levels }))
    }

    pub fn from_levels(levels: Vec<f64>) -> Result<Arc<Self>> {
        if levels.len() < 2 {
            return Err(FifError::InvalidGrid("need at least two levels".into()));
        }
        if levels[0] != 0.0 || *levels.last().unwrap() != 1.0 {
            return Err(FifError::InvalidGrid(
                "levels must start at 0 and end at 1".into(),
            ));
        }
        if levels.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(FifError::InvalidGrid(
                "levels must be strictly increasing".into(),
            ));
        }
        Ok(Arc::new(LevelGrid { levels }))
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Bracketing index `k` and weight `t` with λ = (1 − t)·λ_k + t·λ_{k+1}.
    ///
    /// On-grid queries return `t == 0` (or the last index with `t == 0`).
    pub fn locate(&self, lambda: f64) -> Result<(usize, f64)> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(FifError::OutOfDomain {
                value: lambda,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let last = self.levels.len() - 1;
        match self.levels.binary_search_by(|l| l.total_cmp(&lambda)) {
            Ok(k) => Ok((k, 0.0)),
            Err(k) => {
                let k = k.clamp(1, last) - 1;
                let (lo, hi) = (self.levels[k], self.levels[k + 1]);
                Ok((k, (lambda - lo) / (hi - lo)))
            }
        }
    }

    pub(crate) fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}
