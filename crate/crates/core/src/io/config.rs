use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{RbOptions, ScalarOptions};
use crate::error::{FifError, Result};
use crate::fuzzy::{LevelGrid, MembershipSpec};
use crate::ifs::{FuzzyDataSet, IfsSystem, QRecipe, QTable};

/// `q_i` given as fuzzy values at increasing abscissae over interval `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTableSpec {
    pub xs: Vec<f64>,
    pub values: Vec<MembershipSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QRecipeSpec {
    #[default]
    Example,
    Table {
        tables: Vec<QTableSpec>,
    },
}

/// A complete, self-contained run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub knots: Vec<f64>,
    pub values: Vec<MembershipSpec>,
    pub scales: Vec<f64>,
    /// Level count `M`; the level grid has `M + 1` points.
    #[serde(default = "defaults::levels")]
    pub levels: usize,
    /// Evaluation grid cells `N`.
    #[serde(default = "defaults::grid")]
    pub grid: usize,
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[serde(default = "defaults::max_depth")]
    pub max_depth: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub q_recipe: QRecipeSpec,
    /// Levels exported by `build` and `levels`.
    #[serde(default = "defaults::lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "defaults::tau_eq")]
    pub tau_eq: f64,
    #[serde(default = "defaults::matching_tol")]
    pub matching_tol: f64,
    #[serde(default = "defaults::lipschitz_samples")]
    pub lipschitz_samples: usize,
    #[serde(default = "defaults::rho_safety")]
    pub rho_safety: f64,
    #[serde(default = "defaults::hoelder_pairs")]
    pub hoelder_pairs: usize,
    #[serde(default = "defaults::theta_trials")]
    pub theta_trials: usize,
    #[serde(default = "defaults::exponent_scales")]
    pub exponent_scales: usize,
    /// Iterate even when the matching condition fails.
    #[serde(default)]
    pub force: bool,
}

mod defaults {
    use std::path::PathBuf;

    pub fn levels() -> usize {
        100
    }
    pub fn grid() -> usize {
        1024
    }
    pub fn tol() -> f64 {
        1e-8
    }
    pub fn max_depth() -> usize {
        1000
    }
    pub fn output_dir() -> PathBuf {
        PathBuf::from("out")
    }
    pub fn lambdas() -> Vec<f64> {
        vec![0.0, 0.5, 1.0]
    }
    pub fn tau_eq() -> f64 {
        crate::analysis::DEFAULT_TAU_EQ
    }
    pub fn matching_tol() -> f64 {
        1e-9
    }
    pub fn lipschitz_samples() -> usize {
        512
    }
    pub fn rho_safety() -> f64 {
        crate::ifs::LIPSCHITZ_SAFETY
    }
    pub fn hoelder_pairs() -> usize {
        10_000
    }
    pub fn theta_trials() -> usize {
        1000
    }
    pub fn exponent_scales() -> usize {
        6
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FifError::ConfigParse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| FifError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Structural checks that need no numerics.
    pub fn check_schema(&self) -> Result<()> {
        let n = self.knots.len().saturating_sub(1);
        if self.knots.len() < 3 {
            return Err(FifError::SchemaViolation(format!(
                "need at least 3 knots, got {}",
                self.knots.len()
            )));
        }
        if self.values.len() != n + 1 || self.scales.len() != n {
            return Err(FifError::SchemaViolation(format!(
                "{} knots need {} values and {} scales, got {} and {}",
                n + 1,
                n + 1,
                n,
                self.values.len(),
                self.scales.len()
            )));
        }
        if let Some(i) = self.scales.iter().position(|s| !(0.0..1.0).contains(s)) {
            return Err(FifError::ScaleOutOfRange {
                index: i + 1,
                value: self.scales[i],
            });
        }
        if !(self.tol > 0.0) {
            return Err(FifError::SchemaViolation(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.levels < 2 {
            return Err(FifError::SchemaViolation(format!(
                "levels must be >= 2, got {}",
                self.levels
            )));
        }
        if self.grid < 2 * n {
            return Err(FifError::SchemaViolation(format!(
                "grid must be >= 2n = {}, got {}",
                2 * n,
                self.grid
            )));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(FifError::SchemaViolation(format!(
                "lambda {l} outside [0, 1]"
            )));
        }
        if let QRecipeSpec::Table { tables } = &self.q_recipe {
            if tables.len() != n {
                return Err(FifError::SchemaViolation(format!(
                    "{n} intervals need {n} q tables, got {}",
                    tables.len()
                )));
            }
        }
        Ok(())
    }

    pub fn level_grid(&self) -> Result<std::sync::Arc<LevelGrid>> {
        LevelGrid::uniform(self.levels)
    }

    pub fn build_system(&self) -> Result<IfsSystem> {
        self.check_schema()?;
        let grid = self.level_grid()?;
        let values = self
            .values
            .iter()
            .map(|spec| spec.to_fuzzy(&grid))
            .collect::<Result<Vec<_>>>()?;
        let data = FuzzyDataSet::new(self.knots.clone(), values)?;
        let recipe = match &self.q_recipe {
            QRecipeSpec::Example => QRecipe::Example,
            QRecipeSpec::Table { tables } => QRecipe::Table(
                tables
                    .iter()
                    .map(|t| {
                        let values = t
                            .values
                            .iter()
                            .map(|spec| spec.to_fuzzy(&grid))
                            .collect::<Result<Vec<_>>>()?;
                        QTable::new(t.xs.clone(), values)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        IfsSystem::new(data, self.scales.clone(), recipe)
    }

    pub fn rb_options(&self) -> RbOptions {
        RbOptions {
            tol: self.tol,
            max_depth: self.max_depth,
            grid_points: self.grid,
            enforce_matching: !self.force,
            matching_tol: self.matching_tol,
            ..RbOptions::default()
        }
    }

    pub fn scalar_options(&self) -> ScalarOptions {
        ScalarOptions {
            tol: self.tol,
            max_depth: self.max_depth,
            grid_points: self.grid,
            matching_tol: self.matching_tol,
            enforce_matching: !self.force,
        }
    }
}
