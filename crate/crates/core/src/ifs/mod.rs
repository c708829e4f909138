//! Construction of the IFS `{I × R_F; w_i = (l_i, F_i)}` from a fuzzy data
//! set, and its diagnostics.

mod diagnostics;
mod maps;
mod system;

pub use diagnostics::{
    admissible_theta_bound, check_matching, estimate_lipschitz, lipschitz_estimates,
    rho_from_estimates, verify_theta_contraction, ContractionReport, MatchingReport,
    MatchingResidual, ThetaMetricParams, LIPSCHITZ_SAFETY,
};
pub use maps::{build_maps, AffineMap, FuzzyDataSet};
pub use system::{IfsSystem, QRecipe, QTable};
