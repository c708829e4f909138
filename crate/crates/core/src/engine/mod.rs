//! Fixed points of the Read–Bajraktarević operator: the fuzzy-valued FIF and
//! an independent real-valued engine used as its oracle.

mod fuzzy;
mod grid;
mod scalar;

pub use fuzzy::{iterate_rb, iterate_rb_from, FuzzyFif, LevelCurvePair, RbOptions};
pub use grid::evaluation_grid;
pub use scalar::{scalar_fif, ScalarFif, ScalarOptions};

/// Order-preserving map over `0..n`, parallel when the `parallel` feature is
/// on. Each element is computed independently, so results do not depend on
/// the worker count.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
