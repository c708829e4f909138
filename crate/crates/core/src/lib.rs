//! Fuzzy-valued fractal interpolation.
//!
//! Fuzzy numbers are stored as nested level intervals on a shared
//! [`LevelGrid`]. Data `(x_i, u_i)` and vertical scales `s_i` define an IFS
//! whose attractor is the graph of a continuous fuzzy-valued interpolant,
//! computed here by iterating the Read–Bajraktarević operator on a grid.
//!
//! ```
//! use fuzzy_fif::{FuzzyDataSet, IfsSystem, LevelGrid, MembershipSpec, QRecipe, RbOptions};
//!
//! let grid = LevelGrid::uniform(20).unwrap();
//! let values = [(0.0, 1.0, 2.0), (1.0, 2.0, 3.0), (0.0, 1.0, 2.0)]
//!     .iter()
//!     .map(|&(a, b, c)| MembershipSpec::triangular(a, b, c).to_fuzzy(&grid).unwrap())
//!     .collect();
//! let data = FuzzyDataSet::new(vec![0.0, 0.5, 1.0], values).unwrap();
//! let sys = IfsSystem::new(data, vec![0.3, 0.3], QRecipe::Example).unwrap();
//! let fif = fuzzy_fif::iterate_rb(&sys, &RbOptions::default()).unwrap();
//! assert!(fif.interpolation_error().unwrap() < 1e-7);
//! ```

// `!(a < b)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod engine;
pub mod error;
pub mod fuzzy;
pub mod ifs;
pub mod io;

pub use engine::{iterate_rb, scalar_fif, FuzzyFif, RbOptions, ScalarFif, ScalarOptions};
pub use error::{FifError, Result};
pub use fuzzy::{FuzzyNumber, LevelGrid, MembershipSpec};
pub use ifs::{FuzzyDataSet, IfsSystem, QRecipe};
