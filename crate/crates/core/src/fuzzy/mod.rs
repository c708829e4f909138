//! Fuzzy numbers as discretised families of nested level intervals.

mod grid;
mod membership;
mod number;

pub use grid::LevelGrid;
pub use membership::{from_membership, Curvature, MembershipSpec, PolyPiece, NORMALITY_TOL};
pub use number::{sup_distance, FuzzyNumber};
