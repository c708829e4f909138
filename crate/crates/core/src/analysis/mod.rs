//! Hölder constants, their Monte-Carlo verification, empirical exponents and
//! the level-wise equivalence check between the fuzzy and scalar engines.

mod empirical;
mod equivalence;
mod hoelder;

pub use empirical::{estimate_exponent, EmpiricalHoelder};
pub use equivalence::{
    level_scalars, theorem4_harness, EquivalenceReport, LevelGap, LevelScalars, GAP_FLOOR,
};
pub use hoelder::{
    data_bound, hoelder_constants, verify_hoelder_bound, DeltaCase, HoelderReport, HoelderVerdict,
    WorstPair, DEFAULT_TAU_EQ, DELTA_EQ_TOL,
};
