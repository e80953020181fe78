//! Reversible binary reaction kinetics `A + B <-> C + D`.
//!
//! * [`kinetics`]: inputs, rate constants, equilibria, characteristic times.
//! * [`analytic`]: closed-form `X_C(t)`.
//! * [`conjugacy`]: the same flow as iterates of a one-step map.
//! * [`oracles`]: RK4 and stochastic simulation used to check the above.
//! * [`statmech`]: classical equilibrium cross-check.

pub mod analytic;
pub mod conjugacy;
pub mod error;
pub mod kinetics;
pub mod oracles;
pub mod statmech;

#[cfg(feature = "cli")]
pub mod cli;

pub use analytic::{solve_at, solve_series, Branch, BranchOffset, Trajectory};
pub use conjugacy::{ConjugacyContext, Flow};
pub use error::{KineticsError, Result};
pub use kinetics::{
    characteristic_time, equilibrium_concentration, equilibrium_ratio, fixed_points, rates_from_spec,
    Concentration, FixedPoints, RateParams, ReactionSpec,
};
