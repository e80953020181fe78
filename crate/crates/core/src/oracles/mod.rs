//! Independent ground truth for the closed-form solver: a fixed-step RK4
//! integration of the kinetic equation and an exact finite-N stochastic
//! simulation of the gain/loss process.

mod gillespie;
mod rk4;

pub use gillespie::{
    gillespie_ensemble_mean, gillespie_sample, gillespie_simulate, initial_count, trial_seed, EnsembleMean,
    StochasticRun,
};
pub use rk4::{rk4_integrate, Rk4Run, RANGE_SLACK};
