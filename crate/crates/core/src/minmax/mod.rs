//! The min-max kinetic solver and the fixed-grid nearest-neighbour baseline.

mod baseline;
mod config;
mod iterative;

pub use baseline::fixed_nn_baseline;
pub use config::{scheduled_gap, SolverConfig};
pub use iterative::{solve_minmax, solve_minmax_with, KineticResult, Stats, StopReason};

#[cfg(test)]
mod tests;
