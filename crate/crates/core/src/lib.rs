//! Solvers for kinetic disk covering: stations at fixed positions choose
//! time-varying sensing radii so that every object moving along a straight
//! line over `t ∈ [0, 1]` stays covered, minimising the peak total disk area.
//!
//! The pieces, bottom up:
//!
//! - [`geometry`]: trajectories, squared-distance quadratics, float/exact scalars.
//! - [`static_cover`]: the fixed-time disk cover problem (candidates, nearest
//!   neighbour heuristic, exact branch-and-bound, brute force).
//! - [`kinetic`]: extending a fixed-time assignment through time by events.
//! - [`envelope`]: piecewise-quadratic timelines and their lower envelope.
//! - [`minmax`]: the iterative min-max solver and the fixed-grid NN baseline.
//! - [`registry`]: name-keyed registries of static backends and kinetic algorithms.
//! - [`instances`], [`result_file`], [`check`], [`render`], [`bench`]: I/O and tooling.

pub mod bench;
pub mod check;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod instances;
pub mod kinetic;
pub mod minmax;
pub mod registry;
pub mod render;
pub mod result_file;
pub mod static_cover;

pub use error::{KdcError, Result};
pub use geometry::{Arithmetic, MovingInstance, Point2, QuadraticPoly, Real, Trajectory};
