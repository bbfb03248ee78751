use serde::{Deserialize, Serialize};

use crate::kinetic::Flags;
use crate::{KdcError, Result};

/// Knobs of the iterative solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Registered name of the fixed-time backend (`exact`, `nn`, `brute`).
    pub static_backend: String,
    pub flags: Flags,
    pub target_gap: f64,
    /// Gap used for fixed-time solves while the overall gap is still large.
    pub coarse_gap: f64,
    /// Overall gap below which fixed-time solves switch to `target_gap`.
    pub tighten_threshold: f64,
    /// Seconds.
    pub time_limit: f64,
    pub exact_arithmetic: bool,
    pub seed: u64,
    /// Safety cap on improvement rounds.
    pub max_iterations: usize,
    /// Interval count of the fixed-grid baseline.
    pub fixed_nn_k: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            static_backend: "exact".into(),
            flags: Flags::default(),
            target_gap: 1e-4,
            coarse_gap: 0.01,
            tighten_threshold: 0.015,
            time_limit: 600.0,
            exact_arithmetic: false,
            seed: 0,
            max_iterations: 100_000,
            fixed_nn_k: 10,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(KdcError::Invalid(m));
        if !(self.target_gap >= 0.0 && self.target_gap <= self.coarse_gap) {
            return bad(format!("need 0 ≤ target_gap ≤ coarse_gap, got {} and {}", self.target_gap, self.coarse_gap));
        }
        if !(self.tighten_threshold > self.target_gap) {
            return bad(format!("tighten threshold {} must exceed target gap {}", self.tighten_threshold, self.target_gap));
        }
        if !(self.time_limit > 0.0) {
            return bad(format!("time limit must be positive, got {}", self.time_limit));
        }
        if self.fixed_nn_k == 0 {
            return bad("fixed_nn needs k ≥ 1".into());
        }
        Ok(())
    }

    pub fn arithmetic(&self) -> crate::Arithmetic {
        if self.exact_arithmetic {
            crate::Arithmetic::Exact
        } else {
            crate::Arithmetic::Float
        }
    }
}

/// Gap to ask of the next fixed-time solve: coarse while the overall gap is
/// above the threshold, the target afterwards.
pub fn scheduled_gap(current_gap: f64, config: &SolverConfig) -> f64 {
    if current_gap > config.tighten_threshold {
        config.coarse_gap
    } else {
        config.target_gap
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_schedule() {
        let c = SolverConfig::default();
        assert_eq!(scheduled_gap(f64::INFINITY, &c), 0.01);
        assert_eq!(scheduled_gap(0.014, &c), 0.0001);
        assert_eq!(scheduled_gap(0.5, &c), 0.01);
        assert_eq!(scheduled_gap(0.015, &c), 0.0001);
    }

    #[test]
    fn validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let c = SolverConfig { target_gap: 0.1, ..SolverConfig::default() };
        assert!(c.validate().is_err());
        let c = SolverConfig { tighten_threshold: 1e-5, ..SolverConfig::default() };
        assert!(c.validate().is_err());
        let c = SolverConfig { time_limit: 0.0, ..SolverConfig::default() };
        assert!(c.validate().is_err());
    }
}
