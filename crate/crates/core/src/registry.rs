//! Name-keyed registries of fixed-time backends and kinetic algorithms.
//!
//! The command line picks both by name, so a new backend (an external MILP
//! solver, say) only needs registering here.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::geometry::MovingInstance;
use crate::minmax::{fixed_nn_baseline, solve_minmax_with, KineticResult, SolverConfig};
use crate::static_cover::{BranchAndBound, BruteForce, NearestNeighbor, SolverBackend};
use crate::{KdcError, Result};

/// A complete kinetic method: instance and configuration in, timeline out.
pub trait KineticAlgorithm: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, inst: &MovingInstance, config: &SolverConfig, registry: &Registry) -> Result<KineticResult>;
}

/// The iterative min-max loop over a named fixed-time backend.
pub struct MinMax {
    pub name: &'static str,
    pub backend: &'static str,
}

impl KineticAlgorithm for MinMax {
    fn name(&self) -> &'static str {
        self.name
    }

    fn solve(&self, inst: &MovingInstance, config: &SolverConfig, registry: &Registry) -> Result<KineticResult> {
        let backend = registry.backend(self.backend)?;
        let config = SolverConfig { static_backend: self.backend.to_string(), ..config.clone() };
        solve_minmax_with(inst, &config, backend.as_ref())
    }
}

/// Nearest neighbour at `k + 1` evenly spaced times, `k` from the config.
pub struct FixedNn;

impl KineticAlgorithm for FixedNn {
    fn name(&self) -> &'static str {
        "fixed_nn"
    }

    fn solve(&self, inst: &MovingInstance, config: &SolverConfig, _: &Registry) -> Result<KineticResult> {
        fixed_nn_baseline(inst, config.fixed_nn_k, config)
    }
}

#[derive(Clone, Default)]
pub struct Registry {
    backends: BTreeMap<&'static str, Arc<dyn SolverBackend>>,
    algorithms: BTreeMap<&'static str, Arc<dyn KineticAlgorithm>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Backends `exact`, `nn`, `brute`; algorithms `exact`, `nn`, `fixed_nn`.
    pub fn builtin() -> Self {
        let mut r = Registry::empty();
        r.register_backend(Arc::new(BranchAndBound::default()));
        r.register_backend(Arc::new(NearestNeighbor));
        r.register_backend(Arc::new(BruteForce));
        r.register_algorithm(Arc::new(MinMax { name: "exact", backend: "exact" }));
        r.register_algorithm(Arc::new(MinMax { name: "nn", backend: "nn" }));
        r.register_algorithm(Arc::new(FixedNn));
        r
    }

    /// Later registrations under the same name replace earlier ones.
    pub fn register_backend(&mut self, b: Arc<dyn SolverBackend>) {
        self.backends.insert(b.name(), b);
    }

    pub fn register_algorithm(&mut self, a: Arc<dyn KineticAlgorithm>) {
        self.algorithms.insert(a.name(), a);
    }

    pub fn backend(&self, name: &str) -> Result<Arc<dyn SolverBackend>> {
        self.backends.get(name).cloned().ok_or_else(|| KdcError::Unknown {
            kind: "static backend",
            name: name.to_string(),
            known: self.backend_names().join(", "),
        })
    }

    pub fn algorithm(&self, name: &str) -> Result<Arc<dyn KineticAlgorithm>> {
        self.algorithms.get(name).cloned().ok_or_else(|| KdcError::Unknown {
            kind: "algorithm",
            name: name.to_string(),
            known: self.algorithm_names().join(", "),
        })
    }

    pub fn backend_names(&self) -> Vec<&'static str> {
        self.backends.keys().copied().collect()
    }

    pub fn algorithm_names(&self) -> Vec<&'static str> {
        self.algorithms.keys().copied().collect()
    }

    /// Run the algorithm called `name`.
    pub fn solve(&self, name: &str, inst: &MovingInstance, config: &SolverConfig) -> Result<KineticResult> {
        self.algorithm(name)?.solve(inst, config, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let r = Registry::builtin();
        assert_eq!(r.backend_names(), vec!["brute", "exact", "nn"]);
        assert_eq!(r.algorithm_names(), vec!["exact", "fixed_nn", "nn"]);
        assert!(r.backend("exact").unwrap().certifies());
        assert!(!r.backend("nn").unwrap().certifies());
        let err = r.algorithm("gurobi").err().unwrap().to_string();
        assert!(err.contains("gurobi") && err.contains("fixed_nn"), "{err}");
    }
}
