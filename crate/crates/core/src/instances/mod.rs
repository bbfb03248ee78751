//! Random and degenerate instance generators, point-set ingestion for
//! benchmark-style instances, and the instance file format.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, which is
//! portable, so a seed reproduces the same instance on every platform.

mod generate;
mod io;
mod pointset;
mod pub_set;

use serde::{Deserialize, Serialize};

pub use generate::{gen_degenerate, gen_random, generate};
pub use io::{instance_digest, read_instance, write_instance, InstanceFile, InstanceMeta, INSTANCE_SCHEMA};
pub use pointset::parse_point_set;
pub use pub_set::{build_pub_instance, greedy_matching};

use crate::{KdcError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceClass {
    #[default]
    Random,
    SameSlope,
    SameStart,
    SameEnd,
    /// Built from a point set.
    Pub,
}

impl InstanceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceClass::Random => "random",
            InstanceClass::SameSlope => "same_slope",
            InstanceClass::SameStart => "same_start",
            InstanceClass::SameEnd => "same_end",
            InstanceClass::Pub => "pub",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "random" => Ok(InstanceClass::Random),
            "same_slope" => Ok(InstanceClass::SameSlope),
            "same_start" => Ok(InstanceClass::SameStart),
            "same_end" => Ok(InstanceClass::SameEnd),
            "pub" => Ok(InstanceClass::Pub),
            other => Err(KdcError::Unknown {
                kind: "instance class",
                name: other.to_string(),
                known: "random, same_slope, same_start, same_end, pub".into(),
            }),
        }
    }
}

impl std::fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub width: f64,
    pub height: f64,
    pub len_min: f64,
    pub len_max: f64,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub class: InstanceClass,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { width: 100.0, height: 100.0, len_min: 25.0, len_max: 50.0, n: 0, m: 1, seed: 0, class: InstanceClass::Random }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let diag = self.width.hypot(self.height);
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return Err(KdcError::Invalid(format!("canvas must be positive, got {} × {}", self.width, self.height)));
        }
        if !(self.len_min > 0.0 && self.len_min <= self.len_max && self.len_max <= diag) {
            return Err(KdcError::Invalid(format!(
                "need 0 < len_min ≤ len_max ≤ {diag}, got {} and {}",
                self.len_min, self.len_max
            )));
        }
        if self.n > 0 && self.m == 0 {
            return Err(KdcError::Invalid("objects need at least one station".into()));
        }
        if self.class == InstanceClass::Pub {
            return Err(KdcError::Invalid("pub instances are built from point sets".into()));
        }
        Ok(())
    }
}
