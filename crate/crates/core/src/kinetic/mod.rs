//! Carrying a fixed-time assignment through time.
//!
//! While the assignment is fixed, a station's radius follows whichever of
//! its objects is farthest (its *support*). The support changes where two
//! distance quadratics cross; an object can also be handed to another
//! station where doing so starts to pay off. Both kinds of event are roots
//! of quadratics, found pairwise and cached per station.

mod dedup;
mod events;
mod extend;
mod feasibility;

use serde::{Deserialize, Serialize};

pub use dedup::dedup_improve;
pub use events::{next_handover, next_support_change, resolve_tie};
pub use extend::{extend, extend_with, Extension, KineticContext, StopAt};
pub use feasibility::{check_feasible, FeasibilityReport};

use crate::geometry::{EventTime, Real};

/// Station of each object, indexed by object.
pub type Assignment = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn of(t_from: &Real, t_to: &Real) -> Direction {
        if t_to.cmp_strict(t_from) == std::cmp::Ordering::Less {
            Direction::Backward
        } else {
            Direction::Forward
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// The three optional improvements of the extension step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flags {
    /// Reassign a support object that already sits in another station's disk.
    pub no_dup: bool,
    /// Watch for pairwise handovers while extending.
    pub imp_ext: bool,
    /// Extend a new solution only until it stops beating the incumbent.
    pub part_ext: bool,
}

impl Flags {
    pub const ALL: Flags = Flags { no_dup: true, imp_ext: true, part_ext: true };

    /// Parse a comma list such as `no_dup,imp_ext`; `none` and `all` are accepted.
    pub fn parse(text: &str) -> crate::Result<Flags> {
        let mut f = Flags::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.to_ascii_lowercase().replace('-', "_").as_str() {
                "none" => {}
                "all" => f = Flags::ALL,
                "no_dup" | "nodup" => f.no_dup = true,
                "imp_ext" | "impext" => f.imp_ext = true,
                "part_ext" | "partext" => f.part_ext = true,
                _ => {
                    return Err(crate::KdcError::Unknown {
                        kind: "flag",
                        name: item.to_string(),
                        known: "no_dup, imp_ext, part_ext, all, none".into(),
                    })
                }
            }
        }
        Ok(f)
    }
}

impl std::fmt::Display for Flags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<&str> = [(self.no_dup, "no_dup"), (self.imp_ext, "imp_ext"), (self.part_ext, "part_ext")]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, n)| *n)
            .collect();
        if names.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", names.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EventKind {
    SupportChange { station: usize, old_support: usize, new_support: usize },
    Handover { from_station: usize, to_station: usize, object: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct KineticEvent {
    pub time: EventTime,
    pub kind: EventKind,
}
