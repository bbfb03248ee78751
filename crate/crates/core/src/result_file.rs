//! The result file: the full timeline plus bounds and statistics, written
//! so that `check` can verify a solve without re-running it.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::envelope::{SolutionTimeline, TimelineSegment};
use crate::geometry::{Arithmetic, QuadraticPoly, Real};
use crate::minmax::{KineticResult, SolverConfig, Stats, StopReason};
use crate::{KdcError, Result};

pub const RESULT_SCHEMA: &str = "kdc-result/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub t_start: String,
    pub t_end: String,
    /// Station of every object.
    pub assignment: Vec<usize>,
    /// Farthest object of every station, `null` for idle stations.
    pub supports: Vec<Option<usize>>,
    /// `[a, b, c]` of `a t² + b t + c`, the summed squared radii.
    pub objective: [String; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub version: String,
    pub instance_id: String,
    /// [`crate::instances::instance_digest`] of the solved instance.
    pub instance_digest: String,
    pub algorithm: String,
    pub config: SolverConfig,
    /// Peak of the summed squared radii; `upper_area` is `π` times that.
    pub upper: String,
    pub lower: String,
    pub upper_area: f64,
    pub lower_area: f64,
    /// `null` when nothing is certified.
    pub gap: Option<f64>,
    pub peak_time: String,
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub timed_out: bool,
    pub stats: Stats,
    pub segments: Vec<SegmentRecord>,
}

impl ResultFile {
    pub fn new(result: &KineticResult, algorithm: &str, config: &SolverConfig, instance_id: &str, digest: &str) -> Self {
        let segments = result
            .timeline
            .segments
            .iter()
            .map(|s| SegmentRecord {
                t_start: s.t_start.to_string(),
                t_end: s.t_end.to_string(),
                assignment: s.assignment.to_vec(),
                supports: s.supports.to_vec(),
                objective: [s.objective.a.to_string(), s.objective.b.to_string(), s.objective.c.to_string()],
            })
            .collect();
        ResultFile {
            version: RESULT_SCHEMA.into(),
            instance_id: instance_id.into(),
            instance_digest: digest.into(),
            algorithm: algorithm.into(),
            config: config.clone(),
            upper: result.upper.to_string(),
            lower: result.lower.to_string(),
            upper_area: result.upper_area(),
            lower_area: result.lower_area(),
            gap: result.gap.is_finite().then_some(result.gap),
            peak_time: result.timeline.peak_time.to_string(),
            iterations: result.iterations,
            stop_reason: result.stop_reason,
            timed_out: result.timed_out,
            stats: result.stats.clone(),
            segments,
        }
    }

    pub fn mode(&self) -> Arithmetic {
        self.config.arithmetic()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        match v.get("version").and_then(|x| x.as_str()) {
            Some(RESULT_SCHEMA) => Ok(serde_json::from_value(v)?),
            Some(other) => Err(KdcError::Schema(format!("unknown result version {other:?}, expected {RESULT_SCHEMA:?}"))),
            None => Err(KdcError::Schema("result file has no version".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes") + "\n"
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn upper_value(&self) -> Result<Real> {
        Real::parse(&self.upper, self.mode())
    }

    pub fn lower_value(&self) -> Result<Real> {
        Real::parse(&self.lower, self.mode())
    }

    /// Segments with parsed numbers, in file order and without any checks.
    pub fn raw_segments(&self) -> Result<Vec<TimelineSegment>> {
        let mode = self.mode();
        self.segments
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let num = |x: &String| {
                    Real::parse(x, mode).map_err(|e| KdcError::Parse(format!("segment {i}: {e}")))
                };
                Ok(TimelineSegment {
                    t_start: num(&s.t_start)?,
                    t_end: num(&s.t_end)?,
                    assignment: Arc::new(s.assignment.clone()),
                    supports: Arc::new(s.supports.clone()),
                    objective: QuadraticPoly::new(num(&s.objective[0])?, num(&s.objective[1])?, num(&s.objective[2])?),
                })
            })
            .collect()
    }

    /// The stored timeline; fails unless the segments tile `[0, 1]`.
    pub fn timeline(&self) -> Result<SolutionTimeline> {
        SolutionTimeline::new(self.raw_segments()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{MovingInstance, Point2, Trajectory};
    use crate::minmax::solve_minmax;

    #[test]
    fn round_trip_both_modes() {
        let inst = MovingInstance::new(
            vec![Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)],
            vec![Trajectory::new(Point2::new(2.0, 0.0), Point2::new(8.0, 0.0)), Trajectory::new(Point2::new(1.0, 3.0), Point2::new(9.0, -2.5))],
        );
        for exact in [false, true] {
            let config = SolverConfig { exact_arithmetic: exact, ..SolverConfig::default() };
            let r = solve_minmax(&inst, &config).unwrap();
            let f = ResultFile::new(&r, "exact", &config, "two", "d");
            let back = ResultFile::parse(&f.to_json()).unwrap();
            assert_eq!(back, f);
            let tl = back.timeline().unwrap();
            assert_eq!(tl.segments.len(), r.timeline.segments.len());
            for (a, b) in tl.segments.iter().zip(&r.timeline.segments) {
                assert_eq!(a.objective, b.objective);
                assert_eq!(a.t_start.cmp_strict(&b.t_start), std::cmp::Ordering::Equal);
            }
            assert_eq!(back.upper_value().unwrap().cmp_strict(&r.upper), std::cmp::Ordering::Equal);
        }
    }

    #[test]
    fn unknown_version() {
        assert!(matches!(ResultFile::parse(r#"{"version":"kdc-result/0"}"#), Err(KdcError::Schema(_))));
    }
}
