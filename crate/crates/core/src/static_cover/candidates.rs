use std::cmp::Ordering;

use crate::geometry::{Arithmetic, DistancePolys, MovingInstance, Real};

/// A disk centred on a station whose boundary passes through `support_index`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateDisk {
    pub station_index: usize,
    pub support_index: usize,
    pub radius_sq: Real,
    /// Objects inside the disk, ascending.
    pub covered: Vec<usize>,
}

/// Candidate disks for one time instant, station-major and ascending in
/// radius within a station.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    pub n_objects: usize,
    pub m_stations: usize,
    pub candidates: Vec<CandidateDisk>,
}

impl CandidateSet {
    pub fn mode(&self) -> Arithmetic {
        self.candidates.first().map_or(Arithmetic::Float, |c| c.radius_sq.mode())
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Candidates of `inst` at time `t` (the arithmetic mode follows `t`).
pub fn enumerate_candidates(inst: &MovingInstance, t: &Real) -> CandidateSet {
    let polys = DistancePolys::new(inst, t.mode());
    enumerate_candidates_at(&polys.at(t))
}

/// Candidates from a squared-distance table `dist_sq[station][object]`.
///
/// Objects at the same distance from a station share one candidate, supported
/// by the lowest index among them, so a station yields at most `n` disks.
pub fn enumerate_candidates_at(dist_sq: &[Vec<Real>]) -> CandidateSet {
    let m = dist_sq.len();
    let n = dist_sq.first().map_or(0, Vec::len);
    let mut candidates = Vec::new();
    let mut inside = vec![false; n];
    for (s, row) in dist_sq.iter().enumerate() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| row[a].cmp_strict(&row[b]).then(a.cmp(&b)));
        inside.iter_mut().for_each(|x| *x = false);
        let mut i = 0;
        while i < n {
            let first = order[i];
            let mut k = i;
            while k < n && row[order[k]].cmp_strict(&row[first]) == Ordering::Equal {
                inside[order[k]] = true;
                k += 1;
            }
            candidates.push(CandidateDisk {
                station_index: s,
                support_index: first,
                radius_sq: row[first].clone(),
                covered: (0..n).filter(|&j| inside[j]).collect(),
            });
            i = k;
        }
    }
    CandidateSet { n_objects: n, m_stations: m, candidates }
}
