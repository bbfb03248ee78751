//! Per-station view of a candidate set: the candidates of one station form a
//! chain of growing disks, and a cover picks one level of each chain.

use std::cmp::Ordering;

use super::CandidateSet;
use crate::geometry::Real;
use crate::{KdcError, Result};

pub(crate) const NO_RANK: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Levels {
    pub n: usize,
    pub m: usize,
    /// `r2[s][ℓ]`; level 0 is the empty disk.
    pub r2: Vec<Vec<Real>>,
    /// Candidate index of level `ℓ ≥ 1`.
    pub cand: Vec<Vec<usize>>,
    /// First level of station `s` covering object `j`, or [`NO_RANK`].
    pub rank: Vec<Vec<u32>>,
    /// Objects whose rank at `s` is exactly `ℓ`.
    pub members: Vec<Vec<Vec<usize>>>,
}

impl Levels {
    pub fn build(set: &CandidateSet) -> Result<Levels> {
        let (n, m) = (set.n_objects, set.m_stations);
        let bad = |msg: String| Err(KdcError::MalformedCandidates(msg));
        let mode = set.mode();
        let mut per_station: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (i, c) in set.candidates.iter().enumerate() {
            if c.station_index >= m {
                return bad(format!("candidate {i} names station {} of {m}", c.station_index));
            }
            if c.radius_sq.mode() != mode {
                return bad(format!("candidate {i} mixes arithmetic modes"));
            }
            if c.radius_sq.sign() < 0 {
                return bad(format!("candidate {i} has a negative radius"));
            }
            if c.covered.iter().any(|&j| j >= n) {
                return bad(format!("candidate {i} covers an object outside 0..{n}"));
            }
            if c.covered.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("candidate {i}: covered list not strictly ascending"));
            }
            per_station[c.station_index].push(i);
        }

        let mut r2 = Vec::with_capacity(m);
        let mut cand = Vec::with_capacity(m);
        let mut rank = vec![vec![NO_RANK; n]; m];
        let mut members = Vec::with_capacity(m);
        for (s, list) in per_station.iter_mut().enumerate() {
            list.sort_by(|&a, &b| {
                let (ca, cb) = (&set.candidates[a], &set.candidates[b]);
                ca.radius_sq.cmp_strict(&cb.radius_sq).then(ca.covered.len().cmp(&cb.covered.len())).then(a.cmp(&b))
            });
            let mut rs = vec![Real::zero(mode)];
            let mut cs = vec![usize::MAX];
            let mut mem: Vec<Vec<usize>> = vec![Vec::new()];
            let mut prev: Option<usize> = None;
            for &i in list.iter() {
                let c = &set.candidates[i];
                if let Some(p) = prev {
                    let pc = &set.candidates[p];
                    // a duplicate, or the same objects in a bigger disk
                    if pc.covered == c.covered {
                        continue;
                    }
                    if !is_subset(&pc.covered, &c.covered) {
                        return bad(format!(
                            "station {s}: candidates {p} and {i} are not nested"
                        ));
                    }
                    if pc.radius_sq.cmp_strict(&c.radius_sq) == Ordering::Equal {
                        return bad(format!("station {s}: candidates {p} and {i} share a radius but cover different objects"));
                    }
                }
                let level = rs.len() as u32;
                let mut fresh = Vec::new();
                for &j in &c.covered {
                    if rank[s][j] == NO_RANK {
                        rank[s][j] = level;
                        fresh.push(j);
                    }
                }
                rs.push(c.radius_sq.clone());
                cs.push(i);
                mem.push(fresh);
                prev = Some(i);
            }
            r2.push(rs);
            cand.push(cs);
            members.push(mem);
        }
        for j in 0..n {
            if (0..m).all(|s| rank[s][j] == NO_RANK) {
                return bad(format!("object {j} is not covered by any candidate"));
            }
        }
        Ok(Levels { n, m, r2, cand, rank, members })
    }

    pub fn levels(&self, s: usize) -> usize {
        self.r2[s].len() - 1
    }

    pub fn covers(&self, s: usize, level: u32, j: usize) -> bool {
        self.rank[s][j] <= level
    }

    /// Candidate indices of a per-station level vector, ascending.
    pub fn selection(&self, level: &[u32]) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.m)
            .filter(|&s| level[s] > 0)
            .map(|s| self.cand[s][level[s] as usize])
            .collect();
        out.sort_unstable();
        out
    }

    /// Per-station levels of a selection (highest chosen level per station).
    pub fn levels_of(&self, selected: &[usize]) -> Vec<u32> {
        let mut level = vec![0u32; self.m];
        for s in 0..self.m {
            for (l, &c) in self.cand[s].iter().enumerate().skip(1) {
                if selected.contains(&c) {
                    level[s] = level[s].max(l as u32);
                }
            }
        }
        level
    }


    /// Lower every station to the smallest level that still covers the
    /// objects nobody else covers. Stations are visited in index order.
    pub fn trim(&self, level: &mut [u32]) {
        let mut count = vec![0u32; self.n];
        for j in 0..self.n {
            count[j] = (0..self.m).filter(|&s| self.covers(s, level[s], j)).count() as u32;
        }
        for s in 0..self.m {
            if level[s] == 0 {
                continue;
            }
            let mut need = 0u32;
            for j in 0..self.n {
                if self.covers(s, level[s], j) && count[j] == 1 {
                    need = need.max(self.rank[s][j]);
                }
            }
            if need < level[s] {
                for j in 0..self.n {
                    if self.rank[s][j] > need && self.rank[s][j] <= level[s] {
                        count[j] -= 1;
                    }
                }
                level[s] = need;
            }
        }
    }

    pub fn cost(&self, level: &[u32]) -> Real {
        let mode = self.r2.first().map_or(crate::geometry::Arithmetic::Float, |r| r[0].mode());
        (0..self.m).fold(Real::zero(mode), |acc, s| acc + &self.r2[s][level[s] as usize])
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}
