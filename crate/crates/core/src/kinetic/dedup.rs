use std::cmp::Ordering;

use super::events::{cmp_after, directional_argmax, members_of};
use super::{Assignment, Direction};
use crate::geometry::{DistancePolys, MovingInstance, QuadraticPoly, Real};

/// One reassignment made by the duplicate-coverage pass: `(object, from, to)`.
pub(crate) type Move = (usize, usize, usize);

/// Hand support objects that already lie inside another station's disk to
/// that station, as long as the giving station's disk shrinks.
///
/// `members` and `support` are kept in sync with `assignment`. Comparisons
/// are made just past `t` along `dir`, so the result stays valid for a
/// while afterwards.
pub(crate) fn dedup_in_place(
    polys: &DistancePolys,
    assignment: &mut [usize],
    members: &mut [Vec<usize>],
    support: &mut [Option<usize>],
    t: &Real,
    dir: Direction,
) -> Vec<Move> {
    let m = members.len();
    let zero = QuadraticPoly::zero(polys.mode);
    let mut moves = Vec::new();
    let mut changed = true;
    while changed {
        changed = false;
        for s1 in 0..m {
            let Some(top) = support[s1] else { continue };
            let f_top = polys.get(s1, top);
            let tied: Vec<usize> = members[s1]
                .iter()
                .copied()
                .filter(|&j| cmp_after(polys.get(s1, j), f_top, t, dir) == Ordering::Equal)
                .collect();
            let mut targets = Vec::with_capacity(tied.len());
            for &b in &tied {
                let to = (0..m).find(|&s2| {
                    s2 != s1
                        && support[s2].is_some_and(|d| cmp_after(polys.get(s2, b), polys.get(s2, d), t, dir) != Ordering::Greater)
                });
                match to {
                    Some(s2) => targets.push((b, s2)),
                    None => break,
                }
            }
            if targets.len() < tied.len() {
                continue;
            }
            let rest: Vec<usize> = members[s1].iter().copied().filter(|j| !tied.contains(j)).collect();
            let next = directional_argmax(polys, s1, &rest, t, dir);
            let f_next = next.map_or(&zero, |a| polys.get(s1, a));
            if cmp_after(f_top, f_next, t, dir) != Ordering::Greater {
                continue;
            }
            for (b, s2) in targets {
                assignment[b] = s2;
                members[s2].push(b);
                moves.push((b, s1, s2));
            }
            members[s1] = rest;
            support[s1] = next;
            for s2 in 0..m {
                if s2 != s1 {
                    support[s2] = directional_argmax(polys, s2, &members[s2], t, dir);
                }
            }
            changed = true;
        }
    }
    moves
}

/// Remove duplicate coverage at time `t`; the cost at `t` never goes up.
pub fn dedup_improve(assignment: &Assignment, t: &Real, inst: &MovingInstance) -> Assignment {
    let polys = DistancePolys::new(inst, t.mode());
    let dir = Direction::Forward;
    let mut a = assignment.clone();
    let mut members: Vec<Vec<usize>> = (0..inst.m()).map(|s| members_of(assignment, s)).collect();
    let mut support: Vec<Option<usize>> =
        (0..inst.m()).map(|s| directional_argmax(&polys, s, &members[s], t, dir)).collect();
    dedup_in_place(&polys, &mut a, &mut members, &mut support, t, dir);
    a
}
