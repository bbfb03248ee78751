use std::cmp::Ordering;

use super::{Assignment, Direction, EventKind, KineticEvent};
use crate::geometry::{DistancePolys, MovingInstance, QuadraticPoly, Real, EPS};

/// Sign of `h` just past `t` in direction `dir`: the value, then the slope
/// along `dir`, then the curvature. Float terms within `EPS · scale` count as 0.
pub(crate) fn right_sign(h: &QuadraticPoly, t: &Real, dir: Direction, scale: f64) -> i32 {
    let v = h.eval(t).sign_scaled(scale);
    if v != 0 {
        return v;
    }
    let d = h.derivative_at(t).sign_scaled(scale) * dir.sign();
    if d != 0 {
        return d;
    }
    h.a.sign_scaled(scale)
}

/// `f` against `g` just past `t` in direction `dir`.
pub(crate) fn cmp_after(f: &QuadraticPoly, g: &QuadraticPoly, t: &Real, dir: Direction) -> Ordering {
    let scale = f.magnitude().max(g.magnitude()).max(1.0);
    right_sign(&f.sub(g), t, dir, scale).cmp(&0)
}

/// The member that is farthest just past `t`; on a full tie the lowest index.
pub(crate) fn directional_argmax(polys: &DistancePolys, s: usize, members: &[usize], t: &Real, dir: Direction) -> Option<usize> {
    let mut best: Option<usize> = None;
    for &j in members {
        best = match best {
            None => Some(j),
            Some(b) => {
                let o = cmp_after(polys.get(s, j), polys.get(s, b), t, dir);
                if o == Ordering::Greater || (o == Ordering::Equal && j < b) {
                    Some(j)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

/// Is `x` strictly past `t` in direction `dir`? Float times must clear `EPS`.
pub(crate) fn is_past(x: &Real, t: &Real, dir: Direction) -> bool {
    if x.is_exact() && t.is_exact() {
        let o = x.cmp_strict(t);
        return o == if dir == Direction::Forward { Ordering::Greater } else { Ordering::Less };
    }
    (x.to_f64() - t.to_f64()) * dir.sign() as f64 > EPS
}

/// Roots of `h` in the half-open window from `t_from` (excluded) to `t_to`,
/// ordered along `dir`.
pub(crate) fn roots_ahead(h: &QuadraticPoly, t_from: &Real, t_to: &Real, dir: Direction, scale: f64) -> Vec<Real> {
    let (lo, hi) = match dir {
        Direction::Forward => (t_from, t_to),
        Direction::Backward => (t_to, t_from),
    };
    let mut r: Vec<Real> = h.roots_in_scaled(lo, hi, scale).points().iter().filter(|x| is_past(x, t_from, dir)).cloned().collect();
    if dir == Direction::Backward {
        r.reverse();
    }
    r
}

/// `a` comes no later than `b` along `dir`.
pub(crate) fn sooner(a: &Real, b: &Real, dir: Direction) -> bool {
    let o = a.cmp_strict(b);
    match dir {
        Direction::Forward => o == Ordering::Less,
        Direction::Backward => o == Ordering::Greater,
    }
}

/// Earliest time after `t_from` where some other member overtakes `support`.
pub(crate) fn support_change_in(
    polys: &DistancePolys,
    s: usize,
    members: &[usize],
    support: usize,
    t_from: &Real,
    t_to: &Real,
    dir: Direction,
) -> Option<Real> {
    let fp = polys.get(s, support);
    let mut best: Option<Real> = None;
    for &q in members {
        if q == support {
            continue;
        }
        let fq = polys.get(s, q);
        let h = fq.sub(fp);
        let scale = fq.magnitude().max(fp.magnitude()).max(1.0);
        for tau in roots_ahead(&h, t_from, t_to, dir, scale) {
            if best.as_ref().is_some_and(|b| !sooner(&tau, b, dir)) {
                break;
            }
            // a genuine crossing, not a touch
            if right_sign(&h, &tau, dir, scale) > 0 {
                best = Some(tau);
                break;
            }
        }
    }
    best
}

/// Earliest time after `t_from` where handing `s1`'s support over to `s2`
/// starts to lower the total of the two squared radii.
#[allow(clippy::too_many_arguments)]
pub(crate) fn handover_in(
    polys: &DistancePolys,
    s1: usize,
    members1: &[usize],
    b: usize,
    s2: usize,
    support2: Option<usize>,
    t_from: &Real,
    t_to: &Real,
    dir: Direction,
) -> Option<Real> {
    let zero = QuadraticPoly::zero(polys.mode);
    let f1b = polys.get(s1, b);
    let f2b = polys.get(s2, b);
    let f2d = support2.map_or(&zero, |d| polys.get(s2, d));
    let rest: Vec<usize> = members1.iter().copied().filter(|&j| j != b).collect();
    let base = f2b.sub(f1b).sub(f2d);
    let scale = [f1b, f2b, f2d].iter().map(|p| p.magnitude()).fold(1.0, f64::max);

    let mut best: Option<Real> = None;
    let consider = |g: QuadraticPoly, best: &mut Option<Real>| {
        for tau in roots_ahead(&g, t_from, t_to, dir, scale) {
            if best.as_ref().is_some_and(|x| !sooner(&tau, x, dir)) {
                break;
            }
            if handover_pays_off(polys, s1, &rest, b, s2, f2d, &tau, dir, scale) {
                *best = Some(tau);
                break;
            }
        }
    };
    consider(base.clone(), &mut best);
    for &a in &rest {
        consider(base.add(polys.get(s1, a)), &mut best);
    }
    best
}

/// At `tau` the two costs are equal and the handover is strictly cheaper right after.
#[allow(clippy::too_many_arguments)]
fn handover_pays_off(
    polys: &DistancePolys,
    s1: usize,
    rest: &[usize],
    b: usize,
    s2: usize,
    f2d: &QuadraticPoly,
    tau: &Real,
    dir: Direction,
    scale: f64,
) -> bool {
    let zero = QuadraticPoly::zero(polys.mode);
    let new1 = directional_argmax(polys, s1, rest, tau, dir).map_or(&zero, |a| polys.get(s1, a));
    let f2b = polys.get(s2, b);
    let new2 = if cmp_after(f2b, f2d, tau, dir) == Ordering::Greater { f2b } else { f2d };
    let diff = new1.add(new2).sub(polys.get(s1, b)).sub(f2d);
    diff.eval(tau).sign_scaled(scale) == 0 && right_sign(&diff, tau, dir, scale) < 0
}

pub(crate) fn members_of(assignment: &Assignment, s: usize) -> Vec<usize> {
    assignment.iter().enumerate().filter(|(_, &st)| st == s).map(|(j, _)| j).collect()
}

/// Next support change of `station` between `t_from` and `t_to` (either
/// order; backward when `t_to < t_from`).
pub fn next_support_change(
    station: usize,
    assignment: &Assignment,
    t_from: &Real,
    t_to: &Real,
    inst: &MovingInstance,
) -> Option<KineticEvent> {
    let polys = DistancePolys::new(inst, t_from.mode());
    let dir = Direction::of(t_from, t_to);
    let members = members_of(assignment, station);
    let old = directional_argmax(&polys, station, &members, t_from, dir)?;
    let tau = support_change_in(&polys, station, &members, old, t_from, t_to, dir)?;
    let new = directional_argmax(&polys, station, &members, &tau, dir)?;
    Some(KineticEvent { time: tau, kind: EventKind::SupportChange { station, old_support: old, new_support: new } })
}

/// Among objects equidistant from `station` at `t`, the one moving away
/// fastest; equal speeds fall back to acceleration, then the lower index.
pub fn resolve_tie(station: usize, tied: &[usize], t: &Real, inst: &MovingInstance) -> usize {
    assert!(!tied.is_empty(), "resolve_tie needs at least one object");
    let polys = DistancePolys::new(inst, t.mode());
    let mut best = tied[0];
    for &j in &tied[1..] {
        let (fj, fb) = (polys.get(station, j), polys.get(station, best));
        let scale = fj.magnitude().max(fb.magnitude()).max(1.0);
        let h = fj.sub(fb);
        let d = h.derivative_at(t).sign_scaled(scale);
        let o = if d != 0 { d } else { h.a.sign_scaled(scale) };
        if o > 0 || (o == 0 && j < best) {
            best = j;
        }
    }
    best
}

/// Next time handing `from`'s support object to `to` becomes strictly cheaper.
pub fn next_handover(
    (from, to): (usize, usize),
    assignment: &Assignment,
    t_from: &Real,
    t_to: &Real,
    inst: &MovingInstance,
) -> Option<KineticEvent> {
    let polys = DistancePolys::new(inst, t_from.mode());
    let dir = Direction::of(t_from, t_to);
    let m1 = members_of(assignment, from);
    let m2 = members_of(assignment, to);
    let b = directional_argmax(&polys, from, &m1, t_from, dir)?;
    let d = directional_argmax(&polys, to, &m2, t_from, dir);
    let tau = handover_in(&polys, from, &m1, b, to, d, t_from, t_to, dir)?;
    Some(KineticEvent { time: tau, kind: EventKind::Handover { from_station: from, to_station: to, object: b } })
}
