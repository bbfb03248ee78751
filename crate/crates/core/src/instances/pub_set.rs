use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{MovingInstance, Point2, Trajectory};
use crate::{KdcError, Result};

/// Diameter of the rescaled point set, in meters.
pub const PUB_DIAMETER: f64 = 100_000.0;

/// Greedy matching over `edges` in the given order, followed by rounds of
/// length-three augmentations (`a–u=v–b` becomes `a=u–v=b`).
/// Returns the matched pairs sorted.
pub fn greedy_matching(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut mate = vec![usize::MAX; n];
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
        if mate[u] == usize::MAX && mate[v] == usize::MAX && u != v {
            mate[u] = v;
            mate[v] = u;
        }
    }
    let free = |mate: &[usize], x: usize| mate[x] == usize::MAX;
    let mut grown = true;
    while grown {
        grown = false;
        for u in 0..n {
            let v = mate[u];
            if v == usize::MAX || v < u {
                continue;
            }
            let Some(&a) = adj[u].iter().find(|&&a| free(&mate, a)) else { continue };
            let Some(&b) = adj[v].iter().find(|&&b| b != a && free(&mate, b)) else { continue };
            mate[a] = u;
            mate[u] = a;
            mate[v] = b;
            mate[b] = v;
            grown = true;
        }
    }
    (0..n).filter(|&u| mate[u] != usize::MAX && u < mate[u]).map(|u| (u, mate[u])).collect()
}

fn diameter(points: &[Point2]) -> f64 {
    let mut d2 = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d2 = d2.max(p.dist_sq(q));
        }
    }
    d2.sqrt()
}

fn jitter(rng: &mut ChaCha8Rng, p: Point2, radius: f64) -> Point2 {
    let r = radius * rng.gen::<f64>().sqrt();
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    Point2::new(p.x + r * th.cos(), p.y + r * th.sin())
}

/// Turn a point set into an instance: rescale to a 100 km diameter, draw `m`
/// stations from the points, match the remaining points along pairs whose
/// distance lies in `[len_min, len_max]`, and perturb every trajectory end by
/// at most `1e-6` of the diameter.
pub fn build_pub_instance(points: &[Point2], m: usize, seed: u64, len_min: f64, len_max: f64) -> Result<MovingInstance> {
    if points.len() < m {
        return Err(KdcError::Invalid(format!("{} points cannot host {m} stations", points.len())));
    }
    if !(len_min >= 0.0 && len_min <= len_max) {
        return Err(KdcError::Invalid(format!("bad length range [{len_min}, {len_max}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_x = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let min_y = points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let diam = diameter(points);
    let k = if diam > 0.0 { PUB_DIAMETER / diam } else { 1.0 };
    let scaled: Vec<Point2> = points.iter().map(|p| Point2::new((p.x - min_x) * k, (p.y - min_y) * k)).collect();

    let picked = index::sample(&mut rng, scaled.len(), m).into_vec();
    let mut is_station = vec![false; scaled.len()];
    for &i in &picked {
        is_station[i] = true;
    }
    let stations: Vec<Point2> = picked.iter().map(|&i| scaled[i]).collect();
    let rest: Vec<Point2> = (0..scaled.len()).filter(|&i| !is_station[i]).map(|i| scaled[i]).collect();

    let mut edges = Vec::new();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let d = rest[i].dist(&rest[j]);
            if d >= len_min && d <= len_max {
                edges.push((i, j));
            }
        }
    }
    edges.shuffle(&mut rng);
    let pairs = greedy_matching(rest.len(), &edges);
    let radius = 1e-6 * PUB_DIAMETER;
    let objects = pairs
        .into_iter()
        .map(|(i, j)| {
            let (a, b) = if rng.gen::<bool>() { (rest[i], rest[j]) } else { (rest[j], rest[i]) };
            Trajectory::new(jitter(&mut rng, a, radius), jitter(&mut rng, b, radius))
        })
        .collect();
    Ok(MovingInstance::new(stations, objects))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_four_matches_twice() {
        // only consecutive points are admissible, whatever order greedy sees
        let pts: Vec<Point2> = (0..4).map(|i| Point2::new(i as f64, 0.0)).collect();
        for seed in 0..20 {
            let inst = build_pub_instance(&pts, 0, seed, 30_000.0, 40_000.0).unwrap();
            assert_eq!(inst.n(), 2, "seed {seed}");
            for o in &inst.objects {
                assert!((o.length() - 100_000.0 / 3.0).abs() < 1.0);
            }
        }
        assert_eq!(greedy_matching(4, &[(1, 2), (0, 1), (2, 3)]), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn edge_cases() {
        let pts: Vec<Point2> = (0..10).map(|i| Point2::new(i as f64, (i * i) as f64)).collect();
        let a = build_pub_instance(&pts, 3, 11, 10_000.0, 60_000.0).unwrap();
        assert_eq!(a, build_pub_instance(&pts, 3, 11, 10_000.0, 60_000.0).unwrap());
        assert_eq!(a.m(), 3);
        assert!(a.n() <= 3);
        for s in &a.stations {
            assert!(s.x >= 0.0 && s.y >= 0.0 && s.x <= PUB_DIAMETER && s.y <= PUB_DIAMETER);
        }
        let none = build_pub_instance(&pts, 2, 1, 200_000.0, 300_000.0).unwrap();
        assert_eq!(none.n(), 0);
        assert!(build_pub_instance(&pts, 11, 1, 0.0, 1.0).is_err());
    }
}
