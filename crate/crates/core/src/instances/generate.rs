use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GenParams, InstanceClass};
use crate::geometry::{MovingInstance, Point2, Trajectory};
use crate::{KdcError, Result};

/// Draws per object before giving up.
const RETRY_CAP: usize = 100_000;

struct Sampler<'a> {
    p: &'a GenParams,
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    fn point(&mut self) -> Point2 {
        Point2::new(self.rng.gen_range(0.0..=self.p.width), self.rng.gen_range(0.0..=self.p.height))
    }

    fn angle(&mut self) -> f64 {
        self.rng.gen_range(0.0..TAU)
    }

    fn length(&mut self) -> f64 {
        self.rng.gen_range(self.p.len_min..=self.p.len_max)
    }

    fn inside(&self, q: &Point2) -> bool {
        (0.0..=self.p.width).contains(&q.x) && (0.0..=self.p.height).contains(&q.y)
    }

    /// Both ends inside the canvas and the stored length within bounds.
    fn accept(&self, a: Point2, b: Point2) -> Option<Trajectory> {
        let len = a.dist(&b);
        (self.inside(&a) && self.inside(&b) && len >= self.p.len_min && len <= self.p.len_max)
            .then(|| Trajectory::new(a, b))
    }

    fn retry(&mut self, what: &str, mut draw: impl FnMut(&mut Self) -> Option<Trajectory>) -> Result<Trajectory> {
        for _ in 0..RETRY_CAP {
            if let Some(t) = draw(self) {
                return Ok(t);
            }
        }
        Err(KdcError::Generation(format!("no {what} trajectory fits the canvas after {RETRY_CAP} draws")))
    }
}

fn offset(from: Point2, angle: f64, len: f64) -> Point2 {
    Point2::new(from.x + len * angle.cos(), from.y + len * angle.sin())
}

/// Generate per `params.class`.
pub fn generate(params: &GenParams) -> Result<MovingInstance> {
    match params.class {
        InstanceClass::Random => gen_random(params),
        _ => gen_degenerate(params),
    }
}

/// Uniform stations; uniform starts, directions and lengths, redrawn until the
/// end point lands in the canvas.
pub fn gen_random(params: &GenParams) -> Result<MovingInstance> {
    params.validate()?;
    let mut s = Sampler { p: params, rng: ChaCha8Rng::seed_from_u64(params.seed) };
    let stations: Vec<Point2> = (0..params.m).map(|_| s.point()).collect();
    let mut objects = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        objects.push(s.retry("random", |s| {
            let a = s.point();
            let (th, len) = (s.angle(), s.length());
            s.accept(a, offset(a, th, len))
        })?);
    }
    Ok(MovingInstance::new(stations, objects))
}

/// Instances where every trajectory shares its direction, start or end point.
pub fn gen_degenerate(params: &GenParams) -> Result<MovingInstance> {
    params.validate()?;
    if params.class == InstanceClass::Random {
        return Err(KdcError::Invalid("gen_degenerate needs a degenerate class".into()));
    }
    let mut s = Sampler { p: params, rng: ChaCha8Rng::seed_from_u64(params.seed) };
    let stations: Vec<Point2> = (0..params.m).map(|_| s.point()).collect();
    let shared_angle = s.angle();
    let shared_point = s.point();
    let name = params.class.as_str();
    let mut objects = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        let t = match params.class {
            InstanceClass::SameSlope => s.retry(name, |s| {
                let a = s.point();
                let len = s.length();
                s.accept(a, offset(a, shared_angle, len))
            }),
            InstanceClass::SameStart => s.retry(name, |s| {
                let (th, len) = (s.angle(), s.length());
                s.accept(shared_point, offset(shared_point, th, len))
            }),
            InstanceClass::SameEnd => s.retry(name, |s| {
                let (th, len) = (s.angle(), s.length());
                s.accept(offset(shared_point, th, len), shared_point)
            }),
            InstanceClass::Random | InstanceClass::Pub => unreachable!("checked above"),
        }?;
        objects.push(t);
    }
    Ok(MovingInstance::new(stations, objects))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, m: usize, seed: u64, class: InstanceClass) -> GenParams {
        GenParams { n, m, seed, class, ..GenParams::default() }
    }

    #[test]
    fn basics() {
        let inst = gen_random(&params(0, 1, 3, InstanceClass::Random)).unwrap();
        assert_eq!((inst.m(), inst.n()), (1, 0));
        let a = gen_random(&params(40, 5, 9, InstanceClass::Random)).unwrap();
        let b = gen_random(&params(40, 5, 9, InstanceClass::Random)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_random(&params(40, 5, 10, InstanceClass::Random)).unwrap());
    }

    #[test]
    fn lengths_and_canvas() {
        let inst = gen_random(&params(1000, 1, 1, InstanceClass::Random)).unwrap();
        for o in &inst.objects {
            let len = o.length();
            assert!((25.0..=50.0).contains(&len), "{len}");
            for q in [o.start, o.end] {
                assert!((0.0..=100.0).contains(&q.x) && (0.0..=100.0).contains(&q.y));
            }
        }
    }

    #[test]
    fn degenerate_structure() {
        let inst = gen_degenerate(&params(3, 2, 5, InstanceClass::SameStart)).unwrap();
        assert!(inst.objects.iter().all(|o| o.start == inst.objects[0].start));
        let inst = gen_degenerate(&params(50, 2, 5, InstanceClass::SameEnd)).unwrap();
        assert!(inst.objects.iter().all(|o| o.end == inst.objects[0].end));
        assert_eq!(inst, gen_degenerate(&params(50, 2, 5, InstanceClass::SameEnd)).unwrap());
        let inst = gen_degenerate(&params(100, 2, 5, InstanceClass::SameSlope)).unwrap();
        let dir = |o: &Trajectory| {
            let l = o.length();
            ((o.end.x - o.start.x) / l, (o.end.y - o.start.y) / l)
        };
        let d0 = dir(&inst.objects[0]);
        for o in &inst.objects {
            let d = dir(o);
            assert!((d.0 - d0.0).abs() < 1e-12 && (d.1 - d0.1).abs() < 1e-12);
        }
        assert!(gen_degenerate(&params(3, 1, 0, InstanceClass::Random)).is_err());
    }

    #[test]
    fn bad_params() {
        let p = GenParams { len_min: 60.0, len_max: 50.0, ..GenParams::default() };
        assert!(gen_random(&p).is_err());
        let p = GenParams { n: 3, m: 0, ..GenParams::default() };
        assert!(gen_random(&p).is_err());
        // only the exact diagonal would fit
        let p = GenParams { width: 10.0, height: 10.0, len_min: 14.142, len_max: 14.142, n: 1, ..GenParams::default() };
        assert!(matches!(gen_random(&p), Err(KdcError::Generation(_))));
    }
}
