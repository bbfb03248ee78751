use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{GenParams, InstanceClass};
use crate::geometry::{MovingInstance, Point2, Trajectory};
use crate::{KdcError, Result};

pub const INSTANCE_SCHEMA: &str = "kdc-instance/1";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub id: String,
    pub class: InstanceClass,
    pub seed: u64,
    /// Generator settings, when generated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GenParams>,
    /// Free-form remarks (e.g. a point set that yielded no trajectories).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

type Xy = [String; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ObjectRec {
    start: Xy,
    end: Xy,
}

/// On-disk form: JSON with coordinates as shortest round-trip decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    version: String,
    canvas: [f64; 2],
    stations: Vec<Xy>,
    objects: Vec<ObjectRec>,
    metadata: InstanceMeta,
}

fn fmt_pt(p: &Point2) -> Xy {
    [format!("{}", p.x), format!("{}", p.y)]
}

fn parse_pt(xy: &Xy, what: &str) -> Result<Point2> {
    let num = |s: &String| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| KdcError::Parse(format!("{what}: bad coordinate {s:?}")))
    };
    Ok(Point2::new(num(&xy[0])?, num(&xy[1])?))
}

impl InstanceFile {
    pub fn new(inst: &MovingInstance, meta: InstanceMeta) -> Self {
        let canvas = match &meta.params {
            Some(p) => [p.width, p.height],
            None => {
                let all = inst.stations.iter().chain(inst.objects.iter().flat_map(|o| [&o.start, &o.end]));
                all.fold([0.0f64, 0.0f64], |c, p| [c[0].max(p.x), c[1].max(p.y)])
            }
        };
        InstanceFile {
            version: INSTANCE_SCHEMA.to_string(),
            canvas,
            stations: inst.stations.iter().map(fmt_pt).collect(),
            objects: inst.objects.iter().map(|o| ObjectRec { start: fmt_pt(&o.start), end: fmt_pt(&o.end) }).collect(),
            metadata: meta,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        match v.get("version").and_then(|x| x.as_str()) {
            Some(INSTANCE_SCHEMA) => {}
            Some(other) => return Err(KdcError::Schema(format!("unknown instance version {other:?}, expected {INSTANCE_SCHEMA:?}"))),
            None => return Err(KdcError::Schema("instance file has no version".into())),
        }
        Ok(serde_json::from_value(v)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    pub fn instance(&self) -> Result<MovingInstance> {
        let stations = self
            .stations
            .iter()
            .enumerate()
            .map(|(i, p)| parse_pt(p, &format!("station {i}")))
            .collect::<Result<Vec<_>>>()?;
        let objects = self
            .objects
            .iter()
            .enumerate()
            .map(|(j, o)| {
                let w = format!("object {j}");
                Ok(Trajectory::new(parse_pt(&o.start, &w)?, parse_pt(&o.end, &w)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let inst = MovingInstance::new(stations, objects);
        inst.validate()?;
        Ok(inst)
    }

    pub fn meta(&self) -> &InstanceMeta {
        &self.metadata
    }

    pub fn canvas(&self) -> [f64; 2] {
        self.canvas
    }
}

pub fn write_instance(path: &Path, inst: &MovingInstance, meta: InstanceMeta) -> Result<()> {
    std::fs::write(path, InstanceFile::new(inst, meta).to_json())?;
    Ok(())
}

pub fn read_instance(path: &Path) -> Result<(MovingInstance, InstanceFile)> {
    let f = InstanceFile::parse(&std::fs::read_to_string(path)?)?;
    Ok((f.instance()?, f))
}

/// SHA-256 over the coordinates, so results can be matched to their instance.
pub fn instance_digest(inst: &MovingInstance) -> String {
    let mut h = Sha256::new();
    h.update(format!("{} {}\n", inst.m(), inst.n()));
    for s in &inst.stations {
        h.update(format!("{} {}\n", s.x, s.y));
    }
    for o in &inst.objects {
        h.update(format!("{} {} {} {}\n", o.start.x, o.start.y, o.end.x, o.end.y));
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate;

    #[test]
    fn round_trip() {
        let params = GenParams { n: 30, m: 4, seed: 17, ..GenParams::default() };
        let inst = generate(&params).unwrap();
        let meta = InstanceMeta { id: "r17".into(), seed: 17, params: Some(params), ..InstanceMeta::default() };
        let text = InstanceFile::new(&inst, meta.clone()).to_json();
        let back = InstanceFile::parse(&text).unwrap();
        assert_eq!(back.instance().unwrap(), inst);
        assert_eq!(back.meta(), &meta);
        assert_eq!(back.to_json(), text);
        assert_eq!(instance_digest(&inst), instance_digest(&back.instance().unwrap()));

        let empty = MovingInstance::default();
        let text = InstanceFile::new(&empty, InstanceMeta::default()).to_json();
        assert_eq!(InstanceFile::parse(&text).unwrap().instance().unwrap(), empty);
    }

    #[test]
    fn tricky_decimals_survive() {
        let inst = MovingInstance::new(
            vec![Point2::new(0.1, 1e-300)],
            vec![Trajectory::new(Point2::new(1.0 / 3.0, 2.0f64.sqrt()), Point2::new(-0.0, 123456789.123456789))],
        );
        let text = InstanceFile::new(&inst, InstanceMeta::default()).to_json();
        assert!(text.contains("\"0.1\""));
        assert_eq!(InstanceFile::parse(&text).unwrap().instance().unwrap(), inst);
    }

    #[test]
    fn rejects_bad_files() {
        let text = InstanceFile::new(&MovingInstance::default(), InstanceMeta::default()).to_json();
        let e = InstanceFile::parse(&text.replace(INSTANCE_SCHEMA, "kdc-instance/9")).unwrap_err();
        assert!(matches!(e, KdcError::Schema(_)), "{e}");
        assert!(InstanceFile::parse("{}").is_err());
        let bad = r#"{"version":"kdc-instance/1","canvas":[1,1],"stations":[["0","zero"]],"objects":[],"metadata":{"id":"","class":"random","seed":0}}"#;
        let e = InstanceFile::parse(bad).unwrap().instance().unwrap_err();
        assert!(e.to_string().contains("station 0"), "{e}");
    }
}
