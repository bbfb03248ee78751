//! Benchmark sets, manifests, and the benchmark runner.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::MovingInstance;
use crate::instances::{generate, read_instance, write_instance, GenParams, InstanceClass, InstanceMeta};
use crate::kinetic::Flags;
use crate::minmax::SolverConfig;
use crate::registry::Registry;
use crate::{KdcError, Result};

pub const MANIFEST_SCHEMA: &str = "kdc-manifest/1";

/// Factor applied to the published set sizes unless `--full` is given.
pub const DEFAULT_SCALE: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    /// Instance file, relative to the manifest.
    pub file: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub class: InstanceClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub set: String,
    pub scale: f64,
    /// How the published schedule was scaled, for the record.
    pub schedule: String,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Manifest> {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        match v.get("version").and_then(|x| x.as_str()) {
            Some(MANIFEST_SCHEMA) => Ok(serde_json::from_value(v)?),
            other => Err(KdcError::Schema(format!("manifest version {other:?}, expected {MANIFEST_SCHEMA:?}"))),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

fn scaled(x: usize, scale: f64) -> usize {
    ((x as f64 * scale).round() as usize).max(1)
}

/// Generator settings of a named set: `fix` (25 instances, n = 500, m = 25),
/// `fix_n` (n = 500, m = 5, 10, …, 50, ten each), `fix_m` (m = 25,
/// n = 50, 100, …, 500, ten each) and `degenerate` (25 each of the four
/// classes at n = 500, m = 25). Sizes are multiplied by `scale`.
pub fn set_schedule(set: &str, scale: f64, base_seed: u64) -> Result<(Vec<(String, GenParams)>, String)> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(KdcError::Invalid(format!("scale must lie in (0, 1], got {scale}")));
    }
    let mut shapes: Vec<(usize, usize, InstanceClass, usize)> = Vec::new();
    let (n0, m0) = (scaled(500, scale), scaled(25, scale));
    match set {
        "fix" => shapes.push((n0, m0, InstanceClass::Random, 25)),
        "fix_n" => shapes.extend((1..=10).map(|i| (n0, scaled(5 * i, scale), InstanceClass::Random, 10))),
        "fix_m" => shapes.extend((1..=10).map(|i| (scaled(50 * i, scale), m0, InstanceClass::Random, 10))),
        "degenerate" => {
            for c in [InstanceClass::Random, InstanceClass::SameSlope, InstanceClass::SameStart, InstanceClass::SameEnd] {
                shapes.push((n0, m0, c, 25));
            }
        }
        other => {
            return Err(KdcError::Unknown { kind: "set", name: other.into(), known: "fix, fix_n, fix_m, degenerate".into() })
        }
    }
    shapes.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1 && a.2 == b.2);
    let describe = format!(
        "published sizes × {scale} (rounded, at least 1): {}",
        shapes.iter().map(|(n, m, c, k)| format!("{k}×{c}(n={n},m={m})")).collect::<Vec<_>>().join(" ")
    );
    let mut out = Vec::new();
    let mut seed = base_seed;
    for (n, m, class, count) in shapes {
        for k in 0..count {
            let id = format!("{set}-{class}-n{n}-m{m}-{k:02}");
            out.push((id, GenParams { n, m, seed, class, ..GenParams::default() }));
            seed += 1;
        }
    }
    Ok((out, describe))
}

/// Generate a set into `dir`, with `manifest.json` listing it.
pub fn generate_set(set: &str, scale: f64, base_seed: u64, dir: &Path) -> Result<Manifest> {
    let (schedule, describe) = set_schedule(set, scale, base_seed)?;
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(schedule.len());
    for (id, params) in schedule {
        let inst = generate(&params)?;
        let file = format!("{id}.json");
        let meta = InstanceMeta { id: id.clone(), class: params.class, seed: params.seed, params: Some(params.clone()), notes: vec![] };
        write_instance(&dir.join(&file), &inst, meta)?;
        entries.push(ManifestEntry { id, file, n: params.n, m: params.m, seed: params.seed, class: params.class });
    }
    let manifest = Manifest { version: MANIFEST_SCHEMA.into(), set: set.into(), scale, schedule: describe, entries };
    manifest.write(&dir.join("manifest.json"))?;
    Ok(manifest)
}

/// The eight on/off combinations of the three extension improvements.
pub fn flag_matrix() -> Vec<Flags> {
    (0..8)
        .map(|b| Flags { no_dup: b & 1 != 0, imp_ext: b & 2 != 0, part_ext: b & 4 != 0 })
        .collect()
}

/// One CSV row. Bounds are areas (`π` times the summed squared radii).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub class: String,
    pub algorithm: String,
    pub flags: String,
    pub upper: Option<f64>,
    pub lower: Option<f64>,
    /// Empty when nothing is certified.
    pub gap: Option<f64>,
    pub iterations: usize,
    pub static_solves: usize,
    pub time_static_s: f64,
    pub time_extend_merge_s: f64,
    pub time_total_s: f64,
    pub timed_out: bool,
    /// Empty unless the run failed.
    pub error: String,
}

impl BenchRecord {
    pub const COLUMNS: [&'static str; 17] = [
        "instance_id",
        "n",
        "m",
        "seed",
        "class",
        "algorithm",
        "flags",
        "upper",
        "lower",
        "gap",
        "iterations",
        "static_solves",
        "time_static_s",
        "time_extend_merge_s",
        "time_total_s",
        "timed_out",
        "error",
    ];
}

#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub algorithms: Vec<String>,
    pub flags: Vec<Flags>,
    pub config: SolverConfig,
    /// Worker threads; 1 runs everything on the calling thread.
    pub threads: usize,
}

fn run_cell(entry: &ManifestEntry, inst: &Result<MovingInstance>, algo: &str, flags: Flags, plan: &BenchPlan, reg: &Registry) -> BenchRecord {
    let mut rec = BenchRecord {
        instance_id: entry.id.clone(),
        n: entry.n,
        m: entry.m,
        seed: entry.seed,
        class: entry.class.to_string(),
        algorithm: algo.to_string(),
        flags: flags.to_string(),
        upper: None,
        lower: None,
        gap: None,
        iterations: 0,
        static_solves: 0,
        time_static_s: 0.0,
        time_extend_merge_s: 0.0,
        time_total_s: 0.0,
        timed_out: false,
        error: String::new(),
    };
    let inst = match inst {
        Ok(i) => i,
        Err(e) => {
            rec.error = e.to_string();
            return rec;
        }
    };
    let config = SolverConfig { flags, seed: entry.seed, ..plan.config.clone() };
    match reg.solve(algo, inst, &config) {
        Ok(r) => {
            rec.upper = Some(r.upper_area());
            rec.lower = Some(r.lower_area());
            rec.gap = r.gap.is_finite().then_some(r.gap);
            rec.iterations = r.iterations;
            rec.static_solves = r.stats.static_solves;
            rec.time_static_s = r.stats.time_static;
            rec.time_extend_merge_s = r.stats.time_extend_merge;
            rec.time_total_s = r.stats.time_total;
            rec.timed_out = r.timed_out;
        }
        Err(e) => rec.error = e.to_string(),
    }
    rec
}

/// Run every (instance, algorithm, flags) cell. Rows come back in that
/// nesting order whatever the thread count; failures become rows with
/// `error` set.
pub fn run_bench(manifest_dir: &Path, manifest: &Manifest, plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    let reg = Registry::builtin();
    for a in &plan.algorithms {
        reg.algorithm(a)?;
    }
    let instances: Vec<Result<MovingInstance>> = manifest
        .entries
        .iter()
        .map(|e| read_instance(&manifest_dir.join(&e.file)).map(|(i, _)| i))
        .collect();
    let cells: Vec<(usize, &str, Flags)> = (0..manifest.entries.len())
        .flat_map(|i| plan.algorithms.iter().flat_map(move |a| plan.flags.iter().map(move |&f| (i, a.as_str(), f))))
        .collect();
    let run = |&(i, a, f): &(usize, &str, Flags)| run_cell(&manifest.entries[i], &instances[i], a, f, plan, &reg);
    if plan.threads <= 1 {
        return Ok(cells.iter().map(run).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.threads)
        .build()
        .map_err(|e| KdcError::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(|| cells.par_iter().map(run).collect()))
}

/// CSV with a header row, even when there are no records.
pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(BenchRecord::COLUMNS)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != BenchRecord::COLUMNS {
        return Err(KdcError::Schema(format!("unexpected CSV columns {header:?}")));
    }
    r.deserialize().map(|x| x.map_err(KdcError::from)).collect()
}

/// `dir/manifest.json` when given a directory.
pub fn manifest_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join("manifest.json")
    } else {
        p.to_path_buf()
    }
}
