use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use kdc_core::bench::{self, BenchPlan, Manifest, ManifestEntry, MANIFEST_SCHEMA};
use kdc_core::check::check_result;
use kdc_core::instances::{
    build_pub_instance, generate, instance_digest, parse_point_set, read_instance, write_instance, GenParams,
    InstanceClass, InstanceMeta,
};
use kdc_core::kinetic::Flags;
use kdc_core::minmax::SolverConfig;
use kdc_core::registry::Registry;
use kdc_core::render::{render_svg, Canvas};
use kdc_core::result_file::ResultFile;
use kdc_core::KdcError;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;
const EXIT_IO: u8 = 5;

/// Kinetic disk covering: generate instances, solve, benchmark, verify, draw.
#[derive(Parser)]
#[command(name = "kdc", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate one instance, a named benchmark set, or an instance from a point set.
    Gen(GenArgs),
    /// Solve an instance and write the result file.
    Solve(SolveArgs),
    /// Run algorithms and flag combinations over a manifest, writing CSV.
    Bench(BenchArgs),
    /// Verify a result file against its instance.
    Check(CheckArgs),
    /// Draw SVG snapshots of a result.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Output directory (instance files plus manifest.json).
    #[arg(short, long)]
    out: PathBuf,
    /// Named set: fix, fix_n, fix_m, degenerate.
    #[arg(long)]
    set: Option<String>,
    /// Size factor for --set.
    #[arg(long, default_value_t = bench::DEFAULT_SCALE)]
    scale: f64,
    /// Published sizes (same as --scale 1).
    #[arg(long)]
    full: bool,
    /// Node-coordinate point set to build a matched-pairs instance from.
    #[arg(long, conflicts_with = "set")]
    points: Option<PathBuf>,
    #[arg(long, default_value = "random")]
    class: String,
    #[arg(short, default_value_t = 50)]
    n: usize,
    #[arg(short, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    len_min: Option<f64>,
    #[arg(long)]
    len_max: Option<f64>,
    #[arg(long, default_value_t = 100.0)]
    width: f64,
    #[arg(long, default_value_t = 100.0)]
    height: f64,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// exact, nn or fixed_nn.
    #[arg(long, default_value = "exact")]
    algo: String,
    /// Target relative gap.
    #[arg(long, default_value_t = 1e-4)]
    gap: f64,
    #[arg(long, default_value_t = 0.01)]
    coarse_gap: f64,
    /// Switch to the target gap once the overall gap is below this.
    #[arg(long, default_value_t = 0.015)]
    tighten: f64,
    /// Seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    /// Comma list of nodup, impext, partext (or all, none).
    #[arg(long, default_value = "none", value_parser = parse_flags)]
    flags: Flags,
    /// Exact rational arithmetic instead of floats.
    #[arg(long)]
    exact_arith: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Interval count of fixed_nn.
    #[arg(long, default_value_t = 10)]
    k: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            static_backend: if self.algo == "nn" { "nn" } else { "exact" }.to_string(),
            flags: self.flags,
            target_gap: self.gap,
            coarse_gap: self.coarse_gap,
            tighten_threshold: self.tighten,
            time_limit: self.time_limit,
            exact_arithmetic: self.exact_arith,
            seed: self.seed,
            fixed_nn_k: self.k,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Result file (default: next to the instance, `.result.json`).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Manifest file or the directory holding manifest.json.
    manifest: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Comma list of algorithms; overrides --algo.
    #[arg(long)]
    algos: Option<String>,
    /// All eight flag combinations instead of --flags.
    #[arg(long)]
    matrix: bool,
    /// Worker threads; 1 is fully deterministic.
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    result: PathBuf,
    instance: PathBuf,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

#[derive(Args)]
struct RenderArgs {
    result: PathBuf,
    instance: PathBuf,
    /// Comma list of times in [0, 1].
    #[arg(long, default_value = "0.25,0.5,0.75")]
    times: String,
    #[arg(short, long, default_value = ".")]
    out_dir: PathBuf,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_flags(s: &str) -> Result<Flags, String> {
    Flags::parse(s).map_err(|e| e.to_string())
}

/// Error with the exit status it should produce.
struct Failure(u8, anyhow::Error);

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<KdcError>() {
            Some(KdcError::Io(_)) => EXIT_IO,
            Some(KdcError::Invalid(_) | KdcError::Unknown { .. } | KdcError::Generation(_)) => EXIT_USAGE,
            Some(KdcError::Parse(_) | KdcError::ParseLine { .. } | KdcError::Schema(_) | KdcError::Json(_) | KdcError::Csv(_)) => EXIT_IO,
            _ if e.downcast_ref::<std::io::Error>().is_some() => EXIT_IO,
            _ => EXIT_FAILURE,
        };
        Failure(code, e)
    }
}

impl From<KdcError> for Failure {
    fn from(e: KdcError) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, anyhow::anyhow!(msg.into()))
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Render(a) => cmd_render(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("kdc: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let scale = if a.full { 1.0 } else { a.scale };
    if let Some(set) = &a.set {
        let man = bench::generate_set(set, scale, a.seed, &a.out)?;
        println!("{} instances of set {set} in {}", man.entries.len(), a.out.display());
        return Ok(0);
    }
    let class = InstanceClass::parse(&a.class)?;
    let (inst, meta) = if let Some(points) = &a.points {
        let text = std::fs::read_to_string(points).with_context(|| format!("reading {}", points.display()))?;
        let pts = parse_point_set(&text)?;
        let (lo, hi) = (a.len_min.unwrap_or(25_000.0), a.len_max.unwrap_or(50_000.0));
        let inst = build_pub_instance(&pts, a.m, a.seed, lo, hi)?;
        let stem = points.file_stem().map_or("points".into(), |s| s.to_string_lossy().into_owned());
        let mut notes = vec![format!("{} points, {} matched trajectories", pts.len(), inst.n())];
        if inst.n() == 0 {
            notes.push("no admissible pairs: instance has no objects".into());
        }
        let meta = InstanceMeta { id: format!("pub-{stem}-m{}-s{}", a.m, a.seed), class: InstanceClass::Pub, seed: a.seed, params: None, notes };
        (inst, meta)
    } else {
        let params = GenParams {
            width: a.width,
            height: a.height,
            len_min: a.len_min.unwrap_or(25.0),
            len_max: a.len_max.unwrap_or(50.0),
            n: a.n,
            m: a.m,
            seed: a.seed,
            class,
        };
        params.validate()?;
        let inst = generate(&params)?;
        let meta = InstanceMeta { id: format!("{class}-n{}-m{}-s{}", a.n, a.m, a.seed), class, seed: a.seed, params: Some(params), notes: vec![] };
        (inst, meta)
    };
    std::fs::create_dir_all(&a.out).map_err(KdcError::from)?;
    let file = format!("{}.json", meta.id);
    let entry = ManifestEntry { id: meta.id.clone(), file: file.clone(), n: inst.n(), m: inst.m(), seed: a.seed, class: meta.class };
    write_instance(&a.out.join(&file), &inst, meta)?;
    let man = Manifest { version: MANIFEST_SCHEMA.into(), set: "single".into(), scale: 1.0, schedule: "one instance".into(), entries: vec![entry] };
    man.write(&a.out.join("manifest.json"))?;
    println!("{}", a.out.join(file).display());
    Ok(0)
}

fn default_result_path(instance: &Path) -> PathBuf {
    let stem = instance.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
    instance.with_file_name(format!("{stem}.result.json"))
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let (inst, file) = read_instance(&a.instance).with_context(|| format!("reading {}", a.instance.display()))?;
    let config = a.solver.config();
    config.validate()?;
    let registry = Registry::builtin();
    let r = registry.solve(&a.solver.algo, &inst, &config)?;
    let out = a.out.unwrap_or_else(|| default_result_path(&a.instance));
    let res = ResultFile::new(&r, &a.solver.algo, &config, &file.meta().id, &instance_digest(&inst));
    res.write(&out).with_context(|| format!("writing {}", out.display()))?;
    let gap = if r.gap.is_finite() { format!("{:.3e}", r.gap) } else { "n/a".into() };
    println!(
        "{} algo={} flags={} upper={:.6} lower={:.6} gap={} iterations={} segments={} time={:.3}s{}",
        file.meta().id,
        a.solver.algo,
        config.flags,
        r.upper_area(),
        r.lower_area(),
        gap,
        r.iterations,
        r.timeline.segments.len(),
        r.stats.time_total,
        if r.timed_out { " TIMEOUT" } else { "" }
    );
    Ok(if r.timed_out { EXIT_TIMEOUT } else { 0 })
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let path = bench::manifest_path(&a.manifest);
    let man = Manifest::read(&path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let algorithms: Vec<String> = match &a.algos {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => vec![a.solver.algo.clone()],
    };
    if a.threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    let config = a.solver.config();
    config.validate()?;
    let plan = BenchPlan {
        algorithms,
        flags: if a.matrix { bench::flag_matrix() } else { vec![a.solver.flags] },
        config,
        threads: a.threads,
    };
    let rows = bench::run_bench(dir, &man, &plan)?;
    let f = std::fs::File::create(&a.out).map_err(KdcError::from).with_context(|| format!("creating {}", a.out.display()))?;
    bench::write_csv(f, &rows)?;
    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
    let timed_out = rows.iter().filter(|r| r.timed_out).count();
    println!("{} rows ({failed} failed, {timed_out} timed out) -> {}", rows.len(), a.out.display());
    Ok(if failed > 0 { EXIT_FAILURE } else { 0 })
}

fn load_pair(result: &Path, instance: &Path) -> Result<(ResultFile, kdc_core::MovingInstance, [f64; 2]), Failure> {
    let res = ResultFile::read(result).with_context(|| format!("reading {}", result.display()))?;
    let (inst, file) = read_instance(instance).with_context(|| format!("reading {}", instance.display()))?;
    if res.instance_id != file.meta().id {
        return Err(usage(format!("result is for instance {:?}, got {:?}", res.instance_id, file.meta().id)));
    }
    Ok((res, inst, file.canvas()))
}

fn cmd_check(a: CheckArgs) -> CmdResult {
    let (res, inst, _) = load_pair(&a.result, &a.instance)?;
    let rep = check_result(&res, &inst, a.samples)?;
    println!("{}", serde_json::to_string(&rep).map_err(anyhow::Error::from)?);
    match rep.failure {
        None => Ok(0),
        Some(msg) => {
            eprintln!("check failed: {msg}");
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn cmd_render(a: RenderArgs) -> CmdResult {
    let (res, inst, canvas) = load_pair(&a.result, &a.instance)?;
    if res.instance_digest != instance_digest(&inst) {
        return Err(usage("result does not belong to this instance"));
    }
    let times: Vec<f64> = a
        .times
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("bad time {s:?}"))))
        .collect::<Result<_, _>>()?;
    if let Some(t) = times.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(usage(format!("time {t} outside [0, 1]")));
    }
    let tl = res.timeline()?;
    std::fs::create_dir_all(&a.out_dir).map_err(KdcError::from)?;
    let stem = a.result.file_stem().map_or("result".into(), |s| s.to_string_lossy().into_owned());
    let canvas = Canvas::covering(&inst, canvas);
    for t in times {
        let svg = render_svg(&inst, &tl, t, canvas)?;
        let path = a.out_dir.join(format!("{stem}-t{t}.svg"));
        std::fs::write(&path, svg).map_err(KdcError::from)?;
        println!("{}", path.display());
    }
    Ok(0)
}
