//! Command-line frontend: distances between cloud files, synthetic data
//! generation, benchmark tables, and a built-in invariant suite.
//!
//! All output is deterministic: the same argv, input files, and seed produce
//! byte-identical standard output regardless of `--threads`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use depth_metrics::bench::{render_csv, render_json, ExperimentConfig};
use depth_metrics::depth::DepthNotion;
use depth_metrics::io::{load_cloud, save_cloud, CloudFile};
use depth_metrics::metrics::{
    dd_distance, dr_distance, sliced_wasserstein, wasserstein_1d, DistanceResult, IntegrationBox,
    LevelMode, MetricParams, SwMode,
};
use depth_metrics::synthdata::{contaminate, ContaminationScheme, ContaminationSpec, Family, GeneratorSpec};
use depth_metrics::{Error, PointCloud};

mod selftest;

const EXIT_OK: i32 = 0;
const EXIT_COMPUTE: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "depthdist",
    version,
    about = "Depth-based pseudo-metrics between empirical distributions",
    max_term_width = 100
)]
struct Cli {
    /// Worker threads for inner loops (default: machine parallelism).
    /// Results never depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance between two point-cloud files.
    Dist(DistArgs),
    /// Generate a synthetic pair of point clouds.
    Gen(GenArgs),
    /// Run a benchmark experiment and print its table.
    Bench(BenchArgs),
    /// Run the built-in invariant suite; nonzero exit on any failure.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Depth-region distance (Hausdorff over trimmed depth levels).
    Dr,
    /// Depth-field distance (Monte Carlo L^p gap over a box).
    Dd,
    /// Sliced Wasserstein (mean over directions).
    Sw,
    /// Max-sliced Wasserstein.
    Maxsw,
    /// Exact one-dimensional Wasserstein (requires d = 1).
    W1d,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DepthArg {
    Halfspace,
    Projection,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct DistArgs {
    /// First cloud file (.csv, or .bin/.f64 for the binary format).
    x: PathBuf,
    /// Second cloud file.
    y: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Dr)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = DepthArg::Halfspace)]
    depth: DepthArg,
    /// Power of the outer mean (p >= 1).
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Lower trimming level in [0, 1).
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    /// Number of random directions.
    #[arg(long, default_value_t = 1000)]
    ndirs: usize,
    /// Number of depth levels (dr).
    #[arg(long, default_value_t = 20)]
    nalpha: usize,
    /// RNG seed; the DEPTHDIST_SEED environment variable is used when the
    /// flag is absent.
    #[arg(long, env = "DEPTHDIST_SEED", default_value_t = 0)]
    seed: u64,
    /// Integration box for dd as "lo:hi" (broadcast) or "lo:hi,lo:hi,..."
    /// per coordinate; default is the joint bounding box plus 10% per side.
    #[arg(long = "box", value_name = "BOX")]
    box_spec: Option<String>,
    /// Monte Carlo points for dd.
    #[arg(long, default_value_t = 100_000)]
    mc_points: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Evenly spaced depth levels instead of Monte Carlo draws.
    #[arg(long)]
    grid: bool,
    /// Trim the deepest levels as well (upper bound alpha* - eps).
    #[arg(long)]
    trim_upper: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    GaussianPair,
    FragmentedHypercube,
    Circles,
    StudentPair,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    UniformBox,
    UnitBall,
}

#[derive(Args)]
struct GenArgs {
    /// Output file for the first cloud.
    out_x: PathBuf,
    /// Output file for the second cloud.
    out_y: PathBuf,
    #[arg(long, value_enum, default_value_t = FamilyArg::GaussianPair)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Points per cloud.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Per-coordinate mean shift of the second cloud.
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    /// Student-t degrees of freedom; inf is the Gaussian limit.
    #[arg(long, default_value_t = f64::INFINITY)]
    dof: f64,
    /// Radial noise of the circles family.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Inner-circle radius factor in (0, 1).
    #[arg(long, default_value_t = 0.8)]
    factor: f64,
    #[arg(long, env = "DEPTHDIST_SEED", default_value_t = 0)]
    seed: u64,
    /// Replace this fraction of each cloud with outliers.
    #[arg(long, default_value_t = 0.0)]
    fraction: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::UniformBox)]
    scheme: SchemeArg,
    /// Outlier box as "lo:hi", broadcast to every coordinate.
    #[arg(long, default_value = "-10:20", value_name = "BOX")]
    outlier_box: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchKind {
    /// Approximation error against the known Gaussian center gap.
    Approx,
    /// Robustness under growing contamination.
    Outliers,
    /// Heavy-tailed (Student-t) regimes.
    Tails,
}

#[derive(Args)]
struct BenchArgs {
    kind: BenchKind,
    /// TOML experiment config; its `experiment` key must match the kind.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the wall_secs column (timings are not reproducible).
    #[arg(long)]
    timing: bool,
}

/// Run the CLI against explicit argv and output streams; returns the exit
/// code (0 success, 1 computation error, 2 usage error).
pub fn dispatch<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let target = if code == EXIT_OK {
                out as &mut dyn Write
            } else {
                err as &mut dyn Write
            };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    apply_threads(cli.threads);
    let run = match cli.cmd {
        Cmd::Dist(a) => run_dist(&a),
        Cmd::Gen(a) => run_gen(&a),
        Cmd::Bench(a) => run_bench(&a),
        Cmd::Selftest => return selftest::run(out),
    };
    match run {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_COMPUTE
        }
    }
}

#[cfg(feature = "parallel")]
fn apply_threads(threads: Option<usize>) {
    if let Some(t) = threads.filter(|&t| t > 0) {
        // Only the first global pool wins within one process; results do
        // not depend on it either way.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn apply_threads(_threads: Option<usize>) {}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type RunResult = std::result::Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parse "lo:hi" pairs, comma-separated.
fn parse_box(text: &str) -> std::result::Result<(Vec<f64>, Vec<f64>), String> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (i, pair) in text.split(',').enumerate() {
        let coord = i + 1;
        let (lo, hi) = pair
            .split_once(':')
            .ok_or_else(|| format!("box coordinate {coord}: expected lo:hi, got `{pair}`"))?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|_| format!("box coordinate {coord}: invalid number `{lo}`"))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|_| format!("box coordinate {coord}: invalid number `{hi}`"))?;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(format!("box coordinate {coord}: requires finite lo < hi"));
        }
        lower.push(lo);
        upper.push(hi);
    }
    Ok((lower, upper))
}

fn broadcast(bounds: (Vec<f64>, Vec<f64>), d: usize) -> std::result::Result<(Vec<f64>, Vec<f64>), String> {
    let (lo, hi) = bounds;
    if lo.len() == d {
        Ok((lo, hi))
    } else if lo.len() == 1 {
        Ok((vec![lo[0]; d], vec![hi[0]; d]))
    } else {
        Err(format!("box has {} coordinates, clouds have {d}", lo.len()))
    }
}

fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

fn notion_name(n: DepthNotion) -> &'static str {
    match n {
        DepthNotion::Halfspace => "halfspace",
        DepthNotion::Projection => "projection",
    }
}

fn validate_dist(a: &DistArgs) -> std::result::Result<(), String> {
    if !a.p.is_finite() || a.p < 1.0 {
        return Err(format!("--p must be a finite number >= 1, got {}", a.p));
    }
    if !a.eps.is_finite() || !(0.0..1.0).contains(&a.eps) {
        return Err(format!("--eps must lie in [0, 1), got {}", a.eps));
    }
    if a.ndirs == 0 {
        return Err("--ndirs must be at least 1".into());
    }
    if a.nalpha == 0 {
        return Err("--nalpha must be at least 1".into());
    }
    if a.mc_points == 0 {
        return Err("--mc-points must be at least 1".into());
    }
    if let Some(spec) = &a.box_spec {
        parse_box(spec)?;
    }
    Ok(())
}

fn render_result(r: &DistanceResult, format: FormatArg) -> String {
    match format {
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("result serializes");
            s.push('\n');
            s
        }
        FormatArg::Csv => {
            let mut s = String::from("value,alpha_star,p,epsilon,K,n_alpha,seed,depth_notion\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                g17(r.value),
                g17(r.alpha_star),
                g17(r.p),
                g17(r.epsilon),
                r.k,
                r.n_alpha,
                r.seed,
                notion_name(r.depth_notion)
            );
            s
        }
    }
}

fn render_baseline(method: &str, value: f64, p: f64, k: Option<usize>, seed: Option<u64>, format: FormatArg) -> String {
    match format {
        FormatArg::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("method".into(), method.into());
            obj.insert("value".into(), value.into());
            obj.insert("p".into(), p.into());
            if let Some(k) = k {
                obj.insert("K".into(), k.into());
            }
            if let Some(seed) = seed {
                obj.insert("seed".into(), seed.into());
            }
            let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(obj))
                .expect("record serializes");
            s.push('\n');
            s
        }
        FormatArg::Csv => {
            let opt = |v: Option<String>| v.unwrap_or_default();
            format!(
                "method,value,p,K,seed\n{},{},{},{},{}\n",
                method,
                g17(value),
                g17(p),
                opt(k.map(|v| v.to_string())),
                opt(seed.map(|v| v.to_string())),
            )
        }
    }
}

fn run_dist(a: &DistArgs) -> RunResult {
    validate_dist(a).map_err(usage)?;
    let x = load_cloud(&CloudFile::from_path(&a.x))?;
    let y = load_cloud(&CloudFile::from_path(&a.y))?;
    let params = MetricParams {
        p: a.p,
        epsilon: a.eps,
        n_alpha: a.nalpha,
        k: a.ndirs,
        seed: a.seed,
        depth_notion: match a.depth {
            DepthArg::Halfspace => DepthNotion::Halfspace,
            DepthArg::Projection => DepthNotion::Projection,
        },
        level_mode: if a.grid { LevelMode::Grid } else { LevelMode::MonteCarlo },
        trim_upper: a.trim_upper,
    };
    match a.method {
        MethodArg::Dr => {
            let r = dr_distance(&x, &y, &params)?;
            Ok(render_result(&r, a.format))
        }
        MethodArg::Dd => {
            let bx = match &a.box_spec {
                Some(spec) => {
                    let parsed = parse_box(spec).map_err(usage)?;
                    let (lo, hi) = broadcast(parsed, x.dim()).map_err(usage)?;
                    IntegrationBox::new(lo, hi, a.mc_points)?
                }
                None => IntegrationBox::around_clouds(&[&x, &y], a.mc_points)?,
            };
            let r = dd_distance(&x, &y, &params, &bx)?;
            Ok(render_result(&r, a.format))
        }
        MethodArg::Sw => {
            let v = sliced_wasserstein(&x, &y, a.p, a.ndirs, a.seed, SwMode::Mean)?;
            Ok(render_baseline("sw", v, a.p, Some(a.ndirs), Some(a.seed), a.format))
        }
        MethodArg::Maxsw => {
            let v = sliced_wasserstein(&x, &y, a.p, a.ndirs, a.seed, SwMode::Max)?;
            Ok(render_baseline("maxsw", v, a.p, Some(a.ndirs), Some(a.seed), a.format))
        }
        MethodArg::W1d => {
            if x.dim() != 1 || y.dim() != 1 {
                return Err(Failure::Compute(Error::DimensionMismatch {
                    left: x.dim().max(y.dim()),
                    right: 1,
                }));
            }
            let v = wasserstein_1d(x.data(), y.data(), a.p)?;
            Ok(render_baseline("w1d", v, a.p, None, None, a.format))
        }
    }
}

fn validate_gen(a: &GenArgs) -> std::result::Result<(), String> {
    if a.d == 0 {
        return Err("--d must be at least 1".into());
    }
    if a.n == 0 {
        return Err("--n must be at least 1".into());
    }
    if !a.shift.is_finite() {
        return Err("--shift must be finite".into());
    }
    if a.dof.is_nan() || a.dof < 1.0 {
        return Err(format!("--dof must be >= 1 (inf allowed), got {}", a.dof));
    }
    if !a.noise.is_finite() || a.noise < 0.0 {
        return Err(format!("--noise must be >= 0, got {}", a.noise));
    }
    if !(a.factor > 0.0 && a.factor < 1.0) {
        return Err(format!("--factor must lie in (0, 1), got {}", a.factor));
    }
    if !(0.0..=1.0).contains(&a.fraction) {
        return Err(format!("--fraction must lie in [0, 1], got {}", a.fraction));
    }
    parse_box(&a.outlier_box)?;
    Ok(())
}

fn run_gen(a: &GenArgs) -> RunResult {
    validate_gen(a).map_err(usage)?;
    let spec = GeneratorSpec {
        family: match a.family {
            FamilyArg::GaussianPair => Family::GaussianPair,
            FamilyArg::FragmentedHypercube => Family::FragmentedHypercube,
            FamilyArg::Circles => Family::Circles,
            FamilyArg::StudentPair => Family::StudentPair,
        },
        d: a.d,
        n: a.n,
        shift: a.shift,
        dof: a.dof,
        noise: a.noise,
        factor: a.factor,
        seed: a.seed,
    };
    let (mut x, mut y) = spec.generate()?;
    if a.fraction > 0.0 {
        let parsed = parse_box(&a.outlier_box).map_err(usage)?;
        let (lo, hi) = broadcast(parsed, x.dim()).map_err(usage)?;
        let contam = |cloud: &PointCloud, tag: u64| {
            contaminate(
                cloud,
                &ContaminationSpec {
                    scheme: match a.scheme {
                        SchemeArg::UniformBox => ContaminationScheme::UniformBox,
                        SchemeArg::UnitBall => ContaminationScheme::UnitBall,
                    },
                    fraction: a.fraction,
                    box_lower: Some(lo.clone()),
                    box_upper: Some(hi.clone()),
                    seed: a.seed.wrapping_add(tag),
                },
            )
        };
        x = contam(&x, 1)?;
        y = contam(&y, 2)?;
    }
    save_cloud(&x, &CloudFile::from_path(&a.out_x))?;
    save_cloud(&y, &CloudFile::from_path(&a.out_y))?;
    Ok(String::new())
}

fn run_bench(a: &BenchArgs) -> RunResult {
    let expected = match a.kind {
        BenchKind::Approx => "approx_quality",
        BenchKind::Outliers => "robustness_outliers",
        BenchKind::Tails => "heavy_tails",
    };
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(Error::from)?;
            ExperimentConfig::from_toml_str(&text)?
        }
        None => match a.kind {
            BenchKind::Approx => ExperimentConfig::ApproxQuality(Default::default()),
            BenchKind::Outliers => ExperimentConfig::RobustnessOutliers(Default::default()),
            BenchKind::Tails => ExperimentConfig::HeavyTails(Default::default()),
        },
    };
    let actual = cfg.meta().experiment;
    if actual != expected {
        return Err(usage(format!(
            "config is for experiment `{actual}`, but the command line asked for `{expected}`"
        )));
    }
    if a.timing {
        match &mut cfg {
            ExperimentConfig::ApproxQuality(c) => c.timing = true,
            ExperimentConfig::RobustnessOutliers(c) => c.timing = true,
            ExperimentConfig::HeavyTails(c) => c.timing = true,
        }
    }
    let rows = cfg.run()?;
    let text = match a.format {
        FormatArg::Csv => render_csv(&rows),
        FormatArg::Json => render_json(&rows, &cfg.meta()),
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, text).map_err(Error::from)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
