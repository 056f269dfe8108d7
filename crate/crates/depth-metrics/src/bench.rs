//! Benchmark harness: approximation quality, robustness to outliers, and
//! heavy-tail behavior of the distance estimators at desk scale.
//!
//! Each experiment is driven by a small config (TOML-friendly, every field
//! defaulted), sweeps its parameter grid over seeded repetitions, and emits
//! flat rows renderable as CSV or JSON. Per-repetition seeds derive from the
//! base seed, and repetitions share random draws across grid cells wherever
//! the comparison is meant to isolate one knob, so tables are bit-exactly
//! reproducible from `(config, base_seed)`. Wall-clock columns are filled
//! only when timing is explicitly enabled, since times are the one quantity
//! that cannot be reproducible.

use std::time::Instant;

use serde::{Deserialize, Serialize, Serializer};

use crate::depth::DepthNotion;
use crate::metrics::{
    dr_distance, sliced_wasserstein, wasserstein_1d, MetricParams, SwMode,
};
use crate::seedmix::derive_seed;
use crate::synthdata::{
    contaminate, gen_gaussian_pair, gen_circles, gen_fragmented_hypercube, gen_student_pair,
    ContaminationScheme, ContaminationSpec, Family, GeneratorSpec,
};
use crate::{Error, PointCloud, Result};

/// Stream tags for per-repetition and per-purpose seed derivation.
const APPROX_REP: u64 = 5;
const SW_DIRECTIONS: u64 = 6;
const HEAVY_BASELINE: u64 = 7;
const ROBUST_REP: u64 = 8;
const CONTAM_DRAW: u64 = 9;
const HEAVY_REP: u64 = 10;

/// Relative deviation of a measured distance from its clean baseline.
pub fn relative_error(contaminated_value: f64, clean_value: f64) -> Result<f64> {
    if !clean_value.is_finite() || clean_value <= 0.0 {
        return Err(Error::DegenerateBaseline(clean_value));
    }
    Ok((contaminated_value - clean_value).abs() / clean_value)
}

fn ser_dof<S: Serializer>(dof: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    // JSON has no literal for infinity; spell the Gaussian limit out.
    match dof {
        None => s.serialize_none(),
        Some(v) if v.is_infinite() => s.serialize_str("inf"),
        Some(v) => s.serialize_f64(*v),
    }
}

/// One cell of a benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: String,
    pub d: usize,
    /// Direction count; absent for direction-free methods.
    pub k: Option<usize>,
    pub n_alpha: Option<usize>,
    pub epsilon: Option<f64>,
    pub fraction: Option<f64>,
    #[serde(serialize_with = "ser_dof")]
    pub dof: Option<f64>,
    pub mean_rel_error: f64,
    pub std_rel_error: f64,
    /// Median wall-clock seconds per evaluation; only present when the
    /// config enables timing.
    pub wall_secs: Option<f64>,
}

/// Provenance block attached to rendered tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub experiment: String,
    pub base_seed: u64,
    pub repetitions: usize,
    /// How clean baselines were chosen, when that needs saying.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<String>,
}

/// Approximation error of the estimators against the known center gap of a
/// shifted Gaussian pair, swept over dimensions, direction counts, and
/// level counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApproxQualityConfig {
    pub dims: Vec<usize>,
    pub direction_counts: Vec<usize>,
    pub n_alphas: Vec<usize>,
    /// Sample size per cloud.
    pub n: usize,
    /// Per-coordinate shift of the second cloud.
    pub shift: f64,
    pub p: f64,
    pub include_max_sw: bool,
    pub repetitions: usize,
    pub base_seed: u64,
    pub timing: bool,
}

impl Default for ApproxQualityConfig {
    fn default() -> Self {
        Self {
            dims: vec![5],
            direction_counts: vec![10, 100, 1000, 5000],
            n_alphas: vec![20],
            n: 1000,
            shift: 7.0,
            p: 2.0,
            include_max_sw: true,
            repetitions: 100,
            base_seed: 0,
            timing: false,
        }
    }
}

/// Relative-error curves under growing contamination, for the depth-region
/// distance at several trimming levels against sliced Wasserstein.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobustnessOutliersConfig {
    /// Which clean pair to pollute: gaussian_pair, circles, or
    /// fragmented_hypercube.
    pub setting: Family,
    /// Dimension of the gaussian_pair setting (the planar settings fix 2).
    pub d: usize,
    pub n: usize,
    pub shift: f64,
    pub noise: f64,
    pub factor: f64,
    pub fractions: Vec<f64>,
    /// One depth-region method per trimming level.
    pub epsilons: Vec<f64>,
    pub p: f64,
    pub k: usize,
    pub n_alpha: usize,
    pub include_sw: bool,
    /// Pollute both clouds (independently), or only the second.
    pub contaminate_both: bool,
    pub scheme: ContaminationScheme,
    /// Scalar bounds broadcast to every coordinate (uniform_box scheme).
    pub box_lower: f64,
    pub box_upper: f64,
    pub repetitions: usize,
    pub base_seed: u64,
    pub timing: bool,
}

impl Default for RobustnessOutliersConfig {
    fn default() -> Self {
        Self {
            setting: Family::GaussianPair,
            d: 2,
            n: 1000,
            shift: 10.0,
            noise: 0.2,
            factor: 0.8,
            fractions: vec![0.0, 0.05, 0.1, 0.15, 0.2],
            epsilons: vec![0.1, 0.2, 0.3],
            p: 2.0,
            k: 1000,
            n_alpha: 20,
            include_sw: true,
            contaminate_both: true,
            scheme: ContaminationScheme::UniformBox,
            box_lower: -10.0,
            box_upper: 20.0,
            repetitions: 100,
            base_seed: 0,
            timing: false,
        }
    }
}

/// Relative-error curves across tail weights (Student-t degrees of freedom)
/// and direction counts, against per-method Gaussian baselines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeavyTailsConfig {
    pub d: usize,
    pub n: usize,
    pub shift: f64,
    /// Degrees of freedom per cell; `inf` is the Gaussian limit.
    pub dofs: Vec<f64>,
    pub direction_counts: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub p: f64,
    pub n_alpha: usize,
    /// Depth notion for the region distance. Defaults to projection depth:
    /// with 1000-point clouds in ten dimensions the deepest sample sits at
    /// halfspace depth well below the default `epsilon = 0.2`, so halfspace
    /// levels in that range are out of reach, while projection depth keeps
    /// maxima near 0.4 and the sweep feasible.
    pub depth_notion: DepthNotion,
    pub include_sw: bool,
    pub repetitions: usize,
    pub base_seed: u64,
    pub timing: bool,
}

impl Default for HeavyTailsConfig {
    fn default() -> Self {
        Self {
            d: 10,
            n: 1000,
            shift: 7.0,
            dofs: vec![1.0, 2.0, 3.0, 5.0, f64::INFINITY],
            direction_counts: vec![100, 1000],
            epsilons: vec![0.2],
            p: 2.0,
            n_alpha: 20,
            depth_notion: DepthNotion::Projection,
            include_sw: true,
            repetitions: 100,
            base_seed: 0,
            timing: false,
        }
    }
}

/// A parsed experiment configuration of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    ApproxQuality(ApproxQualityConfig),
    RobustnessOutliers(RobustnessOutliersConfig),
    HeavyTails(HeavyTailsConfig),
}

impl ExperimentConfig {
    /// Parse a TOML document whose `experiment` key selects the kind; all
    /// other keys override that experiment's defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let experiment = match table.remove("experiment") {
            Some(toml::Value::String(s)) => s,
            Some(other) => {
                return Err(Error::Config(format!(
                    "`experiment` must be a string, got {other}"
                )))
            }
            None => return Err(Error::Config("missing `experiment` key".into())),
        };
        let rest = toml::Value::Table(table);
        let parsed = match experiment.as_str() {
            "approx_quality" => ExperimentConfig::ApproxQuality(
                rest.try_into().map_err(|e| Error::Config(e.to_string()))?,
            ),
            "robustness_outliers" => ExperimentConfig::RobustnessOutliers(
                rest.try_into().map_err(|e| Error::Config(e.to_string()))?,
            ),
            "heavy_tails" => ExperimentConfig::HeavyTails(
                rest.try_into().map_err(|e| Error::Config(e.to_string()))?,
            ),
            other => {
                return Err(Error::Config(format!(
                    "unknown experiment `{other}` (expected approx_quality, \
                     robustness_outliers, or heavy_tails)"
                )))
            }
        };
        parsed.validate()?;
        Ok(parsed)
    }

    fn validate(&self) -> Result<()> {
        let reps = match self {
            ExperimentConfig::ApproxQuality(c) => c.repetitions,
            ExperimentConfig::RobustnessOutliers(c) => c.repetitions,
            ExperimentConfig::HeavyTails(c) => c.repetitions,
        };
        if reps == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if let ExperimentConfig::RobustnessOutliers(c) = self {
            if c.setting == Family::StudentPair {
                return Err(Error::Config(
                    "robustness setting must be gaussian_pair, circles, or fragmented_hypercube"
                        .into(),
                ));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Vec<BenchRow>> {
        match self {
            ExperimentConfig::ApproxQuality(c) => run_approx_quality(c),
            ExperimentConfig::RobustnessOutliers(c) => run_robustness_outliers(c),
            ExperimentConfig::HeavyTails(c) => run_heavy_tails(c),
        }
    }

    pub fn meta(&self) -> RunMeta {
        match self {
            ExperimentConfig::ApproxQuality(c) => RunMeta {
                experiment: "approx_quality".into(),
                base_seed: c.base_seed,
                repetitions: c.repetitions,
                baseline: Some(format!(
                    "analytic center gap shift*sqrt(d) of the shifted Gaussian pair (shift = {})",
                    c.shift
                )),
            },
            ExperimentConfig::RobustnessOutliers(c) => RunMeta {
                experiment: "robustness_outliers".into(),
                base_seed: c.base_seed,
                repetitions: c.repetitions,
                baseline: Some(
                    "paired clean pair of the same repetition, same estimator seed".into(),
                ),
            },
            ExperimentConfig::HeavyTails(c) => RunMeta {
                experiment: "heavy_tails".into(),
                base_seed: c.base_seed,
                repetitions: c.repetitions,
                baseline: Some(
                    "per-method value on a dedicated Gaussian (dof = inf) pair with the same \
                     shift, computed once per direction count"
                        .into(),
                ),
            },
        }
    }
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Median wall-clock seconds of `f` over at least five monotonic repeats.
pub fn median_time<F: FnMut()>(repeats: usize, mut f: F) -> f64 {
    let r = repeats.max(5);
    let mut times: Vec<f64> = (0..r)
        .map(|_| {
            let t0 = Instant::now();
            f();
            t0.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_unstable_by(f64::total_cmp);
    times[times.len() / 2]
}

/// Approximation-quality sweep: relative error against the known Gaussian
/// center gap, per (d, K, n_alpha) cell.
pub fn run_approx_quality(cfg: &ApproxQualityConfig) -> Result<Vec<BenchRow>> {
    if cfg.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &d in &cfg.dims {
        let truth = cfg.shift * (d as f64).sqrt();
        if !(truth > 0.0) {
            return Err(Error::DegenerateBaseline(truth));
        }
        // One pair per (d, repetition), shared by every (K, n_alpha) cell
        // and by the baseline method, so cells differ only in the knob
        // under study.
        let pair_for = |rep: usize| -> Result<(u64, (PointCloud, PointCloud))> {
            let rep_seed = derive_seed(cfg.base_seed, &[APPROX_REP, d as u64, rep as u64]);
            let spec = GeneratorSpec {
                family: Family::GaussianPair,
                d,
                n: cfg.n,
                shift: cfg.shift,
                seed: rep_seed,
                ..GeneratorSpec::default()
            };
            Ok((rep_seed, gen_gaussian_pair(&spec)?))
        };
        for &k in &cfg.direction_counts {
            for &n_alpha in &cfg.n_alphas {
                let params = MetricParams {
                    p: cfg.p,
                    epsilon: 0.0,
                    n_alpha,
                    k,
                    ..MetricParams::default()
                };
                let mut dr_errs = Vec::with_capacity(cfg.repetitions);
                let mut sw_errs = Vec::with_capacity(cfg.repetitions);
                for rep in 0..cfg.repetitions {
                    let (rep_seed, (x, y)) = pair_for(rep)?;
                    let params = MetricParams {
                        seed: rep_seed,
                        ..params
                    };
                    let dr = dr_distance(&x, &y, &params)?.value;
                    dr_errs.push(relative_error(dr, truth)?);
                    if cfg.include_max_sw {
                        let sw = sliced_wasserstein(
                            &x,
                            &y,
                            cfg.p,
                            k,
                            derive_seed(rep_seed, &[SW_DIRECTIONS]),
                            SwMode::Max,
                        )?;
                        sw_errs.push(relative_error(sw, truth)?);
                    }
                }
                let timing = |is_dr: bool| -> Result<Option<f64>> {
                    if !cfg.timing {
                        return Ok(None);
                    }
                    let (rep_seed, (x, y)) = pair_for(0)?;
                    let params = MetricParams {
                        seed: rep_seed,
                        ..params
                    };
                    Ok(Some(median_time(5, || {
                        if is_dr {
                            let _ = dr_distance(&x, &y, &params);
                        } else {
                            let _ = sliced_wasserstein(
                                &x,
                                &y,
                                cfg.p,
                                k,
                                derive_seed(rep_seed, &[SW_DIRECTIONS]),
                                SwMode::Max,
                            );
                        }
                    })))
                };
                let (mean, std) = mean_and_std(&dr_errs);
                rows.push(BenchRow {
                    method: "dr".into(),
                    d,
                    k: Some(k),
                    n_alpha: Some(n_alpha),
                    epsilon: Some(0.0),
                    fraction: None,
                    dof: None,
                    mean_rel_error: mean,
                    std_rel_error: std,
                    wall_secs: timing(true)?,
                });
                if cfg.include_max_sw {
                    let (mean, std) = mean_and_std(&sw_errs);
                    rows.push(BenchRow {
                        method: "max_sw".into(),
                        d,
                        k: Some(k),
                        n_alpha: None,
                        epsilon: None,
                        fraction: None,
                        dof: None,
                        mean_rel_error: mean,
                        std_rel_error: std,
                        wall_secs: timing(false)?,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Clean pair for one robustness repetition.
fn robustness_pair(
    cfg: &RobustnessOutliersConfig,
    rep_seed: u64,
) -> Result<(PointCloud, PointCloud)> {
    match cfg.setting {
        Family::GaussianPair => gen_gaussian_pair(&GeneratorSpec {
            family: Family::GaussianPair,
            d: cfg.d,
            n: cfg.n,
            shift: cfg.shift,
            seed: rep_seed,
            ..GeneratorSpec::default()
        }),
        Family::Circles => gen_circles(cfg.n, cfg.noise, cfg.factor, rep_seed),
        Family::FragmentedHypercube => gen_fragmented_hypercube(cfg.n, rep_seed),
        Family::StudentPair => Err(Error::Config(
            "robustness setting must be gaussian_pair, circles, or fragmented_hypercube".into(),
        )),
    }
}

/// Robustness sweep: paired clean/contaminated relative errors per
/// (method, fraction) cell.
pub fn run_robustness_outliers(cfg: &RobustnessOutliersConfig) -> Result<Vec<BenchRow>> {
    if cfg.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let d = match cfg.setting {
        Family::GaussianPair => cfg.d,
        _ => 2,
    };
    let contam_spec = |seed: u64| ContaminationSpec {
        scheme: cfg.scheme,
        fraction: 0.0,
        box_lower: Some(vec![cfg.box_lower; d]),
        box_upper: Some(vec![cfg.box_upper; d]),
        seed,
    };
    let dr_params = |epsilon: f64, seed: u64| MetricParams {
        p: cfg.p,
        epsilon,
        n_alpha: cfg.n_alpha,
        k: cfg.k,
        seed,
        ..MetricParams::default()
    };
    // errs[method][fraction] collects one relative error per repetition.
    let n_methods = cfg.epsilons.len() + usize::from(cfg.include_sw) + usize::from(d == 1);
    let mut errs = vec![vec![Vec::with_capacity(cfg.repetitions); cfg.fractions.len()]; n_methods];
    for rep in 0..cfg.repetitions {
        let rep_seed = derive_seed(cfg.base_seed, &[ROBUST_REP, rep as u64]);
        let (x, y) = robustness_pair(cfg, rep_seed)?;
        // Clean values, one per method, shared by every fraction.
        let mut clean = Vec::with_capacity(n_methods);
        for &eps in &cfg.epsilons {
            clean.push(dr_distance(&x, &y, &dr_params(eps, rep_seed))?.value);
        }
        if cfg.include_sw {
            clean.push(sliced_wasserstein(
                &x,
                &y,
                cfg.p,
                cfg.k,
                derive_seed(rep_seed, &[SW_DIRECTIONS]),
                SwMode::Mean,
            )?);
        }
        if d == 1 {
            clean.push(wasserstein_1d(x.data(), y.data(), cfg.p)?);
        }
        for (fi, &fraction) in cfg.fractions.iter().enumerate() {
            let pollute = |cloud: &PointCloud, which: u64| -> Result<PointCloud> {
                contaminate(
                    cloud,
                    &ContaminationSpec {
                        fraction,
                        ..contam_spec(derive_seed(rep_seed, &[CONTAM_DRAW, fi as u64, which]))
                    },
                )
            };
            let xc = if cfg.contaminate_both {
                pollute(&x, 0)?
            } else {
                x.clone()
            };
            let yc = pollute(&y, 1)?;
            let mut mi = 0;
            for &eps in &cfg.epsilons {
                let v = dr_distance(&xc, &yc, &dr_params(eps, rep_seed))?.value;
                errs[mi][fi].push(relative_error(v, clean[mi])?);
                mi += 1;
            }
            if cfg.include_sw {
                let v = sliced_wasserstein(
                    &xc,
                    &yc,
                    cfg.p,
                    cfg.k,
                    derive_seed(rep_seed, &[SW_DIRECTIONS]),
                    SwMode::Mean,
                )?;
                errs[mi][fi].push(relative_error(v, clean[mi])?);
                mi += 1;
            }
            if d == 1 {
                let v = wasserstein_1d(xc.data(), yc.data(), cfg.p)?;
                errs[mi][fi].push(relative_error(v, clean[mi])?);
            }
        }
    }
    // One representative wall time per method, measured on the repetition-0
    // clean pair; filled only on request.
    let walls: Vec<Option<f64>> = if cfg.timing {
        let rep_seed = derive_seed(cfg.base_seed, &[ROBUST_REP, 0]);
        let (x, y) = robustness_pair(cfg, rep_seed)?;
        let mut walls = Vec::with_capacity(n_methods);
        for &eps in &cfg.epsilons {
            let p = dr_params(eps, rep_seed);
            walls.push(Some(median_time(5, || {
                let _ = dr_distance(&x, &y, &p);
            })));
        }
        if cfg.include_sw {
            walls.push(Some(median_time(5, || {
                let _ = sliced_wasserstein(
                    &x,
                    &y,
                    cfg.p,
                    cfg.k,
                    derive_seed(rep_seed, &[SW_DIRECTIONS]),
                    SwMode::Mean,
                );
            })));
        }
        if d == 1 {
            walls.push(Some(median_time(5, || {
                let _ = wasserstein_1d(x.data(), y.data(), cfg.p);
            })));
        }
        walls
    } else {
        vec![None; n_methods]
    };
    let mut rows = Vec::new();
    let mut push_rows = |mi: usize, method: &str, k, n_alpha, epsilon| {
        for (fi, &fraction) in cfg.fractions.iter().enumerate() {
            let (mean, std) = mean_and_std(&errs[mi][fi]);
            rows.push(BenchRow {
                method: method.into(),
                d,
                k,
                n_alpha,
                epsilon,
                fraction: Some(fraction),
                dof: None,
                mean_rel_error: mean,
                std_rel_error: std,
                wall_secs: walls[mi],
            });
        }
    };
    let mut mi = 0;
    for &eps in &cfg.epsilons {
        push_rows(mi, "dr", Some(cfg.k), Some(cfg.n_alpha), Some(eps));
        mi += 1;
    }
    if cfg.include_sw {
        push_rows(mi, "sw", Some(cfg.k), None, None);
        mi += 1;
    }
    if d == 1 {
        push_rows(mi, "w1d", None, None, None);
    }
    Ok(rows)
}

/// Heavy-tail sweep: relative error against a per-method Gaussian baseline,
/// per (method, dof, K) cell.
pub fn run_heavy_tails(cfg: &HeavyTailsConfig) -> Result<Vec<BenchRow>> {
    if cfg.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let baseline_seed = derive_seed(cfg.base_seed, &[HEAVY_BASELINE]);
    let (bx, by) = gen_student_pair(cfg.d, cfg.n, f64::INFINITY, cfg.shift, baseline_seed)?;
    let dr_params = |epsilon: f64, k: usize, seed: u64| MetricParams {
        p: cfg.p,
        epsilon,
        n_alpha: cfg.n_alpha,
        k,
        seed,
        depth_notion: cfg.depth_notion,
        ..MetricParams::default()
    };
    let mut rows = Vec::new();
    for &k in &cfg.direction_counts {
        // Per-method clean baselines at this direction count.
        let mut baselines = Vec::new();
        for &eps in &cfg.epsilons {
            baselines.push(dr_distance(&bx, &by, &dr_params(eps, k, baseline_seed))?.value);
        }
        if cfg.include_sw {
            baselines.push(sliced_wasserstein(
                &bx,
                &by,
                cfg.p,
                k,
                derive_seed(baseline_seed, &[SW_DIRECTIONS]),
                SwMode::Mean,
            )?);
        }
        // Representative per-method wall times at this direction count,
        // measured on the baseline pair; filled only on request.
        let walls: Vec<Option<f64>> = if cfg.timing {
            let mut walls = Vec::with_capacity(baselines.len());
            for &eps in &cfg.epsilons {
                let p = dr_params(eps, k, baseline_seed);
                walls.push(Some(median_time(5, || {
                    let _ = dr_distance(&bx, &by, &p);
                })));
            }
            if cfg.include_sw {
                walls.push(Some(median_time(5, || {
                    let _ = sliced_wasserstein(
                        &bx,
                        &by,
                        cfg.p,
                        k,
                        derive_seed(baseline_seed, &[SW_DIRECTIONS]),
                        SwMode::Mean,
                    );
                })));
            }
            walls
        } else {
            vec![None; baselines.len()]
        };
        for (di, &dof) in cfg.dofs.iter().enumerate() {
            let mut errs = vec![Vec::with_capacity(cfg.repetitions); baselines.len()];
            for rep in 0..cfg.repetitions {
                let rep_seed =
                    derive_seed(cfg.base_seed, &[HEAVY_REP, di as u64, rep as u64]);
                let (x, y) = gen_student_pair(cfg.d, cfg.n, dof, cfg.shift, rep_seed)?;
                let mut mi = 0;
                for &eps in &cfg.epsilons {
                    let v = dr_distance(&x, &y, &dr_params(eps, k, rep_seed))?.value;
                    errs[mi].push(relative_error(v, baselines[mi])?);
                    mi += 1;
                }
                if cfg.include_sw {
                    let v = sliced_wasserstein(
                        &x,
                        &y,
                        cfg.p,
                        k,
                        derive_seed(rep_seed, &[SW_DIRECTIONS]),
                        SwMode::Mean,
                    )?;
                    errs[mi].push(relative_error(v, baselines[mi])?);
                }
            }
            let mut mi = 0;
            for &eps in &cfg.epsilons {
                let (mean, std) = mean_and_std(&errs[mi]);
                rows.push(BenchRow {
                    method: "dr".into(),
                    d: cfg.d,
                    k: Some(k),
                    n_alpha: Some(cfg.n_alpha),
                    epsilon: Some(eps),
                    fraction: None,
                    dof: Some(dof),
                    mean_rel_error: mean,
                    std_rel_error: std,
                    wall_secs: walls[mi],
                });
                mi += 1;
            }
            if cfg.include_sw {
                let (mean, std) = mean_and_std(&errs[mi]);
                rows.push(BenchRow {
                    method: "sw".into(),
                    d: cfg.d,
                    k: Some(k),
                    n_alpha: None,
                    epsilon: None,
                    fraction: None,
                    dof: Some(dof),
                    mean_rel_error: mean,
                    std_rel_error: std,
                    wall_secs: walls[mi],
                });
            }
        }
    }
    Ok(rows)
}

const CSV_HEADER: &str = "method,d,k,n_alpha,epsilon,fraction,dof,mean_rel_error,std_rel_error,wall_secs";

/// Render rows as CSV with a fixed header; floats carry 17 significant
/// digits so tables round-trip exactly.
pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt_f = |v: &Option<f64>| v.map(crate::io::format_g17).unwrap_or_default();
    let opt_u = |v: &Option<usize>| v.map(|u| u.to_string()).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.method,
            r.d,
            opt_u(&r.k),
            opt_u(&r.n_alpha),
            opt_f(&r.epsilon),
            opt_f(&r.fraction),
            opt_f(&r.dof),
            crate::io::format_g17(r.mean_rel_error),
            crate::io::format_g17(r.std_rel_error),
            opt_f(&r.wall_secs),
        ));
    }
    out
}

/// Render rows plus provenance as pretty JSON.
pub fn render_json(rows: &[BenchRow], meta: &RunMeta) -> String {
    #[derive(Serialize)]
    struct Table<'a> {
        meta: &'a RunMeta,
        rows: &'a [BenchRow],
    }
    let mut s = serde_json::to_string_pretty(&Table { meta, rows })
        .expect("bench rows serialize to JSON");
    s.push('\n');
    s
}
