//! Depth-based pseudo-metrics between empirical distributions.
//!
//! Two estimators are provided. `dr_distance` averages, over random depth
//! levels, the Hausdorff distance between the upper-level sets of the two
//! samples' depth functions, with both Hausdorff distances and depths
//! approximated over one shared direction set. `dd_distance` Monte-Carlo
//! integrates the pointwise gap between the two depth fields over a box.
//! One-dimensional closed forms and (max-)sliced-Wasserstein baselines
//! support validation and benchmarking.
//!
//! Every distance is a pure function of its inputs and seed: direction
//! sampling, level draws and integration points come from separate seeded
//! streams, per-level and per-point accumulators are combined with
//! order-independent operations or summed in index order, so results are
//! bit-identical with parallelism on or off.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::depth::{
    self, fold_halfspace_row, fold_projection_row, DepthNotion, HalfspaceLookup,
};
use crate::geometry::{self, dot, fill_projection_row, DirectionSet};
use crate::seedmix::derive_seed;
use crate::{Error, PointCloud, Result};

/// Tag separating the depth-level RNG stream from direction sampling.
const ALPHA_STREAM: u64 = 1;
/// Tag for the integration-point stream of `dd_distance`.
const DD_STREAM: u64 = 2;

/// How depth levels are chosen in [`dr_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelMode {
    /// Independent uniform draws on the level interval (the default).
    #[default]
    MonteCarlo,
    /// Evenly spaced midpoints of the level interval; useful when several
    /// comparisons must share exactly the same levels.
    Grid,
}

/// Parameters shared by the distance estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    /// Power of the outer mean; `p >= 1`.
    pub p: f64,
    /// Lower trimming level in `[0, 1)`: levels below `epsilon` are ignored,
    /// which shields the estimate from shallow (outlying) regions.
    pub epsilon: f64,
    /// Number of depth levels sampled by `dr_distance`.
    pub n_alpha: usize,
    /// Number of random directions.
    pub k: usize,
    pub seed: u64,
    pub depth_notion: DepthNotion,
    pub level_mode: LevelMode,
    /// Restrict levels to `[epsilon, alpha_star - epsilon]` instead of
    /// `[epsilon, alpha_star]`, trimming the deepest regions as well.
    pub trim_upper: bool,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            epsilon: 0.2,
            n_alpha: 20,
            k: 1000,
            seed: 0,
            depth_notion: DepthNotion::Halfspace,
            level_mode: LevelMode::MonteCarlo,
            trim_upper: false,
        }
    }
}

impl MetricParams {
    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() || self.p < 1.0 {
            return Err(Error::InvalidParameter {
                name: "p",
                reason: format!("power must be a finite real >= 1, got {}", self.p),
            });
        }
        if !self.epsilon.is_finite() || !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("trimming level must lie in [0, 1), got {}", self.epsilon),
            });
        }
        if self.n_alpha == 0 {
            return Err(Error::InvalidParameter {
                name: "n_alpha",
                reason: "level count must be at least 1".into(),
            });
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter {
                name: "K",
                reason: "direction count must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// One sampled depth level and the Hausdorff gap measured there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSample {
    pub alpha: f64,
    pub hausdorff: f64,
}

/// A computed distance together with the settings that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceResult {
    pub value: f64,
    /// Smaller of the two maximal in-sample depths.
    pub alpha_star: f64,
    pub p: f64,
    pub epsilon: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub n_alpha: usize,
    pub seed: u64,
    pub depth_notion: DepthNotion,
    /// Per-level Hausdorff samples (empty for integral-type distances).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelSample>,
}

impl DistanceResult {
    /// Recompute `value` from the recorded level samples.
    pub fn value_from_levels(&self) -> f64 {
        value_of_gaps(self.levels.iter().map(|l| l.hausdorff), self.levels.len(), self.p)
    }
}

fn value_of_gaps(gaps: impl Iterator<Item = f64>, count: usize, p: f64) -> f64 {
    let mut h = 0.0;
    for g in gaps {
        h += g.powf(p);
    }
    (h / count as f64).powf(1.0 / p)
}

/// Axis-aligned integration domain for [`dd_distance`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
    mc_points: usize,
}

impl IntegrationBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, mc_points: usize) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::LengthMismatch {
                left: lower.len(),
                right: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::DegenerateBox("box has no coordinates".into()));
        }
        for (c, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::DegenerateBox(format!(
                    "coordinate {c}: requires lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        if mc_points == 0 {
            return Err(Error::InvalidParameter {
                name: "mc_points",
                reason: "integration needs at least one sample".into(),
            });
        }
        Ok(Self {
            lower,
            upper,
            mc_points,
        })
    }

    /// Bounding box of the given clouds, inflated by 10% of each side's
    /// width (or by 0.5 where the width is zero).
    pub fn around_clouds(clouds: &[&PointCloud], mc_points: usize) -> Result<Self> {
        let d = match clouds.first() {
            Some(c) => c.dim(),
            None => return Err(Error::EmptySample),
        };
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for cloud in clouds {
            if cloud.dim() != d {
                return Err(Error::DimensionMismatch {
                    left: cloud.dim(),
                    right: d,
                });
            }
            for p in cloud.points() {
                for c in 0..d {
                    lo[c] = lo[c].min(p[c]);
                    hi[c] = hi[c].max(p[c]);
                }
            }
        }
        for c in 0..d {
            let width = hi[c] - lo[c];
            let pad = if width > 0.0 { 0.1 * width } else { 0.5 };
            lo[c] -= pad;
            hi[c] += pad;
        }
        Self::new(lo, hi, mc_points)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn mc_points(&self) -> usize {
        self.mc_points
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }
}

/// Depth values of one cloud arranged for fast level queries.
struct DepthSummary {
    /// Point indices ordered by depth descending (ties by index).
    order_desc: Vec<u32>,
    /// Depth values in the same order.
    sorted_desc: Vec<f64>,
    max: f64,
    /// How many points attain the maximum depth.
    n_top: usize,
}

impl DepthSummary {
    fn new(values: &[f64]) -> Self {
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| {
            values[b as usize]
                .total_cmp(&values[a as usize])
                .then(a.cmp(&b))
        });
        let sorted: Vec<f64> = order.iter().map(|&i| values[i as usize]).collect();
        let max = sorted[0];
        let n_top = sorted.iter().take_while(|&&v| v == max).count();
        Self {
            order_desc: order,
            sorted_desc: sorted,
            max,
            n_top,
        }
    }

    /// Size of the region `{ i : D_i > alpha }`, falling back to the set of
    /// deepest points when the strict cut would come up empty.
    fn region_size(&self, alpha: f64) -> usize {
        let j = self.sorted_desc.partition_point(|&v| v > alpha);
        if j == 0 {
            self.n_top
        } else {
            j
        }
    }
}

/// Depth of every point of `points`, recomputing projections direction by
/// direction instead of materializing the projection matrix; bit-identical
/// to the matrix-based functions in the depth module.
fn streaming_depth_values(
    points: &PointCloud,
    dirs: &DirectionSet,
    notion: DepthNotion,
) -> Vec<f64> {
    struct Pass1 {
        acc: Vec<f64>,
        row: Vec<f64>,
        idx: Vec<u32>,
        buf: Vec<f64>,
    }
    let n = points.n();
    let init = match notion {
        DepthNotion::Halfspace => f64::INFINITY,
        DepthNotion::Projection => 0.0,
    };
    let fresh = || Pass1 {
        acc: vec![init; n],
        row: vec![0.0; n],
        idx: Vec::new(),
        buf: Vec::new(),
    };
    let step = |state: &mut Pass1, k: usize| {
        fill_projection_row(points, dirs.direction(k), &mut state.row);
        match notion {
            DepthNotion::Halfspace => fold_halfspace_row(&state.row, &mut state.acc, &mut state.idx),
            DepthNotion::Projection => fold_projection_row(&state.row, &mut state.acc, &mut state.buf),
        }
    };
    let combine = match notion {
        DepthNotion::Halfspace => f64::min,
        DepthNotion::Projection => f64::max,
    };
    #[cfg(feature = "parallel")]
    let mut acc = {
        use rayon::prelude::*;
        (0..dirs.k())
            .into_par_iter()
            .fold(fresh, |mut state, k| {
                step(&mut state, k);
                state
            })
            .map(|state| state.acc)
            .reduce(
                || vec![init; n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x = combine(*x, y);
                    }
                    a
                },
            )
    };
    #[cfg(not(feature = "parallel"))]
    let mut acc = {
        let _ = combine;
        let mut state = fresh();
        for k in 0..dirs.k() {
            step(&mut state, k);
        }
        state.acc
    };
    if notion == DepthNotion::Projection {
        for v in &mut acc {
            *v = 1.0 / (1.0 + *v);
        }
    }
    acc
}

/// `pm[j] = max` of the first `j` depth-ordered projections (`pm[0]` is a
/// sentinel; region sizes are always at least 1).
fn build_prefix_max(row: &[f64], order_desc: &[u32], pm: &mut Vec<f64>) {
    pm.clear();
    pm.reserve(row.len() + 1);
    pm.push(f64::NEG_INFINITY);
    let mut best = f64::NEG_INFINITY;
    for &i in order_desc {
        let v = row[i as usize];
        if v > best {
            best = v;
        }
        pm.push(best);
    }
}

/// Per-level Hausdorff gaps `max_k |h^X_k - h^Y_k|`, streamed by direction.
fn level_gaps(
    x: &PointCloud,
    y: &PointCloud,
    dirs: &DirectionSet,
    sx: &DepthSummary,
    sy: &DepthSummary,
    levels: &[f64],
) -> Vec<f64> {
    struct Pass2 {
        gaps: Vec<f64>,
        row: Vec<f64>,
        pm_x: Vec<f64>,
        pm_y: Vec<f64>,
    }
    let l = levels.len();
    let jx: Vec<usize> = levels.iter().map(|&a| sx.region_size(a)).collect();
    let jy: Vec<usize> = levels.iter().map(|&a| sy.region_size(a)).collect();
    let fresh = || Pass2 {
        gaps: vec![0.0; l],
        row: Vec::new(),
        pm_x: Vec::new(),
        pm_y: Vec::new(),
    };
    let step = |state: &mut Pass2, k: usize| {
        let u = dirs.direction(k);
        state.row.resize(x.n(), 0.0);
        fill_projection_row(x, u, &mut state.row);
        build_prefix_max(&state.row, &sx.order_desc, &mut state.pm_x);
        state.row.resize(y.n(), 0.0);
        fill_projection_row(y, u, &mut state.row);
        build_prefix_max(&state.row, &sy.order_desc, &mut state.pm_y);
        for (g, (&ix, &iy)) in state.gaps.iter_mut().zip(jx.iter().zip(&jy)) {
            let gap = (state.pm_x[ix] - state.pm_y[iy]).abs();
            if gap > *g {
                *g = gap;
            }
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..dirs.k())
            .into_par_iter()
            .fold(fresh, |mut state, k| {
                step(&mut state, k);
                state
            })
            .map(|state| state.gaps)
            .reduce(
                || vec![0.0; l],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        if y > *x {
                            *x = y;
                        }
                    }
                    a
                },
            )
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut state = fresh();
        for k in 0..dirs.k() {
            step(&mut state, k);
        }
        state.gaps
    }
}

/// Depth-region distance between two samples.
///
/// One direction set shared by both clouds drives the depth estimates and
/// the support functions. The smaller of the two maximal depths bounds the
/// level interval; `n_alpha` levels are drawn (or gridded) in
/// `[epsilon, alpha_star]`, and the distance is the `L^p` mean over levels
/// of the per-level Hausdorff gap between the two upper-level sets.
pub fn dr_distance(x: &PointCloud, y: &PointCloud, params: &MetricParams) -> Result<DistanceResult> {
    params.validate()?;
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let dirs = geometry::sample_directions(x.dim(), params.k, params.seed)?;
    dr_distance_with_directions(x, y, params, &dirs)
}

/// [`dr_distance`] over a caller-supplied direction set.
///
/// `params.k` and `params.seed` are ignored in favor of the direction set's
/// own; the level stream is still derived from `params.seed`.
pub fn dr_distance_with_directions(
    x: &PointCloud,
    y: &PointCloud,
    params: &MetricParams,
    dirs: &DirectionSet,
) -> Result<DistanceResult> {
    params.validate()?;
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if dirs.d() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: dirs.d(),
            right: x.dim(),
        });
    }
    let sx = DepthSummary::new(&streaming_depth_values(x, dirs, params.depth_notion));
    let sy = DepthSummary::new(&streaming_depth_values(y, dirs, params.depth_notion));
    let alpha_star = sx.max.min(sy.max);
    let hi = if params.trim_upper {
        alpha_star - params.epsilon
    } else {
        alpha_star
    };
    if params.epsilon >= hi {
        return Err(Error::LevelRange {
            epsilon: params.epsilon,
            alpha_star: hi,
        });
    }
    let levels: Vec<f64> = match params.level_mode {
        LevelMode::MonteCarlo => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, &[ALPHA_STREAM]));
            (0..params.n_alpha)
                .map(|_| params.epsilon + rng.random::<f64>() * (hi - params.epsilon))
                .collect()
        }
        LevelMode::Grid => (0..params.n_alpha)
            .map(|l| {
                params.epsilon + (l as f64 + 0.5) * (hi - params.epsilon) / params.n_alpha as f64
            })
            .collect(),
    };
    let gaps = level_gaps(x, y, dirs, &sx, &sy, &levels);
    let value = value_of_gaps(gaps.iter().copied(), gaps.len(), params.p);
    Ok(DistanceResult {
        value,
        alpha_star,
        p: params.p,
        epsilon: params.epsilon,
        k: dirs.k(),
        n_alpha: params.n_alpha,
        seed: params.seed,
        depth_notion: params.depth_notion,
        levels: levels
            .iter()
            .zip(&gaps)
            .map(|(&alpha, &hausdorff)| LevelSample { alpha, hausdorff })
            .collect(),
    })
}

/// Depth-region distance evaluated at explicit levels over explicit
/// directions, so several pairs can share both.
///
/// Levels at or above a cloud's maximal depth fall back to that cloud's
/// deepest points; with one direction set and one level list this estimator
/// is a pseudo-metric, in particular `d(X,Z) <= d(X,Y) + d(Y,Z)` for `p = 1`.
pub fn dr_distance_at_levels(
    x: &PointCloud,
    y: &PointCloud,
    dirs: &DirectionSet,
    levels: &[f64],
    p: f64,
    notion: DepthNotion,
) -> Result<DistanceResult> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("power must be a finite real >= 1, got {p}"),
        });
    }
    if levels.is_empty() {
        return Err(Error::InvalidParameter {
            name: "levels",
            reason: "need at least one depth level".into(),
        });
    }
    if levels.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "levels",
            reason: "levels must be finite".into(),
        });
    }
    if x.dim() != y.dim() || dirs.d() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim().min(y.dim()).min(dirs.d()),
            right: x.dim().max(y.dim()).max(dirs.d()),
        });
    }
    let sx = DepthSummary::new(&streaming_depth_values(x, dirs, notion));
    let sy = DepthSummary::new(&streaming_depth_values(y, dirs, notion));
    let alpha_star = sx.max.min(sy.max);
    let gaps = level_gaps(x, y, dirs, &sx, &sy, levels);
    let value = value_of_gaps(gaps.iter().copied(), gaps.len(), p);
    Ok(DistanceResult {
        value,
        alpha_star,
        p,
        epsilon: 0.0,
        k: dirs.k(),
        n_alpha: levels.len(),
        seed: dirs.seed(),
        depth_notion: notion,
        levels: levels
            .iter()
            .zip(&gaps)
            .map(|(&alpha, &hausdorff)| LevelSample { alpha, hausdorff })
            .collect(),
    })
}

/// Depth-field distance: Monte Carlo estimate of the `L^p` norm, over the
/// box, of the pointwise gap between the two halfspace-depth fields.
///
/// Only halfspace depth supports the out-of-sample evaluation this needs.
pub fn dd_distance(
    x: &PointCloud,
    y: &PointCloud,
    params: &MetricParams,
    bx: &IntegrationBox,
) -> Result<DistanceResult> {
    params.validate()?;
    if params.depth_notion != DepthNotion::Halfspace {
        return Err(Error::UnsupportedDepthNotion {
            notion: "projection",
            reason: "out-of-sample depth evaluation is defined for halfspace depth only",
        });
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if bx.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: bx.dim(),
            right: x.dim(),
        });
    }
    let d = x.dim();
    let dirs = geometry::sample_directions(d, params.k, params.seed)?;
    let mx = geometry::project(x, &dirs)?;
    let my = geometry::project(y, &dirs)?;
    let alpha_star = depth::halfspace_depths(&mx)
        .max_depth()
        .min(depth::halfspace_depths(&my).max_depth());
    let lx = HalfspaceLookup::new(&mx);
    let ly = HalfspaceLookup::new(&my);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, &[DD_STREAM]));
    let mc = bx.mc_points();
    let mut zs = vec![0.0; mc * d];
    for z in zs.chunks_exact_mut(d) {
        for (c, coord) in z.iter_mut().enumerate() {
            *coord = bx.lower()[c] + rng.random::<f64>() * (bx.upper()[c] - bx.lower()[c]);
        }
    }
    let term = |z: &[f64], proj: &mut Vec<f64>| -> f64 {
        proj.clear();
        proj.extend((0..dirs.k()).map(|k| dot(dirs.direction(k), z)));
        let dx = lx.depth_at(proj).expect("projection count matches lookup");
        let dy = ly.depth_at(proj).expect("projection count matches lookup");
        (dx - dy).abs().powf(params.p)
    };
    #[cfg(feature = "parallel")]
    let terms: Vec<f64> = {
        use rayon::prelude::*;
        zs.par_chunks_exact(d)
            .map_init(Vec::new, |proj, z| term(z, proj))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let terms: Vec<f64> = {
        let mut proj = Vec::new();
        zs.chunks_exact(d).map(|z| term(z, &mut proj)).collect()
    };
    let mean = terms.iter().sum::<f64>() / mc as f64;
    let value = (bx.volume() * mean).powf(1.0 / params.p);
    Ok(DistanceResult {
        value,
        alpha_star,
        p: params.p,
        epsilon: params.epsilon,
        k: params.k,
        n_alpha: params.n_alpha,
        seed: params.seed,
        depth_notion: params.depth_notion,
        levels: Vec::new(),
    })
}

/// Empirical quantile `inf { t : F(t) >= alpha }` of a sorted sample.
fn quantile_sorted(v: &[f64], alpha: f64) -> f64 {
    let n = v.len();
    let idx = ((alpha * n as f64).ceil() as usize).clamp(1, n);
    v[idx - 1]
}

fn sorted_copy(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    s
}

/// One-dimensional depth-region distance in closed form.
///
/// In one dimension the upper-level set at level `alpha` is the interval
/// between the `alpha` and `1 - alpha` empirical quantiles, so the
/// per-level Hausdorff gap is the larger of the two endpoint gaps. The
/// integral over levels in `[epsilon, 1/2]` is evaluated exactly: the
/// integrand is piecewise constant between quantile breakpoints.
pub fn dr_1d_closed_form(x: &[f64], y: &[f64], p: f64, epsilon: f64) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("power must be a finite real >= 1, got {p}"),
        });
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("trimming level must be nonnegative, got {epsilon}"),
        });
    }
    if epsilon >= 0.5 {
        return Err(Error::LevelRange {
            epsilon,
            alpha_star: 0.5,
        });
    }
    let xs = sorted_copy(x);
    let ys = sorted_copy(y);
    let mut cuts = vec![epsilon, 0.5];
    for (len, _) in [(xs.len(), 0), (ys.len(), 1)] {
        for j in 1..len {
            let t = j as f64 / len as f64;
            if t > epsilon && t < 0.5 {
                cuts.push(t);
            }
            let t = 1.0 - t;
            if t > epsilon && t < 0.5 {
                cuts.push(t);
            }
        }
    }
    cuts.sort_unstable_by(f64::total_cmp);
    cuts.dedup();
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let t = 0.5 * (a + b);
        let low = quantile_sorted(&xs, t) - quantile_sorted(&ys, t);
        let high = quantile_sorted(&xs, 1.0 - t) - quantile_sorted(&ys, 1.0 - t);
        acc += (b - a) * low.abs().max(high.abs()).powf(p);
    }
    Ok((acc / (0.5 - epsilon)).powf(1.0 / p))
}

/// One-dimensional depth-field distance in closed form over `[lower, upper]`.
///
/// The 1D halfspace-depth field of a sample is the piecewise-constant
/// function `min(#{x_i <= z}, #{x_i >= z}) / n`, so the `L^p` gap integrates
/// exactly over the intervals between consecutive sample values.
pub fn dd_1d_closed_form(x: &[f64], y: &[f64], p: f64, lower: f64, upper: f64) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("power must be a finite real >= 1, got {p}"),
        });
    }
    if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
        return Err(Error::DegenerateBox(format!(
            "requires lower < upper, got [{lower}, {upper}]"
        )));
    }
    let xs = sorted_copy(x);
    let ys = sorted_copy(y);
    let depth_1d = |v: &[f64], z: f64| -> f64 {
        let le = v.partition_point(|&t| t <= z);
        let ge = v.len() - v.partition_point(|&t| t < z);
        le.min(ge) as f64 / v.len() as f64
    };
    let mut cuts = vec![lower, upper];
    for v in xs.iter().chain(&ys) {
        if *v > lower && *v < upper {
            cuts.push(*v);
        }
    }
    cuts.sort_unstable_by(f64::total_cmp);
    cuts.dedup();
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let z = 0.5 * (a + b);
        acc += (b - a) * (depth_1d(&xs, z) - depth_1d(&ys, z)).abs().powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// One-dimensional `p`-Wasserstein distance via quantile coupling.
///
/// Equal sizes reduce to the mean of order-statistic gaps; unequal sizes
/// integrate the quantile gap exactly over the shared breakpoint grid.
pub fn wasserstein_1d(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("power must be a finite real >= 1, got {p}"),
        });
    }
    let xs = sorted_copy(x);
    let ys = sorted_copy(y);
    if xs.len() == ys.len() {
        let n = xs.len();
        let mut acc = 0.0;
        for (a, b) in xs.iter().zip(&ys) {
            acc += (a - b).abs().powf(p);
        }
        return Ok((acc / n as f64).powf(1.0 / p));
    }
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (1usize, 1usize);
    let mut prev = 0.0;
    let mut acc = 0.0;
    loop {
        let bi = i as f64 / n as f64;
        let bj = j as f64 / m as f64;
        let b = bi.min(bj);
        acc += (b - prev) * (xs[i - 1] - ys[j - 1]).abs().powf(p);
        prev = b;
        if b >= 1.0 {
            break;
        }
        if bi == b {
            i += 1;
        }
        if bj == b {
            j += 1;
        }
    }
    Ok(acc.powf(1.0 / p))
}

/// Aggregation mode for [`sliced_wasserstein`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwMode {
    /// `L^p` mean of per-direction distances.
    Mean,
    /// Maximum per-direction distance.
    Max,
}

/// Sliced (mean) or max-sliced Wasserstein distance over `K` random
/// directions.
pub fn sliced_wasserstein(
    x: &PointCloud,
    y: &PointCloud,
    p: f64,
    k: usize,
    seed: u64,
    mode: SwMode,
) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("power must be a finite real >= 1, got {p}"),
        });
    }
    let dirs = geometry::sample_directions(x.dim(), k, seed)?;
    let slice = |k: usize, rows: &mut (Vec<f64>, Vec<f64>)| -> f64 {
        let u = dirs.direction(k);
        rows.0.resize(x.n(), 0.0);
        fill_projection_row(x, u, &mut rows.0);
        rows.1.resize(y.n(), 0.0);
        fill_projection_row(y, u, &mut rows.1);
        wasserstein_1d(&rows.0, &rows.1, p).expect("projections of nonempty clouds")
    };
    #[cfg(feature = "parallel")]
    let per_direction: Vec<f64> = {
        use rayon::prelude::*;
        (0..dirs.k())
            .into_par_iter()
            .map_init(|| (Vec::new(), Vec::new()), |rows, k| slice(k, rows))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_direction: Vec<f64> = {
        let mut rows = (Vec::new(), Vec::new());
        (0..dirs.k()).map(|k| slice(k, &mut rows)).collect()
    };
    Ok(match mode {
        SwMode::Mean => value_of_gaps(per_direction.iter().copied(), per_direction.len(), p),
        SwMode::Max => per_direction.iter().copied().fold(0.0, f64::max),
    })
}
