//! Random-projection estimates of statistical depth.
//!
//! Both notions reduce a d-dimensional depth computation to per-direction
//! work on a shared projection matrix. Halfspace depth takes the worst
//! two-sided rank over the sampled directions; projection depth inverts the
//! largest median-absolute-deviation outlyingness. Because every direction
//! contributes a value quantized on the same grid, results are bit-identical
//! regardless of whether rows are folded sequentially or in parallel.

use serde::{Deserialize, Serialize};

use crate::geometry::{self, ProjectionMatrix};
use crate::{Error, PointCloud, Result};

/// Which depth function to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DepthNotion {
    /// Tukey halfspace depth: worst one-dimensional two-sided rank.
    #[default]
    Halfspace,
    /// Projection depth `1 / (1 + O)` with median/MAD outlyingness `O`.
    Projection,
}

/// Parameters for the convenience entry point [`sample_depths`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthParams {
    pub notion: DepthNotion,
    /// Number of random directions.
    pub k: usize,
    pub seed: u64,
}

impl Default for DepthParams {
    fn default() -> Self {
        Self {
            notion: DepthNotion::Halfspace,
            k: 1000,
            seed: 0,
        }
    }
}

/// Depth of every sample point with respect to its own cloud.
///
/// In-sample values lie in `(0, 1]`; for halfspace depth they live on the
/// grid `{ j/n : 1 <= j <= ceil(n/2) }`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthProfile {
    values: Vec<f64>,
    notion: DepthNotion,
    k: usize,
    n: usize,
}

impl DepthProfile {
    /// Depth value of point `i`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn notion(&self) -> DepthNotion {
        self.notion
    }

    /// Number of directions used.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest depth value attained in the sample.
    pub fn max_depth(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of the deepest points (always non-empty).
    pub fn argmax_indices(&self) -> Vec<usize> {
        let m = self.max_depth();
        (0..self.n).filter(|&i| self.values[i] == m).collect()
    }
}

/// Sample directions, project, and estimate depths in one call.
pub fn sample_depths(points: &PointCloud, params: &DepthParams) -> Result<DepthProfile> {
    let dirs = geometry::sample_directions(points.dim(), params.k, params.seed)?;
    let m = geometry::project(points, &dirs)?;
    Ok(match params.notion {
        DepthNotion::Halfspace => halfspace_depths(&m),
        DepthNotion::Projection => projection_depths(&m),
    })
}

/// Halfspace depth estimates from a projection matrix.
///
/// Per direction, point `i` contributes `min(s, n + 1 - s) / n` where
/// `s = #{ j : M[k][j] <= M[k][i] }` is its weak rank; the depth is the
/// minimum contribution over all directions.
pub fn halfspace_depths(m: &ProjectionMatrix) -> DepthProfile {
    let values = fold_rows(
        m,
        f64::INFINITY,
        |row, acc, scratch| fold_halfspace_row(row, acc, &mut scratch.idx),
        f64::min,
    );
    DepthProfile {
        values,
        notion: DepthNotion::Halfspace,
        k: m.k(),
        n: m.n(),
    }
}

/// Projection depth estimates `1 / (1 + O_i)` from a projection matrix.
///
/// `O_i` is the largest `|M[k][i] - med_k| / MAD_k` over directions. A
/// direction with zero MAD contributes nothing for points at its median and
/// infinite outlyingness otherwise.
pub fn projection_depths(m: &ProjectionMatrix) -> DepthProfile {
    let mut values = fold_rows(
        m,
        0.0,
        |row, acc, scratch| fold_projection_row(row, acc, &mut scratch.buf),
        f64::max,
    );
    for v in &mut values {
        *v = 1.0 / (1.0 + *v);
    }
    DepthProfile {
        values,
        notion: DepthNotion::Projection,
        k: m.k(),
        n: m.n(),
    }
}

/// Halfspace depth of an out-of-sample point from its projections.
///
/// `z_proj[k]` must be the projection of the query point onto direction `k`
/// of the same direction set the matrix was built with. Unlike in-sample
/// depths the result may be exactly 0 (point outside every projected range).
pub fn halfspace_depth_at(z_proj: &[f64], m: &ProjectionMatrix) -> Result<f64> {
    if z_proj.len() != m.k() {
        return Err(Error::LengthMismatch {
            left: z_proj.len(),
            right: m.k(),
        });
    }
    let n = m.n();
    let mut best = f64::INFINITY;
    for (k, &z) in z_proj.iter().enumerate() {
        let row = m.row(k);
        let mut le = 0usize;
        let mut ge = 0usize;
        for &v in row {
            if v <= z {
                le += 1;
            }
            if v >= z {
                ge += 1;
            }
        }
        let c = le.min(ge) as f64 / n as f64;
        if c < best {
            best = c;
            if best == 0.0 {
                break;
            }
        }
    }
    Ok(best)
}

/// Sorted-row index over a projection matrix for repeated out-of-sample
/// depth queries in `O(K log n)` each.
#[derive(Debug, Clone)]
pub struct HalfspaceLookup {
    sorted: Vec<f64>,
    k: usize,
    n: usize,
}

impl HalfspaceLookup {
    pub fn new(m: &ProjectionMatrix) -> Self {
        let mut sorted = m.values().to_vec();
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            sorted
                .par_chunks_mut(m.n())
                .for_each(|row| row.sort_unstable_by(f64::total_cmp));
        }
        #[cfg(not(feature = "parallel"))]
        for row in sorted.chunks_mut(m.n()) {
            row.sort_unstable_by(f64::total_cmp);
        }
        Self {
            sorted,
            k: m.k(),
            n: m.n(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same value as [`halfspace_depth_at`] on the originating matrix.
    pub fn depth_at(&self, z_proj: &[f64]) -> Result<f64> {
        if z_proj.len() != self.k {
            return Err(Error::LengthMismatch {
                left: z_proj.len(),
                right: self.k,
            });
        }
        let mut best = f64::INFINITY;
        for (k, &z) in z_proj.iter().enumerate() {
            let row = &self.sorted[k * self.n..(k + 1) * self.n];
            let le = row.partition_point(|&v| v <= z);
            let ge = self.n - row.partition_point(|&v| v < z);
            let c = le.min(ge) as f64 / self.n as f64;
            if c < best {
                best = c;
                if best == 0.0 {
                    break;
                }
            }
        }
        Ok(best)
    }
}

/// Exact Tukey halfspace depth of a planar query point.
///
/// An angle sweep over the circle of directions: the count of points falling
/// in the closed halfspace below the query changes only where a direction
/// becomes orthogonal to some `x_i - z`, so evaluating the count between
/// consecutive breakpoints (where it is lowest) and at the breakpoints
/// themselves finds the exact minimum in `O(n^2 log n)`.
pub fn exact_halfspace_depth_2d(z: &[f64], points: &PointCloud) -> Result<f64> {
    if points.dim() != 2 || z.len() != 2 {
        return Err(Error::DimensionMismatch {
            left: if z.len() != 2 { z.len() } else { points.dim() },
            right: 2,
        });
    }
    let n = points.n();
    let mut offsets: Vec<[f64; 2]> = Vec::with_capacity(n);
    let mut coincident = 0usize;
    for p in points.points() {
        let w = [p[0] - z[0], p[1] - z[1]];
        if w[0] == 0.0 && w[1] == 0.0 {
            coincident += 1;
        } else {
            offsets.push(w);
        }
    }
    if offsets.is_empty() {
        return Ok(1.0);
    }
    // Normalize onto one turn so that sorted-adjacent breakpoints are also
    // adjacent on the circle; the wraparound arc is handled below.
    let tau = std::f64::consts::TAU;
    let mut thetas: Vec<f64> = Vec::with_capacity(2 * offsets.len());
    for w in &offsets {
        let phi = w[1].atan2(w[0]);
        thetas.push((phi + std::f64::consts::FRAC_PI_2).rem_euclid(tau));
        thetas.push((phi - std::f64::consts::FRAC_PI_2).rem_euclid(tau));
    }
    thetas.sort_unstable_by(f64::total_cmp);
    let count_at = |theta: f64| -> usize {
        let u = [theta.cos(), theta.sin()];
        let mut c = coincident;
        for w in &offsets {
            if u[0] * w[0] + u[1] * w[1] <= 0.0 {
                c += 1;
            }
        }
        c
    };
    let mut best = n;
    let m = thetas.len();
    for i in 0..m {
        let a = thetas[i];
        let b = if i + 1 < m { thetas[i + 1] } else { thetas[0] + tau };
        best = best.min(count_at(a)).min(count_at(0.5 * (a + b)));
    }
    Ok(best as f64 / n as f64)
}

/// Per-task scratch space reused across row folds.
#[derive(Default)]
struct RowScratch {
    idx: Vec<u32>,
    buf: Vec<f64>,
}

/// Fold every row of the matrix into an accumulator with an elementwise,
/// order-independent combine (min or max), in parallel when enabled.
fn fold_rows<F>(m: &ProjectionMatrix, init: f64, fold_row: F, combine: fn(f64, f64) -> f64) -> Vec<f64>
where
    F: Fn(&[f64], &mut [f64], &mut RowScratch) + Sync + Send,
{
    let n = m.n();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        m.values()
            .par_chunks(n)
            .fold(
                || (vec![init; n], RowScratch::default()),
                |(mut acc, mut scratch), row| {
                    fold_row(row, &mut acc, &mut scratch);
                    (acc, scratch)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(
                || vec![init; n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x = combine(*x, y);
                    }
                    a
                },
            )
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = combine;
        let mut acc = vec![init; n];
        let mut scratch = RowScratch::default();
        for row in m.values().chunks(n) {
            fold_row(row, &mut acc, &mut scratch);
        }
        acc
    }
}

/// Min-update `depths` with the two-sided weak-rank contribution of one row.
pub(crate) fn fold_halfspace_row(row: &[f64], depths: &mut [f64], order: &mut Vec<u32>) {
    let n = row.len();
    order.clear();
    order.extend(0..n as u32);
    order.sort_unstable_by(|&a, &b| row[a as usize].total_cmp(&row[b as usize]));
    let mut start = 0;
    while start < n {
        let v = row[order[start] as usize];
        let mut end = start + 1;
        while end < n && row[order[end] as usize] == v {
            end += 1;
        }
        // All of order[start..end] share weak rank `end`.
        let c = end.min(n + 1 - end) as f64 / n as f64;
        for &i in &order[start..end] {
            let slot = &mut depths[i as usize];
            if c < *slot {
                *slot = c;
            }
        }
        start = end;
    }
}

/// Max-update `out` with the median/MAD outlyingness of one row.
pub(crate) fn fold_projection_row(row: &[f64], out: &mut [f64], buf: &mut Vec<f64>) {
    buf.clear();
    buf.extend_from_slice(row);
    let med = median_inplace(buf);
    buf.clear();
    buf.extend(row.iter().map(|&v| (v - med).abs()));
    let mad = median_inplace(buf);
    for (o, &v) in out.iter_mut().zip(row) {
        let dev = (v - med).abs();
        let outly = if mad > 0.0 {
            dev / mad
        } else if dev == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if outly > *o {
            *o = outly;
        }
    }
}

/// Median by selection; even lengths average the two central order statistics.
pub(crate) fn median_inplace(buf: &mut [f64]) -> f64 {
    let n = buf.len();
    debug_assert!(n > 0);
    let mid = n / 2;
    let (low, pivot, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    if n % 2 == 1 {
        *pivot
    } else {
        let lower = low.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + *pivot)
    }
}
