//! Direction sampling, projections, and support-function geometry.
//!
//! Convex upper-level sets of a depth function are compared through their
//! support functions `h_D(u) = sup { <x,u> : x in D }`: for two convex bodies
//! the Hausdorff distance equals the sup-norm gap of the support functions,
//! which this module approximates by a maximum over a finite direction set
//! shared by everything that participates in one comparison.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, PointCloud, Result};

/// Absolute tolerance on unit-norm checks for stored directions.
const NORM_TOL: f64 = 1e-12;

/// `K` unit vectors on the sphere `S^(d-1)`, reproducible from a seed.
///
/// Storage is direction-major: direction `k` is the contiguous slice
/// `[k*d, (k+1)*d)`. Regenerating with the same `(d, K, seed)` yields
/// bit-identical vectors, and a direction set sampled with count `K1 <= K2`
/// from one seed is exactly the prefix of the longer set.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Vec<f64>,
    d: usize,
    k: usize,
    seed: u64,
}

impl DirectionSet {
    /// Wrap externally produced vectors, checking unit norms.
    ///
    /// `seed` is kept as provenance only; use [`sample_directions`] for
    /// seed-driven generation.
    pub fn from_vectors(flat: Vec<f64>, d: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "d",
                reason: "dimension must be at least 1".into(),
            });
        }
        if flat.is_empty() || flat.len() % d != 0 {
            return Err(Error::LengthMismatch {
                left: flat.len(),
                right: d.max(1),
            });
        }
        for (k, u) in flat.chunks_exact(d).enumerate() {
            let norm = dot(u, u).sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidParameter {
                    name: "directions",
                    reason: format!("vector {k} has norm {norm}, expected 1"),
                });
            }
        }
        let k = flat.len() / d;
        Ok(Self {
            directions: flat,
            d,
            k,
            seed,
        })
    }

    /// Ambient dimension.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of directions.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Seed the set was sampled with (provenance tag).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Direction `k` as a coordinate slice.
    pub fn direction(&self, k: usize) -> &[f64] {
        &self.directions[k * self.d..(k + 1) * self.d]
    }

    /// Flat direction-major storage.
    pub fn as_flat(&self) -> &[f64] {
        &self.directions
    }

    /// Apply a `d x d` rotation (row-major) to every direction.
    ///
    /// Used by the isometry-invariance checks: depths and support gaps of
    /// rotated clouds over rotated directions reproduce the originals.
    pub fn rotated(&self, rotation: &[f64]) -> Result<Self> {
        if rotation.len() != self.d * self.d {
            return Err(Error::LengthMismatch {
                left: rotation.len(),
                right: self.d * self.d,
            });
        }
        let mut flat = vec![0.0; self.directions.len()];
        for (k, u) in self.directions.chunks_exact(self.d).enumerate() {
            let out = &mut flat[k * self.d..(k + 1) * self.d];
            mat_vec(rotation, u, out);
        }
        Self::from_vectors(flat, self.d, self.seed)
    }
}

/// Sample `K` directions uniformly on `S^(d-1)`.
///
/// Standard Gaussian vectors are normalized, which is rotation-invariant in
/// every dimension; a zero-norm draw (possible only in degenerate RNG states)
/// is resampled. Deterministic given the seed.
pub fn sample_directions(d: usize, k: usize, seed: u64) -> Result<DirectionSet> {
    if d == 0 {
        return Err(Error::InvalidParameter {
            name: "d",
            reason: "dimension must be at least 1".into(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "K",
            reason: "direction count must be at least 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut directions = vec![0.0; k * d];
    for u in directions.chunks_exact_mut(d) {
        loop {
            for coord in u.iter_mut() {
                *coord = StandardNormal.sample(&mut rng);
            }
            let norm = dot(u, u).sqrt();
            if norm > 0.0 {
                for coord in u.iter_mut() {
                    *coord /= norm;
                }
                break;
            }
        }
    }
    Ok(DirectionSet {
        directions,
        d,
        k,
        seed,
    })
}

/// `K x n` matrix of projections `M[k][i] = <u_k, x_i>`.
///
/// Stored direction-major so per-direction rank and max scans are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    values: Vec<f64>,
    k: usize,
    n: usize,
    direction_set_id: u64,
}

impl ProjectionMatrix {
    /// Number of directions (rows).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points (columns).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Row `k`: the projections of all points onto direction `k`.
    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.n..(k + 1) * self.n]
    }

    /// Flat direction-major storage.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Seed of the direction set this matrix was computed with.
    pub fn direction_set_id(&self) -> u64 {
        self.direction_set_id
    }
}

/// Project every point onto every direction.
pub fn project(points: &PointCloud, dirs: &DirectionSet) -> Result<ProjectionMatrix> {
    if points.dim() != dirs.d() {
        return Err(Error::DimensionMismatch {
            left: points.dim(),
            right: dirs.d(),
        });
    }
    let n = points.n();
    let mut values = vec![0.0; dirs.k() * n];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        values
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(k, row)| fill_projection_row(points, dirs.direction(k), row));
    }
    #[cfg(not(feature = "parallel"))]
    for (k, row) in values.chunks_mut(n).enumerate() {
        fill_projection_row(points, dirs.direction(k), row);
    }
    Ok(ProjectionMatrix {
        values,
        k: dirs.k(),
        n,
        direction_set_id: dirs.seed(),
    })
}

/// Approximate support-function values of one depth region.
///
/// `h[k]` is the maximum of row `k` of the projection matrix over the given
/// sample indices; `level` tags the depth level the region belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportVector {
    h: Vec<f64>,
    level: f64,
}

impl SupportVector {
    /// Support values per direction.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Depth level the region was cut at.
    pub fn level(&self) -> f64 {
        self.level
    }
}

/// Support values of the region spanned by `region` indices, at depth `level`.
pub fn support_values(
    m: &ProjectionMatrix,
    region: &[usize],
    level: f64,
) -> Result<SupportVector> {
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    for &i in region {
        if i >= m.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: m.n(),
            });
        }
    }
    let mut h = Vec::with_capacity(m.k());
    for k in 0..m.k() {
        let row = m.row(k);
        let mut best = f64::NEG_INFINITY;
        for &i in region {
            if row[i] > best {
                best = row[i];
            }
        }
        h.push(best);
    }
    Ok(SupportVector { h, level })
}

/// Hausdorff distance between two regions from their support values:
/// the sup-norm gap `max_k |hA[k] - hB[k]|`.
pub fn hausdorff_approx(ha: &SupportVector, hb: &SupportVector) -> Result<f64> {
    if ha.h.len() != hb.h.len() {
        return Err(Error::LengthMismatch {
            left: ha.h.len(),
            right: hb.h.len(),
        });
    }
    let mut best = 0.0f64;
    for (a, b) in ha.h.iter().zip(&hb.h) {
        let gap = (a - b).abs();
        if gap > best {
            best = gap;
        }
    }
    Ok(best)
}

/// A uniformly random `d x d` proper rotation (row-major), from Gram-Schmidt
/// on a Gaussian matrix with the determinant sign fixed to +1.
pub fn random_rotation(d: usize, seed: u64) -> Vec<f64> {
    assert!(d >= 1, "rotation needs d >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = vec![0.0; d * d];
    for row in 0..d {
        loop {
            for c in 0..d {
                r[row * d + c] = StandardNormal.sample(&mut rng);
            }
            // Two orthogonalization sweeps against previous rows keep the
            // result orthonormal to near machine precision.
            for _ in 0..2 {
                for prev in 0..row {
                    let mut proj = 0.0;
                    for c in 0..d {
                        proj += r[row * d + c] * r[prev * d + c];
                    }
                    for c in 0..d {
                        r[row * d + c] -= proj * r[prev * d + c];
                    }
                }
            }
            let norm = (0..d).map(|c| r[row * d + c] * r[row * d + c]).sum::<f64>();
            if norm.sqrt() > 1e-6 {
                let norm = norm.sqrt();
                for c in 0..d {
                    r[row * d + c] /= norm;
                }
                break;
            }
        }
    }
    if det_sign(&r, d) < 0.0 {
        for v in r.iter_mut().take(d) {
            *v = -*v;
        }
    }
    r
}

/// Map every point through `x -> R x + b`.
pub fn apply_isometry(points: &PointCloud, rotation: &[f64], shift: &[f64]) -> Result<PointCloud> {
    let d = points.dim();
    if rotation.len() != d * d {
        return Err(Error::LengthMismatch {
            left: rotation.len(),
            right: d * d,
        });
    }
    if shift.len() != d {
        return Err(Error::LengthMismatch {
            left: shift.len(),
            right: d,
        });
    }
    let mut data = vec![0.0; points.n() * d];
    for (i, p) in points.points().enumerate() {
        let out = &mut data[i * d..(i + 1) * d];
        mat_vec(rotation, p, out);
        for (o, s) in out.iter_mut().zip(shift) {
            *o += s;
        }
    }
    PointCloud::from_flat(data, points.n(), d)
}

/// Shared dot product; the single summation order used by every projection
/// in the crate, so recomputed projections match stored ones bit-for-bit.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Fill `row[i] = <direction, x_i>` for all points.
pub(crate) fn fill_projection_row(points: &PointCloud, direction: &[f64], row: &mut [f64]) {
    for (out, p) in row.iter_mut().zip(points.points()) {
        *out = dot(direction, p);
    }
}

fn mat_vec(m_row_major: &[f64], v: &[f64], out: &mut [f64]) {
    let d = v.len();
    for (r, o) in out.iter_mut().enumerate() {
        *o = dot(&m_row_major[r * d..(r + 1) * d], v);
    }
}

/// Sign of the determinant via Gaussian elimination with partial pivoting.
fn det_sign(m: &[f64], d: usize) -> f64 {
    let mut a = m.to_vec();
    let mut sign = 1.0;
    for col in 0..d {
        let mut pivot = col;
        for row in col + 1..d {
            if a[row * d + col].abs() > a[pivot * d + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * d + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..d {
                a.swap(col * d + c, pivot * d + c);
            }
            sign = -sign;
        }
        if a[col * d + col] < 0.0 {
            sign = -sign;
        }
        for row in col + 1..d {
            let f = a[row * d + col] / a[col * d + col];
            for c in col..d {
                a[row * d + c] -= f * a[col * d + c];
            }
        }
    }
    sign
}
