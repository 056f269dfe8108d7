//! Seeded generators for the synthetic benchmark distributions, plus
//! contamination schemes for robustness studies.
//!
//! Every generator is a pure function of its arguments (seed included):
//! the same spec always yields bit-identical clouds. Contamination replaces
//! points in place of appending, so clean and polluted clouds stay the same
//! size and the untouched points stay bit-exact, which keeps paired
//! relative-error measurements honest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::seedmix::derive_seed;
use crate::{Error, PointCloud, Result};

/// Stream tag keeping generator draws apart from metric-internal streams.
const GEN_STREAM: u64 = 3;
/// Stream tag for contamination draws.
const CONTAM_STREAM: u64 = 4;

/// Distribution family of a generated pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[default]
    GaussianPair,
    FragmentedHypercube,
    Circles,
    StudentPair,
}

/// Full description of a synthetic pair of clouds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorSpec {
    pub family: Family,
    pub d: usize,
    /// Sample size per cloud.
    pub n: usize,
    /// Scalar shift applied to every coordinate of the second cloud.
    pub shift: f64,
    /// Student-t degrees of freedom; `inf` degenerates to Gaussian.
    pub dof: f64,
    /// Gaussian noise scale (circles only).
    pub noise: f64,
    /// Inner-circle radius (circles only).
    pub factor: f64,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            family: Family::GaussianPair,
            d: 2,
            n: 100,
            shift: 0.0,
            dof: f64::INFINITY,
            noise: 0.0,
            factor: 0.8,
            seed: 0,
        }
    }
}

impl GeneratorSpec {
    /// Generate the pair this spec describes.
    pub fn generate(&self) -> Result<(PointCloud, PointCloud)> {
        match self.family {
            Family::GaussianPair => gen_gaussian_pair(self),
            Family::FragmentedHypercube => gen_fragmented_hypercube(self.n, self.seed),
            Family::Circles => gen_circles(self.n, self.noise, self.factor, self.seed),
            Family::StudentPair => {
                gen_student_pair(self.d, self.n, self.dof, self.shift, self.seed)
            }
        }
    }
}

/// How contamination draws replacement points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ContaminationScheme {
    #[default]
    UniformBox,
    UnitBall,
}

/// Contamination settings; `box_lower`/`box_upper` are required by the
/// box scheme and ignored by the ball scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct ContaminationSpec {
    pub scheme: ContaminationScheme,
    /// Share of points to replace, in `[0, 1]`.
    pub fraction: f64,
    pub box_lower: Option<Vec<f64>>,
    pub box_upper: Option<Vec<f64>>,
    pub seed: u64,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "sample size must be at least 1".into(),
        });
    }
    Ok(())
}

/// Two standard Gaussian clouds in `R^d`, the second shifted by
/// `shift` in every coordinate.
pub fn gen_gaussian_pair(spec: &GeneratorSpec) -> Result<(PointCloud, PointCloud)> {
    if spec.family != Family::GaussianPair {
        return Err(Error::InvalidParameter {
            name: "family",
            reason: "spec does not describe a gaussian_pair".into(),
        });
    }
    check_n(spec.n)?;
    if spec.d == 0 {
        return Err(Error::InvalidParameter {
            name: "d",
            reason: "dimension must be at least 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, &[GEN_STREAM, 0]));
    let x: Vec<f64> = (0..spec.n * spec.d)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let y: Vec<f64> = (0..spec.n * spec.d)
        .map(|_| spec.shift + rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok((
        PointCloud::from_flat(x, spec.n, spec.d)?,
        PointCloud::from_flat(y, spec.n, spec.d)?,
    ))
}

/// The planar fragmentation map `x -> x + 2 sign(x)` with `sign(0) = 0`.
pub(crate) fn fragment_coordinate(v: f64) -> f64 {
    if v > 0.0 {
        v + 2.0
    } else if v < 0.0 {
        v - 2.0
    } else {
        0.0
    }
}

/// Uniform cloud on `[-1,1]^2` and an independent uniform draw pushed
/// through the fragmentation map, which tears the square into four corner
/// blocks.
pub fn gen_fragmented_hypercube(n: usize, seed: u64) -> Result<(PointCloud, PointCloud)> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[GEN_STREAM, 1]));
    let mut uniform = |len: usize| -> Vec<f64> {
        (0..len).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect()
    };
    let x = uniform(2 * n);
    let y: Vec<f64> = uniform(2 * n).into_iter().map(fragment_coordinate).collect();
    Ok((PointCloud::from_flat(x, n, 2)?, PointCloud::from_flat(y, n, 2)?))
}

/// Two concentric noisy circles: radius 1 and radius `factor`, each sampled
/// at `n` equispaced angles with isotropic Gaussian noise of scale `noise`.
pub fn gen_circles(n: usize, noise: f64, factor: f64, seed: u64) -> Result<(PointCloud, PointCloud)> {
    check_n(n)?;
    if !(0.0 < factor && factor < 1.0) {
        return Err(Error::InvalidParameter {
            name: "factor",
            reason: format!("inner radius must lie in (0, 1), got {factor}"),
        });
    }
    if !(noise >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "noise",
            reason: format!("noise scale must be nonnegative, got {noise}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[GEN_STREAM, 2]));
    let mut ring = |radius: f64| -> Vec<f64> {
        let mut data = Vec::with_capacity(2 * n);
        for i in 0..n {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            data.push(radius * theta.cos() + noise * rng.sample::<f64, _>(StandardNormal));
            data.push(radius * theta.sin() + noise * rng.sample::<f64, _>(StandardNormal));
        }
        data
    };
    let a = ring(1.0);
    let b = ring(factor);
    Ok((PointCloud::from_flat(a, n, 2)?, PointCloud::from_flat(b, n, 2)?))
}

/// Two clouds of coordinate-wise i.i.d. Student-t draws, the second shifted
/// by `shift` per coordinate; `dof = inf` yields Gaussian marginals.
pub fn gen_student_pair(
    d: usize,
    n: usize,
    dof: f64,
    shift: f64,
    seed: u64,
) -> Result<(PointCloud, PointCloud)> {
    check_n(n)?;
    if d == 0 {
        return Err(Error::InvalidParameter {
            name: "d",
            reason: "dimension must be at least 1".into(),
        });
    }
    if !(dof >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "dof",
            reason: format!("degrees of freedom must be >= 1 (or inf), got {dof}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[GEN_STREAM, 3]));
    let chi = if dof.is_finite() {
        Some(ChiSquared::new(dof).map_err(|e| Error::InvalidParameter {
            name: "dof",
            reason: e.to_string(),
        })?)
    } else {
        None
    };
    let mut draw = |offset: f64, len: usize| -> Vec<f64> {
        (0..len)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                let t = match &chi {
                    Some(chi) => z / (chi.sample(&mut rng) / dof).sqrt(),
                    None => z,
                };
                offset + t
            })
            .collect()
    };
    let x = draw(0.0, n * d);
    let y = draw(shift, n * d);
    Ok((PointCloud::from_flat(x, n, d)?, PointCloud::from_flat(y, n, d)?))
}

/// Replace `floor(fraction * n)` uniformly chosen points with outliers.
pub fn contaminate(x: &PointCloud, spec: &ContaminationSpec) -> Result<PointCloud> {
    if !(0.0..=1.0).contains(&spec.fraction) {
        return Err(Error::InvalidParameter {
            name: "fraction",
            reason: format!("contamination fraction must lie in [0, 1], got {}", spec.fraction),
        });
    }
    let d = x.dim();
    let (lo, hi) = match spec.scheme {
        ContaminationScheme::UniformBox => {
            let lo = spec.box_lower.as_ref().ok_or(Error::InvalidParameter {
                name: "box_lower",
                reason: "uniform_box contamination needs box bounds".into(),
            })?;
            let hi = spec.box_upper.as_ref().ok_or(Error::InvalidParameter {
                name: "box_upper",
                reason: "uniform_box contamination needs box bounds".into(),
            })?;
            if lo.len() != d || hi.len() != d {
                return Err(Error::LengthMismatch {
                    left: lo.len().min(hi.len()),
                    right: d,
                });
            }
            if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                return Err(Error::DegenerateBox(
                    "contamination box requires lower < upper".into(),
                ));
            }
            (lo.as_slice(), hi.as_slice())
        }
        ContaminationScheme::UnitBall => (&[] as &[f64], &[] as &[f64]),
    };
    let m = (spec.fraction * x.n() as f64).floor() as usize;
    let mut data = x.data().to_vec();
    if m == 0 {
        return PointCloud::from_flat(data, x.n(), d);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, &[CONTAM_STREAM]));
    let mut chosen = rand::seq::index::sample(&mut rng, x.n(), m).into_vec();
    chosen.sort_unstable();
    for i in chosen {
        let row = &mut data[i * d..(i + 1) * d];
        match spec.scheme {
            ContaminationScheme::UniformBox => {
                for (c, slot) in row.iter_mut().enumerate() {
                    *slot = lo[c] + rng.random::<f64>() * (hi[c] - lo[c]);
                }
            }
            ContaminationScheme::UnitBall => {
                // Direction from a normalized Gaussian, radius U^(1/d).
                let mut norm = 0.0;
                while norm == 0.0 {
                    for slot in row.iter_mut() {
                        *slot = StandardNormal.sample(&mut rng);
                    }
                    norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                }
                let r = rng.random::<f64>().powf(1.0 / d as f64);
                for slot in row.iter_mut() {
                    *slot *= r / norm;
                }
            }
        }
    }
    PointCloud::from_flat(data, x.n(), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::median_inplace;
    use crate::metrics::{dr_distance, MetricParams};

    #[test]
    fn gaussian_pair_means_obey_the_clt() {
        let spec = GeneratorSpec {
            n: 1000,
            d: 2,
            seed: 1,
            ..GeneratorSpec::default()
        };
        let (x, _) = gen_gaussian_pair(&spec).unwrap();
        let tol = 4.0 / (spec.n as f64).sqrt();
        for c in 0..2 {
            let mean = x.points().map(|p| p[c]).sum::<f64>() / x.n() as f64;
            assert!(mean.abs() <= tol, "coordinate {c} mean {mean}");
        }
        let shifted = GeneratorSpec {
            shift: 10.0,
            ..spec
        };
        let (x, y) = gen_gaussian_pair(&shifted).unwrap();
        for c in 0..2 {
            let diff = (y.points().map(|p| p[c]).sum::<f64>()
                - x.points().map(|p| p[c]).sum::<f64>())
                / x.n() as f64;
            assert!((diff - 10.0).abs() <= 0.3, "coordinate {c} diff {diff}");
        }
    }

    #[test]
    fn equal_law_gaussians_are_close_in_dr_distance() {
        let spec = GeneratorSpec {
            n: 1000,
            d: 2,
            seed: 2,
            ..GeneratorSpec::default()
        };
        let (x, y) = gen_gaussian_pair(&spec).unwrap();
        let params = MetricParams {
            epsilon: 0.0,
            k: 1000,
            seed: 3,
            ..MetricParams::default()
        };
        let r = dr_distance(&x, &y, &params).unwrap();
        assert!(r.value <= 0.5, "same-law distance {}", r.value);
    }

    #[test]
    fn fragmentation_map_matches_hand_values() {
        assert_eq!(fragment_coordinate(1.0), 3.0);
        assert_eq!(fragment_coordinate(-0.5), -2.5);
        assert_eq!(fragment_coordinate(0.0), 0.0);
    }

    #[test]
    fn fragmented_hypercube_lands_in_the_corner_blocks() {
        let (x, y) = gen_fragmented_hypercube(500, 4).unwrap();
        assert_eq!(x.dim(), 2);
        for p in x.points() {
            assert!(p.iter().all(|c| (-1.0..=1.0).contains(c)));
        }
        for p in y.points() {
            for &c in p {
                let a = c.abs();
                assert!(
                    c == 0.0 || (2.0..=3.0).contains(&a),
                    "coordinate {c} outside the image"
                );
            }
        }
    }

    #[test]
    fn noiseless_circles_have_exact_radii() {
        let (a, b) = gen_circles(64, 0.0, 0.8, 5).unwrap();
        for p in a.points() {
            let norm = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((norm - 1.0).abs() <= 1e-12);
        }
        for p in b.points() {
            let norm = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((norm - 0.8).abs() <= 1e-12);
        }
    }

    /// Log of the modified Bessel function I0: series for small arguments,
    /// asymptotic expansion for large ones.
    fn ln_bessel_i0(z: f64) -> f64 {
        if z < 20.0 {
            let q = z * z / 4.0;
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..60 {
                term *= q / (k as f64 * k as f64);
                sum += term;
            }
            sum.ln()
        } else {
            let c = 1.0 + 1.0 / (8.0 * z) + 9.0 / (128.0 * z * z)
                + 225.0 / (3072.0 * z * z * z);
            z - 0.5 * (2.0 * std::f64::consts::PI * z).ln() + c.ln()
        }
    }

    /// Mean distance from the origin of `u + noise * Z`, `‖u‖ = 1`,
    /// `Z` standard normal in the plane: Simpson quadrature of the Rice
    /// density `r/s^2 * exp(-(r^2+1)/(2 s^2)) * I0(r/s^2)`.
    fn rice_mean_norm(s: f64) -> f64 {
        let hi = 1.0 + 12.0 * s;
        let steps = 4000;
        let h = hi / steps as f64;
        let pdf = |r: f64| -> f64 {
            if r <= 0.0 {
                return 0.0;
            }
            let ln_f =
                (r / (s * s)).ln() - (r * r + 1.0) / (2.0 * s * s) + ln_bessel_i0(r / (s * s));
            ln_f.exp()
        };
        let mut acc = 0.0;
        for i in 0..steps {
            let a = i as f64 * h;
            acc += h / 6.0
                * (a * pdf(a) + 4.0 * (a + 0.5 * h) * pdf(a + 0.5 * h) + (a + h) * pdf(a + h));
        }
        acc
    }

    #[test]
    fn noisy_circle_mean_norm_matches_the_quadrature_oracle() {
        let n = 4000;
        let noise = 0.2;
        let (a, _) = gen_circles(n, noise, 0.8, 6).unwrap();
        let mean = a
            .points()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .sum::<f64>()
            / n as f64;
        let expect = rice_mean_norm(noise);
        let tol = 3.0 * noise / (n as f64).sqrt();
        assert!(
            (mean - expect).abs() <= tol,
            "mean {mean} vs oracle {expect} (tol {tol})"
        );
    }

    /// Standard normal cdf via the Abramowitz-Stegun rational approximation
    /// (absolute error below 1e-7, plenty for a KS check).
    fn phi(x: f64) -> f64 {
        let t = 1.0 / (1.0 + 0.2316419 * x.abs());
        let poly = t
            * (0.319381530
                + t * (-0.356563782 + t * (1.781477937 + t * (-1.821255978 + t * 1.330274429))));
        let tail = (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt() * poly;
        if x >= 0.0 {
            1.0 - tail
        } else {
            tail
        }
    }

    /// Asymptotic Kolmogorov-Smirnov tail probability.
    fn ks_p_value(d: f64, n: usize) -> f64 {
        let lambda = d * (n as f64).sqrt();
        let mut p = 0.0;
        for k in 1..100 {
            let sign = if k % 2 == 1 { 2.0 } else { -2.0 };
            p += sign * (-2.0 * (k as f64 * lambda).powi(2)).exp();
        }
        p.clamp(0.0, 1.0)
    }

    #[test]
    fn infinite_dof_student_marginals_look_gaussian() {
        let n = 10_000;
        let (x, _) = gen_student_pair(1, n, f64::INFINITY, 0.0, 7).unwrap();
        let mut v = x.data().to_vec();
        v.sort_unstable_by(f64::total_cmp);
        let mut d_stat = 0.0f64;
        for (i, &z) in v.iter().enumerate() {
            let f = phi(z);
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d_stat = d_stat.max((f - lo).abs()).max((hi - f).abs());
        }
        let p = ks_p_value(d_stat, n);
        assert!(p > 0.01, "KS statistic {d_stat}, p {p}");
    }

    #[test]
    fn cauchy_marginals_are_centered() {
        let (x, _) = gen_student_pair(1, 10_000, 1.0, 0.0, 8).unwrap();
        let mut v = x.data().to_vec();
        let med = median_inplace(&mut v);
        assert!(med.abs() <= 0.1, "median {med}");
    }

    #[test]
    fn student_shift_targets_the_documented_center_gap() {
        let d = 10;
        let n = 2000;
        let (x, y) = gen_student_pair(d, n, f64::INFINITY, 7.0, 9).unwrap();
        let mut gap = 0.0;
        for c in 0..d {
            let diff = (y.points().map(|p| p[c]).sum::<f64>()
                - x.points().map(|p| p[c]).sum::<f64>())
                / n as f64;
            gap += diff * diff;
        }
        let gap = gap.sqrt();
        let target = 7.0 * (d as f64).sqrt();
        assert!((gap - target).abs() <= 0.5, "gap {gap} vs target {target}");
        assert!((target - 22.1359).abs() <= 1e-3);
    }

    #[test]
    fn zero_fraction_contamination_is_the_identity() {
        let (x, _) = gen_gaussian_pair(&GeneratorSpec {
            n: 50,
            seed: 10,
            ..GeneratorSpec::default()
        })
        .unwrap();
        let spec = ContaminationSpec {
            fraction: 0.0,
            box_lower: Some(vec![-10.0, -10.0]),
            box_upper: Some(vec![20.0, 20.0]),
            seed: 11,
            ..ContaminationSpec::default()
        };
        let polluted = contaminate(&x, &spec).unwrap();
        assert_eq!(x.data(), polluted.data());
    }

    #[test]
    fn box_contamination_replaces_exactly_the_requested_share() {
        let (x, _) = gen_gaussian_pair(&GeneratorSpec {
            n: 100,
            seed: 12,
            ..GeneratorSpec::default()
        })
        .unwrap();
        let spec = ContaminationSpec {
            fraction: 0.2,
            box_lower: Some(vec![-10.0, -10.0]),
            box_upper: Some(vec![20.0, 20.0]),
            seed: 13,
            ..ContaminationSpec::default()
        };
        let polluted = contaminate(&x, &spec).unwrap();
        let mut changed = 0;
        for i in 0..x.n() {
            if x.point(i) != polluted.point(i) {
                changed += 1;
                for (c, &v) in polluted.point(i).iter().enumerate() {
                    assert!(v >= spec.box_lower.as_ref().unwrap()[c]);
                    assert!(v <= spec.box_upper.as_ref().unwrap()[c]);
                }
            }
        }
        assert_eq!(changed, 20);
    }

    #[test]
    fn ball_contamination_stays_inside_the_unit_ball() {
        let (x, _) = gen_gaussian_pair(&GeneratorSpec {
            n: 80,
            d: 3,
            shift: 30.0,
            seed: 14,
            ..GeneratorSpec::default()
        })
        .unwrap();
        let spec = ContaminationSpec {
            scheme: ContaminationScheme::UnitBall,
            fraction: 0.25,
            seed: 15,
            ..ContaminationSpec::default()
        };
        let polluted = contaminate(&x, &spec).unwrap();
        let mut changed = 0;
        for i in 0..x.n() {
            if x.point(i) != polluted.point(i) {
                changed += 1;
                let norm = polluted.point(i).iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(norm <= 1.0 + 1e-12, "norm {norm}");
            }
        }
        assert_eq!(changed, 20);
    }

    #[test]
    fn generators_are_deterministic() {
        let spec = GeneratorSpec {
            family: Family::StudentPair,
            d: 3,
            n: 40,
            dof: 2.0,
            shift: 1.0,
            seed: 16,
            ..GeneratorSpec::default()
        };
        let (a1, b1) = spec.generate().unwrap();
        let (a2, b2) = spec.generate().unwrap();
        assert_eq!(a1.data(), a2.data());
        assert_eq!(b1.data(), b2.data());
        let contam = ContaminationSpec {
            scheme: ContaminationScheme::UnitBall,
            fraction: 0.1,
            seed: 17,
            ..ContaminationSpec::default()
        };
        assert_eq!(
            contaminate(&a1, &contam).unwrap().data(),
            contaminate(&a2, &contam).unwrap().data()
        );
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(gen_circles(10, 0.1, 1.0, 0).is_err());
        assert!(gen_circles(10, -0.1, 0.8, 0).is_err());
        assert!(gen_student_pair(2, 10, 0.5, 0.0, 0).is_err());
        assert!(gen_gaussian_pair(&GeneratorSpec {
            family: Family::Circles,
            ..GeneratorSpec::default()
        })
        .is_err());
        let no_box = ContaminationSpec {
            fraction: 0.1,
            ..ContaminationSpec::default()
        };
        let (x, _) = gen_gaussian_pair(&GeneratorSpec::default()).unwrap();
        assert!(contaminate(&x, &no_box).is_err());
        let bad_fraction = ContaminationSpec {
            fraction: 1.5,
            ..ContaminationSpec::default()
        };
        assert!(contaminate(&x, &bad_fraction).is_err());
    }
}
