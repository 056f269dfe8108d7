//! Acceptance suite: one test per criterion, each asserting its stated
//! tolerance and printing a summary line (visible with --nocapture).
//!
//! The heavyweight tests pin the quantitative targets of the desk-scale
//! experiments: approximation-error tables, exact orderings, invariances,
//! robustness trends, and the runtime envelope.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use depth_metrics::bench::{
    median_time, run_approx_quality, run_heavy_tails, run_robustness_outliers,
    ApproxQualityConfig, HeavyTailsConfig, RobustnessOutliersConfig,
};
use depth_metrics::depth::{exact_halfspace_depth_2d, halfspace_depths};
use depth_metrics::geometry::{apply_isometry, project, random_rotation, sample_directions};
use depth_metrics::metrics::{
    dd_1d_closed_form, dr_1d_closed_form, dr_distance, dr_distance_with_directions,
    sliced_wasserstein, wasserstein_1d, MetricParams, SwMode,
};
use depth_metrics::synthdata::{gen_gaussian_pair, Family, GeneratorSpec};
use depth_metrics::PointCloud;

const BASE_SEED: u64 = 20260815;

fn randn_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * d)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    PointCloud::from_flat(data, n, d).unwrap()
}

fn shifted(cloud: &PointCloud, shift: &[f64]) -> PointCloud {
    let d = cloud.dim();
    let mut eye = vec![0.0; d * d];
    for i in 0..d {
        eye[i * d + i] = 1.0;
    }
    apply_isometry(cloud, &eye, shift).unwrap()
}

/// Mean relative approximation error of the region distance for 1000-point
/// shifted Gaussian pairs at d = 5 matches the reference table over the
/// direction-count grid, within +-0.05 per cell.
#[test]
fn criterion_1_direction_count_error_table_d5() {
    let t0 = Instant::now();
    let cfg = ApproxQualityConfig {
        dims: vec![5],
        direction_counts: vec![10, 100, 1000, 5000],
        n_alphas: vec![20],
        n: 1000,
        shift: 7.0,
        include_max_sw: false,
        repetitions: 100,
        base_seed: BASE_SEED + 1,
        ..ApproxQualityConfig::default()
    };
    let rows = run_approx_quality(&cfg).unwrap();
    assert_eq!(rows.len(), 4);
    let targets = [0.24, 0.06, 0.02, 0.00];
    for (row, &target) in rows.iter().zip(&targets) {
        let gap = (row.mean_rel_error - target).abs();
        assert!(
            gap <= 0.05,
            "K = {:?}: mean relative error {} vs target {} (gap {gap} > 0.05)",
            row.k,
            row.mean_rel_error,
            target
        );
    }
    let measured: Vec<f64> = rows.iter().map(|r| r.mean_rel_error).collect();
    println!(
        "criterion 1 PASS: d=5 errors {measured:?} vs targets {targets:?} in {:.1}s",
        t0.elapsed().as_secs_f64()
    );
}

/// At d = 10 and K = 10^4 the error sits at 0.07 +- 0.03 for every level
/// count in {5, 10, 20, 50}, with spread below 0.02 across them.
#[test]
fn criterion_2_level_count_insensitivity_d10() {
    let t0 = Instant::now();
    let cfg = ApproxQualityConfig {
        dims: vec![10],
        direction_counts: vec![10_000],
        n_alphas: vec![5, 10, 20, 50],
        n: 1000,
        shift: 7.0,
        include_max_sw: false,
        repetitions: 20,
        base_seed: BASE_SEED + 2,
        ..ApproxQualityConfig::default()
    };
    let rows = run_approx_quality(&cfg).unwrap();
    assert_eq!(rows.len(), 4);
    let errs: Vec<f64> = rows.iter().map(|r| r.mean_rel_error).collect();
    for (row, &e) in rows.iter().zip(&errs) {
        assert!(
            (e - 0.07).abs() <= 0.03,
            "n_alpha = {:?}: mean relative error {e} outside 0.07 +- 0.03",
            row.n_alpha
        );
    }
    let spread = errs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - errs.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 0.02, "spread across level counts is {spread} >= 0.02");
    println!(
        "criterion 2 PASS: errors {errs:?}, spread {spread:.5} in {:.1}s",
        t0.elapsed().as_secs_f64()
    );
}

/// Exact 1D closed forms satisfy the field <= transport <= region ordering
/// on 100 random pairs within machine-precision slack.
#[test]
fn criterion_3_exact_1d_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED + 3);
    for case in 0..100 {
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            let n = rng.random_range(5..=200usize);
            let mu: f64 = rng.random_range(-5.0..5.0);
            let sigma: f64 = rng.random_range(0.2..3.0);
            (0..n)
                .map(|_| mu + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        let xs = draw(&mut rng);
        let ys = draw(&mut rng);
        let lo = xs.iter().chain(&ys).cloned().fold(f64::INFINITY, f64::min) - 1.0;
        let hi = xs
            .iter()
            .chain(&ys)
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
            + 1.0;
        let dd = dd_1d_closed_form(&xs, &ys, 1.0, lo, hi).unwrap();
        let w = wasserstein_1d(&xs, &ys, 1.0).unwrap();
        let dr = dr_1d_closed_form(&xs, &ys, 1.0, 0.0).unwrap();
        assert!(dd <= w + 1e-9, "case {case}: DD {dd} > W {w}");
        assert!(w <= dr + 1e-9, "case {case}: W {w} > DR {dr}");
    }
    println!("criterion 3 PASS: field <= transport <= region on 100 random 1D pairs");
}

/// The random-direction halfspace depth estimate never undershoots the
/// exact planar depth, and reaches it to within 1/n at K = 10^6.
#[test]
fn criterion_4_depth_estimate_over_approximation() {
    let t0 = Instant::now();
    let mut worst_excess: f64 = 0.0;
    for config in 0..200u64 {
        let n = 5 + (config as usize * 7) % 16;
        let cloud = randn_cloud(n, 2, BASE_SEED + 40 + config);
        let dirs = sample_directions(2, 10_000, BASE_SEED + 400 + config).unwrap();
        let est = halfspace_depths(&project(&cloud, &dirs).unwrap());
        for i in 0..n {
            let exact = exact_halfspace_depth_2d(cloud.point(i), &cloud).unwrap();
            assert!(
                est.values()[i] + 1e-12 >= exact,
                "config {config} point {i}: estimate {} below exact {exact}",
                est.values()[i]
            );
            worst_excess = worst_excess.max(est.values()[i] - exact);
        }
    }
    for config in 0..10u64 {
        let n = 5 + (config as usize * 7) % 16;
        let cloud = randn_cloud(n, 2, BASE_SEED + 40 + config);
        let dirs = sample_directions(2, 1_000_000, BASE_SEED + 500 + config).unwrap();
        let est = halfspace_depths(&project(&cloud, &dirs).unwrap());
        for i in 0..n {
            let exact = exact_halfspace_depth_2d(cloud.point(i), &cloud).unwrap();
            let excess = est.values()[i] - exact;
            assert!(
                (-1e-12..=1.0 / n as f64 + 1e-12).contains(&excess),
                "config {config} point {i}: estimate {} vs exact {exact} (excess {excess})",
                est.values()[i]
            );
        }
    }
    println!(
        "criterion 4 PASS: estimates over-approximate on 200 configs (worst excess {worst_excess:.4} at K=1e4), within 1/n on 10 configs at K=1e6, in {:.1}s",
        t0.elapsed().as_secs_f64()
    );
}

/// For equal identity covariances the region distance recovers the mean
/// gap: within 5% of its norm averaged over 20 runs; max-sliced
/// Wasserstein obeys the same bound.
#[test]
fn criterion_5_gaussian_translation_identity() {
    let t0 = Instant::now();
    let c = [7.0, -7.0, 7.0, -7.0, 7.0];
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let params = MetricParams {
        epsilon: 0.0,
        k: 5000,
        n_alpha: 20,
        ..MetricParams::default()
    };
    let mut dr_errs = Vec::new();
    let mut sw_errs = Vec::new();
    for rep in 0..20u64 {
        let x = randn_cloud(1000, 5, BASE_SEED + 50 + 2 * rep);
        let y = shifted(&randn_cloud(1000, 5, BASE_SEED + 51 + 2 * rep), &c);
        let params = MetricParams {
            seed: BASE_SEED + 500 + rep,
            ..params
        };
        let dr = dr_distance(&x, &y, &params).unwrap().value;
        dr_errs.push((dr - norm).abs() / norm);
        let sw = sliced_wasserstein(&x, &y, 2.0, 5000, BASE_SEED + 600 + rep, SwMode::Max).unwrap();
        sw_errs.push((sw - norm).abs() / norm);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (dr_mean, sw_mean) = (mean(&dr_errs), mean(&sw_errs));
    assert!(dr_mean <= 0.05, "region distance off by {dr_mean} > 5%");
    assert!(sw_mean <= 0.05, "max-sliced baseline off by {sw_mean} > 5%");
    println!(
        "criterion 5 PASS: mean relative gaps dr {dr_mean:.4}, max-sw {sw_mean:.4} vs norm {norm:.3} in {:.1}s",
        t0.elapsed().as_secs_f64()
    );
}

/// Applying one rigid motion to both clouds and the directions leaves the
/// distance unchanged within 1e-9, for 50 random rotations and shifts.
#[test]
fn criterion_6_isometry_invariance() {
    let mut worst: f64 = 0.0;
    for case in 0..50u64 {
        let d = if case % 2 == 0 { 2 } else { 5 };
        let x = randn_cloud(150, d, BASE_SEED + 60 + 3 * case);
        let y = shifted(
            &randn_cloud(120, d, BASE_SEED + 61 + 3 * case),
            &vec![1.5; d],
        );
        let dirs = sample_directions(d, 200, BASE_SEED + 600 + case).unwrap();
        let rotation = random_rotation(d, BASE_SEED + 62 + 3 * case);
        let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED + 63 + 3 * case);
        let shift: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
        let params = MetricParams {
            epsilon: 0.05,
            k: 200,
            n_alpha: 10,
            ..MetricParams::default()
        };
        let base = dr_distance_with_directions(&x, &y, &params, &dirs).unwrap();
        let moved = dr_distance_with_directions(
            &apply_isometry(&x, &rotation, &shift).unwrap(),
            &apply_isometry(&y, &rotation, &shift).unwrap(),
            &params,
            &dirs.rotated(&rotation).unwrap(),
        )
        .unwrap();
        let gap = (base.value - moved.value).abs();
        assert!(gap <= 1e-9, "case {case} (d={d}): distance moved by {gap}");
        worst = worst.max(gap);
    }
    println!("criterion 6 PASS: worst isometry gap {worst:.2e} over 50 rigid motions");
}

/// Trimmed region distances degrade strictly less than sliced Wasserstein
/// under contamination: box outliers on the planar Gaussian pair at every
/// fraction >= 5%, and the Cauchy regime at K = 1000.
#[test]
fn criterion_7_robustness_trends() {
    let t0 = Instant::now();
    let cfg = RobustnessOutliersConfig {
        setting: Family::GaussianPair,
        d: 2,
        n: 1000,
        shift: 10.0,
        fractions: vec![0.05, 0.1, 0.15, 0.2],
        epsilons: vec![0.2],
        k: 1000,
        n_alpha: 20,
        include_sw: true,
        repetitions: 100,
        base_seed: BASE_SEED + 7,
        ..RobustnessOutliersConfig::default()
    };
    let rows = run_robustness_outliers(&cfg).unwrap();
    for fi in 0..cfg.fractions.len() {
        let dr = &rows[fi];
        let sw = &rows[cfg.fractions.len() + fi];
        assert_eq!((dr.method.as_str(), sw.method.as_str()), ("dr", "sw"));
        assert!(
            dr.mean_rel_error < sw.mean_rel_error,
            "fraction {:?}: dr error {} not below sw error {}",
            dr.fraction,
            dr.mean_rel_error,
            sw.mean_rel_error
        );
    }
    let gauss_summary: Vec<(f64, f64)> = (0..cfg.fractions.len())
        .map(|fi| {
            (
                rows[fi].mean_rel_error,
                rows[cfg.fractions.len() + fi].mean_rel_error,
            )
        })
        .collect();
    let heavy = HeavyTailsConfig {
        d: 10,
        n: 1000,
        shift: 7.0,
        dofs: vec![1.0],
        direction_counts: vec![1000],
        epsilons: vec![0.2],
        n_alpha: 20,
        include_sw: true,
        repetitions: 100,
        base_seed: BASE_SEED + 70,
        ..HeavyTailsConfig::default()
    };
    let hrows = run_heavy_tails(&heavy).unwrap();
    assert_eq!(hrows.len(), 2);
    assert!(
        hrows[0].mean_rel_error < hrows[1].mean_rel_error,
        "Cauchy regime: dr error {} not below sw error {}",
        hrows[0].mean_rel_error,
        hrows[1].mean_rel_error
    );
    println!(
        "criterion 7 PASS: Gaussian (dr, sw) by fraction {gauss_summary:?}; Cauchy dr {:.3} < sw {:.3}; in {:.1}s",
        hrows[0].mean_rel_error,
        hrows[1].mean_rel_error,
        t0.elapsed().as_secs_f64()
    );
}

/// Large-sample runtime envelope: n = 10^5 in under 60 seconds, at most
/// 2.8x median-time growth when n doubles, and identical values on every
/// repeat.
#[test]
fn criterion_8_determinism_and_performance() {
    let gen = |n: usize| {
        gen_gaussian_pair(&GeneratorSpec {
            family: Family::GaussianPair,
            d: 10,
            n,
            shift: 7.0,
            seed: BASE_SEED + 80,
            ..GeneratorSpec::default()
        })
        .unwrap()
    };
    let params = MetricParams {
        epsilon: 0.2,
        k: 1000,
        n_alpha: 20,
        seed: BASE_SEED + 81,
        ..MetricParams::default()
    };
    let (xh, yh) = gen(50_000);
    let (xf, yf) = gen(100_000);
    let mut half_values = Vec::new();
    let t_half = median_time(5, || {
        half_values.push(dr_distance(&xh, &yh, &params).unwrap().value.to_bits());
    });
    let mut full_values = Vec::new();
    let t_full = median_time(5, || {
        full_values.push(dr_distance(&xf, &yf, &params).unwrap().value.to_bits());
    });
    assert!(
        half_values.windows(2).all(|w| w[0] == w[1]),
        "n = 50k values differ across repeats"
    );
    assert!(
        full_values.windows(2).all(|w| w[0] == w[1]),
        "n = 100k values differ across repeats"
    );
    assert!(t_full < 60.0, "n = 10^5 run took {t_full}s >= 60s");
    let growth = t_full / t_half;
    assert!(
        growth <= 2.8,
        "doubling n grew the median time by {growth}x > 2.8x"
    );
    println!(
        "criterion 8 PASS: median {t_half:.2}s at n=5e4, {t_full:.2}s at n=1e5 (growth {growth:.2}x), values bit-stable"
    );
}
