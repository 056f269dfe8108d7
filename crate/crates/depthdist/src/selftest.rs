//! Built-in invariant suite: fast, deterministic end-to-end checks of the
//! properties the estimators promise. One line per check; any failure makes
//! the command exit nonzero.

use std::io::Write;

use depth_metrics::geometry::{apply_isometry, random_rotation, sample_directions};
use depth_metrics::io::{load_cloud, save_cloud, CloudFile};
use depth_metrics::metrics::{
    dd_1d_closed_form, dr_1d_closed_form, dr_distance, dr_distance_with_directions,
    sliced_wasserstein, wasserstein_1d, MetricParams, SwMode,
};
use depth_metrics::synthdata::{gen_gaussian_pair, Family, GeneratorSpec};
use depth_metrics::{Error, PointCloud};

type Check = fn() -> Result<(), String>;

pub fn run<O: Write>(out: &mut O) -> i32 {
    let checks: [(&str, Check); 7] = [
        ("identity_zero", check_identity_zero),
        ("symmetry_bitwise", check_symmetry),
        ("ordering_1d", check_ordering_1d),
        ("isometry_invariance", check_isometry),
        ("determinism", check_determinism),
        ("level_range_error", check_level_range),
        ("cloud_round_trip", check_round_trip),
    ];
    let mut all_ok = true;
    for (name, check) in checks {
        match check() {
            Ok(()) => {
                let _ = writeln!(out, "ok {name}");
            }
            Err(msg) => {
                all_ok = false;
                let _ = writeln!(out, "FAILED {name}: {msg}");
            }
        }
    }
    if all_ok {
        0
    } else {
        1
    }
}

fn pair(d: usize, n: usize, shift: f64, seed: u64) -> Result<(PointCloud, PointCloud), String> {
    gen_gaussian_pair(&GeneratorSpec {
        family: Family::GaussianPair,
        d,
        n,
        shift,
        seed,
        ..GeneratorSpec::default()
    })
    .map_err(|e| e.to_string())
}

fn params(k: usize) -> MetricParams {
    MetricParams {
        epsilon: 0.0,
        k,
        n_alpha: 12,
        ..MetricParams::default()
    }
}

fn check_identity_zero() -> Result<(), String> {
    let (x, _) = pair(3, 80, 0.0, 1)?;
    let r = dr_distance(&x, &x, &params(64)).map_err(|e| e.to_string())?;
    if r.value != 0.0 {
        return Err(format!("distance of a cloud to itself is {}, not 0", r.value));
    }
    Ok(())
}

fn check_symmetry() -> Result<(), String> {
    let (x, y) = pair(3, 70, 2.0, 2)?;
    let ab = dr_distance(&x, &y, &params(64)).map_err(|e| e.to_string())?;
    let ba = dr_distance(&y, &x, &params(64)).map_err(|e| e.to_string())?;
    if ab.value.to_bits() != ba.value.to_bits() {
        return Err(format!("dr(x,y) = {} but dr(y,x) = {}", ab.value, ba.value));
    }
    Ok(())
}

fn check_ordering_1d() -> Result<(), String> {
    for seed in 0..20u64 {
        let (x, y) = pair(1, 30 + (seed as usize % 7) * 11, 0.7, seed)?;
        let joint_min = x
            .data()
            .iter()
            .chain(y.data())
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let joint_max = x
            .data()
            .iter()
            .chain(y.data())
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let dd = dd_1d_closed_form(x.data(), y.data(), 1.0, joint_min - 1.0, joint_max + 1.0)
            .map_err(|e| e.to_string())?;
        let w = wasserstein_1d(x.data(), y.data(), 1.0).map_err(|e| e.to_string())?;
        let dr = dr_1d_closed_form(x.data(), y.data(), 1.0, 0.0).map_err(|e| e.to_string())?;
        if !(dd <= w + 1e-9 && w <= dr + 1e-9) {
            return Err(format!("seed {seed}: expected DD {dd} <= W {w} <= DR {dr}"));
        }
    }
    Ok(())
}

fn check_isometry() -> Result<(), String> {
    let (x, y) = pair(2, 60, 1.5, 3)?;
    let dirs = sample_directions(2, 64, 9).map_err(|e| e.to_string())?;
    let rotation = random_rotation(2, 4);
    let shift = [0.3, -1.2];
    let xr = apply_isometry(&x, &rotation, &shift).map_err(|e| e.to_string())?;
    let yr = apply_isometry(&y, &rotation, &shift).map_err(|e| e.to_string())?;
    let rotated = dirs.rotated(&rotation).map_err(|e| e.to_string())?;
    let p = params(64);
    let base = dr_distance_with_directions(&x, &y, &p, &dirs).map_err(|e| e.to_string())?;
    let moved = dr_distance_with_directions(&xr, &yr, &p, &rotated).map_err(|e| e.to_string())?;
    if (base.value - moved.value).abs() > 1e-9 {
        return Err(format!(
            "isometry changed the distance: {} vs {}",
            base.value, moved.value
        ));
    }
    Ok(())
}

fn check_determinism() -> Result<(), String> {
    let (x, y) = pair(3, 70, 1.0, 5)?;
    let a = dr_distance(&x, &y, &params(48)).map_err(|e| e.to_string())?;
    let b = dr_distance(&x, &y, &params(48)).map_err(|e| e.to_string())?;
    if a.value.to_bits() != b.value.to_bits() {
        return Err("two identical dr runs disagree".into());
    }
    let s1 = sliced_wasserstein(&x, &y, 2.0, 48, 11, SwMode::Mean).map_err(|e| e.to_string())?;
    let s2 = sliced_wasserstein(&x, &y, 2.0, 48, 11, SwMode::Mean).map_err(|e| e.to_string())?;
    if s1.to_bits() != s2.to_bits() {
        return Err("two identical sw runs disagree".into());
    }
    Ok(())
}

fn check_level_range() -> Result<(), String> {
    let x = PointCloud::from_rows(&[vec![0.0], vec![1.0]]).map_err(|e| e.to_string())?;
    let y = PointCloud::from_rows(&[vec![0.5], vec![1.5]]).map_err(|e| e.to_string())?;
    let p = MetricParams {
        epsilon: 0.6,
        k: 8,
        n_alpha: 4,
        ..MetricParams::default()
    };
    match dr_distance(&x, &y, &p) {
        Err(Error::LevelRange { .. }) => Ok(()),
        Err(other) => Err(format!("expected a level-range error, got {other}")),
        Ok(r) => Err(format!("expected a level-range error, got value {}", r.value)),
    }
}

fn check_round_trip() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cloud = PointCloud::from_rows(&[
        vec![0.1, -7.25],
        vec![1e-300, std::f64::consts::PI],
        vec![-0.0, 2.0f64.powi(-1074)],
    ])
    .map_err(|e| e.to_string())?;
    for file in [
        CloudFile::binary(dir.path().join("c.bin")),
        CloudFile::csv(dir.path().join("c.csv")),
    ] {
        save_cloud(&cloud, &file).map_err(|e| e.to_string())?;
        let back = load_cloud(&file).map_err(|e| e.to_string())?;
        let bits = |c: &PointCloud| c.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        if bits(&back) != bits(&cloud) {
            return Err(format!("round trip through {:?} changed bits", file.format));
        }
    }
    Ok(())
}
