//! Point-cloud persistence: headerless or headered CSV, and a compact
//! binary format for bit-exact round trips.
//!
//! CSV: one point per row, comma-separated, optional one-line header
//! (auto-detected on load). Binary: magic "DRWC", little-endian u64 n and d,
//! then n*d little-endian IEEE-754 doubles, row-major. Loads reject NaN and
//! infinite entries and report 1-based line/column positions.

use std::fs;
use std::path::{Path, PathBuf};

use crate::{Error, PointCloud, Result};

const MAGIC: &[u8; 4] = b"DRWC";

/// Formats a float with 17 significant digits so text output parses back to
/// the identical bit pattern.
pub(crate) fn format_g17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    Csv,
    BinaryF64,
}

/// A point-cloud file on disk; n and d are inferred from the contents.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudFile {
    pub path: PathBuf,
    pub format: CloudFormat,
    /// Column names written as a CSV header line when saving; loads detect
    /// and skip a header regardless.
    pub header: Option<Vec<String>>,
}

impl CloudFile {
    pub fn csv(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            format: CloudFormat::Csv,
            header: None,
        }
    }

    pub fn binary(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            format: CloudFormat::BinaryF64,
            header: None,
        }
    }

    /// Picks the format from the file extension: `.bin` and `.f64` mean
    /// binary, anything else CSV.
    pub fn from_path(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("f64") => CloudFormat::BinaryF64,
            _ => CloudFormat::Csv,
        };
        Self {
            path,
            format,
            header: None,
        }
    }
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn parse_err(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path_str(path),
        line,
        column,
        message: message.into(),
    }
}

pub fn load_cloud(file: &CloudFile) -> Result<PointCloud> {
    match file.format {
        CloudFormat::Csv => load_csv(&file.path),
        CloudFormat::BinaryF64 => load_binary(&file.path),
    }
}

pub fn save_cloud(points: &PointCloud, file: &CloudFile) -> Result<()> {
    match file.format {
        CloudFormat::Csv => save_csv(points, &file.path, file.header.as_deref()),
        CloudFormat::BinaryF64 => save_binary(points, &file.path),
    }
}

fn load_csv(path: &Path) -> Result<PointCloud> {
    let text = fs::read_to_string(path)?;
    let mut data = Vec::new();
    let mut d = 0usize;
    let mut n = 0usize;
    let mut first_data_line = true;
    for (li, raw) in text.lines().enumerate() {
        let line_no = li + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        // A first line with any non-numeric field is a header.
        if first_data_line && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            first_data_line = false;
            continue;
        }
        first_data_line = false;
        if n == 0 {
            d = fields.len();
        } else if fields.len() != d {
            return Err(parse_err(
                path,
                line_no,
                fields.len().min(d) + 1,
                format!("ragged row: expected {d} fields, found {}", fields.len()),
            ));
        }
        for (ci, field) in fields.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                parse_err(path, line_no, ci + 1, format!("invalid number `{field}`"))
            })?;
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    path: path_str(path),
                    line: line_no,
                    column: ci + 1,
                });
            }
            data.push(v);
        }
        n += 1;
    }
    if n == 0 {
        return Err(parse_err(path, 1, 1, "no data rows"));
    }
    PointCloud::from_flat(data, n, d)
}

fn save_csv(points: &PointCloud, path: &Path, header: Option<&[String]>) -> Result<()> {
    let d = points.dim();
    let mut out = String::new();
    if let Some(names) = header {
        if names.len() != d {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: d,
            });
        }
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for i in 0..points.n() {
        let row = points.point(i);
        for (ci, v) in row.iter().enumerate() {
            if ci > 0 {
                out.push(',');
            }
            out.push_str(&format_g17(*v));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn load_binary(path: &Path) -> Result<PointCloud> {
    let bytes = fs::read(path)?;
    if bytes.len() < 20 {
        return Err(parse_err(path, 1, 1, "file too short for the binary header"));
    }
    if &bytes[0..4] != MAGIC {
        return Err(parse_err(path, 1, 1, "bad magic bytes (expected DRWC)"));
    }
    let n = u64::from_le_bytes(bytes[4..12].try_into().expect("8-byte slice")) as usize;
    let d = u64::from_le_bytes(bytes[12..20].try_into().expect("8-byte slice")) as usize;
    let count = n
        .checked_mul(d)
        .ok_or_else(|| parse_err(path, 1, 1, "point count overflows"))?;
    let expected = 20 + 8 * count;
    if bytes.len() != expected {
        return Err(parse_err(
            path,
            1,
            1,
            format!(
                "payload length mismatch: header says {n} x {d} ({expected} bytes), file has {}",
                bytes.len()
            ),
        ));
    }
    let mut data = Vec::with_capacity(count);
    for (i, chunk) in bytes[20..].chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                path: path_str(path),
                line: i / d + 1,
                column: i % d + 1,
            });
        }
        data.push(v);
    }
    PointCloud::from_flat(data, n, d)
}

fn save_binary(points: &PointCloud, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(20 + 8 * points.data().len());
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&(points.n() as u64).to_le_bytes());
    bytes.extend_from_slice(&(points.dim() as u64).to_le_bytes());
    for v in points.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str, contents: &[u8]) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(name);
        fs::write(&path, contents).unwrap();
        (dir, path)
    }

    #[test]
    fn csv_two_by_two_parses() {
        let (_d, path) = tmp("a.csv", b"0,1\n2,3");
        let cloud = load_cloud(&CloudFile::csv(&path)).unwrap();
        assert_eq!(cloud.n(), 2);
        assert_eq!(cloud.dim(), 2);
        assert_eq!(cloud.data(), &[0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn csv_header_is_detected_and_skipped() {
        let (_d, path) = tmp("h.csv", b"x,y\n0,1\n2,3\n");
        let cloud = load_cloud(&CloudFile::csv(&path)).unwrap();
        assert_eq!(cloud.n(), 2);
        assert_eq!(cloud.data(), &[0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn empty_csv_is_a_parse_error() {
        let (_d, path) = tmp("e.csv", b"");
        match load_cloud(&CloudFile::csv(&path)).unwrap_err() {
            Error::Parse { line, column, .. } => {
                assert_eq!((line, column), (1, 1));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let (_d2, path2) = tmp("h.csv", b"x,y\n");
        assert!(matches!(
            load_cloud(&CloudFile::csv(&path2)).unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn ragged_and_malformed_rows_report_positions() {
        let (_d, path) = tmp("r.csv", b"0,1\n2\n");
        match load_cloud(&CloudFile::csv(&path)).unwrap_err() {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("ragged"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let (_d2, path2) = tmp("m.csv", b"0,1\n2,foo\n");
        match load_cloud(&CloudFile::csv(&path2)).unwrap_err() {
            Error::Parse { line, column, .. } => {
                assert_eq!((line, column), (2, 2));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let (_d, path) = tmp("nf.csv", b"0,inf\n");
        match load_cloud(&CloudFile::csv(&path)).unwrap_err() {
            Error::NonFiniteValue { line, column, .. } => {
                assert_eq!((line, column), (1, 2));
            }
            other => panic!("expected non-finite error, got {other:?}"),
        }
        let (_d2, path2) = tmp("nan.csv", b"NaN,0\n");
        assert!(matches!(
            load_cloud(&CloudFile::csv(&path2)).unwrap_err(),
            Error::NonFiniteValue { column: 1, .. }
        ));
    }

    fn awkward_cloud() -> PointCloud {
        PointCloud::from_flat(
            vec![
                0.1,
                -7.25,
                1e-300,
                std::f64::consts::PI,
                -0.0,
                2.0f64.powi(-1074),
            ],
            3,
            2,
        )
        .unwrap()
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let file = CloudFile::binary(dir.path().join("c.bin"));
        let cloud = awkward_cloud();
        save_cloud(&cloud, &file).unwrap();
        let back = load_cloud(&file).unwrap();
        assert_eq!(back.dim(), cloud.dim());
        let bits = |c: &PointCloud| c.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&cloud));
    }

    #[test]
    fn csv_round_trip_is_bit_exact_with_17_digits() {
        let dir = tempfile::tempdir().unwrap();
        let file = CloudFile {
            path: dir.path().join("c.csv"),
            format: CloudFormat::Csv,
            header: Some(vec!["a".into(), "b".into()]),
        };
        let cloud = awkward_cloud();
        save_cloud(&cloud, &file).unwrap();
        let text = fs::read_to_string(&file.path).unwrap();
        assert!(text.starts_with("a,b\n"));
        let back = load_cloud(&file).unwrap();
        let bits = |c: &PointCloud| c.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&cloud));
    }

    #[test]
    fn header_length_must_match_dimension() {
        let dir = tempfile::tempdir().unwrap();
        let file = CloudFile {
            path: dir.path().join("c.csv"),
            format: CloudFormat::Csv,
            header: Some(vec!["only".into()]),
        };
        assert!(matches!(
            save_cloud(&awkward_cloud(), &file).unwrap_err(),
            Error::LengthMismatch { left: 1, right: 2 }
        ));
    }

    #[test]
    fn binary_rejects_bad_magic_and_bad_lengths() {
        let (_d, path) = tmp("bad.bin", b"NOPE\x00\x00\x00\x00");
        assert!(matches!(
            load_cloud(&CloudFile::binary(&path)).unwrap_err(),
            Error::Parse { .. }
        ));
        let dir = tempfile::tempdir().unwrap();
        let file = CloudFile::binary(dir.path().join("t.bin"));
        save_cloud(&awkward_cloud(), &file).unwrap();
        let mut bytes = fs::read(&file.path).unwrap();
        bytes.push(0);
        fs::write(&file.path, &bytes).unwrap();
        match load_cloud(&file).unwrap_err() {
            Error::Parse { message, .. } => assert!(message.contains("length mismatch")),
            other => panic!("expected parse error, got {other:?}"),
        }
        bytes.truncate(25);
        fs::write(&file.path, &bytes).unwrap();
        assert!(matches!(
            load_cloud(&file).unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn format_extension_detection() {
        assert_eq!(CloudFile::from_path("x.bin").format, CloudFormat::BinaryF64);
        assert_eq!(CloudFile::from_path("x.f64").format, CloudFormat::BinaryF64);
        assert_eq!(CloudFile::from_path("x.csv").format, CloudFormat::Csv);
        assert_eq!(CloudFile::from_path("x").format, CloudFormat::Csv);
    }

    #[test]
    fn g17_round_trips_awkward_values() {
        for v in [0.2, 1.0 / 3.0, 1e-300, -0.0, 2.0f64.powi(-1074), 6.02e23] {
            let s = format_g17(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "value {v} via {s}");
        }
    }
}
