//! Point clouds: row-major `n x d` sample tables.

use crate::{Error, Result};

/// An `n x d` table of real-valued samples representing an empirical
/// distribution. Rows are points; storage is row-major and contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl PointCloud {
    /// Build a cloud from a flat row-major buffer.
    pub fn from_flat(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "d",
                reason: "dimension must be at least 1".into(),
            });
        }
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if data.len() != n * d {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: n * d,
            });
        }
        Ok(Self { data, n, d })
    }

    /// Build a cloud from per-point rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let d = rows[0].len();
        let mut data = Vec::with_capacity(n * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: d,
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, n, d)
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.d
    }

    /// The `i`-th point as a coordinate slice.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    /// Iterate over points in row order.
    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    /// Flat row-major storage.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// True if every entry is a finite real.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
