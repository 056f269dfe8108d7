//! Depth-based pseudo-metrics between empirical distributions.
//!
//! Given two point clouds in `R^d`, this crate measures how far apart the
//! distributions behind them are by comparing *data-depth* fields instead of
//! raw mass locations. Two pseudo-metrics are provided:
//!
//! * [`metrics::dr_distance`], the depth-region distance: an `L^p` average,
//!   over trimmed depth levels `alpha`, of Hausdorff distances between the two
//!   upper-level sets `{x : depth(x) >= alpha}`, computed through their
//!   support functions on a shared set of random directions.
//! * [`metrics::dd_distance`], the depth-field distance: the `L^p` distance
//!   between the two depth functions themselves, integrated by Monte Carlo
//!   over a bounding box.
//!
//! Depth notions are the random-projection approximations of halfspace
//! (Tukey) depth and projection (Stahel-Donoho) depth. Sliced- and
//! max-sliced-Wasserstein distances plus exact one-dimensional closed forms
//! are included as baselines, together with seeded generators for synthetic
//! benchmark distributions ([`synthdata`]) and an experiment harness
//! ([`bench`]) that produces plot-ready error tables.
//!
//! Everything is deterministic given the seeds carried in the parameter
//! structs. With the default `parallel` feature the per-direction and
//! per-sample loops run on rayon; reductions are order-independent min/max
//! folds or index-ordered sums, so parallel and sequential builds (and any
//! thread count) produce bit-identical results.

// `!(a < b)` style guards are deliberate: unlike `a >= b`, they reject NaN
// together with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cloud;
pub mod depth;
mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
mod par;
pub(crate) mod seedmix;
pub mod synthdata;

pub use cloud::PointCloud;
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
