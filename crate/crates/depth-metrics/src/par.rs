//! Optional data parallelism.
//!
//! With the `parallel` feature (default) the macro below yields a rayon
//! parallel iterator, otherwise a plain sequential one. Callers only use
//! shapes whose results do not depend on the execution order (indexed
//! `map`/`collect`, elementwise min/max folds), so both builds produce
//! identical output.

/// Iterate `$it` in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
#[macro_export]
macro_rules! iter_maybe_parallel {
    ($it:expr) => {
        rayon::iter::IntoParallelIterator::into_par_iter($it)
    };
}

/// Iterate `$it` in parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
#[macro_export]
macro_rules! iter_maybe_parallel {
    ($it:expr) => {
        ::core::iter::IntoIterator::into_iter($it)
    };
}
