//! Execution strategy switch shared by the statevector kernels and the sampler.
//!
//! With the `parallel` feature (on by default) large kernels run on the rayon
//! pool. Results are bit-identical to the sequential path: reductions are
//! summed over fixed-size chunks in a fixed order, and sampling draws from
//! RNG streams keyed by block index rather than by worker.

/// How data-parallel kernels are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Parallelism {
    /// Single-threaded loops.
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    /// Rayon work-stealing over index ranges or sample blocks.
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether this strategy uses more than one thread.
    pub fn is_parallel(self) -> bool {
        self != Parallelism::Sequential
    }
}

/// Chunk length used by ordered reductions.
pub(crate) const REDUCE_CHUNK: usize = 1 << 12;

/// Registers smaller than this many amplitudes always use the sequential kernels.
#[cfg_attr(not(feature = "parallel"), allow(dead_code))]
pub(crate) const PARALLEL_THRESHOLD: usize = 1 << 14;

/// Sum `f` over `0..len`, chunked so that the rounding is independent of the strategy.
pub(crate) fn ordered_sum<F>(len: usize, mode: Parallelism, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(REDUCE_CHUNK);
    let chunk_sum = |c: usize| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(len);
        (lo..hi).map(&f).sum::<f64>()
    };
    match mode {
        Parallelism::Sequential => (0..chunks).map(chunk_sum).sum(),
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            if len < PARALLEL_THRESHOLD {
                return (0..chunks).map(chunk_sum).sum();
            }
            let partial: Vec<f64> = (0..chunks).into_par_iter().map(chunk_sum).collect();
            partial.into_iter().sum()
        }
    }
}
