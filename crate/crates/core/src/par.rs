//! Thin switch between rayon and sequential iteration.
//!
//! Every helper returns results in input order, and reductions are done
//! sequentially over per-chunk partials, so outputs are bit-identical with
//! and without the `parallel` feature and independent of the thread count.

/// Chunk length used for order-stable parallel reductions over amplitudes.
pub const REDUCE_CHUNK: usize = 4096;

/// States at or above this many amplitudes apply gates in parallel.
pub const PARALLEL_GATE_MIN_LEN: usize = 1 << 12;

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Maps `f` over fixed-size chunks of `data`, returning per-chunk results
/// in order.
#[cfg(feature = "parallel")]
pub fn map_chunks<T, R, F>(data: &[T], chunk: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &[T]) -> R + Sync + Send,
{
    use rayon::prelude::*;
    data.par_chunks(chunk)
        .enumerate()
        .map(|(i, c)| f(i * chunk, c))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_chunks<T, R, F>(data: &[T], chunk: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &[T]) -> R + Sync + Send,
{
    data.chunks(chunk)
        .enumerate()
        .map(|(i, c)| f(i * chunk, c))
        .collect()
}

/// Runs `f` on each mutable chunk; `f` receives the chunk's start offset.
#[cfg(feature = "parallel")]
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    use rayon::prelude::*;
    if data.len() >= PARALLEL_GATE_MIN_LEN && data.len() > chunk {
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c));
    } else {
        data.chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c));
    }
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    data.chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| f(i * chunk, c));
}

/// Whether this build runs data-parallel loops on rayon.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
