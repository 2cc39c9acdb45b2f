//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the kernels fan out over rayon's
//! global pool. [`set_sequential`] forces the sequential path at runtime, which
//! is what the benches compare against. Results are identical in both modes:
//! every parallel map is indexed and reductions happen afterwards in index
//! order.

use std::sync::atomic::{AtomicBool, Ordering};

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Force (or release) the sequential fallback for all kernels.
pub fn set_sequential(on: bool) {
    SEQUENTIAL.store(on, Ordering::Relaxed);
}

/// Cap kernel parallelism at `threads`. One thread selects the sequential
/// path; larger values size rayon's global pool, which can only happen once
/// per process.
pub fn limit_threads(threads: usize) -> Result<(), String> {
    if threads == 0 {
        return Err("thread count must be positive".into());
    }
    if threads == 1 {
        set_sequential(true);
        return Ok(());
    }
    set_sequential(false);
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())?;
    Ok(())
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !SEQUENTIAL.load(Ordering::Relaxed)
}

/// `(0..n).map(f).collect()`, in parallel when enabled.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Map over a slice, preserving order.
pub fn map_slice<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Apply `f` to consecutive chunks of `data`.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(&mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk).for_each(f);
        return;
    }
    data.chunks_mut(chunk).for_each(f);
}
