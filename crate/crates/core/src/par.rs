//! Order-preserving parallel map: rayon when the `parallel` feature is on
//! and more than one thread is requested, a plain loop otherwise.

/// Threads the machine offers.
pub fn available_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// `(0..len).map(f).collect()`, evaluated on `threads` workers.
///
/// The output order never depends on the thread count.
pub fn map_indexed<T, F>(len: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if threads > 1 && len > 1 {
        use rayon::prelude::*;
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(|| (0..len).into_par_iter().map(&f).collect());
        }
    }
    let _ = threads;
    (0..len).map(f).collect()
}
