//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it they fall back to plain sequential iteration. Output order always
//! matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items` on the current rayon pool, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Maps `f` over `items` on a dedicated pool of `workers` threads. Tasks are
/// handed to whichever worker is free; results come back in input order.
#[cfg(feature = "parallel")]
pub fn map_with_workers<T, U, F>(workers: usize, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    if workers <= 1 {
        return items.into_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.into_par_iter().with_max_len(1).map(f).collect()),
        Err(e) => {
            log::warn!("could not start a {workers}-thread pool ({e}); running sequentially");
            items.into_iter().map(f).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_with_workers<T, U, F>(workers: usize, items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    if workers > 1 {
        log::debug!("built without the `parallel` feature; ignoring workers={workers}");
    }
    items.into_iter().map(f).collect()
}
