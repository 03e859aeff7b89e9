//! Data-parallel map helpers with a sequential fallback.
//!
//! The `parallel` feature (on by default) routes `maybe_par_map` through
//! rayon; without it the same call is a plain iterator map.  `par_map` and
//! `seq_map` are always available under their respective configurations so
//! benchmarks can compare both paths explicitly.

/// Map `f` over `items`, in parallel when the `parallel` feature is active.
pub fn maybe_par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        par_map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq_map(items, f)
    }
}

/// Sequential map, available under all configurations.
pub fn seq_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Rayon map.  Only compiled with the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Apply `f` to each `chunk`-sized slice of `buf` in place, in parallel when
/// the `parallel` feature is active.  `buf.len()` must be a multiple of
/// `chunk`.
pub fn maybe_par_chunks_mut<T, F>(buf: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(&mut [T]) + Sync + Send,
{
    debug_assert_eq!(buf.len() % chunk, 0);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        buf.par_chunks_mut(chunk).for_each(f);
    }
    #[cfg(not(feature = "parallel"))]
    {
        buf.chunks_mut(chunk).for_each(|c| f(c));
    }
}

/// Configure the global rayon pool from the LEVYGEO_THREADS environment
/// variable.  No-op when the variable is unset, unparsable, or the pool is
/// already built; without the `parallel` feature it is always a no-op.
pub fn init_thread_pool_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(s) = std::env::var("LEVYGEO_THREADS") {
            if let Ok(n) = s.trim().parse::<usize>() {
                if n >= 1 {
                    // Ignore the error: the pool may already be initialized.
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_agree() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let a = maybe_par_map(&xs, |x| x * x);
        let b = seq_map(&xs, |x| x * x);
        assert_eq!(a, b);
    }
}
