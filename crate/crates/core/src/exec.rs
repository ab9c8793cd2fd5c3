//! Execution strategy for the embarrassingly parallel loops (per-state
//! verification, unirrep enumeration, quadrature Gram matrices).
//!
//! With the `parallel` feature the work is spread over rayon's pool; without
//! it, or with [`Execution::Sequential`], everything runs on the caller's
//! thread. Output order is identical in both modes.

/// Environment variable capping the worker count (`0` or unset means auto).
pub const THREADS_ENV: &str = "EOP_LAB_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            _ => items.into_iter().map(f).collect(),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Reads [`THREADS_ENV`] and sizes the global pool once. Returns the worker
/// count that was requested, if any.
pub fn configure_threads_from_env() -> Option<usize> {
    let n = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)?;
    #[cfg(feature = "parallel")]
    {
        // Fails only if the pool was already built; keep the existing one.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Some(n)
}
