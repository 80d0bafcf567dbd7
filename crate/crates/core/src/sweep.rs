//! Maps over ranges of `D`. Each call owns its own field contexts, so the only
//! parallel axis is across fields.

use crate::field::{square_factor, FieldContext};

/// Squarefree `D` in `[from, to]`, and the rest of the range.
pub fn split_squarefree(from: i64, to: i64) -> (Vec<i64>, Vec<i64>) {
    (from.max(2)..=to).partition(|&d| square_factor(d as u64).is_none())
}

/// Runs `f` on one context per `D`, in parallel when the `parallel` feature is
/// on. Output order follows `ds`.
pub fn map_fields<T, F>(ds: &[i64], f: F) -> Vec<T>
where
    F: Fn(&FieldContext) -> T + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ds.par_iter().map(|&d| run_one(d, &f)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_fields_sequential(ds, f)
    }
}

pub fn map_fields_sequential<T, F>(ds: &[i64], f: F) -> Vec<T>
where
    F: Fn(&FieldContext) -> T,
{
    ds.iter().map(|&d| run_one(d, &f)).collect()
}

fn run_one<T>(d: i64, f: &impl Fn(&FieldContext) -> T) -> T {
    let ctx = FieldContext::new(d).unwrap_or_else(|e| panic!("sweep over invalid D: {e}"));
    f(&ctx)
}

/// Runs `op` on a pool of `jobs` threads, or the global pool for `None`.
/// Without the `parallel` feature this just calls `op`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match jobs {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool")
                .install(op),
            None => op(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        op()
    }
}
