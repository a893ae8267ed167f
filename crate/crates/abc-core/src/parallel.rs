//! Execution backends for the range-parallel operations.
//!
//! With the `parallel` feature (on by default) work is distributed over the
//! rayon thread pool; without it, or when `Execution::Sequential` is chosen,
//! the same closures run on one thread. Results are merged in input order,
//! so both backends produce identical output.

/// Which backend to run a data-parallel operation on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    /// Single-threaded, always available.
    Sequential,
    /// Rayon thread pool; falls back to sequential when the `parallel`
    /// feature is disabled.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Map `f` over `items`, preserving order.
pub fn run_map<T, U, F>(exec: Execution, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match exec {
        Execution::Sequential => items.into_iter().map(f).collect(),
        Execution::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backends_agree_and_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = run_map(Execution::Sequential, items.clone(), |x| x * x);
        let par = run_map(Execution::Parallel, items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 100);
    }
}
