//! Execution mode for the data-parallel loops. Without the `parallel` feature both
//! modes run sequentially.

use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `f` applied to every item, results in input order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Map then fold with an associative `combine`; chunking is deterministic so the
    /// result does not depend on scheduling.
    pub fn map_reduce<T, R, F, C>(self, items: &[T], identity: R, f: F, combine: C) -> R
    where
        T: Sync,
        R: Send + Sync + Clone,
        F: Fn(&T) -> R + Sync + Send,
        C: Fn(R, R) -> R + Sync + Send,
    {
        const CHUNK: usize = 256;
        let chunks: Vec<&[T]> = items.chunks(CHUNK).collect();
        let partial = self.map(&chunks, |chunk| chunk.iter().map(&f).fold(identity.clone(), &combine));
        partial.into_iter().fold(identity, combine)
    }
}

/// Size the global worker pool; 0 keeps the default (available parallelism). Only
/// the first call before any parallel work takes effect.
pub fn init_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..10_000).collect();
        let a = Exec::Parallel.map_reduce(&xs, 0u64, |x| x * x, |a, b| a + b);
        let b = Exec::Sequential.map_reduce(&xs, 0u64, |x| x * x, |a, b| a + b);
        assert_eq!(a, b);
        assert_eq!(Exec::Parallel.map(&xs, |x| x + 1), Exec::Sequential.map(&xs, |x| x + 1));
    }
}
