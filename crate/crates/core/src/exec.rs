//! Data-parallel helpers with a sequential fallback.
//!
//! Work is always split into the same fixed-size chunks and partial results
//! are combined in chunk order, so [`Execution::Parallel`] and
//! [`Execution::Sequential`] produce bit-identical floating point output.
//! Without the `parallel` feature both variants run sequentially.

/// Number of items handed to one task by the chunked helpers.
pub const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
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

impl Execution {
    /// Applies `f` to every fixed-size chunk of `data`, returning results in chunk order.
    pub fn map_chunks<T, R, F>(self, data: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&[T]) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                data.par_chunks(CHUNK).map(f).collect()
            }
            _ => data.chunks(CHUNK).map(f).collect(),
        }
    }

    /// Applies `f` to consecutive index ranges of length [`CHUNK`] covering
    /// `0..n`, returning results in range order.
    pub fn map_chunk_ranges<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(std::ops::Range<usize>) -> R + Sync + Send,
    {
        let chunks = n.div_ceil(CHUNK);
        self.map_range(chunks, |c| f(c * CHUNK..((c + 1) * CHUNK).min(n)))
    }

    /// Applies `f` to each index in `0..n`, returning results in index order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Applies `f` to each element of `items`, returning results in input order.
    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}
