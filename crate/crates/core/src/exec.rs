//! Execution strategy for data-parallel scans.
//!
//! Work is always cut into the same fixed-size chunks, and chunk results
//! are merged in chunk order, so floating-point reductions and set merges
//! are bit-identical between [`Exec::Sequential`] and [`Exec::Parallel`]
//! and independent of the thread count.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Rayon when compiled with the `parallel` feature, sequential otherwise.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Applies `f` to each chunk of `range` (chunks of `chunk_len`, last one
    /// possibly shorter) and returns the results in chunk order.
    pub fn map_chunks<T, F>(self, range: Range<u64>, chunk_len: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<u64>) -> T + Sync + Send,
    {
        assert!(chunk_len > 0);
        let chunks = chunk_ranges(range, chunk_len);
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return chunks.into_par_iter().map(f).collect();
        }
        chunks.into_iter().map(f).collect()
    }

    /// Element-wise ordered map over `range`.
    pub fn map_range<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Ordered map over a slice.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}

fn chunk_ranges(range: Range<u64>, chunk_len: u64) -> Vec<Range<u64>> {
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = lo.saturating_add(chunk_len).min(range.end);
        out.push(lo..hi);
        lo = hi;
    }
    out
}
