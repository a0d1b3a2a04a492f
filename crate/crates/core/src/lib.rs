//! Binary method dispatch in a class hierarchy.
//!
//! A bridge `(u, v)` is a two-argument method applicable to `(u', v')` when
//! `u'` descends from `u` and `v'` from `v`. Dispatch picks the unique lowest
//! applicable bridge or reports ambiguity. The hierarchy is reduced to a
//! laminar family of rectangles; the lowest bridge is the rectangle that is
//! both the smallest-height and the smallest-width one stabbed by the query
//! point. Two stabbing engines are provided: a binary sweep tree with
//! heavy-path ancestor indexes, and a higher-degree tree with thin-fragment
//! ancestor indexes.

pub mod bench;
pub mod cascade;
pub mod counters;
mod dispatch;
pub mod error;
pub mod fast;
pub mod format;
pub mod grid;
pub mod model;
pub mod oracle;
mod stack;
pub mod sweep;
pub mod version;

pub use counters::Counters;
pub use dispatch::{Answer, Dispatcher, FastDispatcher, Stabbing, SweepDispatcher};
pub use error::{Error, Result};

/// `⌈log₂ n⌉` for `n >= 1`, and 0 for `n <= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

