//! Dominance-successor micro-structures for small point sets.

mod plane;
mod space;
mod word;

pub use plane::{grid2_limit, Grid2Index};
pub use space::{grid3_limit, Grid3Index};
pub use word::{word_encode, word_query, SIDE as WORD_SIDE};
