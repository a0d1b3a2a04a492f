//! Dispatch through a pair of stabbing indexes: one over the reduction's
//! rectangles and one over the same rectangles with axes swapped.

use std::fmt;

use crate::counters::Counters;
use crate::fast::FastIndex;
use crate::model::{bridges_to_rects, split_shared_endpoints, swap_axes, BridgeSet, ClassTree, Reduction, RectSet, SplitInstance};
use crate::sweep::SweepIndex;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Method(usize),
    Ambiguous,
    NoMethod,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Method(id) => write!(f, "method {id}"),
            Answer::Ambiguous => f.write_str("ambiguous"),
            Answer::NoMethod => f.write_str("none"),
        }
    }
}

/// Smallest-height stabbing over a rectangle set.
pub trait Stabbing: Sized {
    fn build(rs: &RectSet) -> Result<Self>;
    /// Index of the shortest rectangle containing `(x, y)`.
    fn smallest(&self, x: u32, y: u32, c: &mut Counters) -> Option<u32>;
    fn nodes(&self) -> usize;
    fn bytes(&self) -> usize;
    /// Elementary build steps: events replayed, catalog entries merged and
    /// vertices preprocessed.
    fn build_ops(&self) -> u64;
}

impl Stabbing for SweepIndex {
    fn build(rs: &RectSet) -> Result<Self> {
        SweepIndex::build(rs)
    }
    fn smallest(&self, x: u32, y: u32, c: &mut Counters) -> Option<u32> {
        SweepIndex::smallest(self, x, y, c)
    }
    fn nodes(&self) -> usize {
        SweepIndex::nodes(self)
    }
    fn bytes(&self) -> usize {
        SweepIndex::bytes(self)
    }
    fn build_ops(&self) -> u64 {
        SweepIndex::build_ops(self)
    }
}

impl Stabbing for FastIndex {
    fn build(rs: &RectSet) -> Result<Self> {
        FastIndex::build(rs)
    }
    fn smallest(&self, x: u32, y: u32, c: &mut Counters) -> Option<u32> {
        FastIndex::smallest(self, x, y, c)
    }
    fn nodes(&self) -> usize {
        FastIndex::nodes(self)
    }
    fn bytes(&self) -> usize {
        FastIndex::bytes(self)
    }
    fn build_ops(&self) -> u64 {
        FastIndex::build_ops(self)
    }
}

#[derive(Debug, Clone)]
pub struct Dispatcher<E> {
    split: SplitInstance,
    reduction: Reduction,
    by_height: E,
    by_width: E,
}

pub type SweepDispatcher = Dispatcher<SweepIndex>;
pub type FastDispatcher = Dispatcher<FastIndex>;

impl<E: Stabbing> Dispatcher<E> {
    pub fn build(tree: &ClassTree, bridges: &BridgeSet) -> Result<Self> {
        let split = split_shared_endpoints(tree, bridges);
        let reduction = bridges_to_rects(&split);
        let by_height = E::build(&reduction.rects)?;
        let by_width = E::build(&swap_axes(&reduction.rects))?;
        Ok(Self { split, reduction, by_height, by_width })
    }

    pub fn split(&self) -> &SplitInstance {
        &self.split
    }

    pub fn reduction(&self) -> &Reduction {
        &self.reduction
    }

    pub fn height_index(&self) -> &E {
        &self.by_height
    }

    pub fn width_index(&self) -> &E {
        &self.by_width
    }

    pub fn nodes(&self) -> usize {
        self.by_height.nodes() + self.by_width.nodes() + self.split.tree2.n() + self.reduction.rects.len()
    }

    pub fn bytes(&self) -> usize {
        self.by_height.bytes() + self.by_width.bytes()
    }

    /// Build-side counters: nodes, bytes and elementary steps, the latter
    /// reported as cascade steps.
    pub fn build_counters(&self) -> Counters {
        let n2 = (self.split.tree2.n() + self.reduction.rects.len()) as u64;
        Counters {
            cascade_steps: self.by_height.build_ops() + self.by_width.build_ops() + n2,
            nodes: self.nodes() as u64,
            bytes: self.bytes() as u64,
            ..Counters::new()
        }
    }

    /// Grid point of an original query pair, if it lies under any rectangle
    /// bounds.
    pub fn point(&self, u: usize, v: usize) -> Result<Option<(u32, u32)>> {
        let (u2, v2) = self.split.map_query(u, v)?;
        self.reduction.query_point(&self.split.tree2, u2, v2)
    }

    pub fn dispatch(&self, u: usize, v: usize, c: &mut Counters) -> Result<Answer> {
        let Some((x, y)) = self.point(u, v)? else {
            return Ok(Answer::NoMethod);
        };
        let h = self.by_height.smallest(x, y, c);
        let w = self.by_width.smallest(y, x, c);
        c.cmp(1);
        Ok(match (h, w) {
            (None, None) => Answer::NoMethod,
            (Some(a), Some(b)) if a == b => {
                let id = self.reduction.rects.rects[a as usize].id;
                Answer::Method(self.split.back[id as usize] as usize)
            }
            _ => Answer::Ambiguous,
        })
    }
}
