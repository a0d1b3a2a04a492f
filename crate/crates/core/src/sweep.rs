//! Binary sweep tree over the y-axis with one stack per node.
//!
//! A rectangle lives at the lowest common ancestor of its two y-leaves
//! (at the leaf itself when its height is zero), pushed when the sweep
//! reaches `x_lo` and popped just after `x_hi`. A query locates the stack
//! tails at every ancestor of its leaf with one cascaded search, picks the
//! lowest ancestor whose stack covers `y`, and asks that stack for its
//! shortest covering rectangle.

use crate::cascade::{Cascade, Shape};
use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::model::{validate_rect_set, Rect, RectSet};
use crate::stack::{StackPool, StackRef};
use crate::version::{StackEvent, StackOp, Variant};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct SweepIndex {
    rects: Vec<Rect>,
    shape: Shape,
    cascade: Cascade,
    stack_of: Vec<u32>,
    stacks: StackPool,
    nodes: usize,
    bytes: usize,
    build_ops: u64,
}

pub(crate) fn check_rects(rs: &RectSet) -> Result<()> {
    for r in &rs.rects {
        let hi = r.x_lo.max(r.x_hi).max(r.y_lo).max(r.y_hi);
        if hi >= rs.grid {
            return Err(Error::CoordinateOutOfRange(hi as u64));
        }
    }
    if !validate_rect_set(rs) {
        return Err(Error::NotLaminar);
    }
    Ok(())
}

/// Push/pop events of rectangles grouped by owner, in sweep order. Pops come
/// before pushes at the same time; simultaneous pops leave innermost first.
pub(crate) fn owner_events(rects: &[Rect], owner: impl Fn(usize) -> Vec<usize>, owners: usize) -> Vec<Vec<StackEvent>> {
    let mut all: Vec<(usize, u32, u8, u64, u32)> = Vec::with_capacity(rects.len() * 2);
    for (i, r) in rects.iter().enumerate() {
        for o in owner(i) {
            all.push((o, r.x_lo, 1, u64::from(u32::MAX - r.x_hi) << 32 | i as u64, i as u32));
            all.push((o, r.x_hi + 1, 0, u64::from(u32::MAX - r.x_lo) << 32 | (u32::MAX - i as u32) as u64, i as u32));
        }
    }
    all.sort_unstable();
    let mut out = vec![Vec::new(); owners];
    for (o, time, kind, _, i) in all {
        let op = if kind == 0 { StackOp::Pop } else { StackOp::Push(i) };
        out[o].push(StackEvent { time, op });
    }
    out
}

impl SweepIndex {
    pub fn build(rs: &RectSet) -> Result<Self> {
        check_rects(rs)?;
        let g = rs.grid as usize;
        let shape = Shape::new(g, 2);
        let rects = rs.rects.clone();
        let node_of = |i: usize| {
            let r = &rects[i];
            let level = shape.lca_level(r.y_lo as usize, r.y_hi as usize);
            vec![shape.node(level, shape.ancestor(level, r.y_lo as usize))]
        };
        let events = owner_events(&rects, node_of, shape.len());
        let mut stack_of = vec![NONE; shape.len()];
        let mut next = 0;
        for (v, ev) in events.iter().enumerate() {
            if !ev.is_empty() {
                stack_of[v] = next;
                next += 1;
            }
        }
        let stacks = StackPool::build(events.iter().filter(|e| !e.is_empty()).map(Vec::as_slice), &rects, Variant::Heavy)?;
        drop(events);
        let own: Vec<Vec<u32>> = stack_of
            .iter()
            .map(|&s| if s == NONE { Vec::new() } else { stacks.get(s as usize).times().to_vec() })
            .collect();
        let cascade = Cascade::build(&shape, &own);
        drop(own);
        let build_ops = (2 * rects.len() + cascade.entries() + stacks.vertices()) as u64;
        let nodes = shape.len() + cascade.entries() + stacks.nodes();
        let bytes = cascade.bytes() + stack_of.len() * 4 + stacks.bytes();
        Ok(Self { rects, shape, cascade, stack_of, stacks, nodes, bytes, build_ops })
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn bytes(&self) -> usize {
        self.bytes
    }

    pub fn build_ops(&self) -> u64 {
        self.build_ops
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    fn stack(&self, node: usize) -> Option<StackRef<'_>> {
        match self.stack_of[node] {
            NONE => None,
            s => Some(self.stacks.get(s as usize)),
        }
    }

    /// Stack tail at time `x` for each ancestor of leaf `y`, leaf first.
    /// Handle 0 is the empty stack.
    pub fn locate_tails(&self, x: u32, y: u32) -> Vec<(usize, u32)> {
        if y >= self.shape.leaves() as u32 {
            return Vec::new();
        }
        let mut slots = Vec::new();
        self.cascade.path_slots(y as usize, x, &mut slots, &mut Counters::new());
        (0..self.shape.levels())
            .map(|l| {
                let v = self.shape.node(l, self.shape.ancestor(l, y as usize));
                (v, self.stack(v).map_or(0, |s| s.tail(slots[l] as usize)))
            })
            .collect()
    }

    /// Items on the stack of `node` at handle `tail`, top first.
    pub fn stack_items(&self, node: usize, tail: u32) -> Vec<u32> {
        self.stack(node).map_or(Vec::new(), |s| s.items(tail))
    }

    /// Index of the shortest rectangle containing `(x, y)`.
    pub fn smallest(&self, x: u32, y: u32, c: &mut Counters) -> Option<u32> {
        self.smallest_at(x, y, c).map(|(r, _)| r)
    }

    /// Also reports the tree node the answer was taken from.
    pub fn smallest_at(&self, x: u32, y: u32, c: &mut Counters) -> Option<(u32, usize)> {
        let g = self.shape.leaves() as u32;
        if x >= g || y >= g {
            return None;
        }
        let mut slots = Vec::with_capacity(self.shape.levels());
        self.cascade.path_slots(y as usize, x, &mut slots, c);
        for (level, &slot) in slots.iter().enumerate() {
            c.step();
            let v = self.shape.node(level, self.shape.ancestor(level, y as usize));
            let Some(st) = self.stack(v) else { continue };
            let tail = st.tail(slot as usize);
            if let Some(big) = st.largest(tail) {
                let r = &self.rects[big as usize];
                // every interval here straddles the node's midpoint
                c.cmp(1);
                let reach = if level == 0 || y >> (level - 1) & 1 == 0 { r.y_lo <= y } else { y <= r.y_hi };
                if reach {
                    return self.stacks.min_cover(self.stack_of[v] as usize, tail, y, &self.rects, c).map(|r| (r, v));
                }
            }
        }
        None
    }

    /// Node holding rectangle `i`.
    pub fn owner(&self, i: usize) -> usize {
        let r = &self.rects[i];
        let level = self.shape.lca_level(r.y_lo as usize, r.y_hi as usize);
        self.shape.node(level, self.shape.ancestor(level, r.y_lo as usize))
    }
}
