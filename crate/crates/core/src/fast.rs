//! Higher-degree sweep tree over the y-axis.
//!
//! A node of degree `d` keeps a block stack for the parts of its
//! rectangles that fully cover a run of children `i..=j`; the partial parts
//! go to the right stack (suffixes) of child `i` and the left stack
//! (prefixes) of child `j`. Height-zero rectangles sit on a stack at their
//! leaf. Each node keeps, per time slot, the tails of its stacks and a word
//! with one bit per nonempty child range, so finding the narrowest range
//! over a given child is one mask operation.

use crate::cascade::{Cascade, RankIndex, Shape};
use crate::counters::Counters;
use crate::model::{Rect, RectSet};
use crate::stack::{StackPool, StackRef};
use crate::sweep::{check_rects, owner_events};
use crate::version::{StackEvent, StackOp, Variant, VersionTree};
use crate::Result;

const NONE: u32 = u32::MAX;
const LEFT: usize = 0;
const RIGHT: usize = 1;
const BLOCK: usize = 2;
const DEGEN: usize = 3;

/// Tree degree: the largest `d` whose `d²` child ranges fit in one word.
pub const FAST_ARITY: usize = 8;

/// Mask bit of child range `i..=j`: narrower ranges get lower bits, then
/// smaller `i`.
pub fn range_bit(d: usize, i: usize, j: usize) -> u32 {
    ((j - i) * d + i) as u32
}

pub fn bit_range(d: usize, bit: u32) -> (usize, usize) {
    let (w, i) = (bit as usize / d, bit as usize % d);
    (i, i + w)
}

/// Bits of every range that contains child `k`.
pub fn cover_mask(d: usize, k: usize) -> u64 {
    let mut m = 0;
    for i in 0..=k {
        for j in k..d {
            m |= 1u64 << range_bit(d, i, j);
        }
    }
    m
}

/// The three parts of an interval at its lowest common ancestor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub level: usize,
    /// Index of the ancestor within its level.
    pub index: usize,
    /// Child index and leaf interval of the partial part in the first child.
    pub suffix: Option<(usize, (usize, usize))>,
    /// Fully covered children.
    pub middle: Option<(usize, usize)>,
    pub prefix: Option<(usize, (usize, usize))>,
}

/// Splits leaf interval `[a, b]`, `a < b`, at its lowest common ancestor.
pub fn split_interval(shape: &Shape, a: usize, b: usize) -> Split {
    assert!(a < b && b < shape.leaves());
    let level = shape.lca_level(a, b);
    let index = shape.ancestor(level, a);
    let (ca, cb) = (shape.ancestor(level - 1, a), shape.ancestor(level - 1, b));
    let (i, j) = (shape.child_pos(level, a), shape.child_pos(level, b));
    let (sa, ea) = shape.segment(level - 1, ca);
    let (sb, eb) = shape.segment(level - 1, cb);
    let suffix = (a > sa).then_some((i, (a, ea)));
    let prefix = (b < eb).then_some((j, (sb, b)));
    let lo = if suffix.is_some() { i + 1 } else { i };
    let hi = if prefix.is_some() { j as isize - 1 } else { j as isize };
    let middle = (lo as isize <= hi).then_some((lo, hi as usize));
    Split { level, index, suffix, middle, prefix }
}

#[derive(Debug, Clone, Copy, Default)]
struct Slot {
    left: u32,
    right: u32,
    degen: u32,
    /// Time slot within the block stack.
    bslot: u32,
    mask: u64,
}

/// Block stack of one node: a single version tree shared by all child
/// ranges. For every time slot and child `k` it records the shortest
/// rectangle of the narrowest nonempty range over `k`.
#[derive(Debug, Clone)]
struct BlockStack {
    vt: VersionTree,
    d: usize,
    /// Mask after each distinct time.
    masks: Vec<u64>,
    mins: Vec<u32>,
}

impl BlockStack {
    fn build(events: &[StackEvent], range: &[u32], rects: &[Rect], covers: &[u64]) -> Self {
        let vt = VersionTree::build(events);
        let d = covers.len();
        let nb = d * d;
        let n = vt.len();
        let mut chain_min = vec![NONE; n];
        let mut prev_same = vec![0u32; n];
        let mut top_of = vec![0u32; nb];
        let mut count = vec![0u32; nb];
        let mut masks = Vec::with_capacity(vt.times().len());
        let mut mins = Vec::with_capacity(vt.times().len() * d);
        let mut live: Vec<u32> = Vec::new();
        let mut mask = 0u64;
        let key = |i: u32| (rects[i as usize].height(), rects[i as usize].id);
        let mut next = 1u32;
        for (e_i, e) in events.iter().enumerate() {
            match e.op {
                StackOp::Push(i) => {
                    let k = next;
                    next += 1;
                    let r = range[i as usize] as usize;
                    let prev = top_of[r];
                    prev_same[k as usize] = prev;
                    chain_min[k as usize] = match prev {
                        0 => i,
                        p => {
                            let m = chain_min[p as usize];
                            if key(i) < key(m) {
                                i
                            } else {
                                m
                            }
                        }
                    };
                    top_of[r] = k;
                    count[r] += 1;
                    mask |= 1 << r;
                    live.push(k);
                }
                StackOp::Pop => {
                    let k = live.pop().expect("balanced block events");
                    let i = vt.item(k as usize).unwrap();
                    let r = range[i as usize] as usize;
                    top_of[r] = prev_same[k as usize];
                    count[r] -= 1;
                    if count[r] == 0 {
                        mask &= !(1 << r);
                    }
                }
            }
            if events.get(e_i + 1).is_none_or(|n| n.time != e.time) {
                masks.push(mask);
                for cover in covers {
                    mins.push(match mask & cover {
                        0 => NONE,
                        m => chain_min[top_of[m.trailing_zeros() as usize] as usize],
                    });
                }
            }
        }
        Self { vt, d, masks, mins }
    }

    fn nodes(&self) -> usize {
        self.vt.len() + self.masks.len() + self.mins.len()
    }

    fn bytes(&self) -> usize {
        self.vt.len() * 12 + self.masks.len() * 8 + self.mins.len() * 4
    }

    fn mask(&self, slot: usize) -> u64 {
        if slot == 0 {
            0
        } else {
            self.masks[slot - 1]
        }
    }

    fn tail(&self, slot: usize) -> u32 {
        if slot == 0 {
            0
        } else {
            self.vt.tails()[slot - 1]
        }
    }

    /// Shortest rectangle over child `k` at time slot `slot`.
    fn min_over(&self, slot: u32, k: usize) -> Option<u32> {
        match slot {
            0 => None,
            s => Some(self.mins[(s as usize - 1) * self.d + k]).filter(|&r| r != NONE),
        }
    }
}

/// Constant-time cover threshold for a side stack. On a suffix stack the
/// covering rectangles are those starting at or before `y`, on a prefix
/// stack those ending at or after `y`; either way they are the tallest ones.
#[derive(Debug, Clone)]
struct SideKeys {
    kind: usize,
    base: u32,
    rank: Option<RankIndex>,
}

impl SideKeys {
    fn new(st: StackRef<'_>, rects: &[Rect], kind: usize, base: u32) -> Self {
        let rank = (kind != DEGEN).then(|| {
            let mut cat: Vec<u32> = (0..st.len())
                .map(|k| {
                    let r = &rects[st.rect_at(k) as usize];
                    (if kind == RIGHT { r.y_lo } else { r.y_hi }) - base
                })
                .collect();
            cat.push(0);
            cat.sort_unstable();
            RankIndex::new(&cat)
        });
        Self { kind, base, rank }
    }

    fn bytes(&self) -> usize {
        16 + self.rank.as_ref().map_or(0, RankIndex::bytes)
    }

    /// First height rank that covers `y`, for `y` inside the segment.
    fn threshold(&self, len: usize, y: u32) -> usize {
        let rel = y - self.base;
        match (&self.rank, self.kind) {
            (Some(rk), RIGHT) => len - rk.pred(rel),
            (Some(rk), _) if rel > 0 => rk.pred(rel - 1),
            _ => 0,
        }
    }
}

/// Handles of one path node's structures at a query time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelHandles {
    pub node: usize,
    pub left: u32,
    pub right: u32,
    pub block: u32,
    pub degen: u32,
    pub mask: u64,
}

#[derive(Debug, Clone)]
pub struct FastIndex {
    rects: Vec<Rect>,
    shape: Shape,
    cascade: Cascade,
    covers: Vec<u64>,
    /// Per node and kind: index into `stacks` / `blocks`.
    stack_of: Vec<[u32; 4]>,
    stacks: StackPool,
    keys: Vec<SideKeys>,
    blocks: Vec<BlockStack>,
    slot_off: Vec<u32>,
    slots: Vec<Slot>,
    nodes: usize,
    bytes: usize,
    build_ops: u64,
}

impl FastIndex {
    pub fn build(rs: &RectSet) -> Result<Self> {
        Self::build_with_arity(rs, FAST_ARITY)
    }

    pub fn build_with_arity(rs: &RectSet, d: usize) -> Result<Self> {
        check_rects(rs)?;
        assert!((2..=8).contains(&d), "d * d must fit in a word");
        let g = rs.grid as usize;
        let shape = Shape::mixed(g, d);
        let rects = rs.rects.clone();
        let nn = shape.len();
        let mut range = vec![NONE; rects.len()];
        let mut owners: Vec<Vec<usize>> = Vec::with_capacity(rects.len());
        for (idx, r) in rects.iter().enumerate() {
            let (a, b) = (r.y_lo as usize, r.y_hi as usize);
            let mut o = Vec::with_capacity(3);
            if a == b {
                o.push(DEGEN * nn + shape.node(0, a));
            } else {
                let s = split_interval(&shape, a, b);
                let base = shape.children(s.level, s.index).start;
                if let Some((i, _)) = s.suffix {
                    o.push(RIGHT * nn + shape.node(s.level - 1, base + i));
                }
                if let Some((i, j)) = s.middle {
                    o.push(BLOCK * nn + shape.node(s.level, s.index));
                    range[idx] = range_bit(d, i, j);
                }
                if let Some((j, _)) = s.prefix {
                    o.push(LEFT * nn + shape.node(s.level - 1, base + j));
                }
            }
            owners.push(o);
        }
        let events = owner_events(&rects, |i| owners[i].clone(), 4 * nn);
        let event_count: usize = events.iter().map(Vec::len).sum();
        drop(owners);

        let covers: Vec<u64> = (0..d).map(|k| cover_mask(d, k)).collect();
        let mut stack_of = vec![[NONE; 4]; nn];
        let mut blocks = Vec::new();
        let mut sides = Vec::new();
        for (o, ev) in events.iter().enumerate() {
            if ev.is_empty() {
                continue;
            }
            let (kind, v) = (o / nn, o % nn);
            if kind == BLOCK {
                stack_of[v][kind] = blocks.len() as u32;
                blocks.push(BlockStack::build(ev, &range, &rects, &covers));
            } else {
                stack_of[v][kind] = sides.len() as u32;
                sides.push(o);
            }
        }
        let stacks = StackPool::build(sides.iter().map(|&o| events[o].as_slice()), &rects, Variant::Thin)?;
        let keys: Vec<SideKeys> = sides
            .iter()
            .enumerate()
            .map(|(s, &o)| SideKeys::new(stacks.get(s), &rects, o / nn, shape.segment_of(o % nn).0 as u32))
            .collect();
        drop(events);

        let mut own = vec![Vec::new(); nn];
        let mut slot_off = Vec::with_capacity(nn);
        // nodes without keys all share the first, empty slot
        let mut slots = vec![Slot::default()];
        for v in 0..nn {
            let times = |kind: usize| -> &[u32] {
                match stack_of[v][kind] {
                    NONE => &[],
                    s if kind == BLOCK => blocks[s as usize].vt.times(),
                    s => stacks.get(s as usize).times(),
                }
            };
            let mut keys: Vec<u32> = (0..4).flat_map(|k| times(k).iter().copied()).collect();
            keys.sort_unstable();
            keys.dedup();
            if keys.is_empty() {
                slot_off.push(0);
                continue;
            }
            slot_off.push(slots.len() as u32);
            let mut ptr = [0usize; 4];
            slots.push(Slot::default());
            for &t in &keys {
                for (k, p) in ptr.iter_mut().enumerate() {
                    let ts = times(k);
                    while *p < ts.len() && ts[*p] <= t {
                        *p += 1;
                    }
                }
                let tail = |kind: usize| match stack_of[v][kind] {
                    NONE => 0,
                    s => stacks.get(s as usize).tail(ptr[kind]),
                };
                let mask = match stack_of[v][BLOCK] {
                    NONE => 0,
                    s => blocks[s as usize].mask(ptr[BLOCK]),
                };
                let bslot = ptr[BLOCK] as u32;
                slots.push(Slot { left: tail(LEFT), right: tail(RIGHT), degen: tail(DEGEN), bslot, mask });
            }
            own[v] = keys;
        }
        let cascade = Cascade::build_with_root_rank(&shape, &own);
        let build_ops = (event_count + cascade.entries() + slots.len() + stacks.vertices()) as u64;
        let nodes = shape.len()
            + cascade.entries()
            + slots.len()
            + stacks.nodes()
            + blocks.iter().map(BlockStack::nodes).sum::<usize>();
        let bytes = cascade.bytes()
            + slots.len() * std::mem::size_of::<Slot>()
            + stack_of.len() * 16
            + stacks.bytes()
            + keys.iter().map(SideKeys::bytes).sum::<usize>()
            + blocks.iter().map(BlockStack::bytes).sum::<usize>();
        Ok(Self { rects, shape, cascade, covers, stack_of, stacks, keys, blocks, slot_off, slots, nodes, bytes, build_ops })
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn arity(&self) -> usize {
        self.shape.arity()
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

    fn slot(&self, v: usize, s: u32) -> &Slot {
        &self.slots[self.slot_off[v] as usize + s as usize]
    }

    /// Structure handles at time `x` for every ancestor of leaf `y`, leaf
    /// first.
    pub fn locate_all(&self, x: u32, y: u32) -> Vec<LevelHandles> {
        if y as usize >= self.shape.leaves() {
            return Vec::new();
        }
        let mut slots = Vec::new();
        self.cascade.path_slots(y as usize, x, &mut slots, &mut Counters::new());
        slots
            .iter()
            .enumerate()
            .map(|(l, &s)| {
                let node = self.shape.node(l, self.shape.ancestor(l, y as usize));
                let sl = self.slot(node, s);
                let block = match self.stack_of[node][BLOCK] {
                    NONE => 0,
                    b => self.blocks[b as usize].tail(sl.bslot as usize),
                };
                LevelHandles { node, left: sl.left, right: sl.right, block, degen: sl.degen, mask: sl.mask }
            })
            .collect()
    }

    /// Narrowest nonempty child range over child `k` in `mask`.
    pub fn block_lookup(&self, mask: u64, k: usize) -> Option<(usize, usize)> {
        let m = mask & self.covers[k];
        (m != 0).then(|| bit_range(self.shape.arity(), m.trailing_zeros()))
    }

    pub fn smallest(&self, x: u32, y: u32, c: &mut Counters) -> Option<u32> {
        let g = self.shape.leaves() as u32;
        if x >= g || y >= g {
            return None;
        }
        let yy = y as usize;
        let mut slots = Vec::with_capacity(self.shape.levels());
        self.cascade.path_slots(yy, x, &mut slots, c);
        let leaf = self.shape.node(0, yy);
        let sl = self.slot(leaf, slots[0]);
        c.step();
        if sl.degen != 0 {
            let s = self.stack_of[leaf][DEGEN];
            return (s != NONE).then(|| self.stacks.min_from(s as usize, sl.degen, 0, c)).flatten();
        }
        for level in 1..self.shape.levels() {
            let ui = self.shape.ancestor(level, yy);
            if self.shape.is_unary(level, ui) {
                continue;
            }
            c.step();
            let v = self.shape.node(level - 1, self.shape.ancestor(level - 1, yy));
            let u = self.shape.node(level, ui);
            let sv = self.slot(v, slots[level - 1]);
            let su = self.slot(u, slots[level]);
            let block = su.mask & self.covers[self.shape.child_pos(level, yy)];
            c.cmp(1);
            // Suffixes reach the end of the child's segment and prefixes its
            // start, so the uncovered part is one gap, tested in one go.
            let (seg_lo, seg_hi) = self.shape.segment(level - 1, self.shape.ancestor(level - 1, yy));
            let side = |kind: usize, tail: u32| match self.stack_of[v][kind] {
                NONE => None,
                _ if tail == 0 => None,
                s => self.stacks.get(s as usize).largest(tail).map(|r| (s as usize, &self.rects[r as usize])),
            };
            let right = side(RIGHT, sv.right);
            let left = side(LEFT, sv.left);
            let gap_lo = left.map_or(seg_lo as u32, |(_, r)| r.y_hi + 1);
            let gap_hi = right.map_or(seg_hi as u32 + 1, |(_, r)| r.y_lo);
            // live rectangles overlapping in y are nested, so sides never cross
            debug_assert!(gap_lo <= gap_hi);
            let in_gap = match (left, right) {
                (None, None) => true,
                _ => {
                    c.cmp(1);
                    y.wrapping_sub(gap_lo) < gap_hi.wrapping_sub(gap_lo)
                }
            };
            if block == 0 && in_gap {
                continue;
            }
            let mut best: Option<u32> = None;
            let mut take = |r: Option<u32>, c: &mut Counters| {
                let Some(r) = r else { return };
                let key = |i: u32| (self.rects[i as usize].height(), self.rects[i as usize].id);
                if let Some(b) = best {
                    c.cmp(1);
                    if key(b) < key(r) {
                        return;
                    }
                }
                best = Some(r);
            };
            if block != 0 {
                c.probe();
                let bs = &self.blocks[self.stack_of[u][BLOCK] as usize];
                take(bs.min_over(su.bslot, self.shape.child_pos(level, yy)), c);
            }
            if !in_gap {
                for (sd, tail) in [(right, sv.right), (left, sv.left)] {
                    if let Some((s, _)) = sd {
                        c.probe();
                        let r = self.keys[s].threshold(self.stacks.get(s).len(), y);
                        take(self.stacks.min_from(s, tail, r, c), c);
                    }
                }
            }
            return best;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_order_by_width_then_start() {
        let d = 4;
        assert_eq!(cover_mask(d, 0).count_ones(), 4);
        assert_eq!(cover_mask(d, 1).count_ones(), 6);
        let m = (1u64 << range_bit(d, 0, 2)) | (1u64 << range_bit(d, 1, 1));
        let lowest = (m & cover_mask(d, 1)).trailing_zeros();
        assert_eq!(bit_range(d, lowest), (1, 1));
        assert_eq!((m & cover_mask(d, 3)), 0);
        for i in 0..8 {
            for j in i..8 {
                assert_eq!(bit_range(8, range_bit(8, i, j)), (i, j));
                assert!(range_bit(8, i, j) < 64);
            }
        }
    }

    #[test]
    fn split_partitions_every_interval() {
        let shape = Shape::new(16, 4);
        for a in 0..16 {
            for b in a + 1..16 {
                let s = split_interval(&shape, a, b);
                let mut covered = Vec::new();
                if let Some((_, (lo, hi))) = s.suffix {
                    covered.extend(lo..=hi);
                }
                if let Some((i, j)) = s.middle {
                    for c in i..=j {
                        let (lo, hi) = shape.segment(s.level - 1, s.index * 4 + c);
                        covered.extend(lo..=hi);
                    }
                }
                if let Some((_, (lo, hi))) = s.prefix {
                    covered.extend(lo..=hi);
                }
                assert_eq!(covered, (a..=b).collect::<Vec<_>>(), "[{a},{b}]");
            }
        }
        let s = split_interval(&shape, 4, 7);
        assert_eq!((s.level, s.suffix, s.middle, s.prefix), (1, None, Some((0, 3)), None));
        let s = split_interval(&shape, 4, 11);
        assert_eq!((s.level, s.suffix, s.middle, s.prefix), (2, None, Some((1, 2)), None));
    }

    #[test]
    fn wide_node_split() {
        // children of the root have 8 leaves each; [9, 40] covers 2..=4 fully
        let shape = Shape::new(64, 8);
        let s = split_interval(&shape, 9, 40);
        assert_eq!(s.suffix, Some((1, (9, 15))));
        assert_eq!(s.middle, Some((2, 4)));
        assert_eq!(s.prefix, Some((5, (40, 40))));
        let s = split_interval(&shape, 16, 39);
        assert_eq!((s.suffix, s.middle, s.prefix), (None, Some((2, 4)), None));
    }
}
