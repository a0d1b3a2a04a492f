//! Sweep-node stacks: their version trees, tails, and the preprocessing for
//! "smallest interval on the stack that covers `y`" queries.
//!
//! All stacks of one index share flat arrays, and their version trees hang
//! below a common super-root preprocessed by a single ancestor index.

use crate::counters::{partition_point, Counters};
use crate::model::{ClassTree, Rect};
use crate::version::{AncestorIndex, StackEvent, Variant, VersionTree};
use crate::Result;

const NONE: u32 = u32::MAX;

/// All rectangles ever held by one stack must have pairwise nested
/// y-intervals; the queries rely on it.
#[derive(Debug, Clone)]
pub(crate) struct StackPool {
    /// Per stack: first version-tree node, then first time slot.
    node_off: Vec<u32>,
    time_off: Vec<u32>,
    parent: Vec<u32>,
    item: Vec<u32>,
    /// Node holding the tallest rectangle among ancestors-or-self.
    amax: Vec<u32>,
    /// Nodes other than the root, by increasing rectangle height. Stack `s`
    /// starts at `node_off[s] - s`.
    by_height: Vec<u32>,
    times: Vec<u32>,
    tails: Vec<u32>,
    anc: AncestorIndex,
}

/// One stack of a pool. Node 0 is the empty stack.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StackRef<'a> {
    pool: &'a StackPool,
    s: usize,
}

impl<'a> StackRef<'a> {
    fn node(&self, k: u32) -> usize {
        self.pool.node_off[self.s] as usize + k as usize
    }

    pub fn times(&self) -> &'a [u32] {
        &self.pool.times[self.pool.time_off[self.s] as usize..self.pool.time_off[self.s + 1] as usize]
    }

    /// Tail after the first `slot` distinct event times.
    pub fn tail(&self, slot: usize) -> u32 {
        match slot {
            0 => 0,
            _ => self.pool.tails[self.pool.time_off[self.s] as usize + slot - 1],
        }
    }

    /// Number of rectangles ever pushed.
    pub fn len(&self) -> usize {
        (self.pool.node_off[self.s + 1] - self.pool.node_off[self.s] - 1) as usize
    }

    fn by_height(&self) -> &'a [u32] {
        let lo = self.pool.node_off[self.s] as usize - self.s;
        &self.pool.by_height[lo..lo + self.len()]
    }

    /// Rectangle with height rank `r` on this stack.
    pub fn rect_at(&self, r: usize) -> u32 {
        self.pool.item[self.node(self.by_height()[r])]
    }

    /// Tallest rectangle on the stack whose top is `tail`.
    pub fn largest(&self, tail: u32) -> Option<u32> {
        match self.pool.amax[self.node(tail)] {
            NONE => None,
            k => Some(self.pool.item[self.node(k)]),
        }
    }

    /// Rectangles on the stack whose top is `tail`, top first.
    pub fn items(&self, tail: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut k = tail;
        while k != 0 {
            out.push(self.pool.item[self.node(k)]);
            k = self.pool.parent[self.node(k)];
        }
        out
    }
}

impl StackPool {
    pub fn build<'a>(events: impl IntoIterator<Item = &'a [StackEvent]>, rects: &[Rect], variant: Variant) -> Result<Self> {
        let key = |i: u32| (rects[i as usize].height(), rects[i as usize].id);
        let (mut node_off, mut time_off) = (vec![0u32], vec![0u32]);
        let (mut parent, mut item, mut amax, mut by_height) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let (mut times, mut tails) = (Vec::new(), Vec::new());
        for ev in events {
            let vt = VersionTree::build(ev);
            let n = vt.len();
            let mut order: Vec<u32> = (1..n as u32).collect();
            order.sort_unstable_by_key(|&k| key(vt.item(k as usize).unwrap()));
            by_height.extend(order);
            amax.extend(vt.ancestor_max(|it| rects[it as usize].height()));
            parent.push(NONE);
            item.push(NONE);
            for k in 1..n {
                parent.push(vt.parent(k).unwrap() as u32);
                item.push(vt.item(k).unwrap());
            }
            times.extend_from_slice(vt.times());
            tails.extend_from_slice(vt.tails());
            node_off.push(parent.len() as u32);
            time_off.push(times.len() as u32);
        }

        // forest vertex 0 is the super-root; node `j` of the flat arrays is
        // vertex `j + 1`, and stack roots outweigh every rectangle
        let total = parent.len();
        let mut parents: Vec<Option<usize>> = Vec::with_capacity(total + 1);
        parents.push(None);
        parents.extend(parent.iter().enumerate().map(|(j, &p)| {
            Some(match p {
                NONE => 0,
                p => 1 + j - j_local(&node_off, j) + p as usize,
            })
        }));
        let mut order: Vec<u32> = (0..total as u32 + 1).collect();
        let vkey = |v: u32| match v {
            0 => (u32::MAX, u32::MAX, u32::MAX),
            v => match item[v as usize - 1] {
                NONE => (u32::MAX, u32::MAX, v),
                i => {
                    let (h, id) = key(i);
                    (h, id, v)
                }
            },
        };
        order.sort_unstable_by_key(|&v| vkey(v));
        let mut weight = vec![0u32; total + 1];
        for (w, &v) in order.iter().enumerate() {
            weight[v as usize] = w as u32;
        }
        drop(order);
        let tree = ClassTree::from_parents(&parents)?;
        drop(parents);
        let anc = AncestorIndex::build(&tree, &weight, variant)?;
        Ok(Self { node_off, time_off, parent, item, amax, by_height, times, tails, anc })
    }

    pub fn get(&self, s: usize) -> StackRef<'_> {
        StackRef { pool: self, s }
    }

    /// Version-tree nodes over all stacks.
    pub fn vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn nodes(&self) -> usize {
        self.anc.nodes() + self.parent.len() + self.by_height.len()
    }

    pub fn bytes(&self) -> usize {
        self.anc.bytes()
            + (self.node_off.len() + self.time_off.len()) * 4
            + (self.parent.len() + self.item.len() + self.amax.len() + self.by_height.len()) * 4
            + (self.times.len() + self.tails.len()) * 4
    }

    /// Shortest rectangle on stack `s` at `tail` whose y-interval holds `y`.
    pub fn min_cover(&self, s: usize, tail: u32, y: u32, rects: &[Rect], c: &mut Counters) -> Option<u32> {
        let st = self.get(s);
        let r = partition_point(st.by_height(), c, |&k| {
            let rc = &rects[self.item[st.node(k)] as usize];
            !(rc.y_lo <= y && y <= rc.y_hi)
        });
        self.min_from(s, tail, r, c)
    }

    /// Shortest rectangle on stack `s` at `tail` with height rank `>= r`.
    pub fn min_from(&self, s: usize, tail: u32, r: usize, c: &mut Counters) -> Option<u32> {
        let st = self.get(s);
        let bh = st.by_height();
        if r >= bh.len() {
            return None;
        }
        let x = self.anc.rank(1 + st.node(bh[r]));
        let v = self.anc.successor_rank(1 + st.node(tail), x, c)?;
        let j = v.checked_sub(1)?;
        (self.parent[j] != NONE).then(|| self.item[j])
    }
}

/// Local index of flat node `j` within its stack.
fn j_local(node_off: &[u32], j: usize) -> usize {
    let s = node_off.partition_point(|&o| o as usize <= j) - 1;
    j - node_off[s] as usize
}
