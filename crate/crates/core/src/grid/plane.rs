//! Constant-probe 2D dominance successor for polylog-size point sets.
//!
//! Points are sorted by `y` and cut into blocks of at most eight, each
//! encoded in one word. A block's representative is `(min x, block index)`;
//! the representatives form a smaller instance of the same structure. A
//! query probes the block holding `y`, then asks the representatives for
//! the first later block with a point left of `x`, then probes that block.

use super::word::{dominance_mask, SIDE};
use crate::counters::{partition_point, Counters};
use crate::error::{Error, Result};

const BLOCK: usize = SIDE as usize;

#[derive(Debug, Clone, Copy)]
struct Item {
    x: u32,
    y: u32,
    payload: u32,
}

/// One occupancy word over locally normalized coordinates.
#[derive(Debug, Clone)]
struct Base {
    xs: Vec<u32>,
    ys: Vec<u32>,
    word: u64,
    /// Payloads ordered by bit position; one per occupied cell.
    payloads: Vec<u32>,
}

impl Base {
    fn new(items: &[Item]) -> Self {
        debug_assert!(items.len() <= BLOCK);
        let mut xs: Vec<u32> = items.iter().map(|p| p.x).collect();
        let mut ys: Vec<u32> = items.iter().map(|p| p.y).collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        let mut cells: Vec<(u32, u32)> = items
            .iter()
            .map(|p| {
                let cx = xs.binary_search(&p.x).unwrap() as u32;
                let cy = ys.binary_search(&p.y).unwrap() as u32;
                (cy * SIDE + cx, p.payload)
            })
            .collect();
        // lowest payload wins a shared cell
        cells.sort_unstable();
        cells.dedup_by_key(|c| c.0);
        let word = cells.iter().fold(0u64, |w, c| w | 1u64 << c.0);
        Self { xs, ys, word, payloads: cells.into_iter().map(|c| c.1).collect() }
    }

    fn query(&self, x: u32, y: u32, c: &mut Counters) -> Option<u32> {
        c.probe();
        let cols = partition_point(&self.xs, c, |&v| v <= x) as u32;
        let skip = partition_point(&self.ys, c, |&v| v < y) as u32;
        if cols == 0 || skip as usize == self.ys.len() {
            return None;
        }
        let hit = self.word & dominance_mask(cols, skip + 1);
        (hit != 0).then(|| {
            let b = hit.trailing_zeros();
            let below = self.word & ((1u64 << b) - 1);
            self.payloads[below.count_ones() as usize]
        })
    }

    fn nodes(&self) -> usize {
        1 + self.payloads.len()
    }
}

#[derive(Debug, Clone)]
enum Node {
    Base(Base),
    Blocks {
        blocks: Vec<Base>,
        /// For each y rank `r`, the block holding the first item with `y >= r`.
        block_of_y: Vec<u32>,
        reps: Box<Node>,
    },
}

impl Node {
    /// `items` hold ranks: `x < ux`, `y < uy`.
    fn build(mut items: Vec<Item>, uy: u32) -> Node {
        if items.len() <= BLOCK {
            return Node::Base(Base::new(&items));
        }
        items.sort_unstable_by_key(|p| (p.y, p.x, p.payload));
        let blocks: Vec<Base> = items.chunks(BLOCK).map(Base::new).collect();
        let nb = blocks.len() as u32;
        let mut block_of_y = Vec::with_capacity(uy as usize + 1);
        let mut i = 0;
        for r in 0..=uy {
            while i < items.len() && items[i].y < r {
                i += 1;
            }
            block_of_y.push(if i < items.len() { (i / BLOCK) as u32 } else { nb });
        }
        let reps: Vec<Item> = items
            .chunks(BLOCK)
            .enumerate()
            .map(|(i, ch)| Item { x: ch.iter().map(|p| p.x).min().unwrap(), y: i as u32, payload: i as u32 })
            .collect();
        Node::Blocks { blocks, block_of_y, reps: Box::new(Node::build(reps, nb)) }
    }

    /// Payload of the item with `x <= qx`, `y >= qy` minimizing `(y, x, payload)`.
    fn query(&self, qx: u32, qy: u32, c: &mut Counters) -> Option<u32> {
        match self {
            Node::Base(b) => b.query(qx, qy, c),
            Node::Blocks { blocks, block_of_y, reps } => {
                let b = *block_of_y.get(qy as usize)? as usize;
                if b == blocks.len() {
                    return None;
                }
                if let Some(p) = blocks[b].query(qx, qy, c) {
                    return Some(p);
                }
                let i = reps.query(qx, b as u32 + 1, c)? as usize;
                blocks[i].query(qx, qy, c)
            }
        }
    }

    fn nodes(&self) -> usize {
        match self {
            Node::Base(b) => b.nodes(),
            Node::Blocks { blocks, block_of_y, reps } => {
                blocks.iter().map(Base::nodes).sum::<usize>() + block_of_y.len() + reps.nodes()
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Set {
    xs: Vec<u32>,
    ys: Vec<u32>,
    points: Vec<(u32, u32)>,
    root: Node,
}

/// Size limit for sets on an `n × n` grid: `max(2, ⌈log₂ n⌉)^2`.
pub fn grid2_limit(n: u32) -> usize {
    let l = crate::ceil_log2(n as u64).max(2) as usize;
    l * l
}

/// A collection of small point sets answering
/// `min { y' : (x', y') ∈ S(i), x' <= x, y' >= y }` with a constant number
/// of word probes. Ties go to smaller `x'`, then to the earlier point.
#[derive(Debug, Clone)]
pub struct Grid2Index {
    sets: Vec<Set>,
    nodes: usize,
}

impl Grid2Index {
    /// Coordinates must lie in `1..=n`.
    pub fn build(sets: &[Vec<(u32, u32)>], n: u32) -> Result<Self> {
        Self::build_with_limit(sets, n, grid2_limit(n))
    }

    pub(crate) fn build_with_limit(sets: &[Vec<(u32, u32)>], n: u32, limit: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        let mut nodes = 0;
        for (i, s) in sets.iter().enumerate() {
            if s.len() > limit {
                return Err(Error::OversizedSet { set: i, size: s.len(), limit });
            }
            if let Some(&(x, y)) = s.iter().find(|&&(x, y)| x == 0 || y == 0 || x > n || y > n) {
                return Err(Error::CoordinateOutOfRange(if x == 0 || x > n { x } else { y } as u64));
            }
            let set = Set::new(s);
            nodes += set.root.nodes() + set.xs.len() + set.ys.len() + 1;
            out.push(set);
        }
        Ok(Self { sets: out, nodes })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Index of the answering point within set `i`.
    pub fn query(&self, i: usize, x: u32, y: u32, c: &mut Counters) -> Option<usize> {
        self.sets[i].query(x, y, c)
    }

    pub fn point(&self, i: usize, id: usize) -> (u32, u32) {
        self.sets[i].points[id]
    }

    pub fn query_point(&self, i: usize, x: u32, y: u32) -> Option<(u32, u32)> {
        self.query(i, x, y, &mut Counters::new()).map(|id| self.point(i, id))
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

impl Set {
    fn new(points: &[(u32, u32)]) -> Self {
        let mut xs: Vec<u32> = points.iter().map(|p| p.0).collect();
        let mut ys: Vec<u32> = points.iter().map(|p| p.1).collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        let items = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Item {
                x: xs.binary_search(&x).unwrap() as u32,
                y: ys.binary_search(&y).unwrap() as u32,
                payload: i as u32,
            })
            .collect();
        let root = Node::build(items, ys.len() as u32);
        Self { xs, ys, points: points.to_vec(), root }
    }

    fn query(&self, x: u32, y: u32, c: &mut Counters) -> Option<usize> {
        let gx = partition_point(&self.xs, c, |&v| v <= x);
        let gy = partition_point(&self.ys, c, |&v| v < y);
        if gx == 0 || gy == self.ys.len() {
            return None;
        }
        self.root.query(gx as u32 - 1, gy as u32, c).map(|p| p as usize)
    }
}
