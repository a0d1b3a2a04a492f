//! Constant-probe 3D dominance successor for polylog-size point sets:
//! `min { z' : x' <= x, y' <= y, z' >= z }`.
//!
//! Points are laid out in `(z, y, x)` order and cut into leaves of eight.
//! A leaf keeps its `x` and `y` ranks in two lane-packed words, so one probe
//! tests all eight points. Eight consecutive units form a parent unit, whose
//! representatives are the staircases of its children: a table indexed by
//! the local rank of `x` whose lanes hold, per child, the smallest `y` rank
//! among the child's points left of `x`. A query probes its starting leaf,
//! climbs until some later sibling has a dominated point, and descends into
//! the first such sibling. The hierarchy has at most five levels for the
//! supported set sizes, so a query costs at most nine probes.

use super::word::{lanes_le, pack_lanes};
use crate::counters::{partition_point, Counters};
use crate::error::{Error, Result};

const FANOUT: usize = 8;
const EMPTY: u32 = 0x7FFF;
/// Largest set whose ranks fit the 15-bit lanes.
pub const MAX_SET: usize = EMPTY as usize;

/// Size limit for sets on an `n × n × n` grid: `max(2, ⌈log₂ n⌉)^3`, capped
/// by the lane width.
pub fn grid3_limit(n: u32) -> usize {
    let l = crate::ceil_log2(n as u64).max(2) as usize;
    (l * l * l).min(MAX_SET)
}

#[derive(Debug, Clone, Default)]
struct Level {
    xs_off: Vec<u32>,
    xs: Vec<u32>,
    tab_off: Vec<u32>,
    tab: Vec<u128>,
}

#[derive(Debug, Clone)]
struct Set {
    xs: Vec<u32>,
    ys: Vec<u32>,
    /// Raw `z` per position, ascending.
    zs: Vec<u32>,
    /// Original index per position.
    ids: Vec<u32>,
    points: Vec<(u32, u32, u32)>,
    leaves: Vec<(u128, u128)>,
    levels: Vec<Level>,
}

impl Set {
    fn new(points: &[(u32, u32, u32)]) -> Self {
        let mut xs: Vec<u32> = points.iter().map(|p| p.0).collect();
        let mut ys: Vec<u32> = points.iter().map(|p| p.1).collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        order.sort_unstable_by_key(|&i| {
            let p = points[i as usize];
            (p.2, p.1, p.0, i)
        });
        let ranks: Vec<(u32, u32)> = order
            .iter()
            .map(|&i| {
                let p = points[i as usize];
                (xs.binary_search(&p.0).unwrap() as u32, ys.binary_search(&p.1).unwrap() as u32)
            })
            .collect();
        let leaves = ranks
            .chunks(FANOUT)
            .map(|ch| (pack_lanes(ch.iter().map(|r| r.0), EMPTY), pack_lanes(ch.iter().map(|r| r.1), EMPTY)))
            .collect::<Vec<_>>();

        let mut levels = Vec::new();
        // points per unit at the child level
        let mut child_span = FANOUT;
        let mut units = leaves.len();
        while units > 1 {
            let span = child_span * FANOUT;
            let mut lv = Level::default();
            for chunk in ranks.chunks(span) {
                let mut pts: Vec<(u32, u32, usize)> =
                    chunk.iter().enumerate().map(|(k, r)| (r.0, r.1, k / child_span)).collect();
                pts.sort_unstable();
                lv.xs_off.push(lv.xs.len() as u32);
                lv.tab_off.push(lv.tab.len() as u32);
                let mut mins = [EMPTY; FANOUT];
                lv.tab.push(pack_lanes(mins, EMPTY));
                let mut i = 0;
                while i < pts.len() {
                    let x = pts[i].0;
                    while i < pts.len() && pts[i].0 == x {
                        mins[pts[i].2] = mins[pts[i].2].min(pts[i].1);
                        i += 1;
                    }
                    lv.xs.push(x);
                    lv.tab.push(pack_lanes(mins, EMPTY));
                }
            }
            lv.xs_off.push(lv.xs.len() as u32);
            lv.tab_off.push(lv.tab.len() as u32);
            units = lv.xs_off.len() - 1;
            levels.push(lv);
            child_span = span;
        }
        Self {
            xs,
            ys,
            zs: order.iter().map(|&i| points[i as usize].2).collect(),
            ids: order,
            points: points.to_vec(),
            leaves,
            levels,
        }
    }

    fn nodes(&self) -> usize {
        self.xs.len()
            + self.ys.len()
            + self.zs.len()
            + self.leaves.len()
            + self.levels.iter().map(|l| l.xs.len() + l.tab.len() + l.xs_off.len()).sum::<usize>()
    }

    fn leaf_hits(&self, leaf: usize, gx: u32, gy: u32, c: &mut Counters) -> u32 {
        c.probe();
        let (xl, yl) = self.leaves[leaf];
        (lanes_le(xl, gx) & lanes_le(yl, gy)) as u32
    }

    fn unit_hits(&self, level: usize, unit: usize, gx: u32, gy: u32, c: &mut Counters) -> u32 {
        c.probe();
        let lv = &self.levels[level - 1];
        let xs = &lv.xs[lv.xs_off[unit] as usize..lv.xs_off[unit + 1] as usize];
        let t = partition_point(xs, c, |&v| v <= gx);
        lanes_le(lv.tab[lv.tab_off[unit] as usize + t], gy) as u32
    }

    fn query(&self, x: u32, y: u32, z: u32, c: &mut Counters) -> Option<usize> {
        let gx = partition_point(&self.xs, c, |&v| v <= x);
        let gy = partition_point(&self.ys, c, |&v| v <= y);
        let s = partition_point(&self.zs, c, |&v| v < z);
        if gx == 0 || gy == 0 || s == self.zs.len() {
            return None;
        }
        let (gx, gy) = (gx as u32 - 1, gy as u32 - 1);
        let leaf = s / FANOUT;
        let hits = self.leaf_hits(leaf, gx, gy, c) & (0xFF << (s % FANOUT));
        if hits != 0 {
            return Some(self.ids[leaf * FANOUT + hits.trailing_zeros() as usize] as usize);
        }
        let mut cur = leaf;
        for level in 1..=self.levels.len() {
            let (parent, child) = (cur / FANOUT, cur % FANOUT);
            let hits = self.unit_hits(level, parent, gx, gy, c) & (0xFF << (child + 1));
            if hits != 0 {
                let mut unit = parent * FANOUT + hits.trailing_zeros() as usize;
                for l in (1..level).rev() {
                    let h = self.unit_hits(l, unit, gx, gy, c);
                    debug_assert!(h != 0);
                    unit = unit * FANOUT + h.trailing_zeros() as usize;
                }
                let h = self.leaf_hits(unit, gx, gy, c);
                debug_assert!(h != 0);
                return Some(self.ids[unit * FANOUT + h.trailing_zeros() as usize] as usize);
            }
            cur = parent;
        }
        None
    }
}

/// Collection of small 3D point sets; ties on `z'` go to smaller `y'`,
/// then smaller `x'`, then the earlier point.
#[derive(Debug, Clone)]
pub struct Grid3Index {
    sets: Vec<Set>,
    nodes: usize,
}

impl Grid3Index {
    /// Coordinates must lie in `1..=n`.
    pub fn build(sets: &[Vec<(u32, u32, u32)>], n: u32) -> Result<Self> {
        Self::build_with_limit(sets, n, grid3_limit(n))
    }

    pub(crate) fn build_with_limit(sets: &[Vec<(u32, u32, u32)>], n: u32, limit: usize) -> Result<Self> {
        let limit = limit.min(MAX_SET);
        let mut out = Vec::with_capacity(sets.len());
        let mut nodes = 0;
        for (i, s) in sets.iter().enumerate() {
            if s.len() > limit {
                return Err(Error::OversizedSet { set: i, size: s.len(), limit });
            }
            for &(x, y, z) in s {
                for c in [x, y, z] {
                    if c == 0 || c > n {
                        return Err(Error::CoordinateOutOfRange(c as u64));
                    }
                }
            }
            let set = Set::new(s);
            nodes += set.nodes() + 1;
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
    pub fn query(&self, i: usize, x: u32, y: u32, z: u32, c: &mut Counters) -> Option<usize> {
        self.sets[i].query(x, y, z, c)
    }

    pub fn point(&self, i: usize, id: usize) -> (u32, u32, u32) {
        self.sets[i].points[id]
    }

    pub fn query_point(&self, i: usize, x: u32, y: u32, z: u32) -> Option<(u32, u32, u32)> {
        self.query(i, x, y, z, &mut Counters::new()).map(|id| self.point(i, id))
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(s: &[(u32, u32, u32)], x: u32, y: u32, z: u32) -> Option<usize> {
        s.iter()
            .enumerate()
            .filter(|(_, p)| p.0 <= x && p.1 <= y && p.2 >= z)
            .min_by_key(|(i, p)| (p.2, p.1, p.0, *i))
            .map(|(i, _)| i)
    }

    #[test]
    fn documented_examples() {
        let g = Grid3Index::build(&[vec![(1, 1, 1)], vec![(2, 2, 5), (3, 1, 4), (5, 5, 9)]], 16).unwrap();
        assert_eq!(g.query_point(0, 1, 1, 1), Some((1, 1, 1)));
        assert_eq!(g.query_point(1, 3, 2, 4), Some((3, 1, 4)));
        assert_eq!(g.query_point(0, 1, 1, 16), None);
    }

    #[test]
    fn matches_brute_force_with_bounded_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..200 {
            let n: u32 = if round % 4 == 0 { 1 << 14 } else { rng.gen_range(2..=64) };
            let k = rng.gen_range(0..=grid3_limit(n).min(3000));
            let side = rng.gen_range(1..=n);
            let s: Vec<_> = (0..k)
                .map(|_| (rng.gen_range(1..=side), rng.gen_range(1..=side), rng.gen_range(1..=side)))
                .collect();
            let g = Grid3Index::build(std::slice::from_ref(&s), n).unwrap();
            for _ in 0..300 {
                let q = (rng.gen_range(0..=side + 1), rng.gen_range(0..=side + 1), rng.gen_range(0..=side + 1));
                let mut c = Counters::new();
                assert_eq!(g.query(0, q.0, q.1, q.2, &mut c), brute(&s, q.0, q.1, q.2));
                assert!(c.probes <= 16);
            }
        }
    }
}
