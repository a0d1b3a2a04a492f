//! Complete `d`-ary trees over grid lines and fractional cascading along
//! their root-to-leaf paths.

use crate::counters::{partition_point, Counters};

/// A `d`-ary tree over leaves `0..g`, stored level by level with level 0
/// holding the leaves. Levels 2 and up are complete `d`-ary trees over the
/// level-1 nodes. A level-1 node has up to `d` leaf children; the first `k`
/// are the wide ones and any others have a single leaf. Single-leaf nodes
/// are transparent: they hold nothing, and paths pass through them for
/// free, which lets leaves sit at two depths.
#[derive(Debug, Clone)]
pub struct Shape {
    d: usize,
    g: usize,
    counts: Vec<usize>,
    offsets: Vec<usize>,
    /// `pow[l] = d^(l-1)` for `l >= 1`.
    pow: Vec<usize>,
    wide: usize,
    /// Leaves under the wide level-1 nodes.
    wide_leaves: usize,
}

impl Shape {
    /// Every level-1 node takes `d` leaves (the last may take fewer).
    pub fn new(g: usize, d: usize) -> Self {
        let c1 = g.div_ceil(d);
        Self::with_level1(g, d, c1, g)
    }

    /// Level 1 holds `d^h` nodes for the largest `d^h <= g`, as few of them
    /// wide as possible, so mean leaf depth grows smoothly with `g`.
    pub fn mixed(g: usize, d: usize) -> Self {
        if g <= 1 {
            return Self::new(g, d);
        }
        let mut t = 1usize;
        while t * d <= g {
            t *= d;
        }
        let wide = (g - t).div_ceil(d - 1);
        Self::with_level1(g, d, t, g - (t - wide))
    }

    fn with_level1(g: usize, d: usize, c1: usize, wide_leaves: usize) -> Self {
        assert!(d >= 2);
        let wide = wide_leaves.div_ceil(d);
        let mut counts = Vec::new();
        let mut pow = Vec::new();
        if g > 0 {
            counts.push(g);
            pow.push(0);
            if g > 1 {
                let (mut c, mut p) = (c1, 1usize);
                loop {
                    counts.push(c);
                    pow.push(p);
                    if c == 1 {
                        break;
                    }
                    c = c.div_ceil(d);
                    p = p.saturating_mul(d);
                }
            }
        }
        let mut offsets = Vec::with_capacity(counts.len());
        let mut acc = 0;
        for &c in &counts {
            offsets.push(acc);
            acc += c;
        }
        Self { d, g, counts, offsets, pow, wide, wide_leaves }
    }

    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn leaves(&self) -> usize {
        self.g
    }

    /// Number of levels; the root sits at `levels() - 1`.
    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.g == 0
    }

    pub fn node(&self, level: usize, i: usize) -> usize {
        self.offsets[level] + i
    }

    /// Level and in-level index of node id `v`.
    pub fn locate(&self, v: usize) -> (usize, usize) {
        let l = self.offsets.partition_point(|&o| o <= v) - 1;
        (l, v - self.offsets[l])
    }

    /// Leaves covered by node id `v`.
    pub fn segment_of(&self, v: usize) -> (usize, usize) {
        let (l, i) = self.locate(v);
        self.segment(l, i)
    }

    pub fn count(&self, level: usize) -> usize {
        self.counts[level]
    }

    fn level1_of(&self, y: usize) -> usize {
        if y < self.wide_leaves {
            y / self.d
        } else {
            self.wide + y - self.wide_leaves
        }
    }

    fn level1_segment(&self, i: usize) -> (usize, usize) {
        if i < self.wide {
            (i * self.d, ((i + 1) * self.d).min(self.wide_leaves) - 1)
        } else {
            let y = self.wide_leaves + i - self.wide;
            (y, y)
        }
    }

    /// Index within its level of the level-`level` ancestor of leaf `y`.
    pub fn ancestor(&self, level: usize, y: usize) -> usize {
        match level {
            0 => y,
            _ => self.level1_of(y) / self.pow[level],
        }
    }

    /// Leaves covered by node `(level, i)`.
    pub fn segment(&self, level: usize, i: usize) -> (usize, usize) {
        match level {
            0 => (i, i),
            _ => {
                let first = i * self.pow[level];
                let last = ((i + 1) * self.pow[level]).min(self.counts[1]) - 1;
                (self.level1_segment(first).0, self.level1_segment(last).1)
            }
        }
    }

    /// Level of the lowest common ancestor of leaves `a` and `b`.
    pub fn lca_level(&self, a: usize, b: usize) -> usize {
        (0..self.levels()).find(|&l| self.ancestor(l, a) == self.ancestor(l, b)).expect("root covers all leaves")
    }

    pub fn children(&self, level: usize, i: usize) -> std::ops::Range<usize> {
        match level {
            1 => {
                let (lo, hi) = self.level1_segment(i);
                lo..hi + 1
            }
            _ => {
                let lo = i * self.d;
                lo..(lo + self.d).min(self.counts[level - 1])
            }
        }
    }

    /// Position of the level-`level - 1` ancestor of leaf `y` among its
    /// siblings.
    pub fn child_pos(&self, level: usize, y: usize) -> usize {
        self.ancestor(level - 1, y) - self.children(level, self.ancestor(level, y)).start
    }

    /// A node with exactly one child.
    pub fn is_unary(&self, level: usize, i: usize) -> bool {
        level > 0 && self.children(level, i).len() == 1
    }
}

/// Per-node sorted key lists augmented with every other entry of each
/// child's catalog, so that the predecessor of a key at a node determines
/// the predecessor at any child within a couple of comparisons.
#[derive(Debug, Clone)]
pub struct Cascade {
    shape: Shape,
    off: Vec<usize>,
    keys: Vec<u32>,
    /// Own keys `<=` the entry's key.
    own: Vec<u32>,
    down_off: Vec<usize>,
    /// Per entry and child: index of the child's last entry `<=` this key.
    down: Vec<u32>,
    rank: Option<RankIndex>,
}

/// Constant-time predecessor over a catalog: one bit per distinct key,
/// with per-word prefix counts.
#[derive(Debug, Clone)]
pub(crate) struct RankIndex {
    words: Vec<u64>,
    before: Vec<u32>,
    /// Last catalog index of each distinct key, in key order.
    last: Vec<u32>,
}

impl RankIndex {
    /// `cat` is sorted with a sentinel at index 0.
    pub(crate) fn new(cat: &[u32]) -> Self {
        let top = cat.last().copied().unwrap_or(0) as usize;
        let mut words = vec![0u64; top / 64 + 1];
        let mut last = Vec::new();
        for (e, &k) in cat.iter().enumerate().skip(1) {
            if words[k as usize / 64] >> (k % 64) & 1 == 1 {
                *last.last_mut().unwrap() = e as u32;
            } else {
                words[k as usize / 64] |= 1 << (k % 64);
                last.push(e as u32);
            }
        }
        let mut before = Vec::with_capacity(words.len());
        let mut acc = 0;
        for w in &words {
            before.push(acc);
            acc += w.count_ones();
        }
        Self { words, before, last }
    }

    /// Index of the last catalog entry `<= x` (0 is the sentinel).
    pub(crate) fn pred(&self, x: u32) -> usize {
        let w = x as usize / 64;
        let r = if w >= self.words.len() {
            self.last.len()
        } else {
            let mask = u64::MAX >> (63 - x % 64);
            (self.before[w] + (self.words[w] & mask).count_ones()) as usize
        };
        match r {
            0 => 0,
            r => self.last[r - 1] as usize,
        }
    }

    pub(crate) fn bytes(&self) -> usize {
        self.words.len() * 8 + (self.before.len() + self.last.len()) * 4
    }
}

impl Cascade {
    /// `own[node]` lists each node's keys in increasing order.
    pub fn build(shape: &Shape, own: &[Vec<u32>]) -> Self {
        Self::build_inner(shape, own, false)
    }

    /// Like [`Cascade::build`], but the root search uses a rank bitvector
    /// over the key universe instead of a binary search.
    pub fn build_with_root_rank(shape: &Shape, own: &[Vec<u32>]) -> Self {
        Self::build_inner(shape, own, true)
    }

    fn build_inner(shape: &Shape, own: &[Vec<u32>], root_rank: bool) -> Self {
        let n = shape.len();
        let d = shape.arity();
        let mut cats: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut owns: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut downs: Vec<Vec<u32>> = vec![Vec::new(); n];
        for level in 0..shape.levels() {
            for i in 0..shape.count(level) {
                let v = shape.node(level, i);
                if shape.is_unary(level, i) {
                    assert!(own[v].is_empty(), "single-child nodes hold no keys");
                    cats[v] = cats[shape.node(level - 1, shape.children(level, i).start)].clone();
                    continue;
                }
                let mut cat = own[v].clone();
                if level > 0 {
                    for c in shape.children(level, i) {
                        let ch = &cats[shape.node(level - 1, c)];
                        cat.extend(ch.iter().skip(1).step_by(2));
                    }
                    cat.sort_unstable();
                }
                cat.insert(0, 0);
                let mut ow = Vec::with_capacity(cat.len());
                let mut j = 0;
                for (e, &k) in cat.iter().enumerate() {
                    while j < own[v].len() && own[v][j] <= k && e > 0 {
                        j += 1;
                    }
                    ow.push(j as u32);
                }
                if level > 0 {
                    let kids: Vec<usize> = shape.children(level, i).map(|c| shape.node(level - 1, c)).collect();
                    let mut dn = vec![0u32; cat.len() * d];
                    for (ci, &c) in kids.iter().enumerate() {
                        let ch = &cats[c];
                        let mut q = 0usize;
                        for (e, &k) in cat.iter().enumerate().skip(1) {
                            while q + 1 < ch.len() && ch[q + 1] <= k {
                                q += 1;
                            }
                            dn[e * d + ci] = q as u32;
                        }
                    }
                    downs[v] = dn;
                }
                cats[v] = cat;
                owns[v] = ow;
            }
        }
        let rank = match (root_rank, shape.levels()) {
            (true, l) if l > 0 => Some(RankIndex::new(&cats[shape.node(l - 1, 0)])),
            _ => None,
        };
        // single-child nodes share their child's catalog and store nothing
        let mut off = Vec::with_capacity(n + 1);
        let mut down_off = Vec::with_capacity(n + 1);
        let (mut keys, mut own_flat, mut down) = (Vec::new(), Vec::new(), Vec::new());
        for level in 0..shape.levels() {
            for i in 0..shape.count(level) {
                let v = shape.node(level, i);
                off.push(keys.len());
                down_off.push(down.len());
                if !shape.is_unary(level, i) {
                    keys.extend_from_slice(&cats[v]);
                    own_flat.extend_from_slice(&owns[v]);
                    down.extend_from_slice(&downs[v]);
                }
            }
        }
        off.push(keys.len());
        down_off.push(down.len());
        Self { shape: shape.clone(), off, keys, own: own_flat, down_off, down, rank }
    }

    pub fn entries(&self) -> usize {
        self.keys.len()
    }

    pub fn bytes(&self) -> usize {
        (self.keys.len() + self.own.len() + self.down.len()) * 4 + (self.off.len() + self.down_off.len()) * 8
            + self.rank.as_ref().map_or(0, RankIndex::bytes)
    }

    /// For every level, the number of own keys `<= x` at the ancestor of
    /// leaf `y` on that level.
    pub fn path_slots(&self, y: usize, x: u32, out: &mut Vec<u32>, c: &mut Counters) {
        let s = &self.shape;
        let levels = s.levels();
        out.clear();
        out.resize(levels, 0);
        if levels == 0 {
            return;
        }
        let d = s.arity();
        let mut level = levels - 1;
        let mut v = s.node(level, 0);
        let cat = &self.keys[self.off[v]..self.off[v + 1]];
        let mut p = match &self.rank {
            Some(r) => {
                c.probe();
                r.pred(x)
            }
            None => partition_point(&cat[1..], c, |&k| k <= x),
        };
        loop {
            out[level] = self.own[self.off[v] + p];
            if level == 0 {
                break;
            }
            let ci = s.child_pos(level, y);
            let base = self.down_off[v];
            let mut q = self.down[base + p * d + ci] as usize;
            // child keys between two parent keys are never sampled, so the
            // next parent key's pointer bounds the walk
            let bound = match self.down.get(base + (p + 1) * d + ci) {
                Some(&b) if base + (p + 1) * d + ci < self.down_off[v + 1] => b as usize,
                _ => usize::MAX,
            };
            level -= 1;
            while level > 0 && s.is_unary(level, s.ancestor(level, y)) {
                level -= 1;
            }
            v = s.node(level, s.ancestor(level, y));
            c.step();
            let cat = &self.keys[self.off[v]..self.off[v + 1]];
            while q + 1 < cat.len() && q < bound {
                c.cmp(1);
                if cat[q + 1] > x {
                    break;
                }
                q += 1;
            }
            p = q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn shape_basics() {
        let s = Shape::new(16, 4);
        assert_eq!(s.levels(), 3);
        assert_eq!(s.lca_level(0, 3), 1);
        assert_eq!(s.lca_level(3, 4), 2);
        assert_eq!(s.segment(1, 2), (8, 11));
        let s = Shape::new(5, 2);
        assert_eq!((s.levels(), s.len()), (4, 5 + 3 + 2 + 1));
        assert_eq!(s.segment(2, 1), (4, 4));
        assert_eq!(Shape::new(1, 3).levels(), 1);
        assert!(Shape::new(0, 2).is_empty());
    }

    #[test]
    fn mixed_shape_partitions_leaves() {
        for d in 2..=8 {
            for g in 1..300 {
                let s = Shape::mixed(g, d);
                let top = s.levels() - 1;
                assert_eq!(s.segment(top, 0), (0, g - 1));
                for level in 1..s.levels() {
                    let mut next = 0;
                    for i in 0..s.count(level) {
                        let (lo, hi) = s.segment(level, i);
                        assert_eq!(lo, next);
                        next = hi + 1;
                        let kids = s.children(level, i);
                        assert!(!kids.is_empty() && kids.len() <= d);
                        assert_eq!(s.segment(level - 1, kids.start).0, lo);
                        assert_eq!(s.segment(level - 1, kids.end - 1).1, hi);
                    }
                    assert_eq!(next, g);
                }
                for y in 0..g {
                    for level in 0..s.levels() {
                        let (lo, hi) = s.segment(level, s.ancestor(level, y));
                        assert!(lo <= y && y <= hi);
                    }
                }
            }
        }
        let s = Shape::mixed(5, 2);
        assert_eq!(s.children(1, 0), 0..2);
        assert!(s.is_unary(1, 1));
    }

    #[test]
    fn slots_match_independent_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (d, mixed) in (2..6).flat_map(|d| [(d, false), (d, true)]) {
            for _ in 0..20 {
                let g = rng.gen_range(1..60);
                let shape = if mixed { Shape::mixed(g, d) } else { Shape::new(g, d) };
                let own: Vec<Vec<u32>> = (0..shape.len())
                    .enumerate()
                    .map(|(v, _)| v)
                    .map(|v| {
                        let level = (0..shape.levels()).rev().find(|&l| shape.node(l, 0) <= v).unwrap();
                        if shape.is_unary(level, v - shape.node(level, 0)) {
                            return Vec::new();
                        }
                        let mut v: Vec<u32> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..40)).collect();
                        v.sort_unstable();
                        v.dedup();
                        v
                    })
                    .collect();
                for cas in [Cascade::build(&shape, &own), Cascade::build_with_root_rank(&shape, &own)] {
                    assert!(cas.entries() <= 3 * own.iter().map(Vec::len).sum::<usize>() + 2 * shape.len());
                    let mut out = Vec::new();
                    for y in 0..g {
                        for x in 0..42 {
                            cas.path_slots(y, x, &mut out, &mut Counters::new());
                            for (level, &slot) in out.iter().enumerate() {
                                let v = shape.node(level, shape.ancestor(level, y));
                                assert_eq!(slot as usize, own[v].partition_point(|&k| k <= x));
                            }
                        }
                    }
                }
            }
        }
    }
}
