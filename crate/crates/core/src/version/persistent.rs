//! Path-copying search trees over a fixed sorted key universe.
//!
//! Every tree shares the same static shape, a balanced split of key
//! positions `0..k`; a version only materializes the paths to the keys it
//! holds. Each node carries, per decomposition depth, the smallest key rank
//! present below it, together with a mask of the depths that occur.

use super::decompose::NONE;
use crate::counters::Counters;

#[derive(Debug, Clone, Copy)]
struct Node {
    left: u32,
    right: u32,
    mask: u64,
    help: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct Forest {
    /// Rank of the key at each position, increasing.
    keys: Vec<u32>,
    nodes: Vec<Node>,
    helpers: Vec<u32>,
}

pub(crate) const EMPTY_TREE: u32 = NONE;

impl Forest {
    pub fn new(keys: Vec<u32>) -> Self {
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        Self { keys, nodes: Vec::new(), helpers: Vec::new() }
    }

    pub fn nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn bytes(&self) -> usize {
        self.nodes.len() * std::mem::size_of::<Node>() + self.helpers.len() * 4 + self.keys.len() * 4
    }

    /// New version of `root` with the key at `pos` present at depth `d`.
    /// `width` bounds the depths the version may hold.
    pub fn insert(&mut self, root: u32, pos: usize, d: u32, width: u32) -> u32 {
        debug_assert!(d < width && width <= 64);
        self.insert_in(root, 0, self.keys.len(), pos, d, width)
    }

    fn insert_in(&mut self, node: u32, lo: usize, hi: usize, pos: usize, d: u32, width: u32) -> u32 {
        if hi - lo == 1 {
            let help = self.helpers.len() as u32;
            self.helpers.resize(self.helpers.len() + d as usize + 1, NONE);
            self.helpers[(help + d) as usize] = self.keys[pos];
            return self.push(Node { left: NONE, right: NONE, mask: 1 << d, help });
        }
        let mid = lo + (hi - lo) / 2;
        let (mut l, mut r) = match node {
            NONE => (NONE, NONE),
            _ => (self.nodes[node as usize].left, self.nodes[node as usize].right),
        };
        if pos < mid {
            l = self.insert_in(l, lo, mid, pos, d, width);
        } else {
            r = self.insert_in(r, mid, hi, pos, d, width);
        }
        let help = self.helpers.len() as u32;
        self.helpers.resize(self.helpers.len() + width as usize, NONE);
        let mut mask = 0;
        for c in [l, r] {
            if c == NONE {
                continue;
            }
            let cn = self.nodes[c as usize];
            mask |= cn.mask;
            let mut bits = cn.mask;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                let v = self.helpers[(cn.help + b) as usize];
                let slot = &mut self.helpers[(help + b) as usize];
                *slot = (*slot).min(v);
            }
        }
        self.push(Node { left: l, right: r, mask, help })
    }

    fn push(&mut self, n: Node) -> u32 {
        self.nodes.push(n);
        (self.nodes.len() - 1) as u32
    }

    /// For each depth in `unknown`, the smallest key rank `>= x` stored in
    /// `root` at that depth, written into `out`. Returns the depths found.
    pub fn successors(&self, root: u32, x: u32, mut unknown: u64, out: &mut [u32], c: &mut Counters) -> u64 {
        let mut found = 0;
        let mut brothers = [NONE; 64];
        let mut nb = 0;
        let (mut lo, mut hi, mut node) = (0usize, self.keys.len(), root);
        while node != NONE && hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            c.cmp(1);
            c.step();
            let n = self.nodes[node as usize];
            if x <= self.keys[mid - 1] {
                if n.right != NONE {
                    brothers[nb] = n.right;
                    nb += 1;
                }
                node = n.left;
                hi = mid;
            } else {
                node = n.right;
                lo = mid;
            }
        }
        if node != NONE {
            c.cmp(1);
            if self.keys[lo] >= x {
                self.harvest(node, &mut unknown, &mut found, out);
            }
        }
        while nb > 0 && unknown != 0 {
            nb -= 1;
            self.harvest(brothers[nb], &mut unknown, &mut found, out);
        }
        found
    }

    fn harvest(&self, node: u32, unknown: &mut u64, found: &mut u64, out: &mut [u32]) {
        let n = self.nodes[node as usize];
        let mut hit = n.mask & *unknown;
        *unknown &= !hit;
        *found |= hit;
        while hit != 0 {
            let b = hit.trailing_zeros();
            hit &= hit - 1;
            out[b as usize] = self.helpers[(n.help + b) as usize];
        }
    }

    /// Depth mask and per-depth minima recomputed from the leaves below.
    pub fn recompute(&self, root: u32) -> (u64, Vec<u32>) {
        let mut mins = vec![NONE; 64];
        let mut mask = 0u64;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if v == NONE {
                continue;
            }
            let n = self.nodes[v as usize];
            if n.left == NONE && n.right == NONE {
                let d = n.mask.trailing_zeros();
                mask |= n.mask;
                mins[d as usize] = mins[d as usize].min(self.helpers[(n.help + d) as usize]);
            }
            stack.push(n.left);
            stack.push(n.right);
        }
        (mask, mins)
    }

    pub fn stored(&self, root: u32) -> (u64, Vec<u32>) {
        if root == NONE {
            return (0, vec![NONE; 64]);
        }
        let n = self.nodes[root as usize];
        let mut mins = vec![NONE; 64];
        for (d, m) in mins.iter_mut().enumerate() {
            if n.mask >> d & 1 == 1 {
                *m = self.helpers[n.help as usize + d];
            }
        }
        (n.mask, mins)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn versions_are_independent() {
        let mut f = Forest::new(vec![1, 4, 6, 9, 12]);
        let a = f.insert(EMPTY_TREE, 1, 0, 2);
        let b = f.insert(a, 3, 1, 2);
        let c = f.insert(a, 0, 1, 2);
        let mut out = vec![NONE; 2];
        let mut cn = Counters::new();
        assert_eq!(f.successors(a, 2, 0b11, &mut out, &mut cn), 0b01);
        assert_eq!(out, vec![4, NONE]);
        let mut out = vec![NONE; 2];
        assert_eq!(f.successors(b, 5, 0b11, &mut out, &mut cn), 0b10);
        assert_eq!(out[1], 9);
        let mut out = vec![NONE; 2];
        assert_eq!(f.successors(c, 0, 0b11, &mut out, &mut cn), 0b11);
        assert_eq!(out, vec![4, 1]);
        for v in [a, b, c] {
            assert_eq!(f.recompute(v), f.stored(v));
        }
    }
}
