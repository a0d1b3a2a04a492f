//! Heavy-path and thin-fragment decompositions of a rooted tree.

use crate::model::ClassTree;

pub(crate) const NONE: u32 = u32::MAX;

/// Vertex-disjoint connected pieces of a tree, arranged in their own tree.
#[derive(Debug, Clone)]
pub struct Units {
    pub unit_of: Vec<u32>,
    /// Highest vertex of each unit.
    pub top: Vec<u32>,
    pub parent: Vec<u32>,
    pub depth: Vec<u32>,
    pub members: Vec<Vec<u32>>,
}

impl Units {
    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Units on the chain from `v`'s unit to the root unit, each paired with
    /// its lowest vertex that is an ancestor of `v`.
    pub fn chain<'a>(&'a self, tree: &'a ClassTree, v: usize) -> impl Iterator<Item = (usize, usize)> + 'a {
        let mut cur = Some((self.unit_of[v] as usize, v));
        std::iter::from_fn(move || {
            let out = cur?;
            let top = self.top[out.0] as usize;
            cur = tree.parent(top).map(|h| (self.unit_of[h] as usize, h));
            Some(out)
        })
    }

    fn from_assignment(tree: &ClassTree, unit_of: Vec<u32>, top: Vec<u32>) -> Self {
        let k = top.len();
        let mut parent = vec![NONE; k];
        let mut depth = vec![0u32; k];
        let mut members = vec![Vec::new(); k];
        // preorder visits a unit's top before anything below it
        for p in 1..=tree.n() as u32 {
            let v = tree.vertex_at_pre(p);
            let u = unit_of[v] as usize;
            if top[u] as usize == v {
                if let Some(pv) = tree.parent(v) {
                    parent[u] = unit_of[pv];
                    depth[u] = depth[unit_of[pv] as usize] + 1;
                }
            }
            members[u].push(v as u32);
        }
        Self { unit_of, top, parent, depth, members }
    }
}

/// Every vertex keeps the edge to its largest child (smallest id on ties).
pub fn heavy_path_decompose(tree: &ClassTree) -> Units {
    let n = tree.n();
    let mut unit_of = vec![NONE; n];
    let mut top = Vec::new();
    for p in 1..=n as u32 {
        let v = tree.vertex_at_pre(p);
        if unit_of[v] == NONE {
            unit_of[v] = top.len() as u32;
            top.push(v as u32);
        }
        let heavy = tree.children(v).max_by_key(|&c| (tree.size(c), std::cmp::Reverse(c)));
        if let Some(h) = heavy {
            unit_of[h] = unit_of[v];
        }
    }
    Units::from_assignment(tree, unit_of, top)
}

/// Threshold parameter `max(2, ⌈log₂ n⌉)`.
pub fn fragment_log(n: usize) -> u64 {
    crate::ceil_log2(n as u64).max(2) as u64
}

/// Repeatedly peels the top fragment of each remaining subtree: the
/// vertices whose subtree holds at least a `1/⌈log₂ n⌉` share of the
/// current subtree.
pub fn thin_fragment_decompose(tree: &ClassTree) -> Units {
    let n = tree.n();
    let l = fragment_log(n);
    let mut unit_of = vec![NONE; n];
    let mut top = Vec::new();
    let mut pending = vec![tree.root()];
    let mut stack = Vec::new();
    while let Some(r) = pending.pop() {
        let id = top.len() as u32;
        top.push(r as u32);
        let s = tree.size(r) as u64;
        stack.push(r);
        while let Some(v) = stack.pop() {
            unit_of[v] = id;
            for c in tree.children(v) {
                if tree.size(c) as u64 * l >= s {
                    stack.push(c);
                } else {
                    pending.push(c);
                }
            }
        }
    }
    Units::from_assignment(tree, unit_of, top)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(parents: &[Option<usize>]) -> ClassTree {
        ClassTree::from_parents(parents).unwrap()
    }

    fn path(n: usize) -> ClassTree {
        tree(&(0..n).map(|i| i.checked_sub(1)).collect::<Vec<_>>())
    }

    #[test]
    fn heavy_on_path_and_binary() {
        let h = heavy_path_decompose(&path(10));
        assert_eq!((h.len(), h.max_depth()), (1, 0));
        let bin = tree(&(0..15).map(|i| if i == 0 { None } else { Some((i - 1) / 2) }).collect::<Vec<_>>());
        let h = heavy_path_decompose(&bin);
        assert_eq!((h.len(), h.max_depth()), (8, 3));
    }

    #[test]
    fn heavy_on_star() {
        let star = tree(&(0..9).map(|i| if i == 0 { None } else { Some(0) }).collect::<Vec<_>>());
        let h = heavy_path_decompose(&star);
        assert_eq!(h.unit_of[0], h.unit_of[1]);
        assert_eq!(h.len(), 8);
        assert!((2..9).all(|v| h.depth[h.unit_of[v] as usize] == 1));
    }

    #[test]
    fn thin_small_tree_is_one_fragment() {
        let t = path(2);
        assert_eq!(thin_fragment_decompose(&t).len(), 1);
    }

    #[test]
    fn thin_on_path_peels_prefix() {
        for n in [16usize, 100, 1000] {
            let f = thin_fragment_decompose(&path(n));
            let l = fragment_log(n) as usize;
            let first = f.members[0].len();
            // vertices with size * l >= n on a path: sizes n, n-1, ..., ⌈n/l⌉
            assert_eq!(first, n - n.div_ceil(l) + 1);
            // remaining fragments simulate the same rule on the suffix
            let mut rest = n - first;
            let mut expect = 1;
            while rest > 0 {
                let take = rest - rest.div_ceil(l) + 1;
                rest -= take;
                expect += 1;
            }
            assert_eq!(f.len(), expect);
        }
    }

    fn all_trees(n: usize, out: &mut Vec<Vec<Option<usize>>>, cur: &mut Vec<Option<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for p in 0..cur.len() {
            cur.push(Some(p));
            all_trees(n, out, cur);
            cur.pop();
        }
    }

    #[test]
    fn thin_bounds_exhaustive_small() {
        for n in 1..=9 {
            let mut trees = Vec::new();
            all_trees(n, &mut trees, &mut vec![None]);
            for ps in trees {
                let t = tree(&ps);
                let f = thin_fragment_decompose(&t);
                let l = fragment_log(n) as usize;
                let mut covered = 0;
                for (u, m) in f.members.iter().enumerate() {
                    covered += m.len();
                    let leaves = m
                        .iter()
                        .filter(|&&v| t.children(v as usize).all(|c| f.unit_of[c] as usize != u))
                        .count();
                    assert!(leaves <= l);
                }
                assert_eq!(covered, n);
                // each level shrinks the subtree by more than a factor l
                let bound = (n as f64).ln() / (l as f64).ln();
                assert!(f.max_depth() as f64 <= bound.ceil());
            }
        }
    }
}
