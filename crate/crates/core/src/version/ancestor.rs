//! Ancestor successor: the lightest ancestor-or-self of `v` whose weight is
//! at least a threshold.
//!
//! The tree is split into units (heavy paths or thin fragments). Inside a
//! unit, vertices are sorted by weight and cut into groups of `B`; the
//! heaviest vertex of each full group is *important*, and each full group
//! also nominates *representatives* (its topmost members). Persistent search
//! trees over important vertices and over representatives locate, for every
//! unit on the root path at once, the group that holds the answer; a small
//! dominance structure per group finishes the job.

use super::decompose::{heavy_path_decompose, thin_fragment_decompose, Units, NONE};
use super::persistent::{Forest, EMPTY_TREE};
use crate::counters::Counters;
use crate::grid::{Grid2Index, Grid3Index};
use crate::model::ClassTree;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Heavy,
    Thin,
}

#[derive(Debug, Clone)]
enum Micro {
    Heavy(Grid2Index),
    Thin(Grid3Index),
}

#[derive(Debug, Clone)]
pub struct AncestorIndex {
    variant: Variant,
    tree: ClassTree,
    units: Units,
    /// Weight rank of every vertex and its inverse.
    rank: Vec<u32>,
    by_rank: Vec<u32>,
    group_size: usize,
    /// Per group: its members, in the order given to the micro structure.
    group_members: Vec<Vec<u32>>,
    group_of: Vec<u32>,
    trailing: Vec<u32>,
    micro: Micro,
    imp: Forest,
    imp_pos: Vec<u32>,
    unit_version: Vec<u32>,
    reps: Forest,
    /// Version holding the representatives on the root path of each vertex.
    rep_version: Vec<u32>,
    nodes: usize,
}

/// Default group size: `⌈log₂ n⌉²` for heavy paths, `⌈log₂ n⌉³` for thin
/// fragments, at least 2.
pub fn default_group_size(variant: Variant, n: usize) -> usize {
    let l = crate::ceil_log2(n as u64) as usize;
    let b = match variant {
        Variant::Heavy => l * l,
        Variant::Thin => (l * l * l).min(crate::grid::grid3_limit(u32::MAX)),
    };
    b.max(2)
}

impl AncestorIndex {
    /// `weights` must be pairwise distinct; only their order matters.
    pub fn build(tree: &ClassTree, weights: &[u32], variant: Variant) -> Result<Self> {
        Self::build_with_group_size(tree, weights, variant, default_group_size(variant, tree.n()))
    }

    pub fn build_with_group_size(tree: &ClassTree, weights: &[u32], variant: Variant, group_size: usize) -> Result<Self> {
        let n = tree.n();
        assert_eq!(weights.len(), n);
        let b = group_size.max(2);
        let units = match variant {
            Variant::Heavy => heavy_path_decompose(tree),
            Variant::Thin => thin_fragment_decompose(tree),
        };
        let mut by_rank: Vec<u32> = (0..n as u32).collect();
        by_rank.sort_unstable_by_key(|&v| (weights[v as usize], v));
        let mut rank = vec![0u32; n];
        for (r, &v) in by_rank.iter().enumerate() {
            rank[v as usize] = r as u32;
        }

        let mut sorted: Vec<Vec<u32>> = vec![Vec::new(); units.len()];
        for &v in &by_rank {
            sorted[units.unit_of[v as usize] as usize].push(v);
        }
        let mut group_members = Vec::new();
        let mut group_of = vec![NONE; n];
        let mut trailing = vec![NONE; units.len()];
        let mut important = vec![false; n];
        let mut is_rep = vec![false; n];
        for (u, list) in sorted.iter().enumerate() {
            for chunk in list.chunks(b) {
                let g = group_members.len() as u32;
                for &v in chunk {
                    group_of[v as usize] = g;
                }
                if chunk.len() == b {
                    important[*chunk.last().unwrap() as usize] = true;
                    for r in topmost(tree, chunk) {
                        is_rep[r as usize] = true;
                    }
                } else {
                    trailing[u] = g;
                }
                group_members.push(chunk.to_vec());
            }
        }

        let nn = n as u32;
        let micro = match variant {
            Variant::Heavy => {
                let sets: Vec<Vec<(u32, u32)>> = group_members
                    .iter()
                    .map(|g| g.iter().map(|&v| (tree.depth(v as usize) + 1, rank[v as usize] + 1)).collect())
                    .collect();
                Micro::Heavy(Grid2Index::build_with_limit(&sets, nn, b)?)
            }
            Variant::Thin => {
                let sets: Vec<Vec<(u32, u32, u32)>> = group_members
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|&v| {
                                let v = v as usize;
                                (tree.pre(v), nn + 1 - tree.post(v), rank[v] + 1)
                            })
                            .collect()
                    })
                    .collect();
                Micro::Thin(Grid3Index::build_with_limit(&sets, nn, b)?)
            }
        };

        let (mut imp, imp_pos) = keyed_forest(&by_rank, &important);
        let (mut reps, rep_pos) = keyed_forest(&by_rank, &is_rep);

        // units are numbered so that parents precede children
        let mut unit_version = vec![EMPTY_TREE; units.len()];
        for u in 0..units.len() {
            let mut ver = match units.parent[u] {
                NONE => EMPTY_TREE,
                p => unit_version[p as usize],
            };
            let d = units.depth[u];
            for &v in &units.members[u] {
                if important[v as usize] {
                    ver = imp.insert(ver, imp_pos[v as usize] as usize, d, d + 1);
                }
            }
            unit_version[u] = ver;
        }
        let mut rep_version = vec![EMPTY_TREE; n];
        for p in 1..=nn {
            let v = tree.vertex_at_pre(p);
            let mut ver = tree.parent(v).map_or(EMPTY_TREE, |q| rep_version[q]);
            if is_rep[v] {
                let d = units.depth[units.unit_of[v] as usize];
                ver = reps.insert(ver, rep_pos[v] as usize, d, d + 1);
            }
            rep_version[v] = ver;
        }

        let micro_nodes = match &micro {
            Micro::Heavy(g) => g.nodes(),
            Micro::Thin(g) => g.nodes(),
        };
        let nodes = imp.nodes() + reps.nodes() + micro_nodes + units.len();
        Ok(Self {
            variant,
            tree: tree.clone(),
            units,
            rank,
            by_rank,
            group_size: b,
            group_members,
            group_of,
            trailing,
            micro,
            imp,
            imp_pos,
            unit_version,
            reps,
            rep_version,
            nodes,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn rank(&self, v: usize) -> u32 {
        self.rank[v]
    }

    pub fn vertex_of_rank(&self, r: u32) -> usize {
        self.by_rank[r as usize] as usize
    }

    /// Structural node count: persistent-tree nodes, micro-structure nodes
    /// and units.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn search_tree_nodes(&self) -> usize {
        self.imp.nodes() + self.reps.nodes()
    }

    pub fn important_count(&self) -> usize {
        self.imp_pos.iter().filter(|&&p| p != NONE).count()
    }

    pub fn bytes(&self) -> usize {
        self.imp.bytes() + self.reps.bytes() + self.rank.len() * 24
    }

    /// Lightest ancestor-or-self of `v` whose weight rank is `>= x`.
    pub fn successor_rank(&self, v: usize, x: u32, c: &mut Counters) -> Option<usize> {
        if x as usize >= self.rank.len() {
            return None;
        }
        let top = self.units.depth[self.units.unit_of[v] as usize] as usize;
        let unknown = if top >= 63 { u64::MAX } else { (1u64 << (top + 1)) - 1 };
        let mut imp_succ = [NONE; 64];
        let mut rep_succ = [NONE; 64];
        let uv = self.unit_version[self.units.unit_of[v] as usize];
        let found_imp = self.imp.successors(uv, x, unknown, &mut imp_succ, c);
        let found_rep = self.reps.successors(self.rep_version[v], x, unknown, &mut rep_succ, c);

        let mut best = NONE;
        for (u, h) in self.units.chain(&self.tree, v) {
            c.step();
            let d = self.units.depth[u] as usize;
            let first = if found_imp >> d & 1 == 1 {
                self.group_of[self.by_rank[imp_succ[d] as usize] as usize]
            } else {
                self.trailing[u]
            };
            let mut r = self.ask(first, h, x, c);
            if r == NONE {
                if found_rep >> d & 1 == 1 {
                    r = self.ask(self.group_of[self.by_rank[rep_succ[d] as usize] as usize], h, x, c);
                }
                if r == NONE && first != self.trailing[u] {
                    r = self.ask(self.trailing[u], h, x, c);
                }
            }
            c.cmp(1);
            best = best.min(r);
        }
        (best != NONE).then(|| self.by_rank[best as usize] as usize)
    }

    pub fn successor(&self, v: usize, x_rank: u32) -> Option<usize> {
        self.successor_rank(v, x_rank, &mut Counters::new())
    }

    /// Smallest rank in group `g` among ancestors-or-self of `h` that is `>= x`.
    fn ask(&self, g: u32, h: usize, x: u32, c: &mut Counters) -> u32 {
        if g == NONE {
            return NONE;
        }
        let g = g as usize;
        let id = match &self.micro {
            Micro::Heavy(grid) => grid.query(g, self.tree.depth(h) + 1, x + 1, c),
            Micro::Thin(grid) => {
                let n = self.tree.n() as u32;
                grid.query(g, self.tree.pre(h), n + 1 - self.tree.post(h), x + 1, c)
            }
        };
        id.map_or(NONE, |i| self.rank[self.group_members[g][i] as usize])
    }

    /// Checks every version root's depth mask and minima against a fresh
    /// scan of its leaves.
    pub fn helpers_consistent(&self) -> bool {
        let imp_ok = self.unit_version.iter().all(|&r| r == EMPTY_TREE || self.imp.recompute(r) == self.imp.stored(r));
        let rep_ok = self.rep_version.iter().all(|&r| r == EMPTY_TREE || self.reps.recompute(r) == self.reps.stored(r));
        imp_ok && rep_ok
    }
}

/// Members of `group` with no proper ancestor inside the group.
fn topmost(tree: &ClassTree, group: &[u32]) -> Vec<u32> {
    let mut by_pre = group.to_vec();
    by_pre.sort_unstable_by_key(|&v| tree.pre(v as usize));
    let mut out: Vec<u32> = Vec::new();
    for v in by_pre {
        match out.last() {
            Some(&t) if tree.is_ancestor(t as usize, v as usize) => {}
            _ => out.push(v),
        }
    }
    out
}

fn keyed_forest(by_rank: &[u32], member: &[bool]) -> (Forest, Vec<u32>) {
    let mut pos = vec![NONE; member.len()];
    let mut keys = Vec::new();
    for (r, &v) in by_rank.iter().enumerate() {
        if member[v as usize] {
            pos[v as usize] = keys.len() as u32;
            keys.push(r as u32);
        }
    }
    (Forest::new(keys), pos)
}
