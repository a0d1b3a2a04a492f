//! Class hierarchy, bridges and the reduction to laminar rectangle stabbing.

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Rooted tree with DFS numbering. Vertices are `0..n`; `pre` and `post`
/// numbers run over `1..=n`. Children are visited in increasing id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTree {
    root: u32,
    parent: Vec<u32>,
    child_start: Vec<u32>,
    child_list: Vec<u32>,
    pre: Vec<u32>,
    post: Vec<u32>,
    size: Vec<u32>,
    depth: Vec<u32>,
    by_pre: Vec<u32>,
}

impl ClassTree {
    /// Builds a tree from parent links; the root has `None`.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        let mut root = None;
        let mut parent = vec![NONE; n];
        for (v, p) in parents.iter().enumerate() {
            match *p {
                None => match root {
                    None => root = Some(v),
                    Some(r) => return Err(Error::MultipleRoots(r, v)),
                },
                Some(p) if p >= n => return Err(Error::ParentOutOfRange { vertex: v, parent: p }),
                Some(p) if p == v => return Err(Error::Cycle(v)),
                Some(p) => parent[v] = p as u32,
            }
        }
        let root = root.ok_or(Error::NoRoot)? as u32;

        // children in CSR form, ordered by id
        let mut child_start = vec![0u32; n + 1];
        for &p in &parent {
            if p != NONE {
                child_start[p as usize + 1] += 1;
            }
        }
        for i in 0..n {
            child_start[i + 1] += child_start[i];
        }
        let mut fill = child_start.clone();
        let mut child_list = vec![0u32; n.saturating_sub(1)];
        for (v, &p) in parent.iter().enumerate() {
            if p != NONE {
                child_list[fill[p as usize] as usize] = v as u32;
                fill[p as usize] += 1;
            }
        }

        let mut pre = vec![0u32; n];
        let mut post = vec![0u32; n];
        let mut size = vec![1u32; n];
        let mut depth = vec![0u32; n];
        let mut by_pre = Vec::with_capacity(n);
        let (mut next_pre, mut next_post) = (1u32, 1u32);
        // (vertex, next child cursor)
        let mut stack: Vec<(u32, u32)> = vec![(root, child_start[root as usize])];
        pre[root as usize] = next_pre;
        next_pre += 1;
        by_pre.push(root);
        while let Some(&mut (v, ref mut cur)) = stack.last_mut() {
            if *cur < child_start[v as usize + 1] {
                let c = child_list[*cur as usize];
                *cur += 1;
                pre[c as usize] = next_pre;
                next_pre += 1;
                by_pre.push(c);
                depth[c as usize] = depth[v as usize] + 1;
                stack.push((c, child_start[c as usize]));
            } else {
                stack.pop();
                post[v as usize] = next_post;
                next_post += 1;
                if parent[v as usize] != NONE {
                    size[parent[v as usize] as usize] += size[v as usize];
                }
            }
        }
        if by_pre.len() != n {
            let stray = (0..n).find(|&v| pre[v] == 0).unwrap_or(0);
            return Err(Error::Cycle(stray));
        }
        Ok(Self { root, parent, child_start, child_list, pre, post, size, depth, by_pre })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root as usize
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NONE).then_some(p as usize)
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = (self.child_start[v] as usize, self.child_start[v + 1] as usize);
        self.child_list[a..b].iter().map(|&c| c as usize)
    }

    pub fn pre(&self, v: usize) -> u32 {
        self.pre[v]
    }

    pub fn post(&self, v: usize) -> u32 {
        self.post[v]
    }

    pub fn size(&self, v: usize) -> u32 {
        self.size[v]
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    /// Vertex with the given preorder number (`1..=n`).
    pub fn vertex_at_pre(&self, p: u32) -> usize {
        self.by_pre[p as usize - 1] as usize
    }

    /// True when `a` is an ancestor of `b` or equal to it.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        self.pre[a] <= self.pre[b] && self.post[a] >= self.post[b]
    }

    /// Preorder numbers covered by the subtree of `v`, inclusive.
    pub fn subtree_interval(&self, v: usize) -> (u32, u32) {
        (self.pre[v], self.pre[v] + self.size[v] - 1)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub(crate) fn parent_links(&self) -> Vec<Option<usize>> {
        (0..self.n()).map(|v| self.parent(v)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bridge {
    pub u: u32,
    pub v: u32,
}

/// Bridges over a class tree; the bridge id is its index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BridgeSet {
    bridges: Vec<Bridge>,
}

impl BridgeSet {
    pub fn new(tree: &ClassTree, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(pairs.len());
        let mut bridges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            tree.check_vertex(u)?;
            tree.check_vertex(v)?;
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateBridge(u, v));
            }
            bridges.push(Bridge { u: u as u32, v: v as u32 });
        }
        Ok(Self { bridges })
    }

    pub fn len(&self) -> usize {
        self.bridges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bridges.is_empty()
    }

    pub fn get(&self, id: usize) -> Bridge {
        self.bridges[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Bridge)> + '_ {
        self.bridges.iter().copied().enumerate()
    }

    /// `a` is lower than or equal to `b`: both endpoints of `a` descend from those of `b`.
    pub fn lower_eq(tree: &ClassTree, a: Bridge, b: Bridge) -> bool {
        tree.is_ancestor(b.u as usize, a.u as usize) && tree.is_ancestor(b.v as usize, a.v as usize)
    }

    pub fn applies(tree: &ClassTree, b: Bridge, u: usize, v: usize) -> bool {
        tree.is_ancestor(b.u as usize, u) && tree.is_ancestor(b.v as usize, v)
    }
}

/// Hierarchy transformed so that no two bridges share a first endpoint and
/// no two share a second endpoint.
#[derive(Debug, Clone)]
pub struct SplitInstance {
    pub tree2: ClassTree,
    pub bridges2: BridgeSet,
    /// Original vertex to the deepest vertex of its replacement path.
    pub fwd: Vec<u32>,
    /// Transformed bridge id to original bridge id.
    pub back: Vec<u32>,
}

impl SplitInstance {
    pub fn map_query(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        let f = |x: usize| self.fwd.get(x).map(|&y| y as usize).ok_or(Error::UnknownVertex(x));
        Ok((f(u)?, f(v)?))
    }
}

/// Replaces every vertex shared by several bridge endpoints on the same side
/// with a path, one path vertex per bridge, ordered so that deeper opposite
/// endpoints hang from deeper path vertices.
pub fn split_shared_endpoints(tree: &ClassTree, bridges: &BridgeSet) -> SplitInstance {
    let mut parents = tree.parent_links();
    let mut ends: Vec<[u32; 2]> = bridges.bridges.iter().map(|b| [b.u, b.v]).collect();
    let mut fwd: Vec<u32> = (0..tree.n() as u32).collect();
    let mut current = tree.clone();

    for side in 0..2 {
        let other = 1 - side;
        let n_now = parents.len();
        let mut groups: Vec<Vec<u32>> = vec![Vec::new(); n_now];
        for (id, e) in ends.iter().enumerate() {
            groups[e[side] as usize].push(id as u32);
        }
        let mut redirect: Vec<u32> = (0..n_now as u32).collect();
        let mut changed = false;
        for (u, group) in groups.iter_mut().enumerate() {
            if group.len() < 2 {
                continue;
            }
            changed = true;
            group.sort_by_key(|&id| {
                let w = ends[id as usize][other] as usize;
                (current.depth(w), w)
            });
            // u itself stays on top; fresh vertices follow below it
            let mut prev = u;
            for &id in group.iter().skip(1) {
                let fresh = parents.len();
                parents.push(Some(prev));
                ends[id as usize][side] = fresh as u32;
                prev = fresh;
            }
            for c in current.children(u) {
                parents[c] = Some(prev);
            }
            redirect[u] = prev as u32;
        }
        if changed {
            for f in fwd.iter_mut() {
                *f = redirect[*f as usize];
            }
            current = ClassTree::from_parents(&parents).expect("splitting keeps a tree");
        }
    }
    let bridges2 = BridgeSet { bridges: ends.iter().map(|e| Bridge { u: e[0], v: e[1] }).collect() };
    let back = (0..bridges2.len() as u32).collect();
    SplitInstance { tree2: current, bridges2, fwd, back }
}

/// Axis-aligned rectangle with inclusive bounds, tagged with its bridge id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x_lo: u32,
    pub x_hi: u32,
    pub y_lo: u32,
    pub y_hi: u32,
    pub id: u32,
}

impl Rect {
    pub fn height(&self) -> u32 {
        self.y_hi - self.y_lo
    }

    pub fn width(&self) -> u32 {
        self.x_hi - self.x_lo
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.x_lo <= x && x <= self.x_hi && self.y_lo <= y && y <= self.y_hi
    }

    pub fn swapped(&self) -> Rect {
        Rect { x_lo: self.y_lo, x_hi: self.y_hi, y_lo: self.x_lo, y_hi: self.x_hi, id: self.id }
    }
}

/// Rectangles on a `grid × grid` board with coordinates in `0..grid`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RectSet {
    pub rects: Vec<Rect>,
    pub grid: u32,
}

impl RectSet {
    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }
}

/// Rectangle family of a split instance plus the coordinate compression
/// needed to map query vertices onto the grid.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub rects: RectSet,
    x_rank: Vec<u32>,
    y_rank: Vec<u32>,
}

/// Uncompressed rectangles: `[pre(u), pre(u)+size(u)-1] × [pre(v), pre(v)+size(v)-1]`.
pub fn raw_rects(tree: &ClassTree, bridges: &BridgeSet) -> Vec<Rect> {
    bridges
        .iter()
        .map(|(id, b)| {
            let (x_lo, x_hi) = tree.subtree_interval(b.u as usize);
            let (y_lo, y_hi) = tree.subtree_interval(b.v as usize);
            Rect { x_lo, x_hi, y_lo, y_hi, id: id as u32 }
        })
        .collect()
}

/// Rank table over `1..=n+1`: entry `p` is the number of keys `<= p`, minus one
/// (`u32::MAX` when no key is `<= p`).
fn rank_table(n: u32, used: &[bool]) -> (Vec<u32>, u32) {
    let mut table = vec![NONE; n as usize + 2];
    let mut count = 0u32;
    for p in 1..=n as usize + 1 {
        if used[p] {
            count += 1;
        }
        table[p] = count.wrapping_sub(1);
    }
    (table, count)
}

/// Maps each bridge to its subtree-product rectangle and rank-compresses
/// each axis. Intervals become half-open before compression, so a query
/// coordinate falling between used keys floors to the correct cell.
pub fn bridges_to_rects(inst: &SplitInstance) -> Reduction {
    let tree = &inst.tree2;
    let n = tree.n() as u32;
    let raw = raw_rects(tree, &inst.bridges2);
    let mut used_x = vec![false; n as usize + 2];
    let mut used_y = vec![false; n as usize + 2];
    for r in &raw {
        used_x[r.x_lo as usize] = true;
        used_x[r.x_hi as usize + 1] = true;
        used_y[r.y_lo as usize] = true;
        used_y[r.y_hi as usize + 1] = true;
    }
    let (x_rank, gx) = rank_table(n, &used_x);
    let (y_rank, gy) = rank_table(n, &used_y);
    let rects = raw
        .iter()
        .map(|r| Rect {
            x_lo: x_rank[r.x_lo as usize],
            x_hi: x_rank[r.x_hi as usize + 1] - 1,
            y_lo: y_rank[r.y_lo as usize],
            y_hi: y_rank[r.y_hi as usize + 1] - 1,
            id: r.id,
        })
        .collect();
    Reduction { rects: RectSet { rects, grid: gx.max(gy) }, x_rank, y_rank }
}

impl Reduction {
    /// Grid point of the query pair `(u, v)` of the transformed tree, or
    /// `None` when it precedes every rectangle on some axis.
    pub fn query_point(&self, tree2: &ClassTree, u: usize, v: usize) -> Result<Option<(u32, u32)>> {
        tree2.check_vertex(u)?;
        tree2.check_vertex(v)?;
        let x = self.x_rank[tree2.pre(u) as usize];
        let y = self.y_rank[tree2.pre(v) as usize];
        Ok((x != NONE && y != NONE).then_some((x, y)))
    }
}

fn axis_laminar(mut iv: Vec<(u32, u32)>) -> bool {
    iv.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut open: Vec<u32> = Vec::new();
    for (lo, hi) in iv {
        while open.last().is_some_and(|&h| h < lo) {
            open.pop();
        }
        if open.last().is_some_and(|&h| h < hi) {
            return false;
        }
        open.push(hi);
    }
    true
}

/// True iff every pair of x-projections, and every pair of y-projections,
/// is disjoint or nested.
pub fn validate_rect_set(rs: &RectSet) -> bool {
    rs.rects.iter().all(|r| r.x_lo <= r.x_hi && r.y_lo <= r.y_hi)
        && axis_laminar(rs.rects.iter().map(|r| (r.x_lo, r.x_hi)).collect())
        && axis_laminar(rs.rects.iter().map(|r| (r.y_lo, r.y_hi)).collect())
}

pub fn swap_axes(rs: &RectSet) -> RectSet {
    RectSet { rects: rs.rects.iter().map(Rect::swapped).collect(), grid: rs.grid }
}
