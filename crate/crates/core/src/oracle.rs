//! Brute-force ground truth.

use crate::model::{BridgeSet, ClassTree, Rect};
use crate::{Answer, Counters};

/// Linear scan: the applicable bridge that is lower-or-equal to every other
/// applicable bridge, if any.
pub fn oracle_dispatch(tree: &ClassTree, bridges: &BridgeSet, u: usize, v: usize) -> Answer {
    oracle_dispatch_counted(tree, bridges, u, v, &mut Counters::new())
}

/// [`oracle_dispatch`], counting one comparison per ancestor test.
pub fn oracle_dispatch_counted(tree: &ClassTree, bridges: &BridgeSet, u: usize, v: usize, c: &mut Counters) -> Answer {
    let mut applies = |b| {
        c.cmp(2);
        BridgeSet::applies(tree, b, u, v)
    };
    let mut cand: Option<usize> = None;
    let mut any = false;
    let mut lower = 0;
    for (id, b) in bridges.iter() {
        if !applies(b) {
            continue;
        }
        any = true;
        lower += 1;
        match cand {
            Some(k) if !BridgeSet::lower_eq(tree, b, bridges.get(k)) => {}
            _ => cand = Some(id),
        }
    }
    if !any {
        return Answer::NoMethod;
    }
    let k = cand.expect("some applicable bridge");
    let kb = bridges.get(k);
    let lowest = bridges.iter().all(|(_, b)| !BridgeSet::applies(tree, b, u, v) || BridgeSet::lower_eq(tree, kb, b));
    c.cmp(4 * lower);
    if lowest {
        Answer::Method(k)
    } else {
        Answer::Ambiguous
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RectKey {
    Height,
    Width,
}

/// Index of the rectangle containing `(x, y)` with the smallest key, ties
/// to the smaller id.
pub fn oracle_smallest_rect(rects: &[Rect], x: u32, y: u32, key: RectKey) -> Option<usize> {
    let k = |r: &Rect| match key {
        RectKey::Height => r.height(),
        RectKey::Width => r.width(),
    };
    rects
        .iter()
        .enumerate()
        .filter(|(_, r)| r.contains(x, y))
        .min_by_key(|(_, r)| (k(r), r.id))
        .map(|(i, _)| i)
}

/// Tree shapes for generated hierarchies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    /// Each vertex picks a uniformly random earlier parent.
    Random,
    /// Mostly a long chain.
    Path,
    /// Mostly children of the root.
    Star,
    /// Heap-ordered binary tree.
    Binary,
}

impl std::str::FromStr for TreeShape {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(Self::Random),
            "path" => Ok(Self::Path),
            "star" => Ok(Self::Star),
            "binary" => Ok(Self::Binary),
            _ => Err(format!("unknown shape {s:?} (random, path, star, binary)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub shape: TreeShape,
    /// Chance that a new bridge reuses an endpoint of an earlier one.
    pub share_rate: f64,
    /// Chance of inserting a pair of incomparable bridges over a common
    /// query.
    pub ambiguity_boost: f64,
    pub queries: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self { seed: 1, n: 64, m: 32, shape: TreeShape::Random, share_rate: 0.3, ambiguity_boost: 0.2, queries: 64 }
    }
}

/// Deterministic random instance.
///
/// Forced ambiguity takes an earlier bridge `(a, b)`, a proper descendant
/// `a2` of `a` and `b2` of `b`, and adds `(a, b2)` and `(a2, b)`; both apply
/// to `(a2, b2)` and neither is lower than the other. Queries mix bridge
/// endpoints, those forced pairs, and uniform pairs.
pub fn generate_instance(cfg: &GenConfig) -> crate::format::Instance {
    use rand::{Rng, SeedableRng};
    use std::collections::HashSet;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    let empty = crate::format::Instance { parents: Vec::new(), bridges: Vec::new(), queries: Vec::new() };
    if n == 0 {
        return empty;
    }
    let parents: Vec<Option<usize>> = (0..n)
        .map(|i| match i {
            0 => None,
            _ => Some(match cfg.shape {
                TreeShape::Random => rng.gen_range(0..i),
                TreeShape::Path if rng.gen_bool(0.9) => i - 1,
                TreeShape::Star if rng.gen_bool(0.8) => 0,
                TreeShape::Binary => (i - 1) / 2,
                _ => rng.gen_range(0..i),
            }),
        })
        .collect();
    let tree = ClassTree::from_parents(&parents).expect("generated parents form a tree");
    let below = |rng: &mut rand_chacha::ChaCha8Rng, a: usize| -> Option<usize> {
        let (lo, hi) = tree.subtree_interval(a);
        (hi > lo).then(|| tree.vertex_at_pre(rng.gen_range(lo + 1..=hi)))
    };

    let mut bridges: Vec<(usize, usize)> = Vec::new();
    let mut seen = HashSet::new();
    let mut forced = Vec::new();
    let max_pairs = n * n;
    let mut attempts = 0;
    while bridges.len() < cfg.m.min(max_pairs) && attempts < 20 * cfg.m + 100 {
        attempts += 1;
        if !bridges.is_empty() && cfg.m - bridges.len() >= 2 && rng.gen_bool(cfg.ambiguity_boost) {
            let (a, b) = bridges[rng.gen_range(0..bridges.len())];
            if let (Some(a2), Some(b2)) = (below(&mut rng, a), below(&mut rng, b)) {
                if !seen.contains(&(a, b2)) && !seen.contains(&(a2, b)) {
                    for p in [(a, b2), (a2, b)] {
                        seen.insert(p);
                        bridges.push(p);
                    }
                    forced.push((a2, b2));
                }
            }
            continue;
        }
        let p = if !bridges.is_empty() && rng.gen_bool(cfg.share_rate) {
            let (a, b) = bridges[rng.gen_range(0..bridges.len())];
            if rng.gen_bool(0.5) {
                (a, rng.gen_range(0..n))
            } else {
                (rng.gen_range(0..n), b)
            }
        } else {
            (rng.gen_range(0..n), rng.gen_range(0..n))
        };
        if seen.insert(p) {
            bridges.push(p);
        }
    }
    let queries = (0..cfg.queries)
        .map(|_| match rng.gen_range(0..3) {
            0 if !bridges.is_empty() => bridges[rng.gen_range(0..bridges.len())],
            1 if !forced.is_empty() => forced[rng.gen_range(0..forced.len())],
            _ => (rng.gen_range(0..n), rng.gen_range(0..n)),
        })
        .collect();
    crate::format::Instance { parents, bridges, queries }
}
