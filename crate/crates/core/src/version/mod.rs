//! Version trees of a stack history, and ancestor-successor indexes over
//! weighted trees.

mod ancestor;
mod decompose;
mod persistent;

pub use ancestor::{default_group_size, AncestorIndex, Variant};
pub use decompose::{fragment_log, heavy_path_decompose, thin_fragment_decompose, Units};

use crate::model::ClassTree;

use decompose::NONE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackOp {
    Push(u32),
    Pop,
}

/// One stack operation at a given time. Events sharing a time are applied
/// in log order; queries at that time see the state after all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StackEvent {
    pub time: u32,
    pub op: StackOp,
}

/// Every stack state of a push/pop history as a root-path in one tree.
/// Node 0 is the empty stack; node `k > 0` holds the item pushed when it was
/// created, and its parent is the stack top at that moment.
#[derive(Debug, Clone)]
pub struct VersionTree {
    parent: Vec<u32>,
    item: Vec<u32>,
    times: Vec<u32>,
    tails: Vec<u32>,
}

impl VersionTree {
    /// Panics on a pop from an empty stack or on decreasing times.
    pub fn build(events: &[StackEvent]) -> Self {
        let mut parent = vec![NONE];
        let mut item = vec![NONE];
        let mut times = Vec::new();
        let mut tails = Vec::new();
        let mut top = 0u32;
        for (i, e) in events.iter().enumerate() {
            match e.op {
                StackOp::Push(it) => {
                    parent.push(top);
                    item.push(it);
                    top = (parent.len() - 1) as u32;
                }
                StackOp::Pop => {
                    assert!(top != 0, "pop from empty stack at event {i}");
                    top = parent[top as usize];
                }
            }
            match events.get(i + 1) {
                Some(next) if next.time == e.time => {}
                Some(next) => {
                    assert!(next.time > e.time, "event times must not decrease");
                    times.push(e.time);
                    tails.push(top);
                }
                None => {
                    times.push(e.time);
                    tails.push(top);
                }
            }
        }
        Self { parent, item, times, tails }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.len() == 1
    }

    pub fn parent(&self, k: usize) -> Option<usize> {
        (self.parent[k] != NONE).then_some(self.parent[k] as usize)
    }

    pub fn item(&self, k: usize) -> Option<u32> {
        (k != 0).then_some(self.item[k])
    }

    pub fn times(&self) -> &[u32] {
        &self.times
    }

    pub fn tails(&self) -> &[u32] {
        &self.tails
    }

    /// Stack top at time `t`, found by binary search over event times.
    pub fn tail_at(&self, t: u32) -> usize {
        let s = self.times.partition_point(|&k| k <= t);
        if s == 0 {
            0
        } else {
            self.tails[s - 1] as usize
        }
    }

    /// Items on the stack of node `k`, top first.
    pub fn stack(&self, k: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut cur = k;
        while cur != 0 {
            out.push(self.item[cur]);
            cur = self.parent[cur] as usize;
        }
        out
    }

    pub fn to_class_tree(&self) -> ClassTree {
        let parents: Vec<Option<usize>> = (0..self.len()).map(|k| self.parent(k)).collect();
        ClassTree::from_parents(&parents).expect("version tree is a tree")
    }

    /// For every node, the non-root node of largest `key` on its root path
    /// (or `NONE` for the root).
    pub fn ancestor_max(&self, key: impl Fn(u32) -> u32) -> Vec<u32> {
        let mut out = vec![NONE; self.len()];
        for k in 1..self.len() {
            let p = self.parent[k] as usize;
            out[k] = if p == 0 || key(self.item[k]) > key(self.item[out[p] as usize]) { k as u32 } else { out[p] };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(time: u32, op: StackOp) -> StackEvent {
        StackEvent { time, op }
    }

    #[test]
    fn push_push_pop_push() {
        use StackOp::*;
        let t = VersionTree::build(&[ev(1, Push(10)), ev(2, Push(20)), ev(3, Pop), ev(4, Push(30))]);
        assert_eq!(t.len(), 4);
        assert_eq!(t.parent(1), Some(0));
        assert_eq!(t.parent(2), Some(1));
        assert_eq!(t.parent(3), Some(1));
        assert_eq!(t.tails(), &[1, 2, 1, 3]);
        assert_eq!(t.tail_at(0), 0);
        assert_eq!(t.tail_at(3), 1);
        assert_eq!(t.stack(t.tail_at(9)), vec![30, 10]);
    }

    #[test]
    fn same_time_events_share_a_tail() {
        use StackOp::*;
        let t = VersionTree::build(&[ev(1, Push(1)), ev(1, Push(2)), ev(5, Pop), ev(5, Pop)]);
        assert_eq!(t.times(), &[1, 5]);
        assert_eq!(t.tails(), &[2, 0]);
        assert_eq!(t.tail_at(4), 2);
    }

    #[test]
    #[should_panic]
    fn pop_on_empty_fails() {
        VersionTree::build(&[ev(0, StackOp::Pop)]);
    }

    #[test]
    fn ancestor_max_tracks_path() {
        use StackOp::*;
        let t = VersionTree::build(&[ev(1, Push(5)), ev(2, Push(3)), ev(3, Push(8)), ev(4, Pop), ev(4, Pop), ev(5, Push(1))]);
        let m = t.ancestor_max(|it| it);
        assert_eq!(m, vec![NONE, 1, 1, 3, 1]);
    }

    #[test]
    fn stacks_replay_random_history() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut events = Vec::new();
        let mut depth = 0;
        let mut snapshots = Vec::new();
        let mut live: Vec<u32> = Vec::new();
        for time in 0..300u32 {
            for _ in 0..rng.gen_range(1..3) {
                if depth > 0 && rng.gen_bool(0.45) {
                    events.push(ev(time, StackOp::Pop));
                    live.pop();
                    depth -= 1;
                } else {
                    events.push(ev(time, StackOp::Push(time)));
                    live.push(time);
                    depth += 1;
                }
            }
            snapshots.push(live.iter().rev().copied().collect::<Vec<_>>());
        }
        let t = VersionTree::build(&events);
        for (time, s) in snapshots.iter().enumerate() {
            assert_eq!(&t.stack(t.tail_at(time as u32)), s);
        }
    }
}
