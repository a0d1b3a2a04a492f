use bindispatch::model::{BridgeSet, ClassTree};
use bindispatch::oracle::{generate_instance, oracle_dispatch, GenConfig, TreeShape};
use bindispatch::{Answer, Counters, FastDispatcher, SweepDispatcher};

fn seven() -> ClassTree {
    ClassTree::from_parents(&[None, Some(0), Some(0), Some(1), Some(1), Some(2), Some(2)]).unwrap()
}

fn all_engines(tree: &ClassTree, pairs: &[(usize, usize)], u: usize, v: usize) -> [Answer; 3] {
    let bs = BridgeSet::new(tree, pairs).unwrap();
    let s = SweepDispatcher::build(tree, &bs).unwrap();
    let f = FastDispatcher::build(tree, &bs).unwrap();
    let mut c = Counters::new();
    [oracle_dispatch(tree, &bs, u, v), s.dispatch(u, v, &mut c).unwrap(), f.dispatch(u, v, &mut c).unwrap()]
}

#[test]
fn seven_vertex_examples() {
    let t = seven();
    // 1-based (2,3),(4,6) and query (4,6)
    assert_eq!(all_engines(&t, &[(1, 2), (3, 5)], 3, 5), [Answer::Method(1); 3]);
    assert_eq!(all_engines(&t, &[(1, 5), (3, 2)], 3, 5), [Answer::Ambiguous; 3]);
    assert_eq!(all_engines(&t, &[(1, 2), (3, 5)], 0, 0), [Answer::NoMethod; 3]);
}

#[test]
fn seven_vertex_all_pairs() {
    let t = seven();
    for pairs in [vec![(1, 2), (3, 5)], vec![(1, 5), (3, 2)], vec![(0, 1), (0, 2)], vec![]] {
        let bs = BridgeSet::new(&t, &pairs).unwrap();
        let s = SweepDispatcher::build(&t, &bs).unwrap();
        let f = FastDispatcher::build(&t, &bs).unwrap();
        let mut c = Counters::new();
        for u in 0..7 {
            for v in 0..7 {
                let o = oracle_dispatch(&t, &bs, u, v);
                assert_eq!(s.dispatch(u, v, &mut c).unwrap(), o, "sweep {pairs:?} ({u},{v})");
                assert_eq!(f.dispatch(u, v, &mut c).unwrap(), o, "fast {pairs:?} ({u},{v})");
            }
        }
    }
}

#[test]
fn unknown_vertex_is_an_error() {
    let t = seven();
    let bs = BridgeSet::new(&t, &[(1, 2)]).unwrap();
    let s = SweepDispatcher::build(&t, &bs).unwrap();
    assert!(s.dispatch(7, 0, &mut Counters::new()).is_err());
}

#[test]
fn random_instances_all_pairs() {
    let shapes = [TreeShape::Random, TreeShape::Path, TreeShape::Star, TreeShape::Binary];
    let mut seen = [0usize; 3];
    for seed in 0..120u64 {
        let cfg = GenConfig {
            seed,
            n: 1 + (seed as usize * 7) % 48,
            m: (seed as usize * 5) % 40,
            shape: shapes[seed as usize % 4],
            share_rate: if seed % 2 == 0 { 0.0 } else { 0.5 },
            ..GenConfig::default()
        };
        let inst = generate_instance(&cfg);
        let tree = inst.tree().unwrap();
        let bs = inst.bridge_set(&tree).unwrap();
        let s = SweepDispatcher::build(&tree, &bs).unwrap();
        let f = FastDispatcher::build(&tree, &bs).unwrap();
        let mut c = Counters::new();
        for u in 0..tree.n() {
            for v in 0..tree.n() {
                let o = oracle_dispatch(&tree, &bs, u, v);
                seen[match o {
                    Answer::Method(_) => 0,
                    Answer::Ambiguous => 1,
                    Answer::NoMethod => 2,
                }] += 1;
                assert_eq!(s.dispatch(u, v, &mut c).unwrap(), o, "sweep seed {seed} ({u},{v})");
                assert_eq!(f.dispatch(u, v, &mut c).unwrap(), o, "fast seed {seed} ({u},{v})");
            }
        }
    }
    assert!(seen.iter().all(|&k| k > 0), "{seen:?}");
}
