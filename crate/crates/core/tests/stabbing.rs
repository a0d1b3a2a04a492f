use bindispatch::fast::FastIndex;
use bindispatch::model::{bridges_to_rects, split_shared_endpoints, swap_axes, RectSet};
use bindispatch::oracle::{generate_instance, oracle_smallest_rect, GenConfig, RectKey, TreeShape};
use bindispatch::sweep::SweepIndex;
use bindispatch::Counters;

fn rect_set(seed: u64, n: usize, m: usize, shape: TreeShape) -> RectSet {
    let inst = generate_instance(&GenConfig { seed, n, m, shape, share_rate: 0.4, ..GenConfig::default() });
    let tree = inst.tree().unwrap();
    let bs = inst.bridge_set(&tree).unwrap();
    bridges_to_rects(&split_shared_endpoints(&tree, &bs)).rects
}

#[test]
fn every_grid_point_matches_brute_force() {
    let shapes = [TreeShape::Random, TreeShape::Path, TreeShape::Star, TreeShape::Binary];
    for seed in 0..60u64 {
        let rs = rect_set(seed, 20 + seed as usize % 50, 1 + seed as usize % 60, shapes[seed as usize % 4]);
        for rs in [rs.clone(), swap_axes(&rs)] {
            let sweep = SweepIndex::build(&rs).unwrap();
            let fasts: Vec<FastIndex> = (2..=8).map(|d| FastIndex::build_with_arity(&rs, d).unwrap()).collect();
            let mut c = Counters::new();
            for x in 0..rs.grid {
                for y in 0..rs.grid {
                    let want = oracle_smallest_rect(&rs.rects, x, y, RectKey::Height).map(|i| i as u32);
                    assert_eq!(sweep.smallest(x, y, &mut c), want, "sweep seed {seed} ({x},{y})");
                    for f in &fasts {
                        assert_eq!(f.smallest(x, y, &mut c), want, "fast d={} seed {seed} ({x},{y})", f.arity());
                    }
                }
            }
        }
    }
}

#[test]
fn empty_set_answers_nothing() {
    let rs = RectSet::default();
    let s = SweepIndex::build(&rs).unwrap();
    let f = FastIndex::build(&rs).unwrap();
    assert_eq!(s.smallest(0, 0, &mut Counters::new()), None);
    assert_eq!(f.smallest(0, 0, &mut Counters::new()), None);
}
