use std::collections::BTreeMap;

use olymp_core::park_walk::{
    all_starts, best_walk, extremal_witness, max_visits, random_layout, search_extremal, simulate, step, step_back,
    step_guard, trail_traversal_counts, validate_layout, ParkLayout, RawLayout, Turn, WalkState,
};
use olymp_core::seed;

const K4_TRAILS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// K4 under all 16 rotation systems.
fn k4_rotations() -> Vec<ParkLayout> {
    let mut incident = vec![Vec::new(); 4];
    for (t, &[u, v]) in K4_TRAILS.iter().enumerate() {
        incident[u].push(t);
        incident[v].push(t);
    }
    (0..16u32)
        .map(|mask| {
            let rotation: BTreeMap<String, Vec<usize>> = incident
                .iter()
                .enumerate()
                .map(|(v, r)| {
                    let order = if mask >> v & 1 == 1 { vec![r[0], r[2], r[1]] } else { r.clone() };
                    (v.to_string(), order)
                })
                .collect();
            validate_layout(&RawLayout { junctions: 4, trails: K4_TRAILS.to_vec(), rotation }).unwrap()
        })
        .collect()
}

fn check_all_walks(layout: &ParkLayout) -> usize {
    let mut best = 0;
    for (start, trail, turn) in all_starts(layout) {
        let walk = simulate(layout, start, trail, turn).unwrap();
        assert!(walk.steps.len() < step_guard(layout));
        assert!(walk.visit_counts.iter().all(|&c| c <= 3), "{walk:?}");
        assert!(trail_traversal_counts(&walk).values().all(|&c| c <= 2), "{walk:?}");
        let turns: Vec<Turn> = walk.steps.iter().filter_map(|s| s.turn).collect();
        assert!(turns.windows(2).all(|p| p[0] != p[1]));
        best = best.max(max_visits(&walk).1);
    }
    best
}

#[test]
fn k4_exhaustive() {
    let layouts = k4_rotations();
    let best = layouts.iter().map(check_all_walks).max().unwrap();
    let searched = search_extremal(4, 200, 1).unwrap();
    // frozen from the exhaustive run over all 16 rotations
    assert_eq!(best, 2);
    assert_eq!(searched.max_visits.1, best);
}

#[test]
fn step_is_a_bijection_on_small_layouts() {
    let mut layouts = k4_rotations();
    let mut rng = seed::rng(2, "park-bijection", 0);
    layouts.extend((0..20).map(|k| random_layout(6 + 2 * (k % 3), &mut rng)));
    for layout in &layouts {
        let mut images = std::collections::HashSet::new();
        for t in 0..layout.trail_count() {
            for head in layout.trails()[t] {
                for next_turn in [Turn::Left, Turn::Right] {
                    let s = WalkState { trail: t, head, next_turn };
                    let next = step(layout, s);
                    assert_eq!(step_back(layout, next), s);
                    images.insert(next);
                }
            }
        }
        assert_eq!(images.len(), 4 * layout.trail_count());
    }
}

#[test]
fn random_layouts_never_exceed_bounds() {
    for k in 0..1000 {
        let mut rng = seed::rng(3, "park-fuzz", k);
        let n = 4 + 2 * (k as usize % 6);
        let layout = random_layout(n, &mut rng);
        check_all_walks(&layout);
    }
}

#[test]
fn bundled_witness_reaches_three() {
    let w = extremal_witness();
    assert_eq!(w.layout.junction_count(), 10);
    let walk = w.simulate().unwrap();
    assert_eq!(max_visits(&walk), (0, 3));
    let (_, _, best) = best_walk(&w.layout).unwrap();
    assert_eq!(best.1, 3);
}

#[test]
fn search_finds_three_visits() {
    let found = search_extremal(10, 500, 42).unwrap();
    assert_eq!(found.max_visits.1, 3);
    let replay = found.witness.simulate().unwrap();
    assert_eq!(replay, found.walk);
}
