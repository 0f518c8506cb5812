use std::collections::HashSet;

use morsetree::*;

fn all_sequences(turns: usize) -> impl Iterator<Item = LrSequence> {
    (0u32..1 << turns).map(move |bits| {
        LrSequence::from_turns((0..turns).map(|i| {
            if bits >> i & 1 == 1 {
                Direction::R
            } else {
                Direction::L
            }
        }))
    })
}

#[test]
fn lr_round_trip_up_to_length_eight() {
    for turns in 0..=7 {
        for seq in all_sequences(turns) {
            let m = thin_from_lr(&seq);
            assert!(m.is_thin());
            assert_eq!(m.internal_count(), turns + 1);
            assert_eq!(lr_sequence(&m).unwrap(), seq);
            let reparsed: LrSequence = seq.compact().parse().unwrap();
            assert_eq!(thin_from_lr(&reparsed), m);
        }
    }
}

#[test]
fn thin_census() {
    for n in 1..=10 {
        let trees = enumerate_thin(n);
        assert_eq!(trees.len(), 1 << (n - 1));
        let codes: HashSet<ShapeCode> = trees.iter().map(MergeTree::shape_code).collect();
        assert_eq!(codes.len(), trees.len());
        assert!(trees.iter().all(|t| t.is_thin() && t.leaf_count() == n + 1));
    }
}

#[test]
fn realization_round_trip() {
    let mut total = 0;
    for n in 1..=6 {
        for m in enumerate_thin(n) {
            let (star, f) = realize_on_star(&m).unwrap();
            assert_eq!(star.edge_count(), n);
            assert_eq!(star.tree().degree(star.center()), n);
            assert!(f.is_fully_critical());
            let max_vertex = f.vertex_values().iter().cloned().fold(f64::MIN, f64::max);
            let min_edge = f.edge_values().iter().cloned().fold(f64::MAX, f64::min);
            assert!(max_vertex < min_edge);
            let back = induce_merge_tree(&f);
            assert_eq!(lr_sequence(&back).unwrap(), lr_sequence(&m).unwrap());
            assert_eq!(back.shape_code(), m.shape_code());
            total += 1;
        }
    }
    assert_eq!(total, 63);
}

#[test]
fn star_counts_follow_the_doubling() {
    for k in 1..=12u32 {
        assert_eq!(count_realizable_on_star(k), 1 << (k - 1));
    }
}
