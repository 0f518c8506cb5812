mod common;

use std::sync::Arc;

use morsetree::equivalence::{homological_sequence, persistence_diagram};
use morsetree::oracle::{all_trees, enumerate_critical_dmfs, DEFAULT_BUDGET};
use morsetree::*;
use proptest::prelude::*;

/// Bottom-up sweep: a union-find over vertices, where each component keeps
/// its minimum and the node standing for its newest critical simplex.
/// Directions are filled in afterwards from the root down.
fn bottom_up(f: &MorseFunction) -> String {
    struct Node {
        value: f64,
        children: Option<[(usize, f64); 2]>,
    }
    let tree = f.tree();
    let n = tree.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    let mut minimum = f.vertex_values().to_vec();
    let mut top: Vec<Option<usize>> = vec![None; n];
    let mut nodes: Vec<Node> = Vec::new();

    let mut order: Vec<SimplexId> = tree.simplex_ids().collect();
    order.sort_by(|&a, &b| {
        f.value(a)
            .total_cmp(&f.value(b))
            .then(a.dimension().cmp(&b.dimension()))
    });
    for s in order {
        match s {
            SimplexId::Vertex(v) => {
                if f.is_critical(s) {
                    nodes.push(Node {
                        value: f.value(s),
                        children: None,
                    });
                    top[v] = Some(nodes.len() - 1);
                }
            }
            SimplexId::Edge(e) => {
                let [a, b] = tree.endpoints(e);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                assert_ne!(ra, rb);
                let merged_min = minimum[ra].min(minimum[rb]);
                let merged_top = if f.is_critical(s) {
                    let pair = [
                        (
                            top[ra].expect("components below a critical edge have a top"),
                            minimum[ra],
                        ),
                        (
                            top[rb].expect("components below a critical edge have a top"),
                            minimum[rb],
                        ),
                    ];
                    nodes.push(Node {
                        value: f.value(s),
                        children: Some(pair),
                    });
                    Some(nodes.len() - 1)
                } else {
                    top[ra].or(top[rb])
                };
                parent[rb] = ra;
                minimum[ra] = merged_min;
                top[ra] = merged_top;
            }
        }
    }
    let root = nodes.len() - 1;

    fn emit(nodes: &[Node], id: usize, dir: char, out: &mut String) {
        out.push_str(&format!("{}{dir}", format_value(nodes[id].value)));
        if let Some([(x, mx), (y, my)]) = nodes[id].children {
            let flip = if dir == 'L' { 'R' } else { 'L' };
            // The child with the smaller minimum keeps the parent's direction.
            let (keep, other) = if mx < my { (x, y) } else { (y, x) };
            let (left, right) = if dir == 'L' {
                (keep, other)
            } else {
                (other, keep)
            };
            out.push('[');
            emit(nodes, left, if dir == 'L' { dir } else { flip }, out);
            out.push(' ');
            emit(nodes, right, if dir == 'L' { flip } else { dir }, out);
            out.push(']');
        }
    }
    let mut out = String::new();
    emit(&nodes, root, 'L', &mut out);
    out
}

#[test]
fn bottom_up_matches_on_examples() {
    let f = common::first_example();
    assert_eq!(bottom_up(&f), common::render(&induce_merge_tree(&f)));
    let f = common::impasse_example();
    assert_eq!(bottom_up(&f), common::render(&induce_merge_tree(&f)));
}

#[test]
fn bottom_up_matches_on_every_critical_function_up_to_five_vertices() {
    for n in 1..=5 {
        for tree in all_trees(n) {
            let tree = Arc::new(tree);
            for f in enumerate_critical_dmfs(&tree, DEFAULT_BUDGET).unwrap() {
                let m = induce_merge_tree(&f);
                assert_eq!(common::render(&m), bottom_up(&f));
            }
        }
    }
}

fn prufer_tree(code: &[usize], n: usize) -> SimplicialTree {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut edges = Vec::new();
    if n == 2 {
        edges.push((0, 1));
    } else if n > 2 {
        let mut degree = vec![1usize; n];
        for &c in code {
            degree[c] += 1;
        }
        for &c in code {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, c));
            degree[leaf] -= 1;
            degree[c] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
    }
    SimplicialTree::new(
        names.clone(),
        edges
            .into_iter()
            .map(|(a, b)| (names[a].clone(), names[b].clone())),
    )
    .unwrap()
}

/// A random discrete Morse function, possibly with gradient pairs.
fn arb_function() -> impl Strategy<Value = MorseFunction> {
    (1usize..9)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(0..n.max(1), n.saturating_sub(2)),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                proptest::collection::vec(1u32..6, n.saturating_sub(1)),
                proptest::collection::vec(any::<bool>(), n.saturating_sub(1)),
            )
        })
        .prop_map(|(n, code, ranks, bumps, pair)| {
            let tree = Arc::new(prufer_tree(&code, n));
            let vertex_values: Vec<f64> = ranks.iter().map(|&r| 10.0 * r as f64).collect();
            let mut edge_values: Vec<f64> = tree
                .edges()
                .iter()
                .zip(&bumps)
                .enumerate()
                .map(|(e, (&[a, b], &bump))| {
                    vertex_values[a].max(vertex_values[b]) + bump as f64 + e as f64 / 100.0
                })
                .collect();
            let mut f =
                MorseFunction::new(tree.clone(), vertex_values.clone(), edge_values.clone())
                    .expect("distinct values increasing along faces");
            for e in 0..tree.edge_count() {
                if !pair[e] {
                    continue;
                }
                let [a, b] = tree.endpoints(e);
                let high = if vertex_values[a] > vertex_values[b] {
                    a
                } else {
                    b
                };
                let saved = edge_values[e];
                edge_values[e] = vertex_values[high];
                match MorseFunction::new(tree.clone(), vertex_values.clone(), edge_values.clone()) {
                    Ok(g) => f = g,
                    Err(_) => edge_values[e] = saved,
                }
            }
            f
        })
}

proptest! {
    #[test]
    fn bottom_up_matches_with_gradient_pairs(f in arb_function()) {
        let m = induce_merge_tree(&f);
        prop_assert_eq!(common::render(&m), bottom_up(&f));
        prop_assert!(m.is_well_formed());
        prop_assert_eq!(m.len(), f.critical_values().len());
        prop_assert_eq!(f.critical_vertex_count(), f.critical_edge_count() + 1);
        prop_assert!(m.impasse_count() >= 1 || m.len() == 1);
        prop_assert!(m.impasse_count() <= f.tree().matching_number());
    }

    #[test]
    fn shape_code_round_trips(f in arb_function()) {
        let code = induce_merge_tree(&f).shape_code();
        let parsed: ShapeCode = code.as_str().parse().unwrap();
        prop_assert_eq!(parsed.to_tree().shape_code(), code);
    }

    #[test]
    fn sequence_and_diagram_agree(f in arb_function()) {
        let seq = homological_sequence(&f);
        let diagram = persistence_diagram(&f);
        let critical = f.critical_values();
        prop_assert_eq!(seq.len(), critical.len());
        prop_assert_eq!(diagram.finite_pairs().count(), f.critical_edge_count());
        for (betti, &c) in seq.0.iter().zip(&critical) {
            prop_assert_eq!(betti.b1, 0);
            let born = diagram.pairs().iter().filter(|p| p.birth <= c).count();
            let dead = diagram.finite_pairs().filter(|p| p.death <= c).count();
            prop_assert_eq!(betti.b0, born - dead);
        }
    }

    #[test]
    fn level_subcomplexes_are_subcomplexes(f in arb_function()) {
        let all = f.tree().simplex_set();
        for (a, level) in f.filtration() {
            let kept = level.complex.simplex_set();
            prop_assert!(kept.is_subset(&all));
            for s in &kept {
                prop_assert!(f.value_of(s).unwrap() <= a);
                if let Simplex::Edge(u, v) = s {
                    prop_assert!(kept.contains(&Simplex::vertex(u.clone())));
                    prop_assert!(kept.contains(&Simplex::vertex(v.clone())));
                }
            }
        }
    }

    #[test]
    fn gradient_pairs_are_incident_equal_values(f in arb_function()) {
        let field = f.gradient_vector_field();
        prop_assert_eq!(
            field.len() * 2 + f.critical_values().len(),
            f.tree().simplex_count()
        );
        for (v, e) in &field.pairs {
            prop_assert!(v.is_face_of(e));
            prop_assert_eq!(f.value_of(v), f.value_of(e));
        }
        prop_assert_eq!(forman_equivalent(&f, &f), Ok(true));
    }
}
