#![allow(dead_code)]

use std::sync::Arc;

use morsetree::{MergeTree, MorseFunction, SimplicialTree};

pub fn function(vertices: &[(&str, f64)], edges: &[(&str, &str, f64)]) -> MorseFunction {
    let tree = SimplicialTree::new(
        vertices.iter().map(|(n, _)| *n),
        edges.iter().map(|(u, v, _)| (*u, *v)),
    )
    .unwrap();
    MorseFunction::new(
        Arc::new(tree),
        vertices.iter().map(|(_, x)| *x).collect(),
        edges.iter().map(|(_, _, x)| *x).collect(),
    )
    .unwrap()
}

/// Six-vertex tree, every simplex critical.
pub fn first_example() -> MorseFunction {
    function(
        &[
            ("a", 0.),
            ("b", 4.),
            ("c", 7.),
            ("d", 6.),
            ("e", 1.),
            ("f", 2.),
        ],
        &[
            ("a", "b", 5.),
            ("a", "d", 9.),
            ("c", "d", 8.),
            ("d", "e", 10.),
            ("e", "f", 3.),
        ],
    )
}

/// Four-vertex path with one impasse and matching number two.
pub fn impasse_example() -> MorseFunction {
    function(
        &[("a", 0.), ("b", 3.), ("c", 1.), ("d", 2.)],
        &[("a", "b", 5.), ("b", "c", 4.), ("c", "d", 6.)],
    )
}

fn path3(vertices: [f64; 3], edges: [f64; 2]) -> MorseFunction {
    function(
        &[("a", vertices[0]), ("b", vertices[1]), ("c", vertices[2])],
        &[("a", "b", edges[0]), ("b", "c", edges[1])],
    )
}

/// Same gradient field, different merge trees.
pub fn forman_pair() -> (MorseFunction, MorseFunction) {
    (path3([0., 1., 2.], [3., 4.]), path3([0., 1., 2.], [4., 3.]))
}

/// Same merge tree, different homology and persistence.
pub fn hom_pair() -> (MorseFunction, MorseFunction) {
    (path3([0., 1., 2.], [3., 4.]), path3([0., 1., 3.], [2., 4.]))
}

/// Same persistence diagram, different merge trees: a path and a star.
pub fn persistence_pair() -> (MorseFunction, MorseFunction) {
    let star = function(
        &[("c", 0.), ("x", 1.), ("y", 2.)],
        &[("c", "x", 4.), ("c", "y", 3.)],
    );
    (path3([0., 1., 2.], [4., 3.]), star)
}

/// `value:direction`, then the children in brackets.
pub fn render(m: &MergeTree) -> String {
    fn go(m: &MergeTree, id: usize, out: &mut String) {
        let node = m.node(id);
        let value = node.value.map_or("-".to_string(), morsetree::format_value);
        out.push_str(&format!("{value}{}", node.direction));
        if let Some([l, r]) = node.children {
            out.push('[');
            go(m, l, out);
            out.push(' ');
            go(m, r, out);
            out.push(']');
        }
    }
    let mut out = String::new();
    go(m, m.root(), &mut out);
    out
}
