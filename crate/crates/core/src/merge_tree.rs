//! Merge trees and the merge tree induced by a discrete Morse function.
//!
//! A merge tree is a rooted full binary tree in which every child is
//! designated left or right. The root carries direction `L`; every other
//! node carries the direction of the slot it occupies under its parent.
//!
//! [`MergeTree::induce`] walks the critical edges of a Morse function from
//! the largest value down. Each critical edge `uv` becomes a node whose two
//! children stand for the components of `u` and `v` just below the edge's
//! value, labelled by the largest critical value in each component. The
//! child whose component reaches the smaller minimum keeps the parent's
//! direction and the other one takes the opposite direction.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::morse::MorseFunction;
use crate::tree::SimplexId;
use crate::util::format_value;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    L,
    R,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::L => Direction::R,
            Direction::R => Direction::L,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::L => "L",
            Direction::R => "R",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MergeNode {
    /// Function value of the simplex, absent for hand-built trees.
    pub value: Option<f64>,
    pub direction: Direction,
    /// `[left, right]` for internal nodes.
    pub children: Option<[NodeId; 2]>,
    pub parent: Option<NodeId>,
    /// The critical simplex this node stands for, when induced.
    pub source: Option<SimplexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeTreeError {
    #[error("MalformedShape: {0}")]
    MalformedShape(String),
}

/// One step of the top-down construction, recorded for inspection.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeStep {
    pub edge: usize,
    pub value: f64,
    /// Component minima below the edge, at its two endpoints.
    pub minima: [f64; 2],
    /// Largest critical simplex of each endpoint component.
    pub tops: [SimplexId; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct MergeTree {
    nodes: Vec<MergeNode>,
    root: NodeId,
}

struct RawNode {
    value: Option<f64>,
    children: Option<[NodeId; 2]>,
    source: Option<SimplexId>,
}

impl MergeTree {
    /// Fills in parents and directions from child positions.
    fn from_raw(raw: Vec<RawNode>, root: NodeId) -> Self {
        let mut nodes: Vec<MergeNode> = raw
            .into_iter()
            .map(|r| MergeNode {
                value: r.value,
                direction: Direction::L,
                children: r.children,
                parent: None,
                source: r.source,
            })
            .collect();
        for id in 0..nodes.len() {
            if let Some([l, r]) = nodes[id].children {
                nodes[l].parent = Some(id);
                nodes[l].direction = Direction::L;
                nodes[r].parent = Some(id);
                nodes[r].direction = Direction::R;
            }
        }
        debug_assert!(nodes[root].parent.is_none());
        MergeTree { nodes, root }
    }

    pub fn leaf(value: Option<f64>) -> Self {
        Self::from_raw(
            vec![RawNode {
                value,
                children: None,
                source: None,
            }],
            0,
        )
    }

    /// A new root with `left` and `right` as its subtrees.
    pub fn join(value: Option<f64>, left: MergeTree, right: MergeTree) -> Self {
        let offset = left.nodes.len();
        let mut raw: Vec<RawNode> = Vec::with_capacity(left.len() + right.len() + 1);
        for (tree, shift) in [(&left, 0), (&right, offset)] {
            raw.extend(tree.nodes.iter().map(|n| RawNode {
                value: n.value,
                children: n.children.map(|[l, r]| [l + shift, r + shift]),
                source: n.source,
            }));
        }
        let root = raw.len();
        raw.push(RawNode {
            value,
            children: Some([left.root, right.root + offset]),
            source: None,
        });
        Self::from_raw(raw, root)
    }

    /// The merge tree induced by `f`.
    pub fn induce(f: &MorseFunction) -> Self {
        Self::induce_traced(f).0
    }

    /// [`induce`](Self::induce), also returning one record per critical
    /// edge in the order processed (decreasing value).
    pub fn induce_traced(f: &MorseFunction) -> (Self, Vec<MergeStep>) {
        let tree = f.tree();
        let mut critical_edges: Vec<usize> = (0..tree.edge_count())
            .filter(|&e| f.is_critical(SimplexId::Edge(e)))
            .collect();
        critical_edges.sort_by(|&a, &b| f.edge_values()[b].total_cmp(&f.edge_values()[a]));

        let Some(&top_edge) = critical_edges.first() else {
            let vertex = (0..tree.vertex_count())
                .map(SimplexId::Vertex)
                .find(|&v| f.is_critical(v))
                .expect("a Morse function on a tree has a critical vertex");
            let leaf = RawNode {
                value: Some(f.value(vertex)),
                children: None,
                source: Some(vertex),
            };
            return (Self::from_raw(vec![leaf], 0), Vec::new());
        };

        let mut raw = Vec::with_capacity(2 * critical_edges.len() + 1);
        let mut direction = Vec::with_capacity(raw.capacity());
        let mut node_of = std::collections::HashMap::new();
        let new_node = |raw: &mut Vec<RawNode>, source: SimplexId| {
            raw.push(RawNode {
                value: Some(f.value(source)),
                children: None,
                source: Some(source),
            });
            raw.len() - 1
        };
        let root = new_node(&mut raw, SimplexId::Edge(top_edge));
        direction.push(Direction::L);
        node_of.insert(SimplexId::Edge(top_edge), root);

        let mut explorer = ComponentExplorer::new(f);
        let mut steps = Vec::with_capacity(critical_edges.len());
        for &e in &critical_edges {
            let id = *node_of
                .get(&SimplexId::Edge(e))
                .expect("every critical edge is the top of a component above it");
            let c = f.edge_values()[e];
            let [u, v] = tree.endpoints(e);
            let cu = explorer.explore(u, c);
            let cv = explorer.explore(v, c);
            steps.push(MergeStep {
                edge: e,
                value: c,
                minima: [cu.min, cv.min],
                tops: [cu.top, cv.top],
            });

            let (elder, younger) = if cu.min < cv.min { (cu, cv) } else { (cv, cu) };
            let elder_id = new_node(&mut raw, elder.top);
            direction.push(direction[id]);
            let younger_id = new_node(&mut raw, younger.top);
            direction.push(direction[id].flip());
            node_of.insert(elder.top, elder_id);
            node_of.insert(younger.top, younger_id);

            raw[id].children = Some(match direction[id] {
                Direction::L => [elder_id, younger_id],
                Direction::R => [younger_id, elder_id],
            });
        }
        let tree = Self::from_raw(raw, root);
        debug_assert!(tree
            .nodes
            .iter()
            .zip(&direction)
            .all(|(n, &d)| n.direction == d));
        (tree, steps)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &MergeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[MergeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_none()
    }

    pub fn children(&self, id: NodeId) -> Option<[NodeId; 2]> {
        self.nodes[id].children
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_none()).count()
    }

    pub fn internal_count(&self) -> usize {
        self.len() - self.leaf_count()
    }

    /// First node carrying exactly `value`.
    pub fn find_value(&self, value: f64) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.value == Some(value))
    }

    /// Node ids in pre-order, left subtree before right.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            if let Some([l, r]) = self.nodes[id].children {
                stack.push(r);
                stack.push(l);
            }
        }
        out
    }

    /// Full-binary and rooted-tree check: one root, every other node reached
    /// exactly once from it, and directions matching child slots.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = vec![false; self.len()];
        for id in self.preorder() {
            if std::mem::replace(&mut seen[id], true) {
                return false;
            }
        }
        if !seen.iter().all(|&s| s) || self.nodes[self.root].direction != Direction::L {
            return false;
        }
        self.nodes
            .iter()
            .enumerate()
            .all(|(id, n)| match n.children {
                Some([l, r]) => {
                    l != r
                        && self.nodes[l].parent == Some(id)
                        && self.nodes[r].parent == Some(id)
                        && self.nodes[l].direction == Direction::L
                        && self.nodes[r].direction == Direction::R
                }
                None => true,
            })
    }

    /// Internal nodes whose two children are both leaves.
    pub fn impasses(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| {
                n.children
                    .is_some_and(|[l, r]| self.is_leaf(l) && self.is_leaf(r))
            })
            .map(|(id, _)| id)
            .collect()
    }

    pub fn impasse_count(&self) -> usize {
        self.impasses().len()
    }

    pub fn is_thin(&self) -> bool {
        self.impasse_count() == 1
    }

    pub fn shape_code(&self) -> ShapeCode {
        enum Item {
            Node(NodeId),
            Close,
        }
        let mut out = String::with_capacity(3 * self.len());
        let mut stack = vec![Item::Node(self.root)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Close => out.push(')'),
                Item::Node(id) => match self.nodes[id].children {
                    None => out.push(LEAF),
                    Some([l, r]) => {
                        out.push('(');
                        stack.push(Item::Close);
                        stack.push(Item::Node(r));
                        stack.push(Item::Node(l));
                    }
                },
            }
        }
        ShapeCode(out)
    }

    /// Same unlabelled tree with the same left/right designations.
    pub fn merge_equivalent(&self, other: &MergeTree) -> bool {
        self.shape_code() == other.shape_code()
    }

    /// Graphviz rendering; the left child edge precedes the right one.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph merge_tree {\n    node [shape=circle];\n");
        let order = self.preorder();
        for &id in &order {
            let label = self.nodes[id].value.map(format_value).unwrap_or_default();
            writeln!(out, "    n{id} [label=\"{label}\"];").unwrap();
        }
        for &id in &order {
            if let Some(children) = self.nodes[id].children {
                for child in children {
                    let dir = self.nodes[child].direction;
                    writeln!(
                        out,
                        "    n{id} -> n{child} [label=\"{dir}\", direction=\"{dir}\"];"
                    )
                    .unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Indented pre-order listing, one `value direction` line per node.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let node = &self.nodes[id];
            let label = node
                .value
                .map(format_value)
                .unwrap_or_else(|| LEAF.to_string());
            writeln!(
                out,
                "{:indent$}{label} {}",
                "",
                node.direction,
                indent = 2 * depth
            )
            .unwrap();
            if let Some([l, r]) = node.children {
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
            }
        }
        out
    }
}

/// Component summary below a level: the minimum value and the critical
/// simplex with the largest value.
#[derive(Clone, Copy, Debug)]
struct ComponentSummary {
    min: f64,
    top: SimplexId,
}

/// Reusable scratch space for exploring components of strict sublevel sets.
struct ComponentExplorer<'a> {
    f: &'a MorseFunction,
    stamp: Vec<u32>,
    generation: u32,
    stack: Vec<usize>,
}

impl<'a> ComponentExplorer<'a> {
    fn new(f: &'a MorseFunction) -> Self {
        ComponentExplorer {
            f,
            stamp: vec![0; f.tree().vertex_count()],
            generation: 0,
            stack: Vec::new(),
        }
    }

    /// Explores the component of `start` among simplices valued below `level`.
    fn explore(&mut self, start: usize, level: f64) -> ComponentSummary {
        let f = self.f;
        let tree = f.tree();
        self.generation += 1;
        let generation = self.generation;
        self.stamp[start] = generation;
        self.stack.push(start);

        let mut min = f64::INFINITY;
        let mut top: Option<(f64, SimplexId)> = None;
        let mut consider = |id: SimplexId| {
            let value = f.value(id);
            if f.is_critical(id) && top.is_none_or(|(best, _)| value > best) {
                top = Some((value, id));
            }
        };
        while let Some(v) = self.stack.pop() {
            min = min.min(f.vertex_values()[v]);
            consider(SimplexId::Vertex(v));
            for &(w, e) in tree.neighbours(v) {
                if f.edge_values()[e] >= level {
                    continue;
                }
                if self.stamp[w] != generation {
                    // Each tree edge is seen from both ends; count it once.
                    consider(SimplexId::Edge(e));
                    self.stamp[w] = generation;
                    self.stack.push(w);
                }
            }
        }
        ComponentSummary {
            min,
            top: top
                .expect("every component below a level has a critical vertex")
                .1,
        }
    }
}

pub fn induce_merge_tree(f: &MorseFunction) -> MergeTree {
    MergeTree::induce(f)
}

pub fn merge_equivalent(a: &MergeTree, b: &MergeTree) -> bool {
    a.merge_equivalent(b)
}

const LEAF: char = '•';

/// Canonical serialization of an unlabelled merge tree: a leaf is `•` and
/// an internal node is `(` left right `)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapeCode(String);

impl ShapeCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Decodes into an unlabelled merge tree.
    pub fn to_tree(&self) -> MergeTree {
        let mut raw = Vec::new();
        let mut stack: Vec<Vec<NodeId>> = vec![Vec::new()];
        for c in self.0.chars() {
            match c {
                '(' => stack.push(Vec::new()),
                LEAF => {
                    raw.push(RawNode {
                        value: None,
                        children: None,
                        source: None,
                    });
                    stack.last_mut().unwrap().push(raw.len() - 1);
                }
                _ => {
                    let frame = stack.pop().unwrap();
                    raw.push(RawNode {
                        value: None,
                        children: Some([frame[0], frame[1]]),
                        source: None,
                    });
                    stack.last_mut().unwrap().push(raw.len() - 1);
                }
            }
        }
        let root = stack[0][0];
        MergeTree::from_raw(raw, root)
    }
}

impl FromStr for ShapeCode {
    type Err = MergeTreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = |msg: &str| MergeTreeError::MalformedShape(format!("{msg} in `{s}`"));
        // Number of subtrees completed inside each open bracket.
        let mut open: Vec<u8> = Vec::new();
        let mut complete_roots = 0usize;
        for c in s.chars() {
            let completes_subtree = match c {
                '(' => {
                    if open.is_empty() && complete_roots > 0 {
                        return Err(malformed("trailing input"));
                    }
                    open.push(0);
                    false
                }
                LEAF => {
                    if open.is_empty() && complete_roots > 0 {
                        return Err(malformed("trailing input"));
                    }
                    true
                }
                ')' => match open.pop() {
                    Some(2) => true,
                    Some(_) => return Err(malformed("an internal node without two children")),
                    None => return Err(malformed("an unmatched `)`")),
                },
                other => return Err(malformed(&format!("unexpected character `{other}`"))),
            };
            if completes_subtree {
                match open.last_mut() {
                    Some(count) if *count < 2 => *count += 1,
                    Some(_) => {
                        return Err(malformed("an internal node with more than two children"))
                    }
                    None => complete_roots += 1,
                }
            }
        }
        if !open.is_empty() {
            return Err(malformed("an unclosed `(`"));
        }
        if complete_roots != 1 {
            return Err(malformed("an empty code"));
        }
        Ok(ShapeCode(s.to_string()))
    }
}

impl fmt::Display for ShapeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::SimplicialTree;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn cherry() -> MergeTree {
        MergeTree::join(
            Some(2.),
            MergeTree::leaf(Some(0.)),
            MergeTree::leaf(Some(1.)),
        )
    }

    fn path_function(vertices: [f64; 3], edges: [f64; 2]) -> MorseFunction {
        let tree = Arc::new(SimplicialTree::path(3).unwrap());
        MorseFunction::new(tree, vertices.to_vec(), edges.to_vec()).unwrap()
    }

    #[test]
    fn cherry_basics() {
        let m = cherry();
        assert!(m.is_well_formed());
        assert_eq!(m.impasse_count(), 1);
        assert!(m.is_thin());
        assert_eq!(m.shape_code().as_str(), "(••)");
        assert!(m.merge_equivalent(&m));
    }

    #[test]
    fn single_edge_induces_cherry() {
        let tree = Arc::new(SimplicialTree::new(["u", "v"], [("u", "v")]).unwrap());
        let f = MorseFunction::new(tree, vec![0., 1.], vec![2.]).unwrap();
        let m = MergeTree::induce(&f);
        let [l, r] = m.children(m.root()).unwrap();
        assert_eq!(m.node(m.root()).value, Some(2.));
        assert_eq!(m.node(l).value, Some(0.));
        assert_eq!(m.node(r).value, Some(1.));
        assert_eq!(m.node(l).direction, Direction::L);
    }

    #[test]
    fn no_critical_edge_gives_a_single_node() {
        let tree = Arc::new(SimplicialTree::new(["u", "v"], [("u", "v")]).unwrap());
        let f = MorseFunction::new(tree, vec![0., 1.], vec![1.]).unwrap();
        let m = MergeTree::induce(&f);
        assert_eq!(m.len(), 1);
        assert_eq!(m.node(0).value, Some(0.));
        assert_eq!(m.node(0).direction, Direction::L);
        assert_eq!(m.impasse_count(), 0);
        assert_eq!(m.shape_code().as_str(), "•");
    }

    #[test]
    fn path_functions_give_mirrored_trees() {
        let first = MergeTree::induce(&path_function([0., 1., 2.], [3., 4.]));
        let second = MergeTree::induce(&path_function([0., 1., 2.], [4., 3.]));
        assert_eq!(first.shape_code().as_str(), "((••)•)");
        assert_eq!(second.shape_code().as_str(), "(•(••))");
        assert!(!first.merge_equivalent(&second));

        let [l, r] = first.children(first.root()).unwrap();
        assert_eq!(first.node(l).value, Some(3.));
        assert_eq!(first.node(r).value, Some(2.));
        let [ll, lr] = first.children(l).unwrap();
        assert_eq!(first.node(ll).value, Some(0.));
        assert_eq!(first.node(lr).value, Some(1.));
    }

    #[test]
    fn paired_simplices_are_skipped() {
        // v1 is paired with e01; the critical simplices are v0, v2, e12.
        let m = MergeTree::induce(&path_function([0., 1., 2.], [1., 3.]));
        assert_eq!(m.len(), 3);
        let [l, r] = m.children(m.root()).unwrap();
        assert_eq!(m.node(l).value, Some(0.));
        assert_eq!(m.node(r).value, Some(2.));
    }

    #[test]
    fn dot_lists_left_before_right() {
        let dot = cherry().to_dot();
        let left = dot.find("label=\"L\"").unwrap();
        let right = dot.find("label=\"R\"").unwrap();
        assert!(left < right);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("[label=\"2\"]"));
    }

    #[test]
    fn text_listing() {
        assert_eq!(cherry().to_text(), "2 L\n  0 L\n  1 R\n");
    }

    #[test]
    fn malformed_shape_codes() {
        for bad in [
            "",
            "(•)",
            "(•••)",
            "••",
            "(••",
            "••)",
            "(x•)",
            "((••)",
            "(••)•",
        ] {
            assert!(bad.parse::<ShapeCode>().is_err(), "{bad}");
        }
        for good in ["•", "(••)", "((••)(••))", "(•(•(••)))"] {
            assert!(good.parse::<ShapeCode>().is_ok(), "{good}");
        }
    }

    fn arb_tree() -> impl Strategy<Value = MergeTree> {
        let leaf = Just(MergeTree::leaf(None));
        leaf.prop_recursive(8, 64, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| MergeTree::join(None, l, r))
        })
    }

    proptest! {
        #[test]
        fn shape_code_round_trips(tree in arb_tree()) {
            let code = tree.shape_code();
            let reparsed: ShapeCode = code.as_str().parse().unwrap();
            let decoded = reparsed.to_tree();
            prop_assert!(decoded.is_well_formed());
            prop_assert_eq!(decoded.shape_code(), code);
            prop_assert!(tree.impasse_count() >= usize::from(tree.len() > 1));
        }
    }
}
