//! Thin merge trees and their realization on star graphs.
//!
//! A thin merge tree has a single impasse, so it is a spine running from the
//! root to the impasse with one leaf hanging off every spine node. The spine
//! is recorded as an LR sequence: entry 0 is always `L` and entry `i >= 1`
//! says which child of the `i`-th spine node continues the spine.
//!
//! Every critical discrete Morse function on a star with `k` edges induces a
//! thin merge tree with `k` internal nodes, and [`realize_on_star`] inverts
//! this: it labels a star so that the induced tree is a given thin tree.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::merge_tree::{Direction, MergeTree, NodeId};
use crate::morse::MorseFunction;
use crate::tree::SimplicialTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error("NotThin: the merge tree has {0} impasses, a thin tree has exactly one")]
    NotThin(usize),
    #[error("MalformedSequence: {0}")]
    MalformedSequence(String),
}

/// A leading `L` for the root followed by the spine turns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LrSequence(Vec<Direction>);

impl LrSequence {
    /// Builds a sequence from the turns after entry 0.
    pub fn from_turns(turns: impl IntoIterator<Item = Direction>) -> Self {
        let mut seq = vec![Direction::L];
        seq.extend(turns);
        LrSequence(seq)
    }

    /// Full sequence; entry 0 must be `L`.
    pub fn from_entries(entries: Vec<Direction>) -> Result<Self, StarError> {
        match entries.first() {
            Some(Direction::L) => Ok(LrSequence(entries)),
            Some(Direction::R) => Err(StarError::MalformedSequence(
                "entry 0 must be L".to_string(),
            )),
            None => Err(StarError::MalformedSequence("empty sequence".to_string())),
        }
    }

    pub fn entries(&self) -> &[Direction] {
        &self.0
    }

    /// Entries after index 0.
    pub fn turns(&self) -> &[Direction] {
        &self.0[1..]
    }

    /// Internal nodes of the corresponding thin tree.
    pub fn internal_nodes(&self) -> usize {
        self.0.len()
    }

    /// Compact form without entry 0, e.g. `LRRL`.
    pub fn compact(&self) -> String {
        self.turns().iter().map(|d| d.to_string()).collect()
    }
}

impl fmt::Display for LrSequence {
    /// `(L)LRRL` notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L){}", self.compact())
    }
}

impl FromStr for LrSequence {
    type Err = StarError;

    /// Accepts the compact form (`LRRL`, empty for the one-node spine) and
    /// the parenthesised form (`(L)LRRL`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix("(L)").unwrap_or(body);
        let turns = body
            .chars()
            .map(|c| match c {
                'L' => Ok(Direction::L),
                'R' => Ok(Direction::R),
                other => Err(StarError::MalformedSequence(format!(
                    "unexpected character `{other}` in `{s}`"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_turns(turns))
    }
}

/// Spine nodes from the root to the impasse.
fn spine(m: &MergeTree) -> Result<Vec<NodeId>, StarError> {
    let impasses = m.impasse_count();
    if impasses != 1 {
        return Err(StarError::NotThin(impasses));
    }
    let mut path = vec![m.root()];
    let mut current = m.root();
    while let Some([l, r]) = m.children(current) {
        current = match (m.is_leaf(l), m.is_leaf(r)) {
            (true, true) => break,
            (false, true) => l,
            (true, false) => r,
            (false, false) => unreachable!("a thin tree has no branching spine node"),
        };
        path.push(current);
    }
    Ok(path)
}

pub fn lr_sequence(m: &MergeTree) -> Result<LrSequence, StarError> {
    let path = spine(m)?;
    let turns = path.windows(2).map(|w| m.node(w[1]).direction);
    Ok(LrSequence::from_turns(turns))
}

/// The thin merge tree whose spine follows `seq`.
pub fn thin_from_lr(seq: &LrSequence) -> MergeTree {
    let mut tree = MergeTree::join(None, MergeTree::leaf(None), MergeTree::leaf(None));
    for &turn in seq.turns().iter().rev() {
        tree = match turn {
            Direction::L => MergeTree::join(None, tree, MergeTree::leaf(None)),
            Direction::R => MergeTree::join(None, MergeTree::leaf(None), tree),
        };
    }
    tree
}

/// All `2^(n-1)` thin merge trees with `n >= 1` internal nodes, in the
/// binary order of their turn sequences (`L` before `R`).
pub fn enumerate_thin(n: usize) -> Vec<MergeTree> {
    assert!(n >= 1, "a thin merge tree has at least one internal node");
    let turns = n - 1;
    (0u64..1 << turns)
        .map(|bits| {
            let seq = LrSequence::from_turns((0..turns).map(|i| {
                if bits >> (turns - 1 - i) & 1 == 0 {
                    Direction::L
                } else {
                    Direction::R
                }
            }));
            thin_from_lr(&seq)
        })
        .collect()
}

/// Number of merge-equivalence classes realized by critical functions on
/// the star with `k >= 1` edges.
pub fn count_realizable_on_star(k: u32) -> u64 {
    assert!(k >= 1, "a star has at least one edge");
    1u64 << (k - 1)
}

/// A star: one centre joined to every other vertex.
#[derive(Clone, Debug)]
pub struct StarGraph {
    tree: Arc<SimplicialTree>,
    center: usize,
}

impl StarGraph {
    pub fn tree(&self) -> &Arc<SimplicialTree> {
        &self.tree
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn edge_count(&self) -> usize {
        self.tree.edge_count()
    }
}

/// Builds a star and a critical discrete Morse function on it whose induced
/// merge tree has the same LR sequence as `m`.
///
/// Labels are `0..2k`, vertices first. The spine runs from the root to the
/// impasse and the turn into the root counts as `L`. The leaves at the
/// turning spine nodes get the smallest labels, root side first; the next
/// label goes to the left leaf of the impasse and to the star's centre. The
/// remaining leaves are labelled walking from the impasse to the root, and
/// then the internal nodes along the same walk. Each star edge takes the
/// label of the internal node above the leaf matching its outer vertex.
///
/// Vertices are named `v{label}`.
pub fn realize_on_star(m: &MergeTree) -> Result<(StarGraph, MorseFunction), StarError> {
    let path = spine(m)?;
    let seq = lr_sequence(m)?;
    let p = path.len();
    let k = p;

    // The leaf child of each spine node; the impasse has two.
    let hanging_leaf = |id: NodeId| -> NodeId {
        let [l, r] = m.children(id).expect("spine nodes are internal");
        if m.is_leaf(l) {
            l
        } else {
            r
        }
    };
    let impasse = path[p - 1];
    let [impasse_left, impasse_right] = m.children(impasse).unwrap();

    let mut leaf_label = vec![usize::MAX; m.len()];
    let mut next = 0usize;
    let entries = seq.entries();
    for i in 1..p {
        // entries[i] leads from path[i - 1] to path[i]; a change relative to
        // the previous entry marks path[i - 1] as a turning node.
        if entries[i] != entries[i - 1] {
            leaf_label[hanging_leaf(path[i - 1])] = next;
            next += 1;
        }
    }
    // With a single internal node the centre takes the larger vertex label.
    let (left_slot, right_slot) = if p == 1 { (1, 0) } else { (next, next + 1) };
    let center_label = left_slot;
    leaf_label[impasse_left] = left_slot;
    leaf_label[impasse_right] = right_slot;
    next += 2;
    for &id in path[..p - 1].iter().rev() {
        let leaf = hanging_leaf(id);
        if leaf_label[leaf] == usize::MAX {
            leaf_label[leaf] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, k + 1);

    let mut node_label = vec![usize::MAX; m.len()];
    for &id in path.iter().rev() {
        node_label[id] = next;
        next += 1;
    }

    // Star leaves in label order; each outer vertex hangs below one spine node.
    let mut outer: Vec<(usize, usize)> = Vec::with_capacity(k);
    outer.push((leaf_label[impasse_right], node_label[impasse]));
    for &id in &path[..p - 1] {
        outer.push((leaf_label[hanging_leaf(id)], node_label[id]));
    }
    outer.sort_unstable();

    let name = |label: usize| format!("v{label}");
    let mut vertex_names = vec![name(center_label)];
    vertex_names.extend(outer.iter().map(|&(label, _)| name(label)));
    let edges: Vec<(String, String)> = outer
        .iter()
        .map(|&(label, _)| (name(center_label), name(label)))
        .collect();
    let tree = Arc::new(
        SimplicialTree::new(vertex_names.iter().cloned(), edges)
            .expect("a centre joined to distinct leaves is a tree"),
    );

    let mut vertex_values = vec![center_label as f64];
    vertex_values.extend(outer.iter().map(|&(label, _)| label as f64));
    let edge_values = outer.iter().map(|&(_, edge)| edge as f64).collect();
    let f = MorseFunction::new(Arc::clone(&tree), vertex_values, edge_values)
        .expect("labels increase from vertices to edges and are distinct");
    Ok((StarGraph { tree, center: 0 }, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn parse_and_print() {
        let seq: LrSequence = "LRRL".parse().unwrap();
        assert_eq!(seq.internal_nodes(), 5);
        assert_eq!(seq.to_string(), "(L)LRRL");
        assert_eq!(seq.compact(), "LRRL");
        assert_eq!("(L)LRRL".parse::<LrSequence>().unwrap(), seq);
        assert_eq!("".parse::<LrSequence>().unwrap().internal_nodes(), 1);
        assert!(matches!(
            "LXR".parse::<LrSequence>(),
            Err(StarError::MalformedSequence(_))
        ));
        assert!(LrSequence::from_entries(vec![Direction::R]).is_err());
        assert!(LrSequence::from_entries(vec![]).is_err());
    }

    #[test]
    fn cherry_is_the_trivial_sequence() {
        let cherry = thin_from_lr(&LrSequence::from_turns([]));
        assert_eq!(cherry.shape_code().as_str(), "(••)");
        assert_eq!(lr_sequence(&cherry).unwrap().compact(), "");
    }

    #[test]
    fn non_thin_is_rejected() {
        let two = MergeTree::join(
            None,
            thin_from_lr(&LrSequence::from_turns([])),
            thin_from_lr(&LrSequence::from_turns([])),
        );
        assert_eq!(lr_sequence(&two), Err(StarError::NotThin(2)));
        assert!(matches!(realize_on_star(&two), Err(StarError::NotThin(2))));
        assert_eq!(
            lr_sequence(&MergeTree::leaf(None)),
            Err(StarError::NotThin(0))
        );
    }

    #[test]
    fn thin_enumeration_sizes() {
        assert_eq!(enumerate_thin(1).len(), 1);
        assert_eq!(enumerate_thin(3).len(), 4);
        let five = enumerate_thin(5);
        let codes: HashSet<_> = five.iter().map(|t| t.shape_code()).collect();
        assert_eq!(codes.len(), 16);
        assert!(five.iter().all(|t| t.is_thin() && t.internal_count() == 5));
    }

    #[test]
    fn lr_round_trip_for_every_length_five_sequence() {
        for tree in enumerate_thin(5) {
            let seq = lr_sequence(&tree).unwrap();
            assert_eq!(thin_from_lr(&seq), tree);
        }
    }

    #[test]
    fn star_counts() {
        assert_eq!(count_realizable_on_star(1), 1);
        assert_eq!(count_realizable_on_star(5), 16);
    }

    #[test]
    fn one_edge_star() {
        let cherry = thin_from_lr(&LrSequence::from_turns([]));
        let (star, f) = realize_on_star(&cherry).unwrap();
        assert_eq!(star.edge_count(), 1);
        assert_eq!(f.vertex_values(), [1., 0.]);
        assert_eq!(f.edge_values(), [2.]);
        assert!(MergeTree::induce(&f).merge_equivalent(&cherry));
    }
}
