//! Exhaustive enumeration of critical discrete Morse functions on small
//! trees, used as the ground truth for the structural results.
//!
//! A critical function is an injective labelling that puts every vertex
//! below its incident edges. Up to the order of values it is a linear
//! extension of the face poset, so the oracle enumerates the canonical
//! labellings `0..#simplices` by backtracking over the currently minimal
//! simplices. Nothing here reuses the structure of the merge tree code.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::merge_tree::{MergeTree, ShapeCode};
use crate::morse::MorseFunction;
use crate::tree::{is_matching, SimplexId, SimplicialTree};

/// Largest tree (in simplices) the oracle accepts by default.
pub const DEFAULT_BUDGET: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("BudgetExceeded: the tree has {simplices} simplices, the budget is {budget}")]
    BudgetExceeded { simplices: usize, budget: usize },
}

fn check_budget(tree: &SimplicialTree, budget: usize) -> Result<(), OracleError> {
    let simplices = tree.simplex_count();
    if simplices > budget {
        Err(OracleError::BudgetExceeded { simplices, budget })
    } else {
        Ok(())
    }
}

/// Position of a simplex in the flat numbering: vertices, then edges.
fn flat(tree: &SimplicialTree, id: SimplexId) -> usize {
    match id {
        SimplexId::Vertex(v) => v,
        SimplexId::Edge(e) => tree.vertex_count() + e,
    }
}

/// Iterator over the linear extensions of a tree's face poset, each given
/// as the sequence of flat simplex indices in increasing label order.
pub struct LinearExtensions<'a> {
    tree: &'a SimplicialTree,
    placed: Vec<bool>,
    sequence: Vec<usize>,
    frames: Vec<(Vec<usize>, usize)>,
    fixed_prefix: usize,
    started: bool,
    done: bool,
}

impl<'a> LinearExtensions<'a> {
    pub fn new(tree: &'a SimplicialTree) -> Self {
        let n = tree.simplex_count();
        LinearExtensions {
            tree,
            placed: vec![false; n],
            sequence: Vec::with_capacity(n),
            frames: Vec::with_capacity(n),
            fixed_prefix: 0,
            started: false,
            done: false,
        }
    }

    /// Only the extensions whose smallest simplex is vertex `v`.
    pub fn starting_with(tree: &'a SimplicialTree, v: usize) -> Self {
        let mut it = Self::new(tree);
        it.placed[v] = true;
        it.sequence.push(v);
        it.fixed_prefix = 1;
        it
    }

    fn available(&self) -> Vec<usize> {
        let nv = self.tree.vertex_count();
        let mut out: Vec<usize> = (0..nv).filter(|&v| !self.placed[v]).collect();
        out.extend(
            self.tree
                .edges()
                .iter()
                .enumerate()
                .filter(|&(e, &[a, b])| !self.placed[nv + e] && self.placed[a] && self.placed[b])
                .map(|(e, _)| nv + e),
        );
        out
    }

    fn descend(&mut self) {
        while self.sequence.len() < self.placed.len() {
            let candidates = self.available();
            let first = candidates[0];
            self.placed[first] = true;
            self.sequence.push(first);
            self.frames.push((candidates, 0));
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((candidates, cursor)) = self.frames.last_mut() {
            let current = candidates[*cursor];
            self.placed[current] = false;
            self.sequence.pop();
            *cursor += 1;
            if let Some(&next) = candidates.get(*cursor) {
                self.placed[next] = true;
                self.sequence.push(next);
                return true;
            }
            self.frames.pop();
        }
        false
    }
}

impl Iterator for LinearExtensions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
            if self.placed.is_empty() {
                self.done = true;
                return None;
            }
        }
        self.descend();
        debug_assert!(self.sequence.len() >= self.fixed_prefix);
        Some(self.sequence.clone())
    }
}

/// A bijection from simplices to `0..#simplices` respecting the face order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalLabeling {
    /// Label per flat simplex index.
    pub labels: Vec<usize>,
}

impl CanonicalLabeling {
    pub fn from_sequence(sequence: &[usize]) -> Self {
        let mut labels = vec![0; sequence.len()];
        for (label, &s) in sequence.iter().enumerate() {
            labels[s] = label;
        }
        CanonicalLabeling { labels }
    }

    pub fn to_function(&self, tree: &Arc<SimplicialTree>) -> MorseFunction {
        let nv = tree.vertex_count();
        let values: Vec<f64> = self.labels.iter().map(|&l| l as f64).collect();
        MorseFunction::new(
            Arc::clone(tree),
            values[..nv].to_vec(),
            values[nv..].to_vec(),
        )
        .expect("a linear extension of the face poset is a critical Morse function")
    }

    /// `name=label` pairs, vertices then edges.
    pub fn describe(&self, tree: &SimplicialTree) -> String {
        tree.simplex_ids()
            .map(|id| format!("{}={}", tree.simplex(id), self.labels[flat(tree, id)]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Every critical discrete Morse function on `tree` with canonical labels.
pub fn enumerate_critical_dmfs(
    tree: &Arc<SimplicialTree>,
    budget: usize,
) -> Result<impl Iterator<Item = MorseFunction> + '_, OracleError> {
    check_budget(tree, budget)?;
    Ok(LinearExtensions::new(tree)
        .map(move |seq| CanonicalLabeling::from_sequence(&seq).to_function(tree)))
}

/// Runs `visit` over every critical function, partitioned by the vertex
/// carrying label 0, and merges the per-partition results with `merge`.
fn fold_partitioned<T, V, M>(tree: &Arc<SimplicialTree>, init: T, visit: V, merge: M) -> T
where
    T: Send + Sync + Clone,
    V: Fn(&mut T, &[usize]) + Sync,
    M: Fn(T, T) -> T + Sync,
{
    (0..tree.vertex_count())
        .into_par_iter()
        .map(|v| {
            let mut acc = init.clone();
            for seq in LinearExtensions::starting_with(tree, v) {
                visit(&mut acc, &seq);
            }
            acc
        })
        .reduce(|| init.clone(), &merge)
}

/// Number of critical functions (linear extensions of the face poset).
pub fn count_critical_dmfs(tree: &Arc<SimplicialTree>, budget: usize) -> Result<u64, OracleError> {
    check_budget(tree, budget)?;
    Ok(fold_partitioned(tree, 0u64, |n, _| *n += 1, |a, b| a + b))
}

/// Shape codes of the merge trees induced by all critical functions.
pub fn merge_class_codes(
    tree: &Arc<SimplicialTree>,
    budget: usize,
) -> Result<BTreeSet<ShapeCode>, OracleError> {
    check_budget(tree, budget)?;
    Ok(fold_partitioned(
        tree,
        BTreeSet::new(),
        |codes, seq| {
            let f = CanonicalLabeling::from_sequence(seq).to_function(tree);
            codes.insert(MergeTree::induce(&f).shape_code());
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    ))
}

pub fn count_merge_classes(
    tree: &Arc<SimplicialTree>,
    budget: usize,
) -> Result<usize, OracleError> {
    merge_class_codes(tree, budget).map(|codes| codes.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    /// First failing labelling, when any.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub functions: u64,
    pub matching_number: usize,
    pub min_impasses: usize,
    pub max_impasses: usize,
    pub properties: Vec<PropertyTally>,
}

impl InvariantReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyTally> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Plain-text table, one property per row.
    pub fn to_text(&self) -> String {
        let width = self
            .properties
            .iter()
            .map(|p| p.name.len())
            .max()
            .unwrap_or(8)
            .max(8);
        let mut out = String::new();
        writeln!(out, "functions: {}", self.functions).unwrap();
        writeln!(out, "matching number: {}", self.matching_number).unwrap();
        writeln!(
            out,
            "impasses: min {} max {}",
            self.min_impasses, self.max_impasses
        )
        .unwrap();
        writeln!(
            out,
            "{:width$}  {:>10}  {:>10}",
            "property", "checked", "failed"
        )
        .unwrap();
        for p in &self.properties {
            writeln!(
                out,
                "{:width$}  {:>10}  {:>10}",
                p.name, p.checked, p.failed
            )
            .unwrap();
            if let Some(w) = &p.witness {
                writeln!(out, "  witness: {w}").unwrap();
            }
        }
        out
    }
}

pub const FULL_BINARY: &str = "merge tree is full binary";
pub const NODE_CENSUS: &str = "nodes match critical simplices";
pub const HAS_IMPASSE: &str = "at least one impasse";
pub const IMPASSE_MATCHING: &str = "impasse edges form a matching";
pub const IMPASSE_BOUND: &str = "impasses <= matching number";
pub const CRITICAL_BALANCE: &str = "critical vertices = critical edges + 1";
pub const DISTINCT_MINIMA: &str = "component minima never tie";

const PROPERTIES: [&str; 7] = [
    FULL_BINARY,
    NODE_CENSUS,
    HAS_IMPASSE,
    IMPASSE_MATCHING,
    IMPASSE_BOUND,
    CRITICAL_BALANCE,
    DISTINCT_MINIMA,
];

#[derive(Clone)]
struct Tally {
    functions: u64,
    min_impasses: usize,
    max_impasses: usize,
    failed: [u64; PROPERTIES.len()],
    witness: [Option<String>; PROPERTIES.len()],
}

/// Checks the structural properties of induced merge trees over every
/// critical function on `tree`.
pub fn check_invariants(
    tree: &Arc<SimplicialTree>,
    budget: usize,
) -> Result<InvariantReport, OracleError> {
    check_budget(tree, budget)?;
    let matching = tree.matching_number();
    let init = Tally {
        functions: 0,
        min_impasses: usize::MAX,
        max_impasses: 0,
        failed: [0; PROPERTIES.len()],
        witness: Default::default(),
    };
    let tally = fold_partitioned(
        tree,
        init,
        |t, seq| {
            let labeling = CanonicalLabeling::from_sequence(seq);
            let f = labeling.to_function(tree);
            let (m, steps) = MergeTree::induce_traced(&f);
            let impasses = m.impasses();
            let impasse_edges: Vec<usize> = impasses
                .iter()
                .filter_map(|&id| match m.node(id).source {
                    Some(SimplexId::Edge(e)) => Some(e),
                    _ => None,
                })
                .collect();
            let outcomes = [
                m.is_well_formed(),
                m.len() == f.critical_values().len()
                    && m.leaf_count() == f.critical_vertex_count()
                    && m.internal_count() == f.critical_edge_count(),
                m.len() == 1 || !impasses.is_empty(),
                impasse_edges.len() == impasses.len() && is_matching(tree, &impasse_edges),
                impasses.len() <= matching,
                f.critical_vertex_count() == f.critical_edge_count() + 1,
                steps.iter().all(|s| s.minima[0] != s.minima[1]),
            ];
            t.functions += 1;
            t.min_impasses = t.min_impasses.min(impasses.len());
            t.max_impasses = t.max_impasses.max(impasses.len());
            for (i, ok) in outcomes.into_iter().enumerate() {
                if !ok {
                    t.failed[i] += 1;
                    t.witness[i].get_or_insert_with(|| labeling.describe(tree));
                }
            }
        },
        |mut a, b| {
            a.functions += b.functions;
            a.min_impasses = a.min_impasses.min(b.min_impasses);
            a.max_impasses = a.max_impasses.max(b.max_impasses);
            for i in 0..PROPERTIES.len() {
                a.failed[i] += b.failed[i];
                if a.witness[i].is_none() {
                    a.witness[i] = b.witness[i].clone();
                }
            }
            a
        },
    );
    Ok(InvariantReport {
        functions: tally.functions,
        matching_number: matching,
        min_impasses: if tally.functions == 0 {
            0
        } else {
            tally.min_impasses
        },
        max_impasses: tally.max_impasses,
        properties: PROPERTIES
            .iter()
            .enumerate()
            .map(|(i, name)| PropertyTally {
                name: name.to_string(),
                checked: tally.functions,
                failed: tally.failed[i],
                witness: tally.witness[i].clone(),
            })
            .collect(),
    })
}

/// Maximum matching by trying every edge subset.
pub fn matching_number_brute_force(tree: &SimplicialTree) -> usize {
    let m = tree.edge_count();
    assert!(m < 32, "brute force is limited to small trees");
    (0u32..1 << m)
        .filter_map(|mask| {
            let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            is_matching(tree, &edges).then_some(edges.len())
        })
        .max()
        .unwrap_or(0)
}

/// Linear extensions counted by testing every permutation of the simplices.
pub fn count_linear_extensions_naive(tree: &SimplicialTree) -> u64 {
    fn visit(tree: &SimplicialTree, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> u64 {
        let n = used.len();
        if perm.len() == n {
            let mut position = vec![0; n];
            for (i, &s) in perm.iter().enumerate() {
                position[s] = i;
            }
            let nv = tree.vertex_count();
            let ok = tree.edges().iter().enumerate().all(|(e, &[a, b])| {
                position[a] < position[nv + e] && position[b] < position[nv + e]
            });
            return u64::from(ok);
        }
        let mut total = 0;
        for s in 0..n {
            if !used[s] {
                used[s] = true;
                perm.push(s);
                total += visit(tree, perm, used);
                perm.pop();
                used[s] = false;
            }
        }
        total
    }
    let n = tree.simplex_count();
    visit(tree, &mut Vec::with_capacity(n), &mut vec![false; n])
}

/// Isomorphism-invariant encoding of an unrooted tree: the nested-bracket
/// encoding rooted at the centre, the smaller one when there are two
/// centres.
pub fn tree_canonical_form(tree: &SimplicialTree) -> String {
    let n = tree.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &(w, _) in tree.neighbours(v) {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    fn encode(tree: &SimplicialTree, v: usize, parent: usize) -> String {
        let mut parts: Vec<String> = tree
            .neighbours(v)
            .iter()
            .filter(|&&(w, _)| w != parent)
            .map(|&(w, _)| encode(tree, w, v))
            .collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    layer
        .iter()
        .map(|&c| encode(tree, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

/// One representative of every isomorphism class of trees on `n >= 1`
/// vertices, named `v0..v{n-1}`.
///
/// Every tree on `m` vertices is a tree on `m - 1` vertices plus a leaf, so
/// the classes are grown one vertex at a time and deduplicated by canonical
/// form.
pub fn all_trees(n: usize) -> Vec<SimplicialTree> {
    assert!(n >= 1, "a tree has at least one vertex");
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let build = |m: usize, edges: &[(usize, usize)]| {
        SimplicialTree::new(
            names[..m].iter().cloned(),
            edges
                .iter()
                .map(|&(a, b)| (names[a].clone(), names[b].clone())),
        )
        .expect("adding a leaf to a tree gives a tree")
    };
    let mut classes: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for m in 2..=n {
        let mut seen = HashSet::new();
        let mut grown = Vec::new();
        for edges in &classes {
            for v in 0..m - 1 {
                let mut next = edges.clone();
                next.push((v, m - 1));
                if seen.insert(tree_canonical_form(&build(m, &next))) {
                    grown.push(next);
                }
            }
        }
        classes = grown;
    }
    classes.iter().map(|edges| build(n, edges)).collect()
}

/// Shape codes of all thin trees with `k` internal nodes, keyed for
/// comparison with the classes realised on a star.
pub fn thin_codes(k: usize) -> BTreeSet<ShapeCode> {
    crate::star::enumerate_thin(k)
        .iter()
        .map(MergeTree::shape_code)
        .collect()
}

/// Class sizes: how many critical functions induce each shape.
pub fn merge_class_histogram(
    tree: &Arc<SimplicialTree>,
    budget: usize,
) -> Result<HashMap<ShapeCode, u64>, OracleError> {
    check_budget(tree, budget)?;
    Ok(fold_partitioned(
        tree,
        HashMap::new(),
        |hist, seq| {
            let f = CanonicalLabeling::from_sequence(seq).to_function(tree);
            *hist.entry(MergeTree::induce(&f).shape_code()).or_insert(0) += 1;
        },
        |mut a, b| {
            for (code, n) in b {
                *a.entry(code).or_insert(0) += n;
            }
            a
        },
    ))
}
