//! Equivalence relations between discrete Morse functions: Forman
//! (gradient fields), homological (Betti numbers along the critical
//! values), persistence (0-dimensional sublevel diagrams) and merge
//! (induced merge tree shape).

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::merge_tree::MergeTree;
use crate::morse::MorseFunction;
use crate::tree::SimplexId;
use crate::union_find::UnionFind;
use crate::util::format_value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("DomainMismatch: the functions are defined on different trees")]
    DomainMismatch,
}

/// Forman equivalence: equal gradient vector fields on the same tree.
pub fn forman_equivalent(f: &MorseFunction, g: &MorseFunction) -> Result<bool, EquivalenceError> {
    if f.tree() != g.tree() {
        return Err(EquivalenceError::DomainMismatch);
    }
    Ok(f.gradient_vector_field() == g.gradient_vector_field())
}

pub fn merge_equivalent(f: &MorseFunction, g: &MorseFunction) -> bool {
    MergeTree::induce(f).merge_equivalent(&MergeTree::induce(g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Betti {
    pub b0: usize,
    pub b1: usize,
}

/// Betti numbers of the level subcomplex at each critical value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologicalSequence(pub Vec<Betti>);

impl HomologicalSequence {
    pub fn b0(&self) -> Vec<usize> {
        self.0.iter().map(|b| b.b0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for HomologicalSequence {
    /// The `b0` sequence, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.b0.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Sweeps the simplices in filtration order, recording `(b0, b1)` once all
/// simplices valued at most the current critical value are in.
pub fn homological_sequence(f: &MorseFunction) -> HomologicalSequence {
    let tree = f.tree();
    let order = f.simplices_by_value();
    let mut uf = UnionFind::new(tree.vertex_count());
    let (mut vertices, mut edges, mut components) = (0usize, 0usize, 0usize);
    let mut out = Vec::new();
    for (i, &s) in order.iter().enumerate() {
        match s {
            SimplexId::Vertex(_) => {
                vertices += 1;
                components += 1;
            }
            SimplexId::Edge(e) => {
                edges += 1;
                let [a, b] = tree.endpoints(e);
                if uf.union(a, b) {
                    components -= 1;
                }
            }
        }
        let closes_level = order
            .get(i + 1)
            .is_none_or(|&next| f.value(next) != f.value(s));
        if closes_level && f.is_critical(s) {
            out.push(Betti {
                b0: components,
                b1: edges + components - vertices,
            });
        }
    }
    HomologicalSequence(out)
}

/// Equality of homological sequences; the domains may differ.
pub fn homologically_equivalent(f: &MorseFunction, g: &MorseFunction) -> bool {
    homological_sequence(f) == homological_sequence(g)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    /// `f64::INFINITY` for the essential class.
    pub death: f64,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }
}

/// Dimension-0 sublevel persistence diagram, pairs sorted by birth then
/// death.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram {
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn new(mut pairs: Vec<PersistencePair>) -> Self {
        pairs.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
        });
        PersistenceDiagram { pairs }
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn finite_pairs(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| !p.is_essential())
    }

    /// One `birth death` line per pair, `inf` for an infinite death.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            writeln!(out, "{} {}", format_value(p.birth), format_value(p.death)).unwrap();
        }
        out
    }
}

impl fmt::Display for PersistenceDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|p| format!("({},{})", format_value(p.birth), format_value(p.death)))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Elder-rule persistence of the sublevel filtration.
///
/// Every vertex opens a component born at its value. An edge joining two
/// components kills the one with the larger birth at the edge's value;
/// zero-length pairs (a vertex and the edge it is paired with) are dropped.
pub fn persistence_diagram(f: &MorseFunction) -> PersistenceDiagram {
    let tree = f.tree();
    let mut uf = UnionFind::new(tree.vertex_count());
    let mut birth = f.vertex_values().to_vec();
    let mut pairs = Vec::new();
    for s in f.simplices_by_value() {
        let SimplexId::Edge(e) = s else { continue };
        let [a, b] = tree.endpoints(e);
        let (ra, rb) = (uf.find(a), uf.find(b));
        let (older, younger) = (birth[ra].min(birth[rb]), birth[ra].max(birth[rb]));
        assert!(older < younger, "components never share a birth value");
        let (survivor, _) = uf
            .union_roots(ra, rb)
            .expect("tree edges join distinct components");
        birth[survivor] = older;
        let death = f.edge_values()[e];
        if younger < death {
            pairs.push(PersistencePair {
                birth: younger,
                death,
            });
        }
    }
    let global_min = f
        .vertex_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    pairs.push(PersistencePair {
        birth: global_min,
        death: f64::INFINITY,
    });
    PersistenceDiagram::new(pairs)
}

pub fn persistence_equivalent(f: &MorseFunction, g: &MorseFunction) -> bool {
    persistence_diagram(f) == persistence_diagram(g)
}
