//! Discrete Morse functions on trees.
//!
//! A function on the simplices of a tree is a discrete Morse function when
//! it is weakly increasing along faces, at most 2-1, and any shared value
//! sits on an incident vertex/edge pair. Simplices with an unshared value are
//! critical; the shared pairs form the gradient vector field.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::tree::{Forest, Simplex, SimplexId, SimplicialTree};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorseError {
    #[error("MissingValue: no value given for simplex {0}")]
    MissingValue(Simplex),
    #[error("UnknownSimplex: {0} is not a simplex of the tree")]
    UnknownSimplex(Simplex),
    #[error("NonFiniteValue: simplex {0} has a non-finite value")]
    NonFiniteValue(Simplex),
    #[error("LengthMismatch: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("NotWeaklyIncreasing: f({vertex}) = {vertex_value} exceeds f({edge}) = {edge_value}")]
    NotWeaklyIncreasing {
        vertex: Simplex,
        edge: Simplex,
        vertex_value: f64,
        edge_value: f64,
    },
    #[error("ValueSharedByNonIncident: {0} and {1} share the value {2} but neither is a face of the other")]
    ValueSharedByNonIncident(Simplex, Simplex, f64),
    #[error("MoreThanTwoShareValue: {} simplices share the value {value}", .simplices.len())]
    MoreThanTwoShareValue { value: f64, simplices: Vec<Simplex> },
}

/// A validated discrete Morse function on a tree.
#[derive(Clone, Debug)]
pub struct MorseFunction {
    tree: Arc<SimplicialTree>,
    vertex_values: Vec<f64>,
    edge_values: Vec<f64>,
    vertex_critical: Vec<bool>,
    edge_critical: Vec<bool>,
}

impl MorseFunction {
    /// Validates per-index values: `vertex_values[v]` for vertex `v`,
    /// `edge_values[e]` for edge `e` of `tree`.
    pub fn new(
        tree: Arc<SimplicialTree>,
        vertex_values: Vec<f64>,
        edge_values: Vec<f64>,
    ) -> Result<Self, MorseError> {
        if vertex_values.len() != tree.vertex_count() {
            return Err(MorseError::LengthMismatch {
                expected: tree.vertex_count(),
                got: vertex_values.len(),
            });
        }
        if edge_values.len() != tree.edge_count() {
            return Err(MorseError::LengthMismatch {
                expected: tree.edge_count(),
                got: edge_values.len(),
            });
        }
        let mut f = MorseFunction {
            vertex_critical: vec![true; vertex_values.len()],
            edge_critical: vec![true; edge_values.len()],
            tree,
            vertex_values,
            edge_values,
        };
        f.check()?;
        Ok(f)
    }

    /// Validates a name-keyed assignment covering every simplex of `tree`.
    pub fn from_map(
        tree: Arc<SimplicialTree>,
        values: &HashMap<Simplex, f64>,
    ) -> Result<Self, MorseError> {
        if let Some(unknown) = values.keys().find(|s| tree.simplex_id(s).is_none()) {
            return Err(MorseError::UnknownSimplex(unknown.clone()));
        }
        let lookup = |id: SimplexId| {
            let s = tree.simplex(id);
            values.get(&s).copied().ok_or(MorseError::MissingValue(s))
        };
        let vertex_values = (0..tree.vertex_count())
            .map(|v| lookup(SimplexId::Vertex(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let edge_values = (0..tree.edge_count())
            .map(|e| lookup(SimplexId::Edge(e)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(tree, vertex_values, edge_values)
    }

    fn check(&mut self) -> Result<(), MorseError> {
        let tree = Arc::clone(&self.tree);
        for id in tree.simplex_ids() {
            if !self.value(id).is_finite() {
                return Err(MorseError::NonFiniteValue(tree.simplex(id)));
            }
        }
        for (e, &[a, b]) in tree.edges().iter().enumerate() {
            for v in [a, b] {
                if self.vertex_values[v] > self.edge_values[e] {
                    return Err(MorseError::NotWeaklyIncreasing {
                        vertex: tree.simplex(SimplexId::Vertex(v)),
                        edge: tree.simplex(SimplexId::Edge(e)),
                        vertex_value: self.vertex_values[v],
                        edge_value: self.edge_values[e],
                    });
                }
            }
        }

        let order = self.simplices_by_value();
        let mut start = 0;
        while start < order.len() {
            let value = self.value(order[start]);
            let mut end = start + 1;
            while end < order.len() && self.value(order[end]) == value {
                end += 1;
            }
            match &order[start..end] {
                [_] => {}
                &[SimplexId::Vertex(v), SimplexId::Edge(e)] if tree.endpoints(e).contains(&v) => {
                    self.vertex_critical[v] = false;
                    self.edge_critical[e] = false;
                }
                &[s, t] => {
                    return Err(MorseError::ValueSharedByNonIncident(
                        tree.simplex(s),
                        tree.simplex(t),
                        value,
                    ))
                }
                group => {
                    return Err(MorseError::MoreThanTwoShareValue {
                        value,
                        simplices: group.iter().map(|&s| tree.simplex(s)).collect(),
                    })
                }
            }
            start = end;
        }
        Ok(())
    }

    pub fn tree(&self) -> &Arc<SimplicialTree> {
        &self.tree
    }

    pub fn value(&self, id: SimplexId) -> f64 {
        match id {
            SimplexId::Vertex(v) => self.vertex_values[v],
            SimplexId::Edge(e) => self.edge_values[e],
        }
    }

    pub fn value_of(&self, simplex: &Simplex) -> Option<f64> {
        self.tree.simplex_id(simplex).map(|id| self.value(id))
    }

    pub fn vertex_values(&self) -> &[f64] {
        &self.vertex_values
    }

    pub fn edge_values(&self) -> &[f64] {
        &self.edge_values
    }

    pub fn is_critical(&self, id: SimplexId) -> bool {
        match id {
            SimplexId::Vertex(v) => self.vertex_critical[v],
            SimplexId::Edge(e) => self.edge_critical[e],
        }
    }

    /// True when every simplex is critical, i.e. the function is injective.
    pub fn is_fully_critical(&self) -> bool {
        self.vertex_critical
            .iter()
            .chain(&self.edge_critical)
            .all(|&c| c)
    }

    /// All simplex ids sorted by value, vertices before edges on ties.
    pub fn simplices_by_value(&self) -> Vec<SimplexId> {
        let mut order: Vec<SimplexId> = self.tree.simplex_ids().collect();
        order.sort_by(|&s, &t| self.compare(s, t));
        order
    }

    /// Filtration order: by value, then dimension.
    pub fn compare(&self, s: SimplexId, t: SimplexId) -> Ordering {
        self.value(s)
            .total_cmp(&self.value(t))
            .then(s.dimension().cmp(&t.dimension()))
            .then(s.cmp(&t))
    }

    /// Critical simplex ids in increasing value order.
    pub fn critical_ids(&self) -> Vec<SimplexId> {
        self.simplices_by_value()
            .into_iter()
            .filter(|&s| self.is_critical(s))
            .collect()
    }

    pub fn critical_simplices(&self) -> BTreeSet<Simplex> {
        self.critical_ids()
            .into_iter()
            .map(|s| self.tree.simplex(s))
            .collect()
    }

    /// Critical values `c_0 < c_1 < ... < c_m`.
    pub fn critical_values(&self) -> Vec<f64> {
        self.critical_ids()
            .into_iter()
            .map(|s| self.value(s))
            .collect()
    }

    pub fn critical_vertex_count(&self) -> usize {
        self.vertex_critical.iter().filter(|&&c| c).count()
    }

    pub fn critical_edge_count(&self) -> usize {
        self.edge_critical.iter().filter(|&&c| c).count()
    }

    /// Equal-valued incident pairs `(v, e)` as index pairs.
    pub fn gradient_pairs(&self) -> Vec<(usize, usize)> {
        self.tree
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| !self.edge_critical[e])
            .map(|(e, &[a, b])| {
                let v = if self.vertex_values[a] == self.edge_values[e] {
                    a
                } else {
                    b
                };
                (v, e)
            })
            .collect()
    }

    pub fn gradient_vector_field(&self) -> GradientVectorField {
        let pairs = self
            .gradient_pairs()
            .into_iter()
            .map(|(v, e)| {
                (
                    self.tree.simplex(SimplexId::Vertex(v)),
                    self.tree.simplex(SimplexId::Edge(e)),
                )
            })
            .collect();
        GradientVectorField { pairs }
    }

    /// The level subcomplex of all simplices with value `<= a`.
    pub fn level_subcomplex(&self, a: f64) -> LevelSubcomplex {
        self.sublevel(a, |value| value <= a)
    }

    /// The subcomplex immediately preceding level `c`: all simplices with
    /// value strictly below `c`.
    pub fn level_below(&self, c: f64) -> LevelSubcomplex {
        self.sublevel(c, |value| value < c)
    }

    fn sublevel(&self, threshold: f64, keep: impl Fn(f64) -> bool) -> LevelSubcomplex {
        let keep_vertex: Vec<bool> = self.vertex_values.iter().map(|&x| keep(x)).collect();
        let keep_edge: Vec<bool> = self.edge_values.iter().map(|&x| keep(x)).collect();
        LevelSubcomplex {
            threshold,
            complex: self.tree.subforest(&keep_vertex, &keep_edge),
        }
    }

    /// One level subcomplex per critical value, in increasing order.
    pub fn filtration(&self) -> Vec<(f64, LevelSubcomplex)> {
        self.critical_values()
            .into_iter()
            .map(|c| (c, self.level_subcomplex(c)))
            .collect()
    }
}

/// The set of `(vertex, edge)` pairs carrying equal values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradientVectorField {
    pub pairs: BTreeSet<(Simplex, Simplex)>,
}

impl GradientVectorField {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSubcomplex {
    pub threshold: f64,
    pub complex: Forest,
}

impl LevelSubcomplex {
    pub fn simplex_count(&self) -> usize {
        self.complex.simplex_count()
    }

    pub fn contains(&self, simplex: &Simplex) -> bool {
        self.complex.simplex_id(simplex).is_some()
    }
}
