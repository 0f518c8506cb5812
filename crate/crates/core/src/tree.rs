//! Trees and forests viewed as 1-dimensional simplicial complexes.
//!
//! Vertices carry opaque string names; internally everything is indexed by
//! position so the hot paths (merge tree construction, enumeration) never
//! touch strings. Edges keep their endpoints sorted by index.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::union_find::UnionFind;

/// Index of a simplex inside a particular complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimplexId {
    Vertex(usize),
    Edge(usize),
}

impl SimplexId {
    pub fn dimension(self) -> usize {
        match self {
            SimplexId::Vertex(_) => 0,
            SimplexId::Edge(_) => 1,
        }
    }
}

/// A simplex identified by vertex names, stable across complexes.
///
/// Edge endpoints are stored in lexicographic order so that two edges are
/// equal exactly when their endpoint sets are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Simplex {
    Vertex(String),
    Edge(String, String),
}

impl Simplex {
    pub fn vertex(name: impl Into<String>) -> Self {
        Simplex::Vertex(name.into())
    }

    pub fn edge(u: impl Into<String>, v: impl Into<String>) -> Self {
        let (u, v) = (u.into(), v.into());
        if u <= v {
            Simplex::Edge(u, v)
        } else {
            Simplex::Edge(v, u)
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, Simplex::Vertex(_))
    }

    /// Face relation: `self ⊆ other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        match (self, other) {
            (Simplex::Vertex(v), Simplex::Edge(a, b)) => v == a || v == b,
            _ => self == other,
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Simplex::Vertex(v) => write!(f, "{v}"),
            Simplex::Edge(u, v) => write!(f, "{u}-{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("EmptyTree: a tree needs at least one vertex")]
    Empty,
    #[error("DuplicateVertex: vertex `{0}` is declared twice")]
    DuplicateVertex(String),
    #[error("UnknownVertex: `{0}` is not a vertex of the complex")]
    UnknownVertex(String),
    #[error("Loop: edge ({0}, {0}) joins a vertex to itself")]
    Loop(String),
    #[error("MultiEdge: edge ({0}, {1}) is declared more than once")]
    MultiEdge(String, String),
    #[error("CycleDetected: edge ({0}, {1}) closes a cycle")]
    CycleDetected(String, String),
    #[error("NotConnected: {components} components, a tree has |V| = |E| + 1 and one component")]
    NotConnected { components: usize },
}

/// A finite acyclic simple graph.
#[derive(Clone, Debug)]
pub struct Forest {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
    edges: Vec<[usize; 2]>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for Forest {
    /// Equality of simplex sets; declaration order is irrelevant.
    fn eq(&self, other: &Self) -> bool {
        self.simplex_set() == other.simplex_set()
    }
}

impl Eq for Forest {}

impl Forest {
    pub fn new<S, I, E>(vertices: I, edges: E) -> Result<Self, TreeError>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
    {
        let mut names = Vec::new();
        let mut lookup = HashMap::new();
        for v in vertices {
            let v = v.as_ref().to_string();
            if lookup.insert(v.clone(), names.len()).is_some() {
                return Err(TreeError::DuplicateVertex(v));
            }
            names.push(v);
        }

        let mut indexed = Vec::new();
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let iu = *lookup
                .get(u)
                .ok_or_else(|| TreeError::UnknownVertex(u.to_string()))?;
            let iv = *lookup
                .get(v)
                .ok_or_else(|| TreeError::UnknownVertex(v.to_string()))?;
            if iu == iv {
                return Err(TreeError::Loop(u.to_string()));
            }
            indexed.push([iu.min(iv), iu.max(iv)]);
        }
        Self::from_indexed(names, lookup, indexed)
    }

    fn from_indexed(
        names: Vec<String>,
        lookup: HashMap<String, usize>,
        edges: Vec<[usize; 2]>,
    ) -> Result<Self, TreeError> {
        let mut seen = std::collections::HashSet::new();
        for &[a, b] in &edges {
            if !seen.insert([a, b]) {
                return Err(TreeError::MultiEdge(names[a].clone(), names[b].clone()));
            }
        }
        let mut uf = UnionFind::new(names.len());
        for &[a, b] in &edges {
            if !uf.union(a, b) {
                return Err(TreeError::CycleDetected(names[a].clone(), names[b].clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); names.len()];
        for (e, &[a, b]) in edges.iter().enumerate() {
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        Ok(Forest {
            names,
            lookup,
            edges,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn simplex_count(&self) -> usize {
        self.names.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn edge_index(&self, u: &str, v: &str) -> Option<usize> {
        let (iu, iv) = (self.vertex_index(u)?, self.vertex_index(v)?);
        self.adjacency[iu]
            .iter()
            .find(|&&(w, _)| w == iv)
            .map(|&(_, e)| e)
    }

    /// `(neighbour, edge)` pairs incident to `v`.
    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn simplex(&self, id: SimplexId) -> Simplex {
        match id {
            SimplexId::Vertex(v) => Simplex::Vertex(self.names[v].clone()),
            SimplexId::Edge(e) => {
                let [a, b] = self.edges[e];
                Simplex::edge(self.names[a].clone(), self.names[b].clone())
            }
        }
    }

    pub fn simplex_id(&self, simplex: &Simplex) -> Option<SimplexId> {
        match simplex {
            Simplex::Vertex(v) => self.vertex_index(v).map(SimplexId::Vertex),
            Simplex::Edge(u, v) => self.edge_index(u, v).map(SimplexId::Edge),
        }
    }

    /// All simplex ids, vertices first.
    pub fn simplex_ids(&self) -> impl Iterator<Item = SimplexId> + '_ {
        (0..self.names.len())
            .map(SimplexId::Vertex)
            .chain((0..self.edges.len()).map(SimplexId::Edge))
    }

    pub fn simplex_set(&self) -> BTreeSet<Simplex> {
        self.simplex_ids().map(|id| self.simplex(id)).collect()
    }

    /// Component label for every vertex plus the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.names.len()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.names.len() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    /// The simplices of the connected component containing `vertex`.
    pub fn component_of(&self, vertex: &str) -> Result<BTreeSet<Simplex>, TreeError> {
        let start = self
            .vertex_index(vertex)
            .ok_or_else(|| TreeError::UnknownVertex(vertex.to_string()))?;
        let mut seen = vec![false; self.names.len()];
        let mut out = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            out.insert(self.simplex(SimplexId::Vertex(v)));
            for &(w, e) in &self.adjacency[v] {
                out.insert(self.simplex(SimplexId::Edge(e)));
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(out)
    }

    /// Sub-forest spanned by the given vertex and edge indices. Edges whose
    /// endpoints are not both kept are dropped.
    pub fn subforest(&self, keep_vertex: &[bool], keep_edge: &[bool]) -> Forest {
        let mut names = Vec::new();
        let mut lookup = HashMap::new();
        let mut remap = vec![usize::MAX; self.names.len()];
        for (v, name) in self.names.iter().enumerate() {
            if keep_vertex[v] {
                remap[v] = names.len();
                lookup.insert(name.clone(), names.len());
                names.push(name.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(e, &[a, b])| keep_edge[e] && keep_vertex[a] && keep_vertex[b])
            .map(|(_, &[a, b])| [remap[a], remap[b]])
            .collect();
        Self::from_indexed(names, lookup, edges).expect("a subgraph of a forest is a forest")
    }
}

/// A connected forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialTree {
    forest: Forest,
}

impl SimplicialTree {
    pub fn new<S, I, E>(vertices: I, edges: E) -> Result<Self, TreeError>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
    {
        Self::from_forest(Forest::new(vertices, edges)?)
    }

    pub fn from_forest(forest: Forest) -> Result<Self, TreeError> {
        if forest.is_empty() {
            return Err(TreeError::Empty);
        }
        let components = forest.component_count();
        if components != 1 {
            return Err(TreeError::NotConnected { components });
        }
        debug_assert_eq!(forest.vertex_count(), forest.edge_count() + 1);
        Ok(SimplicialTree { forest })
    }

    /// Path `v0 - v1 - ... - v{n-1}`.
    pub fn path(n: usize) -> Result<Self, TreeError> {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String)> = names
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        Self::new(names.iter().cloned(), edges)
    }

    /// Star with centre `c` and leaves `l1..lk`.
    pub fn star(k: usize) -> Result<Self, TreeError> {
        let mut names = vec!["c".to_string()];
        names.extend((1..=k).map(|i| format!("l{i}")));
        let edges: Vec<(String, String)> = names[1..]
            .iter()
            .map(|l| ("c".to_string(), l.clone()))
            .collect();
        Self::new(names.iter().cloned(), edges)
    }

    pub fn as_forest(&self) -> &Forest {
        &self.forest
    }

    /// Size of a maximum matching.
    ///
    /// Roots the tree at vertex 0 and sweeps vertices from the deepest
    /// level up, matching each still-free vertex to its free parent. On a
    /// tree this greedy choice is optimal: some maximum matching always
    /// contains the edge from a leaf to its parent.
    pub fn matching_number(&self) -> usize {
        let n = self.vertex_count();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut matched = vec![false; n];
        let mut size = 0;
        for &v in order.iter().rev() {
            let p = parent[v];
            if p != usize::MAX && !matched[v] && !matched[p] {
                matched[v] = true;
                matched[p] = true;
                size += 1;
            }
        }
        size
    }
}

impl std::ops::Deref for SimplicialTree {
    type Target = Forest;

    fn deref(&self) -> &Forest {
        &self.forest
    }
}

/// Whether the given edges are pairwise vertex-disjoint.
pub fn is_matching(tree: &Forest, edges: &[usize]) -> bool {
    let mut used = vec![false; tree.vertex_count()];
    for &e in edges {
        for v in tree.endpoints(e) {
            if used[v] {
                return false;
            }
            used[v] = true;
        }
    }
    true
}
