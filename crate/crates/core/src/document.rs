//! The JSON input document shared by every CLI command.
//!
//! ```json
//! {
//!   "vertices": { "a": 0, "b": 1 },
//!   "edges": [["a", "b", 2]]
//! }
//! ```
//!
//! Vertex values may be `null` and edges may omit their value when only the
//! tree is needed.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::morse::{MorseError, MorseFunction};
use crate::tree::{Simplex, SimplexId, SimplicialTree, TreeError};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("ParseError: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeEntry {
    Valued(String, String, Option<f64>),
    Bare(String, String),
}

impl EdgeEntry {
    pub fn endpoints(&self) -> (&str, &str) {
        match self {
            EdgeEntry::Valued(u, v, _) | EdgeEntry::Bare(u, v) => (u, v),
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            EdgeEntry::Valued(_, _, value) => *value,
            EdgeEntry::Bare(..) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub vertices: IndexMap<String, Option<f64>>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn tree(&self) -> Result<SimplicialTree, DocumentError> {
        Ok(SimplicialTree::new(
            self.vertices.keys().map(String::as_str),
            self.edges.iter().map(EdgeEntry::endpoints),
        )?)
    }

    /// The tree and the validated function given by the document's values.
    pub fn morse_function(&self) -> Result<MorseFunction, DocumentError> {
        let tree = Arc::new(self.tree()?);
        let vertex_values = self
            .vertices
            .iter()
            .map(|(name, value)| {
                value.ok_or_else(|| MorseError::MissingValue(Simplex::vertex(name)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut edge_values = vec![0.0; tree.edge_count()];
        for entry in &self.edges {
            let (u, v) = entry.endpoints();
            let e = tree
                .edge_index(u, v)
                .expect("edges of the document are edges of its tree");
            edge_values[e] = entry
                .value()
                .ok_or_else(|| MorseError::MissingValue(Simplex::edge(u, v)))?;
        }
        Ok(MorseFunction::new(tree, vertex_values, edge_values)?)
    }

    pub fn from_function(f: &MorseFunction) -> Self {
        let tree = f.tree();
        let vertices = (0..tree.vertex_count())
            .map(|v| {
                (
                    tree.vertex_name(v).to_string(),
                    Some(f.value(SimplexId::Vertex(v))),
                )
            })
            .collect();
        let edges = tree
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &[a, b])| {
                EdgeEntry::Valued(
                    tree.vertex_name(a).to_string(),
                    tree.vertex_name(b).to_string(),
                    Some(f.value(SimplexId::Edge(e))),
                )
            })
            .collect();
        InputDocument { vertices, edges }
    }

    /// JSON with one vertex and one edge per line, integral values written
    /// as integers.
    pub fn to_json(&self) -> String {
        let text = |v: Value| serde_json::to_string(&v).expect("documents always serialize");
        let vertices: Vec<String> = self
            .vertices
            .iter()
            .map(|(name, value)| format!("    {}: {}", text(json!(name)), text(number(*value))))
            .collect();
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|entry| {
                let (u, v) = entry.endpoints();
                format!(
                    "    [{}, {}, {}]",
                    text(json!(u)),
                    text(json!(v)),
                    text(number(entry.value()))
                )
            })
            .collect();
        let block = |lines: Vec<String>, open: &str, close: &str| {
            if lines.is_empty() {
                format!("{open}{close}")
            } else {
                format!("{open}\n{}\n  {close}", lines.join(",\n"))
            }
        };
        format!(
            "{{\n  \"vertices\": {},\n  \"edges\": {}\n}}\n",
            block(vertices, "{", "}"),
            block(edges, "[", "]")
        )
    }
}

fn number(value: Option<f64>) -> Value {
    match value {
        None => Value::Null,
        Some(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => json!(x as i64),
        Some(x) => json!(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EDGE: &str = r#"{"vertices": {"u": 0, "v": 1.0}, "edges": [["u", "v", 2]]}"#;

    #[test]
    fn parses_integers_and_decimals() {
        let doc = InputDocument::parse(EDGE).unwrap();
        let f = doc.morse_function().unwrap();
        assert_eq!(f.vertex_values(), [0., 1.]);
        assert_eq!(f.edge_values(), [2.]);
    }

    #[test]
    fn placeholders_give_a_tree_but_no_function() {
        let doc =
            InputDocument::parse(r#"{"vertices": {"u": null, "v": null}, "edges": [["u", "v"]]}"#)
                .unwrap();
        assert_eq!(doc.tree().unwrap().edge_count(), 1);
        assert!(matches!(
            doc.morse_function(),
            Err(DocumentError::Morse(MorseError::MissingValue(_)))
        ));
    }

    #[test]
    fn errors_name_the_violation() {
        let triangle = r#"{"vertices": {"a": 0, "b": 1, "c": 2},
            "edges": [["a","b",3],["b","c",4],["a","c",5]]}"#;
        let err = InputDocument::parse(triangle)
            .unwrap()
            .morse_function()
            .unwrap_err();
        assert!(err.to_string().starts_with("CycleDetected"));
        let err = InputDocument::parse("{").unwrap_err();
        assert!(err.to_string().starts_with("ParseError"));
        let err = InputDocument::parse(r#"{"vertices": {}, "edgez": []}"#).unwrap_err();
        assert!(matches!(err, DocumentError::Parse(_)));
    }

    #[test]
    fn writes_integral_values_as_integers() {
        let f = InputDocument::parse(EDGE)
            .unwrap()
            .morse_function()
            .unwrap();
        let text = InputDocument::from_function(&f).to_json();
        assert!(text.contains("\"v\": 1\n"), "{text}");
        assert!(text.contains("    [\"u\", \"v\", 2]\n"), "{text}");
        let back = InputDocument::parse(&text)
            .unwrap()
            .morse_function()
            .unwrap();
        assert_eq!(back.edge_values(), f.edge_values());
    }
}
