//! Discrete Morse functions on trees and the merge trees they induce.
//!
//! - [`tree`]: trees and forests as 1-dimensional simplicial complexes.
//! - [`morse`]: validated discrete Morse functions, critical simplices,
//!   gradient vector fields and level subcomplexes.
//! - [`merge_tree`]: the induced merge tree, impasses, shape codes.
//! - [`equivalence`]: Forman, homological, persistence and merge equivalence.
//! - [`star`]: thin merge trees, LR sequences and realization on stars.
//! - [`oracle`]: exhaustive enumeration of critical functions on small trees.
//! - [`document`]: the JSON input format.

pub mod document;
pub mod equivalence;
pub mod merge_tree;
pub mod morse;
pub mod oracle;
pub mod star;
pub mod tree;
pub mod union_find;
mod util;

pub use document::{DocumentError, InputDocument};
pub use equivalence::{
    forman_equivalent, homological_sequence, homologically_equivalent, persistence_diagram,
    persistence_equivalent, EquivalenceError, HomologicalSequence, PersistenceDiagram,
    PersistencePair,
};
pub use merge_tree::{induce_merge_tree, Direction, MergeTree, ShapeCode};
pub use morse::{GradientVectorField, LevelSubcomplex, MorseError, MorseFunction};
pub use star::{
    count_realizable_on_star, enumerate_thin, lr_sequence, realize_on_star, thin_from_lr,
    LrSequence, StarError, StarGraph,
};
pub use tree::{Forest, Simplex, SimplexId, SimplicialTree, TreeError};
pub use util::format_value;
