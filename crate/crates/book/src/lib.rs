//! The guide under `book/` is plain mdbook, which cannot build snippets
//! against workspace crates. Each chapter is included here as a module doc
//! so `cargo test` runs every snippet as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/graphs-and-orientations.md")]
pub mod graphs_and_orientations {}

#[doc = include_str!("../../../book/src/walk-weights.md")]
pub mod walk_weights {}

#[doc = include_str!("../../../book/src/combinatorial-engine.md")]
pub mod combinatorial_engine {}

#[doc = include_str!("../../../book/src/matrix-engine.md")]
pub mod matrix_engine {}

#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}

#[doc = include_str!("../../../book/src/general-graphs.md")]
pub mod general_graphs {}

#[doc = include_str!("../../../book/src/detection.md")]
pub mod detection {}

#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
