//! Exact counting of homomorphisms from cycles into sparse graphs, and
//! randomized detection of short directed and undirected cycles.
//!
//! Graphs of bounded degeneracy are oriented into DAGs with small
//! out-degree. Short walks in those DAGs are folded into weighted arcs, and
//! closed walks are then counted by two engines: a combinatorial one based on
//! path tables ([`comb`]) and one based on rectangular matrix products
//! ([`matmul`]). [`pipeline::hom_cycle_degenerate`] ties these steps together, and
//! [`general::hom_cycle_general`] handles graphs of unbounded degeneracy.
//!
//! ```
//! use cyclehom::graph::named;
//! use cyclehom::pipeline::{hom_cycle_degenerate, Engine};
//!
//! // Closed 6-walks in a triangle: 2^6 + 2.
//! let count = hom_cycle_degenerate(&named::cycle(3), 6, Engine::Comb).unwrap();
//! assert_eq!(count.to_string(), "66");
//! ```

pub mod algebra;
pub mod comb;
pub mod detection;
pub mod error;
pub mod general;
pub mod generate;
pub mod graph;
pub mod matmul;
pub mod ops;
pub mod oracle;
pub mod pipeline;
pub mod ring;
pub mod walk;

pub use error::{Error, Result};
