//! Executable graph-theoretic machinery for Artin groups and the
//! finite-scale side of combinatorial hierarchical hyperbolicity.
//!
//! The library is organised around six capabilities, one module each:
//!
//! - [`graph`]: labelled defining graphs, parsing, triangles/squares,
//!   odd subgraphs, DOT/JSON export.
//! - [`classify`]: type flags (large, hyperbolic, ...), odd-component
//!   decomposition, hanging components, product region graphs,
//!   abelianization ranks, and the Hopf-property verdict.
//! - [`blowup`]: squid blowups of triangle- and square-free support
//!   graphs, simplex links and saturations, nesting/orthogonality
//!   relations, augmented graphs, four-point hyperbolicity constants,
//!   and the four combinatorial HHS axiom checks.
//! - [`projection`]: composite projection systems and composite
//!   rotating families over finite data, with witness-producing
//!   axiom validators.
//! - [`presentation`]: Artin, Shephard, and quotient presentations,
//!   kernel specifications, and abelianization via Smith normal form.
//! - [`random`]: the uniform-label random graph model, seeded
//!   Monte Carlo genericity estimates, and Erdős–Rényi connectivity
//!   baselines.
//!
//! The [`cli`] module backs the `artin-hhs` binary; every subcommand is
//! also reachable as a library call returning a serialisable report.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example classify_graphs
//! cargo run --example product_regions
//! cargo run --example blowup_links
//! cargo run --example chhs_axioms
//! cargo run --example projection_axioms
//! cargo run --example quotient_presentations
//! cargo run --example random_genericity
//! cargo run --example hyperbolicity
//! ```

pub mod blowup;
pub mod classify;
pub mod cli;
pub mod graph;
pub mod presentation;
pub mod projection;
pub mod random;
pub mod simple;

pub use graph::{parse_graph, LabelledGraph, VertexId};
