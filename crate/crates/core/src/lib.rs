//! Thin spanning trees in surface-embedded multigraphs, and their use in
//! rounding the Held-Karp relaxation of asymmetric TSP.
//!
//! The layers build on each other:
//!
//! * [`embed`]: rotation-system embeddings, faces, genus, geometric duals
//!   and the cut/dual-cycle correspondence;
//! * [`thin_tree`]: thin trees from pairwise-far dual edges;
//! * [`surgery`]: deleting short dual cycles to raise the dual girth;
//! * [`pipeline`]: thin trees for any bounded genus, and cost-bounded thin
//!   trees by repeated extraction;
//! * [`atsp`]: the Held-Karp LP, and rounding its solution to a tour;
//! * [`oracle`]: brute-force verifiers used by the tests;
//! * [`genlab`]: seeded instance generators.

pub mod atsp;
pub mod embed;
pub mod flow;
pub mod genlab;
pub mod lp;
pub mod multigraph;
pub mod numeric;
pub mod oracle;
pub mod pipeline;
pub mod surgery;
pub mod thin_tree;

pub use atsp::{
    atsp_approx, solve_held_karp, AtspError, AtspInstance, HkOptions, HkSolution, Tour,
};
pub use embed::{geometric_dual, DualGraph, EdgeId, EmbedError, EmbeddedGraph, VertexId};
pub use numeric::{Cost, Surd, Q};
pub use pipeline::{bounded_genus_thin_tree, weighted_thin_tree, GenusThinTree, WeightedThinTree};
pub use surgery::{increase_dual_girth, SurgeryLog};
pub use thin_tree::{thin_spanning_tree, ThinTreeResult};
