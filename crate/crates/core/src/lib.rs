//! Parity factors of undirected graphs.
//!
//! A (g,f)-parity factor of `G` is a spanning subgraph `F` with
//! `g(v) <= d_F(v) <= f(v)` and `d_F(v) ≡ f(v) (mod 2)` at every vertex. This
//! crate decides existence in polynomial time through a matching gadget,
//! certifies non-existence with Lovász deficiency witnesses, and checks known
//! sufficient conditions for (a,b)-parity factors in edge-connected regular
//! graphs, including the construction showing the connectivity bound is tight.

pub mod conditions;
pub mod connectivity;
pub mod deficiency;
pub mod experiment;
pub mod factor;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod parity;

pub use conditions::{check_main_conditions, Case, ConditionReport};
pub use connectivity::{edge_connectivity, is_k_edge_connected, CutCertificate};
pub use deficiency::{decide_by_enumeration, deficiency, verify_witness, Decision, DeficiencyWitness};
pub use factor::{brute_force_factor, find_parity_factor, verify_factor, Factor, Solution};
pub use graph::{Graph, GraphError, VertexSet};
pub use matching::{max_matching, Matching};
pub use parity::ParitySpec;
