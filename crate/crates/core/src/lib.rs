//! Approximation of the maximum-weight duo-preservation string mapping
//! problem.
//!
//! The pipeline builds the bipartite duo graph of two strings, turns its
//! edges into the vertices of a conflict graph, solves a clique-constrained
//! LP relaxation of maximum-weight independent set on it, and rounds the LP
//! solution with a local-ratio decomposition. The selected duo pairs are
//! then completed into a full character bijection. The result is within a
//! factor 6 of optimal.
//!
//! ```
//! use mwdsm::{solve_mwdsm, Instance, WeightSpec};
//!
//! let instance = Instance::new("abacddd", "acddbad", WeightSpec::Unit).unwrap();
//! let report = solve_mwdsm(&instance).unwrap();
//! assert_eq!(report.selected_weight, 3.0);
//! ```

pub mod approx;
pub mod bench;
pub mod cli;
pub mod conflict_graph;
pub mod dot;
pub mod duo_graph;
pub mod error;
pub mod exact;
pub mod gen;
pub mod instance;
pub mod lp;
pub mod mapping;
mod simplex;
pub mod solution;

pub use approx::{
    local_ratio_round, run_pipeline, select_vertex, solve_mwdsm, IndependentSet, SolveReport,
    WeightVector,
};
pub use conflict_graph::{conflicts, ConflictGraph};
pub use duo_graph::{DuoGraph, GEdge};
pub use error::{Error, Result};
pub use exact::{exact_by_mapping_enumeration, exact_mwis, ExactResult};
pub use instance::{extract_duos, DecayForm, Duo, Instance, Mode, WeightSpec};
pub use lp::{FractionalSolution, LpModel};
pub use mapping::{extend_to_bijection, score_mapping, Mapping};
