//! Temporally satisfying reconfiguration on temporal graphs.
//!
//! A temporal graph assigns every edge a set of time-steps at which it is
//! active. Given a static vertex-selection problem (dominating set,
//! independent set, or anything registered through [`ProblemDescriptor`]),
//! the temporal version asks for a sequence of vertex sets `T_1, ..., T_tau`
//! such that each `T_t` solves the static problem on snapshot `G_t` and
//! `T_t` can be turned into `T_{t+1}` by sliding every token at most one
//! edge along edges active at time `t`, all tokens moving simultaneously.
//!
//! The crate is organised bottom-up:
//!
//! - [`temporal`]: the graph model, text format, random generation and the
//!   temporal neighbourhood diversity partition.
//! - [`reconfig`]: reconfigurability of two token sets through bipartite
//!   perfect matching, and validation of whole sequences.
//! - [`problems`]: problem descriptors, the dominating/independent set
//!   instantiations and their class-level bound functions.
//! - [`flow`]: min-cost circulation with lower and upper bounds.
//! - [`solvers`]: brute force, union approximation, enumeration DP and the
//!   class-partition circulation algorithm.
//! - [`expand`]: the layered static graph with one vertex copy per
//!   time-step.
//!
//! ```
//! use tsr_core::prelude::*;
//!
//! let g = TemporalGraph::new(2, 2, [(0, 1, vec![1, 2])]).unwrap();
//! let ds = ProblemDescriptor::dominating_set();
//! let res = solve_enum(&g, &ds).unwrap().expect("dominating sets always exist");
//! assert_eq!(res.size(), 1);
//! assert!(check_solution(&g, &ds, &res.sequence.sets).is_ok());
//! ```

pub mod error;
pub mod expand;
pub mod flow;
pub mod matching;
pub mod problems;
pub mod reconfig;
pub mod solvers;
pub mod temporal;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::expand::{build_time_expanded, check_sequence_via_expansion, TimeExpandedGraph};
    pub use crate::flow::{
        solve_max_cost_circulation, solve_min_cost_circulation, Capacity, CirculationFlow,
        CirculationGraph,
    };
    pub use crate::problems::{
        ClassSet, EnumerationLimit, Ndld, ProblemDescriptor, ProblemRegistry, Sense,
    };
    pub use crate::reconfig::{
        check_sequence, check_solution, is_reconfigurable, ReconfigWitness, TokenSequence,
        TokenSet, Violation,
    };
    pub use crate::solvers::{
        solve_approx, solve_brute, solve_enum, solve_tnd, solve_tnd_with, CandidateSequence,
        Method, SolveResult, SolveStats, TndOptions,
    };
    pub use crate::temporal::{
        footprint, generate_random, parse_instance, serialize_instance, tnd_graph, tnd_partition,
        ClassKind, StaticGraph, TemporalGraph, Time, TndGraph, TndPartition, Vertex,
    };
}
