//! Minimum feasibility blockers for systems of difference constraints.
//!
//! An infeasible system of difference constraints `x_u - x_v <= b` becomes
//! feasible once a small set of rows is removed; finding a minimum such set
//! is the same problem as deleting a minimum set of arcs from an arc-weighted
//! digraph so that no negative-weight cycle remains (negative directed
//! feedback arc set). This crate provides:
//!
//! * the graph model with negative-cycle detection and Gallai potentials
//!   ([`graph`], [`negcycle`]),
//! * the row-for-arc translation between the two views ([`linsys`]),
//! * exact parameterized solvers: bounded-cycle-length branching
//!   ([`branching`]), the skew-separator route for few non-zero arcs
//!   ([`skew`]), dynamic programming over tree decompositions ([`dp`]) and
//!   the {-1,+1} few-positive-arcs algorithm ([`pmone`]),
//! * tree decompositions and treedepth ([`decomp`]),
//! * exhaustive reference oracles ([`oracle`]),
//! * instance generators with known answers ([`generators`]),
//! * and algorithm routing for the CLI ([`portfolio`]).

pub mod branching;
pub mod decomp;
pub mod dp;
pub mod generators;
pub mod graph;
pub mod io;
pub mod linsys;
pub mod negcycle;
pub mod oracle;
pub mod pmone;
pub mod portfolio;
pub mod skew;

pub use graph::{
    build_feasible_potential, has_negative_cycle, strong_components, verify_solution, Arc, ArcId,
    DeletionSet, GraphError, Potential, VerifyReport, VertexId, WeightedDigraph,
};
pub use negcycle::{min_negative_cycle_length_by_squaring, shortest_negative_cycle, Cycle};
pub use portfolio::{solve_portfolio, Algorithm, SolveOptions, SolveOutcome};
