//! Exact analysis of the graph ordering (marking) game on small graphs.
//!
//! Two players alternately append unordered vertices to a linear order of
//! a graph's vertices; Alice tries to keep the largest back-neighbor score
//! small and Bob tries to make it large. This crate provides:
//!
//! * [`graph`]: bit-set graphs, family constructors and parsers,
//! * [`ordering`]: partial orderings, back-scores and the coloring number,
//! * [`engine`]: an exact memoized solver with preorders, starters and passes,
//! * [`strategy`]: strategies, play-outs and worst-case evaluation,
//! * [`transfer`]: moving an Alice strategy from `G` to `G - x`,
//! * [`harness`]: seeded verification suites producing reports.

pub mod engine;
pub mod graph;
pub mod harness;
pub mod ordering;
pub mod strategy;
pub mod transfer;

pub use engine::{
    gcol, gcol_b, sigma_gcol, sigma_gcol_a, sigma_gcol_b, GameError, GameSpec, Move, Player, Position, SolveResult,
    Solver, Starter,
};
pub use graph::{parse_edge_list, parse_family_expr, FamilyExpr, Graph, GraphError, ParseError, Remap};
pub use harness::{CaseRecord, Params, Report};
pub use ordering::{coloring_number, Ordering, OrderingError};
pub use strategy::{Strategy, StrategyError};
pub use transfer::{Transfer, TransferError, TransferredStrategy};
