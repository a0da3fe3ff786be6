//! Strategies as functions from play histories to vertices, play-outs of
//! two fixed strategies, and worst-case evaluation of a fixed Alice
//! strategy against every Bob behavior.
//!
//! A history is the full ordering so far, preorder included. Strategies only
//! describe pass-free games; the player to move is read off the history
//! length with [`GameSpec::mover_after`].

use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::engine::{GameError, GameSpec, Move, Player, Position, Solver};
use crate::graph::bits;
use crate::ordering::{col_of_ordering, score_against, Ordering};

/// Largest graph for which [`worst_case_score`] walks every Bob line.
pub const EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("{owner} strategy queried at {history}, where it is not {owner}'s turn")]
    OffTurn { owner: Player, history: Ordering },
    #[error("{owner} strategy chose {vertex} at {history}, which is not an unordered vertex")]
    IllegalChoice { owner: Player, vertex: usize, history: Ordering },
    #[error("history {0} is already complete")]
    Complete(Ordering),
    #[error("expected a strategy for {expected}, got one for {got}")]
    WrongOwner { expected: Player, got: Player },
    #[error("strategies are defined for pass-free games only")]
    PassesUnsupported,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("{0}")]
    Other(String),
}

pub trait Strategy: Send + Sync {
    fn owner(&self) -> Player;

    /// Vertex to play after `history`. Must be unordered in `history`.
    fn choose(&self, history: &Ordering) -> Result<usize, StrategyError>;

    /// True when the choice depends only on the set of ordered vertices and
    /// the largest score so far. Lets evaluators memoize on that pair.
    fn positional(&self) -> bool {
        false
    }
}

impl<S: Strategy + ?Sized> Strategy for Arc<S> {
    fn owner(&self) -> Player {
        (**self).owner()
    }

    fn choose(&self, history: &Ordering) -> Result<usize, StrategyError> {
        (**self).choose(history)
    }

    fn positional(&self) -> bool {
        (**self).positional()
    }
}

impl<S: Strategy + ?Sized> Strategy for &S {
    fn owner(&self) -> Player {
        (**self).owner()
    }

    fn choose(&self, history: &Ordering) -> Result<usize, StrategyError> {
        (**self).choose(history)
    }

    fn positional(&self) -> bool {
        (**self).positional()
    }
}

fn check_turn(spec: &GameSpec, owner: Player, history: &Ordering) -> Result<(), StrategyError> {
    if history.len() >= spec.graph().vertex_count() {
        return Err(StrategyError::Complete(history.clone()));
    }
    if spec.mover_after(history.len()) != owner {
        return Err(StrategyError::OffTurn { owner, history: history.clone() });
    }
    Ok(())
}

/// Solver-backed optimal play, evaluated on demand from whatever history it
/// is handed, reachable or not.
pub struct OptimalStrategy {
    owner: Player,
    solver: Mutex<Solver>,
}

impl OptimalStrategy {
    pub fn spec(&self) -> GameSpec {
        self.solver.lock().expect("solver lock").spec().clone()
    }
}

pub fn optimal_strategy(spec: &GameSpec, owner: Player) -> Result<OptimalStrategy, StrategyError> {
    if spec.has_passes() {
        return Err(StrategyError::PassesUnsupported);
    }
    Ok(OptimalStrategy { owner, solver: Mutex::new(Solver::new(spec.clone())) })
}

impl Strategy for OptimalStrategy {
    fn owner(&self) -> Player {
        self.owner
    }

    fn choose(&self, history: &Ordering) -> Result<usize, StrategyError> {
        let mut solver = self.solver.lock().expect("solver lock");
        history
            .check_within(solver.spec().graph())
            .map_err(GameError::from)?;
        check_turn(solver.spec(), self.owner, history)?;
        let pos = Position::from_history(solver.spec().graph(), history, self.owner);
        match solver.optimal_move(&pos)? {
            Move::Vertex(v) => Ok(v),
            Move::Pass => unreachable!("no pass budget in a strategy game"),
        }
    }

    fn positional(&self) -> bool {
        true
    }
}

/// Always plays the lowest-indexed unordered vertex.
pub struct LowestIndexStrategy {
    owner: Player,
    spec: GameSpec,
}

impl LowestIndexStrategy {
    pub fn new(spec: &GameSpec, owner: Player) -> Self {
        LowestIndexStrategy { owner, spec: spec.clone() }
    }
}

impl Strategy for LowestIndexStrategy {
    fn owner(&self) -> Player {
        self.owner
    }

    fn choose(&self, history: &Ordering) -> Result<usize, StrategyError> {
        check_turn(&self.spec, self.owner, history)?;
        bits(self.spec.graph().vertex_mask() & !history.range())
            .next()
            .ok_or_else(|| StrategyError::Complete(history.clone()))
    }

    fn positional(&self) -> bool {
        true
    }
}

/// Strategy from a closure.
pub struct FnStrategy<F> {
    owner: Player,
    f: F,
}

impl<F> FnStrategy<F>
where
    F: Fn(&Ordering) -> Result<usize, StrategyError> + Send + Sync,
{
    pub fn new(owner: Player, f: F) -> Self {
        FnStrategy { owner, f }
    }
}

impl<F> Strategy for FnStrategy<F>
where
    F: Fn(&Ordering) -> Result<usize, StrategyError> + Send + Sync,
{
    fn owner(&self) -> Player {
        self.owner
    }

    fn choose(&self, history: &Ordering) -> Result<usize, StrategyError> {
        (self.f)(history)
    }
}

fn checked_choice(
    spec: &GameSpec,
    s: &dyn Strategy,
    history: &Ordering,
) -> Result<usize, StrategyError> {
    let v = s.choose(history)?;
    if v >= spec.graph().vertex_count() || history.contains(v) {
        return Err(StrategyError::IllegalChoice { owner: s.owner(), vertex: v, history: history.clone() });
    }
    Ok(v)
}

fn check_pair(spec: &GameSpec, alice: &dyn Strategy) -> Result<(), StrategyError> {
    if spec.has_passes() {
        return Err(StrategyError::PassesUnsupported);
    }
    if alice.owner() != Player::Alice {
        return Err(StrategyError::WrongOwner { expected: Player::Alice, got: alice.owner() });
    }
    Ok(())
}

/// Plays `alice` against `bob` from the preorder to the end; returns the
/// complete ordering and its score.
pub fn play_out(
    spec: &GameSpec,
    alice: &dyn Strategy,
    bob: &dyn Strategy,
) -> Result<(Ordering, usize), StrategyError> {
    check_pair(spec, alice)?;
    if bob.owner() != Player::Bob {
        return Err(StrategyError::WrongOwner { expected: Player::Bob, got: bob.owner() });
    }
    let n = spec.graph().vertex_count();
    let mut history = spec.preorder().clone();
    while history.len() < n {
        let s = match spec.mover_after(history.len()) {
            Player::Alice => alice,
            Player::Bob => bob,
        };
        let v = checked_choice(spec, s, &history)?;
        history.push(v).expect("checked unordered");
    }
    let score = col_of_ordering(spec.graph(), &history).expect("complete ordering");
    Ok((history, score))
}

/// Largest final score Bob can force against the fixed strategy `alice`.
///
/// Graphs up to [`EXHAUSTIVE_LIMIT`] vertices, and any non-positional
/// strategy, are evaluated by walking every Bob line. Larger graphs with a
/// positional strategy use [`worst_case_pinned`].
pub fn worst_case_score(spec: &GameSpec, alice: &dyn Strategy) -> Result<usize, StrategyError> {
    if spec.graph().vertex_count() <= EXHAUSTIVE_LIMIT || !alice.positional() {
        worst_case_exhaustive(spec, alice)
    } else {
        worst_case_pinned(spec, alice)
    }
}

/// Walks the full Bob tree with Alice's replies fixed. No pruning; the top
/// Bob branching is explored in parallel.
pub fn worst_case_exhaustive(spec: &GameSpec, alice: &dyn Strategy) -> Result<usize, StrategyError> {
    check_pair(spec, alice)?;
    let history = spec.preorder().clone();
    exhaustive(spec, alice, &history, true)
}

fn exhaustive(
    spec: &GameSpec,
    alice: &dyn Strategy,
    history: &Ordering,
    parallel: bool,
) -> Result<usize, StrategyError> {
    let g = spec.graph();
    if history.len() == g.vertex_count() {
        return Ok(col_of_ordering(g, history).expect("complete ordering"));
    }
    match spec.mover_after(history.len()) {
        Player::Alice => {
            let v = checked_choice(spec, alice, history)?;
            let next = history.with(v).expect("checked unordered");
            exhaustive(spec, alice, &next, parallel)
        }
        Player::Bob => {
            let open: Vec<usize> = bits(g.vertex_mask() & !history.range()).collect();
            let results: Vec<Result<usize, StrategyError>> = if parallel {
                open.par_iter()
                    .map(|&b| exhaustive(spec, alice, &history.with(b).expect("open"), false))
                    .collect()
            } else {
                open.iter()
                    .map(|&b| exhaustive(spec, alice, &history.with(b).expect("open"), false))
                    .collect()
            };
            results.into_iter().try_fold(0, |acc, r| r.map(|s| acc.max(s)))
        }
    }
}

/// Bob's best response computed by search with Alice's moves pinned to the
/// strategy, memoized on (ordered set, current max). Only sound for
/// positional strategies.
pub fn worst_case_pinned(spec: &GameSpec, alice: &dyn Strategy) -> Result<usize, StrategyError> {
    check_pair(spec, alice)?;
    if !alice.positional() {
        return Err(StrategyError::Other("pinned evaluation needs a positional strategy".into()));
    }
    let g = spec.graph();
    let history = spec.preorder().clone();
    let cm = crate::ordering::max_back_score(g, &history);
    let mut memo = FxHashMap::default();
    pinned(spec, alice, &history, cm, &mut memo)
}

fn pinned(
    spec: &GameSpec,
    alice: &dyn Strategy,
    history: &Ordering,
    current_max: usize,
    memo: &mut FxHashMap<(u64, usize), usize>,
) -> Result<usize, StrategyError> {
    let g = spec.graph();
    if history.len() == g.vertex_count() {
        return Ok(current_max);
    }
    let key = (history.range(), current_max);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let ordered = history.range();
    let step = |v: usize, memo: &mut FxHashMap<(u64, usize), usize>| {
        let cm = current_max.max(score_against(g, ordered, v));
        let next = history.with(v).expect("open vertex");
        pinned(spec, alice, &next, cm, memo)
    };
    let value = match spec.mover_after(history.len()) {
        Player::Alice => step(checked_choice(spec, alice, history)?, memo)?,
        Player::Bob => {
            let mut best = 0;
            for b in bits(g.vertex_mask() & !ordered) {
                best = best.max(step(b, memo)?);
            }
            best
        }
    };
    memo.insert(key, value);
    Ok(value)
}
