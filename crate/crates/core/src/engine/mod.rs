//! Exact minimax solver for the preordered ordering game with a chosen
//! starter and per-player pass budgets.
//!
//! Alice minimizes and Bob maximizes the final score, the largest
//! back-score in the completed ordering. Because a vertex's score is fixed
//! once it is ordered, the value of a position splits as
//! `max(current_max, future)`, where `future` is the minimax value of the
//! largest score still to be produced. `future` depends only on the ordered
//! set, the player to move and the remaining pass budgets, which is what the
//! transposition table is keyed on.

pub mod brute;

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bits, Graph};
use crate::ordering::{max_back_score, score_against, Ordering, OrderingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid preorder: {0}")]
    InvalidPreorder(#[from] OrderingError),
    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: Move, reason: &'static str },
    #[error("position is terminal")]
    Terminal,
    #[error("{variant} requires a preorder of {expected} length, got length {len}")]
    ParityMisuse { variant: &'static str, expected: &'static str, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        })
    }
}

/// Who moves first after the preorder. `ByParity` gives the move to Alice
/// when the preorder has even length and to Bob otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Starter {
    Alice,
    Bob,
    ByParity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Vertex(usize),
    Pass,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Vertex(v) => write!(f, "{v}"),
            Move::Pass => f.write_str("PASS"),
        }
    }
}

/// A rules instance: graph, preorder, starter and pass budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    graph: Graph,
    preorder: Ordering,
    starter: Starter,
    alice_passes: u8,
    bob_passes: u8,
}

impl GameSpec {
    pub fn new(graph: Graph, preorder: Ordering) -> Result<Self, GameError> {
        preorder.check_within(&graph)?;
        Ok(GameSpec { graph, preorder, starter: Starter::ByParity, alice_passes: 0, bob_passes: 0 })
    }

    /// The plain ordering game: empty preorder, Alice first, no passes.
    pub fn ordering_game(graph: Graph) -> Self {
        GameSpec::new(graph, Ordering::empty()).expect("empty preorder is always valid")
    }

    pub fn with_starter(mut self, starter: Starter) -> Self {
        self.starter = starter;
        self
    }

    pub fn with_passes(mut self, alice: u8, bob: u8) -> Self {
        self.alice_passes = alice;
        self.bob_passes = bob;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn preorder(&self) -> &Ordering {
        &self.preorder
    }

    pub fn starter(&self) -> Starter {
        self.starter
    }

    pub fn alice_passes(&self) -> u8 {
        self.alice_passes
    }

    pub fn bob_passes(&self) -> u8 {
        self.bob_passes
    }

    pub fn has_passes(&self) -> bool {
        self.alice_passes > 0 || self.bob_passes > 0
    }

    pub fn first_mover(&self) -> Player {
        match self.starter {
            Starter::Alice => Player::Alice,
            Starter::Bob => Player::Bob,
            Starter::ByParity if self.preorder.len().is_multiple_of(2) => Player::Alice,
            Starter::ByParity => Player::Bob,
        }
    }

    /// Player to move once `ordered` vertices (preorder included) have been
    /// ordered, assuming nobody has passed.
    pub fn mover_after(&self, ordered: usize) -> Player {
        let played = ordered.saturating_sub(self.preorder.len());
        if played.is_multiple_of(2) {
            self.first_mover()
        } else {
            self.first_mover().other()
        }
    }
}

/// A live search state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub ordered: u64,
    pub current_max: usize,
    pub to_move: Player,
    pub alice_passes: u8,
    pub bob_passes: u8,
}

impl Position {
    pub fn passes_of(&self, p: Player) -> u8 {
        match p {
            Player::Alice => self.alice_passes,
            Player::Bob => self.bob_passes,
        }
    }

    /// Position reached by playing `history` from scratch without passes;
    /// `to_move` is supplied by the caller.
    pub fn from_history(graph: &Graph, history: &Ordering, to_move: Player) -> Position {
        Position {
            ordered: history.range(),
            current_max: max_back_score(graph, history),
            to_move,
            alice_passes: 0,
            bob_passes: 0,
        }
    }
}

pub fn initial_position(spec: &GameSpec) -> Position {
    Position {
        ordered: spec.preorder.range(),
        current_max: max_back_score(&spec.graph, &spec.preorder),
        to_move: spec.first_mover(),
        alice_passes: spec.alice_passes,
        bob_passes: spec.bob_passes,
    }
}

pub fn is_terminal(spec: &GameSpec, p: &Position) -> bool {
    p.ordered == spec.graph.vertex_mask()
}

/// Unordered vertices in increasing order, then `Pass` if the mover still
/// has budget. Empty at terminal positions.
pub fn legal_moves(spec: &GameSpec, p: &Position) -> Vec<Move> {
    if is_terminal(spec, p) {
        return Vec::new();
    }
    let mut moves: Vec<Move> = bits(spec.graph.vertex_mask() & !p.ordered).map(Move::Vertex).collect();
    if p.passes_of(p.to_move) > 0 {
        moves.push(Move::Pass);
    }
    moves
}

pub fn apply_move(spec: &GameSpec, p: &Position, m: Move) -> Result<Position, GameError> {
    if is_terminal(spec, p) {
        return Err(GameError::Terminal);
    }
    let mut next = *p;
    next.to_move = p.to_move.other();
    match m {
        Move::Vertex(v) => {
            if v >= spec.graph.vertex_count() {
                return Err(GameError::IllegalMove { mv: m, reason: "not a vertex of the graph" });
            }
            if p.ordered & (1 << v) != 0 {
                return Err(GameError::IllegalMove { mv: m, reason: "vertex already ordered" });
            }
            next.ordered |= 1 << v;
            next.current_max = p.current_max.max(score_against(&spec.graph, p.ordered, v));
        }
        Move::Pass => match p.to_move {
            Player::Alice if p.alice_passes > 0 => next.alice_passes -= 1,
            Player::Bob if p.bob_passes > 0 => next.bob_passes -= 1,
            _ => return Err(GameError::IllegalMove { mv: m, reason: "no passes left" }),
        },
    }
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: usize,
    /// `None` when the root is terminal.
    pub best_move: Option<Move>,
    /// Positions expanded (transposition-table misses).
    pub nodes: u64,
    pub memo_entries: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    ordered: u64,
    // bit 0: Bob to move; bits 8..16 Alice passes; bits 16..24 Bob passes
    tag: u32,
}

impl Key {
    fn new(ordered: u64, to_move: Player, alice: u8, bob: u8) -> Self {
        let side = matches!(to_move, Player::Bob) as u32;
        Key { ordered, tag: side | (alice as u32) << 8 | (bob as u32) << 16 }
    }
}

/// Memoizing solver for a single [`GameSpec`]. Table entries are written
/// once and never revised, so repeated queries on the same solver are cheap.
pub struct Solver {
    spec: GameSpec,
    full: u64,
    memo: FxHashMap<Key, u8>,
    nodes: u64,
}

impl Solver {
    pub fn new(spec: GameSpec) -> Self {
        let full = spec.graph.vertex_mask();
        Solver { spec, full, memo: FxHashMap::default(), nodes: 0 }
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }

    pub fn solve(&mut self) -> SolveResult {
        let root = initial_position(&self.spec);
        let value = self.value(&root);
        let best_move = self.optimal_move(&root).ok();
        SolveResult { value, best_move, nodes: self.nodes, memo_entries: self.memo.len() }
    }

    /// Minimax value of the final score from `p`.
    pub fn value(&mut self, p: &Position) -> usize {
        let future = self.future(p.ordered, p.to_move, p.alice_passes, p.bob_passes);
        p.current_max.max(future as usize)
    }

    /// Every legal move with the value of the position it leads to.
    pub fn move_values(&mut self, p: &Position) -> Vec<(Move, usize)> {
        legal_moves(&self.spec, p)
            .into_iter()
            .map(|m| {
                let next = apply_move(&self.spec, p, m).expect("legal move");
                (m, self.value(&next))
            })
            .collect()
    }

    /// A value-achieving move; lowest vertex index wins ties, `Pass` last.
    pub fn optimal_move(&mut self, p: &Position) -> Result<Move, GameError> {
        let values = self.move_values(p);
        let pick = match p.to_move {
            Player::Alice => values.iter().map(|&(_, v)| v).min(),
            Player::Bob => values.iter().map(|&(_, v)| v).max(),
        }
        .ok_or(GameError::Terminal)?;
        Ok(values.into_iter().find(|&(_, v)| v == pick).expect("extremum present").0)
    }

    fn future(&mut self, ordered: u64, to_move: Player, alice: u8, bob: u8) -> u8 {
        if ordered == self.full {
            return 0;
        }
        let key = Key::new(ordered, to_move, alice, bob);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        self.nodes += 1;

        let g = &self.spec.graph;
        let open = self.full & !ordered;
        // Exact cutoffs: the vertex ordered last among the open ones sees all
        // of its neighbors, and no open vertex can score above its degree + 1.
        let floor = bits(open).map(|v| g.degree(v) + 1).min().unwrap_or(0) as u8;
        let ceiling = bits(open).map(|v| g.degree(v) + 1).max().unwrap_or(0) as u8;

        let value = match to_move {
            Player::Alice => {
                let mut best = u8::MAX;
                for v in bits(open) {
                    let s = score_against(&self.spec.graph, ordered, v) as u8;
                    if s >= best {
                        continue;
                    }
                    let child = s.max(self.future(ordered | 1 << v, Player::Bob, alice, bob));
                    best = best.min(child);
                    if best <= floor {
                        break;
                    }
                }
                if alice > 0 && best > floor {
                    best = best.min(self.future(ordered, Player::Bob, alice - 1, bob));
                }
                best
            }
            Player::Bob => {
                let mut best = 0u8;
                for v in bits(open) {
                    let s = score_against(&self.spec.graph, ordered, v) as u8;
                    let child = if s >= ceiling {
                        s
                    } else {
                        s.max(self.future(ordered | 1 << v, Player::Alice, alice, bob))
                    };
                    best = best.max(child);
                    if best >= ceiling {
                        break;
                    }
                }
                if bob > 0 && best < ceiling {
                    best = best.max(self.future(ordered, Player::Alice, alice, bob - 1));
                }
                best
            }
        };
        self.memo.insert(key, value);
        value
    }
}

pub fn solve(spec: &GameSpec) -> SolveResult {
    Solver::new(spec.clone()).solve()
}

pub fn optimal_move(spec: &GameSpec, p: &Position) -> Result<Move, GameError> {
    Solver::new(spec.clone()).optimal_move(p)
}

/// Game coloring number: Alice starts the ordering game on `graph`.
pub fn gcol(graph: &Graph) -> usize {
    solve(&GameSpec::ordering_game(graph.clone())).value
}

/// Value of the ordering game when Bob moves first.
pub fn gcol_b(graph: &Graph) -> usize {
    solve(&GameSpec::ordering_game(graph.clone()).with_starter(Starter::Bob)).value
}

/// Value of the σ-game, starter chosen by the parity of σ.
pub fn sigma_gcol(graph: &Graph, sigma: &Ordering) -> Result<usize, GameError> {
    Ok(solve(&GameSpec::new(graph.clone(), sigma.clone())?).value)
}

/// Alice σ-game: Alice moves first after an odd-length σ.
pub fn sigma_gcol_a(graph: &Graph, sigma: &Ordering) -> Result<usize, GameError> {
    if sigma.len().is_multiple_of(2) {
        return Err(GameError::ParityMisuse { variant: "sigma-gcol_A", expected: "odd", len: sigma.len() });
    }
    Ok(solve(&GameSpec::new(graph.clone(), sigma.clone())?.with_starter(Starter::Alice)).value)
}

/// Bob σ-game: Bob moves first after an even-length σ.
pub fn sigma_gcol_b(graph: &Graph, sigma: &Ordering) -> Result<usize, GameError> {
    if sigma.len() % 2 == 1 {
        return Err(GameError::ParityMisuse { variant: "sigma-gcol_B", expected: "even", len: sigma.len() });
    }
    Ok(solve(&GameSpec::new(graph.clone(), sigma.clone())?.with_starter(Starter::Bob)).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_cycle, make_empty, parse_family_expr};

    fn ord(v: &[usize]) -> Ordering {
        Ordering::new(v.to_vec()).unwrap()
    }

    fn fam(s: &str) -> Graph {
        parse_family_expr(s).unwrap()
    }

    #[test]
    fn initial_positions() {
        let k3 = make_complete(3).unwrap();
        let p = initial_position(&GameSpec::ordering_game(k3.clone()));
        assert_eq!((p.ordered, p.current_max, p.to_move), (0, 0, Player::Alice));
        let p = initial_position(&GameSpec::new(k3, ord(&[0, 1])).unwrap());
        assert_eq!((p.current_max, p.to_move), (2, Player::Alice));
        let p = initial_position(&GameSpec::new(make_cycle(5).unwrap(), ord(&[0, 1, 2])).unwrap());
        assert_eq!((p.current_max, p.to_move), (2, Player::Bob));
        assert!(GameSpec::new(make_complete(3).unwrap(), ord(&[3])).is_err());
    }

    #[test]
    fn moves_and_application() {
        let spec = GameSpec::ordering_game(make_complete(3).unwrap());
        let p0 = initial_position(&spec);
        assert_eq!(legal_moves(&spec, &p0), vec![Move::Vertex(0), Move::Vertex(1), Move::Vertex(2)]);
        let p1 = apply_move(&spec, &p0, Move::Vertex(0)).unwrap();
        assert_eq!((p1.current_max, p1.to_move), (1, Player::Bob));
        let p2 = apply_move(&spec, &p1, Move::Vertex(1)).unwrap();
        assert_eq!(p2.current_max, 2);
        let p3 = apply_move(&spec, &p2, Move::Vertex(2)).unwrap();
        assert_eq!(p3.current_max, 3);
        assert!(is_terminal(&spec, &p3) && legal_moves(&spec, &p3).is_empty());
        assert_eq!(apply_move(&spec, &p3, Move::Vertex(0)), Err(GameError::Terminal));
        assert!(matches!(apply_move(&spec, &p1, Move::Vertex(0)), Err(GameError::IllegalMove { .. })));
        assert!(matches!(apply_move(&spec, &p1, Move::Pass), Err(GameError::IllegalMove { .. })));

        let spec = spec.with_passes(1, 0);
        let p0 = initial_position(&spec);
        assert_eq!(legal_moves(&spec, &p0).last(), Some(&Move::Pass));
        let p1 = apply_move(&spec, &p0, Move::Pass).unwrap();
        assert_eq!((p1.alice_passes, p1.to_move, p1.ordered), (0, Player::Bob, 0));
        assert_eq!(legal_moves(&spec, &p1).len(), 3);
    }

    #[test]
    fn reference_values() {
        for n in 1..8 {
            assert_eq!(gcol(&make_complete(n).unwrap()), n);
            assert_eq!(gcol(&make_empty(n).unwrap()), 1);
        }
        assert_eq!(gcol(&fam("join(K3,E2)")), 5);
        assert_eq!(gcol(&fam("join(K2,E2)")), 3);
        assert_eq!(gcol(&fam("minus_edge(join(K3,E2),0,3)")), 4);
        assert_eq!(gcol(&fam("join(K4,E3)")), 7);
        assert_eq!(gcol(&make_empty(0).unwrap()), 0);
    }

    #[test]
    fn variants() {
        let k3 = make_complete(3).unwrap();
        assert_eq!(gcol_b(&k3), 3);
        assert_eq!(sigma_gcol(&k3, &ord(&[0, 1])), Ok(3));
        assert!(matches!(sigma_gcol_a(&k3, &ord(&[0, 1])), Err(GameError::ParityMisuse { .. })));
        assert!(matches!(sigma_gcol_b(&k3, &ord(&[0])), Err(GameError::ParityMisuse { .. })));
        let b = gcol_b(&fam("join(K3,E2)"));
        assert!(b == 5 || b == 6, "{b}");
        // a complete preorder is already a finished game
        let c5 = make_cycle(5).unwrap();
        assert_eq!(sigma_gcol(&c5, &ord(&[0, 1, 2, 3, 4])), Ok(3));
    }

    #[test]
    fn optimal_moves() {
        let spec = GameSpec::ordering_game(make_complete(3).unwrap());
        assert_eq!(optimal_move(&spec, &initial_position(&spec)), Ok(Move::Vertex(0)));
        let spec = GameSpec::ordering_game(make_empty(2).unwrap());
        assert_eq!(optimal_move(&spec, &initial_position(&spec)), Ok(Move::Vertex(0)));

        let spec = GameSpec::ordering_game(fam("join(K3,E2)"));
        let mut solver = Solver::new(spec.clone());
        let root = initial_position(&spec);
        // the maximum degree caps every score at 5, so every opening is optimal
        for (_, v) in solver.move_values(&root) {
            assert_eq!(v, 5);
        }
        assert_eq!(solver.optimal_move(&root), Ok(Move::Vertex(0)));

        let done = apply_move(&spec, &root, Move::Vertex(0)).unwrap();
        let mut p = done;
        while !is_terminal(&spec, &p) {
            let m = solver.optimal_move(&p).unwrap();
            p = apply_move(&spec, &p, m).unwrap();
        }
        assert_eq!(solver.optimal_move(&p), Err(GameError::Terminal));
        assert_eq!(p.current_max, 5);
    }

    #[test]
    fn solve_is_deterministic() {
        let spec = GameSpec::ordering_game(make_cycle(7).unwrap()).with_passes(1, 1);
        assert_eq!(solve(&spec), solve(&spec));
        let r = solve(&spec);
        assert!(r.value >= initial_position(&spec).current_max);
        assert!(r.memo_entries > 0 && r.nodes > 0);
    }
}
