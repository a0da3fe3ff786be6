//! Strategy transfer from a graph `G` to `H = G - x`.
//!
//! Alice plays the real game on `H` while privately running an imaginary
//! game on `G` against herself, driven by a strategy `S'` for `G`:
//!
//! * Bob's real move `v` is copied into the imaginary game. If `v` was
//!   already ordered there (an *illegal repeat*), a minimum-degree unordered
//!   vertex of `G` is ordered in its place.
//! * Alice answers with `S'`. If `S'` asks for `x` (an *illegal option*),
//!   Alice orders `x` and then a minimum-degree vertex `y` in the imaginary
//!   game on Bob's behalf, and plays the reply `z = S'(.., x, y)` for real.
//!
//! Between constructing `rho` (imaginary position after Bob's move) and
//! redefining `rho'` (imaginary position after Alice's move) the state must
//! satisfy: `ra(rho) - x == ra(tau)` while `x` is unordered in `rho`, and
//! `ra(rho) - x == ra(tau) + w` for a single `w` outside `ra(tau)` once it
//! is. [`check_invariant`] tests exactly that.
//!
//! Real-game vertices keep their `G` labels inside [`TransferState`];
//! [`TransferredStrategy`] converts to and from `H` labels.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::{GameSpec, Player, Starter};
use crate::graph::{bits, Graph, GraphError, Remap};
use crate::ordering::{col_of_ordering, Ordering};
use crate::strategy::{Strategy, StrategyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("removed vertex {0} lies in the preorder")]
    RemovedInPreorder(usize),
    #[error("transfer needs a pass-free game")]
    PassesUnsupported,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("Bob move {vertex:?} rejected: {reason}")]
    MalformedBobMove { vertex: Option<usize>, reason: &'static str },
    #[error("invariant violated: {detail}\n{dump}")]
    InvariantViolated { detail: String, dump: String },
    #[error("illegal repeat before any illegal option\n{0}")]
    RepeatBeforeOption(String),
    #[error("{what}\n{dump}")]
    AssumptionFailed { what: &'static str, dump: String },
    #[error("real game already finished")]
    Finished,
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Mutable bookkeeping of one transfer run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferState {
    pub x: usize,
    pub sigma: Ordering,
    /// Real game, vertices named by their `G` index.
    pub tau: Ordering,
    /// Imaginary game after Alice's last move.
    pub rho_prime: Ordering,
    /// Imaginary game after interpreting Bob's last move.
    pub rho: Ordering,
    pub illegal_options: usize,
    pub illegal_repeats: usize,
}

impl TransferState {
    pub fn new(sigma: Ordering, x: usize) -> Self {
        TransferState {
            x,
            tau: sigma.clone(),
            rho_prime: sigma.clone(),
            rho: sigma.clone(),
            sigma,
            illegal_options: 0,
            illegal_repeats: 0,
        }
    }

    pub fn dump(&self) -> String {
        format!(
            "state: x={} sigma={} tau={} rho'={} rho={} illegal_options={} illegal_repeats={}",
            self.x, self.sigma, self.tau, self.rho_prime, self.rho, self.illegal_options, self.illegal_repeats
        )
    }
}

/// How `rho` was built from `rho'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoStep {
    /// First Alice turn with nothing played since the preorder: `rho = sigma`.
    Initial,
    /// `rho = rho' + (v)`.
    Copied { v: usize },
    /// `v` already ordered in the imaginary game: `rho = rho' + (y)`.
    IllegalRepeat { v: usize, y: usize },
}

/// Which of Alice's three cases produced her real move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AliceBranch {
    /// Every vertex but `x` is ordered in `rho`; `w` is the last real vertex.
    LastRealVertex { w: usize },
    /// `S'(rho) = a != x`.
    Follow { a: usize },
    /// `S'(rho) = x`; `z` is `None` when `y` was the last real vertex.
    IllegalOption { y: usize, z: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantCase {
    /// `x` unordered in `rho` and `ra(rho) == ra(tau)`.
    XUnordered,
    /// `x` ordered in `rho`; `witness` is the one extra vertex.
    XOrdered { witness: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantCheck {
    Holds(InvariantCase),
    Violated(String),
}

/// Termination check that ended a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCheck {
    /// Real game complete when Alice's turn came up (after Bob's last move).
    BeforeInterpret,
    /// Real game complete after Alice's own move.
    AfterAlice,
}

/// One Alice turn of the algorithm, for traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnRecord {
    pub bob_move: Option<usize>,
    pub rho_step: Option<RhoStep>,
    pub invariant: Option<InvariantCase>,
    pub branch: Option<AliceBranch>,
    pub alice_move: Option<usize>,
    pub tau: Ordering,
    pub rho: Ordering,
    pub rho_prime: Ordering,
    pub ended: Option<EndCheck>,
}

impl fmt::Display for TurnRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bob_move {
            Some(v) => write!(f, "bob={v}")?,
            None => write!(f, "bob=-")?,
        }
        if let Some(step) = self.rho_step {
            match step {
                RhoStep::Initial => write!(f, " rho:initial")?,
                RhoStep::Copied { .. } => write!(f, " rho:copied")?,
                RhoStep::IllegalRepeat { y, .. } => write!(f, " rho:illegal-repeat(y={y})")?,
            }
        }
        if let Some(inv) = self.invariant {
            match inv {
                InvariantCase::XUnordered => write!(f, " invariant:ok(x unordered)")?,
                InvariantCase::XOrdered { witness } => write!(f, " invariant:ok(x ordered, w={witness})")?,
            }
        }
        if let Some(branch) = self.branch {
            match branch {
                AliceBranch::LastRealVertex { w } => write!(f, " branch:last-vertex(w={w})")?,
                AliceBranch::Follow { a } => write!(f, " branch:follow(a={a})")?,
                AliceBranch::IllegalOption { y, z: Some(z) } => write!(f, " branch:illegal-option(y={y},z={z})")?,
                AliceBranch::IllegalOption { y, z: None } => write!(f, " branch:illegal-option(y={y},last)")?,
            }
        }
        if let Some(a) = self.alice_move {
            write!(f, " alice={a}")?;
        }
        write!(f, " tau={} rho={} rho'={}", self.tau, self.rho, self.rho_prime)?;
        match self.ended {
            Some(EndCheck::BeforeInterpret) => write!(f, " end:before-interpret"),
            Some(EndCheck::AfterAlice) => write!(f, " end:after-alice"),
            None => Ok(()),
        }
    }
}

/// Checks the two-case set equation relating `rho` and `tau`.
pub fn check_invariant(st: &TransferState) -> InvariantCheck {
    let xbit = 1u64 << st.x;
    let rho = st.rho.range() & !xbit;
    let tau = st.tau.range();
    if st.rho.range() & xbit == 0 {
        if rho == tau {
            InvariantCheck::Holds(InvariantCase::XUnordered)
        } else {
            InvariantCheck::Violated(format!(
                "x unordered in rho but ra(rho)-x != ra(tau) (rho-only {:?}, tau-only {:?})",
                bits(rho & !tau).collect::<Vec<_>>(),
                bits(tau & !rho).collect::<Vec<_>>()
            ))
        }
    } else {
        let extra = rho & !tau;
        if tau & !rho == 0 && extra.count_ones() == 1 {
            InvariantCheck::Holds(InvariantCase::XOrdered { witness: extra.trailing_zeros() as usize })
        } else {
            InvariantCheck::Violated(format!(
                "x ordered in rho but ra(rho)-x is not ra(tau) plus one vertex (rho-only {:?}, tau-only {:?})",
                bits(extra).collect::<Vec<_>>(),
                bits(tau & !rho).collect::<Vec<_>>()
            ))
        }
    }
}

/// Lowest-indexed vertex of minimum degree in `G` among `candidates`.
fn min_degree_vertex(g: &Graph, candidates: u64) -> Option<usize> {
    bits(candidates).min_by_key(|&v| g.degree(v))
}

/// The fixed context of a transfer: `G`, the removed vertex, `H`, and the
/// imaginary-game strategy `S'`.
#[derive(Clone)]
pub struct Transfer {
    g: Graph,
    h: Graph,
    remap: Remap,
    x: usize,
    g_spec: GameSpec,
    h_spec: GameSpec,
    s_prime: Arc<dyn Strategy>,
}

impl fmt::Debug for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transfer").field("g", &self.g).field("x", &self.x).finish()
    }
}

impl Transfer {
    /// `g_spec` is the game on `G` that `s_prime` plays as Alice.
    pub fn new(g_spec: &GameSpec, x: usize, s_prime: Arc<dyn Strategy>) -> Result<Self, TransferError> {
        if g_spec.has_passes() {
            return Err(TransferError::PassesUnsupported);
        }
        if s_prime.owner() != Player::Alice {
            return Err(StrategyError::WrongOwner { expected: Player::Alice, got: s_prime.owner() }.into());
        }
        let g = g_spec.graph().clone();
        let (h, remap) = g.delete_vertex(x)?;
        if g_spec.preorder().contains(x) {
            return Err(TransferError::RemovedInPreorder(x));
        }
        let sigma_h = g_spec.preorder().map_vertices(|v| remap.new_index(v));
        let h_spec = GameSpec::new(h.clone(), sigma_h)
            .expect("preorder avoids x")
            .with_starter(g_spec.starter());
        Ok(Transfer { g, h, remap, x, g_spec: g_spec.clone(), h_spec, s_prime })
    }

    pub fn g(&self) -> &Graph {
        &self.g
    }

    pub fn h(&self) -> &Graph {
        &self.h
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn remap(&self) -> &Remap {
        &self.remap
    }

    /// The real game on `H`.
    pub fn h_spec(&self) -> &GameSpec {
        &self.h_spec
    }

    pub fn g_spec(&self) -> &GameSpec {
        &self.g_spec
    }

    pub fn start(&self) -> TransferState {
        TransferState::new(self.g_spec.preorder().clone(), self.x)
    }

    fn real_vertices(&self) -> u64 {
        self.g.vertex_mask() & !(1u64 << self.x)
    }

    pub fn real_complete(&self, st: &TransferState) -> bool {
        st.tau.range() == self.real_vertices()
    }

    /// `tau` relabeled into `H`.
    pub fn tau_in_h(&self, st: &TransferState) -> Ordering {
        st.tau.map_vertices(|v| self.remap.new_index(v))
    }

    /// Score of a finished real game.
    pub fn real_score(&self, st: &TransferState) -> usize {
        col_of_ordering(&self.h, &self.tau_in_h(st)).expect("complete real game")
    }

    fn assumption(&self, st: &TransferState, what: &'static str) -> TransferError {
        TransferError::AssumptionFailed { what, dump: st.dump() }
    }

    /// Appends Bob's real move to `tau`.
    pub fn record_bob_move(&self, st: &mut TransferState, v: usize) -> Result<(), TransferError> {
        let reject = |reason| TransferError::MalformedBobMove { vertex: Some(v), reason };
        if v >= self.g.vertex_count() || v == self.x {
            return Err(reject("not a vertex of H"));
        }
        if st.tau.contains(v) {
            return Err(reject("already ordered in the real game"));
        }
        st.tau.push(v).expect("checked unordered");
        Ok(())
    }

    /// Builds `rho` from `rho'` after Bob's move `v` has been recorded in
    /// `tau` (`None` on Alice's first turn).
    pub fn construct_rho(&self, st: &mut TransferState, v: Option<usize>) -> Result<RhoStep, TransferError> {
        let Some(v) = v else {
            if st.tau != st.sigma || st.rho_prime != st.sigma {
                return Err(TransferError::MalformedBobMove {
                    vertex: None,
                    reason: "missing Bob move after the first turn",
                });
            }
            st.rho = st.sigma.clone();
            return Ok(RhoStep::Initial);
        };
        if !st.rho_prime.contains(v) {
            st.rho = st.rho_prime.with(v).expect("unordered in rho'");
            return Ok(RhoStep::Copied { v });
        }
        if st.illegal_options == 0 {
            return Err(TransferError::RepeatBeforeOption(st.dump()));
        }
        let open = self.g.vertex_mask() & !st.rho_prime.range();
        // The replacement is drawn from V - ra(rho'); x is already ordered
        // here, so this equals V(H) - ra(rho').
        if open & (1u64 << self.x) != 0 {
            return Err(self.assumption(st, "illegal repeat while x is unordered in rho'"));
        }
        let y = min_degree_vertex(&self.g, open)
            .ok_or_else(|| self.assumption(st, "illegal repeat with no unordered vertex left"))?;
        st.rho = st.rho_prime.with(y).expect("unordered in rho'");
        st.illegal_repeats += 1;
        Ok(RhoStep::IllegalRepeat { v, y })
    }

    /// Records Bob's move (if any) and builds `rho`.
    pub fn interpret_bob_move(&self, st: &mut TransferState, v: Option<usize>) -> Result<RhoStep, TransferError> {
        if let Some(v) = v {
            self.record_bob_move(st, v)?;
        }
        self.construct_rho(st, v)
    }

    fn query(&self, st: &TransferState, history: &Ordering) -> Result<usize, TransferError> {
        let a = self.s_prime.choose(history)?;
        if a >= self.g.vertex_count() || history.contains(a) {
            return Err(StrategyError::IllegalChoice { owner: Player::Alice, vertex: a, history: history.clone() }.into());
        }
        if a != self.x && st.tau.contains(a) {
            return Err(self.assumption(st, "imaginary move already ordered in the real game"));
        }
        Ok(a)
    }

    /// Chooses Alice's real move, extends `tau` and redefines `rho'`.
    /// Fails hard, with a state dump, if the invariant does not hold.
    pub fn choose_alice_move(
        &self,
        st: &mut TransferState,
    ) -> Result<(usize, AliceBranch, InvariantCase), TransferError> {
        let case = match check_invariant(st) {
            InvariantCheck::Holds(case) => case,
            InvariantCheck::Violated(detail) => {
                return Err(TransferError::InvariantViolated { detail, dump: st.dump() })
            }
        };
        let xbit = 1u64 << self.x;
        let open_g = self.g.vertex_mask() & !st.rho.range() & !xbit;

        if open_g == 0 {
            let remaining = self.real_vertices() & !st.tau.range();
            if remaining.count_ones() != 1 {
                return Err(self.assumption(st, "all of V - x ordered in rho but not exactly one real vertex left"));
            }
            let w = remaining.trailing_zeros() as usize;
            st.tau.push(w).expect("unordered");
            return Ok((w, AliceBranch::LastRealVertex { w }, case));
        }

        let a = self.query(st, &st.rho)?;
        if a != self.x {
            st.tau.push(a).expect("checked unordered");
            st.rho_prime = st.rho.with(a).expect("checked unordered");
            return Ok((a, AliceBranch::Follow { a }, case));
        }

        st.illegal_options += 1;
        let y = min_degree_vertex(&self.g, open_g).expect("open_g nonempty");
        if st.tau.contains(y) {
            return Err(self.assumption(st, "replacement vertex already ordered in the real game"));
        }
        let with_xy = st.rho.with(self.x).and_then(|o| o.with(y)).expect("both unordered");
        if open_g & !(1u64 << y) == 0 {
            st.tau.push(y).expect("checked unordered");
            st.rho_prime = with_xy;
            return Ok((y, AliceBranch::IllegalOption { y, z: None }, case));
        }
        let z = self.query(st, &with_xy)?;
        st.tau.push(z).expect("checked unordered");
        st.rho_prime = with_xy.with(z).expect("checked unordered");
        Ok((z, AliceBranch::IllegalOption { y, z: Some(z) }, case))
    }

    /// One full Alice turn: record Bob's move, check for termination,
    /// build `rho`, check the invariant, choose and play Alice's move, and
    /// check for termination again.
    pub fn alice_turn(&self, st: &mut TransferState, bob: Option<usize>) -> Result<TurnRecord, TransferError> {
        if let Some(v) = bob {
            self.record_bob_move(st, v)?;
        }
        let mut rec = TurnRecord {
            bob_move: bob,
            rho_step: None,
            invariant: None,
            branch: None,
            alice_move: None,
            tau: st.tau.clone(),
            rho: st.rho.clone(),
            rho_prime: st.rho_prime.clone(),
            ended: None,
        };
        if self.real_complete(st) {
            rec.ended = Some(EndCheck::BeforeInterpret);
            return Ok(rec);
        }
        rec.rho_step = Some(self.construct_rho(st, bob)?);
        let (w, branch, case) = self.choose_alice_move(st)?;
        rec.invariant = Some(case);
        rec.branch = Some(branch);
        rec.alice_move = Some(w);
        rec.tau = st.tau.clone();
        rec.rho = st.rho.clone();
        rec.rho_prime = st.rho_prime.clone();
        if self.real_complete(st) {
            rec.ended = Some(EndCheck::AfterAlice);
        }
        Ok(rec)
    }

    /// Player to move in the real game with `st.tau` plus `pending` moves played.
    fn real_mover(&self, st: &TransferState, pending: bool) -> Player {
        self.h_spec.mover_after(st.tau.len() + pending as usize)
    }

    /// Plays the transferred strategy against `bob` (a strategy on `H`,
    /// in `H` labels) and returns the turn-by-turn trace and the final score.
    pub fn run_against(&self, bob: &dyn Strategy) -> Result<(Vec<TurnRecord>, usize), TransferError> {
        let mut st = self.start();
        let mut trace = Vec::new();
        let mut pending = None;
        loop {
            if self.real_complete(&st) && pending.is_none() {
                break;
            }
            let complete_after_pending = pending.is_some()
                && (st.tau.range() | 1u64 << pending.unwrap()) == self.real_vertices();
            if complete_after_pending || self.real_mover(&st, pending.is_some()) == Player::Alice {
                let rec = self.alice_turn(&mut st, pending.take())?;
                let ended = rec.ended.is_some();
                trace.push(rec);
                if ended {
                    break;
                }
            } else {
                let hist = self.tau_in_h(&st);
                let b = bob.choose(&hist)?;
                let b = *self
                    .remap
                    .surviving()
                    .get(b)
                    .ok_or(TransferError::MalformedBobMove { vertex: Some(b), reason: "not a vertex of H" })?;
                if st.tau.contains(b) {
                    return Err(TransferError::MalformedBobMove { vertex: Some(b), reason: "already ordered" });
                }
                pending = Some(b);
            }
        }
        Ok((trace, self.real_score(&st)))
    }

    /// Runs the algorithm against every Bob behavior.
    pub fn audit_exhaustive(&self) -> Result<TransferAudit, TransferError> {
        let mut audit = TransferAudit::default();
        let mut path = Vec::new();
        self.audit_rec(self.start(), None, &mut path, &mut audit)?;
        Ok(audit)
    }

    fn audit_rec(
        &self,
        mut st: TransferState,
        pending: Option<usize>,
        path: &mut Vec<TurnRecord>,
        audit: &mut TransferAudit,
    ) -> Result<(), TransferError> {
        let real = self.real_vertices();
        let after = st.tau.range() | pending.map_or(0, |b| 1u64 << b);
        let alice_due = pending.is_some() && after == real || self.real_mover(&st, pending.is_some()) == Player::Alice;

        if after == real && pending.is_none() {
            // finished with Alice's move, or nothing to play at all
            return self.audit_leaf(&st, path, audit);
        }
        if alice_due {
            let rec = self.alice_turn(&mut st, pending)?;
            if rec.invariant.is_some() {
                audit.checkpoints += 1;
            }
            match rec.branch {
                Some(AliceBranch::LastRealVertex { .. }) => audit.last_vertex_branches += 1,
                Some(AliceBranch::Follow { .. }) => audit.follow_branches += 1,
                Some(AliceBranch::IllegalOption { .. }) => audit.illegal_options += 1,
                None => {}
            }
            if matches!(rec.rho_step, Some(RhoStep::IllegalRepeat { .. })) {
                audit.illegal_repeats += 1;
            }
            let ended = rec.ended;
            path.push(rec);
            let out = match ended {
                Some(end) => {
                    match end {
                        EndCheck::BeforeInterpret => audit.ended_before_interpret += 1,
                        EndCheck::AfterAlice => audit.ended_after_alice += 1,
                    }
                    self.audit_leaf(&st, path, audit)
                }
                None => self.audit_rec(st, None, path, audit),
            };
            path.pop();
            return out;
        }
        for b in bits(real & !st.tau.range()) {
            self.audit_rec(st.clone(), Some(b), path, audit)?;
        }
        Ok(())
    }

    fn audit_leaf(
        &self,
        st: &TransferState,
        path: &[TurnRecord],
        audit: &mut TransferAudit,
    ) -> Result<(), TransferError> {
        let score = self.real_score(st);
        audit.lines += 1;
        if audit.lines == 1 || score > audit.max_score {
            audit.max_score = score;
            audit.worst_line = path.to_vec();
            audit.worst_tau = st.tau.clone();
        }
        Ok(())
    }
}

/// Aggregate of an exhaustive run over all Bob lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransferAudit {
    pub lines: u64,
    pub max_score: usize,
    pub checkpoints: u64,
    pub follow_branches: u64,
    pub last_vertex_branches: u64,
    pub illegal_options: u64,
    pub illegal_repeats: u64,
    pub ended_before_interpret: u64,
    pub ended_after_alice: u64,
    /// Trace of a line reaching `max_score`.
    pub worst_line: Vec<TurnRecord>,
    pub worst_tau: Ordering,
}

/// The transferred strategy as an Alice strategy on the game on `H`, in
/// `H` labels.
///
/// Each query replays the algorithm along the history. If the history
/// contains an Alice move the algorithm would not have made, the run is
/// restarted with everything up to and including that move as the new
/// preorder, so the strategy answers every Alice-turn history.
#[derive(Debug, Clone)]
pub struct TransferredStrategy {
    transfer: Transfer,
}

impl TransferredStrategy {
    pub fn transfer(&self) -> &Transfer {
        &self.transfer
    }

    pub fn h_spec(&self) -> &GameSpec {
        self.transfer.h_spec()
    }
}

/// Builds the transferred Alice strategy on `G - x` for the σ-game
/// described by `g_spec`, driven by `s_prime`.
pub fn transfer_strategy(
    g_spec: &GameSpec,
    x: usize,
    s_prime: Arc<dyn Strategy>,
) -> Result<TransferredStrategy, TransferError> {
    Ok(TransferredStrategy { transfer: Transfer::new(g_spec, x, s_prime)? })
}

impl TransferredStrategy {
    fn replay(&self, history_h: &Ordering) -> Result<usize, TransferError> {
        let t = &self.transfer;
        let spec = t.h_spec();
        if history_h.len() >= t.h.vertex_count() {
            return Err(TransferError::Finished);
        }
        if spec.mover_after(history_h.len()) != Player::Alice {
            return Err(StrategyError::OffTurn { owner: Player::Alice, history: history_h.clone() }.into());
        }
        let hist: Vec<usize> = history_h.iter().map(|v| t.remap.old_index(v)).collect();
        let sigma = t.g_spec.preorder();
        let (mut st, start) = if hist.starts_with(sigma.as_slice()) {
            (t.start(), sigma.len())
        } else {
            (TransferState::new(Ordering::new(hist.clone()).expect("distinct"), t.x), hist.len())
        };
        let mut pending = None;
        for i in start..hist.len() {
            match spec.mover_after(i) {
                Player::Bob => pending = Some(hist[i]),
                Player::Alice => {
                    let rec = t.alice_turn(&mut st, pending.take())?;
                    if rec.alice_move != Some(hist[i]) {
                        st = TransferState::new(Ordering::new(hist[..=i].to_vec()).expect("distinct"), t.x);
                    }
                }
            }
        }
        let rec = t.alice_turn(&mut st, pending)?;
        let w = rec.alice_move.ok_or(TransferError::Finished)?;
        Ok(t.remap.new_index(w).expect("real vertex"))
    }
}

impl Strategy for TransferredStrategy {
    fn owner(&self) -> Player {
        Player::Alice
    }

    fn choose(&self, history: &Ordering) -> Result<usize, StrategyError> {
        self.replay(history).map_err(|e| match e {
            TransferError::Strategy(s) => s,
            other => StrategyError::Other(other.to_string()),
        })
    }
}

/// Convenience: default starter, solver-backed `S'`.
pub fn transfer_optimal(g: &Graph, sigma: &Ordering, x: usize) -> Result<TransferredStrategy, TransferError> {
    let spec = GameSpec::new(g.clone(), sigma.clone())
        .map_err(StrategyError::Game)?
        .with_starter(Starter::ByParity);
    let s = crate::strategy::optimal_strategy(&spec, Player::Alice)?;
    transfer_strategy(&spec, x, Arc::new(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{sigma_gcol, solve};
    use crate::graph::{make_complete, parse_family_expr};
    use crate::strategy::{optimal_strategy, play_out, worst_case_score, LowestIndexStrategy};

    fn ord(v: &[usize]) -> Ordering {
        Ordering::new(v.to_vec()).unwrap()
    }

    fn setup(expr: &str, sigma: &[usize], x: usize) -> Transfer {
        let g = parse_family_expr(expr).unwrap();
        let spec = GameSpec::new(g, ord(sigma)).unwrap();
        let s = optimal_strategy(&spec, Player::Alice).unwrap();
        Transfer::new(&spec, x, Arc::new(s)).unwrap()
    }

    #[test]
    fn first_construction() {
        let t = setup("C5", &[], 0);
        let mut st = t.start();
        assert_eq!(t.interpret_bob_move(&mut st, None), Ok(RhoStep::Initial));
        assert_eq!(st.rho, Ordering::empty());
        assert_eq!(check_invariant(&st), InvariantCheck::Holds(InvariantCase::XUnordered));
        assert!(t.interpret_bob_move(&mut st, Some(0)).is_err());
    }

    #[test]
    fn copying_a_legal_bob_move() {
        let t = setup("C5", &[], 4);
        let mut st = t.start();
        let rec = t.alice_turn(&mut st, None).unwrap();
        let a = rec.alice_move.unwrap();
        let b = (0..4).find(|&v| v != a).unwrap();
        let before = st.rho_prime.clone();
        assert_eq!(t.interpret_bob_move(&mut st, Some(b)), Ok(RhoStep::Copied { v: b }));
        assert_eq!(st.rho, before.with(b).unwrap());
        assert!(matches!(check_invariant(&st), InvariantCheck::Holds(_)));
    }

    #[test]
    fn invariant_detects_fabricated_states() {
        let mut st = TransferState::new(Ordering::empty(), 4);
        st.tau = ord(&[0]);
        st.rho = ord(&[0, 4, 1, 2]);
        assert!(matches!(check_invariant(&st), InvariantCheck::Violated(_)));
        st.rho = ord(&[0, 4, 1]);
        assert_eq!(check_invariant(&st), InvariantCheck::Holds(InvariantCase::XOrdered { witness: 1 }));
        st.rho = ord(&[0, 1]);
        assert!(matches!(check_invariant(&st), InvariantCheck::Violated(_)));
        st.rho = ord(&[1]);
        assert!(matches!(check_invariant(&st), InvariantCheck::Violated(_)));
    }

    #[test]
    fn repeat_without_prior_option_is_flagged() {
        let t = setup("C5", &[], 4);
        let mut st = t.start();
        st.rho_prime = ord(&[0, 1]);
        st.tau = ord(&[0]);
        let err = t.interpret_bob_move(&mut st, Some(1)).unwrap_err();
        assert!(matches!(err, TransferError::RepeatBeforeOption(_)), "{err}");
    }

    #[test]
    fn removed_vertex_in_preorder_rejected() {
        let g = make_complete(3).unwrap();
        let spec = GameSpec::new(g, ord(&[0])).unwrap();
        let s = optimal_strategy(&spec, Player::Alice).unwrap();
        assert_eq!(Transfer::new(&spec, 0, Arc::new(s)).unwrap_err(), TransferError::RemovedInPreorder(0));
    }

    #[test]
    fn end_checks() {
        // odd preorder: Bob moves first and takes the only real vertex
        let t = setup("K3", &[0], 2);
        let mut st = t.start();
        let rec = t.alice_turn(&mut st, Some(1)).unwrap();
        assert_eq!(rec.ended, Some(EndCheck::BeforeInterpret));
        assert_eq!(rec.rho_step, None);

        let t = setup("K4", &[0, 1], 3);
        let mut st = t.start();
        let rec = t.alice_turn(&mut st, None).unwrap();
        assert_eq!(rec.ended, Some(EndCheck::AfterAlice));
        assert_eq!(rec.branch, Some(AliceBranch::Follow { a: 2 }));
        assert_eq!(t.alice_turn(&mut st, None).unwrap().ended, Some(EndCheck::BeforeInterpret));
    }

    #[test]
    fn isolated_vertex_transfer_reproduces_optimal_play() {
        let k3 = make_complete(3).unwrap();
        let g = k3.augment_isolated().unwrap();
        let spec_g = GameSpec::ordering_game(g);
        let s = optimal_strategy(&spec_g, Player::Alice).unwrap();
        let transferred = transfer_strategy(&spec_g, 3, Arc::new(s)).unwrap();
        let spec_h = GameSpec::ordering_game(k3);
        let bob = optimal_strategy(&spec_h, Player::Bob).unwrap();
        let alice = optimal_strategy(&spec_h, Player::Alice).unwrap();
        assert_eq!(play_out(&spec_h, &transferred, &bob).unwrap(), play_out(&spec_h, &alice, &bob).unwrap());
        let audit = transferred.transfer().audit_exhaustive().unwrap();
        assert_eq!(audit.illegal_options, 0);
        assert_eq!(audit.max_score, 3);
    }

    #[test]
    fn clique_side_removal_from_join() {
        let t = setup("join(K3,E2)", &[], 0);
        assert_eq!(*t.h(), parse_family_expr("join(K2,E2)").unwrap());
        let audit = t.audit_exhaustive().unwrap();
        assert!(audit.max_score <= 5, "{audit:?}");
        let strategy = TransferredStrategy { transfer: t.clone() };
        let worst = worst_case_score(t.h_spec(), &strategy).unwrap();
        assert_eq!(worst, audit.max_score);
        assert!(worst >= solve(t.h_spec()).value);
    }

    #[test]
    fn suboptimal_imaginary_strategy() {
        let g = parse_family_expr("join(C4,E2)").unwrap();
        let spec = GameSpec::ordering_game(g.clone());
        let lowest = Arc::new(LowestIndexStrategy::new(&spec, Player::Alice));
        let bound = worst_case_score(&spec, &*lowest).unwrap();
        for x in 0..g.vertex_count() {
            let t = Transfer::new(&spec, x, lowest.clone()).unwrap();
            let audit = t.audit_exhaustive().unwrap();
            assert!(audit.max_score <= bound, "x={x} {} > {bound}", audit.max_score);
        }
        assert!(sigma_gcol(&g, &Ordering::empty()).unwrap() <= bound);
    }

    #[test]
    fn strategy_answers_off_policy_histories() {
        let t = setup("C5", &[], 0);
        let s = TransferredStrategy { transfer: t };
        // Alice (H label 3) deviates, Bob replies; the strategy still answers.
        let v = s.choose(&ord(&[3, 0])).unwrap();
        assert!(v == 1 || v == 2);
        assert!(matches!(s.choose(&ord(&[3])), Err(StrategyError::OffTurn { .. })));
    }
}
