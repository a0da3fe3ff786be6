//! Memo-free reference solver. Walks the full game tree over explicit play
//! histories and scores each finished ordering with `col_of_ordering`.
//! Shares no search code with [`Solver`](super::Solver), so the two can be
//! checked against each other. Exponential; only for small graphs.

use crate::ordering::{col_of_ordering, Ordering};

use super::{GameSpec, Player};

/// Exact minimax value of `spec` by exhaustive enumeration.
pub fn brute_force_value(spec: &GameSpec) -> usize {
    let n = spec.graph().vertex_count();
    let mut history: Vec<usize> = spec.preorder().as_slice().to_vec();
    let mut used = vec![false; n];
    for &v in &history {
        used[v] = true;
    }
    walk(
        spec,
        &mut history,
        &mut used,
        spec.first_mover(),
        spec.alice_passes(),
        spec.bob_passes(),
    )
}

fn walk(
    spec: &GameSpec,
    history: &mut Vec<usize>,
    used: &mut [bool],
    mover: Player,
    alice: u8,
    bob: u8,
) -> usize {
    let n = used.len();
    if history.len() == n {
        let tau = Ordering::new(history.clone()).expect("distinct by construction");
        return col_of_ordering(spec.graph(), &tau).expect("complete by construction");
    }
    let mut outcomes = Vec::new();
    for v in 0..n {
        if used[v] {
            continue;
        }
        used[v] = true;
        history.push(v);
        outcomes.push(walk(spec, history, used, mover.other(), alice, bob));
        history.pop();
        used[v] = false;
    }
    match mover {
        Player::Alice if alice > 0 => outcomes.push(walk(spec, history, used, Player::Bob, alice - 1, bob)),
        Player::Bob if bob > 0 => outcomes.push(walk(spec, history, used, Player::Alice, alice, bob - 1)),
        _ => {}
    }
    match mover {
        Player::Alice => outcomes.into_iter().min(),
        Player::Bob => outcomes.into_iter().max(),
    }
    .expect("a nonterminal position has a move")
}
