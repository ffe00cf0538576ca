use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Board, Move, MoveSequence, TrominoError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    #[default]
    Serial,
    /// Expand each BFS level across threads, then merge in serial order.
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SearchOutcome {
    /// A shortest nonempty move sequence from the empty board back to it.
    Found { moves: MoveSequence, states_explored: usize },
    /// Every state reachable from the empty board was visited.
    ProvenAbsent { states_explored: usize },
    /// The node limit was hit first; nothing is claimed.
    Inconclusive { states_explored: usize },
}

impl SearchOutcome {
    pub fn states_explored(&self) -> usize {
        match *self {
            SearchOutcome::Found { states_explored, .. }
            | SearchOutcome::ProvenAbsent { states_explored }
            | SearchOutcome::Inconclusive { states_explored } => states_explored,
        }
    }

    pub fn witness(&self) -> Option<&[Move]> {
        match self {
            SearchOutcome::Found { moves, .. } => Some(moves),
            _ => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Effect {
    Place(u64),
    Clear(u64),
}

struct MoveTable {
    moves: Vec<Move>,
    effects: Vec<Effect>,
}

impl MoveTable {
    fn new(n: usize) -> Self {
        let bit = |i: usize, j: usize| 1u64 << ((j - 1) * n + (i - 1));
        let mut moves = Vec::new();
        let mut effects = Vec::new();
        for j in 1..n {
            for i in 1..n {
                moves.push(Move::Place { i, j });
                effects.push(Effect::Place(bit(i, j) | bit(i + 1, j) | bit(i, j + 1)));
            }
        }
        for i in 1..=n {
            moves.push(Move::ClearColumn { i });
            effects.push(Effect::Clear((1..=n).map(|j| bit(i, j)).fold(0, |a, b| a | b)));
        }
        for j in 1..=n {
            moves.push(Move::ClearRow { j });
            effects.push(Effect::Clear((1..=n).map(|i| bit(i, j)).fold(0, |a, b| a | b)));
        }
        Self { moves, effects }
    }

    fn successors(&self, state: u64) -> Vec<(u64, u16)> {
        self.effects
            .iter()
            .enumerate()
            .filter_map(|(k, effect)| {
                let next = match *effect {
                    Effect::Place(mask) if state & mask == 0 => state | mask,
                    Effect::Clear(mask) if state & mask == mask => state & !mask,
                    _ => return None,
                };
                Some((next, k as u16))
            })
            .collect()
    }
}

pub fn exhaustive_search(n: usize, node_limit: usize) -> Result<SearchOutcome, TrominoError> {
    exhaustive_search_with(n, node_limit, SearchMode::Serial)
}

/// Breadth-first search over board states reachable from the empty board.
///
/// `node_limit` caps the number of distinct states stored, including the
/// empty board itself.
pub fn exhaustive_search_with(
    n: usize,
    node_limit: usize,
    mode: SearchMode,
) -> Result<SearchOutcome, TrominoError> {
    Board::empty(n)?;
    if n * n > 64 {
        return Err(TrominoError::TooLargeForSearch(n));
    }
    let table = MoveTable::new(n);
    // state -> (predecessor, move index)
    let mut parent: HashMap<u64, (u64, u16)> = HashMap::new();
    parent.insert(0, (0, u16::MAX));
    let mut frontier = vec![0u64];

    while !frontier.is_empty() {
        let expanded: Vec<Vec<(u64, u16)>> = match mode {
            SearchMode::Serial => frontier.iter().map(|&s| table.successors(s)).collect(),
            SearchMode::Parallel => frontier.par_iter().map(|&s| table.successors(s)).collect(),
        };
        let mut next = Vec::new();
        for (&state, succs) in frontier.iter().zip(expanded) {
            for (succ, k) in succs {
                if succ == 0 {
                    let mut moves = vec![table.moves[k as usize]];
                    let mut cur = state;
                    while cur != 0 {
                        let (prev, pk) = parent[&cur];
                        moves.push(table.moves[pk as usize]);
                        cur = prev;
                    }
                    moves.reverse();
                    return Ok(SearchOutcome::Found { moves, states_explored: parent.len() });
                }
                if parent.contains_key(&succ) {
                    continue;
                }
                if parent.len() >= node_limit {
                    return Ok(SearchOutcome::Inconclusive { states_explored: parent.len() });
                }
                parent.insert(succ, (state, k));
                next.push(succ);
            }
        }
        frontier = next;
    }
    Ok(SearchOutcome::ProvenAbsent { states_explored: parent.len() })
}
