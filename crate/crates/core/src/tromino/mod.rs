//! The tromino clearing game on an `n × n` board.
//!
//! Cells are addressed `(i, j)` with `i` the column counted from the left
//! and `j` the row counted from the bottom, both 1-based. A tromino placed
//! at `(i, j)` covers `(i, j)`, `(i+1, j)` and `(i, j+1)`; rotations are not
//! allowed.

mod certificate;
mod search;

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraError;

pub use certificate::{eisenstein_invariant, tally_and_certify, CertificateReport, MoveTally, NonrootReport};
pub use search::{exhaustive_search, exhaustive_search_with, SearchMode, SearchOutcome};

pub type MoveSequence = Vec<Move>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum Move {
    #[serde(rename = "place")]
    Place { i: usize, j: usize },
    #[serde(rename = "clear_col")]
    ClearColumn { i: usize },
    #[serde(rename = "clear_row")]
    ClearRow { j: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Place { i, j } => write!(f, "Place({i},{j})"),
            Move::ClearColumn { i } => write!(f, "ClearCol({i})"),
            Move::ClearRow { j } => write!(f, "ClearRow({j})"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("{0} is out of range for an {1}x{1} board")]
    OutOfRange(Move, usize),
    #[error("cell occupied: ({i},{j})")]
    CellOccupied { i: usize, j: usize },
    #[error("column {0} is not full")]
    ColumnNotFull(usize),
    #[error("row {0} is not full")]
    RowNotFull(usize),
}

#[derive(Debug, Error)]
pub enum TrominoError {
    #[error("board size must be at least 2, got {0}")]
    BoardSize(usize),
    #[error("constructive clearing needs a positive multiple of 3, got {0}")]
    NotMultipleOfThree(usize),
    #[error("exhaustive search supports boards of at most 64 cells, got n = {0}")]
    TooLargeForSearch(usize),
    #[error("move {index} ({mv}) is invalid: {source}")]
    InvalidMove {
        index: usize,
        mv: Move,
        #[source]
        source: MoveError,
    },
    #[error("sequence leaves {0} stones on the board")]
    NotCleared(usize),
    #[error("move identity failed for a valid sequence")]
    IdentityFailure,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Occupancy of an `n × n` board as a bitset, bit `(j−1)·n + (i−1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Board {
    n: usize,
    bits: Vec<u64>,
}

impl Board {
    pub fn empty(n: usize) -> Result<Self, TrominoError> {
        if n < 2 {
            return Err(TrominoError::BoardSize(n));
        }
        Ok(Self { n, bits: vec![0; (n * n).div_ceil(64)] })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, j: usize) -> usize {
        (j - 1) * self.n + (i - 1)
    }

    pub fn in_range(&self, i: usize, j: usize) -> bool {
        (1..=self.n).contains(&i) && (1..=self.n).contains(&j)
    }

    pub fn is_occupied(&self, i: usize, j: usize) -> bool {
        if !self.in_range(i, j) {
            return false;
        }
        let k = self.index(i, j);
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize, on: bool) {
        let k = self.index(i, j);
        if on {
            self.bits[k / 64] |= 1 << (k % 64);
        } else {
            self.bits[k / 64] &= !(1 << (k % 64));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn stone_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Occupied cells in row-major order from the bottom-left.
    pub fn stones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (1..=n).flat_map(move |j| (1..=n).map(move |i| (i, j))).filter(|&(i, j)| self.is_occupied(i, j))
    }

    /// The bitset packed into one word; `None` for boards above 64 cells.
    pub fn as_u64(&self) -> Option<u64> {
        (self.n * self.n <= 64).then(|| self.bits[0])
    }

    pub fn apply(&self, m: Move) -> Result<Board, MoveError> {
        let mut next = self.clone();
        next.apply_mut(m)?;
        Ok(next)
    }

    pub fn apply_mut(&mut self, m: Move) -> Result<(), MoveError> {
        let n = self.n;
        let range = 1..=n;
        match m {
            Move::Place { i, j } => {
                if !(1..n).contains(&i) || !(1..n).contains(&j) {
                    return Err(MoveError::OutOfRange(m, n));
                }
                let cells = [(i, j), (i + 1, j), (i, j + 1)];
                if let Some(&(ci, cj)) = cells.iter().find(|&&(ci, cj)| self.is_occupied(ci, cj)) {
                    return Err(MoveError::CellOccupied { i: ci, j: cj });
                }
                for (ci, cj) in cells {
                    self.set(ci, cj, true);
                }
            }
            Move::ClearColumn { i } => {
                if !range.contains(&i) {
                    return Err(MoveError::OutOfRange(m, n));
                }
                if !(1..=n).all(|j| self.is_occupied(i, j)) {
                    return Err(MoveError::ColumnNotFull(i));
                }
                (1..=n).for_each(|j| self.set(i, j, false));
            }
            Move::ClearRow { j } => {
                if !range.contains(&j) {
                    return Err(MoveError::OutOfRange(m, n));
                }
                if !(1..=n).all(|i| self.is_occupied(i, j)) {
                    return Err(MoveError::RowNotFull(j));
                }
                (1..=n).for_each(|i| self.set(i, j, false));
            }
        }
        Ok(())
    }

    /// Replay `moves` from this board, naming the first invalid move.
    pub fn replay(&self, moves: &[Move]) -> Result<Board, TrominoError> {
        let mut board = self.clone();
        for (index, &mv) in moves.iter().enumerate() {
            board.apply_mut(mv).map_err(|source| TrominoError::InvalidMove { index, mv, source })?;
        }
        Ok(board)
    }

    /// Every move that is legal from this position, in a fixed order.
    pub fn legal_moves(&self) -> Vec<Move> {
        let n = self.n;
        let places = (1..n).flat_map(|j| (1..n).map(move |i| Move::Place { i, j }));
        let cols = (1..=n).map(|i| Move::ClearColumn { i });
        let rows = (1..=n).map(|j| Move::ClearRow { j });
        places.chain(cols).chain(rows).filter(|&m| self.apply(m).is_ok()).collect()
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (1..=self.n).rev() {
            let row: String = (1..=self.n).map(|i| if self.is_occupied(i, j) { '#' } else { '.' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Clear a board whose side is a multiple of 3 by working cage by cage.
///
/// Each 3×3 cage gets two trominoes, which fills its middle column; the
/// middle columns are cleared, a third tromino per cage then completes the
/// bottom two rows of every cage, and those rows are cleared.
pub fn constructive_clear(n: usize) -> Result<MoveSequence, TrominoError> {
    if n == 0 || !n.is_multiple_of(3) {
        return Err(TrominoError::NotMultipleOfThree(n));
    }
    let cages = n / 3;
    let corners: Vec<(usize, usize)> =
        (0..cages).flat_map(|a| (0..cages).map(move |b| (3 * a + 1, 3 * b + 1))).collect();
    let mut moves = Vec::with_capacity(3 * cages * cages + n);
    for &(i, j) in &corners {
        moves.push(Move::Place { i, j });
        moves.push(Move::Place { i: i + 1, j: j + 1 });
    }
    moves.extend((0..cages).map(|a| Move::ClearColumn { i: 3 * a + 2 }));
    moves.extend(corners.iter().map(|&(i, j)| Move::Place { i: i + 1, j }));
    for b in 0..cages {
        moves.push(Move::ClearRow { j: 3 * b + 1 });
        moves.push(Move::ClearRow { j: 3 * b + 2 });
    }
    Ok(moves)
}

/// A random legal game of up to `steps` moves from the empty board.
///
/// Clearing moves are preferred when available so that long games keep
/// returning stones to the pool.
pub fn random_play(n: usize, steps: usize, rng: &mut impl Rng) -> Result<MoveSequence, TrominoError> {
    let mut board = Board::empty(n)?;
    let mut moves = Vec::with_capacity(steps);
    for _ in 0..steps {
        let legal = board.legal_moves();
        let clears: Vec<Move> = legal.iter().copied().filter(|m| !matches!(m, Move::Place { .. })).collect();
        let pick = if !clears.is_empty() && rng.gen_bool(0.8) { clears.choose(rng) } else { legal.choose(rng) };
        let Some(&mv) = pick else { break };
        board.apply_mut(mv).expect("legal move");
        moves.push(mv);
    }
    Ok(moves)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board_with(n: usize, moves: &[Move]) -> Board {
        Board::empty(n).unwrap().replay(moves).unwrap()
    }

    #[test]
    fn place_footprint() {
        let b = board_with(3, &[Move::Place { i: 1, j: 1 }]);
        assert_eq!(b.stones().collect::<Vec<_>>(), vec![(1, 1), (2, 1), (1, 2)]);
    }

    #[test]
    fn clear_center_column() {
        let b = board_with(
            3,
            &[Move::Place { i: 1, j: 1 }, Move::Place { i: 2, j: 2 }, Move::ClearColumn { i: 2 }],
        );
        let mut stones: Vec<_> = b.stones().collect();
        stones.sort();
        assert_eq!(stones, vec![(1, 1), (1, 2), (3, 2)]);
    }

    #[test]
    fn move_errors_are_distinct() {
        let b = board_with(3, &[Move::Place { i: 1, j: 1 }]);
        assert_eq!(b.apply(Move::Place { i: 1, j: 1 }), Err(MoveError::CellOccupied { i: 1, j: 1 }));
        assert_eq!(b.apply(Move::ClearColumn { i: 1 }), Err(MoveError::ColumnNotFull(1)));
        assert_eq!(b.apply(Move::ClearRow { j: 1 }), Err(MoveError::RowNotFull(1)));
        assert!(matches!(b.apply(Move::Place { i: 3, j: 1 }), Err(MoveError::OutOfRange(..))));
        assert!(matches!(b.apply(Move::ClearRow { j: 0 }), Err(MoveError::OutOfRange(..))));
        assert!(matches!(b.apply(Move::ClearColumn { i: 4 }), Err(MoveError::OutOfRange(..))));
    }

    #[test]
    fn board_size_guard() {
        assert!(matches!(Board::empty(1), Err(TrominoError::BoardSize(1))));
    }

    #[test]
    fn constructive_n3_matches_hand_run() {
        let moves = constructive_clear(3).unwrap();
        assert_eq!(
            moves,
            vec![
                Move::Place { i: 1, j: 1 },
                Move::Place { i: 2, j: 2 },
                Move::ClearColumn { i: 2 },
                Move::Place { i: 2, j: 1 },
                Move::ClearRow { j: 1 },
                Move::ClearRow { j: 2 },
            ]
        );
        assert!(board_with(3, &moves).is_empty());
    }

    #[test]
    fn constructive_lengths_and_round_trip() {
        for n in [3, 6, 9, 12] {
            let moves = constructive_clear(n).unwrap();
            assert_eq!(moves.len(), 3 * (n / 3) * (n / 3) + n);
            assert!(board_with(n, &moves).is_empty(), "n = {n}");
        }
        assert!(matches!(constructive_clear(4), Err(TrominoError::NotMultipleOfThree(4))));
        assert!(matches!(constructive_clear(0), Err(TrominoError::NotMultipleOfThree(0))));
    }

    #[test]
    fn move_json_shape() {
        let moves = vec![Move::Place { i: 1, j: 2 }, Move::ClearColumn { i: 3 }, Move::ClearRow { j: 1 }];
        let text = serde_json::to_string(&moves).unwrap();
        assert_eq!(text, r#"[{"op":"place","i":1,"j":2},{"op":"clear_col","i":3},{"op":"clear_row","j":1}]"#);
        let back: Vec<Move> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, moves);
    }

    #[test]
    fn replay_names_failing_index() {
        let err = Board::empty(3)
            .unwrap()
            .replay(&[Move::Place { i: 1, j: 1 }, Move::Place { i: 1, j: 1 }])
            .unwrap_err();
        assert!(matches!(err, TrominoError::InvalidMove { index: 1, .. }));
    }
}
