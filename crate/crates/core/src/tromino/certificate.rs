use num_bigint::BigInt;
use serde::Serialize;

use super::{Board, Move, MoveError, TrominoError};
use crate::algebra::{
    find_nonroot, poly_eval_roots, verify_move_identity, BivariatePoly, EisensteinInt, RootOfUnity,
    UnivariatePoly,
};

/// `Σ ω^{(i−1) + 2(j−1)}` over the occupied cells.
///
/// Every tromino contributes `ω^e(1 + ω + ω²) = 0`, and a full row or
/// column contributes zero when `3 | n`, so for those boards the value is
/// conserved by every move.
pub fn eisenstein_invariant(board: &Board) -> EisensteinInt {
    board.stones().map(|(i, j)| EisensteinInt::omega_pow((i as i64 - 1) + 2 * (j as i64 - 1))).sum()
}

/// How often each move was made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTally {
    pub n: usize,
    /// `place[i−1][j−1]`: trominoes placed with lower-left corner `(i, j)`.
    pub place: Vec<Vec<u64>>,
    /// `columns[i−1]`: times column `i` was cleared.
    pub columns: Vec<u64>,
    /// `rows[j−1]`: times row `j` was cleared.
    pub rows: Vec<u64>,
}

impl MoveTally {
    pub fn from_moves(n: usize, moves: &[Move]) -> Result<Self, TrominoError> {
        Board::empty(n)?;
        let mut tally =
            Self { n, place: vec![vec![0; n - 1]; n - 1], columns: vec![0; n], rows: vec![0; n] };
        for (index, &mv) in moves.iter().enumerate() {
            let slot = match mv {
                Move::Place { i, j } if (1..n).contains(&i) && (1..n).contains(&j) => &mut tally.place[i - 1][j - 1],
                Move::ClearColumn { i } if (1..=n).contains(&i) => &mut tally.columns[i - 1],
                Move::ClearRow { j } if (1..=n).contains(&j) => &mut tally.rows[j - 1],
                _ => return Err(TrominoError::InvalidMove { index, mv, source: MoveError::OutOfRange(mv, n) }),
            };
            *slot += 1;
        }
        Ok(tally)
    }

    /// `P(x, y) = Σ a_{i,j} x^{i−1} y^{j−1}`.
    pub fn p(&self) -> BivariatePoly {
        let mut p = BivariatePoly::with_bounds(self.n - 2, self.n - 2);
        for (i, row) in self.place.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                p.add_term(i, j, &BigInt::from(a));
            }
        }
        p
    }

    /// `Q(x) = Σ c_i x^{i−1}`.
    pub fn q(&self) -> UnivariatePoly {
        UnivariatePoly::from_coeffs(self.columns.iter().copied())
    }

    /// `R(y) = Σ r_j y^{j−1}`.
    pub fn r(&self) -> UnivariatePoly {
        UnivariatePoly::from_coeffs(self.rows.iter().copied())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonrootReport {
    pub a1: RootOfUnity,
    pub a2: RootOfUnity,
    /// `P(a1, a2)` as `[re, im]`.
    pub p_value: [f64; 2],
    /// Exact `P(a1, a2)` in `Z[ω]`, when both roots are cube roots of unity.
    pub p_value_exact: Option<String>,
    /// Whether `1 + a1 + a2 = 0`.
    pub sum_vanishes: bool,
    /// Whether `sum_vanishes` was decided exactly in `Z[ω]`.
    pub sum_exact: bool,
    /// `a1` and `a2` are both primitive cube roots of unity, which forces `3 | n`.
    pub cube_roots: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub n: usize,
    pub move_count: usize,
    pub p: String,
    pub q: String,
    pub r: String,
    pub identity_holds: bool,
    pub nonroot: Option<NonrootReport>,
}

/// Replay `moves` from the empty board, build the tally polynomials, check
/// the move identity, and (when `P ≠ 0`) locate a nonroot of `P` among the
/// nonunit `n`-th roots of unity.
pub fn tally_and_certify(moves: &[Move], n: usize) -> Result<CertificateReport, TrominoError> {
    let end = Board::empty(n)?.replay(moves)?;
    if !end.is_empty() {
        return Err(TrominoError::NotCleared(end.stone_count()));
    }
    let tally = MoveTally::from_moves(n, moves)?;
    let (p, q, r) = (tally.p(), tally.q(), tally.r());
    if !verify_move_identity(&p, &q, &r, n)? {
        return Err(TrominoError::IdentityFailure);
    }

    let nonroot = if p.is_zero() {
        None
    } else {
        let (a1, a2) = find_nonroot(&p, &RootOfUnity::nonunit(n as u32))?;
        let eval = poly_eval_roots(&p, a1, a2)?;
        let sum = BivariatePoly::from_terms([(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
        let sum_eval = poly_eval_roots(&sum, a1, a2)?;
        let is_primitive_cube = |r: RootOfUnity| matches!(r.omega_exponent().map(|e| e.rem_euclid(3)), Some(1 | 2));
        Some(NonrootReport {
            a1,
            a2,
            p_value: [eval.value.re, eval.value.im],
            p_value_exact: eval.exact.as_ref().map(ToString::to_string),
            sum_vanishes: sum_eval.is_zero,
            sum_exact: sum_eval.exact.is_some(),
            cube_roots: is_primitive_cube(a1) && is_primitive_cube(a2),
        })
    };

    Ok(CertificateReport {
        n,
        move_count: moves.len(),
        p: p.to_string(),
        q: q.in_x().to_string(),
        r: r.in_y().to_string(),
        identity_holds: true,
        nonroot,
    })
}
