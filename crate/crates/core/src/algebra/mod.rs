//! Exact algebra used by the tromino certificates: Eisenstein integers,
//! integer polynomials in two variables, and evaluation at roots of unity.

mod eisenstein;
mod poly;

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eisenstein::EisensteinInt;
pub use poly::{BivariatePoly, UnivariatePoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("roots of unity have different orders ({0} vs {1})")]
    MismatchedOrders(u32, u32),
    #[error("root of unity order must be positive")]
    ZeroOrder,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("root set of size {set} does not exceed polynomial degree {degree}")]
    SetTooSmall { set: usize, degree: usize },
    #[error("no nonroot found on the grid; the two-variable nonroot lemma forbids this")]
    NoNonroot,
    #[error("{name} has degree {degree}, above the bound {bound}")]
    DegreeBound { name: &'static str, degree: usize, bound: usize },
}

/// `e^{2πik/n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub n: u32,
    pub k: u32,
}

impl RootOfUnity {
    pub fn new(n: u32, k: i64) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::ZeroOrder);
        }
        Ok(Self { n, k: k.rem_euclid(n as i64) as u32 })
    }

    /// The n-th roots of unity other than 1.
    pub fn nonunit(n: u32) -> Vec<Self> {
        (1..n).map(|k| Self { n, k }).collect()
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.k as f64 / self.n as f64)
    }

    /// `Some(e)` when this root equals `ω^e`, i.e. when its order divides 3.
    pub fn omega_exponent(self) -> Option<i64> {
        let triple = 3 * self.k as u64;
        triple.is_multiple_of(self.n as u64).then(|| (triple / self.n as u64) as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2πi·{}/{})", self.k, self.n)
    }
}

/// Value of a polynomial at a pair of roots of unity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootEvaluation {
    pub value: Complex64,
    /// Present when the evaluation was carried out exactly in `Z[ω]`.
    pub exact: Option<EisensteinInt>,
    pub is_zero: bool,
}

/// Threshold below which a floating-point evaluation counts as zero.
pub fn zero_tolerance(p: &BivariatePoly) -> f64 {
    1e-9 * (1.0 + p.coeff_mass())
}

pub fn poly_eval_roots(
    p: &BivariatePoly,
    r1: RootOfUnity,
    r2: RootOfUnity,
) -> Result<RootEvaluation, AlgebraError> {
    if r1.n != r2.n {
        return Err(AlgebraError::MismatchedOrders(r1.n, r2.n));
    }
    if let (Some(e1), Some(e2)) = (r1.omega_exponent(), r2.omega_exponent()) {
        let exact = p.eval_omega_powers(e1, e2);
        return Ok(RootEvaluation { value: exact.to_complex(), is_zero: exact.is_zero(), exact: Some(exact) });
    }
    let value = p.eval_complex(r1.to_complex(), r2.to_complex());
    Ok(RootEvaluation { value, exact: None, is_zero: value.norm() < zero_tolerance(p) })
}

/// Scan `roots × roots` in order for a point where `p` does not vanish.
pub fn find_nonroot(
    p: &BivariatePoly,
    roots: &[RootOfUnity],
) -> Result<(RootOfUnity, RootOfUnity), AlgebraError> {
    let (Some(dx), Some(dy)) = (p.x_degree(), p.y_degree()) else {
        return Err(AlgebraError::ZeroPolynomial);
    };
    let degree = dx.max(dy);
    if roots.len() <= degree {
        return Err(AlgebraError::SetTooSmall { set: roots.len(), degree });
    }
    for &a1 in roots {
        for &a2 in roots {
            if !poly_eval_roots(p, a1, a2)?.is_zero {
                return Ok((a1, a2));
            }
        }
    }
    Err(AlgebraError::NoNonroot)
}

/// Whether `P(x,y)(1+x+y) − Q(x)(1+⋯+y^{n−1}) − R(y)(1+⋯+x^{n−1})` is the
/// zero polynomial.
pub fn verify_move_identity(
    p: &BivariatePoly,
    q: &UnivariatePoly,
    r: &UnivariatePoly,
    n: usize,
) -> Result<bool, AlgebraError> {
    let check = |name, degree: Option<usize>, bound: usize| match degree {
        Some(degree) if degree > bound => Err(AlgebraError::DegreeBound { name, degree, bound }),
        _ => Ok(()),
    };
    let p_bound = n.saturating_sub(2);
    check("P (x-degree)", p.x_degree(), p_bound)?;
    check("P (y-degree)", p.y_degree(), p_bound)?;
    check("Q", q.degree(), n.saturating_sub(1))?;
    check("R", r.degree(), n.saturating_sub(1))?;

    let step = BivariatePoly::from_terms([(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
    let lhs = &(p * &step) - &(&q.in_x() * &BivariatePoly::geometric_y(n));
    let lhs = &lhs - &(&r.in_y() * &BivariatePoly::geometric_x(n));
    Ok(lhs.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w() -> RootOfUnity {
        RootOfUnity { n: 3, k: 1 }
    }

    fn w2() -> RootOfUnity {
        RootOfUnity { n: 3, k: 2 }
    }

    fn tally_n3() -> BivariatePoly {
        BivariatePoly::from_terms([(0, 0, 1), (1, 0, 1), (1, 1, 1)])
    }

    #[test]
    fn eval_constructive_tally_is_two_plus_omega() {
        let e = poly_eval_roots(&tally_n3(), w(), w2()).unwrap();
        assert_eq!(e.exact, Some(EisensteinInt::new(2, 1)));
        assert!(!e.is_zero);
    }

    #[test]
    fn eval_one_plus_x_plus_y_vanishes() {
        let p = BivariatePoly::from_terms([(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
        let e = poly_eval_roots(&p, w(), w2()).unwrap();
        assert!(e.is_zero);
        assert_eq!(e.exact, Some(EisensteinInt::zero()));
    }

    #[test]
    fn eval_zero_polynomial() {
        let e = poly_eval_roots(&BivariatePoly::zero(), w(), w2()).unwrap();
        assert!(e.is_zero);
        let r5 = RootOfUnity { n: 5, k: 2 };
        assert!(poly_eval_roots(&BivariatePoly::zero(), r5, r5).unwrap().is_zero);
    }

    #[test]
    fn eval_rejects_mismatched_orders() {
        let err = poly_eval_roots(&tally_n3(), w(), RootOfUnity { n: 4, k: 1 }).unwrap_err();
        assert_eq!(err, AlgebraError::MismatchedOrders(3, 4));
    }

    #[test]
    fn float_path_for_other_orders() {
        // 1 + x + ... + x^4 vanishes at every nonunit fifth root
        let p = BivariatePoly::geometric_x(5);
        for r in RootOfUnity::nonunit(5) {
            let e = poly_eval_roots(&p, r, r).unwrap();
            assert!(e.exact.is_none());
            assert!(e.is_zero, "{r}: {}", e.value);
        }
        // sixth roots that are cube roots still evaluate exactly
        let e = poly_eval_roots(&p, RootOfUnity { n: 6, k: 2 }, RootOfUnity { n: 6, k: 4 }).unwrap();
        assert!(e.exact.is_some());
    }

    #[test]
    fn nonroot_examples() {
        let roots = RootOfUnity::nonunit(3);
        assert_eq!(find_nonroot(&BivariatePoly::constant(1), &roots).unwrap(), (w(), w()));
        assert_eq!(find_nonroot(&tally_n3(), &roots).unwrap(), (w(), w2()));
        let diff = BivariatePoly::from_terms([(1, 0, 1), (0, 1, -1)]);
        assert_eq!(find_nonroot(&diff, &roots).unwrap(), (w(), w2()));
    }

    #[test]
    fn nonroot_errors() {
        let roots = RootOfUnity::nonunit(3);
        assert_eq!(find_nonroot(&BivariatePoly::zero(), &roots), Err(AlgebraError::ZeroPolynomial));
        let cubic = BivariatePoly::from_terms([(2, 0, 1)]);
        assert_eq!(
            find_nonroot(&cubic, &roots),
            Err(AlgebraError::SetTooSmall { set: 2, degree: 2 })
        );
    }

    #[test]
    fn identity_examples() {
        let q = UnivariatePoly::from_coeffs([0, 1]);
        let r = UnivariatePoly::from_coeffs([1, 1]);
        assert!(verify_move_identity(&tally_n3(), &q, &r, 3).unwrap());
        for n in 2..8 {
            let z = UnivariatePoly::zero();
            assert!(verify_move_identity(&BivariatePoly::zero(), &z, &z, n).unwrap());
        }
        let z = UnivariatePoly::zero();
        assert!(!verify_move_identity(&BivariatePoly::constant(1), &z, &z, 3).unwrap());
    }

    #[test]
    fn identity_degree_bounds() {
        let z = UnivariatePoly::zero();
        let big = BivariatePoly::from_terms([(2, 0, 1)]);
        assert!(matches!(
            verify_move_identity(&big, &z, &z, 3),
            Err(AlgebraError::DegreeBound { degree: 2, bound: 1, .. })
        ));
        let q = UnivariatePoly::from_coeffs([0, 0, 0, 1]);
        assert!(verify_move_identity(&BivariatePoly::zero(), &q, &z, 3).is_err());
    }

    fn poly_strategy(n: usize) -> impl Strategy<Value = BivariatePoly> {
        let side = n - 1;
        proptest::collection::vec(-5i64..=5, side * side).prop_map(move |cs| {
            BivariatePoly::from_terms(cs.into_iter().enumerate().map(|(k, c)| (k / side, k % side, c)))
        })
    }

    proptest! {
        #[test]
        fn nonroot_always_exists_below_degree_bound(
            (n, p) in (3usize..=9).prop_flat_map(|n| (Just(n), poly_strategy(n)))
        ) {
            prop_assume!(!p.is_zero());
            let roots = RootOfUnity::nonunit(n as u32);
            let (a1, a2) = find_nonroot(&p, &roots).unwrap();
            prop_assert!(!poly_eval_roots(&p, a1, a2).unwrap().is_zero);
        }
    }
}
