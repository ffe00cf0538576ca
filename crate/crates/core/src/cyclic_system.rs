//! The cyclic system in `2n` positive unknowns
//!
//! ```text
//! a_{2i−1} = 1/a_{2i−2} + 1/a_{2i},    a_{2i} = a_{2i−1} + a_{2i+1},
//! ```
//!
//! indices taken modulo `2n`. Its only positive solution is
//! `(1, 2, 1, 2, …)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CyclicError {
    #[error("n must be at least 4, got {0}")]
    TooSmall(usize),
    #[error("expected an even number of entries, got {0}")]
    OddLength(usize),
    #[error("entry {index} is not strictly positive ({value})")]
    NonPositive { index: usize, value: f64 },
    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    NotASolution { residual: f64, tol: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },
}

/// Values `a_1, …, a_{2n}`, accessed 1-based and cyclically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assignment {
    values: Vec<f64>,
}

impl Assignment {
    pub fn new(values: Vec<f64>) -> Result<Self, CyclicError> {
        if !values.len().is_multiple_of(2) {
            return Err(CyclicError::OddLength(values.len()));
        }
        if values.len() < 8 {
            return Err(CyclicError::TooSmall(values.len() / 2));
        }
        check_positive(&values)?;
        Ok(Self { values })
    }

    /// `a_odd = 1`, `a_even = 2`.
    pub fn canonical(n: usize) -> Result<Self, CyclicError> {
        Self::new((0..2 * n).map(|k| if k % 2 == 0 { 1.0 } else { 2.0 }).collect())
    }

    pub fn n(&self) -> usize {
        self.values.len() / 2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `a_i` with `i` taken modulo `2n` (so `a_0 = a_{2n}`).
    pub fn get(&self, i: isize) -> f64 {
        self.values[(i - 1).rem_euclid(self.values.len() as isize) as usize]
    }

    /// `(a_2, a_4, …, a_{2n})`.
    pub fn even_part(&self) -> Vec<f64> {
        self.values.iter().skip(1).step_by(2).copied().collect()
    }
}

fn check_positive(values: &[f64]) -> Result<(), CyclicError> {
    match values.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        Some(k) => Err(CyclicError::NonPositive { index: k + 1, value: values[k] }),
        None => Ok(()),
    }
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Entry `k−1` is the residual of equation `k`:
/// odd `k`: `a_k − 1/a_{k−1} − 1/a_{k+1}`; even `k`: `a_k − a_{k−1} − a_{k+1}`.
pub fn residual(x: &Assignment) -> Vec<f64> {
    (1..=2 * x.n() as isize)
        .map(|k| {
            let (prev, cur, next) = (x.get(k - 1), x.get(k), x.get(k + 1));
            if k % 2 == 1 {
                cur - 1.0 / prev - 1.0 / next
            } else {
                cur - prev - next
            }
        })
        .collect()
}

/// Residuals of the even-index system obtained by eliminating the odd
/// unknowns: `e_i − 1/e_{i−1} − 2/e_i − 1/e_{i+1}`.
pub fn reduced_residual(even: &[f64]) -> Result<Vec<f64>, CyclicError> {
    check_positive(even)?;
    let n = even.len();
    Ok((0..n)
        .map(|i| {
            let (prev, cur, next) = (even[(i + n - 1) % n], even[i], even[(i + 1) % n]);
            cur - 1.0 / prev - 2.0 / cur - 1.0 / next
        })
        .collect())
}

/// Analytic Jacobian of [`residual`]; row `k−1` differentiates equation `k`.
pub fn jacobian(x: &Assignment) -> DMatrix<f64> {
    let m = x.values.len();
    let mut jac = DMatrix::zeros(m, m);
    for row in 0..m {
        let (prev, next) = ((row + m - 1) % m, (row + 1) % m);
        jac[(row, row)] = 1.0;
        if row % 2 == 0 {
            // odd equation (1-based), depends on 1/a of its neighbours
            jac[(row, prev)] = 1.0 / (x.values[prev] * x.values[prev]);
            jac[(row, next)] = 1.0 / (x.values[next] * x.values[next]);
        } else {
            jac[(row, prev)] = -1.0;
            jac[(row, next)] = -1.0;
        }
    }
    jac
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub residual: f64,
    /// Sum of the even entries.
    pub sum_even: f64,
    /// `Σ 4/a_{2i}`; equal to `sum_even` at a solution.
    pub sum_four_over_even: f64,
    /// `Σ (1/a_{2i} + 1/a_{2i+2})²`; equal to `n` at a solution.
    pub sum_squared_pairs: f64,
    pub sum_identity_gap: f64,
    pub square_identity_gap: f64,
    /// Tolerances implied by the residual size.
    pub sum_identity_tol: f64,
    pub square_identity_tol: f64,
    /// Arithmetic mean minus harmonic mean of the even entries (≥ 0).
    pub hm_am_slack: f64,
    /// Quadratic-mean side minus arithmetic-mean side (≥ 0).
    pub qm_am_slack: f64,
    pub sum_identity_holds: bool,
    pub square_identity_holds: bool,
    pub inequalities_hold: bool,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.sum_identity_holds && self.square_identity_holds && self.inequalities_hold
    }
}

/// Relative slack allowed for floating-point round-off in the mean inequalities.
const ROUNDOFF: f64 = 1e-12;

/// The two mean inequalities on the even entries, as `(HM–AM slack, QM–AM slack)`.
pub fn mean_inequality_slacks(even: &[f64]) -> (f64, f64) {
    let n = even.len() as f64;
    let sum: f64 = even.iter().sum();
    let sum_inv: f64 = even.iter().map(|v| 1.0 / v).sum();
    let hm_am = sum / n - n / sum_inv;
    let pairs: Vec<f64> = (0..even.len()).map(|i| 1.0 / even[i] + 1.0 / even[(i + 1) % even.len()]).collect();
    let qm = pairs.iter().map(|p| p * p).sum::<f64>() / n;
    let am = pairs.iter().sum::<f64>() / n;
    (hm_am, qm - am * am)
}

/// Check the summed identities and the mean inequalities at a solution.
///
/// Writing `ρ` for the residual sup-norm, each reduced equation is off by at
/// most `3ρ`, so the summed identity is off by at most `3nρ` and the squared
/// identity (each reduced equation divided by `a_{2i}`) by at most
/// `3nρ / min a_{2i}`.
pub fn check_identities(x: &Assignment, tol: f64) -> Result<IdentityReport, CyclicError> {
    let res = sup_norm(&residual(x));
    if res >= tol {
        return Err(CyclicError::NotASolution { residual: res, tol });
    }
    let even = x.even_part();
    let n = even.len();
    let sum_even: f64 = even.iter().sum();
    let sum_four_over_even: f64 = even.iter().map(|v| 4.0 / v).sum();
    let sum_squared_pairs: f64 =
        (0..n).map(|i| (1.0 / even[i] + 1.0 / even[(i + 1) % n]).powi(2)).sum();
    let min_even = even.iter().cloned().fold(f64::INFINITY, f64::min);
    let bound = 3.0 * n as f64 * tol;
    let sum_identity_tol = bound + ROUNDOFF * (sum_even + sum_four_over_even);
    let square_identity_tol = bound / min_even + ROUNDOFF * (n as f64 + sum_squared_pairs);
    let sum_identity_gap = (sum_even - sum_four_over_even).abs();
    let square_identity_gap = (n as f64 - sum_squared_pairs).abs();
    let (hm_am_slack, qm_am_slack) = mean_inequality_slacks(&even);
    Ok(IdentityReport {
        n,
        residual: res,
        sum_even,
        sum_four_over_even,
        sum_squared_pairs,
        sum_identity_gap,
        square_identity_gap,
        sum_identity_tol,
        square_identity_tol,
        hm_am_slack,
        qm_am_slack,
        sum_identity_holds: sum_identity_gap <= sum_identity_tol,
        square_identity_holds: square_identity_gap <= square_identity_tol,
        inequalities_hold: hm_am_slack >= -ROUNDOFF * sum_even && qm_am_slack >= -ROUNDOFF,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinMaxReport {
    pub min: f64,
    pub max: f64,
    pub lower_chain_holds: bool,
    pub upper_chain_holds: bool,
    pub spread: f64,
    pub spread_within_tol: bool,
}

/// With `m`, `M` the extreme even entries: `m ≥ 2/m + 2/M ≥ M`, forcing `m = M`.
pub fn minmax_check(x: &Assignment, tol: f64) -> Result<MinMaxReport, CyclicError> {
    let even = x.even_part();
    let res = sup_norm(&reduced_residual(&even)?);
    if res >= tol {
        return Err(CyclicError::NotASolution { residual: res, tol });
    }
    let min = even.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = even.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let middle = 2.0 / min + 2.0 / max;
    Ok(MinMaxReport {
        min,
        max,
        lower_chain_holds: min >= middle - tol,
        upper_chain_holds: middle >= max - tol,
        spread: max - min,
        spread_within_tol: max - min < tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub max_halvings: usize,
    /// Attempts to step around a singular Jacobian by nudging the iterate.
    pub singular_retries: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iters: 200, max_halvings: 40, singular_retries: 3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub assignment: Assignment,
    pub iterations: usize,
    pub residual: f64,
}

/// Damped Newton iteration on the full `2n`-dimensional residual.
///
/// Each step halves its length until every entry stays positive and the
/// Euclidean residual norm decreases.
pub fn solve(initial: &Assignment, cfg: SolverConfig) -> Result<Solution, CyclicError> {
    let mut x = initial.clone();
    let mut r = DVector::from_vec(residual(&x));
    let mut retries = 0;
    for iteration in 0..cfg.max_iters {
        let sup = r.amax();
        if sup < cfg.tol {
            return Ok(Solution { assignment: x, iterations: iteration, residual: sup });
        }
        let Some(delta) = jacobian(&x).lu().solve(&(-&r)) else {
            if retries == cfg.singular_retries {
                return Err(CyclicError::SingularJacobian { iteration });
            }
            retries += 1;
            for (k, v) in x.values.iter_mut().enumerate() {
                *v *= 1.0 + 1e-6 * if k % 2 == 0 { 1.0 } else { -1.0 };
            }
            r = DVector::from_vec(residual(&x));
            continue;
        };
        let norm = r.norm();
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<f64> = x.values.iter().zip(delta.iter()).map(|(v, d)| v + step * d).collect();
            if trial.iter().all(|&v| v > 0.0 && v.is_finite()) {
                let cand = Assignment { values: trial };
                let cand_r = DVector::from_vec(residual(&cand));
                if cand_r.norm() < norm {
                    accepted = Some((cand, cand_r));
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((cand, cand_r)) => {
                x = cand;
                r = cand_r;
            }
            None => return Err(CyclicError::NoConvergence { iterations: iteration, residual: sup }),
        }
    }
    let sup = r.amax();
    if sup < cfg.tol {
        Ok(Solution { assignment: x, iterations: cfg.max_iters, residual: sup })
    } else {
        Err(CyclicError::NoConvergence { iterations: cfg.max_iters, residual: sup })
    }
}
