use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::EisensteinInt;

/// Dense polynomial `Σ d[i][j]·xⁱyʲ` with integer coefficients.
///
/// The storage shape is a declared bound; [`x_degree`](Self::x_degree) and
/// [`y_degree`](Self::y_degree) report the actual degrees.
#[derive(Clone, Debug, Default)]
pub struct BivariatePoly {
    coeffs: Vec<Vec<BigInt>>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_terms([(0, 0, c.into())])
    }

    /// Zero polynomial with storage for x-degree `n1` and y-degree `n2`.
    pub fn with_bounds(n1: usize, n2: usize) -> Self {
        Self { coeffs: vec![vec![BigInt::zero(); n2 + 1]; n1 + 1] }
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (usize, usize, C)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, &c.into());
        }
        p
    }

    /// `1 + x + ⋯ + x^{len−1}`.
    pub fn geometric_x(len: usize) -> Self {
        Self::from_terms((0..len).map(|i| (i, 0, 1)))
    }

    /// `1 + y + ⋯ + y^{len−1}`.
    pub fn geometric_y(len: usize) -> Self {
        Self::from_terms((0..len).map(|j| (0, j, 1)))
    }

    fn ensure(&mut self, i: usize, j: usize) {
        let width = self.coeffs.first().map_or(0, Vec::len).max(j + 1);
        if self.coeffs.len() < i + 1 {
            self.coeffs.resize_with(i + 1, Vec::new);
        }
        for row in &mut self.coeffs {
            row.resize(width, BigInt::zero());
        }
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        self.ensure(i, j);
        self.coeffs[i][j] += c;
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.coeffs.get(i).and_then(|row| row.get(j)).cloned().unwrap_or_default()
    }

    /// Nonzero terms as `(i, j, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, c)| (i, j, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.terms().map(|(i, _, _)| i).max()
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.terms().map(|(_, j, _)| j).max()
    }

    /// Trim storage down to the actual degrees.
    pub fn normalize(&mut self) {
        match (self.x_degree(), self.y_degree()) {
            (Some(n1), Some(n2)) => {
                self.coeffs.truncate(n1 + 1);
                for row in &mut self.coeffs {
                    row.truncate(n2 + 1);
                }
            }
            _ => self.coeffs.clear(),
        }
    }

    /// Sum of absolute values of the coefficients.
    pub fn coeff_mass(&self) -> f64 {
        self.terms().map(|(_, _, c)| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }

    pub fn eval_complex(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms()
            .map(|(i, j, c)| {
                x.powu(i as u32) * y.powu(j as u32) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Evaluate at `x = ω^kx`, `y = ω^ky` exactly in `Z[ω]`.
    pub fn eval_omega_powers(&self, kx: i64, ky: i64) -> EisensteinInt {
        self.terms()
            .map(|(i, j, c)| {
                let w = EisensteinInt::omega_pow(kx * i as i64 + ky * j as i64);
                &w * &EisensteinInt::new(c.clone(), 0)
            })
            .sum()
    }
}

impl PartialEq for BivariatePoly {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for BivariatePoly {}

impl<'a> Add<&'a BivariatePoly> for &'a BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl<'a> Sub<&'a BivariatePoly> for &'a BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        self + &(-rhs)
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly {
            coeffs: self.coeffs.iter().map(|row| row.iter().map(|c| -c).collect()).collect(),
        }
    }
}

impl<'a> Mul<&'a BivariatePoly> for &'a BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in rhs.terms() {
                out.add_term(i1 + i2, j1 + j2, &(c1 * c2));
            }
        }
        out
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by_key(|&(i, j, _)| (i + j, j));
        for (k, (i, j, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            match i {
                0 => {}
                1 => parts.push("x".to_string()),
                _ => parts.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("y".to_string()),
                _ => parts.push(format!("y^{j}")),
            }
            if parts.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{mag}*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Integer polynomial in one variable, `Σ c[k]·tᵏ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnivariatePoly(pub Vec<BigInt>);

impl UnivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = C>) -> Self {
        Self(coeffs.into_iter().map(Into::into).collect())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Embed as a polynomial in `x`.
    pub fn in_x(&self) -> BivariatePoly {
        BivariatePoly::from_terms(self.0.iter().enumerate().map(|(k, c)| (k, 0, c.clone())))
    }

    /// Embed as a polynomial in `y`.
    pub fn in_y(&self) -> BivariatePoly {
        BivariatePoly::from_terms(self.0.iter().enumerate().map(|(k, c)| (0, k, c.clone())))
    }
}
