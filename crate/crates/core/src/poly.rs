//! The polynomials `P_p(X) = X^p - 2X^{p-2} - 1` and its cofactor `chi_p`,
//! plus bisection for the positive root `lambda_p`.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default tolerance for `lambda_p`.
pub const DEFAULT_LAMBDA_TOL: f64 = 1e-12;

/// Dense integer polynomial, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation; exact when `x` is rational.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| {
            acc * x + Scalar::from(num::rational::BigRational::from_integer(c.clone()))
        })
    }

    /// Horner evaluation in binary64.
    pub fn eval_f64(&self, x: f64) -> f64 {
        use num::traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPolynomial::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

pub fn check_odd_period(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        Err(Error::InvalidPeriod(p))
    } else {
        Ok(())
    }
}

/// `X^p - 2X^{p-2} - 1`.
pub fn p_polynomial(p: u64) -> Result<IntPolynomial> {
    check_odd_period(p)?;
    let p = p as usize;
    let mut c = vec![BigInt::zero(); p + 1];
    c[0] = BigInt::from(-1);
    c[p - 2] = BigInt::from(-2);
    c[p] = BigInt::one();
    Ok(IntPolynomial::new(c))
}

/// `X^{p-1} - X^{p-2} - sum_{i=0}^{p-3} (-X)^i`, the cofactor with
/// `P_p = (X + 1) chi_p`.
pub fn chi_polynomial(p: u64) -> Result<IntPolynomial> {
    check_odd_period(p)?;
    let p = p as usize;
    let mut c = vec![BigInt::zero(); p];
    for (i, ci) in c.iter_mut().enumerate().take(p - 2) {
        *ci = if i % 2 == 0 { BigInt::from(-1) } else { BigInt::one() };
    }
    c[p - 2] -= 1;
    c[p - 1] += 1;
    Ok(IntPolynomial::new(c))
}

pub fn eval_p(p: u64, x: &Scalar) -> Result<Scalar> {
    Ok(p_polynomial(p)?.eval(x))
}

pub fn eval_chi(p: u64, x: &Scalar) -> Result<Scalar> {
    Ok(chi_polynomial(p)?.eval(x))
}

/// The unique positive root of `P_p`, to within `tol`, by sign-change
/// bisection on `[sqrt 2, 2]`.
pub fn lambda_p(p: u64, tol: f64) -> Result<Scalar> {
    let poly = p_polynomial(p)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parse(format!("tolerance must be positive, got {tol}")));
    }
    // P(sqrt 2) = -1, P(2) = 2^{p-1} - 1.
    let mut lo = std::f64::consts::SQRT_2;
    let mut hi = 2.0_f64;
    debug_assert!(poly.eval_f64(lo) < 0.0 && poly.eval_f64(hi) > 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly.eval_f64(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Scalar::float(0.5 * (lo + hi))
}
