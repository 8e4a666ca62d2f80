//! Exponent bookkeeping for the convergence argument, all in exact
//! rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::divisors;
use crate::error::{Error, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentContext {
    pub m: u32,
    pub e: u32,
    pub n: u32,
    pub g: u32,
    /// `m (e-g)(n+1) - 1`
    pub mu: BigRational,
    /// `m (g^2 + g + e^2/g + e)`
    pub gamma_g: BigRational,
    /// `m e (e+1)`
    pub gamma: BigRational,
    /// `e (e-1) m + 1/8`
    pub beta: BigRational,
}

impl ExponentContext {
    /// `gamma_g + beta - mu`.
    pub fn slack(&self) -> BigRational {
        &self.gamma_g + &self.beta - &self.mu
    }
}

/// Proper positive divisors of `e`.
pub fn admissible_g(e: u32) -> Vec<u32> {
    divisors(e as u64)
        .into_iter()
        .filter(|&g| g < e as u64)
        .map(|g| g as u32)
        .collect()
}

pub fn exponent_context(m: u32, e: u32, n: u32, g: u32) -> Result<ExponentContext> {
    if m == 0 || e == 0 || n == 0 {
        return Err(Error::InvalidArgument("m, e and n must be positive".into()));
    }
    if g == 0 || g > e / 2 || e % g != 0 {
        return Err(Error::InvalidG { g, e });
    }
    let (mi, ei, ni, gi) = (m as i64, e as i64, n as i64, g as i64);
    Ok(ExponentContext {
        m,
        e,
        n,
        g,
        mu: q(mi * (ei - gi) * (ni + 1) - 1),
        gamma_g: q(mi) * (q(gi * gi + gi + ei) + BigRational::new(BigInt::from(ei * ei), BigInt::from(gi))),
        gamma: q(mi * ei * (ei + 1)),
        beta: q(ei * (ei - 1) * mi) + BigRational::new(BigInt::one(), BigInt::from(8)),
    })
}

/// `E = 5e/2 + 4 + 2/(me)`.
pub fn dimension_threshold(m: u32, e: u32) -> BigRational {
    BigRational::new(BigInt::from(5 * e), BigInt::from(2))
        + q(4)
        + BigRational::new(BigInt::from(2), BigInt::from(m * e))
}

/// Smallest integer `n > E`.
pub fn minimal_n(m: u32, e: u32) -> u32 {
    let t = dimension_threshold(m, e);
    let f = t.numer().div_floor(t.denom());
    u32::try_from(f + 1).expect("small threshold")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentCheck {
    pub m: u32,
    pub e: u32,
    pub n: u32,
    /// `(g, gamma_g + beta - mu_g)` for every proper divisor `g`.
    pub rows: Vec<(u32, BigRational)>,
    /// `n + 1 >= E + 1 + 1/(2me)`.
    pub integrality_step: bool,
    pub passed: bool,
}

/// Verifies `gamma_g + beta - mu_g <= -1/8` for every proper divisor `g`
/// of `e` at the smallest admissible `n`.
pub fn exponent_check(m: u32, e: u32) -> Result<ExponentCheck> {
    if e < 2 {
        return Err(Error::InvalidArgument("lemma check needs e >= 2".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let n = minimal_n(m, e);
    let bound = -BigRational::new(BigInt::one(), BigInt::from(8));
    let mut rows = Vec::new();
    let mut passed = true;
    for g in admissible_g(e) {
        let ctx = exponent_context(m, e, n, g)?;
        let v = ctx.slack();
        passed &= v <= bound;
        rows.push((g, v));
    }
    let lhs = q(n as i64 + 1);
    let rhs = dimension_threshold(m, e) + q(1) + BigRational::new(BigInt::one(), BigInt::from(2 * m * e));
    let integrality_step = lhs >= rhs;
    Ok(ExponentCheck {
        m,
        e,
        n,
        rows,
        integrality_step,
        passed: passed && integrality_step,
    })
}

/// Schmidt's explicit constant `2^(me(e+n+3) + e^2 + n^2 + 10e + 10n)` as a
/// power of two.
pub fn schmidt_upper_exponent(m: u32, e: u32, n: u32) -> u32 {
    m * e * (e + n + 3) + e * e + n * n + 10 * e + 10 * n
}

/// `me(max(e, n) + 1)` and `me(e + n)`: exponents of Schmidt's bracket.
pub fn schmidt_exponents(m: u32, e: u32, n: u32) -> (u32, u32) {
    (m * e * (e.max(n) + 1), m * e * (e + n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::rat;

    #[test]
    fn worked_examples() {
        let c = exponent_context(1, 2, 11, 1).unwrap();
        assert_eq!((c.mu.clone(), c.gamma_g.clone(), c.gamma.clone(), c.beta.clone()), (rat(11, 1), rat(8, 1), rat(6, 1), rat(17, 8)));
        assert_eq!(c.slack(), rat(-7, 8));
        let c = exponent_context(2, 2, 11, 1).unwrap();
        assert_eq!((c.mu.clone(), c.gamma_g.clone(), c.gamma.clone(), c.beta.clone()), (rat(23, 1), rat(16, 1), rat(12, 1), rat(33, 8)));
        assert!(exponent_context(1, 4, 20, 2).is_ok());
        assert!(matches!(exponent_context(1, 4, 20, 3), Err(Error::InvalidG { g: 3, e: 4 })));
    }

    #[test]
    fn minimal_dimensions() {
        assert_eq!(minimal_n(1, 2), 11);
        assert_eq!(minimal_n(2, 2), 10);
        let r = exponent_check(2, 2).unwrap();
        assert_eq!(r.rows, vec![(1, rat(-7, 8))]);
        assert!(r.passed);
    }

    #[test]
    fn schmidt_constant() {
        assert_eq!(schmidt_upper_exponent(1, 2, 1), 47);
        assert_eq!(schmidt_exponents(1, 2, 1), (6, 6));
    }
}
