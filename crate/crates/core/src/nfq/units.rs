use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Element, Field, QuadraticField};
use crate::arith::isqrt;
use crate::real::Real;

/// Fundamental unit `eps > 1` of a real quadratic field and its norm.
///
/// Runs the continued fraction of `omega = (P + sqrt D)/Q` and stops at the
/// first convergent `p/q` with `N(p - q omega) = +-1`.
pub fn fundamental_unit(k: &QuadraticField) -> (Element, i32) {
    assert!(k.is_real(), "fundamental unit of an imaginary field");
    let dd = BigInt::from(k.d);
    let s = BigInt::from(isqrt(k.d as u128) as i64);
    let (mut pp, mut qq) = if k.t == 1 {
        (BigInt::one(), BigInt::from(2))
    } else {
        (BigInt::zero(), BigInt::one())
    };
    let (t, n0) = (BigInt::from(k.t), BigInt::from(k.n0));
    // convergents p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    loop {
        let a = (&pp + &s) / &qq;
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        let norm = &p * &p - &p * &q * &t - &q * &q * &n0;
        if norm.abs().is_one() {
            let sign = if norm.is_positive() { 1 } else { -1 };
            let eps = Element::new(
                BigRational::from_integer(&p - &q * &t),
                BigRational::from_integer(q),
            );
            return (eps, sign);
        }
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        pp = &a * &qq - &pp;
        qq = (&dd - &pp * &pp) / &qq;
    }
}

/// Regulator: `log eps` for real quadratic fields, and 1 when the unit
/// rank is zero.
pub fn regulator(field: &Field, prec: u32) -> Real {
    match field {
        Field::Quadratic(k) if k.is_real() => {
            let (eps, _) = fundamental_unit(k);
            field.real_embedding(&eps, 0).to_real(prec + 32).ln(prec)
        }
        _ => Real::one(),
    }
}
