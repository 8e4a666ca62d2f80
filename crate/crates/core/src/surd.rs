//! Exact quadratic irrationals `p + q sqrt(r)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::real::Real;

/// `p + q sqrt(r)` with rational `p`, `q` and a positive non-square `r`
/// (or `r = 1` together with `q = 0` for plain rationals).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    pub p: BigRational,
    pub q: BigRational,
    pub r: i64,
}

impl QuadSurd {
    pub fn rational(p: BigRational) -> Self {
        QuadSurd {
            p,
            q: BigRational::zero(),
            r: 1,
        }
    }

    pub fn new(p: BigRational, q: BigRational, r: i64) -> Self {
        assert!(r > 0, "radicand must be positive");
        let mut s = QuadSurd { p, q, r };
        if r == 1 {
            s.p += std::mem::replace(&mut s.q, BigRational::zero());
        }
        if s.q.is_zero() {
            s.r = 1;
        }
        s
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    fn radicand(&self, other: &QuadSurd) -> i64 {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.r,
            (_, true) => self.r,
            _ => {
                assert_eq!(self.r, other.r, "mixed radicands");
                self.r
            }
        }
    }

    pub fn add(&self, other: &QuadSurd) -> QuadSurd {
        let r = self.radicand(other);
        QuadSurd::new(&self.p + &other.p, &self.q + &other.q, r)
    }

    pub fn sub(&self, other: &QuadSurd) -> QuadSurd {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd::new(-&self.p, -&self.q, self.r)
    }

    pub fn mul(&self, other: &QuadSurd) -> QuadSurd {
        let r = self.radicand(other);
        let rr = BigRational::from_integer(BigInt::from(r));
        QuadSurd::new(
            &self.p * &other.p + &self.q * &other.q * rr,
            &self.p * &other.q + &self.q * &other.p,
            r,
        )
    }

    pub fn scale(&self, k: &BigRational) -> QuadSurd {
        QuadSurd::new(&self.p * k, &self.q * k, self.r)
    }

    pub fn conj(&self) -> QuadSurd {
        QuadSurd {
            p: self.p.clone(),
            q: -&self.q,
            r: self.r,
        }
    }

    /// `p^2 - r q^2`.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * BigInt::from(self.r)
    }

    pub fn pow(&self, k: u32) -> QuadSurd {
        let mut acc = QuadSurd::new(BigRational::one(), BigRational::zero(), self.r);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn signum(&self) -> i32 {
        let sp = sign(&self.p);
        let sq = sign(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // opposite signs: compare p^2 with q^2 r
        let p2 = &self.p * &self.p;
        let q2r = &self.q * &self.q * BigInt::from(self.r);
        match p2.cmp(&q2r) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> QuadSurd {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn cmp_surd(&self, other: &QuadSurd) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }

    pub fn max(&self, other: &QuadSurd) -> QuadSurd {
        if self.cmp_surd(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_real(&self, prec: u32) -> Real {
        let base = Real::exact(self.p.clone());
        if self.is_rational() {
            return base;
        }
        let root = Real::from_int(self.r).sqrt(prec + 8);
        (&base + &(&Real::exact(self.q.clone()) * &root)).round(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real(64).mid_f64()
    }
}

fn sign(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_surd(other))
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.p)
        } else if self.p.is_zero() {
            write!(f, "({})*sqrt({})", self.q, self.r)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.p, self.q, self.r)
        }
    }
}
