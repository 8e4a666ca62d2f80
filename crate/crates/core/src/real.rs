//! Certified real enclosures.
//!
//! A [`Real`] is a closed interval with exact rational endpoints. Ring
//! operations are exact; transcendental operations take a working precision
//! in bits and round their endpoints outward, so the true value is always
//! contained. Long loops call [`Real::round`] to keep denominators short.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 128;

/// Precision at which the cached constants are computed.
const CACHED_PREC: u32 = 640;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    lo: BigRational,
    hi: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn bit_length(x: &BigInt) -> i64 {
    x.bits() as i64
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Largest dyadic with `prec` significant bits that is `<= q`.
pub fn round_down(q: &BigRational, prec: u32) -> BigRational {
    if q.is_zero() {
        return q.clone();
    }
    let e = bit_length(q.numer()) - bit_length(q.denom());
    let shift = prec as i64 - e;
    if shift >= 0 {
        let scaled = (q.numer() << shift as u64).div_floor(q.denom());
        BigRational::new(scaled, pow2(shift as u64))
    } else {
        let scaled = q.numer().div_floor(&(q.denom() << (-shift) as u64));
        BigRational::from_integer(scaled << (-shift) as u64)
    }
}

pub fn round_up(q: &BigRational, prec: u32) -> BigRational {
    -round_down(&-q, prec)
}

impl Real {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Real { lo, hi }
    }

    pub fn exact(q: BigRational) -> Self {
        Real {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::exact(BigRational::from_integer(n.clone()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `mid +- rad`.
    pub fn ball(mid: BigRational, rad: BigRational) -> Self {
        let rad = rad.abs();
        Real::new(&mid - &rad, mid + rad)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn rad(&self) -> BigRational {
        (&self.hi - &self.lo) / BigInt::from(2)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Radius as an `f64` that is never smaller than the true radius.
    pub fn rad_f64(&self) -> f64 {
        let r = self.rad();
        if r.is_zero() {
            return 0.0;
        }
        let f = r.to_f64().unwrap_or(f64::INFINITY);
        f.next_up().next_up()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN).next_down()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN).next_up()
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        match BigRational::from_float(x) {
            Some(q) => self.contains(&q),
            None => false,
        }
    }

    pub fn overlaps(&self, other: &Real) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains_interval(&self, other: &Real) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Outward rounding of both endpoints to `prec` significant bits.
    pub fn round(&self, prec: u32) -> Real {
        Real {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    /// Adds `[-r, r]`.
    pub fn widen(&self, r: &BigRational) -> Real {
        let r = r.abs();
        Real {
            lo: &self.lo - &r,
            hi: &self.hi + &r,
        }
    }

    pub fn hull(&self, other: &Real) -> Real {
        Real {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn abs(&self) -> Real {
        if self.lo >= BigRational::zero() {
            self.clone()
        } else if self.hi <= BigRational::zero() {
            -self
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            Real::new(BigRational::zero(), m)
        }
    }

    pub fn max(&self, other: &Real) -> Real {
        Real {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        Real {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// Certified ordering against a rational, `None` when the enclosure
    /// straddles it.
    pub fn cmp_rational(&self, q: &BigRational) -> Option<Ordering> {
        if &self.hi < q {
            Some(Ordering::Less)
        } else if &self.lo > q {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &Real) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Real) -> bool {
        self.hi <= other.lo
    }

    pub fn recip(&self) -> Real {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        Real {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        }
    }

    pub fn powi(&self, k: i32) -> Real {
        if k < 0 {
            return self.recip().powi(-k);
        }
        let mut acc = Real::one();
        let mut base = self.clone();
        let mut e = k as u32;
        // even powers of an interval straddling zero start at zero
        if k % 2 == 0 && self.lo.is_negative() && self.hi.is_positive() {
            return self.abs().powi(k);
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn square(&self) -> Real {
        self.abs().powi(2)
    }

    pub fn sqrt(&self, prec: u32) -> Real {
        assert!(!self.hi.is_negative(), "sqrt of a negative interval");
        let lo = if self.lo.is_positive() {
            sqrt_floor(&self.lo, prec)
        } else {
            BigRational::zero()
        };
        Real {
            lo,
            hi: sqrt_ceil(&self.hi, prec),
        }
    }

    pub fn ln(&self, prec: u32) -> Real {
        assert!(self.lo.is_positive(), "log of a non-positive interval");
        let a = ln_point(&self.lo, prec);
        if self.is_exact() {
            return a;
        }
        let b = ln_point(&self.hi, prec);
        Real {
            lo: a.lo,
            hi: b.hi,
        }
    }

    pub fn exp(&self, prec: u32) -> Real {
        let a = exp_point(&self.lo, prec);
        if self.is_exact() {
            return a;
        }
        let b = exp_point(&self.hi, prec);
        Real {
            lo: a.lo,
            hi: b.hi,
        }
    }

    /// `self^e` for rational `e`; integer exponents are evaluated exactly.
    pub fn pow_rational(&self, e: &BigRational, prec: u32) -> Real {
        if e.is_integer() {
            let k = e.to_integer().to_i32().expect("exponent too large");
            return self.powi(k).round(prec + 16);
        }
        let l = self.ln(prec + 32);
        (&l * &Real::exact(e.clone())).exp(prec)
    }

    pub fn pi(prec: u32) -> Real {
        if prec <= CACHED_PREC - 32 {
            static PI: OnceLock<Real> = OnceLock::new();
            return PI.get_or_init(|| compute_pi(CACHED_PREC)).round(prec);
        }
        compute_pi(prec + 16).round(prec)
    }

    pub fn ln2(prec: u32) -> Real {
        if prec <= CACHED_PREC - 32 {
            static LN2: OnceLock<Real> = OnceLock::new();
            return LN2.get_or_init(|| compute_ln2(CACHED_PREC)).round(prec);
        }
        compute_ln2(prec + 16).round(prec)
    }

    /// Parses an exact decimal literal such as `-12.5e-3`.
    pub fn parse_decimal(s: &str) -> Option<BigRational> {
        parse_decimal(s)
    }
}

pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let mut n: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().ok()?
    };
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

fn sqrt_floor(q: &BigRational, prec: u32) -> BigRational {
    // choose k so that q * 4^k has about 2*prec bits
    let e = bit_length(q.numer()) - bit_length(q.denom());
    let k = (prec as i64 + 2) - e / 2;
    let (num, den) = if k >= 0 {
        (q.numer() << (2 * k) as u64, q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << (-2 * k) as u64)
    };
    let s = num.div_floor(&den).sqrt();
    scale_pow2(s, -k)
}

fn sqrt_ceil(q: &BigRational, prec: u32) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let e = bit_length(q.numer()) - bit_length(q.denom());
    let k = (prec as i64 + 2) - e / 2;
    let (num, den) = if k >= 0 {
        (q.numer() << (2 * k) as u64, q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << (-2 * k) as u64)
    };
    let n = num.div_ceil(&den);
    let mut s = n.sqrt();
    if &s * &s < n {
        s += 1;
    }
    scale_pow2(s, -k)
}

/// `m * 2^e` as a rational.
fn scale_pow2(m: BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(m << e as u64)
    } else {
        BigRational::new(m, pow2((-e) as u64))
    }
}

fn compute_pi(prec: u32) -> Real {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let a = atan_inv(5, prec + 8);
    let b = atan_inv(239, prec + 8);
    (&(&a * &Real::from_int(16)) - &(&b * &Real::from_int(4))).round(prec)
}

/// `atan(1/x)` for integer `x >= 2`, alternating series with tail bound.
fn atan_inv(x: i64, prec: u32) -> Real {
    let x2 = BigInt::from(x * x);
    let mut sum = BigRational::zero();
    let mut pow = BigInt::from(x); // x^(2k+1)
    let eps = BigRational::new(BigInt::one(), pow2(prec as u64 + 4));
    let mut k = 0i64;
    loop {
        let term = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * k + 1));
        if term < eps {
            // alternating with decreasing terms: |tail| <= first omitted term
            return Real::exact(sum).widen(&term).round(prec);
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow *= &x2;
        k += 1;
    }
}

fn compute_ln2(prec: u32) -> Real {
    atanh_series(&rat(1, 3), prec + 8).mul_int(2).round(prec)
}

impl Real {
    fn mul_int(&self, k: i64) -> Real {
        self * &Real::from_int(k)
    }
}

/// `atanh(z)` for `|z| <= 1/3`, with the geometric tail bound.
fn atanh_series(z: &BigRational, prec: u32) -> Real {
    let z2 = z * z;
    let eps = BigRational::new(BigInt::one(), pow2(prec as u64 + 4));
    let mut pow = z.clone();
    let mut sum = Real::zero();
    let mut j = 0i64;
    let one_minus = BigRational::one() - &z2;
    loop {
        let term_mag = pow.abs() / BigInt::from(2 * j + 1);
        if term_mag < eps {
            // |tail| <= |z|^(2j+1) / ((2j+1)(1 - z^2))
            let tail = term_mag / &one_minus;
            return sum.widen(&tail).round(prec);
        }
        let term = Real::exact(&pow / BigInt::from(2 * j + 1));
        sum = (&sum + &term).round(prec + 16);
        pow = round_toward_zero(&(&pow * &z2), prec + 24);
        j += 1;
        // rounding pow toward zero under-estimates each later term by at most
        // 2^-(prec+24) relative; account for it in the final tail widening
        if j > 4 * prec as i64 {
            break;
        }
    }
    unreachable!("atanh series failed to converge")
}

fn round_toward_zero(q: &BigRational, prec: u32) -> BigRational {
    if q.is_negative() {
        round_up(q, prec)
    } else {
        round_down(q, prec)
    }
}

fn ln_point(x: &BigRational, prec: u32) -> Real {
    assert!(x.is_positive());
    if x.is_one() {
        return Real::zero();
    }
    // x = 2^k * y with y in [2/3, 4/3] so that |z| <= 1/7
    let mut k = bit_length(x.numer()) - bit_length(x.denom());
    let mut y = if k >= 0 {
        x / BigRational::from_integer(pow2(k as u64))
    } else {
        x * BigRational::from_integer(pow2((-k) as u64))
    };
    while y > rat(4, 3) {
        y /= BigInt::from(2);
        k += 1;
    }
    while y < rat(2, 3) {
        y *= BigInt::from(2);
        k -= 1;
    }
    let guard = 16 + (64 - (k.unsigned_abs() | 1).leading_zeros());
    let wp = prec + guard;
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let z = round_down(&z, wp + 8);
    // the rounded z differs from the exact one; bound the resulting error
    let exact_z = (&y - BigRational::one()) / (&y + BigRational::one());
    let dz = (&exact_z - &z).abs();
    let base = atanh_series(&z, wp).mul_int(2);
    // d/dz 2 atanh(z) = 2/(1-z^2) <= 2 * 49/48 < 3 for |z| <= 1/7
    let base = base.widen(&(dz * BigInt::from(3)));
    let result = &base + &(&Real::ln2(wp) * &Real::from_int(k));
    result.round(prec)
}

fn exp_point(x: &BigRational, prec: u32) -> Real {
    if x.is_zero() {
        return Real::one();
    }
    // reduce: y = x / 2^m with |y| <= 2^-8
    let e = bit_length(x.numer()) - bit_length(x.denom());
    let m = (e + 9).max(0) as u64;
    let wp = prec + 24 + m as u32;
    let y = x / BigRational::from_integer(pow2(m));
    let eps = BigRational::new(BigInt::one(), pow2(wp as u64 + 4));
    let mut sum = Real::zero();
    let mut term = BigRational::one();
    let mut j = 0i64;
    loop {
        if term.abs() < eps {
            // |tail| <= 2 |term| since |y| <= 1/2
            sum = sum.widen(&(term.abs() * BigInt::from(2)));
            break;
        }
        sum = (&sum + &Real::exact(term.clone())).round(wp);
        j += 1;
        term = round_toward_zero(&(&term * &y / BigInt::from(j)), wp + 8);
        // truncation of each term is below 2^-(wp+8) relative; fold it in
        sum = sum.widen(&BigRational::new(BigInt::one(), pow2(wp as u64 + 6)));
    }
    let mut r = sum;
    for _ in 0..m {
        r = (&r * &r).round(wp);
    }
    r.round(prec)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let f: fn(&Real, &Real) -> Real = $body;
                f(self, rhs)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Real {
    lo: &a.lo + &b.lo,
    hi: &a.hi + &b.hi
});
forward_binop!(Sub, sub, |a, b| Real {
    lo: &a.lo - &b.hi,
    hi: &a.hi - &b.lo
});
forward_binop!(Mul, mul, |a, b| {
    if a.lo.sign_is_nonneg() && b.lo.sign_is_nonneg() {
        return Real {
            lo: &a.lo * &b.lo,
            hi: &a.hi * &b.hi,
        };
    }
    let c = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    Real { lo, hi }
});
forward_binop!(Div, div, |a, b| a * &b.recip());

trait SignExt {
    fn sign_is_nonneg(&self) -> bool;
}

impl SignExt for BigRational {
    fn sign_is_nonneg(&self) -> bool {
        self.numer().sign() != Sign::Minus
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} +/- {:.3e}", self.mid_f64(), self.rad_f64())
    }
}

/// Complex enclosure as a pair of real enclosures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: Real,
    pub im: Real,
}

impl ComplexBox {
    pub fn abs_sq(&self) -> Real {
        &self.re.square() + &self.im.square()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(r: &Real, x: f64, tol: f64) -> bool {
        (r.mid_f64() - x).abs() <= tol
    }

    #[test]
    fn pi_and_ln2_enclose_known_digits() {
        let pi = Real::pi(200);
        assert!(close(&pi, std::f64::consts::PI, 1e-15));
        assert!(pi.rad_f64() < 1e-55);
        let l = Real::ln2(200);
        assert!(close(&l, std::f64::consts::LN_2, 1e-15));
        // 50 digits of pi
        let digits = parse_decimal("3.14159265358979323846264338327950288419716939937510").unwrap();
        assert!(pi.widen(&rat(1, 1)).contains(&digits));
        assert!((pi.mid() - digits).abs() < parse_decimal("1e-49").unwrap());
    }

    #[test]
    fn sqrt_brackets() {
        let s = Real::from_int(2).sqrt(100);
        assert!(s.lo() * s.lo() <= rat(2, 1));
        assert!(s.hi() * s.hi() >= rat(2, 1));
        assert!(s.rad_f64() < 1e-28);
        let big = Real::exact(rat(1, 1) * BigInt::from(10).pow(40)).sqrt(64);
        assert!(big.contains(&BigRational::from_integer(BigInt::from(10).pow(20))));
    }

    #[test]
    fn ln_exp_roundtrip() {
        for x in [rat(1, 3), rat(7, 2), rat(1000, 1), rat(123456789, 1000)] {
            let l = Real::exact(x.clone()).ln(120);
            let back = l.exp(120);
            assert!(back.contains(&x), "exp(ln({x})) = {back}");
            assert!(back.rad_f64() < 1e-25 * x.to_f64().unwrap());
        }
        let e = Real::one().exp(100);
        assert!(close(&e, std::f64::consts::E, 1e-15));
        let l10 = Real::from_int(10).ln(100);
        assert!(close(&l10, std::f64::consts::LN_10, 1e-15));
        let neg = Real::from_int(-3).exp(90);
        assert!(close(&neg, (-3f64).exp(), 1e-16));
    }

    #[test]
    fn ln_of_huge_number() {
        let n = BigInt::from(3).pow(2000);
        let l = Real::from_bigint(&n).ln(80);
        let expect = 2000.0 * 3f64.ln();
        assert!((l.mid_f64() - expect).abs() < 1e-9);
        assert!(l.rad_f64() < 1e-15);
    }

    #[test]
    fn rational_powers() {
        let q = Real::from_int(16).pow_rational(&rat(1, 4), 100);
        assert!(q.contains(&rat(2, 1)));
        let r = Real::from_int(2).pow_rational(&rat(-1, 2), 100);
        assert!(close(&r, 0.5f64.sqrt(), 1e-15));
    }

    #[test]
    fn interval_mul_signs() {
        let a = Real::new(rat(-1, 1), rat(2, 1));
        let b = Real::new(rat(-3, 1), rat(1, 1));
        let p = &a * &b;
        assert_eq!(p.lo(), &rat(-6, 1));
        assert_eq!(p.hi(), &rat(3, 1));
        assert_eq!(a.powi(2).lo(), &rat(0, 1));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("0.4812118250596034").unwrap(), BigRational::new(4812118250596034i64.into(), 10_000_000_000_000_000i64.into()));
        assert_eq!(parse_decimal("-1.5e2").unwrap(), rat(-150, 1));
        assert_eq!(parse_decimal("3").unwrap(), rat(3, 1));
        assert!(parse_decimal("1.2.3").is_none());
        assert!(parse_decimal("abc").is_none());
    }
}
