//! `zeta(s)`, `L(s, chi_Delta)` and `zeta_K(s)` at integers `s >= 2`.
//!
//! High-precision values come from Euler-Maclaurin applied to Hurwitz zeta
//! values `zeta(s, q)` in exact rational arithmetic. For `f(x) = (x+q)^(-s)`
//! all derivatives have constant sign and are monotone, so the remainder
//! after the last Bernoulli term is bounded by the first omitted term.
//!
//! Moderate tolerances for `L` use a direct `f64` sum with an explicit
//! rounding bound and the partial-summation tail
//! `|sum_(k>N) chi(k) k^-s| <= 2 S (N+1)^-s`, `S = max |sum_(k<=x) chi(k)|`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_fundamental_discriminant, kronecker};
use crate::error::{Error, Result};
use crate::nfq::FieldInvariants;
use crate::real::Real;

static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// `B_k` with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> BigRational {
    let mut table = BERNOULLI.lock().expect("bernoulli table");
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= k {
        // sum_(j<=m) binom(m+1, j) B_j = 0
        let m = table.len();
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += b * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        table.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    table[k].clone()
}

/// Binary precision sufficient for an absolute tolerance `tol`.
pub fn prec_for(tol: f64) -> u32 {
    let bits = if tol > 0.0 { -tol.log2() } else { 200.0 };
    (bits.max(0.0) as u32) + 24
}

fn tol_rational(tol: f64) -> BigRational {
    BigRational::from_float(tol).unwrap_or_else(|| BigRational::new(BigInt::one(), BigInt::one() << 200))
}

/// `zeta(s, q) = sum_(k>=0) (k+q)^-s` for `q` in `(0, 1]`.
pub fn hurwitz_zeta(s: u32, q: &BigRational, tol: f64) -> Real {
    assert!(s >= 2, "integer s >= 2 required");
    let prec = prec_for(tol);
    let tol_q = tol_rational(tol);
    let mut n_shift = 8 + prec as usize / 6;
    loop {
        if let Some(v) = hurwitz_em(s, q, n_shift, &tol_q, prec) {
            return v;
        }
        n_shift *= 2;
    }
}

fn hurwitz_em(s: u32, q: &BigRational, n_shift: usize, tol: &BigRational, prec: u32) -> Option<Real> {
    let rnd = |x: Real| x.round(prec + 16);
    let mut sum = Real::zero();
    for k in 0..n_shift {
        let x = Real::exact(q + BigRational::from_integer(BigInt::from(k)));
        sum = rnd(&sum + &x.powi(-(s as i32)));
    }
    let x = q + BigRational::from_integer(BigInt::from(n_shift));
    let xr = Real::exact(x.clone());
    let sm1 = Real::from_int(s as i64 - 1);
    // integral and half-endpoint terms
    sum = rnd(&sum + &(&xr.powi(1 - s as i32) * &sm1.recip()));
    sum = rnd(&sum + &(&xr.powi(-(s as i32)) * &Real::exact(BigRational::new(1.into(), 2.into()))));
    // Bernoulli terms B_2j/(2j)! s(s+1)...(s+2j-2) x^(-s-2j+1)
    let mut poch = BigRational::from_integer(BigInt::from(s));
    let mut fact = BigRational::from_integer(BigInt::from(2));
    let xinv = x.recip();
    let mut xpow = num_traits::pow(xinv.clone(), s as usize + 1);
    let mut prev: Option<BigRational> = None;
    for j in 1..400usize {
        let term = bernoulli(2 * j) / &fact * &poch * &xpow;
        let mag = term.abs();
        if let Some(p) = &prev {
            if &mag > p {
                return None;
            }
        }
        let bound = mag.clone();
        if &bound <= &(tol / BigRational::from_integer(4.into())) {
            // this term is the first omitted one
            return Some(rnd(sum.widen(&bound)));
        }
        sum = rnd(&sum + &Real::exact(term));
        prev = Some(mag);
        let a = BigInt::from(s as usize + 2 * j - 1);
        let b = BigInt::from(s as usize + 2 * j);
        poch = poch * BigRational::from_integer(&a * &b);
        fact = fact * BigRational::from_integer(BigInt::from((2 * j + 1) * (2 * j + 2)));
        xpow = xpow * &xinv * &xinv;
    }
    None
}

pub fn riemann_zeta(s: u32, tol: f64) -> Real {
    hurwitz_zeta(s, &BigRational::one(), tol)
}

/// Values of the Kronecker character `chi_Delta` on `0..|Delta|`.
pub fn character_table(disc: i64) -> Vec<i8> {
    let m = disc.unsigned_abs();
    (0..m).map(|k| if k == 0 { 0 } else { kronecker(disc, k) as i8 }).collect()
}

/// `max_x |sum_(k<=x) chi(k)|`, periodic with period `|Delta|`.
pub fn character_sum_max(table: &[i8]) -> u64 {
    let mut acc = 0i64;
    let mut best = 0i64;
    for &c in table {
        acc += c as i64;
        best = best.max(acc.abs());
    }
    best as u64
}

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
const DIRECT_TERMS_MAX: f64 = 4.0e6;

/// Cascade (pairwise) summation; error at most `gamma_(ceil(log2 N)+1)`
/// times the sum of absolute values.
struct Cascade {
    stack: Vec<(f64, u32)>,
}

impl Cascade {
    fn push(&mut self, t: f64) {
        let mut cur = (t, 0u32);
        while let Some(&(v, l)) = self.stack.last() {
            if l != cur.1 {
                break;
            }
            self.stack.pop();
            cur = (v + cur.0, l + 1);
        }
        self.stack.push(cur);
    }

    fn total(self) -> f64 {
        self.stack.iter().rev().fold(0.0, |acc, (v, _)| acc + v)
    }
}

fn l_direct(s: u32, table: &[i8], n_terms: u64) -> (f64, f64) {
    let m = table.len() as u64;
    let mut acc = Cascade { stack: Vec::new() };
    for k in 1..=n_terms {
        let c = table[(k % m) as usize];
        if c == 0 {
            continue;
        }
        let kf = k as f64;
        let mut p = kf;
        for _ in 1..s {
            p *= kf;
        }
        let t = 1.0 / p;
        acc.push(if c > 0 { t } else { -t });
    }
    let levels = 64 - n_terms.leading_zeros() + 1;
    (acc.total(), rounding_bound(s, levels))
}

/// Sum of absolute values is at most `zeta(s) <= 2`; each term carries
/// relative error at most `s u`, the cascade adds `levels u`.
fn rounding_bound(s: u32, levels: u32) -> f64 {
    2.0 * UNIT_ROUNDOFF * (s as f64 + levels as f64 + 2.0) * 1.01
}

/// `L(s, chi_Delta)` for a fundamental discriminant `Delta`.
pub fn dirichlet_l(disc: i64, s: u32, tol: f64) -> Result<Real> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamental(disc));
    }
    if s < 2 {
        return Err(Error::InvalidArgument("L(s, chi) needs s >= 2".into()));
    }
    let table = character_table(disc);
    let smax = character_sum_max(&table).max(1);
    let n_direct = (4.0 * smax as f64 / tol).powf(1.0 / s as f64).ceil();
    let levels = 64 - (n_direct as u64).leading_zeros() + 1;
    if n_direct <= DIRECT_TERMS_MAX && rounding_bound(s, levels) <= tol / 2.0 {
        let n = n_direct as u64;
        let (mid, err) = l_direct(s, &table, n);
        let tail = BigRational::new(
            BigInt::from(2 * smax),
            num_traits::pow(BigInt::from(n + 1), s as usize),
        );
        let err = BigRational::from_float(err).expect("finite") + tail;
        return Ok(Real::exact(BigRational::from_float(mid).expect("finite")).widen(&err));
    }
    Ok(l_hurwitz(disc, s, tol, &table))
}

fn l_hurwitz(disc: i64, s: u32, tol: f64, table: &[i8]) -> Real {
    let m = disc.unsigned_abs();
    let count = table.iter().filter(|c| **c != 0).count().max(1);
    let each = tol / (2.0 * count as f64);
    let prec = prec_for(tol);
    let mut acc = Real::zero();
    for (a, &c) in table.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let z = hurwitz_zeta(s, &BigRational::new(BigInt::from(a), BigInt::from(m)), each);
        acc = if c > 0 { &acc + &z } else { &acc - &z }.round(prec + 16);
    }
    let scale = Real::exact(BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(m), s as usize)));
    (&acc * &scale).round(prec)
}

/// `zeta_K(s)`: `zeta(s)` for `Q`, `zeta(s) L(s, chi_Delta)` for quadratic
/// fields. Higher-degree records carry no zeta values.
pub fn dedekind_zeta(inv: &FieldInvariants, s: u32, tol: f64) -> Result<Real> {
    if s < 2 {
        return Err(Error::InvalidArgument("zeta_K(s) needs s >= 2".into()));
    }
    match inv.degree {
        1 => Ok(riemann_zeta(s, tol)),
        2 => {
            let z = riemann_zeta(s, tol / 8.0);
            let l = dirichlet_l(inv.disc, s, tol / 8.0)?;
            Ok((&z * &l).round(prec_for(tol)))
        }
        d => Err(Error::UnsupportedDegree(d)),
    }
}

/// Float value of `zeta_K(s)` bracket `[1, zeta(s)^d]`, valid for every
/// number field of degree `d` (Euler product over at most `d` primes above
/// each rational prime).
pub fn dedekind_zeta_bracket(degree: u32, s: u32, tol: f64) -> Real {
    let z = riemann_zeta(s, tol);
    Real::new(BigRational::one(), z.powi(degree as i32).hi().clone())
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
