//! Quadratic points of `P^1` and the smallest generator height `delta` of
//! quadratic fields.
//!
//! A quadratic point is `(1 : alpha)` with `alpha` a root of a primitive
//! irreducible `f = a x^2 + b x + c`, `a > 0`, and `H(1, alpha)^2 = M(f)`.
//! Each such `f` gives two points. The search box is complete because for
//! roots `r1, r2`:
//!
//! * `M(f) >= a`,
//! * `M(f) >= a |r1 r2| = |c|`,
//! * `M(f) >= a (|r1| + |r2|) / 2 >= |b| / 2`, since
//!   `|r1| + |r2| <= 2 max(1, |r1|) max(1, |r2|)`.
//!
//! So `M(f) <= Y` forces `a <= Y`, `|c| <= Y` and `|b| <= 2Y`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::arith::{fundamental_discriminants, is_square, SpfSieve};
use crate::error::{Error, Result};
use crate::heights::{height_power, mahler_measure, root_element, ExactHeight, HeightValue, HomogeneousTuple, HEIGHT_PREC};
use crate::nfq::{Element, Field};
use crate::surd::QuadSurd;

use super::Schedule;

fn overflow() -> Error {
    Error::Overflow("quadratic enumeration")
}

/// Points of `P^1(Q; 2)` with height at most `X`, tallied by field.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuadraticCount {
    pub points: u128,
    pub polynomials: u128,
    /// Fundamental discriminant of `Q(alpha)` to number of points.
    pub histogram: BTreeMap<i64, u128>,
}

impl QuadraticCount {
    fn merge(mut self, other: QuadraticCount) -> QuadraticCount {
        self.points += other.points;
        self.polynomials += other.polynomials;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_insert(0) += v;
        }
        self
    }
}

/// Exact `M(f) <= p/q` for a primitive irreducible `f` with `a > 0`,
/// without forming surds: for real roots `M(f)` is the largest of `a`,
/// `|c|` and `(|b| + sqrt D)/2`; for complex roots it is `max(a, c)`.
fn mahler_at_most(a: i128, b: i128, c: i128, disc: i128, p: i128, q: i128) -> bool {
    if q * a.max(c.abs()) > p {
        return false;
    }
    if disc < 0 {
        return true;
    }
    // sqrt D <= (2p - |b| q)/q
    let rhs = 2 * p - b.abs() * q;
    rhs >= 0 && disc * q * q <= rhs * rhs
}

/// Rational `X^2` split into machine integers, with `floor(X^2)`.
fn square_bound(x: &BigRational) -> Result<(i128, i128, i128)> {
    let y = x * x;
    let p = y.numer().to_i128().ok_or_else(overflow)?;
    let q = y.denom().to_i128().ok_or_else(overflow)?;
    Ok((p, q, Integer::div_floor(&p, &q)))
}

/// `Z_H(P^1(Q; 2), X)` with a per-field histogram.
pub fn count_quadratic_points_p1(x: &BigRational, schedule: &Schedule) -> Result<QuadraticCount> {
    if x.is_negative() {
        return Ok(QuadraticCount::default());
    }
    let (p, q, yf) = square_bound(x)?;
    if yf < 1 {
        return Ok(QuadraticCount::default());
    }
    if yf > 1 << 20 {
        return Err(overflow());
    }
    let sieve = SpfSieve::new((8 * yf * yf) as usize);
    schedule.map_reduce(
        yf as usize,
        QuadraticCount::default(),
        |i| {
            let a = i as i128 + 1;
            let mut out = QuadraticCount::default();
            for b in -2 * yf..=2 * yf {
                let g = a.gcd(&b);
                for c in -yf..=yf {
                    if g.gcd(&c) != 1 {
                        continue;
                    }
                    let disc = b * b - 4 * a * c;
                    if is_square(disc) || !mahler_at_most(a, b, c, disc, p, q) {
                        continue;
                    }
                    out.polynomials += 1;
                    out.points += 2;
                    *out.histogram.entry(sieve.field_discriminant(disc as i64)).or_insert(0) += 2;
                }
            }
            Ok(out)
        },
        QuadraticCount::merge,
    )
}

/// `delta(K)` with the polynomial and root attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCensusEntry {
    pub field: Field,
    pub disc: i64,
    pub delta: HeightValue,
    /// `(a, b, c)` of the minimal polynomial of the witness.
    pub minpoly: (i64, i64, i64),
    pub witness: Element,
}

impl FieldCensusEntry {
    /// `delta^2` exactly.
    pub fn delta_squared(&self) -> &QuadSurd {
        &self.delta.exact.as_ref().expect("exact height").value
    }
}

/// `delta(K) = min H(1, alpha)` over generators `alpha` of `K`, searched
/// over all quadratics with `M(f) <= cap^2`.
pub fn delta_of_field(field: &Field, cap: &BigRational) -> Result<FieldCensusEntry> {
    let Some(k) = field.as_quadratic() else {
        return Err(Error::UnsupportedField("delta is only defined here for quadratic fields".into()));
    };
    let disc = k.disc as i128;
    let omega = HomogeneousTuple::new(field.clone(), vec![Element::one(), field.omega()])?;
    let upper = height_power(&omega)?;
    let cap_sq = QuadSurd::rational(cap * cap);
    if cap.is_negative() || cap_sq.cmp_surd(&upper.value) == Ordering::Less {
        return Err(Error::CapTooSmall {
            cap: cap.to_string(),
            bound: format!("sqrt({})", upper.value.to_f64()),
        });
    }
    let (p, q, yf) = square_bound(cap)?;
    let mut best: Option<(QuadSurd, (i64, i64, i64))> = None;
    for a in 1..=yf {
        for b in -2 * yf..=2 * yf {
            // b^2 - 4ac = f^2 disc with |c| <= Y
            let (lo, hi) = if disc < 0 {
                (1, (4 * a * yf - b * b) / -disc)
            } else {
                (((b * b - 4 * a * yf) / disc).max(1), (b * b + 4 * a * yf) / disc)
            };
            let mut f = 1i128;
            while f * f <= hi {
                if f * f >= lo {
                    let num = b * b - f * f * disc;
                    if num % (4 * a) == 0 {
                        let c = num / (4 * a);
                        if c.abs() <= yf && a.gcd(&b).gcd(&c) == 1 && mahler_at_most(a, b, c, f * f * disc, p, q) {
                            let poly = (a as i64, b as i64, c as i64);
                            let m = mahler_measure(poly.0, poly.1, poly.2)?;
                            let better = match &best {
                                None => true,
                                Some((bm, bp)) => match m.cmp_surd(bm) {
                                    Ordering::Less => true,
                                    Ordering::Equal => poly < *bp,
                                    Ordering::Greater => false,
                                },
                            };
                            if better {
                                best = Some((m, poly));
                            }
                        }
                    }
                }
                f += 1;
            }
        }
    }
    let (m, poly) = best.ok_or_else(|| Error::Internal(format!("no generator of {} below its own bound", field.label())))?;
    let (root_field, witness) = root_element(poly.0, poly.1, poly.2)?;
    if root_field != *field {
        return Err(Error::Internal("witness lies in the wrong field".into()));
    }
    Ok(FieldCensusEntry {
        field: field.clone(),
        disc: k.disc,
        delta: HeightValue::from_exact(ExactHeight { root: 2, value: m }, HEIGHT_PREC),
        minpoly: poly,
        witness,
    })
}

/// `N_delta(T)` with its completeness certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NDeltaReport {
    pub t: String,
    pub delta_scan: u64,
    /// `4 T^4`: `delta >= (|Delta|/4)^(1/4)` so `delta <= T` forces
    /// `|Delta| <= 4 T^4`.
    pub required_scan: String,
    pub count: u64,
    pub fields: Vec<i64>,
}

/// Number of quadratic fields with `delta(K) <= T`, among all fields with
/// `|Delta| <= delta_scan`.
pub fn n_delta(t: &BigRational, delta_scan: u64, schedule: &Schedule) -> Result<NDeltaReport> {
    let t4 = t * t * t * t * BigRational::from_integer(4.into());
    if BigRational::from_integer(delta_scan.into()) < t4 {
        return Err(Error::ScanTooSmall {
            scan: delta_scan,
            required: t4.to_string(),
        });
    }
    // delta(K) <= T exactly when some generator of K has H(1, alpha) <= T,
    // i.e. when K appears among the quadratic points of height <= T
    let hist = count_quadratic_points_p1(t, schedule)?.histogram;
    let fields: Vec<i64> = fundamental_discriminants(delta_scan)
        .into_iter()
        .filter(|d| hist.contains_key(d))
        .collect();
    if fields.len() != hist.len() {
        return Err(Error::Internal("a field with small delta lies beyond the certified scan".into()));
    }
    Ok(NDeltaReport {
        t: t.to_string(),
        delta_scan,
        required_scan: t4.to_string(),
        count: fields.len() as u64,
        fields,
    })
}

/// `N_Delta(T)`: quadratic fields with `|Delta| <= T`.
pub fn n_disc(t: u64) -> Result<u64> {
    if t < 3 {
        return Err(Error::InvalidArgument("N_Delta needs T >= 3".into()));
    }
    Ok(fundamental_discriminants(t).len() as u64)
}
