//! Points of `P^n(Q)` and `P^n(K)`, `K` imaginary quadratic, with height
//! at most `X`.
//!
//! Both counts are Moebius sums. Over `Q` a point has a primitive integer
//! representative, unique up to sign, and `H = max |a_i|`. Over `K` every
//! point has a representative whose coordinates lie in a fixed integral
//! ideal `A` of its class with content exactly `A`, unique up to the `w`
//! units, and then `H^2 = max N(x_i) / N(A)`. Content exactly `A` is sieved
//! by inclusion-exclusion over squarefree ideals `D`, which reduces every
//! term to counting points of the lattice `AD` inside an ellipse.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{isqrt, mobius_table, primes_up_to};
use crate::error::{Error, Result};
use crate::nfq::{class_representatives, primes_above, Field, FractionalIdeal};

use super::Schedule;

fn overflow() -> Error {
    Error::Overflow("point count")
}

fn checked_pow(base: i128, exp: u32) -> Result<i128> {
    base.checked_pow(exp).ok_or_else(overflow)
}

fn floor_of(x: &BigRational) -> Result<i128> {
    x.floor().to_integer().to_i128().ok_or_else(overflow)
}

/// `Z_H(P^n(Q), X)`.
pub fn count_rational(n: usize, x: &BigRational, schedule: &Schedule) -> Result<u128> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if x.is_negative() {
        return Ok(0);
    }
    let b = floor_of(x)?;
    if b < 1 {
        return Ok(0);
    }
    let bu = usize::try_from(b).map_err(|_| overflow())?;
    let mu = mobius_table(bu);
    let exp = n as u32 + 1;
    // nonzero primitive vectors in [-B, B]^(n+1)
    let vectors = schedule.map_reduce(
        bu,
        0i128,
        |i| {
            let d = i + 1;
            if mu[d] == 0 {
                return Ok(0);
            }
            let side = 2 * (b / d as i128) + 1;
            Ok(mu[d] as i128 * (checked_pow(side, exp)? - 1))
        },
        |p, q| p.saturating_add(q),
    )?;
    if vectors == i128::MAX || vectors % 2 != 0 {
        return Err(overflow());
    }
    Ok((vectors / 2) as u128)
}

/// `#{(u, v) in Z^2 : den (a u^2 + b u v + c v^2) <= num}` for a positive
/// definite form.
pub fn ellipse_count(a: i128, b: i128, c: i128, num: i128, den: i128) -> Result<i128> {
    if a <= 0 || 4 * a * c - b * b <= 0 || den <= 0 {
        return Err(Error::InvalidArgument("form must be positive definite".into()));
    }
    if num < 0 {
        return Ok(0);
    }
    let (a2, two_a) = (den.checked_mul(a).ok_or_else(overflow)?, 2 * den * a);
    let mut total = 0i128;
    let mut v = 0i128;
    loop {
        // den a u^2 + den b v u + (den c v^2 - num) <= 0
        let bv = den * b * v;
        let cc = den * c * v * v - num;
        let disc = bv
            .checked_mul(bv)
            .and_then(|s| s.checked_sub(4 * a2 * cc))
            .ok_or_else(overflow)?;
        if disc < 0 {
            break;
        }
        let r = isqrt(disc as u128) as i128;
        // floor((m + sqrt D)/q) = floor((m + isqrt D)/q) for integers m, q > 0
        let hi = Integer::div_floor(&(-bv + r), &two_a);
        let lo = -Integer::div_floor(&(bv + r), &two_a);
        let row = (hi - lo + 1).max(0);
        total += if v == 0 { row } else { 2 * row };
        v += 1;
    }
    Ok(total)
}

/// Squarefree integral ideals of norm at most `bound` with their Moebius
/// signs, in a fixed order.
fn squarefree_ideals(field: &Field, bound: u64) -> Result<Vec<(FractionalIdeal, i8, u64)>> {
    let mut primes = Vec::new();
    for p in primes_up_to(bound) {
        for pp in primes_above(field, p)? {
            if pp.norm() <= bound {
                primes.push(pp);
            }
        }
    }
    let mut out = vec![(FractionalIdeal::unit(), 1i8, 1u64)];
    fn extend(
        field: &Field,
        primes: &[crate::nfq::PrimeIdeal],
        start: usize,
        cur: &(FractionalIdeal, i8, u64),
        bound: u64,
        out: &mut Vec<(FractionalIdeal, i8, u64)>,
    ) {
        for (i, pp) in primes.iter().enumerate().skip(start) {
            let norm = cur.2 * pp.norm();
            if norm > bound {
                // primes are sorted by norm within each rational prime only,
                // so keep scanning
                continue;
            }
            let next = (cur.0.mul(field, &pp.ideal), -cur.1, norm);
            out.push(next.clone());
            extend(field, primes, i + 1, &next, bound, out);
        }
    }
    let root = out[0].clone();
    extend(field, &primes, 0, &root, bound, &mut out);
    Ok(out)
}

fn int_of(q: &BigRational) -> Result<i128> {
    if !q.is_integer() {
        return Err(Error::Internal("integral ideal has a non-integral element".into()));
    }
    q.to_integer().to_i128().ok_or_else(overflow)
}

/// `#{x in B : N(x) <= t}`, zero included.
fn ideal_ball_count(field: &Field, ideal: &FractionalIdeal, t: &BigRational) -> Result<i128> {
    let basis = ideal.basis(field);
    let (b1, b2) = (&basis[0], &basis[1]);
    let a = int_of(&field.norm(b1))?;
    let c = int_of(&field.norm(b2))?;
    let b = int_of(&field.trace(&field.mul(b1, &field.conj(b2))))?;
    let num = t.numer().to_i128().ok_or_else(overflow)?;
    let den = t.denom().to_i128().ok_or_else(overflow)?;
    ellipse_count(a, b, c, num, den)
}

/// `Z_H(P^n(K), X)` for an imaginary quadratic field `K` of any class
/// number.
pub fn count_imaginary_quadratic(field: &Field, n: usize, x: &BigRational, schedule: &Schedule) -> Result<u128> {
    if !field.is_imaginary() {
        return Err(Error::UnsupportedField(format!(
            "{} is not imaginary quadratic",
            field.label()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if x.is_negative() || x.is_zero() {
        return Ok(0);
    }
    let x2 = x * x;
    let reps = class_representatives(field);
    let bound = floor_of(&x2)?;
    if bound < 1 {
        return Ok(0);
    }
    let ideals = squarefree_ideals(field, bound as u64)?;
    let exp = n as u32 + 1;
    let items: Vec<(usize, usize)> = (0..reps.len())
        .flat_map(|j| (0..ideals.len()).map(move |i| (j, i)))
        .collect();
    let vectors = schedule.map_reduce(
        items.len(),
        0i128,
        |k| {
            let (j, i) = items[k];
            let rep = &reps[j];
            let (dd, mu, _) = &ideals[i];
            let t = &x2 * rep.norm(field);
            let lattice = rep.mul(field, dd);
            let e = ideal_ball_count(field, &lattice, &t)?;
            Ok(*mu as i128 * (checked_pow(e, exp)? - 1))
        },
        |p, q| p.saturating_add(q),
    )?;
    let w = field.w() as i128;
    if vectors == i128::MAX || vectors % w != 0 {
        return Err(overflow());
    }
    Ok((vectors / w) as u128)
}

/// `Z_H(P^n(K/Q), X)`: points over `K` not defined over `Q`.
pub fn count_primitive(field: &Field, n: usize, x: &BigRational, schedule: &Schedule) -> Result<u128> {
    let over_k = count_imaginary_quadratic(field, n, x, schedule)?;
    let over_q = count_rational(n, x, schedule)?;
    over_k
        .checked_sub(over_q)
        .ok_or_else(|| Error::Internal("fewer points over K than over Q".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::{height_leq, HomogeneousTuple};
    use crate::nfq::Element;
    use crate::real::rat;
    use num_integer::Integer;

    fn sched() -> Schedule {
        Schedule::default()
    }

    /// Brute force over primitive integer tuples, one sign each.
    fn rational_oracle(n: usize, b: i64) -> u128 {
        let side = (2 * b + 1) as usize;
        let mut count = 0;
        for idx in 0..side.pow(n as u32 + 1) {
            let mut v = Vec::new();
            let mut r = idx;
            for _ in 0..=n {
                v.push((r % side) as i64 - b);
                r /= side;
            }
            let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
            let first = *v.iter().find(|&&x| x != 0).unwrap_or(&0);
            if g == 1 && first > 0 {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn rational_small_cases() {
        assert_eq!(count_rational(1, &rat(1, 1), &sched()).unwrap(), 4);
        assert_eq!(count_rational(1, &rat(2, 1), &sched()).unwrap(), 8);
        assert_eq!(count_rational(1, &rat(1, 2), &sched()).unwrap(), 0);
        for n in 1..4 {
            for b in 1..5 {
                assert_eq!(count_rational(n, &rat(b, 1), &sched()).unwrap(), rational_oracle(n, b), "{n} {b}");
            }
        }
        assert_eq!(count_rational(2, &rat(7, 2), &sched()).unwrap(), rational_oracle(2, 3));
    }

    #[test]
    fn ellipse_against_brute_force() {
        for (a, b, c) in [(1, 0, 1), (1, 1, 1), (2, 1, 3), (3, -2, 5)] {
            for (num, den) in [(0, 1), (1, 1), (7, 2), (50, 3)] {
                let mut brute = 0;
                for u in -40i128..=40 {
                    for v in -40i128..=40 {
                        if den * (a * u * u + b * u * v + c * v * v) <= num {
                            brute += 1;
                        }
                    }
                }
                assert_eq!(ellipse_count(a, b, c, num, den).unwrap(), brute, "{a} {b} {c} {num}/{den}");
            }
        }
    }

    /// Enumerates tuples in a box of `O_K` and counts distinct points of
    /// height at most `x` through the height function itself.
    fn field_oracle(d: i64, n: usize, x: &BigRational, reach: i64) -> u128 {
        let field = Field::quadratic(d).unwrap();
        let mut elems = Vec::new();
        for a in -reach..=reach {
            for b in -reach..=reach {
                elems.push(Element::from_ints(a, b));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        let total = elems.len().pow(n as u32 + 1);
        for idx in 0..total {
            let mut r = idx;
            let mut coords = Vec::new();
            for _ in 0..=n {
                coords.push(elems[r % elems.len()].clone());
                r /= elems.len();
            }
            let Ok(t) = HomogeneousTuple::new(field.clone(), coords.clone()) else { continue };
            if !height_leq(&t, x).unwrap() {
                continue;
            }
            // normalise to first nonzero coordinate 1
            let first = coords.iter().find(|c| !c.is_zero()).unwrap().clone();
            let key: Vec<String> = coords
                .iter()
                .map(|c| field.element_to_string(&field.div(c, &first).unwrap()))
                .collect();
            seen.insert(key);
        }
        seen.len() as u128
    }

    #[test]
    fn gaussian_small_cases() {
        let k = Field::quadratic(-1).unwrap();
        assert_eq!(count_imaginary_quadratic(&k, 1, &rat(1, 1), &sched()).unwrap(), 6);
        assert_eq!(count_primitive(&k, 1, &rat(1, 1), &sched()).unwrap(), 2);
        assert_eq!(count_primitive(&k, 1, &rat(1, 2), &sched()).unwrap(), 0);
        for x in [rat(1, 1), rat(3, 2), rat(2, 1)] {
            assert_eq!(
                count_imaginary_quadratic(&k, 1, &x, &sched()).unwrap(),
                field_oracle(-1, 1, &x, 2),
                "{x}"
            );
        }
    }

    #[test]
    fn other_fields_match_brute_force() {
        // class numbers 1, 1, 2
        for d in [-3, -7, -5] {
            let k = Field::quadratic(d).unwrap();
            for x in [rat(1, 1), rat(2, 1)] {
                assert_eq!(
                    count_imaginary_quadratic(&k, 1, &x, &sched()).unwrap(),
                    field_oracle(d, 1, &x, 3),
                    "{d} {x}"
                );
            }
        }
    }

    #[test]
    fn coordinate_points_always_counted() {
        for d in [-1, -2, -3, -5, -23] {
            let k = Field::quadratic(d).unwrap();
            for n in 1..4 {
                assert!(count_imaginary_quadratic(&k, n, &rat(1, 1), &sched()).unwrap() >= n as u128 + 2);
            }
        }
    }

    #[test]
    fn real_fields_rejected() {
        let k = Field::quadratic(2).unwrap();
        assert!(matches!(
            count_imaginary_quadratic(&k, 1, &rat(2, 1), &sched()),
            Err(Error::UnsupportedField(_))
        ));
    }
}
