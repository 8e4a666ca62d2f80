use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Element, Field};
use crate::arith::{is_prime, kronecker, sqrt_mod_prime};
use crate::error::{Error, Result};

/// `scale * (a Z + (b + omega) Z)` with `0 <= b < a`, which is the Hermite
/// normal form `[[a, 0], [b, 1]]` of the primitive part. Over `Q` the
/// lattice part is trivial (`a = 1`, `b = 0`) and the ideal is `scale Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FractionalIdeal {
    pub scale: BigRational,
    pub a: BigInt,
    pub b: BigInt,
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Hermite basis `(A, 0), (B, C)` of the lattice spanned by `vs`.
fn hnf2(mut vs: Vec<(BigInt, BigInt)>) -> Option<(BigInt, BigInt, BigInt)> {
    vs.retain(|(x, y)| !(x.is_zero() && y.is_zero()));
    let pivot_idx = vs.iter().position(|(_, y)| !y.is_zero())?;
    let mut pivot = vs.swap_remove(pivot_idx);
    let mut rest = Vec::with_capacity(vs.len());
    for u in vs {
        if u.1.is_zero() {
            rest.push(u.0);
            continue;
        }
        let e = pivot.1.extended_gcd(&u.1);
        let (g, s, t) = (e.gcd, e.x, e.y);
        let new_pivot = (&s * &pivot.0 + &t * &u.0, &s * &pivot.1 + &t * &u.1);
        let py = &pivot.1 / &g;
        let uy = &u.1 / &g;
        let reduced = &uy * &pivot.0 - &py * &u.0;
        rest.push(reduced);
        pivot = new_pivot;
    }
    let mut a = BigInt::zero();
    for x in rest {
        a = a.gcd(&x);
    }
    if a.is_zero() {
        return None;
    }
    if pivot.1.is_negative() {
        pivot = (-pivot.0, -pivot.1);
    }
    let b = pivot.0.mod_floor(&a);
    Some((a, b, pivot.1))
}

impl FractionalIdeal {
    pub fn unit() -> Self {
        FractionalIdeal {
            scale: BigRational::one(),
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }

    /// The ideal generated over the ring of integers by `gens`.
    pub fn from_generators(field: &Field, gens: &[Element]) -> Result<Self> {
        let gens: Vec<&Element> = gens.iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(Error::ZeroVector);
        }
        let mut den = BigInt::one();
        for g in &gens {
            den = den.lcm(&g.denominator());
        }
        let to_int = |q: &BigRational| -> BigInt { (q * &den).to_integer() };
        match field {
            Field::Rational => {
                let mut g = BigInt::zero();
                for x in &gens {
                    g = g.gcd(&to_int(&x.a));
                }
                Ok(FractionalIdeal {
                    scale: BigRational::new(g, den),
                    a: BigInt::one(),
                    b: BigInt::zero(),
                })
            }
            Field::Quadratic(k) => {
                let mut vs = Vec::with_capacity(2 * gens.len());
                for x in &gens {
                    let (xa, xb) = (to_int(&x.a), to_int(&x.b));
                    // x * omega = xb n0 + (xa + xb t) omega
                    vs.push((&xb * big(k.n0), &xa + &xb * big(k.t)));
                    vs.push((xa, xb));
                }
                let (a, b, c) = hnf2(vs).ok_or(Error::ZeroVector)?;
                if !(&a % &c).is_zero() || !(&b % &c).is_zero() {
                    return Err(Error::Internal("ideal lattice has inconsistent content".into()));
                }
                let pa = &a / &c;
                let pb = (&b / &c).mod_floor(&pa);
                Ok(FractionalIdeal {
                    scale: BigRational::new(c, den),
                    a: pa,
                    b: pb,
                })
            }
        }
    }

    pub fn principal(field: &Field, x: &Element) -> Result<Self> {
        Self::from_generators(field, std::slice::from_ref(x))
    }

    /// A Z-basis of the ideal.
    pub fn basis(&self, field: &Field) -> Vec<Element> {
        match field {
            Field::Rational => vec![Element::rational(self.scale.clone())],
            Field::Quadratic(_) => vec![
                Element::rational(&self.scale * &self.a),
                Element::new(&self.scale * &self.b, self.scale.clone()),
            ],
        }
    }

    /// Absolute norm, a positive rational.
    pub fn norm(&self, field: &Field) -> BigRational {
        match field {
            Field::Rational => self.scale.abs(),
            Field::Quadratic(_) => &self.scale * &self.scale * &self.a,
        }
    }

    pub fn mul(&self, field: &Field, other: &Self) -> Self {
        let mut gens = Vec::new();
        for x in self.basis(field) {
            for y in other.basis(field) {
                gens.push(field.mul(&x, &y));
            }
        }
        Self::from_generators(field, &gens).expect("product of nonzero ideals")
    }

    pub fn add(&self, field: &Field, other: &Self) -> Self {
        let mut gens = self.basis(field);
        gens.extend(other.basis(field));
        Self::from_generators(field, &gens).expect("sum of nonzero ideals")
    }

    pub fn scale_by(&self, field: &Field, x: &Element) -> Result<Self> {
        Ok(self.mul(field, &Self::principal(field, x)?))
    }

    pub fn conj(&self, field: &Field) -> Self {
        let gens: Vec<Element> = self.basis(field).iter().map(|x| field.conj(x)).collect();
        Self::from_generators(field, &gens).expect("conjugate of nonzero ideal")
    }

    pub fn inverse(&self, field: &Field) -> Self {
        match field {
            Field::Rational => FractionalIdeal {
                scale: self.scale.abs().recip(),
                ..Self::unit()
            },
            Field::Quadratic(_) => {
                let c = self.conj(field);
                let n = self.norm(field).recip();
                c.mul(field, &Self::principal(field, &Element::rational(n)).unwrap())
            }
        }
    }

    pub fn pow(&self, field: &Field, k: i32) -> Self {
        let base = if k < 0 { self.inverse(field) } else { self.clone() };
        let mut acc = Self::unit();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(field, &base);
        }
        acc
    }

    pub fn contains(&self, field: &Field, x: &Element) -> bool {
        if x.is_zero() {
            return true;
        }
        let y = x.scale(&self.scale.recip());
        if !field.is_integral(&y) {
            return false;
        }
        match field {
            Field::Rational => true,
            Field::Quadratic(_) => {
                let (ya, yb) = (y.a.to_integer(), y.b.to_integer());
                (ya - yb * &self.b).mod_floor(&self.a).is_zero()
            }
        }
    }

    /// `other` is contained in `self`.
    pub fn divides(&self, field: &Field, other: &Self) -> bool {
        other.basis(field).iter().all(|x| self.contains(field, x))
    }

    pub fn is_integral(&self) -> bool {
        self.scale.is_integer()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.scale.is_one() && self.a.is_one()
    }

    /// Least positive rational integer in an integral ideal.
    pub fn min_integer(&self) -> BigInt {
        (&self.scale * &self.a).to_integer()
    }

    /// Exponent of the prime `pp` in the factorisation of this ideal.
    pub fn valuation(&self, field: &Field, pp: &PrimeIdeal) -> i64 {
        let p = big(pp.p as i64);
        let vp = |n: &BigInt| -> i64 {
            let mut n = n.abs();
            let mut k = 0;
            while !n.is_zero() && (&n % &p).is_zero() {
                n /= &p;
                k += 1;
            }
            k
        };
        let e = pp.e as i64;
        let mut v = e * (vp(self.scale.numer()) - vp(self.scale.denom()));
        if let Field::Quadratic(_) = field {
            let mut prim = FractionalIdeal {
                scale: BigRational::one(),
                ..self.clone()
            };
            let inv = pp.ideal.inverse(field);
            while pp.ideal.divides(field, &prim) && !prim.is_unit_ideal() {
                prim = prim.mul(field, &inv);
                v += 1;
            }
        }
        v
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * [{}, {} + w]", self.scale, self.a, self.b)
    }
}

/// Splitting behaviour of a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decomposition {
    /// The base field itself.
    Rational,
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub kind: Decomposition,
    pub ideal: FractionalIdeal,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }
}

/// Roots of `x^2 - t x - n0` modulo the prime `p`.
fn omega_roots_mod(t: i64, n0: i64, p: u64) -> Vec<u64> {
    let pi = p as i128;
    let f = |x: i128| (x * x - t as i128 * x - n0 as i128).rem_euclid(pi);
    if p < 64 {
        return (0..pi).filter(|&x| f(x) == 0).map(|x| x as u64).collect();
    }
    let disc = (t as i128 * t as i128 + 4 * n0 as i128).rem_euclid(pi) as u64;
    let Some(s) = sqrt_mod_prime(disc, p) else {
        return Vec::new();
    };
    let inv2 = (pi + 1) / 2;
    let mut roots: Vec<u64> = [s as i128, -(s as i128)]
        .iter()
        .map(|&r| ((t as i128 + r).rem_euclid(pi) * inv2 % pi) as u64)
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Prime ideals above `p`, in a fixed order.
pub fn primes_above(field: &Field, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pe = Element::from_int(p as i64);
    match field {
        Field::Rational => Ok(vec![PrimeIdeal {
            p,
            e: 1,
            f: 1,
            kind: Decomposition::Rational,
            ideal: FractionalIdeal::principal(field, &pe)?,
        }]),
        Field::Quadratic(k) => {
            let chi = kronecker(k.disc, p);
            let gen = |r: u64| -> Result<FractionalIdeal> {
                FractionalIdeal::from_generators(
                    field,
                    &[pe.clone(), Element::from_ints(-(r as i64), 1)],
                )
            };
            match chi {
                -1 => Ok(vec![PrimeIdeal {
                    p,
                    e: 1,
                    f: 2,
                    kind: Decomposition::Inert,
                    ideal: FractionalIdeal::principal(field, &pe)?,
                }]),
                0 => {
                    let r = omega_roots_mod(k.t, k.n0, p);
                    Ok(vec![PrimeIdeal {
                        p,
                        e: 2,
                        f: 1,
                        kind: Decomposition::Ramified,
                        ideal: gen(r[0])?,
                    }])
                }
                _ => {
                    let roots = omega_roots_mod(k.t, k.n0, p);
                    debug_assert_eq!(roots.len(), 2);
                    roots
                        .into_iter()
                        .map(|r| {
                            Ok(PrimeIdeal {
                                p,
                                e: 1,
                                f: 1,
                                kind: Decomposition::Split,
                                ideal: gen(r)?,
                            })
                        })
                        .collect()
                }
            }
        }
    }
}

/// Ideal generated by the coordinates of a nonzero tuple.
pub fn content_ideal(field: &Field, coords: &[Element]) -> Result<FractionalIdeal> {
    FractionalIdeal::from_generators(field, coords)
}

/// All integral ideals of norm exactly `n`, for `n` small enough to factor.
pub fn ideals_of_norm(field: &Field, n: u64) -> Vec<FractionalIdeal> {
    let mut out = vec![FractionalIdeal::unit()];
    for (p, e) in crate::arith::factorize(n) {
        let primes = primes_above(field, p).expect("factor is prime");
        let mut next = Vec::new();
        for base in &out {
            for combo in prime_power_ideals(field, &primes, e) {
                next.push(base.mul(field, &combo));
            }
        }
        out = next;
    }
    out
}

/// Ideals of norm `p^e` built from the primes above `p`.
fn prime_power_ideals(field: &Field, primes: &[PrimeIdeal], e: u32) -> Vec<FractionalIdeal> {
    let mut out = Vec::new();
    match primes {
        [only] => {
            if e % only.f == 0 {
                out.push(only.ideal.pow(field, (e / only.f) as i32));
            }
        }
        [p1, p2] => {
            for i in 0..=e {
                out.push(
                    p1.ideal
                        .pow(field, i as i32)
                        .mul(field, &p2.ideal.pow(field, (e - i) as i32)),
                );
            }
        }
        _ => unreachable!("at most two primes above p"),
    }
    out
}

impl FractionalIdeal {
    pub fn norm_u64(&self, field: &Field) -> Option<u64> {
        let n = self.norm(field);
        if n.is_integer() {
            n.to_integer().to_u64()
        } else {
            None
        }
    }
}
