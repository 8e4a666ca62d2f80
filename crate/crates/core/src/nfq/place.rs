use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Element, Field};
use super::ideal::{primes_above, Decomposition, FractionalIdeal, PrimeIdeal};
use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(FinitePlace),
    Infinite { index: usize, dv: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePlace {
    pub p: u64,
    pub kind: Decomposition,
    pub index: usize,
    pub np: u64,
    pub dv: u32,
    pub prime: PrimeIdeal,
}

impl Place {
    pub fn local_degree(&self) -> u32 {
        match self {
            Place::Finite(f) => f.dv,
            Place::Infinite { dv, .. } => *dv,
        }
    }
}

pub fn places_above(field: &Field, p: u64) -> Result<Vec<Place>> {
    Ok(primes_above(field, p)?
        .into_iter()
        .enumerate()
        .map(|(index, prime)| {
            Place::Finite(FinitePlace {
                p,
                kind: prime.kind,
                index,
                np: prime.norm(),
                dv: prime.e * prime.f,
                prime,
            })
        })
        .collect())
}

pub fn infinite_places(field: &Field) -> Vec<Place> {
    let (r, s) = field.signature();
    (0..r as usize)
        .map(|index| Place::Infinite { index, dv: 1 })
        .chain((0..s as usize).map(|i| Place::Infinite {
            index: r as usize + i,
            dv: 2,
        }))
        .collect()
}

/// Normalised absolute value `|x|_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbsoluteValue {
    /// `base^exponent`; zero is encoded by `base = 0`.
    Finite { base: u64, exponent: BigRational },
    Infinite(Real),
}

impl AbsoluteValue {
    pub fn to_real(&self, prec: u32) -> Real {
        match self {
            AbsoluteValue::Finite { base: 0, .. } => Real::zero(),
            AbsoluteValue::Finite { base, exponent } => {
                Real::from_int(*base as i64).pow_rational(exponent, prec)
            }
            AbsoluteValue::Infinite(r) => r.clone(),
        }
    }

    /// `|x|_v^{d_v}` as an exact rational at finite places.
    pub fn weighted_exact(&self, dv: u32) -> Option<BigRational> {
        match self {
            AbsoluteValue::Finite { base: 0, .. } => Some(BigRational::zero()),
            AbsoluteValue::Finite { base, exponent } => {
                let e = exponent * BigInt::from(dv);
                debug_assert!(e.is_integer());
                let k = e.to_integer().to_i32()?;
                let b = BigRational::from_integer(BigInt::from(*base));
                Some(if k >= 0 {
                    num_traits::pow(b, k as usize)
                } else {
                    num_traits::pow(b.recip(), (-k) as usize)
                })
            }
            AbsoluteValue::Infinite(_) => None,
        }
    }
}

/// Order of `x` at a finite place, `None` for `x = 0`.
pub fn ord(field: &Field, x: &Element, v: &FinitePlace) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let ideal = FractionalIdeal::principal(field, x).ok()?;
    Some(ideal.valuation(field, &v.prime))
}

pub fn absolute_value(field: &Field, x: &Element, v: &Place, prec: u32) -> AbsoluteValue {
    match v {
        Place::Finite(fp) => match ord(field, x, fp) {
            None => AbsoluteValue::Finite {
                base: 0,
                exponent: BigRational::one(),
            },
            Some(k) => AbsoluteValue::Finite {
                base: fp.np,
                exponent: BigRational::new(BigInt::from(-k), BigInt::from(fp.dv)),
            },
        },
        Place::Infinite { index, .. } => {
            let abs = field.archimedean_abs(x, prec);
            AbsoluteValue::Infinite(abs[*index].clone())
        }
    }
}

/// Rational primes at which `x` is not a unit.
pub fn bad_primes(field: &Field, x: &Element) -> Result<Vec<u64>> {
    let n = field.norm(x).abs();
    if n.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut ps = Vec::new();
    for part in [n.numer(), n.denom()] {
        let m = part
            .to_u64()
            .ok_or(Error::Overflow("factoring a norm"))?;
        ps.extend(factorize(m).into_iter().map(|(p, _)| p));
    }
    // a rational coordinate can carry p with a unit norm only if the
    // element is not integral at p; include denominator primes explicitly
    for part in [x.a.denom(), x.b.denom()] {
        if let Some(m) = part.to_u64() {
            ps.extend(factorize(m).into_iter().map(|(p, _)| p));
        }
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}
