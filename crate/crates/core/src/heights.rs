//! Weil heights and the exact threshold predicate used by the enumerators.
//!
//! For a tuple over a field of degree `d` the `d`-th power of the height is
//! an exact rational (for `Q` and imaginary quadratic fields) or an exact
//! quadratic surd (for real quadratic fields). Threshold tests compare this
//! power against `X^d` without extracting roots.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::nfq::{content_ideal, Element, Field};
use crate::real::Real;
use crate::surd::QuadSurd;

/// Working precision for height enclosures.
pub const HEIGHT_PREC: u32 = 96;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousTuple {
    pub field: Field,
    pub coords: Vec<Element>,
}

impl HomogeneousTuple {
    pub fn new(field: Field, coords: Vec<Element>) -> Result<Self> {
        if coords.iter().all(Element::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(HomogeneousTuple { field, coords })
    }

    pub fn rational(coords: &[i64]) -> Result<Self> {
        Self::new(
            Field::Rational,
            coords.iter().map(|&c| Element::from_int(c)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn scaled(&self, lambda: &Element) -> HomogeneousTuple {
        HomogeneousTuple {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| self.field.mul(c, lambda)).collect(),
        }
    }

    /// The same tuple viewed in a larger field. Only `Q` embeds here.
    pub fn lift(&self, field: &Field) -> HomogeneousTuple {
        assert!(self.coords.iter().all(Element::is_rational) || self.field == *field);
        HomogeneousTuple {
            field: field.clone(),
            coords: self.coords.clone(),
        }
    }
}

/// `H = value^(1/root)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactHeight {
    pub root: u32,
    pub value: QuadSurd,
}

impl ExactHeight {
    pub fn to_real(&self, prec: u32) -> Real {
        let v = self.value.to_real(prec + 16);
        match self.root {
            1 => v.round(prec),
            2 => v.sqrt(prec),
            k => v.pow_rational(&BigRational::new(BigInt::one(), BigInt::from(k)), prec),
        }
    }

    /// Exact `H <= x` for rational `x >= 0`.
    pub fn leq(&self, x: &BigRational) -> bool {
        let xk = num_traits::pow(x.clone(), self.root as usize);
        self.value.cmp_surd(&QuadSurd::rational(xk)) != Ordering::Greater
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightValue {
    pub enclosure: Real,
    pub exact: Option<ExactHeight>,
}

impl HeightValue {
    pub fn from_exact(exact: ExactHeight, prec: u32) -> Self {
        HeightValue {
            enclosure: exact.to_real(prec),
            exact: Some(exact),
        }
    }

    pub fn mid_f64(&self) -> f64 {
        self.enclosure.mid_f64()
    }
}

/// `H(t)^d` exactly, where `d` is the degree of the field.
pub fn height_power(t: &HomogeneousTuple) -> Result<ExactHeight> {
    let field = &t.field;
    let content = content_ideal(field, &t.coords)?;
    let cn = content.norm(field);
    match field {
        Field::Rational => {
            let m = t.coords.iter().map(|c| c.a.abs()).max().expect("nonempty");
            Ok(ExactHeight {
                root: 1,
                value: QuadSurd::rational(m / cn),
            })
        }
        Field::Quadratic(k) if !k.is_real() => {
            let m = t.coords.iter().map(|c| field.norm(c)).max().expect("nonempty");
            Ok(ExactHeight {
                root: 2,
                value: QuadSurd::rational(m / cn),
            })
        }
        Field::Quadratic(_) => {
            let max_at = |i: usize| {
                t.coords
                    .iter()
                    .map(|c| field.real_embedding(c, i).abs())
                    .reduce(|a, b| a.max(&b))
                    .expect("nonempty")
            };
            let prod = max_at(0).mul(&max_at(1));
            Ok(ExactHeight {
                root: 2,
                value: prod.scale(&cn.recip()),
            })
        }
    }
}

pub fn weil_height(t: &HomogeneousTuple) -> Result<HeightValue> {
    Ok(HeightValue::from_exact(height_power(t)?, HEIGHT_PREC))
}

/// Exact `H(t) <= x`; equality counts as inside.
pub fn height_leq(t: &HomogeneousTuple, x: &BigRational) -> Result<bool> {
    let hp = height_power(t)?;
    let xk = num_traits::pow(x.clone(), hp.root as usize);
    // a coarse enclosure settles almost every case
    let approx = hp.value.to_real(48);
    match approx.cmp_rational(&xk) {
        Some(Ordering::Less) => return Ok(true),
        Some(Ordering::Greater) => return Ok(false),
        _ => {}
    }
    Ok(hp.leq(x))
}

/// `sqrt(n) = f sqrt(r)` with `r` squarefree.
pub fn split_square(n: u64) -> (u64, u64) {
    let mut f = 1u64;
    let mut r = 1u64;
    for (p, e) in factorize(n) {
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
    }
    (f, r)
}

/// Checks that `a x^2 + b x + c` is a primitive irreducible quadratic and
/// returns its discriminant.
pub fn check_quadratic(a: i64, b: i64, c: i64) -> Result<i64> {
    if a == 0 {
        return Err(Error::Reducible);
    }
    if a.gcd(&b).gcd(&c) != 1 {
        return Err(Error::NotPrimitive);
    }
    let disc = b as i128 * b as i128 - 4 * a as i128 * c as i128;
    if crate::arith::is_square(disc) {
        return Err(Error::Reducible);
    }
    i64::try_from(disc).map_err(|_| Error::Overflow("quadratic discriminant"))
}

/// Mahler measure of an irreducible quadratic, exactly.
pub fn mahler_measure(a: i64, b: i64, c: i64) -> Result<QuadSurd> {
    let disc = check_quadratic(a, b, c)?;
    let (a, b, c) = (a.abs(), b.abs(), c.abs());
    let int = |x: i64| BigRational::from_integer(BigInt::from(x));
    if disc < 0 {
        return Ok(QuadSurd::rational(int(a.max(c))));
    }
    let (f, r) = split_square(disc as u64);
    // (|b| + sqrt(D)) / 2
    let outer = QuadSurd::new(
        BigRational::new(BigInt::from(b), BigInt::from(2)),
        BigRational::new(BigInt::from(f), BigInt::from(2)),
        r as i64,
    );
    Ok(outer.max(&QuadSurd::new(int(a.max(c)), BigRational::zero(), r as i64)))
}

/// `H(1, alpha) = M(f)^(1/2)` for a root `alpha` of the quadratic.
pub fn root_height_from_minpoly(a: i64, b: i64, c: i64) -> Result<HeightValue> {
    let m = mahler_measure(a, b, c)?;
    Ok(HeightValue::from_exact(ExactHeight { root: 2, value: m }, HEIGHT_PREC))
}

/// The root `(-b + sqrt(D)) / (2a)` as an element of `Q(sqrt(D))`.
pub fn root_element(a: i64, b: i64, c: i64) -> Result<(Field, Element)> {
    let disc = check_quadratic(a, b, c)?;
    let (f, r) = split_square(disc.unsigned_abs());
    let d = if disc < 0 { -(r as i64) } else { r as i64 };
    let field = Field::quadratic(d)?;
    let k = field.as_quadratic().expect("quadratic");
    // sqrt(d) = 2 omega - 1 when d = 1 mod 4, else omega
    let root_d = if k.t == 1 {
        Element::from_ints(-1, 2)
    } else {
        Element::from_ints(0, 1)
    };
    let sqrt_disc = root_d.scale(&BigRational::from_integer(BigInt::from(f)));
    let alpha = sqrt_disc
        .add(&Element::from_int(-b))
        .scale(&BigRational::new(BigInt::one(), BigInt::from(2 * a)));
    Ok((field, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::rat;
    use proptest::prelude::*;

    #[test]
    fn rational_examples() {
        let h = weil_height(&HomogeneousTuple::rational(&[1, 2]).unwrap()).unwrap();
        assert_eq!(h.exact.unwrap().value, QuadSurd::from_int(2));
        let t = HomogeneousTuple::new(
            Field::Rational,
            vec![Element::one(), Element::rational(rat(1, 2))],
        )
        .unwrap();
        assert_eq!(height_power(&t).unwrap().value, QuadSurd::from_int(2));
        let t = HomogeneousTuple::rational(&[3, 5]).unwrap();
        assert!(height_leq(&t, &rat(5, 1)).unwrap());
        assert!(!height_leq(&t, &rat(4999, 1000)).unwrap());
        assert_eq!(HomogeneousTuple::rational(&[0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn golden_ratio_height() {
        let k = Field::quadratic(5).unwrap();
        let t = HomogeneousTuple::new(k.clone(), vec![Element::one(), k.omega()]).unwrap();
        let h = weil_height(&t).unwrap();
        assert!((h.mid_f64() - 1.2720196495140689).abs() < 1e-15);
        assert!(!height_leq(&t, &rat(1272, 1000)).unwrap());
        assert!(height_leq(&t, &rat(1273, 1000)).unwrap());
    }

    #[test]
    fn minpoly_examples() {
        let h = root_height_from_minpoly(1, -1, -1).unwrap();
        assert!((h.mid_f64() - 1.2720196495140689).abs() < 1e-15);
        let h = root_height_from_minpoly(1, 0, 1).unwrap();
        assert_eq!(h.exact.unwrap().value, QuadSurd::from_int(1));
        let h = root_height_from_minpoly(2, 0, -1).unwrap();
        assert_eq!(h.exact.as_ref().unwrap().value.cmp_surd(&QuadSurd::from_int(2)), Ordering::Equal);
        assert_eq!(root_height_from_minpoly(1, 0, -4), Err(Error::Reducible));
        assert_eq!(root_height_from_minpoly(2, 0, 2), Err(Error::NotPrimitive));
    }

    #[test]
    fn ties_are_inclusive() {
        // (3 : 3i) has height exactly 1
        let g = Field::quadratic(-1).unwrap();
        let t = HomogeneousTuple::new(g, vec![Element::from_int(3), Element::from_ints(0, 3)]).unwrap();
        assert!(height_leq(&t, &rat(1, 1)).unwrap());
        let t = HomogeneousTuple::rational(&[2, 3]).unwrap();
        assert!(height_leq(&t, &rat(3, 1)).unwrap());
    }

    #[test]
    fn degree_independence() {
        let g = Field::quadratic(-1).unwrap();
        let r5 = Field::quadratic(5).unwrap();
        for coords in [[1i64, 2], [6, 4], [-7, 3], [0, 5]] {
            let t = HomogeneousTuple::rational(&coords).unwrap();
            let hq = height_power(&t).unwrap();
            let hq2 = num_traits::pow(hq.value.p.clone(), 2);
            for k in [&g, &r5] {
                let hk = height_power(&t.lift(k)).unwrap();
                assert_eq!(hk.value, QuadSurd::rational(hq2.clone()));
            }
        }
    }

    fn small_element() -> impl Strategy<Value = Element> {
        (-20i64..20, -20i64..20, 1i64..6).prop_map(|(a, b, den)| {
            Element::new(rat(a, den), rat(b, 1))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn scaling_invariance(d in prop::sample::select(vec![-1i64, -3, -5, 2, 5, 13]),
                              x in small_element(), y in small_element(), l in small_element()) {
            prop_assume!(!(x.is_zero() && y.is_zero()) && !l.is_zero());
            let k = Field::quadratic(d).unwrap();
            let t = HomogeneousTuple::new(k.clone(), vec![x, y]).unwrap();
            let h1 = height_power(&t).unwrap();
            let h2 = height_power(&t.scaled(&l)).unwrap();
            prop_assert_eq!(&h1, &h2);
            prop_assert!(h1.value.cmp_surd(&QuadSurd::from_int(1)) != Ordering::Less);
        }

        #[test]
        fn minpoly_matches_field_height(a in 1i64..30, b in -30i64..30, c in -30i64..30) {
            prop_assume!(check_quadratic(a, b, c).is_ok());
            let m = mahler_measure(a, b, c).unwrap();
            let (field, alpha) = root_element(a, b, c).unwrap();
            let t = HomogeneousTuple::new(field, vec![Element::one(), alpha]).unwrap();
            prop_assert_eq!(height_power(&t).unwrap().value.cmp_surd(&m), Ordering::Equal);
        }

        #[test]
        fn predicate_consistent_with_enclosure(a in 1i64..15, b in -15i64..15, c in -15i64..15,
                                               p in 1i64..60, q in 1i64..20) {
            prop_assume!(check_quadratic(a, b, c).is_ok());
            let (field, alpha) = root_element(a, b, c).unwrap();
            let t = HomogeneousTuple::new(field, vec![Element::one(), alpha]).unwrap();
            let x = rat(p, q);
            let h = weil_height(&t).unwrap();
            if height_leq(&t, &x).unwrap() {
                prop_assert!(h.enclosure.lo() <= &x);
            } else {
                prop_assert!(h.enclosure.hi() > &x);
            }
        }
    }
}
