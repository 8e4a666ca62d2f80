use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fundamental_from_squarefree, square_factor};
use crate::error::{Error, Result};
use crate::real::{ComplexBox, Real};
use crate::surd::QuadSurd;

/// `Q(sqrt d)` with integral basis `{1, omega}`.
///
/// `omega` satisfies `omega^2 = t*omega + n0`: `t = 1, n0 = (d-1)/4` when
/// `d = 1 mod 4`, otherwise `t = 0, n0 = d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticField {
    pub d: i64,
    pub disc: i64,
    pub t: i64,
    pub n0: i64,
}

pub fn make_quadratic_field(d: i64) -> Result<QuadraticField> {
    if d == 0 || d == 1 {
        return Err(Error::InvalidD(d));
    }
    if let Some(square) = square_factor(d) {
        return Err(Error::NotSquarefree { d, square });
    }
    let (t, n0) = if d.rem_euclid(4) == 1 {
        (1, (d - 1) / 4)
    } else {
        (0, d)
    };
    Ok(QuadraticField {
        d,
        disc: fundamental_from_squarefree(d),
        t,
        n0,
    })
}

impl QuadraticField {
    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn signature(&self) -> (u32, u32) {
        if self.is_real() {
            (2, 0)
        } else {
            (0, 1)
        }
    }

    pub fn w(&self) -> u32 {
        match self.disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    pub fn label(&self) -> String {
        match self.d {
            -1 => "Q(i)".to_string(),
            d => format!("Q(sqrt({d}))"),
        }
    }
}

/// The base field `Q` or a quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Quadratic(QuadraticField),
}

impl Field {
    pub fn quadratic(d: i64) -> Result<Field> {
        make_quadratic_field(d).map(Field::Quadratic)
    }

    /// Accepts `Q`, `Q(i)`, `Q(sqrt(d))`, `d=<int>` or a bare integer `d`.
    pub fn parse(spec: &str) -> Result<Field> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "Q" || s == "q" || s == "1" {
            return Ok(Field::Rational);
        }
        if s == "Q(i)" || s == "Q(sqrt(-1))" {
            return Field::quadratic(-1);
        }
        let inner = s
            .strip_prefix("Q(sqrt(")
            .and_then(|r| r.strip_suffix("))"))
            .or_else(|| s.strip_prefix("d="))
            .unwrap_or(&s);
        let d: i64 = inner
            .parse()
            .map_err(|_| Error::Parse(format!("unrecognised field '{spec}'")))?;
        Field::quadratic(d)
    }

    pub fn degree(&self) -> u32 {
        match self {
            Field::Rational => 1,
            Field::Quadratic(_) => 2,
        }
    }

    pub fn disc(&self) -> i64 {
        match self {
            Field::Rational => 1,
            Field::Quadratic(k) => k.disc,
        }
    }

    pub fn signature(&self) -> (u32, u32) {
        match self {
            Field::Rational => (1, 0),
            Field::Quadratic(k) => k.signature(),
        }
    }

    pub fn w(&self) -> u32 {
        match self {
            Field::Rational => 2,
            Field::Quadratic(k) => k.w(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Quadratic(k) => k.label(),
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticField> {
        match self {
            Field::Rational => None,
            Field::Quadratic(k) => Some(k),
        }
    }

    pub fn is_imaginary(&self) -> bool {
        matches!(self, Field::Quadratic(k) if k.d < 0)
    }

    /// `(t, n0)` with `omega^2 = t omega + n0`; `(0, 0)` for `Q`.
    pub fn omega_poly(&self) -> (i64, i64) {
        match self {
            Field::Rational => (0, 0),
            Field::Quadratic(k) => (k.t, k.n0),
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let (t, n0) = self.omega_poly();
        let bb = &x.b * &y.b;
        Element {
            a: &x.a * &y.a + &bb * BigInt::from(n0),
            b: &x.a * &y.b + &x.b * &y.a + bb * BigInt::from(t),
        }
    }

    pub fn conj(&self, x: &Element) -> Element {
        let (t, _) = self.omega_poly();
        Element {
            a: &x.a + &x.b * BigInt::from(t),
            b: -&x.b,
        }
    }

    /// Absolute norm `x * conj(x)`; for `Q` the element itself.
    pub fn norm(&self, x: &Element) -> BigRational {
        match self {
            Field::Rational => x.a.clone(),
            Field::Quadratic(k) => {
                &x.a * &x.a + &x.a * &x.b * BigInt::from(k.t)
                    - &x.b * &x.b * BigInt::from(k.n0)
            }
        }
    }

    pub fn trace(&self, x: &Element) -> BigRational {
        match self {
            Field::Rational => x.a.clone(),
            Field::Quadratic(k) => &x.a * BigInt::from(2) + &x.b * BigInt::from(k.t),
        }
    }

    pub fn inv(&self, x: &Element) -> Option<Element> {
        if x.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(Element::rational(x.a.recip())),
            Field::Quadratic(_) => {
                let n = self.norm(x);
                Some(self.conj(x).scale(&n.recip()))
            }
        }
    }

    pub fn div(&self, x: &Element, y: &Element) -> Option<Element> {
        self.inv(y).map(|yi| self.mul(x, &yi))
    }

    pub fn pow(&self, x: &Element, k: u32) -> Element {
        let mut acc = Element::one();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Whether `x` lies in the ring of integers `Z[omega]`.
    pub fn is_integral(&self, x: &Element) -> bool {
        x.a.is_integer() && x.b.is_integer()
    }

    pub fn omega(&self) -> Element {
        match self {
            Field::Rational => Element::one(),
            Field::Quadratic(_) => Element::from_ints(0, 1),
        }
    }

    /// `sigma_i(x)` at a real place as an exact surd. Place 0 takes the
    /// positive square root, place 1 the negative one.
    pub fn real_embedding(&self, x: &Element, index: usize) -> QuadSurd {
        match self {
            Field::Rational => QuadSurd::rational(x.a.clone()),
            Field::Quadratic(k) => {
                assert!(k.is_real(), "real embedding of an imaginary field");
                let s = split_parts(k, x);
                let root = if index == 0 { s.1 } else { -s.1 };
                QuadSurd::new(s.0, root, k.d)
            }
        }
    }

    /// `(Re, Im / sqrt|d|)` of the complex embedding, both rational.
    pub fn complex_parts(&self, x: &Element) -> (BigRational, BigRational) {
        let k = self.as_quadratic().expect("complex embedding needs a quadratic field");
        assert!(!k.is_real());
        split_parts(k, x)
    }

    /// Certified enclosures of the archimedean embeddings in the order
    /// real places first, then one representative per complex pair.
    pub fn embeddings(&self, x: &Element, prec: u32) -> Vec<Embedding> {
        match self {
            Field::Rational => vec![Embedding::Real(Real::exact(x.a.clone()))],
            Field::Quadratic(k) if k.is_real() => (0..2)
                .map(|i| Embedding::Real(self.real_embedding(x, i).to_real(prec)))
                .collect(),
            Field::Quadratic(k) => {
                let (re, im) = split_parts(k, x);
                let root = Real::from_int(-k.d).sqrt(prec + 8);
                vec![Embedding::Complex(ComplexBox {
                    re: Real::exact(re),
                    im: (&Real::exact(im) * &root).round(prec),
                })]
            }
        }
    }

    /// `|sigma_i(x)|` for each archimedean place (real first, then complex).
    pub fn archimedean_abs(&self, x: &Element, prec: u32) -> Vec<Real> {
        match self {
            Field::Quadratic(k) if !k.is_real() => {
                vec![Real::exact(self.norm(x)).sqrt(prec)]
            }
            _ => self
                .embeddings(x, prec)
                .into_iter()
                .map(|e| match e {
                    Embedding::Real(r) => r.abs(),
                    Embedding::Complex(c) => c.abs_sq().sqrt(prec),
                })
                .collect(),
        }
    }

    pub fn element_to_string(&self, x: &Element) -> String {
        match self {
            Field::Rational => x.a.to_string(),
            Field::Quadratic(k) => {
                let w = match (k.t, k.d) {
                    (0, -1) => "i".to_string(),
                    (0, d) => format!("sqrt({d})"),
                    (_, d) => format!("(1+sqrt({d}))/2"),
                };
                if x.b.is_zero() {
                    x.a.to_string()
                } else if x.a.is_zero() {
                    format!("{}*{w}", x.b)
                } else {
                    format!("{} + {}*{w}", x.a, x.b)
                }
            }
        }
    }
}

/// Rational and `sqrt(d)` parts of `a + b omega`.
fn split_parts(k: &QuadraticField, x: &Element) -> (BigRational, BigRational) {
    if k.t == 1 {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (&x.a + &x.b * &half, &x.b * &half)
    } else {
        (x.a.clone(), x.b.clone())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug)]
pub enum Embedding {
    Real(Real),
    Complex(ComplexBox),
}

/// `a + b omega`; for elements of `Q` the `b` part is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub a: BigRational,
    pub b: BigRational,
}

impl Element {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Element { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Element {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Element {
            a: BigRational::from_integer(BigInt::from(a)),
            b: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn from_int(a: i64) -> Self {
        Self::from_ints(a, 0)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Element) -> Element {
        Element {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &Element) -> Element {
        Element {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn neg(&self) -> Element {
        Element {
            a: -&self.a,
            b: -&self.b,
        }
    }

    pub fn scale(&self, k: &BigRational) -> Element {
        Element {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn abs_max_coord(&self) -> BigRational {
        self.a.abs().max(self.b.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::rat;

    #[test]
    fn construction_cases() {
        let k = make_quadratic_field(-1).unwrap();
        assert_eq!((k.disc, k.signature(), k.w(), k.t, k.n0), (-4, (0, 1), 4, 0, -1));
        let k = make_quadratic_field(5).unwrap();
        assert_eq!((k.disc, k.signature(), k.w(), k.t, k.n0), (5, (2, 0), 2, 1, 1));
        let k = make_quadratic_field(-3).unwrap();
        assert_eq!((k.disc, k.w(), k.n0), (-3, 6, -1));
        assert_eq!(make_quadratic_field(12), Err(Error::NotSquarefree { d: 12, square: 2 }));
        assert_eq!(make_quadratic_field(1), Err(Error::InvalidD(1)));
        assert_eq!(make_quadratic_field(0), Err(Error::InvalidD(0)));
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("Q(i)").unwrap().disc(), -4);
        assert_eq!(Field::parse("Q(sqrt(5))").unwrap().disc(), 5);
        assert_eq!(Field::parse("d=-5").unwrap().disc(), -20);
        assert_eq!(Field::parse("2").unwrap().disc(), 8);
        assert!(Field::parse("Q(x)").is_err());
    }

    #[test]
    fn arithmetic_and_norms() {
        let k = Field::quadratic(5).unwrap();
        let phi = k.omega();
        // phi^2 = phi + 1
        assert_eq!(k.mul(&phi, &phi), Element::from_ints(1, 1));
        assert_eq!(k.norm(&phi), rat(-1, 1));
        let inv = k.inv(&phi).unwrap();
        assert_eq!(k.mul(&phi, &inv), Element::one());
        let g = Field::quadratic(-1).unwrap();
        let z = Element::from_ints(3, 4);
        assert_eq!(g.norm(&z), rat(25, 1));
        assert_eq!(g.trace(&z), rat(6, 1));
    }

    #[test]
    fn embedding_values() {
        let k = Field::quadratic(5).unwrap();
        let root5 = Element::from_ints(-1, 2); // 2 omega - 1 = sqrt 5
        let e = k.embeddings(&root5, 80);
        match (&e[0], &e[1]) {
            (Embedding::Real(a), Embedding::Real(b)) => {
                assert!((a.mid_f64() - 5f64.sqrt()).abs() < 1e-15);
                assert!((b.mid_f64() + 5f64.sqrt()).abs() < 1e-15);
            }
            _ => panic!("expected real embeddings"),
        }
        let g = Field::quadratic(-1).unwrap();
        match &g.embeddings(&g.omega(), 64)[0] {
            Embedding::Complex(c) => {
                assert!(c.re.contains(&rat(0, 1)));
                assert!(c.im.contains(&rat(1, 1)));
            }
            _ => panic!("expected complex embedding"),
        }
        let q = Field::Rational;
        assert_eq!(q.archimedean_abs(&Element::from_int(-3), 32)[0], Real::from_int(3));
    }
}
