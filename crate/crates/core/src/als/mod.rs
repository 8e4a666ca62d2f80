//! Adelic-Lipschitz systems: a norm at every place of the field, with the
//! attached constants, lattices and volumes.
//!
//! Infinite places carry the max norm, the euclidean norm or an `l^p` norm
//! with declared constants. Finite places carry the max norm, optionally
//! twisted by one fractional ideal per coordinate:
//! `N_v(z) = max_j |z_j|_v / |A_j|_v`.

pub mod config;
pub mod family;
pub mod lattice;
pub mod lipschitz;
pub mod volume;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::heights::{height_power, ExactHeight, HeightValue, HomogeneousTuple, HEIGHT_PREC};
use crate::nfq::{places_above, Element, Field, FractionalIdeal, Place};
use crate::real::Real;
use crate::surd::QuadSurd;

pub use lattice::{Lattice, SqrtMonomial};
pub use volume::{PiMonomial, Volume};

/// Norm at an archimedean place.
#[derive(Clone, Debug, PartialEq)]
pub enum NormKind {
    Max,
    L2,
    /// `(sum |z_j|^p)^(1/p)` with caller-declared constants.
    Lp { p: BigRational },
}

impl NormKind {
    pub fn name(&self) -> String {
        match self {
            NormKind::Max => "max".into(),
            NormKind::L2 => "l2".into(),
            NormKind::Lp { p } => format!("l{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfiniteNorm {
    pub kind: NormKind,
    /// Local degree, 1 for real and 2 for complex places.
    pub dv: u32,
    pub n: usize,
    /// Constant with `N_v(z) >= c_v max_j |z_j|`.
    pub c: BigRational,
    pub maps: u32,
    /// Lipschitz constant; `None` means the euclidean-norm bound
    /// `8 d_v^2 (n+1)^(5/2) C`, which depends on the whole system.
    pub lip: Option<Real>,
    pub volume: Volume,
}

impl InfiniteNorm {
    pub fn max(dv: u32, n: usize) -> Self {
        let lip = if dv == 1 {
            Real::from_int(2)
        } else {
            // 2 pi sqrt(2n+1)
            let root = Real::from_int(2 * n as i64 + 1).sqrt(volume::VOLUME_PREC);
            (&(&Real::pi(volume::VOLUME_PREC) * &Real::from_int(2)) * &root)
                .round(volume::VOLUME_PREC)
        };
        InfiniteNorm {
            kind: NormKind::Max,
            dv,
            n,
            c: BigRational::one(),
            maps: if dv == 1 { 2 * n as u32 + 2 } else { n as u32 + 1 },
            lip: Some(lip),
            volume: Volume::exact(volume::max_ball_volume(dv, n)),
        }
    }

    pub fn l2(dv: u32, n: usize) -> Self {
        InfiniteNorm {
            kind: NormKind::L2,
            dv,
            n,
            c: BigRational::one(),
            maps: 1,
            lip: None,
            volume: Volume::exact(volume::unit_ball_volume(dv * (n as u32 + 1))),
        }
    }

    /// An `l^p` norm with declared `c_v`, map count and Lipschitz constant;
    /// the volume is estimated by Monte Carlo.
    pub fn lp(
        dv: u32,
        n: usize,
        p: BigRational,
        c: BigRational,
        maps: u32,
        lip: Real,
        mc_chunks: usize,
        seed: u64,
    ) -> Result<Self> {
        if p < BigRational::one() {
            return Err(Error::InvalidArgument("l^p norms need p >= 1".into()));
        }
        if !c.is_positive() {
            return Err(Error::InvalidArgument("declared c_v must be positive".into()));
        }
        let mut norm = InfiniteNorm {
            kind: NormKind::Lp { p },
            dv,
            n,
            c,
            maps,
            lip: Some(lip),
            volume: Volume::exact(PiMonomial::one()),
        };
        let dim = norm.dim();
        let r = 1.0 / norm.c.to_f64().unwrap_or(1.0).min(1.0);
        let probe = norm.clone();
        norm.volume = volume::monte_carlo_volume(dim, r, mc_chunks, seed, |x| probe.eval(x) < 1.0);
        Ok(norm)
    }

    /// Real dimension `d_v (n+1)` of the space the norm lives on.
    pub fn dim(&self) -> usize {
        self.dv as usize * (self.n + 1)
    }

    /// Absolute values of the `n+1` coordinates of a point given in real
    /// coordinates (complex entries as consecutive `(re, im)` pairs).
    pub fn coordinate_moduli(&self, z: &[f64]) -> Vec<f64> {
        if self.dv == 1 {
            z.iter().map(|x| x.abs()).collect()
        } else {
            z.chunks(2).map(|c| c[0].hypot(c[1])).collect()
        }
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let m = self.coordinate_moduli(z);
        match &self.kind {
            NormKind::Max => m.iter().cloned().fold(0.0, f64::max),
            NormKind::L2 => m.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Lp { p } => {
                let p = p.to_f64().unwrap_or(1.0);
                m.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }

    /// Certified evaluation on coordinate moduli given as enclosures.
    pub fn eval_real(&self, moduli: &[Real], prec: u32) -> Real {
        match &self.kind {
            NormKind::Max => moduli
                .iter()
                .cloned()
                .reduce(|a, b| a.max(&b))
                .expect("nonempty"),
            NormKind::L2 => moduli
                .iter()
                .map(Real::square)
                .reduce(|a, b| &a + &b)
                .expect("nonempty")
                .sqrt(prec),
            NormKind::Lp { p } => {
                let sum = moduli
                    .iter()
                    .map(|m| {
                        if m.hi().is_zero() {
                            Real::zero()
                        } else if m.lo().is_positive() {
                            m.pow_rational(p, prec)
                        } else {
                            // modulus enclosure touching zero
                            Real::new(BigRational::zero(), pow_rational_hi(m, p, prec))
                        }
                    })
                    .reduce(|a, b| &a + &b)
                    .expect("nonempty");
                sum.pow_rational(&p.recip(), prec)
            }
        }
    }
}

/// Upper end of `x^e` for the upper end of `x`.
fn pow_rational_hi(x: &Real, e: &BigRational, prec: u32) -> BigRational {
    Real::exact(x.hi().clone()).pow_rational(e, prec).hi().clone()
}

/// Diagonal ideal twist at the finite places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTwist {
    pub ideals: Vec<FractionalIdeal>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdelicLipschitzSystem {
    pub field: Field,
    pub n: usize,
    /// One norm per archimedean place, real places first.
    pub infinite: Vec<InfiniteNorm>,
    pub twist: Option<FiniteTwist>,
}

fn place_degrees(field: &Field) -> Vec<u32> {
    let (r, s) = field.signature();
    std::iter::repeat(1)
        .take(r as usize)
        .chain(std::iter::repeat(2).take(s as usize))
        .collect()
}

pub fn standard_system(field: &Field, n: usize) -> AdelicLipschitzSystem {
    AdelicLipschitzSystem {
        field: field.clone(),
        n,
        infinite: place_degrees(field)
            .into_iter()
            .map(|dv| InfiniteNorm::max(dv, n))
            .collect(),
        twist: None,
    }
}

pub fn l2_system(field: &Field, n: usize) -> AdelicLipschitzSystem {
    AdelicLipschitzSystem {
        field: field.clone(),
        n,
        infinite: place_degrees(field)
            .into_iter()
            .map(|dv| InfiniteNorm::l2(dv, n))
            .collect(),
        twist: None,
    }
}

impl AdelicLipschitzSystem {
    pub fn with_twist(mut self, ideals: Vec<FractionalIdeal>) -> Result<Self> {
        if ideals.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: ideals.len(),
            });
        }
        self.twist = if ideals.iter().all(FractionalIdeal::is_unit_ideal) {
            None
        } else {
            Some(FiniteTwist { ideals })
        };
        Ok(self)
    }

    pub fn degree(&self) -> u32 {
        self.field.degree()
    }

    pub fn is_standard(&self) -> bool {
        self.twist.is_none() && self.infinite.iter().all(|v| v.kind == NormKind::Max)
    }

    pub fn twist_ideals(&self) -> Vec<FractionalIdeal> {
        match &self.twist {
            Some(t) => t.ideals.clone(),
            None => vec![FractionalIdeal::unit(); self.n + 1],
        }
    }

    /// Finite places at which some twist ideal is not a unit.
    pub fn exceptional_places(&self) -> Result<Vec<Place>> {
        let mut primes = BTreeSet::new();
        for a in self.twist_ideals() {
            let nrm = a.norm(&self.field);
            for part in [nrm.numer(), nrm.denom()] {
                let m = part.to_u64().ok_or(Error::Overflow("twist ideal norm"))?;
                primes.extend(crate::arith::factorize(m).into_iter().map(|(p, _)| p));
            }
            // the scale may carry primes that cancel in the norm
            for part in [a.scale.numer(), a.scale.denom()] {
                let m = part.abs().to_u64().ok_or(Error::Overflow("twist ideal scale"))?;
                primes.extend(crate::arith::factorize(m).into_iter().map(|(p, _)| p));
            }
        }
        let mut out = Vec::new();
        for p in primes {
            out.extend(places_above(&self.field, p)?);
        }
        Ok(out)
    }

    /// `c_v` at a finite place: `min(1, min_j |A_j|_v^(-1))`, returned as
    /// the exponent `k <= 0` with `c_v = Np^(k / d_v)`.
    pub fn finite_c_exponent(&self, v: &Place) -> i64 {
        let Place::Finite(fp) = v else {
            return 0;
        };
        let min_ord = self
            .twist_ideals()
            .iter()
            .map(|a| a.valuation(&self.field, &fp.prime))
            .min()
            .unwrap_or(0);
        min_ord.min(0)
    }

    /// `(C^fin)^d`, a rational.
    pub fn c_fin_power(&self) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for v in self.exceptional_places()? {
            if let Place::Finite(fp) = &v {
                let k = self.finite_c_exponent(&v);
                // c_v^(-d_v) = Np^(-k)
                acc *= num_traits::pow(BigRational::from_integer(BigInt::from(fp.np)), (-k) as usize);
            }
        }
        Ok(acc)
    }

    pub fn c_fin(&self, prec: u32) -> Result<Real> {
        let p = self.c_fin_power()?;
        let d = self.degree() as i64;
        Ok(Real::exact(p).pow_rational(&BigRational::new(BigInt::one(), BigInt::from(d)), prec))
    }

    pub fn c_inf(&self) -> BigRational {
        self.infinite
            .iter()
            .map(|v| v.c.recip())
            .max()
            .unwrap_or_else(BigRational::one)
    }

    pub fn c(&self, prec: u32) -> Result<Real> {
        Ok(&self.c_fin(prec)? * &Real::exact(self.c_inf()))
    }

    pub fn m_n(&self) -> u32 {
        self.infinite.iter().map(|v| v.maps).max().unwrap_or(0)
    }

    pub fn lip_const(&self, index: usize, prec: u32) -> Result<Real> {
        let v = &self.infinite[index];
        if let Some(l) = &v.lip {
            return Ok(l.clone());
        }
        let m = Real::from_int(self.n as i64 + 1);
        let pow52 = &m.powi(2) * &m.sqrt(prec);
        let dv2 = Real::from_int((v.dv * v.dv) as i64);
        Ok((&(&(&Real::from_int(8) * &dv2) * &pow52) * &self.c(prec)?).round(prec))
    }

    pub fn l_n(&self, prec: u32) -> Result<Real> {
        let mut best: Option<Real> = None;
        for i in 0..self.infinite.len() {
            let l = self.lip_const(i, prec)?;
            best = Some(match best {
                None => l,
                Some(b) => b.max(&l),
            });
        }
        Ok(best.unwrap_or_else(Real::zero))
    }

    pub fn v_inf(&self) -> Volume {
        self.infinite
            .iter()
            .fold(Volume::exact(PiMonomial::one()), |acc, v| acc.mul(&v.volume))
    }

    fn check_tuple(&self, t: &HomogeneousTuple) -> Result<()> {
        if t.coords.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                got: t.coords.len(),
            });
        }
        if t.field != self.field {
            return Err(Error::InvalidArgument(format!(
                "tuple over {} used with a system over {}",
                t.field, self.field
            )));
        }
        Ok(())
    }

    /// Ideal `sum_j alpha_j A_j^(-1)`; its inverse norm is the finite part
    /// of the height.
    pub fn twisted_content(&self, coords: &[Element]) -> Result<FractionalIdeal> {
        let field = &self.field;
        let mut gens = Vec::new();
        for (x, a) in coords.iter().zip(self.twist_ideals()) {
            if x.is_zero() {
                continue;
            }
            for b in a.inverse(field).basis(field) {
                gens.push(field.mul(x, &b));
            }
        }
        FractionalIdeal::from_generators(field, &gens)
    }

    /// The height attached to the system.
    pub fn height(&self, t: &HomogeneousTuple) -> Result<HeightValue> {
        self.check_tuple(t)?;
        let field = &self.field;
        if self.is_standard() {
            return crate::heights::weil_height(t);
        }
        let fin = self.twisted_content(&t.coords)?.norm(field).recip();
        let kinds: Vec<&NormKind> = self.infinite.iter().map(|v| &v.kind).collect();
        let exact = if kinds.iter().all(|k| **k == NormKind::Max) {
            let content = crate::nfq::content_ideal(field, &t.coords)?.norm(field);
            let hp = height_power(t)?;
            // replace the standard finite part by the twisted one
            Some(ExactHeight {
                root: hp.root,
                value: hp.value.scale(&(&content * &fin)),
            })
        } else if kinds.iter().all(|k| **k == NormKind::L2) {
            Some(self.l2_exact(t, &fin))
        } else {
            None
        };
        if let Some(e) = exact {
            return Ok(HeightValue::from_exact(e, HEIGHT_PREC));
        }
        let prec = HEIGHT_PREC;
        let mut prod = Real::exact(fin);
        for (i, v) in self.infinite.iter().enumerate() {
            let moduli: Vec<Real> = t
                .coords
                .iter()
                .map(|x| field.archimedean_abs(x, prec + 16)[i].clone())
                .collect();
            let nv = v.eval_real(&moduli, prec + 16);
            prod = &prod * &nv.powi(v.dv as i32);
        }
        let d = self.degree() as i64;
        Ok(HeightValue {
            enclosure: prod.pow_rational(&BigRational::new(BigInt::one(), BigInt::from(d)), prec),
            exact: None,
        })
    }

    fn l2_exact(&self, t: &HomogeneousTuple, fin: &BigRational) -> ExactHeight {
        let field = &self.field;
        match field {
            Field::Rational => {
                let s: BigRational = t.coords.iter().map(|x| &x.a * &x.a).sum();
                ExactHeight {
                    root: 2,
                    value: QuadSurd::rational(s * fin * fin),
                }
            }
            Field::Quadratic(k) if !k.is_real() => {
                let s: BigRational = t.coords.iter().map(|x| field.norm(x)).sum();
                ExactHeight {
                    root: 2,
                    value: QuadSurd::rational(s * fin),
                }
            }
            Field::Quadratic(_) => {
                let sq = t
                    .coords
                    .iter()
                    .fold(Element::zero(), |acc, x| acc.add(&field.mul(x, x)));
                ExactHeight {
                    root: 4,
                    value: QuadSurd::rational(field.norm(&sq) * fin * fin),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::rat;

    #[test]
    fn standard_constants() {
        let q = standard_system(&Field::Rational, 1);
        assert_eq!(q.m_n(), 4);
        assert_eq!(q.l_n(64).unwrap(), Real::from_int(2));
        assert_eq!(q.v_inf().exact.unwrap(), PiMonomial::rational(rat(4, 1)));
        assert_eq!(q.c(64).unwrap(), Real::one());
        let g = standard_system(&Field::quadratic(-1).unwrap(), 1);
        assert_eq!(g.m_n(), 2);
        let expect = 2.0 * std::f64::consts::PI * 3f64.sqrt();
        assert!((g.l_n(64).unwrap().mid_f64() - expect).abs() < 1e-12);
        assert_eq!(g.v_inf().exact.unwrap(), PiMonomial::new(rat(1, 1), 2));
    }

    #[test]
    fn l2_volumes_and_lipschitz() {
        let q1 = l2_system(&Field::Rational, 1);
        assert_eq!(q1.v_inf().exact.unwrap(), PiMonomial::new(rat(1, 1), 1));
        let q2 = l2_system(&Field::Rational, 2);
        assert_eq!(q2.v_inf().exact.unwrap(), PiMonomial::new(rat(4, 3), 1));
        let g = l2_system(&Field::quadratic(-1).unwrap(), 1);
        assert_eq!(g.v_inf().exact.unwrap(), PiMonomial::new(rat(1, 2), 2));
        // 8 * 1 * 2^(5/2)
        assert!((q1.l_n(64).unwrap().mid_f64() - 8.0 * 2f64.powf(2.5)).abs() < 1e-12);
    }

    #[test]
    fn l2_height_of_pythagorean_pair() {
        let sys = l2_system(&Field::Rational, 1);
        let t = HomogeneousTuple::rational(&[3, 4]).unwrap();
        let h = sys.height(&t).unwrap();
        assert!(h.exact.unwrap().leq(&rat(5, 1)));
        assert!(h.enclosure.contains(&rat(5, 1)));
        let std = standard_system(&Field::Rational, 1);
        assert_eq!(std.height(&HomogeneousTuple::rational(&[1, 2]).unwrap()).unwrap().enclosure, Real::from_int(2));
    }

    #[test]
    fn twisted_height_and_constants() {
        let g = Field::quadratic(-1).unwrap();
        let p = FractionalIdeal::principal(&g, &Element::from_ints(1, 1)).unwrap();
        let sys = standard_system(&g, 1)
            .with_twist(vec![p.clone(), FractionalIdeal::unit()])
            .unwrap();
        // integral twist: c_v = 1 everywhere
        assert_eq!(sys.c_fin_power().unwrap(), rat(1, 1));
        let inv = standard_system(&g, 1)
            .with_twist(vec![p.inverse(&g), FractionalIdeal::unit()])
            .unwrap();
        assert_eq!(inv.c_fin_power().unwrap(), rat(2, 1));
        // H_N(1, 0) with A_0 = (1+i): N((1) (1+i)^-1)^-1 = 2, so H^2 = 2
        let t = HomogeneousTuple::new(g.clone(), vec![Element::one(), Element::zero()]).unwrap();
        let h = sys.height(&t).unwrap();
        assert_eq!(h.exact.unwrap().value, QuadSurd::from_int(2));
        assert!(sys
            .with_twist(vec![FractionalIdeal::unit()])
            .is_err());
    }

    #[test]
    fn lp_norm_volume_matches_cross_polytope() {
        // l^1 ball in R^2 has area 2
        let v = InfiniteNorm::lp(1, 1, rat(1, 1), rat(1, 1), 4, Real::from_int(4), 16, 3).unwrap();
        assert!(v.volume.enclosure.contains(&rat(2, 1)));
        assert!(InfiniteNorm::lp(1, 1, rat(1, 2), rat(1, 1), 4, Real::from_int(4), 1, 3).is_err());
    }
}
