use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nfq::{class_representatives, class_number, Element, Field, FractionalIdeal};
use crate::real::Real;

use super::AdelicLipschitzSystem;

/// `coeff * base^(power/2)`, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtMonomial {
    pub coeff: BigRational,
    pub base: u64,
    pub power: u32,
}

impl SqrtMonomial {
    pub fn to_real(&self, prec: u32) -> Real {
        let root = Real::from_int(self.base as i64).sqrt(prec + 16);
        (&Real::exact(self.coeff.clone()) * &root.powi(self.power as i32)).round(prec)
    }

    /// Exact quotient, defined when the square-root parts cancel.
    pub fn div(&self, o: &SqrtMonomial) -> Result<BigRational> {
        let trivial = |m: &SqrtMonomial| m.base == 1 || m.power == 0;
        if !(trivial(self) && trivial(o)) && (self.base, self.power) != (o.base, o.power) {
            return Err(Error::Internal("quotient is not rational".into()));
        }
        Ok(&self.coeff / &o.coeff)
    }
}

impl fmt::Display for SqrtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.base, self.power) {
            (1, _) | (_, 0) => write!(f, "{}", self.coeff),
            (b, p) => write!(f, "{}*sqrt({b})^{p}", self.coeff),
        }
    }
}

/// `sigma(A_0 D) + ... + sigma(A_n D)` inside `R^(d(n+1))`.
#[derive(Clone, Debug)]
pub struct Lattice {
    /// Basis vectors as tuples of field elements.
    pub basis: Vec<Vec<Element>>,
    pub det: SqrtMonomial,
}

/// Covolume of `sigma(b)` in `R^d`: `N(b) 2^(-s) sqrt|Delta|`.
pub fn ideal_covolume(field: &Field, b: &FractionalIdeal) -> SqrtMonomial {
    let (_, s) = field.signature();
    SqrtMonomial {
        coeff: b.norm(field) / BigRational::from_integer(BigInt::one() << s),
        base: field.disc().unsigned_abs(),
        power: 1,
    }
}

impl AdelicLipschitzSystem {
    pub fn lattice(&self, d: &FractionalIdeal) -> Lattice {
        let field = &self.field;
        let mut basis = Vec::new();
        let mut coeff = BigRational::one();
        for (j, a) in self.twist_ideals().iter().enumerate() {
            let ad = a.mul(field, d);
            coeff *= ideal_covolume(field, &ad).coeff;
            for g in ad.basis(field) {
                let mut v = vec![Element::zero(); self.n + 1];
                v[j] = g;
                basis.push(v);
            }
        }
        Lattice {
            basis,
            det: SqrtMonomial {
                coeff,
                base: field.disc().unsigned_abs(),
                power: self.n as u32 + 1,
            },
        }
    }

    /// `det Lambda(D) / N(D)^(n+1)`, which depends only on the class of `D`.
    pub fn class_invariant(&self, d: &FractionalIdeal) -> SqrtMonomial {
        let mut det = self.lattice(d).det;
        det.coeff /= num_traits::pow(d.norm(&self.field), self.n + 1);
        det
    }

    /// The finite volume, averaged over ideal classes.
    pub fn v_fin(&self) -> Result<BigRational> {
        let field = &self.field;
        let (_, s) = field.signature();
        let reps = class_representatives(field);
        let h = class_number(field);
        if reps.len() as u64 != h {
            return Err(Error::MissingClassData(field.label()));
        }
        let normaliser = SqrtMonomial {
            coeff: BigRational::new(BigInt::one(), BigInt::one() << (s as usize * (self.n + 1))),
            base: field.disc().unsigned_abs(),
            power: self.n as u32 + 1,
        };
        let mut sum = BigRational::zero();
        for d in &reps {
            sum += normaliser.div(&self.class_invariant(d))?;
        }
        Ok(sum / BigRational::from_integer(BigInt::from(h)))
    }

    /// `V = V^inf V^fin`.
    pub fn volume(&self) -> Result<super::Volume> {
        let fin = self.v_fin()?;
        let vinf = self.v_inf();
        Ok(match vinf.exact {
            Some(m) => super::Volume::exact(super::PiMonomial::new(&m.coeff * &fin, m.pi_pow)),
            None => super::Volume {
                exact: None,
                enclosure: (&vinf.enclosure * &Real::exact(fin)).round(super::volume::VOLUME_PREC),
                provenance: vinf.provenance,
            },
        })
    }
}

impl Lattice {
    /// Basis vectors embedded in `R^(d(n+1))` (real places, then real and
    /// imaginary parts of complex places).
    pub fn embedded(&self, field: &Field, prec: u32) -> Vec<Vec<Real>> {
        self.basis
            .iter()
            .map(|v| {
                v.iter()
                    .flat_map(|x| {
                        field.embeddings(x, prec).into_iter().flat_map(|e| match e {
                            crate::nfq::Embedding::Real(r) => vec![r],
                            crate::nfq::Embedding::Complex(c) => vec![c.re, c.im],
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Absolute determinant of a small square matrix by Gaussian elimination in
/// floating point.
pub fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .expect("nonempty");
        if m[piv][c] == 0.0 {
            return 0.0;
        }
        m.swap(c, piv);
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det.abs()
}
