//! The eleven-dimensional count over `Q(i)`: the leading coefficient
//! `D = 12 (2 pi)^24 sum_K hR/(w zeta_K(12) |Delta|^6)` over quadratic
//! extensions `K` of `Q(i)`, summed over whatever fields are supplied.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::als::PiMonomial;
use crate::error::{Error, Result};
use crate::nfq::FieldInvariants;
use crate::real::Real;

use super::zeta::dedekind_zeta_bracket;

#[derive(Clone, Debug)]
pub struct ExampleD {
    /// `12 (2 pi)^24`.
    pub coefficient: PiMonomial,
    /// `(label, hR/(w zeta_K(12) |Delta|^6))`.
    pub terms: Vec<(String, Real)>,
    pub partial: Real,
    /// `coefficient * partial`; no tail is claimed.
    pub value: Real,
}

pub fn example_coefficient() -> PiMonomial {
    PiMonomial::new(BigRational::from_integer(BigInt::from(12) << 24usize), 24)
}

pub fn example_d(records: &[FieldInvariants], prec: u32) -> Result<ExampleD> {
    let tol = 2f64.powi(-(prec as i32).min(1000));
    // zeta_K(12) lies in [1, zeta(12)^4] for every quartic field
    let zeta = dedekind_zeta_bracket(4, 12, tol);
    let mut terms = Vec::with_capacity(records.len());
    let mut partial = Real::zero();
    for k in records {
        if k.degree != 4 || k.r != 0 || k.s != 2 {
            return Err(Error::UnsupportedField(format!(
                "{} is not a totally complex quartic field",
                k.label
            )));
        }
        if k.disc <= 0 || k.disc % 16 != 0 {
            return Err(Error::UnsupportedField(format!(
                "{}: discriminant {} cannot belong to a quadratic extension of Q(i)",
                k.label, k.disc
            )));
        }
        let hr = &Real::from_int(k.h as i64) * &k.regulator;
        let denom = &(&Real::from_int(k.w as i64) * &zeta) * &Real::from_int(k.disc).powi(6);
        let t = (&hr * &denom.recip()).round(prec);
        partial = (&partial + &t).round(prec);
        terms.push((k.label.clone(), t));
    }
    let coefficient = example_coefficient();
    let value = (&coefficient.to_real(prec) * &partial).round(prec);
    Ok(ExampleD {
        coefficient,
        terms,
        partial,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfq::parse_invariants;

    const SAMPLE: &str = "\
Q(zeta8),4,256,0,2,1,1.762747174039086,8
Q(zeta12),4,144,0,2,1,1.3169578969248166,12
Q(i+sqrt5),4,400,0,2,1,0.9624236501192069,4
";

    #[test]
    fn coefficient_is_exact() {
        let c = example_coefficient();
        assert_eq!(c.coeff, BigRational::from_integer(201326592.into()));
        assert_eq!(c.pi_pow, 24);
    }

    #[test]
    fn sample_partial_sum() {
        let recs = parse_invariants(SAMPLE).unwrap();
        let d = example_d(&recs, 96).unwrap();
        assert_eq!(d.terms.len(), 3);
        let first = 1.762747174039086 / (8.0 * 256f64.powi(6));
        // zeta_K(12) in [1, 1.001], so the term sits just below hR/(w |Delta|^6)
        assert!(d.terms[0].1.hi_f64() <= first * (1.0 + 1e-12));
        assert!(d.terms[0].1.lo_f64() >= first / 1.001);
        assert!(d.value.lo_f64() > 0.0);
    }

    #[test]
    fn rejects_wrong_degree() {
        let recs = parse_invariants("Q(sqrt5),2,5,2,0,1,0.48121182505960347,2\n").unwrap();
        assert!(matches!(example_d(&recs, 64), Err(Error::UnsupportedField(_))));
    }
}
