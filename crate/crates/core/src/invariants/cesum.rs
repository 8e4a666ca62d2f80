//! Partial sums of the standard main-term constants over quadratic fields,
//! with an explicit tail.
//!
//! The tail rests on `hR <= c0 sqrt|Delta| (1 + log|Delta|)` with `c0 = 1`.
//! The class number formula gives `hR = sqrt(D) L(1, chi)/2` for real and
//! `h = w sqrt(D) L(1, chi)/(2 pi)` for imaginary fields, and summing the
//! first `D` terms of `L(1, chi)` by hand gives `L(1, chi) < 2 + log D`
//! (the rest is at most `2 max|partial sum| / (D+1) < 1`). That yields
//! `c0 = 1` for every field except `Delta = -3`, where `hR = 1` directly.
//! [`certify_hr_bound`] re-checks the inequality against computed `h`, `R`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use rayon::prelude::*;

use crate::arith::{fundamental_discriminants, squarefree_of_discriminant};
use crate::error::{Error, Result};
use crate::nfq::{class_number, fundamental_unit, Field, FieldInvariants};
use crate::real::Real;

use super::{schanuel_constant, zeta, SchanuelInput};

/// Constant in `hR <= c0 sqrt|Delta| (1 + log|Delta|)`.
pub const HR_C0: u32 = 1;

#[derive(Clone, Debug)]
pub struct CeSum {
    pub n: usize,
    pub delta_max: u64,
    /// `(Delta, S_K(n))` in scan order.
    pub terms: Vec<(i64, Real)>,
    pub partial: Real,
    /// Upper bound for the sum over `|Delta| > delta_max`.
    pub tail: Real,
    pub c0: u32,
}

fn field_of(disc: i64) -> Field {
    Field::quadratic(squarefree_of_discriminant(disc).expect("fundamental")).expect("valid field")
}

/// `sum_(K quadratic, |Delta_K| <= delta_max) S_K(n)` and its tail bound.
pub fn ce_partial_sum(n: usize, delta_max: u64, tol: f64) -> Result<CeSum> {
    if n < 3 {
        return Err(Error::UnsupportedRegime(format!(
            "the sum over quadratic fields is only summed for n >= 3, got n = {n}"
        )));
    }
    if delta_max < 3 {
        return Err(Error::InvalidArgument("delta_max must be at least 3".into()));
    }
    let discs = fundamental_discriminants(delta_max);
    let fields: Vec<FieldInvariants> = discs
        .par_iter()
        .map(|&d| FieldInvariants::compute(&field_of(d)))
        .collect();
    let prec = zeta::prec_for(tol) + 16 + (discs.len() as f64).log2().ceil() as u32;
    // |error of S_K| <= S_K * (relative error of zeta_K), so the zeta
    // tolerance scales with the sum itself; refine until the radius fits
    let mut zeta_tol = tol / 1024.0;
    loop {
        let terms: Vec<(i64, Real)> = fields
            .par_iter()
            .map(|inv| {
                let input = SchanuelInput::computed(inv.clone(), n, zeta_tol)?;
                Ok((inv.disc, schanuel_constant(&input, prec)?))
            })
            .collect::<Result<_>>()?;
        let mut partial = Real::zero();
        for (_, t) in &terms {
            partial = (&partial + t).round(prec);
        }
        let rad = partial.rad_f64();
        if rad <= tol / 2.0 || zeta_tol < 1e-60 {
            return Ok(CeSum {
                n,
                delta_max,
                terms,
                partial,
                tail: tail_bound(n, delta_max, 96),
                c0: HR_C0,
            });
        }
        zeta_tol *= (tol / (4.0 * rad)).min(0.5);
    }
}

/// `c0 (K_re + K_im) int_X^inf (1 + log x) x^(-n/2) dx` with
/// `K_re = 4^(n+1)(n+1)/2`, `K_im = (2 pi)^(n+1)/2`: each `|Delta|` carries
/// at most one real and one imaginary field, `w >= 2` and `zeta_K >= 1`.
pub fn tail_bound(n: usize, delta_max: u64, prec: u32) -> Real {
    let n1 = n as i32 + 1;
    let half = Real::exact(BigRational::new(BigInt::one(), BigInt::from(2)));
    let k_re = &(&Real::from_int(4).powi(n1) * &Real::from_int(n1 as i64)) * &half;
    let two_pi = &Real::pi(prec) * &Real::from_int(2);
    let k_im = &two_pi.powi(n1) * &half;
    let x = Real::from_int(delta_max as i64);
    // a - 1 = n/2 - 1
    let am1 = Real::exact(BigRational::new(BigInt::from(n as i64 - 2), BigInt::from(2)));
    let lnx = x.ln(prec);
    let xpow = x.pow_rational(&BigRational::new(BigInt::from(2 - n as i64), BigInt::from(2)), prec);
    let bracket = &(&(&Real::one() + &lnx) * &am1.recip()) + &am1.powi(-2);
    let integral = &xpow * &bracket;
    (&(&Real::from_int(HR_C0 as i64) * &(&k_re + &k_im)) * &integral).round(prec)
}

/// Outcome of checking `hR <= c0 sqrt|Delta| (1 + log|Delta|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HrCertificate {
    pub d_max: u64,
    pub fields: usize,
    pub c0: f64,
    pub max_ratio: f64,
    pub argmax: i64,
    pub holds: bool,
}

/// `log eps` in floating point. For large units `eps` agrees with its
/// trace to within `1/eps`, so only the leading bits of the trace matter.
fn regulator_f64(field: &Field) -> f64 {
    let Some(k) = field.as_quadratic().filter(|k| k.is_real()) else {
        return 1.0;
    };
    let (eps, _) = fundamental_unit(k);
    let tr = field.trace(&eps).to_integer();
    let bits = tr.bits();
    if bits < 40 {
        return field.real_embedding(&eps, 0).to_f64().ln();
    }
    let shift = bits.saturating_sub(60);
    let top = (&tr >> shift).to_f64().expect("60-bit integer");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Maximum of `hR / (sqrt D (1 + log D))` over all quadratic fields with
/// `|Delta| <= d_max`.
pub fn certify_hr_bound(d_max: u64) -> HrCertificate {
    let discs = fundamental_discriminants(d_max);
    let ratios: Vec<(i64, f64)> = discs
        .par_iter()
        .map(|&d| {
            let f = field_of(d);
            let hr = class_number(&f) as f64 * regulator_f64(&f);
            let dd = d.unsigned_abs() as f64;
            (d, hr / (dd.sqrt() * (1.0 + dd.ln())))
        })
        .collect();
    let (argmax, max_ratio) = ratios
        .iter()
        .cloned()
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    HrCertificate {
        d_max,
        fields: discs.len(),
        c0: HR_C0 as f64,
        max_ratio,
        argmax,
        holds: max_ratio <= HR_C0 as f64,
    }
}
