//! Analytic constants: zeta values, Schanuel constants, main terms, the
//! sum over quadratic fields with its tail, and the exponent algebra used
//! to show that sum converges.

pub mod bounds;
pub mod cesum;
pub mod example;
pub mod exponents;
pub mod zeta;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::als::AdelicLipschitzSystem;
use crate::error::{Error, Result};
use crate::nfq::{FieldInvariants, Provenance};
use crate::real::Real;

pub use bounds::{discriminant_bounds, dyadic_check, siegel_brauer_scan, DiscriminantBounds};
pub use cesum::{ce_partial_sum, certify_hr_bound, CeSum};
pub use example::{example_d, ExampleD};
pub use exponents::{exponent_context, exponent_check, minimal_n, ExponentContext, ExponentCheck};
pub use zeta::{dedekind_zeta, dirichlet_l, riemann_zeta};

/// Everything `S_K(n)` depends on.
#[derive(Clone, Debug)]
pub struct SchanuelInput {
    pub invariants: FieldInvariants,
    pub n: usize,
    pub zeta_value: Option<Real>,
}

impl SchanuelInput {
    /// Fills `zeta_K(n+1)` for fields of degree at most 2.
    pub fn computed(invariants: FieldInvariants, n: usize, tol: f64) -> Result<Self> {
        let z = dedekind_zeta(&invariants, n as u32 + 1, tol)?;
        Ok(SchanuelInput {
            invariants,
            n,
            zeta_value: Some(z),
        })
    }
}

/// `S_K(n) = hR/(w zeta_K(n+1)) (2^r (2 pi)^s / sqrt|Delta|)^(n+1) (n+1)^(r+s-1)`.
pub fn schanuel_constant(input: &SchanuelInput, prec: u32) -> Result<Real> {
    let k = &input.invariants;
    let zeta = input
        .zeta_value
        .as_ref()
        .ok_or_else(|| Error::MissingZeta(k.label.clone()))?;
    if zeta.hi() <= &BigRational::one() {
        return Err(Error::InvalidArgument(format!("zeta_K(n+1) must exceed 1 for {}", k.label)));
    }
    let wp = prec + 32;
    let n1 = input.n as i32 + 1;
    let hr = &Real::from_int(k.h as i64) * &k.regulator;
    let denom = &Real::from_int(k.w as i64) * zeta;
    let two_pi = &Real::pi(wp) * &Real::from_int(2);
    let local = &Real::from_int(1 << k.r) * &two_pi.powi(k.s as i32);
    let root = Real::from_int(k.disc.abs()).sqrt(wp);
    let ratio = (&local * &root.recip()).powi(n1);
    let rank = (k.r + k.s) as i32 - 1;
    let unit = Real::from_int(n1 as i64).powi(rank);
    Ok((&(&(&hr * &denom.recip()) * &ratio) * &unit).round(prec))
}

/// `2^(-r(n+1)) pi^(-s(n+1)) V S_K(n)`; for the standard system the powers
/// cancel exactly and the result is `S_K(n)` itself.
pub fn main_term_constant(system: &AdelicLipschitzSystem, tol: f64) -> Result<Real> {
    let prec = zeta::prec_for(tol);
    let inv = FieldInvariants::compute(&system.field);
    let input = SchanuelInput::computed(inv.clone(), system.n, tol / 4.0)?;
    let s = schanuel_constant(&input, prec)?;
    if system.is_standard() {
        return Ok(s);
    }
    let n1 = system.n as i32 + 1;
    let vol = system.volume()?;
    let ratio = match &vol.exact {
        Some(m) => {
            let coeff = &m.coeff / BigRational::from_integer(BigInt::one() << (inv.r as usize * n1 as usize));
            let pi_pow = m.pi_pow as i32 - inv.s as i32 * n1;
            &Real::exact(coeff) * &Real::pi(prec + 16).powi(pi_pow)
        }
        None => {
            let norm = &Real::from_int(1 << (inv.r as i64 * n1 as i64)) * &Real::pi(prec + 16).powi(inv.s as i32 * n1);
            &vol.enclosure * &norm.recip()
        }
    };
    Ok((&ratio * &s).round(prec))
}

/// `A = M^(me) (C (L+1))^(me(n+1)-1)`.
pub fn error_constant(c: &Real, m_maps: u32, l: &Real, m: u32, e: u32, n: usize) -> Real {
    let me = (m * e) as i32;
    let base = c * &(l + &Real::one());
    &Real::from_int(m_maps as i64).powi(me) * &base.powi(me * (n as i32 + 1) - 1)
}

/// One line of a constants report.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct QuantityRow {
    pub quantity: String,
    pub value_mid: f64,
    pub value_rad: f64,
    pub tail_bound: Option<f64>,
    pub provenance: Provenance,
}

impl QuantityRow {
    pub fn new(quantity: impl Into<String>, value: &Real, provenance: Provenance) -> Self {
        QuantityRow {
            quantity: quantity.into(),
            value_mid: value.mid_f64(),
            value_rad: value.rad_f64(),
            tail_bound: None,
            provenance,
        }
    }

    pub fn with_tail(mut self, tail: f64) -> Self {
        self.tail_bound = Some(tail);
        self
    }
}

/// `quantity,value_mid,value_rad,tail_bound,provenance`; an absent tail is
/// an empty cell.
pub fn quantity_csv(rows: &[QuantityRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Internal(format!("csv: {e}")))?;
    }
    if rows.is_empty() {
        w.write_record(["quantity", "value_mid", "value_rad", "tail_bound", "provenance"])
            .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::als::{l2_system, standard_system};
    use crate::nfq::Field;

    fn s_of(field: &Field, n: usize) -> Real {
        let inv = FieldInvariants::compute(field);
        schanuel_constant(&SchanuelInput::computed(inv, n, 1e-20).unwrap(), 80).unwrap()
    }

    #[test]
    fn rational_schanuel_constants() {
        let pi2 = Real::pi(100).powi(2);
        // 2/zeta(2) = 12/pi^2
        let expect = &Real::from_int(12) * &pi2.recip();
        assert!(s_of(&Field::Rational, 1).overlaps(&expect));
        // 4/zeta(3)
        assert!((s_of(&Field::Rational, 2).mid_f64() - 4.0 / 1.2020569031595942854).abs() < 1e-12);
    }

    #[test]
    fn gaussian_schanuel_constant() {
        let s = s_of(&Field::quadratic(-1).unwrap(), 1);
        // pi^2 / (4 zeta_K(2)) with zeta_K(2) = zeta(2) G
        let g = 0.915965594177219015054603514932384110774;
        let expect = std::f64::consts::PI.powi(2) / (4.0 * std::f64::consts::PI.powi(2) / 6.0 * g);
        assert!((s.mid_f64() - expect).abs() < 1e-12);
        assert!((s.mid_f64() - 1.6376).abs() < 1e-4);
    }

    #[test]
    fn missing_zeta() {
        let inv = FieldInvariants::compute(&Field::Rational);
        let input = SchanuelInput {
            invariants: inv,
            n: 1,
            zeta_value: None,
        };
        assert!(matches!(schanuel_constant(&input, 64), Err(Error::MissingZeta(_))));
    }

    #[test]
    fn main_terms() {
        let q = Field::Rational;
        let std = main_term_constant(&standard_system(&q, 1), 1e-15).unwrap();
        assert!(std.overlaps(&s_of(&q, 1)));
        let l2 = main_term_constant(&l2_system(&q, 1), 1e-15).unwrap();
        assert!((l2.mid_f64() - 3.0 / std::f64::consts::PI).abs() < 1e-12);
        let k = Field::quadratic(-3).unwrap();
        let m = main_term_constant(&standard_system(&k, 3), 1e-15).unwrap();
        assert!(m.overlaps(&s_of(&k, 3)));
    }

    #[test]
    fn schanuel_decreases_with_discriminant() {
        let mut inv = FieldInvariants::compute(&Field::quadratic(-1).unwrap());
        let z = Real::exact(BigRational::new(3.into(), 2.into()));
        let mut last: Option<Real> = None;
        for disc in [-4, -8, -20, -40] {
            inv.disc = disc;
            let s = schanuel_constant(
                &SchanuelInput {
                    invariants: inv.clone(),
                    n: 2,
                    zeta_value: Some(z.clone()),
                },
                64,
            )
            .unwrap();
            if let Some(prev) = &last {
                assert!(s.certainly_lt(prev));
            }
            last = Some(s);
        }
    }
}
