//! Two-sided bounds for the smallest generator height of a quadratic field,
//! the dyadic summation inequality, and a scan of `hR` against `|Delta|`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::heights::{height_power, ExactHeight, HomogeneousTuple};
use crate::nfq::{Element, Field, FieldInvariants};
use crate::real::Real;
use crate::surd::QuadSurd;

/// Bracket `(|Delta|/4)^(1/4) <= delta(K) <= H(1, omega)` for a quadratic
/// field over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantBounds {
    pub disc: i64,
    /// `exp(-log 2 / 2) |Delta|^(1/4)`.
    pub silverman_lower: Real,
    /// `H(1, omega)`.
    pub delta_upper: ExactHeight,
    /// `N(D_(K/Q)) = |Delta_K| / |Delta_Q|^2`.
    pub tower_norm: u64,
}

impl DiscriminantBounds {
    /// Exact `H >= (|Delta|/4)^(1/4)`, i.e. `4 H^4 >= |Delta|`.
    pub fn lower_holds(&self, h: &ExactHeight) -> bool {
        let fourth = match h.root {
            1 => h.value.pow(4),
            2 => h.value.pow(2),
            4 => h.value.clone(),
            _ => return h.to_real(64).powi(4).hi() * BigRational::from_integer(4.into()) >= BigRational::from_integer(self.disc.abs().into()),
        };
        let lhs = fourth.scale(&BigRational::from_integer(BigInt::from(4)));
        lhs.cmp_surd(&QuadSurd::from_int(self.disc.abs())) != Ordering::Less
    }

    /// Both sides for a candidate `delta`.
    pub fn brackets(&self, delta: &ExactHeight) -> bool {
        let upper = delta.value.pow(self.delta_upper.root).cmp_surd(&self.delta_upper.value.pow(delta.root));
        self.lower_holds(delta) && upper != Ordering::Greater
    }
}

pub fn discriminant_bounds(field: &Field, prec: u32) -> Result<DiscriminantBounds> {
    let Some(k) = field.as_quadratic() else {
        return Err(Error::UnsupportedDegree(field.degree()));
    };
    let disc = k.disc;
    let d4 = Real::from_int(disc.abs()).pow_rational(&BigRational::new(BigInt::one(), BigInt::from(4)), prec + 16);
    let silverman_lower = (&d4 * &Real::from_int(2).sqrt(prec + 16).recip()).round(prec);
    let t = HomogeneousTuple::new(field.clone(), vec![Element::one(), field.omega()])?;
    Ok(DiscriminantBounds {
        disc,
        silverman_lower,
        delta_upper: height_power(&t)?,
        tower_norm: disc.unsigned_abs(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicReport {
    pub alpha: f64,
    pub b: f64,
    /// Smallest `c` with `N_f(T) <= c T^b` on the data.
    pub c: f64,
    /// `floor(log2 max f) + 1`.
    pub levels: u32,
    pub direct_sum: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares `sum f^alpha` against `c 2^|alpha| sum_(i=1..M) 2^(i(alpha+b))`
/// with `c` measured from the data.
pub fn dyadic_check(values: &[f64], alpha: f64, b: f64) -> Result<DyadicReport> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("dyadic check needs at least one value".into()));
    }
    if values.iter().any(|&v| !(v >= 1.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("dyadic check needs values in [1, inf)".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // N_f only jumps at data points, so its worst ratio sits at one of them
    let mut c: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == t {
            j += 1;
        }
        c = c.max(j as f64 / t.powf(b));
        i = j;
    }
    let max = *sorted.last().expect("nonempty");
    let levels = max.log2().floor() as u32 + 1;
    let geometric: f64 = (1..=levels).map(|i| 2f64.powf(i as f64 * (alpha + b))).sum();
    let bound = c * 2f64.powf(alpha.abs()) * geometric;
    let direct_sum: f64 = sorted.iter().map(|v| v.powf(alpha)).sum();
    Ok(DyadicReport {
        alpha,
        b,
        c,
        levels,
        direct_sum,
        bound,
        holds: direct_sum <= bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SiegelBrauerReport {
    pub epsilon: f64,
    pub fields: usize,
    pub max_ratio: f64,
    pub argmax: String,
    /// Least-squares slope of `log hR` against `log |Delta|`.
    pub slope: Option<f64>,
    pub slope_ok: bool,
}

/// `max hR / |Delta|^(1/2 + eps)` over the list.
pub fn siegel_brauer_scan(fields: &[FieldInvariants], epsilon: f64) -> Result<SiegelBrauerReport> {
    if fields.is_empty() {
        return Err(Error::InvalidArgument("empty field list".into()));
    }
    let exponent = 0.5 + epsilon;
    let pts: Vec<(f64, f64, &str)> = fields
        .iter()
        .map(|k| {
            let hr = k.h as f64 * k.regulator.mid_f64();
            (k.disc.unsigned_abs() as f64, hr, k.label.as_str())
        })
        .collect();
    let (mut max_ratio, mut argmax) = (f64::NEG_INFINITY, String::new());
    for &(d, hr, label) in &pts {
        let r = hr / d.powf(exponent);
        if r > max_ratio {
            max_ratio = r;
            argmax = label.to_string();
        }
    }
    let slope = fit_slope(&pts.iter().map(|p| (p.0.ln(), p.1.ln())).collect::<Vec<_>>());
    Ok(SiegelBrauerReport {
        epsilon,
        fields: fields.len(),
        max_ratio,
        argmax,
        slope,
        slope_ok: slope.is_none_or(|s| s <= exponent),
    })
}

pub(crate) fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
