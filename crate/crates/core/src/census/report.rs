//! Count reports: exact counts on a grid of heights next to the predicted
//! main terms, with a fitted error exponent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{schanuel_constant, zeta, SchanuelInput};
use crate::nfq::{Field, FieldInvariants};
use crate::real::Real;

use super::{count_imaginary_quadratic, count_primitive, count_quadratic_points_p1, count_rational, Schedule};

/// Allowed excess of the fitted error exponent over the theoretical one.
pub const SLOPE_SLACK: f64 = 0.15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRow {
    #[serde(serialize_with = "as_string")]
    pub x: BigRational,
    pub count: u128,
    pub main_mid: f64,
    pub main_rad: f64,
    /// `count - main`, with `main` at its midpoint.
    pub residual: f64,
}

fn as_string<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualFit {
    /// Least-squares slope of `log |residual|` against `log X`;
    /// `-inf` when the residuals vanish.
    pub slope: f64,
    pub intercept: f64,
    pub expected: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub description: String,
    pub field: String,
    pub n: usize,
    /// Degree of the ground field over `Q`.
    pub m: u32,
    /// Degree of the points over the ground field.
    pub e: u32,
    pub system: String,
    /// `me(n+1) - 1`.
    pub error_exponent: u32,
    /// Whether the error term carries a log factor, `(me, n) = (1, 1)`.
    pub log_factor: bool,
    pub rows: Vec<CountRow>,
    pub fit: Option<ResidualFit>,
    pub schedule: Schedule,
}

impl CountReport {
    fn new(description: String, field: String, n: usize, m: u32, e: u32, schedule: &Schedule) -> Self {
        let me = m * e;
        CountReport {
            description,
            field,
            n,
            m,
            e,
            system: "standard".into(),
            error_exponent: me * (n as u32 + 1) - 1,
            log_factor: me == 1 && n == 1,
            rows: Vec::new(),
            fit: None,
            schedule: *schedule,
        }
    }

    fn push(&mut self, x: &BigRational, count: u128, main: &Real) {
        let exact = BigRational::from_integer(BigInt::from(count)) - main.mid();
        self.rows.push(CountRow {
            x: x.clone(),
            count,
            main_mid: main.mid_f64(),
            main_rad: main.rad_f64(),
            residual: exact.to_f64().unwrap_or(f64::NAN),
        });
    }

    /// Fits the residuals when the grid allows it.
    fn finish(mut self) -> Self {
        self.fit = residual_analysis(&self).ok();
        self
    }

    pub fn flagged(&self) -> bool {
        self.fit.as_ref().is_some_and(|f| f.flagged)
    }

    /// `X,count,main_mid,main_rad,residual,flag`; the flag is the fitted
    /// exponent check and repeats on every row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
        w.write_record(["X", "count", "main_mid", "main_rad", "residual", "flag"])
            .map_err(io)?;
        let flag = if self.flagged() { "1" } else { "0" };
        for r in &self.rows {
            w.write_record([
                r.x.to_string(),
                r.count.to_string(),
                r.main_mid.to_string(),
                r.main_rad.to_string(),
                r.residual.to_string(),
                flag.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Internal(format!("json: {e}")))
    }
}

fn check_grid(grid: &[BigRational]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    if grid.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidArgument("grid values must be positive".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    Ok(())
}

fn power(x: &BigRational, k: u32) -> Real {
    Real::exact(num_traits::pow(x.clone(), k as usize))
}

/// Slope of `log |residual|` against `log X`, checked against
/// `me(n+1) - 1 + 0.15`.
pub fn residual_analysis(report: &CountReport) -> Result<ResidualFit> {
    let rows = &report.rows;
    if rows.len() < 3 {
        return Err(Error::DegenerateGrid(format!("{} points, need at least 3", rows.len())));
    }
    let span = &rows[rows.len() - 1].x / &rows[0].x;
    if span < BigRational::from_integer(4.into()) {
        return Err(Error::DegenerateGrid(format!("grid spans a factor of {span}, need 4")));
    }
    let expected = report.error_exponent as f64;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.residual != 0.0)
        .map(|r| (r.x.to_f64().unwrap_or(f64::NAN).ln(), r.residual.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx <= 0.0 {
        return Ok(ResidualFit {
            slope: f64::NEG_INFINITY,
            intercept: f64::NEG_INFINITY,
            expected,
            flagged: false,
        });
    }
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    Ok(ResidualFit {
        slope,
        intercept: my - slope * mx,
        expected,
        flagged: slope > expected + SLOPE_SLACK,
    })
}

fn schanuel_of(field: &Field, n: usize, tol: f64) -> Result<Real> {
    let inv = FieldInvariants::compute(field);
    schanuel_constant(&SchanuelInput::computed(inv, n, tol)?, zeta::prec_for(tol))
}

/// `Z_H(P^n(Q), X)` against `S_Q(n) X^(n+1)`.
pub fn rational_report(n: usize, grid: &[BigRational], schedule: &Schedule, tol: f64) -> Result<CountReport> {
    check_grid(grid)?;
    let s = schanuel_of(&Field::Rational, n, tol)?;
    let mut r = CountReport::new(format!("points of P^{n}(Q)"), "Q".into(), n, 1, 1, schedule);
    for x in grid {
        let main = &s * &power(x, n as u32 + 1);
        r.push(x, count_rational(n, x, schedule)?, &main);
    }
    Ok(r.finish())
}

/// `Z_H(P^n(K), X)` against `S_K(n) X^(2(n+1))`.
pub fn field_report(field: &Field, n: usize, grid: &[BigRational], schedule: &Schedule, tol: f64) -> Result<CountReport> {
    check_grid(grid)?;
    let s = schanuel_of(field, n, tol)?;
    let label = field.label();
    let mut r = CountReport::new(format!("points of P^{n}({label})"), label, n, 2, 1, schedule);
    for x in grid {
        let main = &s * &power(x, 2 * (n as u32 + 1));
        r.push(x, count_imaginary_quadratic(field, n, x, schedule)?, &main);
    }
    Ok(r.finish())
}

/// `Z_H(P^n(K/Q), X)`: the same main term, a lower order correction.
pub fn primitive_report(field: &Field, n: usize, grid: &[BigRational], schedule: &Schedule, tol: f64) -> Result<CountReport> {
    check_grid(grid)?;
    let s = schanuel_of(field, n, tol)?;
    let label = field.label();
    let mut r = CountReport::new(format!("primitive points of P^{n}({label}/Q)"), label, n, 1, 2, schedule);
    for x in grid {
        let main = &s * &power(x, 2 * (n as u32 + 1));
        r.push(x, count_primitive(field, n, x, schedule)?, &main);
    }
    Ok(r.finish())
}

/// `8/zeta(3)`.
pub fn quadratic_p1_constant(tol: f64) -> Real {
    let z3 = zeta::riemann_zeta(3, tol / 16.0);
    (&Real::from_int(8) * &z3.recip()).round(zeta::prec_for(tol))
}

/// `Z_H(P^1(Q; 2), X)` against `8/zeta(3) X^6`.
pub fn quadratic_p1_report(grid: &[BigRational], schedule: &Schedule, tol: f64) -> Result<CountReport> {
    check_grid(grid)?;
    let c = quadratic_p1_constant(tol);
    let mut r = CountReport::new("quadratic points of P^1".into(), "Q".into(), 1, 1, 2, schedule);
    for x in grid {
        let main = &c * &power(x, 6);
        r.push(x, count_quadratic_points_p1(x, schedule)?.points, &main);
    }
    Ok(r.finish())
}
