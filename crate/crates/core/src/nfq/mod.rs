//! Exact arithmetic in `Q` and quadratic fields: elements, ideals, places
//! and the invariants `h`, `R`, `w`, `Delta`.

pub mod classgroup;
pub mod field;
pub mod ideal;
pub mod place;
pub mod units;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use classgroup::{class_number, class_representatives};
pub use field::{make_quadratic_field, Element, Embedding, Field, QuadraticField};
pub use ideal::{content_ideal, primes_above, Decomposition, FractionalIdeal, PrimeIdeal};
pub use place::{absolute_value, infinite_places, places_above, AbsoluteValue, FinitePlace, Place};
pub use units::{fundamental_unit, regulator};

use crate::error::{Error, Result};
use crate::real::{parse_decimal, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    Supplied,
    MeasuredEnvelope,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::Supplied => "supplied",
            Provenance::MeasuredEnvelope => "measured-envelope",
        }
    }
}

/// Degree, discriminant, signature, `h`, `R` and `w` of a number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldInvariants {
    pub label: String,
    pub degree: u32,
    pub disc: i64,
    pub r: u32,
    pub s: u32,
    pub h: u64,
    pub regulator: Real,
    pub w: u32,
    pub provenance: Provenance,
}

/// Precision used when computing regulators for invariant records.
pub const INVARIANT_PREC: u32 = 160;

impl FieldInvariants {
    pub fn compute(field: &Field) -> FieldInvariants {
        let (r, s) = field.signature();
        FieldInvariants {
            label: field.label(),
            degree: field.degree(),
            disc: field.disc(),
            r,
            s,
            h: class_number(field),
            regulator: regulator(field, INVARIANT_PREC),
            w: field.w(),
            provenance: Provenance::Computed,
        }
    }

    pub fn unit_rank(&self) -> u32 {
        self.r + self.s - 1
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Parse(format!("{}: {m}", self.label)));
        if self.degree != self.r + 2 * self.s {
            return bad("degree must equal r + 2s");
        }
        if self.h == 0 {
            return bad("class number must be positive");
        }
        if !self.regulator.lo().is_positive() {
            return bad("regulator must be positive");
        }
        if self.w < 2 || self.w % 2 != 0 {
            return bad("w must be an even integer >= 2");
        }
        if self.disc == 0 {
            return bad("discriminant must be nonzero");
        }
        Ok(())
    }
}

/// Parses invariant records `label,degree,disc,r,s,h,R,w`, one per line,
/// with `#` comments. `R` is read as an exact decimal and widened by
/// `1e-15`.
pub fn parse_invariants(text: &str) -> Result<Vec<FieldInvariants>> {
    let widen = parse_decimal("1e-15").expect("literal");
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = |m: String| Error::Parse(format!("line {}: {m}", lineno + 1));
        if cols.len() != 8 {
            return Err(err(format!("expected 8 fields, found {}", cols.len())));
        }
        let int = |i: usize| -> Result<i64> {
            cols[i]
                .parse::<i64>()
                .map_err(|_| err(format!("field {} is not an integer: '{}'", i + 1, cols[i])))
        };
        let reg: BigRational = parse_decimal(cols[6])
            .ok_or_else(|| err(format!("regulator is not a decimal: '{}'", cols[6])))?;
        if reg.is_zero() {
            return Err(err("regulator must be positive".into()));
        }
        let nonneg = |v: i64, what: &str| -> Result<u64> {
            u64::try_from(v).map_err(|_| err(format!("{what} must be nonnegative")))
        };
        let inv = FieldInvariants {
            label: cols[0].to_string(),
            degree: nonneg(int(1)?, "degree")? as u32,
            disc: int(2)?,
            r: nonneg(int(3)?, "r")? as u32,
            s: nonneg(int(4)?, "s")? as u32,
            h: nonneg(int(5)?, "h")?,
            regulator: Real::exact(reg).widen(&widen),
            w: nonneg(int(7)?, "w")? as u32,
            provenance: Provenance::Supplied,
        };
        inv.validate()?;
        out.push(inv);
    }
    Ok(out)
}
