//! JSON description of a system.
//!
//! ```json
//! {
//!   "field": "Q(i)",
//!   "n": 1,
//!   "infinite": [{"kind": "lp", "p": "3", "c": "1", "maps": 8, "lip": "6"}],
//!   "finite": {"kind": "twist", "ideals": [[["1", "1"]], [["1", "0"]]]},
//!   "mc_chunks": 64,
//!   "seed": 7
//! }
//! ```
//!
//! `infinite` lists one entry per archimedean place (real places first) or
//! a single entry used at every place. Twist ideals are given by generators
//! `[a, b]` meaning `a + b*omega` with rational strings.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nfq::{Element, Field, FractionalIdeal};
use crate::real::{parse_decimal, Real};

use super::{standard_system, AdelicLipschitzSystem, InfiniteNorm};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InfiniteSpec {
    Max,
    L2,
    Lp {
        p: String,
        c: String,
        maps: u32,
        lip: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FiniteSpec {
    Standard,
    Twist { ideals: Vec<Vec<[String; 2]>> },
    #[serde(other)]
    Other,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemSpec {
    pub field: String,
    pub n: usize,
    #[serde(default)]
    pub infinite: Vec<InfiniteSpec>,
    #[serde(default)]
    pub finite: Option<FiniteSpec>,
    #[serde(default = "default_chunks")]
    pub mc_chunks: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_chunks() -> usize {
    64
}

fn number(s: &str) -> Result<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (number(a)?, number(b)?);
        if b == BigRational::from_integer(0.into()) {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(a / b);
    }
    parse_decimal(s.trim()).ok_or_else(|| Error::Parse(format!("not a number: '{s}'")))
}

impl SystemSpec {
    pub fn parse(text: &str) -> Result<SystemSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("system file: {e}")))
    }

    pub fn build(&self) -> Result<AdelicLipschitzSystem> {
        let field = Field::parse(&self.field)?;
        let mut sys = standard_system(&field, self.n);
        let places = sys.infinite.len();
        let specs: Vec<&InfiniteSpec> = match self.infinite.len() {
            0 => vec![&InfiniteSpec::Max; places],
            1 => vec![&self.infinite[0]; places],
            k if k == places => self.infinite.iter().collect(),
            k => {
                return Err(Error::DimensionMismatch {
                    expected: places,
                    got: k,
                })
            }
        };
        for (i, spec) in specs.into_iter().enumerate() {
            let dv = sys.infinite[i].dv;
            sys.infinite[i] = match spec {
                InfiniteSpec::Max => InfiniteNorm::max(dv, self.n),
                InfiniteSpec::L2 => InfiniteNorm::l2(dv, self.n),
                InfiniteSpec::Lp { p, c, maps, lip } => InfiniteNorm::lp(
                    dv,
                    self.n,
                    number(p)?,
                    number(c)?,
                    *maps,
                    Real::exact(number(lip)?),
                    self.mc_chunks,
                    self.seed.wrapping_add(i as u64 * 1_000_003),
                )?,
            };
        }
        match &self.finite {
            None | Some(FiniteSpec::Standard) => Ok(sys),
            Some(FiniteSpec::Other) => Err(Error::UnsupportedFinitePart),
            Some(FiniteSpec::Twist { ideals }) => {
                let mut out = Vec::with_capacity(ideals.len());
                for gens in ideals {
                    let elems = gens
                        .iter()
                        .map(|[a, b]| Ok(Element::new(number(a)?, number(b)?)))
                        .collect::<Result<Vec<_>>>()?;
                    if field == Field::Rational && elems.iter().any(|e| !e.is_rational()) {
                        return Err(Error::Parse("generator with omega part over Q".into()));
                    }
                    out.push(FractionalIdeal::from_generators(&field, &elems)?);
                }
                sys.with_twist(out)
            }
        }
    }
}

pub fn parse_system(text: &str) -> Result<AdelicLipschitzSystem> {
    SystemSpec::parse(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::als::NormKind;
    use crate::real::rat;

    #[test]
    fn twisted_gaussian_system() {
        let sys = parse_system(
            r#"{"field": "Q(i)", "n": 1,
                "finite": {"kind": "twist", "ideals": [[["1", "1"]], [["1", "0"]]]}}"#,
        )
        .unwrap();
        let lat = sys.lattice(&FractionalIdeal::unit());
        assert_eq!(lat.det.to_real(64), Real::from_int(2));
        assert_eq!(sys.v_fin().unwrap(), rat(1, 2));
    }

    #[test]
    fn per_place_norms() {
        let sys = parse_system(
            r#"{"field": "Q(sqrt(2))", "n": 1,
                "infinite": [{"kind": "l2"}, {"kind": "lp", "p": "1", "c": "1", "maps": 4, "lip": "4"}],
                "mc_chunks": 4}"#,
        )
        .unwrap();
        assert_eq!(sys.infinite[0].kind, NormKind::L2);
        assert_eq!(sys.infinite[1].kind, NormKind::Lp { p: rat(1, 1) });
        assert!(parse_system(r#"{"field": "Q", "n": 1, "infinite": [{"kind": "max"}, {"kind": "max"}]}"#).is_err());
    }

    #[test]
    fn unsupported_finite_part() {
        let e = parse_system(r#"{"field": "Q", "n": 1, "finite": {"kind": "adelic-matrix"}}"#);
        assert!(matches!(e, Err(Error::UnsupportedFinitePart)));
        assert!(matches!(parse_system("{"), Err(Error::Parse(_))));
    }
}
