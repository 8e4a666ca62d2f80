use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::nfq::Provenance;
use crate::real::Real;

/// `coeff * pi^pi_pow`, exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiMonomial {
    pub coeff: BigRational,
    pub pi_pow: u32,
}

impl PiMonomial {
    pub fn new(coeff: BigRational, pi_pow: u32) -> Self {
        PiMonomial { coeff, pi_pow }
    }

    pub fn rational(coeff: BigRational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn mul(&self, o: &PiMonomial) -> PiMonomial {
        PiMonomial::new(&self.coeff * &o.coeff, self.pi_pow + o.pi_pow)
    }

    pub fn to_real(&self, prec: u32) -> Real {
        let pi = Real::pi(prec + 16);
        (&Real::exact(self.coeff.clone()) * &pi.powi(self.pi_pow as i32)).round(prec)
    }
}

impl fmt::Display for PiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_pow {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "{}*pi", self.coeff),
            k => write!(f, "{}*pi^{}", self.coeff, k),
        }
    }
}

/// A volume known either in closed form or as a certified estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Volume {
    pub exact: Option<PiMonomial>,
    pub enclosure: Real,
    pub provenance: Provenance,
}

/// Precision for volume enclosures.
pub const VOLUME_PREC: u32 = 128;

impl Volume {
    pub fn exact(m: PiMonomial) -> Self {
        Volume {
            enclosure: m.to_real(VOLUME_PREC),
            exact: Some(m),
            provenance: Provenance::Computed,
        }
    }

    pub fn mul(&self, o: &Volume) -> Volume {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => Volume::exact(a.mul(b)),
            _ => Volume {
                exact: None,
                enclosure: (&self.enclosure * &o.enclosure).round(VOLUME_PREC),
                provenance: if self.provenance == Provenance::Computed {
                    o.provenance
                } else {
                    self.provenance
                },
            },
        }
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

fn double_factorial(k: u32) -> BigInt {
    (1..=k).rev().step_by(2).fold(BigInt::one(), |acc, i| acc * i)
}

/// Volume of the euclidean unit ball in `R^m`.
pub fn unit_ball_volume(m: u32) -> PiMonomial {
    let j = m / 2;
    if m % 2 == 0 {
        PiMonomial::new(BigRational::new(BigInt::one(), factorial(j)), j)
    } else {
        PiMonomial::new(
            BigRational::new(BigInt::one() << (j + 1), double_factorial(2 * j + 1)),
            j,
        )
    }
}

/// Volume of the unit cube `[-1,1]^(n+1)` or unit polydisc in `C^(n+1)`.
pub fn max_ball_volume(dv: u32, n: usize) -> PiMonomial {
    let m = n as u32 + 1;
    if dv == 1 {
        PiMonomial::rational(BigRational::from_integer(BigInt::one() << m))
    } else {
        PiMonomial::new(BigRational::one(), m)
    }
}

/// Monte Carlo samples drawn per chunk; each chunk has its own fixed seed so
/// the estimate does not depend on how chunks are spread over workers.
pub const MC_CHUNK: usize = 1 << 14;

/// Failure probability behind the Hoeffding radius of Monte Carlo volumes.
pub const MC_FAILURE_PROB: f64 = 1e-9;

/// Estimates `vol{x in [-r, r]^dim : inside(x)}` from `chunks * MC_CHUNK`
/// uniform samples, returning an enclosure that holds with probability at
/// least `1 - MC_FAILURE_PROB`.
pub fn monte_carlo_volume<F>(dim: usize, r: f64, chunks: usize, seed: u64, inside: F) -> Volume
where
    F: Fn(&[f64]) -> bool + Sync,
{
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c as u64));
            let mut x = vec![0.0; dim];
            let mut h = 0u64;
            for _ in 0..MC_CHUNK {
                for xi in x.iter_mut() {
                    *xi = rng.gen_range(-r..r);
                }
                if inside(&x) {
                    h += 1;
                }
            }
            h
        })
        .sum();
    let total = (chunks * MC_CHUNK) as f64;
    let frac = BigRational::new(BigInt::from(hits), BigInt::from(chunks * MC_CHUNK));
    let t = ((2.0 / MC_FAILURE_PROB).ln() / (2.0 * total)).sqrt();
    let t = BigRational::from_float(t * (1.0 + 1e-12)).expect("finite radius");
    let lo = (&frac - &t).max(BigRational::zero());
    let hi = (&frac + &t).min(BigRational::one());
    let box_vol = num_traits::pow(BigRational::from_float(2.0 * r).expect("finite box"), dim);
    Volume {
        exact: None,
        enclosure: Real::new(lo * &box_vol, hi * &box_vol),
        provenance: Provenance::MeasuredEnvelope,
    }
}

pub fn volume_mid(v: &Volume) -> f64 {
    v.enclosure.mid().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::rat;

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(2), PiMonomial::new(rat(1, 1), 1));
        assert_eq!(unit_ball_volume(3), PiMonomial::new(rat(4, 3), 1));
        assert_eq!(unit_ball_volume(4), PiMonomial::new(rat(1, 2), 2));
        assert_eq!(unit_ball_volume(5), PiMonomial::new(rat(8, 15), 2));
        assert_eq!(max_ball_volume(1, 1), PiMonomial::rational(rat(4, 1)));
        assert_eq!(max_ball_volume(2, 1), PiMonomial::new(rat(1, 1), 2));
    }

    #[test]
    fn monte_carlo_disc() {
        let v = monte_carlo_volume(2, 1.0, 16, 7, |x| x[0] * x[0] + x[1] * x[1] < 1.0);
        assert!(v.enclosure.contains_f64(std::f64::consts::PI));
        assert!(v.enclosure.rad_f64() < 0.1);
        let again = monte_carlo_volume(2, 1.0, 16, 7, |x| x[0] * x[0] + x[1] * x[1] < 1.0);
        assert_eq!(v, again);
    }
}
