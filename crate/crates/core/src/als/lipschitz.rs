//! Empirical check of the Lipschitz parametrisation of the unit sphere
//! `{N_v = 1}` at each archimedean place.
//!
//! Every norm kind comes with explicit maps `[0,1]^(D-1) -> R^D`. Sampled
//! boundary points are pulled back through the inverse parametrisation to
//! confirm coverage, random parameter pairs measure the Lipschitz ratio and
//! the sampled points test the declared `c_v`.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{AdelicLipschitzSystem, InfiniteNorm, NormKind};

const TAU: f64 = 2.0 * PI;
const COVER_TOL: f64 = 1e-9;
const RATIO_SLACK: f64 = 1e-9;

/// Outcome for one archimedean place.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaceCheck {
    pub index: usize,
    pub kind: String,
    pub maps_used: u32,
    pub declared_maps: u32,
    pub max_ratio: f64,
    pub declared_lip: f64,
    pub min_norm_ratio: f64,
    pub samples: usize,
}

/// A family of maps covering `{N_v = 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cover {
    /// Faces `z_k = +-1` of the cube.
    CubeFaces,
    /// `z_k = e^(2 pi i theta)`, other coordinates in polar form.
    Polydisc,
    /// Spherical coordinates on the euclidean unit sphere.
    Sphere,
    /// Cube faces projected radially onto the unit sphere of the norm.
    RadialFaces,
}

fn cover_of(v: &InfiniteNorm) -> Cover {
    match (&v.kind, v.dv) {
        (NormKind::Max, 1) => Cover::CubeFaces,
        (NormKind::Max, _) => Cover::Polydisc,
        (NormKind::L2, _) => Cover::Sphere,
        (NormKind::Lp { .. }, _) => Cover::RadialFaces,
    }
}

fn maps_needed(cover: Cover, v: &InfiniteNorm) -> u32 {
    let dim = v.dim() as u32;
    match cover {
        Cover::CubeFaces | Cover::RadialFaces => 2 * dim,
        Cover::Polydisc => v.n as u32 + 1,
        Cover::Sphere => 1,
    }
}

fn face_point(dim: usize, map: usize, t: &[f64]) -> Vec<f64> {
    let (k, sign) = (map / 2, if map % 2 == 0 { 1.0 } else { -1.0 });
    let mut z = Vec::with_capacity(dim);
    let mut it = t.iter();
    for i in 0..dim {
        z.push(if i == k { sign } else { 2.0 * it.next().expect("param") - 1.0 });
    }
    z
}

fn apply(cover: Cover, v: &InfiniteNorm, map: usize, t: &[f64]) -> Vec<f64> {
    let dim = v.dim();
    match cover {
        Cover::CubeFaces => face_point(dim, map, t),
        Cover::RadialFaces => {
            let u = face_point(dim, map, t);
            let s = v.eval(&u);
            u.iter().map(|x| x / s).collect()
        }
        Cover::Polydisc => {
            let m = v.n + 1;
            let mut z = vec![0.0; 2 * m];
            z[2 * map] = (TAU * t[0]).cos();
            z[2 * map + 1] = (TAU * t[0]).sin();
            let mut p = 1;
            for l in (0..m).filter(|&l| l != map) {
                let (r, th) = (t[p], t[p + 1]);
                z[2 * l] = r * (TAU * th).cos();
                z[2 * l + 1] = r * (TAU * th).sin();
                p += 2;
            }
            z
        }
        Cover::Sphere => {
            // x_1 = cos a_1, x_2 = sin a_1 cos a_2, ..., last two use a_(D-1)
            let mut z = vec![0.0; dim];
            let mut prod = 1.0;
            for i in 0..dim - 1 {
                let a = if i == dim - 2 { TAU * t[i] } else { PI * t[i] };
                z[i] = prod * a.cos();
                prod *= a.sin();
            }
            z[dim - 1] = prod;
            z
        }
    }
}

/// Map index and parameter with `apply(map, t) = z` for `z` on the sphere.
fn invert(cover: Cover, v: &InfiniteNorm, z: &[f64]) -> (usize, Vec<f64>) {
    let dim = v.dim();
    let frac = |a: f64| (a / TAU).rem_euclid(1.0);
    match cover {
        Cover::CubeFaces | Cover::RadialFaces => {
            let k = (0..dim)
                .max_by(|&a, &b| z[a].abs().total_cmp(&z[b].abs()))
                .expect("nonempty");
            let u: Vec<f64> = z.iter().map(|x| x / z[k].abs()).collect();
            let map = 2 * k + usize::from(z[k] < 0.0);
            let t = (0..dim)
                .filter(|&i| i != k)
                .map(|i| ((u[i] + 1.0) / 2.0).clamp(0.0, 1.0))
                .collect();
            (map, t)
        }
        Cover::Polydisc => {
            let m = v.n + 1;
            let modulus = |l: usize| z[2 * l].hypot(z[2 * l + 1]);
            let k = (0..m)
                .max_by(|&a, &b| modulus(a).total_cmp(&modulus(b)))
                .expect("nonempty");
            let mut t = vec![frac(z[2 * k + 1].atan2(z[2 * k]))];
            for l in (0..m).filter(|&l| l != k) {
                t.push(modulus(l).min(1.0));
                t.push(frac(z[2 * l + 1].atan2(z[2 * l])));
            }
            (k, t)
        }
        Cover::Sphere => {
            let mut t = vec![0.0; dim - 1];
            let mut tail: f64 = z.iter().map(|x| x * x).sum::<f64>().sqrt();
            for i in 0..dim - 1 {
                if i == dim - 2 {
                    t[i] = frac(z[i + 1].atan2(z[i]));
                } else {
                    let a = if tail > 0.0 { (z[i] / tail).clamp(-1.0, 1.0).acos() } else { 0.0 };
                    t[i] = a / PI;
                    tail = (tail * tail - z[i] * z[i]).max(0.0).sqrt();
                }
            }
            (0, t)
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_place(
    sys: &AdelicLipschitzSystem,
    index: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PlaceCheck> {
    let v = &sys.infinite[index];
    let cover = cover_of(v);
    let dim = v.dim();
    let needed = maps_needed(cover, v);
    let declared_lip = sys.lip_const(index, 64)?.hi_f64();
    let c = v.c.to_f64().unwrap_or(0.0);
    let mut max_ratio: f64 = 0.0;
    let mut min_norm_ratio = f64::INFINITY;
    for _ in 0..samples {
        // boundary point by radial projection of a random point
        let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = v.eval(&x);
        if s == 0.0 {
            continue;
        }
        x.iter_mut().for_each(|xi| *xi /= s);
        let (map, t) = invert(cover, v, &x);
        if map as u32 >= v.maps || dist(&apply(cover, v, map, &t), &x) > COVER_TOL {
            return Err(Error::CoverageFailure { witness: x });
        }
        let top = v.coordinate_moduli(&x).into_iter().fold(0.0, f64::max);
        min_norm_ratio = min_norm_ratio.min(1.0 / top);
        if 1.0 < c * top * (1.0 - 1e-12) {
            return Err(Error::NormConstantViolated {
                declared: c,
                observed: 1.0 / top,
            });
        }

        // Lipschitz ratio on a random pair in one map, at a random scale
        let pmap = rng.gen_range(0..needed as usize);
        let t1: Vec<f64> = (0..dim - 1).map(|_| rng.gen::<f64>()).collect();
        let scale = 10f64.powi(-rng.gen_range(0..7));
        let t2: Vec<f64> = t1
            .iter()
            .map(|a| (a + scale * rng.gen_range(-1.0..1.0)).clamp(0.0, 1.0))
            .collect();
        let dt = dist(&t1, &t2);
        if dt > 0.0 {
            let ratio = dist(&apply(cover, v, pmap, &t1), &apply(cover, v, pmap, &t2)) / dt;
            max_ratio = max_ratio.max(ratio);
            // floating-point rounding in both distances scales like eps / dt
            if ratio > declared_lip * (1.0 + RATIO_SLACK) + 1e-14 / dt {
                return Err(Error::LipschitzExceeded {
                    ratio,
                    declared: declared_lip,
                });
            }
        }
    }
    Ok(PlaceCheck {
        index,
        kind: v.kind.name(),
        maps_used: needed,
        declared_maps: v.maps,
        max_ratio,
        declared_lip,
        min_norm_ratio,
        samples,
    })
}

impl AdelicLipschitzSystem {
    /// Samples `samples` points per archimedean place; zero samples give a
    /// vacuous pass.
    pub fn check_lipschitz(&self, samples: usize, seed: u64) -> Result<Vec<PlaceCheck>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.infinite.len())
            .map(|i| check_place(self, i, samples, &mut rng))
            .collect()
    }
}
