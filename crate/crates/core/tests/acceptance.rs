//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::time::Instant;

use heightcount::als::{standard_system, AdelicLipschitzSystem};
use heightcount::als::config::SystemSpec;
use heightcount::census::{
    count_imaginary_quadratic, count_primitive, count_quadratic_points_p1, count_rational, delta_of_field,
    field_report, n_disc, primitive_report, quadratic_p1_report, rational_report, Partition, Schedule,
};
use heightcount::invariants::exponents::{minimal_n, schmidt_upper_exponent};
use heightcount::invariants::{ce_partial_sum, exponent_check, schanuel_constant, SchanuelInput};
use heightcount::nfq::{class_representatives, Element, Field, FieldInvariants, FractionalIdeal};
use heightcount::QuadSurd;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ZETA3: f64 = 1.202_056_903_159_594_3;
const CATALAN: f64 = 0.915_965_594_177_219;

type Check = Result<String, String>;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sched() -> Schedule {
    Schedule::default()
}

fn within(count: u128, main: f64, rel: f64, what: &str) -> Check {
    let ratio = count as f64 / main;
    let msg = format!("{what}: count {count}, main {main:.1}, ratio {ratio:.5} (tolerance {rel})");
    if (ratio - 1.0).abs() <= rel {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn all(parts: Vec<Check>) -> Check {
    let ok = parts.iter().all(Result::is_ok);
    let text = parts
        .into_iter()
        .map(|p| match p {
            Ok(s) | Err(s) => s,
        })
        .collect::<Vec<_>>()
        .join("; ");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn expect_eq<T: PartialEq + std::fmt::Display>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(format!("{what} = {got}"))
    } else {
        Err(format!("{what} = {got}, expected {want}"))
    }
}

fn criterion_1() -> Check {
    let n1 = count_rational(1, &int(1000), &sched()).map_err(|e| e.to_string())?;
    let n2 = count_rational(2, &int(200), &sched()).map_err(|e| e.to_string())?;
    let pi2 = std::f64::consts::PI.powi(2);
    all(vec![
        within(n1, 12.0 / pi2 * 1e6, 0.01, "P^1(Q), X=1000"),
        within(n2, 4.0 / ZETA3 * 200f64.powi(3), 0.015, "P^2(Q), X=200"),
    ])
}

fn criterion_2() -> Check {
    let qi = Field::parse("Q(i)").map_err(|e| e.to_string())?;
    let count = count_imaginary_quadratic(&qi, 1, &int(30), &sched()).map_err(|e| e.to_string())?;
    // h = 1, R = 1, w = 4, |Delta| = 4, zeta_K(2) = zeta(2) G:
    // S = (1 / (4 zeta(2) G)) (2 pi / 2)^2 = 3 / (2 G)
    let oracle = 1.5 / CATALAN;
    let inv = FieldInvariants::compute(&qi);
    let lib = schanuel_constant(&SchanuelInput::computed(inv, 1, 1e-15).map_err(|e| e.to_string())?, 80)
        .map_err(|e| e.to_string())?;
    let agree = if (lib.mid_f64() - oracle).abs() < 1e-12 {
        Ok(format!("S_Q(i)(1) = {:.12} matches 3/(2G)", lib.mid_f64()))
    } else {
        Err(format!("S_Q(i)(1) = {} but 3/(2G) = {oracle}", lib.mid_f64()))
    };
    all(vec![agree, within(count, oracle * 30f64.powi(4), 0.05, "P^1(Q(i)), X=30")])
}

fn criterion_3() -> Check {
    let c = 8.0 / ZETA3;
    let x10 = count_quadratic_points_p1(&int(10), &sched()).map_err(|e| e.to_string())?;
    let x6 = count_quadratic_points_p1(&int(6), &sched()).map_err(|e| e.to_string())?;
    all(vec![
        within(x10.points, c * 1e6, 0.10, "quadratic points of P^1, X=10"),
        within(x6.points, c * 6f64.powi(6), 0.15, "X=6"),
    ])
}

fn criterion_4() -> Check {
    let s = sched();
    let e = |r: heightcount::Result<u128>| r.map_err(|e| e.to_string());
    let qi = Field::parse("Q(i)").map_err(|e| e.to_string())?;
    let q2 = Field::parse("Q(sqrt(2))").map_err(|e| e.to_string())?;
    let d_qi = delta_of_field(&qi, &int(2)).map_err(|e| e.to_string())?;
    let d_q2 = delta_of_field(&q2, &int(2)).map_err(|e| e.to_string())?;
    all(vec![
        expect_eq("count_rational(1,1)", e(count_rational(1, &int(1), &s))?, 4),
        expect_eq("count_rational(1,2)", e(count_rational(1, &int(2), &s))?, 8),
        expect_eq("count_imaginary_quadratic(Q(i),1,1)", e(count_imaginary_quadratic(&qi, 1, &int(1), &s))?, 6),
        expect_eq("count_primitive(Q(i),1,1)", e(count_primitive(&qi, 1, &int(1), &s))?, 2),
        expect_eq(
            "count_quadratic_points_p1(1)",
            count_quadratic_points_p1(&int(1), &s).map_err(|e| e.to_string())?.points,
            6,
        ),
        expect_eq("n_disc(8)", n_disc(8).map_err(|e| e.to_string())?, 6),
        expect_eq("delta(Q(i))^2", d_qi.delta_squared().clone(), QuadSurd::from_int(1)),
        expect_eq("delta(Q(sqrt 2))^2", d_q2.delta_squared().clone(), QuadSurd::from_int(2)),
    ])
}

fn criterion_5() -> Check {
    let mut parts = Vec::new();
    for x in 1..=4 {
        let census = count_quadratic_points_p1(&int(x), &sched()).map_err(|e| e.to_string())?;
        let mut total = 0u128;
        for (&disc, &tally) in &census.histogram {
            if disc < 0 {
                let k = Field::parse(&disc_to_d(disc).to_string()).map_err(|e| e.to_string())?;
                total += count_primitive(&k, 1, &int(x), &sched()).map_err(|e| e.to_string())?;
            } else {
                total += tally;
            }
        }
        parts.push(expect_eq(&format!("X={x}: census vs field sum"), total, census.points));
    }
    all(parts)
}

/// Squarefree `d` of the field with fundamental discriminant `disc`.
fn disc_to_d(disc: i64) -> i64 {
    if disc % 4 == 0 {
        disc / 4
    } else {
        disc
    }
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    let eighth = BigRational::new(BigInt::one(), BigInt::from(8));
    for e in 2u32..=60 {
        for m in 1u32..=3 {
            let report = exponent_check(m, e).map_err(|err| err.to_string())?;
            // smallest n with n > 5e/2 + 4 + 2/(me)
            let bound = BigRational::new(BigInt::from(5 * e), BigInt::from(2))
                + int(4)
                + BigRational::new(BigInt::from(2), BigInt::from(m * e));
            let n = (bound.floor() + BigRational::one()).to_integer().to_u32().unwrap();
            if report.n != n || minimal_n(m, e) != n {
                return Err(format!("m={m} e={e}: minimal n {} but expected {n}", report.n));
            }
            let divisors: Vec<u32> = (1..e).filter(|g| e % g == 0).collect();
            let gs: Vec<u32> = report.rows.iter().map(|r| r.0).collect();
            if gs != divisors {
                return Err(format!("m={m} e={e}: divisors {gs:?}, expected {divisors:?}"));
            }
            for (g, slack) in &report.rows {
                let (mr, er, gr, nr) = (int(m as i64), int(e as i64), int(*g as i64), int(n as i64));
                let mu = &mr * (&er - &gr) * (&nr + int(1)) - int(1);
                let gamma = &mr * (&gr * &gr + &gr + &er * &er / &gr + &er);
                let beta = &er * (&er - int(1)) * &mr + &eighth;
                let oracle = gamma + beta - mu;
                if &oracle != slack || oracle > -eighth.clone() {
                    return Err(format!("m={m} e={e} g={g}: slack {slack}, oracle {oracle}"));
                }
                cases += 1;
            }
            if !report.passed {
                return Err(format!("m={m} e={e}: report not passed"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("{cases} (m, e, g) cases hold exactly in {secs:.3} s");
    if secs < 1.0 {
        Ok(msg)
    } else {
        Err(msg + " (over 1 s)")
    }
}

fn twisted(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> heightcount::Result<AdelicLipschitzSystem> {
    let ideals = (0..=n)
        .map(|_| {
            let gens = [
                Element::from_int(rng.gen_range(1..6)),
                Element::from_ints(rng.gen_range(-3..4), rng.gen_range(1..3)),
            ];
            FractionalIdeal::from_generators(field, &gens)
        })
        .collect::<heightcount::Result<Vec<_>>>()?;
    standard_system(field, n).with_twist(ideals)
}

fn criterion_7() -> Check {
    let mut fields = vec![Field::Rational];
    fields.extend(
        [-1, -2, -3, -5, -6, -7, -11, -14, -15, -23, 2, 3, 5, 6, 7, 10, 13, 15, 17, 19]
            .iter()
            .map(|&d| Field::quadratic(d).unwrap()),
    );
    let mut volumes = 0;
    for k in &fields {
        let (r, s) = k.signature();
        for n in 1..=5usize {
            let v = standard_system(k, n).volume().map_err(|e| e.to_string())?;
            let Some(exact) = v.exact else {
                return Err(format!("{} n={n}: no exact volume", k.label()));
            };
            let coeff = BigRational::from_integer(BigInt::one() << (r as usize * (n + 1)));
            if exact.coeff != coeff || exact.pi_pow != s * (n as u32 + 1) {
                return Err(format!("{} n={n}: V = {exact}", k.label()));
            }
            volumes += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut systems = Vec::new();
    for d in [-5i64, -23, 10] {
        let k = Field::quadratic(d).unwrap();
        let sys = twisted(&k, 2, &mut rng).map_err(|e| e.to_string())?;
        systems.push((class_representatives(&k), sys));
    }
    let rescalings = 100;
    for j in 0..rescalings {
        let (reps, sys) = &systems[j % systems.len()];
        let k = &sys.field;
        let dd = &reps[(j / systems.len()) % reps.len()];
        let lambda = loop {
            let x = Element::from_ints(rng.gen_range(-9..10), rng.gen_range(-9..10));
            if !x.is_zero() {
                break x;
            }
        };
        let scaled = dd.scale_by(k, &lambda).map_err(|e| e.to_string())?;
        let (a, b) = (sys.class_invariant(dd), sys.class_invariant(&scaled));
        if a != b {
            return Err(format!("{}: Delta_N changed under scaling by {}: {a} vs {b}", k.label(), k.element_to_string(&lambda)));
        }
    }
    let spec = SystemSpec::parse(r#"{"field": "Q(sqrt(-5))", "n": 1, "finite": {"kind": "twist", "ideals": [[["2", "0"], ["1", "1"]], [["3", "0"]]]}}"#)
        .map_err(|e| e.to_string())?;
    let file_sys = spec.build().map_err(|e| e.to_string())?;
    let k = file_sys.field.clone();
    let base = FractionalIdeal::unit();
    let scaled = base.scale_by(&k, &Element::from_ints(3, -2)).map_err(|e| e.to_string())?;
    if file_sys.class_invariant(&base) != file_sys.class_invariant(&scaled) {
        return Err("Delta_N changed under scaling for the file-defined system".into());
    }
    Ok(format!("{volumes} standard volumes exact; Delta_N invariant under {rescalings} principal rescalings"))
}

fn criterion_8() -> Check {
    let exponent = schmidt_upper_exponent(1, 2, 1);
    if exponent != 2 * (2 + 1 + 3) + 4 + 1 + 20 + 10 {
        return Err(format!("upper exponent {exponent}"));
    }
    let constant = BigInt::one() << exponent as usize;
    let mut grid: Vec<BigRational> = vec![int(0), BigRational::new(1.into(), 2.into())];
    grid.extend((1..=10).map(int));
    grid.extend([BigRational::new(7.into(), 2.into()), BigRational::new(22.into(), 3.into())]);
    for x in &grid {
        let count = if x.is_zero() {
            0
        } else {
            count_quadratic_points_p1(x, &sched()).map_err(|e| e.to_string())?.points
        };
        let lhs = BigInt::from(count) * x.denom().pow(6);
        let rhs = &constant * x.numer().pow(6);
        if lhs > rhs {
            return Err(format!("X={x}: count {count} exceeds 2^{exponent} X^6"));
        }
    }
    Ok(format!("count <= 2^{exponent} X^6 at {} grid values including X=0", grid.len()))
}

fn criterion_9() -> Check {
    let tol = 1e-8;
    let small = ce_partial_sum(3, 1_000, tol).map_err(|e| e.to_string())?;
    let large = ce_partial_sum(3, 10_000, tol).map_err(|e| e.to_string())?;
    let diff = (&large.partial - &small.partial).abs();
    let cauchy = if diff.certainly_lt(&small.tail) {
        Ok(format!(
            "difference {:.4} < tail bound {:.2} at 10^3",
            diff.hi_f64(),
            small.tail.lo_f64()
        ))
    } else {
        Err(format!("difference {} not below tail {}", diff.hi_f64(), small.tail.lo_f64()))
    };
    let pts: Vec<(f64, f64)> = large
        .terms
        .iter()
        .map(|(d, s)| ((d.abs() as f64).ln(), s.mid_f64().ln()))
        .collect();
    let slope = least_squares_slope(&pts);
    let decay = if slope < -1.0 {
        Ok(format!("per-term slope {slope:.3} < -1"))
    } else {
        Err(format!("per-term slope {slope:.3} not below -1"))
    };
    all(vec![cauchy, decay])
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    num / den
}

fn criterion_10() -> Check {
    let tol = 1e-12;
    let qi = Field::parse("Q(i)").map_err(|e| e.to_string())?;
    let render = |s: &Schedule| -> heightcount::Result<Vec<String>> {
        Ok(vec![
            rational_report(1, &[int(125), int(250), int(500), int(1000)], s, tol)?.to_csv()?,
            rational_report(2, &[int(50), int(100), int(200)], s, tol)?.to_csv()?,
            field_report(&qi, 1, &[int(1), int(10), int(30)], s, tol)?.to_csv()?,
            primitive_report(&qi, 1, &[int(1), int(2), int(3), int(4)], s, tol)?.to_csv()?,
            quadratic_p1_report(&(1..=10).map(int).collect::<Vec<_>>(), s, tol)?.to_csv()?,
        ])
    };
    let base = render(&Schedule::new(1, Partition::Contiguous)).map_err(|e| e.to_string())?;
    let mut runs = 1;
    for workers in [1, 4] {
        for partition in [Partition::Contiguous, Partition::Interleaved] {
            let other = render(&Schedule::new(workers, partition)).map_err(|e| e.to_string())?;
            if other != base {
                return Err(format!("CSV differs for workers={workers} partition={partition:?}"));
            }
            runs += 1;
        }
    }
    let bytes: usize = base.iter().map(String::len).sum();
    Ok(format!("{} reports ({bytes} bytes) identical over {runs} schedules", base.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 10] = [
        (1, "Schanuel over Q", criterion_1),
        (2, "Schanuel over Q(i)", criterion_2),
        (3, "quadratic points of P^1", criterion_3),
        (4, "exact small cases", criterion_4),
        (5, "disjoint union by field", criterion_5),
        (6, "exponent inequality", criterion_6),
        (7, "volume identities", criterion_7),
        (8, "explicit upper bound", criterion_8),
        (9, "convergence diagnostics", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let mut failed = Vec::new();
    let mut seen: BTreeMap<u32, bool> = BTreeMap::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &result {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        println!("criterion {id:>2} {tag} [{name}] {detail} ({secs:.1} s)");
        seen.insert(id, result.is_ok());
        if result.is_err() {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        seen.values().filter(|&&ok| ok).count(),
        seen.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
