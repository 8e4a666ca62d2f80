use std::collections::HashMap;

use num_integer::Integer;

use super::field::{Element, Field, QuadraticField};
use super::ideal::FractionalIdeal;
use super::units::fundamental_unit;
use crate::arith::{divisors, isqrt};

/// Binary quadratic form `a x^2 + b xy + c y^2`.
pub type Form = (i64, i64, i64);

fn primitive(f: Form) -> bool {
    f.0.gcd(&f.1).gcd(&f.2) == 1
}

/// Reduced primitive positive definite forms of discriminant `disc < 0`:
/// `|b| <= a <= c`, with `b >= 0` whenever `|b| = a` or `a = c`.
pub fn reduced_forms_definite(disc: i64) -> Vec<Form> {
    assert!(disc < 0);
    let mut out = Vec::new();
    let bmax = isqrt((-disc / 3) as u128) as i64;
    let mut b = disc.rem_euclid(2);
    while b <= bmax {
        let n = (b * b - disc) / 4;
        for a in divisors(n as u64).into_iter().map(|a| a as i64) {
            let c = n / a;
            if a < b.max(1) || a > c {
                continue;
            }
            if !primitive((a, b, c)) {
                continue;
            }
            out.push((a, b, c));
            if b != 0 && b != a && a != c {
                out.push((a, -b, c));
            }
        }
        b += 2;
    }
    out.sort_unstable();
    out
}

/// Reduced primitive indefinite forms of a non-square discriminant
/// `disc > 0`: `0 < b < sqrt(disc)` and
/// `sqrt(disc) - b < 2|a| < sqrt(disc) + b`.
pub fn reduced_forms_indefinite(disc: i64) -> Vec<Form> {
    assert!(disc > 0);
    let s = isqrt(disc as u128) as i64;
    let d = disc as i128;
    let mut out = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (disc - b * b) / 4; // a c = -n
        if n > 0 {
            for a in divisors(n as u64).into_iter().map(|a| a as i64) {
                let two_a = 2 * a as i128;
                // sqrt(D) - b < 2|a|  and  2|a| < sqrt(D) + b
                let lower_ok = !crate::arith::lt_sqrt(two_a + b as i128, d);
                let upper_ok = crate::arith::lt_sqrt(two_a - b as i128, d);
                if !(lower_ok && upper_ok) {
                    continue;
                }
                let c = n / a;
                for (sa, sc) in [(a, -c), (-a, c)] {
                    if primitive((sa, b, sc)) {
                        out.push((sa, b, sc));
                    }
                }
            }
        }
        b += 2;
    }
    out.sort_unstable();
    out
}

/// One reduction step on a reduced indefinite form.
pub fn rho(f: Form, disc: i64) -> Form {
    let (_, b, c) = f;
    let m = 2 * c.abs();
    let s = isqrt(disc as u128) as i64;
    let t = (-b).rem_euclid(m);
    let bp = t + m * Integer::div_floor(&(s - t), &m);
    let cp = (bp * bp - disc) / (4 * c);
    (c, bp, cp)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

/// Narrow and wide class numbers of a real quadratic field from the
/// cycles of reduced forms.
pub fn real_class_numbers(disc: i64) -> (u64, u64, Vec<Form>) {
    let forms = reduced_forms_indefinite(disc);
    let index: HashMap<Form, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    for (i, f) in forms.iter().enumerate() {
        let j = index[&rho(*f, disc)];
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        parent[ri] = rj;
    }
    let narrow = (0..forms.len()).filter(|&i| find(&mut parent, i) == i).count() as u64;
    for (i, f) in forms.iter().enumerate() {
        let j = index[&(-f.0, f.1, -f.2)];
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        parent[ri] = rj;
    }
    let mut reps = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, f) in forms.iter().enumerate() {
        let r = find(&mut parent, i);
        if f.0 > 0 && seen.insert(r) {
            reps.push(*f);
        }
    }
    (narrow, reps.len() as u64, reps)
}

pub fn class_number_quadratic(k: &QuadraticField) -> u64 {
    if k.is_real() {
        real_class_numbers(k.disc).1
    } else {
        reduced_forms_definite(k.disc).len() as u64
    }
}

/// Narrow class number; equals the class number for imaginary fields.
pub fn narrow_class_number(k: &QuadraticField) -> u64 {
    if k.is_real() {
        real_class_numbers(k.disc).0
    } else {
        class_number_quadratic(k)
    }
}

pub fn class_number(field: &Field) -> u64 {
    match field {
        Field::Rational => 1,
        Field::Quadratic(k) => class_number_quadratic(k),
    }
}

/// The ideal `a Z + ((-b + sqrt(disc))/2) Z` attached to a form.
pub fn form_to_ideal(field: &Field, f: Form) -> FractionalIdeal {
    let k = field.as_quadratic().expect("forms need a quadratic field");
    // (-b + sqrt(disc))/2 in the omega basis
    let shift = if k.t == 1 { (-f.1 - 1) / 2 } else { -f.1 / 2 };
    FractionalIdeal::from_generators(
        field,
        &[Element::from_int(f.0.abs()), Element::from_ints(shift, 1)],
    )
    .expect("nonzero generators")
}

/// One integral ideal from each ideal class, the trivial class first.
pub fn class_representatives(field: &Field) -> Vec<FractionalIdeal> {
    match field {
        Field::Rational => vec![FractionalIdeal::unit()],
        Field::Quadratic(k) => {
            let forms = if k.is_real() {
                real_class_numbers(k.disc).2
            } else {
                reduced_forms_definite(k.disc)
            };
            let mut ideals: Vec<FractionalIdeal> =
                forms.into_iter().map(|f| form_to_ideal(field, f)).collect();
            // the principal form has a = 1 and sorts first among a > 0
            ideals.sort_by(|x, y| x.a.cmp(&y.a).then(x.b.cmp(&y.b)));
            ideals
        }
    }
}

/// Narrow and wide class numbers must be related through the sign of the
/// fundamental unit's norm; returns false when they are not.
pub fn narrow_wide_consistent(k: &QuadraticField) -> bool {
    if !k.is_real() {
        return true;
    }
    let (narrow, wide, _) = real_class_numbers(k.disc);
    let (_, unit_norm) = fundamental_unit(k);
    if unit_norm < 0 {
        narrow == wide
    } else {
        narrow == 2 * wide
    }
}
