use heightcount::arith::is_squarefree;
use heightcount::census::{count_imaginary_quadratic, count_primitive, count_rational, Partition, Schedule};
use heightcount::heights::{height_power, root_element, root_height_from_minpoly, weil_height, HomogeneousTuple};
use heightcount::nfq::{Element, Field, FractionalIdeal};
use heightcount::{QuadSurd, Real};
use num_rational::BigRational;
use proptest::prelude::*;
use std::cmp::Ordering;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn nonzero_tuple(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-30i64..=30, len).prop_filter("not all zero", |v| v.iter().any(|&c| c != 0))
}

fn imaginary_d() -> impl Strategy<Value = i64> {
    (1i64..60).prop_filter("squarefree", |&d| is_squarefree(d)).prop_map(|d| -d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heights_are_at_least_one(coords in nonzero_tuple(3)) {
        let h = height_power(&HomogeneousTuple::rational(&coords).unwrap()).unwrap();
        prop_assert!(h.value.cmp_surd(&QuadSurd::from_int(1)) != Ordering::Less);
    }

    #[test]
    fn heights_ignore_scaling(coords in nonzero_tuple(3), d in imaginary_d(), a in -6i64..=6, b in 1i64..=6) {
        let k = Field::quadratic(d).unwrap();
        let t = HomogeneousTuple::rational(&coords).unwrap().lift(&k);
        let lambda = Element::from_ints(a, b);
        prop_assert_eq!(height_power(&t).unwrap(), height_power(&t.scaled(&lambda)).unwrap());
    }

    #[test]
    fn rational_heights_match_the_gcd_formula(coords in nonzero_tuple(2)) {
        let g = coords.iter().fold(0i64, |g, &c| num_integer::gcd(g, c));
        let max = coords.iter().map(|c| c.abs()).max().unwrap() / g;
        let h = height_power(&HomogeneousTuple::rational(&coords).unwrap()).unwrap();
        prop_assert_eq!(h.value, QuadSurd::from_int(max));
    }

    #[test]
    fn root_height_is_the_mahler_measure(a in 1i64..12, b in -20i64..=20, c in -12i64..=12) {
        prop_assume!(c != 0);
        let disc = b * b - 4 * a * c;
        prop_assume!(disc != 0 && (disc < 0 || (disc as f64).sqrt().fract() != 0.0));
        prop_assume!(num_integer::gcd(num_integer::gcd(a, b), c) == 1);
        let (k, alpha) = root_element(a, b, c).unwrap();
        let direct = weil_height(&HomogeneousTuple::new(k, vec![Element::one(), alpha]).unwrap()).unwrap();
        let via = root_height_from_minpoly(a, b, c).unwrap();
        prop_assert!(direct.enclosure.overlaps(&via.enclosure));
    }

    #[test]
    fn rational_counts_grow_with_x(n in 1usize..=3, x in 1i64..40) {
        let s = Schedule::default();
        let lo = count_rational(n, &int(x), &s).unwrap();
        let hi = count_rational(n, &int(x + 1), &s).unwrap();
        prop_assert!(lo <= hi);
        let half = count_rational(n, &BigRational::new(1.into(), 2.into()), &s).unwrap();
        prop_assert_eq!(half, 0);
    }

    #[test]
    fn counts_do_not_depend_on_the_schedule(x in 1i64..300, workers in 1usize..5, interleaved in any::<bool>()) {
        let p = if interleaved { Partition::Interleaved } else { Partition::Contiguous };
        let a = count_rational(2, &int(x), &Schedule::default()).unwrap();
        let b = count_rational(2, &int(x), &Schedule::new(workers, p)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ideal_norms_multiply(d in imaginary_d(), a in 1i64..8, b in -5i64..6, c in 1i64..8, e in -5i64..6) {
        let k = Field::quadratic(d).unwrap();
        let i = FractionalIdeal::from_generators(&k, &[Element::from_int(a), Element::from_ints(b, 1)]).unwrap();
        let j = FractionalIdeal::from_generators(&k, &[Element::from_int(c), Element::from_ints(e, 1)]).unwrap();
        prop_assert_eq!(i.mul(&k, &j).norm(&k), i.norm(&k) * j.norm(&k));
    }

    #[test]
    fn interval_products_contain_float_products(x in -1e6f64..1e6, y in -1e6f64..1e6) {
        let rx = Real::exact(BigRational::from_float(x).unwrap());
        let ry = Real::exact(BigRational::from_float(y).unwrap());
        let p = (&rx * &ry).round(40);
        prop_assert!(p.contains(&(BigRational::from_float(x).unwrap() * BigRational::from_float(y).unwrap())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn field_points_split_into_rational_and_primitive(d in imaginary_d(), x in 1i64..6) {
        let k = Field::quadratic(d).unwrap();
        let s = Schedule::default();
        let all = count_imaginary_quadratic(&k, 1, &int(x), &s).unwrap();
        let rational = count_rational(1, &int(x), &s).unwrap();
        let primitive = count_primitive(&k, 1, &int(x), &s).unwrap();
        prop_assert_eq!(all, rational + primitive);
        prop_assert!(all >= rational);
    }
}

#[test]
fn field_labels_round_trip() {
    for d in (-40i64..=40).filter(|&d| d != 0 && d != 1 && is_squarefree(d)) {
        let k = Field::quadratic(d).unwrap();
        assert_eq!(Field::parse(&k.label()).unwrap(), k, "d = {d}");
    }
}
