use lpmask::io::{format_scalar, parse_scalar};
use lpmask::numerics::{rat, solve_unique, RatMatrix, RatVector, Rational};
use num::{One, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=200).prop_map(|(n, d)| rat(n, d))
}

fn square(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-6i64..=6, n * n).prop_map(move |v| {
        RatMatrix::new(n, n, v.into_iter().map(|x| rat(x, 1)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form(n in -5000i64..=5000, d in prop_oneof![-300i64..=-1, 1i64..=300]) {
        let r = rat(n, d);
        prop_assert!(r.denom().is_positive());
        prop_assert!(num::Integer::gcd(r.numer(), r.denom()).is_one() || r.is_zero());
        if r.is_zero() {
            prop_assert!(r.denom().is_one());
        }
    }

    #[test]
    fn add_then_subtract(a in rational(), b in rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn scalar_text_roundtrip(r in rational()) {
        let text = format_scalar(&r);
        prop_assert_eq!(parse_scalar(&text).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_roundtrip(m in square(3)) {
        match m.inverse() {
            Ok(inv) => {
                prop_assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(3));
                prop_assert_eq!(inv.mul(&m).unwrap(), RatMatrix::identity(3));
            }
            Err(_) => prop_assert!(m.determinant().unwrap().is_zero()),
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in square(3), b in square(3)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(
            ab.determinant().unwrap(),
            a.determinant().unwrap() * b.determinant().unwrap()
        );
    }

    #[test]
    fn solve_is_consistent(m in square(3), rhs in prop::collection::vec(-9i64..=9, 3)) {
        let rhs = RatVector::from_ints(&rhs);
        match m.solve(&rhs) {
            Ok(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), rhs.clone()),
            Err(_) => prop_assert!(m.rank() < 3),
        }
        prop_assert_eq!(solve_unique(&m, &rhs).is_some(), m.rank() == 3);
    }

    #[test]
    fn null_space_is_annihilated(v in prop::collection::vec(-4i64..=4, 8)) {
        let m = RatMatrix::new(2, 4, v.into_iter().map(|x| rat(x, 1)).collect()).unwrap();
        let basis = m.null_space();
        prop_assert_eq!(basis.len(), 4 - m.rank());
        for d in &basis {
            prop_assert!(m.mul_vec(d).unwrap().is_zero());
        }
    }
}
