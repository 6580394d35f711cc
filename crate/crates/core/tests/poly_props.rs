use num_traits::{One, Zero};
use proptest::prelude::*;

use qcmod::poly::{
    approximate_roots, classify_hecke_field, count_real_roots, factor_over_rationals, FieldClass,
    IntPolynomial,
};
use qcmod::Q;

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

fn int_poly(max_degree: usize) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-20i64..=20, 1..=max_degree + 1)
        .prop_map(|c| IntPolynomial::from_i64(&c))
        .prop_filter("nonzero", |f| !f.is_zero())
}

/// Irreducible polynomials over ℚ with known real-root counts.
fn known_irreducibles() -> Vec<(IntPolynomial, usize)> {
    let mut v: Vec<(IntPolynomial, usize)> = (-4..=4).map(|a| (p(&[-a, 1]), 1)).collect();
    v.extend([
        (p(&[1, 0, 1]), 0),
        (p(&[3, 0, 1]), 0),
        (p(&[-2, 0, 1]), 2),
        (p(&[-3, 0, 1]), 2),
        (p(&[1, 1, 1]), 0),
        (p(&[-1, 1, 1]), 2),
        (p(&[-1, -1, 0, 0, 0, 1]), 1),
        (p(&[1, 0, 0, 0, 1]), 0),
        (p(&[1, 1, 1, 1, 1]), 0),
        (p(&[-2, 0, 0, 1]), 1),
        (p(&[1, -3, 0, 1]), 3),
        (p(&[1, 3, -3, -4, 1, 1]), 5),
    ]);
    v
}

type RPoly = Vec<Q>;

fn rtrim(mut a: RPoly) -> RPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn to_r(f: &IntPolynomial) -> RPoly {
    f.coeffs().iter().map(|c| Q::from_integer(c.clone())).collect()
}

fn rrem(a: &RPoly, b: &RPoly) -> RPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r = rtrim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn rdiv(a: &RPoly, b: &RPoly) -> RPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    let mut q = vec![Q::zero(); a.len() + 1 - b.len()];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r = rtrim(r);
    }
    assert!(r.is_empty(), "inexact division in oracle");
    q
}

/// Euclid over ℚ, normalized monic.
fn rgcd(a: &RPoly, b: &RPoly) -> RPoly {
    let (mut a, mut b) = (rtrim(a.clone()), rtrim(b.clone()));
    while !b.is_empty() {
        let r = rrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn monic(a: RPoly) -> RPoly {
    let l = a.last().unwrap().clone();
    a.into_iter().map(|c| c / &l).collect()
}

fn rderiv(a: &RPoly) -> RPoly {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer((i as i64).into()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn factors_multiply_back(f in int_poly(8)) {
        let factors = factor_over_rationals(&f).unwrap();
        let mut prod = IntPolynomial::one();
        for (g, e) in &factors {
            prop_assert!(g.degree().unwrap() >= 1);
            prop_assert!(g.is_primitive());
            prod = prod.mul(&g.pow(*e));
        }
        prop_assert_eq!(prod.primitive_part(), f.primitive_part());
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                prop_assert_ne!(&factors[i].0, &factors[j].0);
            }
        }
    }

    #[test]
    fn recovers_products_of_known_irreducibles(
        picks in prop::collection::btree_map(0usize..21, 1usize..=3, 1..4),
    ) {
        let table = known_irreducibles();
        let mut f = IntPolynomial::one();
        let mut expected: Vec<(IntPolynomial, usize)> = Vec::new();
        for (&i, &e) in &picks {
            let g = table[i].0.primitive_part();
            f = f.mul(&g.pow(e));
            expected.push((g, e));
        }
        let mut got = factor_over_rationals(&f).unwrap();
        got.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
        expected.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn squarefree_part_matches_rational_euclid(f in int_poly(7)) {
        prop_assume!(f.degree().unwrap() >= 1);
        let rf = to_r(&f);
        let g = rgcd(&rf, &rderiv(&rf));
        let oracle = monic(rdiv(&rf, &g));
        let sf = f.squarefree_part().unwrap();
        prop_assert_eq!(monic(to_r(&sf)), oracle);
        prop_assert!(sf.is_squarefree());
    }

    #[test]
    fn squarefree_of_a_square_times_cofactor(f in int_poly(4), g in int_poly(3)) {
        prop_assume!(f.degree().unwrap() >= 1);
        let h = f.pow(2).mul(&g);
        prop_assert!(!h.is_squarefree());
        let sf = h.squarefree_part().unwrap();
        prop_assert!(sf.is_squarefree());
        prop_assert!(rrem(&to_r(&sf), &to_r(&f.squarefree_part().unwrap())).is_empty());
        prop_assert!(rrem(&to_r(&h), &to_r(&sf)).is_empty());
    }

    #[test]
    fn sturm_count_of_known_products(picks in prop::collection::btree_set(0usize..21, 1..5)) {
        let table = known_irreducibles();
        let mut f = IntPolynomial::one();
        let mut real = 0;
        for &i in &picks {
            f = f.mul(&table[i].0);
            real += table[i].1;
        }
        prop_assert_eq!(count_real_roots(&f).unwrap(), real);
    }

    #[test]
    fn real_root_parity(f in int_poly(9)) {
        prop_assume!(f.is_squarefree());
        let n = f.degree().unwrap();
        let r = count_real_roots(&f).unwrap();
        prop_assert!(r <= n);
        prop_assert_eq!(r % 2, n % 2);
    }

    #[test]
    fn roots_of_split_polynomials(roots in prop::collection::vec(-9i64..=9, 1..7)) {
        let mut f = IntPolynomial::one();
        for &a in &roots {
            f = f.mul(&p(&[-a, 1]));
        }
        let mut got: Vec<f64> = approximate_roots(&f).iter().map(|z| z.re).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = roots.clone();
        want.sort();
        for (g, w) in got.iter().zip(&want) {
            // Clustered roots of multiplicity m are only accurate to about eps^(1/m).
            prop_assert!((g - *w as f64).abs() < 1e-2, "{} vs {}", g, w);
        }
    }
}

#[test]
fn classification_of_known_fields() {
    for (f, real) in known_irreducibles() {
        let n = f.degree().unwrap();
        match classify_hecke_field(&f) {
            Ok(FieldClass::TotallyReal) => assert_eq!(real, n),
            Ok(FieldClass::Cm { real_subfield_degree }) => {
                assert_eq!(real, 0);
                assert_eq!(2 * real_subfield_degree, n);
            }
            Err(_) => assert!(real != 0 && real != n, "{f} misclassified"),
        }
    }
    assert!(classify_hecke_field(&p(&[-1, 0, 1])).is_err());
}

#[test]
fn squarefree_oracle_sanity() {
    let f = to_r(&p(&[1, 2, 1]));
    assert_eq!(rgcd(&f, &rderiv(&f)), vec![Q::one(), Q::one()]);
}
