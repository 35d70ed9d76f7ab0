//! Exact fields, Gaussian elimination and chain-level homological algebra.

use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use serde_json::json;

use derivator::field::{is_prime, parse_rational, Field, FieldSpec, PrimeField, Rationals};
use derivator::homalg::{cone, direct_sum, ChainComplex, ChainMap, Homology};
use derivator::matrix::Matrix;
use derivator::random::{random_complex, random_invertible, seeded, RandomConfig};

fn fp() -> PrimeField {
    PrimeField::default_prime()
}

fn hom(pairs: &[(i64, usize)]) -> Homology {
    Homology(pairs.iter().copied().collect())
}

fn k_at<F: Field>(f: &F, n: i64) -> ChainComplex<F> {
    ChainComplex::concentrated(f, n, 1)
}

/// `k → k` by the identity, in degrees 1 and 0.
fn disk<F: Field>(f: &F) -> ChainComplex<F> {
    ChainComplex::new(f, 0, vec![1, 1], vec![Matrix::from_i64(f, 1, 1, &[1])]).unwrap()
}

#[test]
fn fields() {
    assert!(is_prime(32003) && !is_prime(32001) && !is_prime(1));
    assert!(FieldSpec::new(4).is_err());
    assert_eq!(FieldSpec::default().characteristic(), 32003);
    let f = fp();
    let a = f.from_i64(-1);
    assert_eq!(f.add(&a, &f.one()), f.zero());
    let inv = f.inv(&f.from_i64(2)).unwrap();
    assert_eq!(f.mul(&inv, &f.from_i64(2)), f.one());
    assert!(f.inv(&f.zero()).is_none());
    assert_eq!(f.from_json(&json!(32004)).unwrap(), f.one());
    assert!(f.from_json(&json!("1/2")).is_ok());
    let q = Rationals;
    let half = q.from_json(&json!("1/2")).unwrap();
    assert_eq!(q.to_json(&half), json!("1/2"));
    assert_eq!(q.to_json(&q.from_i64(3)), json!(3));
    assert!(parse_rational("1/0").is_err());
    assert_eq!(parse_rational("-2/4").unwrap(), BigRational::new((-1).into(), 2.into()));
}

#[test]
fn homology_examples() {
    let f = fp();
    assert_eq!(k_at(&f, 0).homology(), hom(&[(0, 1)]));
    assert!(disk(&f).is_acyclic());
    let c = ChainComplex::new(&f, 0, vec![1, 2], vec![Matrix::from_i64(&f, 1, 2, &[1, 0])]).unwrap();
    assert_eq!(c.homology(), hom(&[(1, 1)]));
    assert_eq!(c.euler(), c.homology().euler());
    let bad = ChainComplex::new(
        &f,
        0,
        vec![1, 1, 1],
        vec![Matrix::from_i64(&f, 1, 1, &[1]), Matrix::from_i64(&f, 1, 1, &[1])],
    );
    assert!(bad.is_err(), "d∘d ≠ 0 must be rejected");
}

#[test]
fn cone_examples() {
    let f = fp();
    let k = k_at(&f, 0);
    assert!(cone(&ChainMap::identity(&k)).unwrap().cone.is_acyclic());
    let z = ChainComplex::zero(&f);
    assert_eq!(cone(&ChainMap::zero(&z, &k)).unwrap().cone.homology(), k.homology());
    assert_eq!(cone(&ChainMap::zero(&k, &k)).unwrap().cone.homology(), hom(&[(0, 1), (1, 1)]));
}

#[test]
fn shift_sum_dual() {
    let f = fp();
    assert_eq!(k_at(&f, 0).shift(1).homology(), hom(&[(1, 1)]));
    assert!(direct_sum(&f, &[]).unwrap().sum.is_zero_complex());
    let s = direct_sum(&f, &[k_at(&f, 0), disk(&f), k_at(&f, 2)]).unwrap();
    assert_eq!(s.sum.homology(), hom(&[(0, 1), (2, 1)]));
    for (i, p) in s.projections.iter().enumerate() {
        assert!(p.compose(&s.injections[i]).unwrap().equals(&ChainMap::identity(p.target())));
    }
    let c = ChainComplex::new(&f, 0, vec![1, 2], vec![Matrix::from_i64(&f, 1, 2, &[1, 0])]).unwrap();
    assert_eq!(c.dual().homology(), hom(&[(-1, 1)]));
    assert_eq!(c.dual().dual(), c);
}

#[test]
fn quasi_isomorphisms_and_homotopies() {
    let f = fp();
    let k = k_at(&f, 0);
    assert!(ChainMap::identity(&k).is_quasi_iso());
    let z = ChainComplex::zero(&f);
    assert!(ChainMap::zero(&z, &disk(&f)).is_quasi_iso());
    let s = direct_sum(&f, &[k.clone(), disk(&f)]).unwrap();
    assert!(s.projections[0].is_quasi_iso());
    assert!(!ChainMap::zero(&k, &k).is_quasi_iso());
    // Null-homotopies.
    assert!(ChainMap::zero(&k, &k).null_homotopy().is_some());
    assert!(ChainMap::identity(&disk(&f)).null_homotopy().is_some());
    assert!(ChainMap::identity(&k).null_homotopy().is_none());
    // A non-chain map is rejected.
    let d = disk(&f);
    let comps = BTreeMap::from([(0, Matrix::from_i64(&f, 1, 1, &[1]))]);
    assert!(ChainMap::new(d.clone(), d, comps).is_err());
}

#[test]
fn rationals_agree_with_prime_field_on_small_examples() {
    let q = Rationals;
    let c = ChainComplex::new(&q, 0, vec![2, 2], vec![Matrix::from_i64(&q, 2, 2, &[1, 2, 2, 4])]).unwrap();
    assert_eq!(c.homology(), hom(&[(0, 1), (1, 1)]));
    let f = fp();
    let c = ChainComplex::new(&f, 0, vec![2, 2], vec![Matrix::from_i64(&f, 2, 2, &[1, 2, 2, 4])]).unwrap();
    assert_eq!(c.homology(), hom(&[(0, 1), (1, 1)]));
    // Characteristic matters: 2 is zero in F_2.
    let f2 = PrimeField::new(2).unwrap();
    let c = ChainComplex::new(&f2, 0, vec![1, 1], vec![Matrix::from_i64(&f2, 1, 1, &[2])]).unwrap();
    assert_eq!(c.homology(), hom(&[(0, 1), (1, 1)]));
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-3i64..4, r * c)))
}

proptest! {
    #[test]
    fn rank_nullity((r, c, e) in small_matrix()) {
        let f = fp();
        let m = Matrix::from_i64(&f, r, c, &e);
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.cols(), c);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn inverse_and_solve(seed in any::<u64>(), n in 1usize..6) {
        let f = fp();
        let mut rng = seeded(seed);
        let (a, a_inv) = random_invertible(&f, n, &mut rng);
        prop_assert_eq!(a.mul(&a_inv), Matrix::identity(&f, n));
        prop_assert_eq!(a.inverse().unwrap(), a_inv.clone());
        let b = Matrix::from_fn(&f, n, 1, |i, _| f.from_i64(i as i64 + 1));
        let x = a.solve(&b).unwrap();
        prop_assert_eq!(a.mul(&x), b);
    }

    #[test]
    fn complex_invariants(seed in any::<u64>()) {
        let f = fp();
        let mut rng = seeded(seed);
        let c = random_complex(&f, &RandomConfig::default(), &mut rng).unwrap();
        // Euler characteristic of chains equals that of homology.
        prop_assert_eq!(c.euler(), c.homology().euler());
        // Shift and dual move homology as expected.
        prop_assert_eq!(c.shift(2).homology(), c.homology().shifted(2));
        let mirrored = Homology(c.homology().0.iter().map(|(&n, &d)| (-n, d)).collect());
        prop_assert_eq!(c.dual().homology(), mirrored);
        // The cone of the identity is acyclic and the cone of 0 → C is C.
        prop_assert!(cone(&ChainMap::identity(&c)).unwrap().cone.is_acyclic());
        let z = ChainComplex::zero(&f);
        prop_assert_eq!(cone(&ChainMap::zero(&z, &c)).unwrap().cone.homology(), c.homology());
    }

    #[test]
    fn cone_long_exact_sequence(seed in any::<u64>()) {
        // For f : X → Y, χ(cone f) = χ(Y) − χ(X), and f is a
        // quasi-isomorphism exactly when its cone is acyclic.
        let f = fp();
        let mut rng = seeded(seed);
        let c = random_complex(&f, &RandomConfig::small(), &mut rng).unwrap();
        let d = random_complex(&f, &RandomConfig::small(), &mut rng).unwrap();
        let s = direct_sum(&f, &[c.clone(), d.clone()]).unwrap();
        let p = &s.projections[0];
        let k = cone(p).unwrap().cone;
        prop_assert_eq!(k.euler(), c.euler() - s.sum.euler());
        prop_assert_eq!(p.is_quasi_iso(), k.is_acyclic());
        prop_assert_eq!(k.homology(), d.homology().shifted(1));
    }
}
