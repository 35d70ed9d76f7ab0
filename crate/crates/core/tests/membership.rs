//! Membership predicates and unit certification.

use std::collections::BTreeMap;
use std::sync::Arc;

use derivator::diagram::squares::SquareRef;
use derivator::diagram::Diagram;
use derivator::field::{Field, PrimeField};
use derivator::homalg::ChainComplex;
use derivator::membership::{
    a_n2_spec, collapse_witness, is_member, k_spec, unit_iso_check, NamedSpec, SubderivatorSpec, UnitMethod,
};
use derivator::pipeline::g_n_traced;
use derivator::poset::connectors::{collapse_v, i_map};
use derivator::poset::shapes::{a_n, b_tilde, square};
use derivator::poset::{FinPoset, Label, MonotoneMap};
use derivator::random::{random_diagram, seeded, RandomConfig};

fn fp() -> PrimeField {
    PrimeField::default_prime()
}

fn point<F: Field>(f: &F, shape: Arc<FinPoset>, at: &Label) -> Diagram<F> {
    let values = shape
        .objects()
        .iter()
        .map(|l| if l == at { ChainComplex::concentrated(f, 0, 1) } else { ChainComplex::zero(f) })
        .collect();
    Diagram::from_cover_map(f, shape, values, BTreeMap::new()).unwrap()
}

#[test]
fn zero_diagram_is_in_every_named_spec() {
    let f = fp();
    for name in ["A(3,2)", "A(4,2)", "A(5,2)", "K(4,1,1)", "K(4,2,3)", "K(5,3,5)", "M3-ex(-4,2)"] {
        let spec = SubderivatorSpec::named(name).unwrap();
        let z = Diagram::zero(&f, spec.shape().clone());
        assert!(is_member(&spec, &z, true).unwrap().pass, "{name}");
        assert_eq!(name.parse::<NamedSpec>().unwrap().to_string(), name);
    }
    assert!(SubderivatorSpec::named("B(3)").is_err());
    assert!(SubderivatorSpec::named("K(4,3,1)").is_err());
}

#[test]
fn vanishing_failure_names_the_slot() {
    let f = fp();
    let spec = a_n2_spec(4).unwrap();
    let x = point(&f, spec.shape().clone(), &Label::pair(1, 2));
    let r = is_member(&spec, &x, false).unwrap();
    assert!(!r.pass);
    let fails = r.failures();
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0].kind, "vanishing");
    assert_eq!(fails[0].subject, "(1,2)");
}

#[test]
fn pipeline_outputs_are_members() {
    let f = fp();
    let mut rng = seeded(21);
    for n in 3..=5 {
        let spec = a_n2_spec(n).unwrap();
        let shape = Arc::new(a_n(n).unwrap());
        for _ in 0..3 {
            let x = random_diagram(&f, &shape, &RandomConfig::small(), &mut rng).unwrap();
            let run = g_n_traced(n, &x, true).unwrap();
            assert!(is_member(&spec, &run.output, true).unwrap().pass);
        }
    }
}

#[test]
fn iso_and_bicartesian_conditions() {
    let f = fp();
    let sq = Arc::new(square());
    let s = SquareRef::new(Label::pair(0, 0), Label::pair(1, 0), Label::pair(0, 1), Label::pair(1, 1));
    let spec = SubderivatorSpec::new(
        "test",
        sq.clone(),
        vec![],
        vec![(Label::pair(0, 0), Label::pair(1, 0))],
        vec![s],
    )
    .unwrap();
    let k = ChainComplex::concentrated(&f, 0, 1);
    assert!(is_member(&spec, &Diagram::constant(&f, sq.clone(), &k), true).unwrap().pass);
    let r = is_member(&spec, &point(&f, sq.clone(), &Label::pair(1, 1)), true).unwrap();
    assert_eq!(r.failures().iter().map(|c| c.kind.as_str()).collect::<Vec<_>>(), ["bicartesian"]);
    let r = is_member(&spec, &point(&f, sq.clone(), &Label::pair(0, 0)), true).unwrap();
    assert!(r.failures().iter().any(|c| c.kind == "iso"));
    // Conditions must refer to the shape.
    assert!(SubderivatorSpec::new("bad", sq.clone(), vec![Label::pair(5, 5)], vec![], vec![]).is_err());
    assert!(SubderivatorSpec::new("bad", sq, vec![], vec![(Label::pair(1, 0), Label::pair(0, 1))], vec![]).is_err());
}

#[test]
fn unit_along_identity_and_connectors() {
    let f = fp();
    let mut rng = seeded(22);
    let shape = Arc::new(a_n(4).unwrap());
    let x = random_diagram(&f, &shape, &RandomConfig::small(), &mut rng).unwrap();
    let id = MonotoneMap::identity(shape);
    assert!(unit_iso_check(&id, &x, UnitMethod::Both).unwrap().pass);
    // Members of K(4,2,1) taken from the pipeline, checked along i(4,1,4).
    let u = i_map(4, 1, 4).unwrap();
    let spec = k_spec(4, 2, 1).unwrap();
    for _ in 0..3 {
        let x = random_diagram(&f, &Arc::new(a_n(4).unwrap()), &RandomConfig::small(), &mut rng).unwrap();
        let run = g_n_traced(4, &x, true).unwrap();
        let member = run
            .trace
            .iter()
            .find(|s| **s.output.shape() == **spec.shape())
            .expect("the pipeline passes through K(4,2,1)")
            .output
            .with_shape(u.source().clone())
            .unwrap();
        assert!(is_member(&spec, &member.with_shape(spec.shape().clone()).unwrap(), false).unwrap().pass);
        assert!(unit_iso_check(&u, &member, UnitMethod::Both).unwrap().pass);
    }
}

#[test]
fn collapse_is_not_an_epimorphism() {
    let f = fp();
    let v = collapse_v();
    let r = unit_iso_check(&v, &collapse_witness(&f), UnitMethod::Both).unwrap();
    assert_eq!(r.failures(), ["d"]);
    // A single k@0 at the source a fails at d as well, and also at a
    // itself: a and c are merged, so the unit at a sees X(c) = 0.
    let shape = Arc::new(b_tilde());
    let x = point(&f, shape, &Label::sym("a"));
    let r = unit_iso_check(&v, &x, UnitMethod::Both).unwrap();
    assert_eq!(r.failures(), ["a", "d"]);
    // Its arrow a → c is an isomorphism in the constant witness.
    let w = collapse_witness(&f);
    let (a, c) = (w.shape().index_of(&Label::sym("a")).unwrap(), w.shape().index_of(&Label::sym("c")).unwrap());
    assert!(w.map(a, c).unwrap().is_quasi_iso());
}
