//! The equivalence pipeline, straightening, the mesh window and the
//! filtration backbone.

use std::collections::BTreeMap;
use std::sync::Arc;

use derivator::diagram::{same_signature, Diagram};
use derivator::field::{Field, PrimeField};
use derivator::homalg::{ChainComplex, ChainMap, Homology};
use derivator::matrix::Matrix;
use derivator::membership::{a_n2_spec, is_member};
use derivator::pipeline::{
    dold_kan_check, g_n, g_n_traced, i_n_functor, i_n_traced, mesh_build_and_check, plan, same_member, straighten, Direction,
    StepKind,
};
use derivator::poset::shapes::{a_n, a_tilde};
use derivator::poset::Label;
use derivator::random::{random_diagram, random_staircase_member, seeded, RandomConfig};
use derivator::Error;

fn fp() -> PrimeField {
    PrimeField::default_prime()
}

fn hom(pairs: &[(i64, usize)]) -> Homology {
    Homology(pairs.iter().copied().collect())
}

/// `k^{d_1} → … → k^{d_n}` in degree 0 over `A_n` with the given matrices.
fn chain<F: Field>(field: &F, dims: &[usize], maps: &[Vec<i64>]) -> Diagram<F> {
    let shape = Arc::new(a_n(dims.len()).unwrap());
    let values: Vec<ChainComplex<F>> = dims.iter().map(|&d| ChainComplex::concentrated(field, 0, d)).collect();
    let mut arrows = BTreeMap::new();
    for (i, m) in maps.iter().enumerate() {
        let mat = Matrix::from_i64(field, dims[i + 1], dims[i], m);
        arrows.insert((i, i + 1), ChainMap::new(values[i].clone(), values[i + 1].clone(), BTreeMap::from([(0, mat)])).unwrap());
    }
    Diagram::from_cover_map(field, shape, values, arrows).unwrap()
}

/// The interval module supported on `[a, b]` (1-based, inclusive).
fn interval_module<F: Field>(field: &F, n: usize, a: usize, b: usize) -> Diagram<F> {
    let dims: Vec<usize> = (1..=n).map(|i| usize::from(a <= i && i <= b)).collect();
    let maps: Vec<Vec<i64>> = (1..n).map(|i| if dims[i - 1] == 1 && dims[i] == 1 { vec![1] } else { vec![] }).collect();
    chain(field, &dims, &maps)
}

fn at<F: Field>(y: &Diagram<F>, x: i64, z: i64) -> Homology {
    y.value_at(&Label::pair(x, z)).unwrap().homology()
}

#[test]
fn plan_shapes_and_lengths() {
    let p3 = plan(3, Direction::ToStaircase).unwrap();
    let names: Vec<String> = p3.steps.iter().map(|s| s.to_string()).collect();
    assert_eq!(names, ["kan_left i(3,1,3)", "kan_right i(3,1,2)", "restrict i(3,1,1)"]);
    let p4 = plan(4, Direction::ToAn).unwrap();
    assert_eq!(p4.steps.len(), 9);
    assert_eq!(**p4.steps.last().unwrap().output_shape(), a_n(4).unwrap());
    assert!(plan(2, Direction::ToAn).is_err());
    for n in 3..=6 {
        for dir in [Direction::ToAn, Direction::ToStaircase] {
            let p = plan(n, dir).unwrap();
            for w in p.steps.windows(2) {
                assert_eq!(**w[0].output_shape(), **w[1].input_shape(), "n={n} {dir}: {} then {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn plans_are_mirror_images() {
    for n in 3..=6 {
        let fwd = plan(n, Direction::ToAn).unwrap();
        let back = plan(n, Direction::ToStaircase).unwrap();
        assert_eq!(fwd.steps.len(), back.steps.len());
        for (a, b) in fwd.steps.iter().zip(back.steps.iter().rev()) {
            assert_eq!(a.map.name(), b.map.name());
            assert!((a.kind == StepKind::Restrict) != (b.kind == StepKind::Restrict), "{a} vs {b}");
            assert_eq!(**a.input_shape(), **b.output_shape());
        }
    }
}

#[test]
fn g3_of_identity_chain() {
    let f = fp();
    let x = chain(&f, &[1, 1, 1], &[vec![1], vec![1]]);
    let y = g_n_traced(3, &x, true).unwrap().output;
    assert!(at(&y, 0, 0).is_zero());
    assert_eq!(at(&y, 1, 0), hom(&[(0, 1)]));
    assert!(at(&y, 0, 1).is_zero());
    assert_eq!(at(&y, 2, 1), hom(&[(0, 1)]));
}

#[test]
fn g3_of_first_vertex_is_fiber() {
    let f = fp();
    let x = chain(&f, &[1, 0, 0], &[vec![], vec![]]);
    let y = g_n(3, &x).unwrap();
    assert_eq!(at(&y, 0, 0), hom(&[(0, 1)]));
}

#[test]
fn zero_goes_to_zero_both_ways() {
    let f = fp();
    for n in 3..=5 {
        let x = Diagram::zero(&f, Arc::new(a_n(n).unwrap()));
        assert!(g_n(n, &x).unwrap().values().iter().all(|c| c.is_acyclic()));
        let y = Diagram::zero(&f, Arc::new(a_tilde(n).unwrap()));
        assert!(i_n_functor(n, &y).unwrap().values().iter().all(|c| c.is_acyclic()));
    }
}

#[test]
fn interval_modules_round_trip_with_audit() {
    let f = fp();
    for n in 3..=4 {
        let spec = a_n2_spec(n).unwrap();
        for a in 1..=n {
            for b in a..=n {
                let x = interval_module(&f, n, a, b);
                let y = g_n_traced(n, &x, true).unwrap().output;
                assert!(is_member(&spec, &y, false).unwrap().pass);
                let back = i_n_traced(n, &y, true).unwrap().output;
                assert!(same_signature(&back, &x).unwrap(), "n={n} [{a},{b}]");
            }
        }
    }
}

#[test]
fn random_round_trips() {
    let f = fp();
    let mut rng = seeded(11);
    let cfg = RandomConfig::small();
    for n in 3..=4 {
        let shape = Arc::new(a_n(n).unwrap());
        for _ in 0..4 {
            let x = random_diagram(&f, &shape, &cfg, &mut rng).unwrap();
            let y = g_n(n, &x).unwrap();
            assert!(same_signature(&i_n_functor(n, &y).unwrap(), &x).unwrap());
            let m = random_staircase_member(&f, n, &cfg, &mut rng).unwrap();
            let back = g_n(n, &i_n_functor(n, &m).unwrap()).unwrap();
            assert!(same_member(n, &back, &m).unwrap());
        }
    }
}

#[test]
fn i_n_rejects_non_members() {
    let f = fp();
    let shape = Arc::new(a_tilde(3).unwrap());
    let values = shape
        .objects()
        .iter()
        .map(|l| if *l == Label::pair(0, 1) { ChainComplex::concentrated(&f, 0, 1) } else { ChainComplex::zero(&f) })
        .collect();
    let y = Diagram::from_cover_map(&f, shape, values, BTreeMap::new()).unwrap();
    assert!(matches!(i_n_functor(3, &y), Err(Error::Membership(_))));
}

#[test]
fn straighten_literal_zero_members_verbatim() {
    let f = fp();
    let mut rng = seeded(5);
    for n in 3..=5 {
        let y = random_staircase_member(&f, n, &RandomConfig::small(), &mut rng).unwrap();
        let s = straighten(n, &y).unwrap();
        let backbone = derivator::random::staircase_backbone(n).unwrap();
        for (j, l) in backbone.iter().enumerate() {
            assert_eq!(s.quiver.vertices[j], *y.value_at(l).unwrap());
        }
        for j in 0..n - 1 {
            let (a, b) = (y.shape().index_of(&backbone[j]).unwrap(), y.shape().index_of(&backbone[j + 1]).unwrap());
            assert!(s.quiver.maps[j].equals(&y.map(a, b).unwrap()));
        }
    }
}

#[test]
fn straighten_general_members() {
    let f = fp();
    let mut rng = seeded(6);
    for n in 3..=5 {
        let shape = Arc::new(a_n(n).unwrap());
        for _ in 0..3 {
            let x = random_diagram(&f, &shape, &RandomConfig::small(), &mut rng).unwrap();
            let y = g_n(n, &x).unwrap();
            let s = straighten(n, &y).unwrap();
            assert!(s.quiver.relation_failures().unwrap().is_empty());
            assert_eq!(s.quiver.vertices.len(), n);
        }
    }
    let x = chain(&f, &[1, 1, 1], &[vec![1], vec![1]]);
    let s = straighten(3, &g_n(3, &x).unwrap()).unwrap();
    assert!(s.quiver.relation_failures().unwrap().is_empty());
}

#[test]
fn mesh_identity_chain() {
    let f = fp();
    let x = chain(&f, &[1, 1, 1], &[vec![1], vec![1]]);
    let r = mesh_build_and_check(3, &x, -4, 2).unwrap();
    assert!(r.pass, "{r}");
    let z = Diagram::zero(&f, Arc::new(a_n(3).unwrap()));
    assert!(mesh_build_and_check(3, &z, -4, 2).unwrap().pass);
    assert!(matches!(mesh_build_and_check(3, &x, -1, 2), Err(Error::WindowTooSmall(_))));
}

#[test]
fn dold_kan_examples() {
    let f = fp();
    for n in 3..=4 {
        let ones: Vec<usize> = vec![1; n];
        let ids: Vec<Vec<i64>> = vec![vec![1]; n - 1];
        let r = dold_kan_check(n, &chain(&f, &ones, &ids)).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.interior().iter().all(|s| s.acyclic), "{r}");
        let z = Diagram::zero(&f, Arc::new(a_n(n).unwrap()));
        assert!(dold_kan_check(n, &z).unwrap().pass);
    }
    let r = dold_kan_check(3, &chain(&f, &[0, 1, 1], &[vec![], vec![1]])).unwrap();
    assert!(r.pass, "{r}");
    assert_eq!(r.slots.iter().filter(|s| !s.acyclic).count(), 1, "{r}");
}
