//! Finite posets, monotone maps and the named shapes, checked against
//! brute-force enumeration.

use std::str::FromStr;
use std::sync::Arc;

use proptest::prelude::*;

use derivator::poset::connectors::{collapse_v, f_label, i_map, t_label, DoldKanIndex};
use derivator::poset::shapes::{a_n, a_tilde, b_tilde, interval, k_shape, square, ShapeKind};
use derivator::poset::{product, FinPoset, Label, MonotoneMap, SieveKind, SliceSide};

fn leq_count(p: &FinPoset) -> usize {
    (0..p.len()).flat_map(|i| (0..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p.leq(i, j)).count()
}

/// Strict chains by brute force over all subsets.
fn chains_brute(p: &FinPoset) -> usize {
    let n = p.len();
    (1u32..(1 << n))
        .filter(|mask| {
            let v: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            v.iter().all(|&a| v.iter().all(|&b| a == b || p.leq(a, b) || p.leq(b, a)))
        })
        .count()
}

fn labels(p: &FinPoset) -> Vec<String> {
    let mut v: Vec<String> = p.objects().iter().map(|l| l.to_string()).collect();
    v.sort();
    v
}

#[test]
fn intervals() {
    assert_eq!(interval(0).len(), 1);
    let i1 = interval(1);
    assert_eq!(i1.len(), 2);
    assert!(i1.leq(0, 1) && !i1.leq(1, 0));
    assert_eq!(leq_count(&interval(3)), 10);
}

#[test]
fn products() {
    let sq = product(&interval(1), &interval(1));
    assert_eq!(sq.len(), 4);
    assert_eq!(sq, square());
    let p = a_tilde(4).unwrap();
    let q = product(&p, &interval(0));
    assert_eq!(q.len(), p.len());
    assert_eq!(leq_count(&q), leq_count(&p));
    let r = product(&interval(2), &interval(1));
    assert_eq!(r.len(), 6);
    let maximal = r.chains().iter().filter(|c| c.dim() == 3).count();
    assert_eq!(maximal, 3, "lattice paths from (0,0) to (2,1)");
}

#[test]
fn chain_enumeration_matches_brute_force() {
    assert_eq!(interval(0).chains().len(), 1);
    assert_eq!(interval(1).chains().len(), 3);
    assert_eq!(square().chains().len(), 4 + 5 + 2);
    for p in [square(), a_tilde(4).unwrap(), k_shape(4, 2, 2).unwrap(), b_tilde(), interval(4)] {
        assert_eq!(p.chains().len(), chains_brute(&p), "{}", p.name());
    }
}

#[test]
fn slices() {
    let i2 = Arc::new(interval(2));
    let id = MonotoneMap::identity(i2.clone());
    assert_eq!(id.slice_positions(1, SliceSide::Under), vec![0, 1]);
    let i1 = Arc::new(interval(1));
    let c = MonotoneMap::new("const", i1.clone(), Arc::new(interval(0)), vec![0, 0]).unwrap();
    assert_eq!(c.slice_positions(0, SliceSide::Under).len(), 2);
    // Brute-force preimage of the down-set of (2,1) under i(4,1,4).
    let u = i_map(4, 1, 4).unwrap();
    let b = u.target().index_of(&Label::pair(2, 1)).unwrap();
    let brute: Vec<usize> = (0..u.source().len()).filter(|&a| u.target().leq(u.at(a), b)).collect();
    assert_eq!(u.slice_positions(b, SliceSide::Under), brute);
    assert_eq!(**u.source(), k_shape(4, 2, 1).unwrap());
}

#[test]
fn sieves() {
    let i1 = Arc::new(interval(1));
    let bottom = MonotoneMap::new("bottom", Arc::new(interval(0)), i1, vec![0]).unwrap();
    assert_eq!(bottom.sieve_kind(), SieveKind::Sieve);
    for n in 3..=5 {
        assert!(matches!(i_map(n, 1, 3).unwrap().sieve_kind(), SieveKind::Cosieve | SieveKind::Both));
    }
    let i2 = Arc::new(interval(2));
    let two = Arc::new(FinPoset::from_label_relation("02", vec![Label::int(0), Label::int(2)], |a, b| a == b).unwrap());
    let u = MonotoneMap::from_fn("02", two, i2, |l| Ok(l.clone())).unwrap();
    assert!(!u.is_full());
    assert_eq!(u.sieve_kind(), SieveKind::None);
}

#[test]
fn named_shapes() {
    assert_eq!(labels(&a_tilde(3).unwrap()), ["(0,0)", "(0,1)", "(1,0)", "(2,1)"]);
    assert_eq!(leq_count(&a_tilde(3).unwrap()), leq_count(&square()));
    assert_eq!(labels(&k_shape(4, 2, 5).unwrap()), ["(1,0,0)", "(1,1,0)", "(1,1,1)", "(2,1,0)", "(2,1,1)"]);
    let a42 = a_tilde(4).unwrap();
    assert_eq!(a42.len(), 6);
    assert!(a42.contains(&Label::pair(0, 1)) && a42.contains(&Label::pair(1, 2)));
    assert_eq!(a_n(4).unwrap().len(), 4);
    for s in ["A_3", "A_tilde(4,2)", "K(4,2,2)", "mesh(3,-4,2)", "A_tilde(4,2,-)", "B_tilde", "square", "interval(2)"] {
        let k = ShapeKind::from_str(s).unwrap();
        assert_eq!(k.to_string(), s);
        k.build().unwrap();
    }
    assert!(ShapeKind::from_str("K(4,3,1)").unwrap().build().is_err());
    assert!(ShapeKind::from_str("nonsense").is_err());
}

#[test]
fn connectors() {
    let u = i_map(4, 2, 5).unwrap();
    assert_eq!(u.apply(&Label::triple(1, 1, 0)).unwrap(), Label::int(2));
    assert_eq!(f_label(4, &Label::pair(0, 1)).unwrap(), Label::pair(1, 4));
    assert_eq!(t_label(&Label::pair(0, 1)).unwrap(), Label::pair(-1, 1));
    let idx = DoldKanIndex::new(4).unwrap();
    assert_eq!(idx.apply(&Label::pair(0, 0)).unwrap(), Label::int(3));
    assert_eq!(idx.apply(&Label::pair(0, 1)).unwrap(), Label::Pt);
    let v = collapse_v();
    assert_eq!(v.apply(&Label::sym("a")).unwrap(), v.apply(&Label::sym("c")).unwrap());
    // Every connector is monotone and lands in its stated target.
    for n in 3..=6 {
        for l in 1..=n - 2 {
            for m in 1..=5 {
                if let Ok(u) = i_map(n, l, m) {
                    let (s, t) = (u.source(), u.target());
                    for a in 0..s.len() {
                        for b in 0..s.len() {
                            if s.leq(a, b) {
                                assert!(t.leq(u.at(a), u.at(b)), "{} not monotone", u.name());
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn invalid_posets_are_rejected() {
    let l = vec![Label::int(0), Label::int(1)];
    assert!(FinPoset::from_relation("cycle", l.clone(), |_, _| true).is_err());
    assert!(FinPoset::from_covers("dup", vec![Label::int(0), Label::int(0)], &[]).is_err());
    let i1 = Arc::new(interval(1));
    assert!(MonotoneMap::new("flip", i1.clone(), i1, vec![1, 0]).is_err());
}

#[test]
fn label_round_trip() {
    for s in ["3", "(1,2)", "(1,0,2)", "(-1,4)", "a", "pt"] {
        assert_eq!(Label::from_str(s).unwrap().to_string(), s);
    }
}

proptest! {
    #[test]
    fn random_relations_are_partial_orders(bits in proptest::collection::vec(any::<bool>(), 28)) {
        // Random DAG on 8 vertices (edges i → j for i < j), closed transitively.
        let n = 8;
        let mut rel = vec![vec![false; n]; n];
        let mut k = 0;
        for i in 0..n {
            rel[i][i] = true;
            for j in i + 1..n {
                if k < bits.len() && bits[k] { rel[i][j] = true; }
                k += 1;
            }
        }
        for m in 0..n { for i in 0..n { for j in 0..n { if rel[i][m] && rel[m][j] { rel[i][j] = true; } } } }
        let labels = (0..n as i64).map(Label::int).collect();
        let p = FinPoset::from_relation("random", labels, |i, j| rel[i][j]).unwrap();
        prop_assert_eq!(p.chains().len(), chains_brute(&p));
        let ext = p.linear_extension();
        for (x, &a) in ext.iter().enumerate() {
            for &b in &ext[x + 1..] {
                prop_assert!(!p.lt(b, a));
            }
        }
        let op = p.opposite();
        for i in 0..n { for j in 0..n { prop_assert_eq!(p.leq(i, j), op.leq(j, i)); } }
        for &(a, b) in p.covers() {
            prop_assert!(p.lt(a, b));
            prop_assert!(!(0..n).any(|m| p.lt(a, m) && p.lt(m, b)));
        }
    }
}
