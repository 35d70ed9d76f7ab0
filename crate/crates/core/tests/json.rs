//! JSON documents: exact round trips and located errors.

use std::sync::Arc;

use derivator::diagram::Diagram;
use derivator::field::{Field, PrimeField, Rationals};
use derivator::json::{map_from_doc, shape_from_doc, shape_to_doc, spec_from_doc, spec_to_doc, DiagramDoc, MapDoc, SpecDoc};
use derivator::membership::SubderivatorSpec;
use derivator::poset::shapes::{a_n, a_tilde, a_tilde_4_minus, b_tilde, k_shape, mesh_window, square};
use derivator::poset::{FinPoset, Label};
use derivator::random::{random_diagram, seeded, RandomConfig};
use derivator::Error;

fn round_trip<F: Field>(field: &F, x: &Diagram<F>) {
    let doc = DiagramDoc::from_diagram(x);
    let text = doc.emit();
    let parsed = DiagramDoc::parse(&text).unwrap();
    assert_eq!(parsed, doc);
    assert_eq!(parsed.emit(), text, "emit ∘ parse ∘ emit is byte-identical");
    let back = parsed.to_diagram(field).unwrap();
    assert!(back == x.with_shape(back.shape().clone()).unwrap(), "parse ∘ emit is the identity on diagrams");
}

#[test]
fn random_diagrams_round_trip() {
    let mut rng = seeded(31);
    let shapes: Vec<FinPoset> =
        vec![square(), a_n(4).unwrap(), a_tilde(4).unwrap(), k_shape(4, 2, 5).unwrap(), b_tilde(), a_tilde_4_minus()];
    for shape in shapes {
        let shape = Arc::new(shape);
        for _ in 0..3 {
            let f = PrimeField::default_prime();
            round_trip(&f, &random_diagram(&f, &shape, &RandomConfig::default(), &mut rng).unwrap());
            let q = Rationals;
            round_trip(&q, &random_diagram(&q, &shape, &RandomConfig::small(), &mut rng).unwrap());
        }
    }
}

#[test]
fn shapes_round_trip() {
    for p in [square(), a_tilde(5).unwrap(), k_shape(5, 2, 3).unwrap(), mesh_window(3, -4, 2).unwrap(), b_tilde()] {
        let doc = shape_to_doc(&p);
        assert_eq!(*shape_from_doc(&doc).unwrap(), p);
    }
    let explicit = r#"{ "name": "vee", "objects": ["a", "b", "c"], "covers": [["a", "b"], ["a", "c"]] }"#;
    let doc: derivator::json::ShapeDoc = serde_json::from_str(explicit).unwrap();
    let p = shape_from_doc(&doc).unwrap();
    assert_eq!(p.len(), 3);
    assert!(p.leq_labels(&Label::sym("a"), &Label::sym("c")).unwrap());
}

#[test]
fn specs_and_maps() {
    for name in ["A(4,2)", "K(4,2,3)", "M3-ex(-4,2)"] {
        let spec = spec_from_doc(&SpecDoc::Named(name.into())).unwrap();
        let again = spec_from_doc(&spec_to_doc(&spec)).unwrap();
        assert_eq!(again.vanishing(), spec.vanishing());
        assert_eq!(again.iso_arrows(), spec.iso_arrows());
        assert_eq!(again.bicartesian().len(), spec.bicartesian().len());
        assert_eq!(**again.shape(), **SubderivatorSpec::named(name).unwrap().shape());
    }
    let u = map_from_doc(&MapDoc::Named("i(4,2,5)".into())).unwrap();
    assert_eq!(u.apply(&Label::triple(1, 1, 0)).unwrap(), Label::int(2));
    for s in ["collapse_v", "tcof", "tfib", "ident(3)"] {
        map_from_doc(&MapDoc::Named(s.into())).unwrap();
    }
    assert!(map_from_doc(&MapDoc::Named("i(4,9,9)".into())).is_err());
    assert!(map_from_doc(&MapDoc::Named("nope".into())).is_err());
    let explicit = r#"{ "source": "interval(1)", "target": "interval(0)", "assignment": { "0": "0", "1": "0" } }"#;
    let doc: MapDoc = serde_json::from_str(explicit).unwrap();
    assert_eq!(map_from_doc(&doc).unwrap().assignment(), [0, 0]);
}

fn schema_error(text: &str) -> String {
    let f = PrimeField::default_prime();
    match DiagramDoc::parse(text).and_then(|d| d.to_diagram(&f)) {
        Err(Error::Schema(m)) => m,
        other => panic!("expected a schema error, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn errors_are_located() {
    let m = schema_error("{\n  \"field\": 32003,\n  \"shape\": \"A_3\",\n  \"complexes\": {\n}");
    assert!(m.contains("line 5"), "{m}");
    let m = schema_error(r#"{ "field": 32003, "shape": "A_3", "bogus": 1 }"#);
    assert!(m.contains("bogus"), "{m}");
    let m = schema_error(
        r#"{ "field": 32003, "shape": "A_3",
             "complexes": { "1": { "range": [0, 0], "dims": [1] }, "2": { "range": [0, 0], "dims": [1] } },
             "arrows": [ { "source": "1", "target": "2", "maps": { "0": [1, 2] } } ] }"#,
    );
    assert!(m.contains("1 → 2") && m.contains("entries"), "{m}");
    let m = schema_error(
        r#"{ "field": 32003, "shape": "A_3", "complexes": { "1": { "range": [0, 1], "dims": [1, 1], "d": { "x": [1] } } } }"#,
    );
    assert!(m.contains("degree key"), "{m}");
}

#[test]
fn semantic_errors() {
    let f = PrimeField::default_prime();
    // d∘d ≠ 0.
    let doc = DiagramDoc::parse(
        r#"{ "field": 32003, "shape": "A_3", "complexes": { "1": { "range": [0, 2], "dims": [1, 1, 1], "d": { "1": [1], "2": [1] } } } }"#,
    )
    .unwrap();
    assert!(matches!(doc.to_diagram(&f), Err(Error::InvalidComplex(_))));
    // Not a covering arrow.
    let doc = DiagramDoc::parse(
        r#"{ "field": 32003, "shape": "A_3",
             "complexes": { "1": { "range": [0, 0], "dims": [1] }, "3": { "range": [0, 0], "dims": [1] } },
             "arrows": [ { "source": "1", "target": "3", "maps": { "0": [1] } } ] }"#,
    )
    .unwrap();
    assert!(doc.to_diagram(&f).is_err());
    // Unknown label and field mismatch.
    let doc = DiagramDoc::parse(r#"{ "field": 32003, "shape": "A_3", "complexes": { "7": { "range": [0, 0], "dims": [1] } } }"#).unwrap();
    assert!(doc.to_diagram(&f).is_err());
    let doc = DiagramDoc::parse(r#"{ "field": 0, "shape": "A_3" }"#).unwrap();
    assert!(matches!(doc.to_diagram(&f), Err(Error::FieldMismatch(_))));
    assert!(doc.to_diagram(&Rationals).is_ok());
    let doc = DiagramDoc::parse(r#"{ "field": 6, "shape": "A_3" }"#).unwrap();
    assert!(doc.field_spec().is_err());
}
