//! The JSON document formats read and written by the command-line tool.
//!
//! A diagram document:
//!
//! ```json
//! {
//!   "field": 32003,
//!   "shape": "A_3",
//!   "complexes": { "1": { "range": [0, 0], "dims": [1], "d": {} } },
//!   "arrows": [ { "source": "1", "target": "2", "maps": { "0": [1] } } ]
//! }
//! ```
//!
//! * `field` is 0 (rationals) or a prime;
//! * `shape` is a builtin name or `{ "name", "objects", "covers" }`;
//! * `complexes` maps labels to `range: [lo, hi]`, `dims` (one per degree of
//!   the range) and `d`, keyed by degree `n`, the row-major matrix of
//!   `d_n : C_n → C_{n−1}`; omitted objects are zero;
//! * `arrows` lists covering arrows with their components keyed by degree
//!   (row-major, rows indexed by the target); omitted arrows are zero.
//!
//! Entries are integers or `"a/b"` strings.  Emission is deterministic, so
//! `emit ∘ parse ∘ emit = emit` byte for byte.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::diagram::squares::SquareRef;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::homalg::{ChainComplex, ChainMap};
use crate::matrix::Matrix;
use crate::membership::{NamedSpec, SubderivatorSpec};
use crate::poset::connectors::{cofiber_map, collapse_v, fiber_map, i_map};
use crate::poset::shapes::ShapeKind;
use crate::poset::{FinPoset, Label, MonotoneMap};

/// A shape: builtin name or explicit poset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeDoc {
    /// Builtin name such as `"A_tilde(4,2)"`.
    Named(String),
    /// Objects and covering relation.
    Explicit {
        /// Display name.
        #[serde(default)]
        name: Option<String>,
        /// Object labels.
        objects: Vec<String>,
        /// Covering pairs `[a, b]` with `a < b`.
        covers: Vec<[String; 2]>,
    },
}

/// A bounded chain complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    /// `[lo, hi]`.
    pub range: [i64; 2],
    /// Dimensions for degrees `lo..=hi`.
    pub dims: Vec<usize>,
    /// Differentials keyed by source degree.
    #[serde(default)]
    pub d: BTreeMap<String, Vec<Value>>,
}

/// A covering arrow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    /// Source label.
    pub source: String,
    /// Target label.
    pub target: String,
    /// Components keyed by degree.
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Value>>,
}

/// A diagram document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    /// Characteristic.
    pub field: u64,
    /// Shape.
    pub shape: ShapeDoc,
    /// Values by label.
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexDoc>,
    /// Covering arrows.
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
}

/// A subderivator spec: builtin name or explicit conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecDoc {
    /// `"A(4,2)"`, `"K(4,2,3)"`, `"M3-ex(-4,2)"`.
    Named(String),
    /// Explicit conditions.
    Explicit {
        /// Name.
        #[serde(default)]
        name: Option<String>,
        /// Shape.
        shape: ShapeDoc,
        /// Objects required to vanish.
        #[serde(default)]
        vanishing: Vec<String>,
        /// Arrows required to be quasi-isomorphisms.
        #[serde(default)]
        iso_arrows: Vec<[String; 2]>,
        /// Squares `[00, 10, 01, 11]` required to be bicartesian.
        #[serde(default)]
        bicartesian: Vec<[String; 4]>,
    },
}

/// A monotone map: builtin connector name or explicit assignment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapDoc {
    /// `"i(4,1,4)"`, `"collapse_v"`, `"tcof"`, `"tfib"`.
    Named(String),
    /// Explicit map.
    Explicit {
        /// Name.
        #[serde(default)]
        name: Option<String>,
        /// Source shape.
        source: ShapeDoc,
        /// Target shape.
        target: ShapeDoc,
        /// Image of every source label.
        assignment: BTreeMap<String, String>,
    },
}

fn label(s: &str) -> Result<Label> {
    Label::from_str(s)
}

/// Builds a shape from its document.
pub fn shape_from_doc(doc: &ShapeDoc) -> Result<Arc<FinPoset>> {
    match doc {
        ShapeDoc::Named(s) => ShapeKind::from_str(s)?.build_arc(),
        ShapeDoc::Explicit { name, objects, covers } => {
            let labels = objects.iter().map(|s| label(s)).collect::<Result<Vec<_>>>()?;
            let arrows = covers.iter().map(|[a, b]| Ok((label(a)?, label(b)?))).collect::<Result<Vec<_>>>()?;
            Ok(Arc::new(FinPoset::from_covers(name.as_deref().unwrap_or("custom"), labels, &arrows)?))
        }
    }
}

/// The document of a shape: its builtin name when the name rebuilds the
/// same poset, otherwise the explicit form.
pub fn shape_to_doc(p: &FinPoset) -> ShapeDoc {
    if let Ok(kind) = ShapeKind::from_str(p.name()) {
        if kind.build().map(|q| q == *p).unwrap_or(false) {
            return ShapeDoc::Named(kind.to_string());
        }
    }
    ShapeDoc::Explicit {
        name: Some(p.name().to_string()),
        objects: p.objects().iter().map(|l| l.to_string()).collect(),
        covers: p.covers().iter().map(|&(a, b)| [p.label(a).to_string(), p.label(b).to_string()]).collect(),
    }
}

fn parse_matrix<F: Field>(field: &F, rows: usize, cols: usize, entries: &[Value], what: &str) -> Result<Matrix<F>> {
    if entries.len() != rows * cols {
        return Err(Error::Schema(format!("{what}: expected {rows}×{cols} = {} entries, got {}", rows * cols, entries.len())));
    }
    let elems = entries.iter().map(|v| field.from_json(v)).collect::<Result<Vec<_>>>()?;
    let mut it = elems.into_iter();
    Ok(Matrix::from_fn(field, rows, cols, |_, _| it.next().expect("length checked")))
}

fn emit_matrix<F: Field>(m: &Matrix<F>) -> Vec<Value> {
    m.entries().iter().map(|e| m.field().to_json(e)).collect()
}

fn degree_key(s: &str, what: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Schema(format!("{what}: degree key \"{s}\" is not an integer")))
}

/// Builds a complex from its document.
pub fn complex_from_doc<F: Field>(field: &F, doc: &ComplexDoc, what: &str) -> Result<ChainComplex<F>> {
    let [lo, hi] = doc.range;
    if hi < lo || doc.dims.len() as i64 != hi - lo + 1 {
        return Err(Error::Schema(format!("{what}: range [{lo},{hi}] does not match {} dims", doc.dims.len())));
    }
    let dim = |n: i64| if (lo..=hi).contains(&n) { doc.dims[(n - lo) as usize] } else { 0 };
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let key = doc.d.iter().find(|(k, _)| degree_key(k, what).ok() == Some(n));
        diffs.push(match key {
            Some((_, entries)) => parse_matrix(field, dim(n - 1), dim(n), entries, &format!("{what} d_{n}"))?,
            None => Matrix::zeros(field, dim(n - 1), dim(n)),
        });
    }
    for k in doc.d.keys() {
        let n = degree_key(k, what)?;
        if n <= lo || n > hi {
            if doc.d[k].is_empty() {
                continue;
            }
            return Err(Error::Schema(format!("{what}: differential d_{n} lies outside the range")));
        }
    }
    ChainComplex::new(field, lo, doc.dims.clone(), diffs)
}

/// The document of a complex (zero differentials omitted).
pub fn complex_to_doc<F: Field>(c: &ChainComplex<F>) -> ComplexDoc {
    let range = [c.lo(), c.hi()];
    let dims = c.degrees().map(|n| c.dim(n)).collect();
    let mut d = BTreeMap::new();
    for n in c.lo() + 1..=c.hi() {
        let m = c.d(n);
        if !m.is_zero() {
            d.insert(n.to_string(), emit_matrix(&m));
        }
    }
    ComplexDoc { range, dims, d }
}

/// The components of a chain map keyed by degree (zero components
/// omitted), in the format of [`ArrowDoc::maps`].
pub fn chain_map_to_doc<F: Field>(f: &ChainMap<F>) -> BTreeMap<String, Vec<Value>> {
    let mut maps = BTreeMap::new();
    for n in f.source().degrees() {
        let m = f.comp(n);
        if !m.is_zero() {
            maps.insert(n.to_string(), emit_matrix(&m));
        }
    }
    maps
}

impl DiagramDoc {
    /// Parses a document from JSON text.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON text.
    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// The field of the document.
    pub fn field_spec(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.field)
    }

    /// Builds the diagram over `field`, which must match the document.
    pub fn to_diagram<F: Field>(&self, field: &F) -> Result<Diagram<F>> {
        if field.spec() != self.field_spec()? {
            return Err(Error::FieldMismatch(format!(
                "document is over characteristic {}, requested {}",
                self.field,
                field.spec().characteristic()
            )));
        }
        let shape = shape_from_doc(&self.shape)?;
        let mut values = vec![ChainComplex::zero(field); shape.len()];
        for (k, doc) in &self.complexes {
            let i = shape.index_of(&label(k)?)?;
            values[i] = complex_from_doc(field, doc, &format!("complex at {k}"))?;
        }
        let mut arrows = BTreeMap::new();
        for a in &self.arrows {
            let (s, t) = (shape.index_of(&label(&a.source)?)?, shape.index_of(&label(&a.target)?)?);
            let what = format!("arrow {} → {}", a.source, a.target);
            let (src, tgt) = (&values[s], &values[t]);
            let mut comps = BTreeMap::new();
            for (k, entries) in &a.maps {
                let n = degree_key(k, &what)?;
                if src.dim(n) == 0 || tgt.dim(n) == 0 {
                    if entries.is_empty() {
                        continue;
                    }
                    return Err(Error::Schema(format!("{what}: component in degree {n} between zero spaces")));
                }
                comps.insert(n, parse_matrix(field, tgt.dim(n), src.dim(n), entries, &format!("{what} degree {n}"))?);
            }
            if arrows.insert((s, t), ChainMap::new(src.clone(), tgt.clone(), comps)?).is_some() {
                return Err(Error::Schema(format!("{what} listed twice")));
            }
        }
        Diagram::from_cover_map(field, shape, values, arrows)
    }

    /// The document of a diagram (zero values and zero arrows omitted).
    pub fn from_diagram<F: Field>(x: &Diagram<F>) -> Self {
        let shape = x.shape();
        let mut complexes = BTreeMap::new();
        for (i, l) in shape.objects().iter().enumerate() {
            if !x.value(i).is_zero_complex() {
                complexes.insert(l.to_string(), complex_to_doc(x.value(i)));
            }
        }
        let mut arrows = Vec::new();
        for (k, &(a, b)) in shape.covers().iter().enumerate() {
            let maps = chain_map_to_doc(&x.arrows()[k]);
            if !maps.is_empty() {
                arrows.push(ArrowDoc { source: shape.label(a).to_string(), target: shape.label(b).to_string(), maps });
            }
        }
        Self { field: x.field().spec().characteristic(), shape: shape_to_doc(shape), complexes, arrows }
    }
}

/// Builds a spec from its document.
pub fn spec_from_doc(doc: &SpecDoc) -> Result<SubderivatorSpec> {
    match doc {
        SpecDoc::Named(s) => NamedSpec::from_str(s)?.build(),
        SpecDoc::Explicit { name, shape, vanishing, iso_arrows, bicartesian } => {
            let shape = shape_from_doc(shape)?;
            let vanishing = vanishing.iter().map(|s| label(s)).collect::<Result<Vec<_>>>()?;
            let iso = iso_arrows.iter().map(|[a, b]| Ok((label(a)?, label(b)?))).collect::<Result<Vec<_>>>()?;
            let squares = bicartesian
                .iter()
                .map(|[a, b, c, d]| Ok(SquareRef::new(label(a)?, label(b)?, label(c)?, label(d)?)))
                .collect::<Result<Vec<_>>>()?;
            SubderivatorSpec::new(name.as_deref().unwrap_or("custom"), shape, vanishing, iso, squares)
        }
    }
}

/// The explicit document of a spec.
pub fn spec_to_doc(spec: &SubderivatorSpec) -> SpecDoc {
    SpecDoc::Explicit {
        name: Some(spec.name().to_string()),
        shape: shape_to_doc(spec.shape()),
        vanishing: spec.vanishing().iter().map(|l| l.to_string()).collect(),
        iso_arrows: spec.iso_arrows().iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        bicartesian: spec.bicartesian().iter().map(|q| q.corners.clone().map(|l| l.to_string())).collect(),
    }
}

/// Builds a monotone map from its document.
pub fn map_from_doc(doc: &MapDoc) -> Result<MonotoneMap> {
    match doc {
        MapDoc::Named(s) => named_map(s),
        MapDoc::Explicit { name, source, target, assignment } => {
            let (src, tgt) = (shape_from_doc(source)?, shape_from_doc(target)?);
            let table = assignment.iter().map(|(a, b)| Ok((label(a)?, label(b)?))).collect::<Result<BTreeMap<_, _>>>()?;
            MonotoneMap::from_fn(name.as_deref().unwrap_or("custom"), src, tgt, |l| {
                table.get(l).cloned().ok_or_else(|| Error::Schema(format!("map assigns nothing to {l}")))
            })
        }
    }
}

/// The builtin connectors by name.
pub fn named_map(s: &str) -> Result<MonotoneMap> {
    let s = s.trim();
    match s {
        "collapse_v" => return Ok(collapse_v()),
        "tcof" => return Ok(cofiber_map()),
        "tfib" => return Ok(fiber_map()),
        "ident(3)" => return crate::pipeline::identification_k314(),
        _ => {}
    }
    if let Some(inner) = s.strip_prefix("i(").and_then(|r| r.strip_suffix(')')) {
        let v: Vec<usize> = inner
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| Error::Schema(format!("malformed connector \"{s}\""))))
            .collect::<Result<_>>()?;
        if let [n, l, m] = v[..] {
            return i_map(n, l, m);
        }
    }
    Err(Error::Schema(format!("unknown map \"{s}\" (expected i(n,l,m), collapse_v, tcof, tfib or ident(3))")))
}
