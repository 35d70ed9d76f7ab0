//! Strictly commutative poset-indexed diagrams of chain complexes.
//!
//! A [`Diagram`] stores one complex per object and one chain map per
//! covering pair; every other structure map is the (path-independent)
//! composite of covering maps.  Strict commutativity is verified by a
//! dynamic program over a linear extension, which also fills a cache of
//! all structure maps.
//!
//! Submodules:
//! * [`bar`]: homotopy (co)limits by the normalized bar / cobar construction
//!   and the literal pointwise Kan extension formula built from them;
//! * [`model`]: cellular projective models and the fast Kan extension engine;
//! * [`squares`]: total (co)fibers and bicartesian squares.

pub mod bar;
pub mod model;
pub mod squares;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::homalg::{cone, direct_sum, ChainComplex, ChainMap, Homology};
use crate::matrix::Matrix;
use crate::poset::shapes::interval;
use crate::poset::{product, product_label, FinPoset, Label, MonotoneMap};

pub use model::{kan_extend, KanSide};

/// Degreewise components of a structure map.
pub type Components<F> = BTreeMap<i64, Matrix<F>>;

/// A strict diagram `X : A → Ch(k)`.
#[derive(Clone)]
pub struct Diagram<F: Field> {
    field: F,
    shape: Arc<FinPoset>,
    values: Vec<ChainComplex<F>>,
    /// One map per entry of `shape.covers()`.
    arrows: Vec<ChainMap<F>>,
    /// `all_maps[a * n + b]` for `a ≤ b`.
    all_maps: OnceLock<Vec<Option<Components<F>>>>,
}

impl<F: Field> fmt::Debug for Diagram<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram on {} [", self.shape.name())?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {:?}", self.shape.label(i), v.dim_table())?;
        }
        write!(f, "]")
    }
}

impl<F: Field> PartialEq for Diagram<F> {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.values == other.values
            && self.arrows.iter().zip(&other.arrows).all(|(a, b)| a.equals(b))
    }
}

impl<F: Field> Diagram<F> {
    /// Builds and validates a diagram: arrows are given per covering pair
    /// (in the order of `shape.covers()`), must connect the right values and
    /// commute strictly.
    pub fn new(field: &F, shape: Arc<FinPoset>, values: Vec<ChainComplex<F>>, arrows: Vec<ChainMap<F>>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} objects of {}",
                values.len(),
                shape.len(),
                shape.name()
            )));
        }
        if arrows.len() != shape.covers().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} arrows for {} covering pairs of {}",
                arrows.len(),
                shape.covers().len(),
                shape.name()
            )));
        }
        for v in &values {
            if v.field() != field {
                return Err(Error::FieldMismatch("diagram values over different fields".into()));
            }
        }
        for (k, &(a, b)) in shape.covers().iter().enumerate() {
            if arrows[k].source() != &values[a] || arrows[k].target() != &values[b] {
                return Err(Error::InvalidChainMap(format!(
                    "arrow {} → {} does not connect the values at its ends",
                    shape.label(a),
                    shape.label(b)
                )));
            }
        }
        let d = Self::new_unchecked(field, shape, values, arrows);
        d.compute_all_maps()?;
        Ok(d)
    }

    /// Builds from arrows keyed by covering pairs of labels; missing arrows
    /// are zero maps.
    pub fn from_cover_map(
        field: &F,
        shape: Arc<FinPoset>,
        values: Vec<ChainComplex<F>>,
        mut arrows: BTreeMap<(usize, usize), ChainMap<F>>,
    ) -> Result<Self> {
        for key in arrows.keys() {
            if !shape.covers().contains(key) {
                return Err(Error::ShapeMismatch(format!(
                    "{} → {} is not a covering pair of {}",
                    shape.label(key.0),
                    shape.label(key.1),
                    shape.name()
                )));
            }
        }
        let list = shape
            .covers()
            .iter()
            .map(|&(a, b)| arrows.remove(&(a, b)).unwrap_or_else(|| ChainMap::zero(&values[a], &values[b])))
            .collect();
        Self::new(field, shape, values, list)
    }

    /// Builds without validation; callers guarantee strictness.
    pub(crate) fn new_unchecked(field: &F, shape: Arc<FinPoset>, values: Vec<ChainComplex<F>>, arrows: Vec<ChainMap<F>>) -> Self {
        Self { field: field.clone(), shape, values, arrows, all_maps: OnceLock::new() }
    }

    /// The zero diagram.
    pub fn zero(field: &F, shape: Arc<FinPoset>) -> Self {
        let z = ChainComplex::zero(field);
        let values = vec![z.clone(); shape.len()];
        let arrows = shape.covers().iter().map(|_| ChainMap::zero(&z, &z)).collect();
        Self::new_unchecked(field, shape, values, arrows)
    }

    /// The constant diagram with identity structure maps.
    pub fn constant(field: &F, shape: Arc<FinPoset>, c: &ChainComplex<F>) -> Self {
        let values = vec![c.clone(); shape.len()];
        let arrows = shape.covers().iter().map(|_| ChainMap::identity(c)).collect();
        Self::new_unchecked(field, shape, values, arrows)
    }

    /// Re-runs all audits: arrow endpoints, chain-map property and strict
    /// commutativity.
    pub fn validate(&self) -> Result<()> {
        for a in &self.arrows {
            a.check_commutes()?;
        }
        let fresh = Self::new(&self.field, self.shape.clone(), self.values.clone(), self.arrows.clone())?;
        drop(fresh);
        Ok(())
    }

    /// The field.
    pub fn field(&self) -> &F {
        &self.field
    }

    /// The shape.
    pub fn shape(&self) -> &Arc<FinPoset> {
        &self.shape
    }

    /// Value at position `i`.
    pub fn value(&self, i: usize) -> &ChainComplex<F> {
        &self.values[i]
    }

    /// All values.
    pub fn values(&self) -> &[ChainComplex<F>] {
        &self.values
    }

    /// Value at a label.
    pub fn value_at(&self, l: &Label) -> Result<&ChainComplex<F>> {
        Ok(&self.values[self.shape.index_of(l)?])
    }

    /// Arrows aligned with `shape().covers()`.
    pub fn arrows(&self) -> &[ChainMap<F>] {
        &self.arrows
    }

    /// Arrow along covering pair `(a, b)`.
    pub fn cover_arrow(&self, a: usize, b: usize) -> Option<&ChainMap<F>> {
        self.shape.covers().iter().position(|&c| c == (a, b)).map(|k| &self.arrows[k])
    }

    fn compute_all_maps(&self) -> Result<&Vec<Option<Components<F>>>> {
        if let Some(m) = self.all_maps.get() {
            return Ok(m);
        }
        let n = self.shape.len();
        let mut maps: Vec<Option<Components<F>>> = vec![None; n * n];
        let covers_into: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|b| {
                self.shape
                    .covers()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.1 == b)
                    .map(|(k, c)| (k, c.0))
                    .collect()
            })
            .collect();
        for b in self.shape.linear_extension() {
            maps[b * n + b] = Some(ChainMap::identity(&self.values[b]).components().clone());
            for &(k, c) in &covers_into[b] {
                let arrow = self.arrows[k].components();
                for a in 0..n {
                    if !self.shape.leq(a, c) {
                        continue;
                    }
                    let first = maps[a * n + c].as_ref().expect("processed in linear-extension order");
                    let comp = compose_components(arrow, first);
                    match &maps[a * n + b] {
                        None => maps[a * n + b] = Some(comp),
                        Some(existing) => {
                            if !components_equal(&self.field, existing, &comp, &self.values[a], &self.values[b]) {
                                return Err(Error::NotStrict(format!(
                                    "two composites {} → {} disagree",
                                    self.shape.label(a),
                                    self.shape.label(b)
                                )));
                            }
                        }
                    }
                }
            }
        }
        let _ = self.all_maps.set(maps);
        Ok(self.all_maps.get().unwrap())
    }

    /// Components of the structure map `X(a) → X(b)` (`a ≤ b`).
    pub fn map_components(&self, a: usize, b: usize) -> Result<&Components<F>> {
        if !self.shape.leq(a, b) {
            return Err(Error::InvalidMap(format!("{} ≰ {}", self.shape.label(a), self.shape.label(b))));
        }
        let n = self.shape.len();
        Ok(self.compute_all_maps()?[a * n + b].as_ref().expect("all comparable pairs are filled"))
    }

    /// The structure map `X(a) → X(b)` (`a ≤ b`).
    pub fn map(&self, a: usize, b: usize) -> Result<ChainMap<F>> {
        let comps = self.map_components(a, b)?.clone();
        Ok(ChainMap::new_unchecked(self.values[a].clone(), self.values[b].clone(), comps))
    }

    /// Component matrix of `X(a) → X(b)` in degree `n`.
    pub fn map_matrix(&self, a: usize, b: usize, n: i64) -> Result<Matrix<F>> {
        let comps = self.map_components(a, b)?;
        Ok(comps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.field, self.values[b].dim(n), self.values[a].dim(n))))
    }

    /// Homology table at every object.
    pub fn homology_tables(&self) -> Vec<(Label, Homology)> {
        self.values.iter().enumerate().map(|(i, v)| (self.shape.label(i).clone(), v.homology())).collect()
    }

    /// Total dimension of all values.
    pub fn total_dim(&self) -> usize {
        self.values.iter().map(|v| v.total_dim()).sum()
    }

    /// The same data on an isomorphic copy of the shape (same labels and
    /// order, possibly a different name).
    pub fn with_shape(&self, shape: Arc<FinPoset>) -> Result<Self> {
        if *shape != *self.shape {
            return Err(Error::ShapeMismatch(format!("{} is not {}", shape.name(), self.shape.name())));
        }
        Ok(Self::new_unchecked(&self.field, shape, self.values.clone(), self.arrows.clone()))
    }

    /// Transports the diagram along a bijective relabelling `u : A → B`
    /// that is an isomorphism of posets.
    pub fn relabel(&self, u: &MonotoneMap) -> Result<Self> {
        if *u.source().as_ref() != *self.shape.as_ref() {
            return Err(Error::ShapeMismatch("relabel along a map from a different shape".into()));
        }
        let n = self.shape.len();
        if u.target().len() != n || !u.is_injective() || !u.is_full() {
            return Err(Error::InvalidMap(format!("{} is not an isomorphism of posets", u.name())));
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[u.at(a)] = a;
        }
        let inv = MonotoneMap::new("inverse", u.target().clone(), u.source().clone(), inverse)?;
        restrict(&inv, self)
    }
}

fn compose_components<F: Field>(second: &Components<F>, first: &Components<F>) -> Components<F> {
    first.iter().filter_map(|(n, m)| second.get(n).map(|g| (*n, g.mul(m)))).collect()
}

fn components_equal<F: Field>(
    field: &F,
    x: &Components<F>,
    y: &Components<F>,
    src: &ChainComplex<F>,
    tgt: &ChainComplex<F>,
) -> bool {
    let lo = src.lo().min(tgt.lo());
    let hi = src.hi().max(tgt.hi());
    (lo..=hi).all(|n| {
        let z = || Matrix::zeros(field, tgt.dim(n), src.dim(n));
        let a = x.get(&n).cloned().unwrap_or_else(z);
        let b = y.get(&n).cloned().unwrap_or_else(z);
        a == b
    })
}

/// Restriction `u* X`: `(u*X)(a) = X(u a)`.
pub fn restrict<F: Field>(u: &MonotoneMap, x: &Diagram<F>) -> Result<Diagram<F>> {
    if **u.target() != *x.shape {
        return Err(Error::ShapeMismatch(format!(
            "restriction along {} needs a diagram on {}, got {}",
            u.name(),
            u.target().name(),
            x.shape.name()
        )));
    }
    let src = u.source().clone();
    let values: Vec<ChainComplex<F>> = (0..src.len()).map(|a| x.values[u.at(a)].clone()).collect();
    let mut arrows = Vec::with_capacity(src.covers().len());
    for &(a, b) in src.covers() {
        arrows.push(x.map(u.at(a), u.at(b))?);
    }
    Ok(Diagram::new_unchecked(&x.field, src, values, arrows))
}

/// Evaluation at one object.
pub fn evaluate<F: Field>(x: &Diagram<F>, l: &Label) -> Result<ChainComplex<F>> {
    x.value_at(l).cloned()
}

/// The pointwise dual `DX` on the opposite shape: `(DX)(a) = X(a)^*` and
/// `DX(b → a) = X(a → b)^*`.
pub fn dual<F: Field>(x: &Diagram<F>) -> Diagram<F> {
    let op = Arc::new(x.shape.opposite());
    let values: Vec<ChainComplex<F>> = x.values.iter().map(|v| v.dual()).collect();
    let arrows = op
        .covers()
        .iter()
        .map(|&(b, a)| x.cover_arrow(a, b).expect("covers of the opposite are reversed covers").dual())
        .collect();
    Diagram::new_unchecked(&x.field, op, values, arrows)
}

/// Degreewise direct sum of diagrams over one shape.
pub fn diagram_sum<F: Field>(parts: &[&Diagram<F>]) -> Result<Diagram<F>> {
    let first = parts.first().ok_or_else(|| Error::ShapeMismatch("empty diagram sum".into()))?;
    let field = first.field.clone();
    let shape = first.shape.clone();
    for p in parts {
        if *p.shape != *shape {
            return Err(Error::ShapeMismatch("summing diagrams over different shapes".into()));
        }
    }
    let mut values = Vec::new();
    for a in 0..shape.len() {
        let cs: Vec<ChainComplex<F>> = parts.iter().map(|p| p.values[a].clone()).collect();
        values.push(direct_sum(&field, &cs)?.sum);
    }
    let mut arrows = Vec::new();
    for (k, &(a, b)) in shape.covers().iter().enumerate() {
        let mut comps = BTreeMap::new();
        let lo = values[a].lo().min(values[b].lo());
        for n in lo..=values[a].hi().max(values[b].hi()) {
            let blocks: Vec<Matrix<F>> = parts.iter().map(|p| p.arrows[k].comp(n)).collect();
            let refs: Vec<&Matrix<F>> = blocks.iter().collect();
            comps.insert(n, Matrix::block_diag(&field, &refs));
        }
        arrows.push(ChainMap::new_unchecked(values[a].clone(), values[b].clone(), comps));
    }
    Ok(Diagram::new_unchecked(&field, shape, values, arrows))
}

/// A natural transformation between diagrams of the same shape.
#[derive(Clone)]
pub struct DiagramMap<F: Field> {
    source: Diagram<F>,
    target: Diagram<F>,
    comps: Vec<ChainMap<F>>,
}

impl<F: Field> fmt::Debug for DiagramMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiagramMap on {}", self.source.shape.name())
    }
}

impl<F: Field> DiagramMap<F> {
    /// Builds and validates a map: component endpoints and naturality on
    /// every covering arrow.
    pub fn new(source: Diagram<F>, target: Diagram<F>, comps: Vec<ChainMap<F>>) -> Result<Self> {
        if *source.shape != *target.shape {
            return Err(Error::ShapeMismatch("diagram map between different shapes".into()));
        }
        if comps.len() != source.shape.len() {
            return Err(Error::ShapeMismatch("one component per object required".into()));
        }
        for (a, c) in comps.iter().enumerate() {
            if c.source() != source.value(a) || c.target() != target.value(a) {
                return Err(Error::InvalidChainMap(format!(
                    "component at {} has the wrong endpoints",
                    source.shape.label(a)
                )));
            }
            c.check_commutes()?;
        }
        for (k, &(a, b)) in source.shape.covers().iter().enumerate() {
            let left = target.arrows[k].compose(&comps[a])?;
            let right = comps[b].compose(&source.arrows[k])?;
            if !left.equals(&right) {
                return Err(Error::InvalidChainMap(format!(
                    "naturality fails on {} → {}",
                    source.shape.label(a),
                    source.shape.label(b)
                )));
            }
        }
        Ok(Self { source, target, comps })
    }

    /// The map as one diagram on `A × [1]`: `X` on the slice at `0`, `Y`
    /// on the slice at `1`, components on the arrows `(a,0) → (a,1)`.
    pub fn to_arrow_diagram(&self) -> Result<Diagram<F>> {
        let shape = &self.source.shape;
        let i1 = Arc::new(interval(1));
        let prod = Arc::new(product(shape, &i1));
        let at = |a: usize, end: i64| prod.index_of(&product_label(shape.label(a), &Label::int(end)));
        let mut values = vec![ChainComplex::zero(&self.source.field); prod.len()];
        let mut arrows = BTreeMap::new();
        for a in 0..shape.len() {
            let (a0, a1) = (at(a, 0)?, at(a, 1)?);
            values[a0] = self.source.values[a].clone();
            values[a1] = self.target.values[a].clone();
            arrows.insert((a0, a1), self.comps[a].clone());
        }
        for (k, &(a, b)) in shape.covers().iter().enumerate() {
            arrows.insert((at(a, 0)?, at(b, 0)?), self.source.arrows[k].clone());
            arrows.insert((at(a, 1)?, at(b, 1)?), self.target.arrows[k].clone());
        }
        Diagram::from_cover_map(&self.source.field, prod, values, arrows)
    }

    /// Reads a map off a diagram on `shape × [1]` (the inverse of
    /// [`DiagramMap::to_arrow_diagram`]).
    pub fn from_arrow_diagram(shape: &Arc<FinPoset>, z: &Diagram<F>) -> Result<Self> {
        let i1 = Arc::new(interval(1));
        let prod = Arc::new(product(shape, &i1));
        let z = z.with_shape(prod.clone())?;
        let slice = |end: i64| -> Result<MonotoneMap> {
            MonotoneMap::from_fn(&format!("at{end}"), shape.clone(), prod.clone(), move |l| {
                Ok(product_label(l, &Label::int(end)))
            })
        };
        let (s0, s1) = (slice(0)?, slice(1)?);
        let x = restrict(&s0, &z)?.with_shape(shape.clone())?;
        let y = restrict(&s1, &z)?.with_shape(shape.clone())?;
        let comps = (0..shape.len()).map(|a| z.map(s0.at(a), s1.at(a))).collect::<Result<_>>()?;
        Self::new(x, y, comps)
    }

    /// The identity transformation.
    pub fn identity(x: &Diagram<F>) -> Self {
        let comps = x.values.iter().map(ChainMap::identity).collect();
        Self { source: x.clone(), target: x.clone(), comps }
    }

    /// Source diagram.
    pub fn source(&self) -> &Diagram<F> {
        &self.source
    }

    /// Target diagram.
    pub fn target(&self) -> &Diagram<F> {
        &self.target
    }

    /// Component at position `a`.
    pub fn component(&self, a: usize) -> &ChainMap<F> {
        &self.comps[a]
    }

    /// All components.
    pub fn components(&self) -> &[ChainMap<F>] {
        &self.comps
    }

    /// Restriction of the transformation along `u`.
    pub fn restrict(&self, u: &MonotoneMap) -> Result<Self> {
        let s = restrict(u, &self.source)?;
        let t = restrict(u, &self.target)?;
        let comps = (0..u.source().len()).map(|a| self.comps[u.at(a)].clone()).collect();
        Ok(Self { source: s, target: t, comps })
    }
}

/// Pointwise quasi-isomorphism test: every component is a quasi-isomorphism.
pub fn diagram_qis<F: Field>(f: &DiagramMap<F>) -> Result<bool> {
    for c in &f.comps {
        if !c.quasi_iso_check()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Objects at which a diagram map fails to be a quasi-isomorphism.
pub fn qis_failures<F: Field>(f: &DiagramMap<F>) -> Result<Vec<Label>> {
    let mut out = Vec::new();
    for (a, c) in f.comps.iter().enumerate() {
        if !c.quasi_iso_check()? {
            out.push(f.source.shape.label(a).clone());
        }
    }
    Ok(out)
}

/// The pointwise cone of a diagram map, with cone structure maps
/// `(x, y) ↦ (X(a→b) x, Y(a→b) y)`.
pub fn pointwise_cone<F: Field>(f: &DiagramMap<F>) -> Result<Diagram<F>> {
    let field = f.source.field.clone();
    let shape = f.source.shape.clone();
    let cones: Vec<ChainComplex<F>> = f.comps.iter().map(|c| cone(c).map(|k| k.cone)).collect::<Result<_>>()?;
    let mut arrows = Vec::new();
    for (k, &(a, b)) in shape.covers().iter().enumerate() {
        let xs = &f.source.arrows[k];
        let ys = &f.target.arrows[k];
        let mut comps = BTreeMap::new();
        for n in cones[a].degrees() {
            let m = Matrix::block_diag(&field, &[&xs.comp(n - 1), &ys.comp(n)]);
            comps.insert(n, m);
        }
        arrows.push(ChainMap::new_unchecked(cones[a].clone(), cones[b].clone(), comps));
    }
    Ok(Diagram::new_unchecked(&field, shape, cones, arrows))
}

/// Homology invariants of a diagram: the homology table at every object and
/// the rank of the induced map on homology for every strictly comparable
/// pair.  Pointwise quasi-isomorphic diagrams have equal signatures; over a
/// linear chain `A_n` equal signatures conversely force an isomorphism in the
/// derived category (the interval decomposition is determined by ranks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySignature {
    /// Homology per object.
    pub objects: Vec<(Label, Homology)>,
    /// Nonzero ranks of `H_n(X(a)) → H_n(X(b))` for `a < b`.
    pub ranks: Vec<((Label, Label), BTreeMap<i64, usize>)>,
}

impl HomologySignature {
    /// Computes the signature.
    pub fn of<F: Field>(x: &Diagram<F>) -> Result<Self> {
        let shape = x.shape.clone();
        let n = shape.len();
        let objects = x.homology_tables();
        // Per object and degree: cycle basis and boundary rank.
        let mut cycles: Vec<BTreeMap<i64, Matrix<F>>> = Vec::with_capacity(n);
        let mut bounds: Vec<BTreeMap<i64, (Matrix<F>, usize)>> = Vec::with_capacity(n);
        for (a, (_, h)) in objects.iter().enumerate() {
            let v = &x.values[a];
            let mut z = BTreeMap::new();
            let mut b = BTreeMap::new();
            for &deg in h.0.keys() {
                z.insert(deg, v.cycles(deg));
                let bd = v.boundaries(deg);
                let r = bd.rank();
                b.insert(deg, (bd, r));
            }
            cycles.push(z);
            bounds.push(b);
        }
        let mut ranks = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !shape.lt(a, b) {
                    continue;
                }
                let mut table = BTreeMap::new();
                for (&deg, z) in &cycles[a] {
                    let Some((bd, r)) = bounds[b].get(&deg) else { continue };
                    let fz = x.map_matrix(a, b, deg)?.mul(z);
                    let joined = Matrix::hstack(&x.field, x.values[b].dim(deg), &[&fz, bd]);
                    let rank = joined.rank() - r;
                    if rank > 0 {
                        table.insert(deg, rank);
                    }
                }
                if !table.is_empty() {
                    ranks.push(((shape.label(a).clone(), shape.label(b).clone()), table));
                }
            }
        }
        Ok(Self { objects, ranks })
    }

    /// `true` if every object has zero homology.
    pub fn is_zero(&self) -> bool {
        self.objects.iter().all(|(_, h)| h.is_zero())
    }

    /// Human-readable list of differences to another signature.
    pub fn differences(&self, other: &Self) -> Vec<String> {
        let mut out = Vec::new();
        for ((l, h), (_, g)) in self.objects.iter().zip(&other.objects) {
            if h != g {
                out.push(format!("homology at {l}: {h} vs {g}"));
            }
        }
        if self.objects.len() != other.objects.len() {
            out.push("different numbers of objects".into());
        }
        let mine: BTreeMap<_, _> = self.ranks.iter().cloned().collect();
        let theirs: BTreeMap<_, _> = other.ranks.iter().cloned().collect();
        for (k, v) in &mine {
            if theirs.get(k) != Some(v) {
                out.push(format!("rank of H({}) → H({}): {:?} vs {:?}", k.0, k.1, v, theirs.get(k)));
            }
        }
        for (k, v) in &theirs {
            if !mine.contains_key(k) {
                out.push(format!("rank of H({}) → H({}): none vs {:?}", k.0, k.1, v));
            }
        }
        out
    }
}

/// `true` if the two diagrams have equal homology signatures (a necessary
/// condition for being pointwise quasi-isomorphic, and a complete one over
/// the linear shapes `A_n`).
pub fn same_signature<F: Field>(x: &Diagram<F>, y: &Diagram<F>) -> Result<bool> {
    if *x.shape != *y.shape {
        return Err(Error::ShapeMismatch(format!("{} vs {}", x.shape.name(), y.shape.name())));
    }
    Ok(HomologySignature::of(x)? == HomologySignature::of(y)?)
}
