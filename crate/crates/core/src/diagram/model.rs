//! Cellular projective models and the fast Kan extension engine.
//!
//! A projective model of `X : A → Ch(k)` is a finite set of generators, each
//! living at an object `label ∈ A` in a degree `n`, with a boundary that is a
//! combination of generators at objects `≤ label`, together with a map `ε`
//! sending every generator to a vector of `X(label)_n`.  For every `a`, the
//! generators at objects `≤ a` span a subcomplex `P(a)`, and `ε` induces a
//! quasi-isomorphism `P(a) → X(a)`.
//!
//! The model is built object by object along a linear extension: at `a`, one
//! new generator is attached for every homology class of the cone of
//! `P(<a) → X(a)`, which kills the cone exactly.  Because `P` is a sum of
//! representables, left Kan extension is computed by pushing generators
//! forward: `(u_! P)(b)` is spanned by the generators with `u(label) ≤ b`.
//! Right Kan extensions use the duality `u_* = D (u^op)_! D`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::{dual, Diagram};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homalg::{cone, ChainComplex, ChainMap};
use crate::matrix::Matrix;
use crate::poset::{FinPoset, MonotoneMap, SieveKind};

/// Which Kan extension to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KanSide {
    /// Left Kan extension `u_!` (homotopy colimits over `u/b`).
    Left,
    /// Right Kan extension `u_*` (homotopy limits over `b/u`).
    Right,
}

impl fmt::Display for KanSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KanSide::Left => "left",
            KanSide::Right => "right",
        })
    }
}

impl std::str::FromStr for KanSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "Left" | "!" => Ok(KanSide::Left),
            "right" | "Right" | "*" => Ok(KanSide::Right),
            other => Err(Error::InvalidMap(format!("unknown Kan side '{other}' (expected left or right)"))),
        }
    }
}

/// One generator of a projective model.
#[derive(Clone, Debug)]
pub struct Generator<F: Field> {
    /// Object position where the generator lives.
    pub label: usize,
    /// Homological degree.
    pub degree: i64,
    /// Boundary as `(generator index, coefficient)` pairs.
    pub boundary: Vec<(usize, F::Elem)>,
    /// Image under `ε` in `X(label)_degree`.
    pub eps: Vec<F::Elem>,
}

/// A cellular projective model of a diagram.
#[derive(Clone, Debug)]
pub struct ProjectiveModel<F: Field> {
    field: F,
    shape: Arc<FinPoset>,
    gens: Vec<Generator<F>>,
}

/// The subcomplex spanned by a boundary-closed set of generators.
pub struct SubComplex<F: Field> {
    /// The complex.
    pub complex: ChainComplex<F>,
    /// Generators spanning each degree, in basis order.
    pub basis: BTreeMap<i64, Vec<usize>>,
    position: HashMap<usize, usize>,
}

impl<F: Field> SubComplex<F> {
    /// Basis position of a generator inside its degree.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.position.get(&g).copied()
    }
}

impl<F: Field> ProjectiveModel<F> {
    /// Builds a minimal model of `x`.
    pub fn build(x: &Diagram<F>) -> Result<Self> {
        let field = x.field().clone();
        let shape = x.shape().clone();
        let mut model = Self { field: field.clone(), shape: shape.clone(), gens: Vec::new() };
        for a in shape.linear_extension() {
            let below: Vec<usize> = (0..model.gens.len()).filter(|&g| shape.leq(model.gens[g].label, a)).collect();
            let sub = model.subcomplex(&below);
            let target = x.value(a);
            // φ : P(<a) → X(a), column of generator g = X(label g → a) ε(g).
            let mut comps = BTreeMap::new();
            for (&n, gens) in &sub.basis {
                if target.dim(n) == 0 {
                    continue;
                }
                let mut cols = Vec::with_capacity(gens.len());
                for &g in gens {
                    let gen = &model.gens[g];
                    let m = x.map_matrix(gen.label, a, n)?;
                    cols.push(m.apply(&gen.eps));
                }
                comps.insert(n, Matrix::from_columns(&field, target.dim(n), &cols));
            }
            let phi = ChainMap::new_unchecked(sub.complex.clone(), target.clone(), comps);
            let c = cone(&phi)?.cone;
            for n in c.degrees() {
                let reps = c.homology_representatives(n);
                if reps.cols() == 0 {
                    continue;
                }
                let qdim = sub.complex.dim(n - 1);
                let qbasis = sub.basis.get(&(n - 1));
                for j in 0..reps.cols() {
                    let col = reps.column(j);
                    let boundary = (0..qdim)
                        .filter(|&i| !field.is_zero(&col[i]))
                        .map(|i| (qbasis.expect("nonzero part")[i], col[i].clone()))
                        .collect();
                    let eps = col[qdim..].to_vec();
                    model.gens.push(Generator { label: a, degree: n, boundary, eps });
                }
            }
        }
        Ok(model)
    }

    /// A model from explicit generators (boundaries must square to zero
    /// and refer to generators at smaller objects).
    pub fn from_generators(field: &F, shape: Arc<FinPoset>, gens: Vec<Generator<F>>) -> Self {
        Self { field: field.clone(), shape, gens }
    }

    /// The shape.
    pub fn shape(&self) -> &Arc<FinPoset> {
        &self.shape
    }

    /// All generators, in creation order.
    pub fn generators(&self) -> &[Generator<F>] {
        &self.gens
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    /// `true` if there are no generators (the diagram is pointwise acyclic).
    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The subcomplex on a boundary-closed set of generators.
    pub fn subcomplex(&self, set: &[usize]) -> SubComplex<F> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let mut basis: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut position = HashMap::new();
        for &g in &sorted {
            let list = basis.entry(self.gens[g].degree).or_default();
            position.insert(g, list.len());
            list.push(g);
        }
        let dims: BTreeMap<i64, usize> = basis.iter().map(|(&n, l)| (n, l.len())).collect();
        let mut diffs = BTreeMap::new();
        for (&n, gens) in &basis {
            let rows = dims.get(&(n - 1)).copied().unwrap_or(0);
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zeros(&self.field, rows, gens.len());
            for (j, &g) in gens.iter().enumerate() {
                for (h, c) in &self.gens[g].boundary {
                    let i = *position.get(h).expect("generator set must be closed under boundaries");
                    m.set(i, j, c.clone());
                }
            }
            diffs.insert(n, m);
        }
        let complex = ChainComplex::from_parts(&self.field, &dims, &diffs).expect("model boundaries square to zero");
        SubComplex { complex, basis, position }
    }

    /// Inclusion of subcomplexes `small ⊆ large`.
    pub fn inclusion(&self, small: &SubComplex<F>, large: &SubComplex<F>) -> ChainMap<F> {
        let mut comps = BTreeMap::new();
        for (&n, gens) in &small.basis {
            let mut m = Matrix::zeros(&self.field, large.complex.dim(n), gens.len());
            for (j, &g) in gens.iter().enumerate() {
                m.set(large.position(g).expect("subset"), j, self.field.one());
            }
            comps.insert(n, m);
        }
        ChainMap::new_unchecked(small.complex.clone(), large.complex.clone(), comps)
    }

    /// The comparison map `ε_a : P(a) → X(a)`.
    pub fn epsilon(&self, x: &Diagram<F>, a: usize) -> Result<ChainMap<F>> {
        let set: Vec<usize> = (0..self.gens.len()).filter(|&g| self.shape.leq(self.gens[g].label, a)).collect();
        let sub = self.subcomplex(&set);
        let target = x.value(a);
        let mut comps = BTreeMap::new();
        for (&n, gens) in &sub.basis {
            let mut cols = Vec::new();
            for &g in gens {
                let gen = &self.gens[g];
                cols.push(x.map_matrix(gen.label, a, n)?.apply(&gen.eps));
            }
            comps.insert(n, Matrix::from_columns(&self.field, target.dim(n), &cols));
        }
        Ok(ChainMap::new_unchecked(sub.complex, target.clone(), comps))
    }

    /// The model as a diagram: `P(a)` with inclusions.
    pub fn to_diagram(&self) -> Diagram<F> {
        let subs: Vec<SubComplex<F>> = (0..self.shape.len())
            .map(|a| {
                let set: Vec<usize> =
                    (0..self.gens.len()).filter(|&g| self.shape.leq(self.gens[g].label, a)).collect();
                self.subcomplex(&set)
            })
            .collect();
        let values = subs.iter().map(|s| s.complex.clone()).collect();
        let arrows = self.shape.covers().iter().map(|&(a, b)| self.inclusion(&subs[a], &subs[b])).collect();
        Diagram::new_unchecked(&self.field, self.shape.clone(), values, arrows)
    }

    /// Left Kan extension of the model along `u`.
    pub fn push_forward(&self, u: &MonotoneMap) -> Diagram<F> {
        let target = u.target().clone();
        let subs: Vec<SubComplex<F>> = (0..target.len())
            .map(|b| {
                let set: Vec<usize> =
                    (0..self.gens.len()).filter(|&g| target.leq(u.at(self.gens[g].label), b)).collect();
                self.subcomplex(&set)
            })
            .collect();
        let values = subs.iter().map(|s| s.complex.clone()).collect();
        let arrows = target.covers().iter().map(|&(b, c)| self.inclusion(&subs[b], &subs[c])).collect();
        Diagram::new_unchecked(&self.field, target, values, arrows)
    }

    /// For a fully faithful `u`, the model form of the unit check: at every
    /// `a`, the generators with `u(label) ≤ u(a)` but `label ≰ a` must span an
    /// acyclic quotient.  Returns one flag per object of the source.
    pub fn unit_quotients_acyclic(&self, u: &MonotoneMap) -> Vec<bool> {
        (0..self.shape.len())
            .map(|a| {
                let big: Vec<usize> = (0..self.gens.len())
                    .filter(|&g| u.target().leq(u.at(self.gens[g].label), u.at(a)))
                    .collect();
                let sub = self.subcomplex(&big);
                let extra: Vec<usize> =
                    big.iter().copied().filter(|&g| !self.shape.leq(self.gens[g].label, a)).collect();
                quotient_acyclic(&self.field, &sub, &extra)
            })
            .collect()
    }
}

/// `true` if the quotient of `sub` by the complement of `keep` (a
/// subcomplex) is acyclic; the quotient differential is the submatrix on
/// the kept generators.
fn quotient_acyclic<F: Field>(field: &F, sub: &SubComplex<F>, keep: &[usize]) -> bool {
    let keep: std::collections::HashSet<usize> = keep.iter().copied().collect();
    let mut basis: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (&n, gens) in &sub.basis {
        let kept: Vec<usize> = gens.iter().enumerate().filter(|(_, g)| keep.contains(g)).map(|(i, _)| i).collect();
        if !kept.is_empty() {
            basis.insert(n, kept);
        }
    }
    let dims: BTreeMap<i64, usize> = basis.iter().map(|(&n, l)| (n, l.len())).collect();
    let mut diffs = BTreeMap::new();
    for (&n, cols) in &basis {
        if let Some(rows) = basis.get(&(n - 1)) {
            diffs.insert(n, sub.complex.d(n).select(rows, cols));
        }
    }
    ChainComplex::from_parts(field, &dims, &diffs).map(|c| c.is_acyclic()).unwrap_or(false)
}

/// Extension by zero along a fully faithful map whose image is a cosieve
/// (left Kan) or a sieve (right Kan): values are copied verbatim on the
/// image and vanish elsewhere.
pub fn extend_by_zero<F: Field>(u: &MonotoneMap, x: &Diagram<F>) -> Result<Diagram<F>> {
    let target = u.target().clone();
    let mut preimage = vec![None; target.len()];
    for a in 0..u.source().len() {
        preimage[u.at(a)] = Some(a);
    }
    let zero = ChainComplex::zero(x.field());
    let values: Vec<ChainComplex<F>> =
        preimage.iter().map(|p| p.map_or_else(|| zero.clone(), |a| x.value(a).clone())).collect();
    let mut arrows = Vec::with_capacity(target.covers().len());
    for &(b, c) in target.covers() {
        arrows.push(match (preimage[b], preimage[c]) {
            (Some(a), Some(a2)) => x.map(a, a2)?,
            _ => ChainMap::zero(&values[b], &values[c]),
        });
    }
    Ok(Diagram::new_unchecked(x.field(), target, values, arrows))
}

/// Homotopy Kan extension `u_! X` or `u_* X`.
///
/// Identity maps return the input; fully faithful cosieves (left) and sieves
/// (right) extend by zero; every other map goes through the projective
/// model engine.
pub fn kan_extend<F: Field>(side: KanSide, u: &MonotoneMap, x: &Diagram<F>) -> Result<Diagram<F>> {
    if **u.source() != **x.shape() {
        return Err(Error::ShapeMismatch(format!(
            "Kan extension along {} needs a diagram on {}, got {}",
            u.name(),
            u.source().name(),
            x.shape().name()
        )));
    }
    if u.is_identity() {
        return x.with_shape(u.target().clone());
    }
    let kind = u.sieve_kind();
    match side {
        KanSide::Left => {
            if matches!(kind, SieveKind::Cosieve | SieveKind::Both) {
                return extend_by_zero(u, x);
            }
            Ok(ProjectiveModel::build(x)?.push_forward(u))
        }
        KanSide::Right => {
            if matches!(kind, SieveKind::Sieve | SieveKind::Both) {
                return extend_by_zero(u, x);
            }
            let op = u.opposite();
            let dx = dual(x).with_shape(op.source().clone())?;
            let ext = ProjectiveModel::build(&dx)?.push_forward(&op);
            dual(&ext).with_shape(u.target().clone())
        }
    }
}

/// Model-based unit check for a fully faithful `u` (`X → u* u_! X` is a
/// pointwise quasi-isomorphism); one flag per source object.
pub fn unit_check_model<F: Field>(u: &MonotoneMap, x: &Diagram<F>) -> Result<Vec<bool>> {
    Ok(ProjectiveModel::build(x)?.unit_quotients_acyclic(u))
}

/// Model-based counit check for a fully faithful `u` (`u* u_* X → X`).
pub fn counit_check_model<F: Field>(u: &MonotoneMap, x: &Diagram<F>) -> Result<Vec<bool>> {
    let op = u.opposite();
    let dx = dual(x).with_shape(op.source().clone())?;
    Ok(ProjectiveModel::build(&dx)?.unit_quotients_acyclic(&op))
}
