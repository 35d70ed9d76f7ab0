//! Seeded random generators for complexes, diagrams, diagram maps and
//! staircase members, used by the property suites and the CLI.
//!
//! Random diagrams are built from cell structures so that they are valid by
//! construction: a "projective" part whose generators attach along random
//! cycles of the already-built part (all structure maps injective), plus the
//! dual of such a part on the opposite shape (all structure maps surjective),
//! followed by a random change of basis at every object and degree so that
//! no matrix is in normal form.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::model::{Generator, ProjectiveModel};
use crate::diagram::{diagram_sum, dual, Diagram, DiagramMap};
use crate::error::Result;
use crate::field::Field;
use crate::homalg::{ChainComplex, ChainMap};
use crate::matrix::Matrix;
use crate::poset::shapes::{a_tilde, interval};
use crate::poset::{product, FinPoset, Label};

/// The deterministic generator used throughout.
pub type SeededRng = ChaCha8Rng;

/// A generator seeded from an integer.
pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size parameters for random diagrams.
#[derive(Clone, Copy, Debug)]
pub struct RandomConfig {
    /// Maximal dimension of any value in any degree.
    pub max_dim: usize,
    /// Lowest degree used.
    pub lo: i64,
    /// Highest degree used.
    pub hi: i64,
    /// Maximal number of cells of each of the two parts.
    pub max_cells: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        Self { max_dim: 6, lo: -2, hi: 3, max_cells: 4 }
    }
}

impl RandomConfig {
    /// A smaller configuration for expensive pipelines.
    pub fn small() -> Self {
        Self { max_dim: 4, lo: -1, hi: 2, max_cells: 3 }
    }
}

/// A random invertible `n × n` matrix.
pub fn random_invertible<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> (Matrix<F>, Matrix<F>) {
    loop {
        let m = Matrix::from_fn(field, n, n, |_, _| field.random(rng));
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

/// Cell structure on `shape` whose generators attach along random cycles.
fn random_cells<F: Field, R: Rng + ?Sized>(
    field: &F,
    shape: &Arc<FinPoset>,
    cells: usize,
    degrees: (i64, i64),
    rng: &mut R,
) -> ProjectiveModel<F> {
    let mut gens: Vec<Generator<F>> = Vec::new();
    let mut order: Vec<(usize, i64)> =
        (0..cells).map(|_| (rng.gen_range(0..shape.len()), rng.gen_range(degrees.0..=degrees.1))).collect();
    // Attaching in increasing degree makes lower cells available as boundaries.
    order.sort_by_key(|&(_, d)| d);
    for (label, degree) in order {
        let below: Vec<usize> =
            (0..gens.len()).filter(|&g| shape.leq(gens[g].label, label)).collect();
        let model = ProjectiveModel::from_generators(field, shape.clone(), gens.clone());
        let sub = model.subcomplex(&below);
        let mut boundary = Vec::new();
        if rng.gen_bool(0.6) {
            let z = sub.complex.cycles(degree - 1);
            if z.cols() > 0 {
                let coeffs: Vec<F::Elem> = (0..z.cols()).map(|_| field.random(rng)).collect();
                let v = z.apply(&coeffs);
                let basis = &sub.basis[&(degree - 1)];
                for (i, c) in v.into_iter().enumerate() {
                    if !field.is_zero(&c) {
                        boundary.push((basis[i], c));
                    }
                }
            }
        }
        gens.push(Generator { label, degree, boundary, eps: Vec::new() });
    }
    ProjectiveModel::from_generators(field, shape.clone(), gens)
}

/// Applies a random change of basis at every object and degree.
pub fn scramble<F: Field, R: Rng + ?Sized>(x: &Diagram<F>, rng: &mut R) -> Diagram<F> {
    let field = x.field().clone();
    let shape = x.shape().clone();
    let mut ts = Vec::new();
    let mut values = Vec::new();
    for v in x.values() {
        let mut t = BTreeMap::new();
        let mut ti = BTreeMap::new();
        for n in v.degrees() {
            let (m, mi) = random_invertible(&field, v.dim(n), rng);
            t.insert(n, m);
            ti.insert(n, mi);
        }
        values.push(v.conjugate(&t, &ti));
        ts.push((t, ti));
    }
    let mut arrows = Vec::new();
    for (k, &(a, b)) in shape.covers().iter().enumerate() {
        let f = &x.arrows()[k];
        let mut comps = BTreeMap::new();
        for (&n, m) in f.components() {
            comps.insert(n, ts[b].0[&n].mul(m).mul(&ts[a].1[&n]));
        }
        arrows.push(ChainMap::new_unchecked(values[a].clone(), values[b].clone(), comps));
    }
    Diagram::new_unchecked(&field, shape, values, arrows)
}

fn max_dim<F: Field>(x: &Diagram<F>) -> usize {
    x.values().iter().flat_map(|v| v.dim_table().into_values()).max().unwrap_or(0)
}

/// A random diagram on `shape` within the size limits of `cfg`.
pub fn random_diagram<F: Field, R: Rng + ?Sized>(
    field: &F,
    shape: &Arc<FinPoset>,
    cfg: &RandomConfig,
    rng: &mut R,
) -> Result<Diagram<F>> {
    let op = Arc::new(shape.opposite());
    let mut cells = cfg.max_cells;
    loop {
        let np = rng.gen_range(0..=cells);
        let ni = rng.gen_range(0..=cells);
        let proj = random_cells(field, shape, np, (cfg.lo, cfg.hi), rng).to_diagram();
        let inj = dual(&random_cells(field, &op, ni, (-cfg.hi, -cfg.lo), rng).to_diagram()).with_shape(shape.clone())?;
        let sum = diagram_sum(&[&proj, &inj])?;
        if max_dim(&sum) <= cfg.max_dim {
            return Ok(scramble(&sum, rng));
        }
        cells = cells.saturating_sub(1).max(1);
    }
}

/// A random bounded complex.
pub fn random_complex<F: Field, R: Rng + ?Sized>(field: &F, cfg: &RandomConfig, rng: &mut R) -> Result<ChainComplex<F>> {
    let pt = Arc::new(interval(0));
    Ok(random_diagram(field, &pt, cfg, rng)?.value(0).clone())
}

/// A random diagram map `X → Y` on `shape`, read off a random diagram on
/// `shape × [1]` (slices at `0` and `1`).
pub fn random_diagram_map<F: Field, R: Rng + ?Sized>(
    field: &F,
    shape: &Arc<FinPoset>,
    cfg: &RandomConfig,
    rng: &mut R,
) -> Result<DiagramMap<F>> {
    let i1 = Arc::new(interval(1));
    let prod = Arc::new(product(shape, &i1));
    let z = random_diagram(field, &prod, cfg, rng)?;
    DiagramMap::from_arrow_diagram(shape, &z)
}

/// A random chain map `V → U` between random complexes.
fn random_chain_map<F: Field, R: Rng + ?Sized>(field: &F, cfg: &RandomConfig, rng: &mut R) -> Result<ChainMap<F>> {
    let i1 = Arc::new(interval(1));
    let z = random_diagram(field, &i1, cfg, rng)?;
    z.map(0, 1)
}

/// Backbone of `A_tilde(n,2)` in chain order: `(0,0)`, `(i+1,i)`, top.
pub fn staircase_backbone(n: usize) -> Result<Vec<Label>> {
    let shape = a_tilde(n)?;
    let mut out = vec![Label::pair(0, 0)];
    for i in 0..(n as i64 - 2) {
        out.push(Label::pair(i + 1, i));
    }
    out.push(shape.label(shape.maximum().expect("staircase has a top")).clone());
    Ok(out)
}

/// A random member of the `A(n,2)` subcategory with literal zero complexes
/// at the vanishing slots `(i,i+1)` and strictly zero composites of
/// consecutive backbone maps.  Each backbone value is `U_i ⊕ V_i`, and the
/// backbone map `i → i+1` sends `V_i` to `U_{i+1}` by a random chain map.
pub fn random_staircase_member<F: Field, R: Rng + ?Sized>(
    field: &F,
    n: usize,
    cfg: &RandomConfig,
    rng: &mut R,
) -> Result<Diagram<F>> {
    let shape = Arc::new(a_tilde(n)?);
    let backbone = staircase_backbone(n)?;
    let half = RandomConfig { max_dim: (cfg.max_dim / 2).max(1), ..*cfg };
    // phi[i] : V_i → U_{i+1}; U_0 and V_{n-1} are independent random complexes.
    let mut us: Vec<ChainComplex<F>> = Vec::new();
    let mut vs: Vec<ChainComplex<F>> = Vec::new();
    let mut phis: Vec<ChainMap<F>> = Vec::new();
    us.push(random_complex(field, &half, rng)?);
    for _ in 0..n - 1 {
        let phi = random_chain_map(field, &half, rng)?;
        vs.push(phi.source().clone());
        us.push(phi.target().clone());
        phis.push(phi);
    }
    vs.push(random_complex(field, &half, rng)?);
    let values_bb: Vec<ChainComplex<F>> = (0..n)
        .map(|i| crate::homalg::direct_sum(field, &[us[i].clone(), vs[i].clone()]).map(|s| s.sum))
        .collect::<Result<_>>()?;
    let mut alphas = Vec::new();
    for i in 0..n - 1 {
        let (src, tgt) = (&values_bb[i], &values_bb[i + 1]);
        let mut comps = BTreeMap::new();
        for d in src.degrees() {
            let mut m = Matrix::zeros(field, tgt.dim(d), src.dim(d));
            let blk = phis[i].comp(d);
            m.paste(0, us[i].dim(d), &blk);
            comps.insert(d, m);
        }
        alphas.push(ChainMap::new_unchecked(src.clone(), tgt.clone(), comps));
    }
    let zero = ChainComplex::zero(field);
    let values: Vec<ChainComplex<F>> = shape
        .objects()
        .iter()
        .map(|l| backbone.iter().position(|b| b == l).map_or_else(|| zero.clone(), |i| values_bb[i].clone()))
        .collect();
    let mut arrows = BTreeMap::new();
    for &(a, b) in shape.covers() {
        let (la, lb) = (shape.label(a), shape.label(b));
        if let (Some(i), Some(j)) =
            (backbone.iter().position(|x| x == la), backbone.iter().position(|x| x == lb))
        {
            if j == i + 1 {
                arrows.insert((a, b), alphas[i].clone());
            }
        }
    }
    let y = Diagram::from_cover_map(field, shape, values, arrows)?;
    Ok(scramble(&y, rng))
}

/// Pads every value of `x` with a random acyclic summand (a sum of
/// contractible two-term complexes), keeping the structure maps block
/// diagonal with zero on the padding.  The projection onto `x` is a pointwise
/// quasi-isomorphism.
pub fn pad_with_acyclic<F: Field, R: Rng + ?Sized>(x: &Diagram<F>, rng: &mut R) -> Result<(Diagram<F>, DiagramMap<F>)> {
    let field = x.field().clone();
    let shape = x.shape().clone();
    let pads: Vec<ChainComplex<F>> = (0..shape.len())
        .map(|_| {
            let deg = rng.gen_range(-1..=2);
            let parts: Vec<ChainComplex<F>> =
                (0..rng.gen_range(0..=2)).map(|_| ChainComplex::contractible(&field, deg, 1)).collect();
            crate::homalg::direct_sum(&field, &parts).map(|s| s.sum)
        })
        .collect::<Result<_>>()?;
    let pad_diag = Diagram::new_unchecked(
        &field,
        shape.clone(),
        pads.clone(),
        shape.covers().iter().map(|&(a, b)| ChainMap::zero(&pads[a], &pads[b])).collect(),
    );
    let sum = diagram_sum(&[x, &pad_diag])?;
    let mut comps = Vec::new();
    for a in 0..shape.len() {
        let v = x.value(a);
        let mut c = BTreeMap::new();
        for d in sum.value(a).degrees() {
            let mut m = Matrix::zeros(&field, v.dim(d), sum.value(a).dim(d));
            m.paste(0, 0, &Matrix::identity(&field, v.dim(d)));
            c.insert(d, m);
        }
        comps.push(ChainMap::new_unchecked(sum.value(a).clone(), v.clone(), c));
    }
    let proj = DiagramMap::new(sum.clone(), x.clone(), comps)?;
    Ok((sum, proj))
}
