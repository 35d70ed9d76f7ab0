//! Homotopy (co)limits by the normalized bar construction.
//!
//! For a diagram `X` on `A`, `hocolim X` is the total complex with one
//! summand `X(p_0)_m` in total degree `s + m` for every chain
//! `p_0 < … < p_s` of `A`, and differential
//! `D = Σ_i (-1)^i d_i + (-1)^s d_X`, where the face `d_0` drops `p_0` and
//! applies `X(p_0 → p_1)` while `d_i` (`i ≥ 1`) drops `p_i`.  Homotopy limits
//! are computed through duality, `holim X = D(hocolim DX)`.
//!
//! The same construction over slices gives the literal pointwise formula
//! for Kan extensions; it is exponential in the chain count and serves as an
//! oracle for the fast engine in [`super::model`].

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{dual, Diagram, KanSide};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homalg::{ChainComplex, ChainMap};
use crate::matrix::Matrix;
use crate::poset::{FinPoset, MonotoneMap, SliceSide};

/// The bar complex of a diagram over a subset of its objects, with the
/// bookkeeping needed to build maps out of or between bar complexes.
pub struct BarComplex<F: Field> {
    /// The total complex.
    pub complex: ChainComplex<F>,
    /// Chains (as sorted lists of object positions) in lexicographic order.
    pub chains: Vec<Vec<usize>>,
    /// For every total degree: `(chain index, offset)` of each summand.
    blocks: BTreeMap<i64, Vec<(usize, usize)>>,
    index: HashMap<Vec<usize>, usize>,
}

impl<F: Field> BarComplex<F> {
    /// Offset of the summand of chain `c` in total degree `n`, if present.
    pub fn offset(&self, c: usize, n: i64) -> Option<usize> {
        self.blocks.get(&n)?.iter().find(|(k, _)| *k == c).map(|&(_, o)| o)
    }

    /// Index of a chain.
    pub fn chain_index(&self, chain: &[usize]) -> Option<usize> {
        self.index.get(chain).copied()
    }
}

/// Strictly increasing chains inside `subset`, sorted lexicographically.
fn chains_in(shape: &FinPoset, subset: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = sorted.iter().map(|&i| vec![i]).collect();
    while let Some(c) = stack.pop() {
        let last = *c.last().unwrap();
        for &j in &sorted {
            if shape.lt(last, j) {
                let mut d = c.clone();
                d.push(j);
                stack.push(d);
            }
        }
        out.push(c);
    }
    out.sort();
    out
}

/// The bar complex of `x` restricted to the objects in `subset`.
pub fn bar_complex<F: Field>(x: &Diagram<F>, subset: &[usize]) -> Result<BarComplex<F>> {
    let field = x.field().clone();
    let shape = x.shape().clone();
    let chains = chains_in(&shape, subset);
    let index: HashMap<Vec<usize>, usize> = chains.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
    let mut blocks: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for (k, c) in chains.iter().enumerate() {
        let s = (c.len() - 1) as i64;
        let v = x.value(c[0]);
        for m in v.degrees() {
            let dm = v.dim(m);
            if dm == 0 {
                continue;
            }
            let total = dims.entry(s + m).or_insert(0);
            blocks.entry(s + m).or_default().push((k, *total));
            *total += dm;
        }
    }
    let mut diffs: BTreeMap<i64, Matrix<F>> = BTreeMap::new();
    for (&n, list) in &blocks {
        let rows = dims.get(&(n - 1)).copied().unwrap_or(0);
        if rows == 0 {
            continue;
        }
        let target_blocks: HashMap<usize, usize> =
            blocks.get(&(n - 1)).map(|l| l.iter().copied().collect()).unwrap_or_default();
        let mut mat = Matrix::zeros(&field, rows, dims[&n]);
        for &(k, col) in list {
            let c = &chains[k];
            let s = (c.len() - 1) as i64;
            let m = n - s;
            let v = x.value(c[0]);
            // Internal differential (-1)^s d_X on the same chain.
            if v.dim(m - 1) > 0 {
                let row = target_blocks[&k];
                mat.paste(row, col, &v.d(m).sign(s));
            }
            if s == 0 {
                continue;
            }
            // Face 0: drop p_0, apply X(p_0 → p_1).
            let face: Vec<usize> = c[1..].to_vec();
            let fk = index[&face];
            if x.value(c[1]).dim(m) > 0 {
                let row = target_blocks[&fk];
                mat.paste(row, col, &x.map_matrix(c[0], c[1], m)?);
            }
            // Faces i ≥ 1: drop p_i, identity with sign (-1)^i.
            let id = Matrix::identity(&field, v.dim(m));
            for i in 1..c.len() {
                let mut face = c.clone();
                face.remove(i);
                let row = target_blocks[&index[&face]];
                mat.paste(row, col, &id.sign(i as i64));
            }
        }
        diffs.insert(n, mat);
    }
    let complex = ChainComplex::from_parts(&field, &dims, &diffs)?;
    Ok(BarComplex { complex, chains, blocks, index })
}

/// Homotopy colimit over the whole shape.
pub fn hocolim<F: Field>(x: &Diagram<F>) -> Result<ChainComplex<F>> {
    let all: Vec<usize> = (0..x.shape().len()).collect();
    Ok(bar_complex(x, &all)?.complex)
}

/// Homotopy colimit together with the canonical maps `X(p) → hocolim X`
/// (inclusion of the summand of the chain `(p)`).
pub fn hocolim_with_maps<F: Field>(x: &Diagram<F>) -> Result<(ChainComplex<F>, Vec<ChainMap<F>>)> {
    let all: Vec<usize> = (0..x.shape().len()).collect();
    let bar = bar_complex(x, &all)?;
    let maps = (0..x.shape().len()).map(|p| vertex_inclusion(x, &bar, p)).collect::<Result<_>>()?;
    Ok((bar.complex, maps))
}

/// Inclusion `X(p) → bar` of the summand indexed by the one-element chain `(p)`.
pub fn vertex_inclusion<F: Field>(x: &Diagram<F>, bar: &BarComplex<F>, p: usize) -> Result<ChainMap<F>> {
    let field = x.field();
    let k = bar
        .chain_index(&[p])
        .ok_or_else(|| Error::InvalidMap(format!("{} is not in the bar complex", x.shape().label(p))))?;
    let v = x.value(p);
    let mut comps = BTreeMap::new();
    for m in v.degrees() {
        if v.dim(m) == 0 {
            continue;
        }
        let off = bar.offset(k, m).expect("summand present");
        let mut mat = Matrix::zeros(field, bar.complex.dim(m), v.dim(m));
        mat.paste(off, 0, &Matrix::identity(field, v.dim(m)));
        comps.insert(m, mat);
    }
    Ok(ChainMap::new_unchecked(v.clone(), bar.complex.clone(), comps))
}

/// Homotopy limit, `D(hocolim DX)`.
pub fn holim<F: Field>(x: &Diagram<F>) -> Result<ChainComplex<F>> {
    Ok(hocolim(&dual(x))?.dual())
}

/// Homotopy limit together with the canonical maps `holim X → X(p)`.
pub fn holim_with_maps<F: Field>(x: &Diagram<F>) -> Result<(ChainComplex<F>, Vec<ChainMap<F>>)> {
    let (c, maps) = hocolim_with_maps(&dual(x))?;
    Ok((c.dual(), maps.iter().map(|m| m.dual()).collect()))
}

/// Map between bar complexes induced by an inclusion of object subsets
/// (every chain of the smaller subset is a chain of the larger one).
fn bar_inclusion<F: Field>(small: &BarComplex<F>, large: &BarComplex<F>, x: &Diagram<F>) -> ChainMap<F> {
    let field = x.field();
    let mut comps = BTreeMap::new();
    for (&n, list) in &small.blocks {
        let mut mat = Matrix::zeros(field, large.complex.dim(n), small.complex.dim(n));
        for &(k, col) in list {
            let chain = &small.chains[k];
            let lk = large.chain_index(chain).expect("sub-chain");
            let row = large.offset(lk, n).expect("summand present");
            let d = x.value(chain[0]).dim(n - (chain.len() as i64 - 1));
            mat.paste(row, col, &Matrix::identity(field, d));
        }
        comps.insert(n, mat);
    }
    ChainMap::new_unchecked(small.complex.clone(), large.complex.clone(), comps)
}

/// Kan extension by the literal pointwise formula:
/// `(u_! X)(b) = hocolim over (u/b)` and `(u_* X)(b) = holim over (b/u)`.
pub fn kan_extend_bar<F: Field>(side: KanSide, u: &MonotoneMap, x: &Diagram<F>) -> Result<Diagram<F>> {
    if **u.source() != **x.shape() {
        return Err(Error::ShapeMismatch(format!(
            "Kan extension along {} needs a diagram on {}, got {}",
            u.name(),
            u.source().name(),
            x.shape().name()
        )));
    }
    match side {
        KanSide::Left => left_bar(u, x),
        KanSide::Right => {
            let op = u.opposite();
            let dx = dual(x).with_shape(op.source().clone())?;
            let ext = left_bar(&op, &dx)?;
            dual(&ext).with_shape(u.target().clone())
        }
    }
}

fn left_bar<F: Field>(u: &MonotoneMap, x: &Diagram<F>) -> Result<Diagram<F>> {
    let target: Arc<FinPoset> = u.target().clone();
    let bars: Vec<BarComplex<F>> = (0..target.len())
        .map(|b| bar_complex(x, &u.slice_positions(b, SliceSide::Under)))
        .collect::<Result<_>>()?;
    let values: Vec<ChainComplex<F>> = bars.iter().map(|b| b.complex.clone()).collect();
    let arrows = target.covers().iter().map(|&(b, c)| bar_inclusion(&bars[b], &bars[c], x)).collect();
    Ok(Diagram::new_unchecked(x.field(), target, values, arrows))
}

/// Bar-construction unit check for a fully faithful `u`: for every `a`, the
/// canonical map `X(a) → hocolim over (u / u a)` is a quasi-isomorphism.
pub fn unit_check_bar<F: Field>(u: &MonotoneMap, x: &Diagram<F>) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    for a in 0..u.source().len() {
        let bar = bar_complex(x, &u.slice_positions(u.at(a), SliceSide::Under))?;
        out.push(vertex_inclusion(x, &bar, a)?.quasi_iso_check()?);
    }
    Ok(out)
}

/// Bar-construction counit check for a fully faithful `u`: for every `a`,
/// the canonical map `holim over (u a / u) → X(a)` is a quasi-isomorphism.
pub fn counit_check_bar<F: Field>(u: &MonotoneMap, x: &Diagram<F>) -> Result<Vec<bool>> {
    let op = u.opposite();
    let dx = dual(x).with_shape(op.source().clone())?;
    unit_check_bar(&op, &dx)
}

/// The chain map `hocolim X → hocolim Y` induced by a diagram map, applying
/// the component at `p_0` on the summand of every chain `p_0 < … < p_s`.
pub fn bar_map<F: Field>(f: &super::DiagramMap<F>) -> Result<ChainMap<F>> {
    let x = f.source();
    let y = f.target();
    let field = x.field();
    let all: Vec<usize> = (0..x.shape().len()).collect();
    let bx = bar_complex(x, &all)?;
    let by = bar_complex(y, &all)?;
    let mut comps = BTreeMap::new();
    for (&n, list) in &bx.blocks {
        let mut mat = Matrix::zeros(field, by.complex.dim(n), bx.complex.dim(n));
        for &(k, col) in list {
            let chain = &bx.chains[k];
            let m = n - (chain.len() as i64 - 1);
            if let Some(row) = by.offset(k, n) {
                mat.paste(row, col, &f.component(chain[0]).comp(m));
            }
        }
        comps.insert(n, mat);
    }
    ChainMap::new(bx.complex, by.complex, comps)
}
