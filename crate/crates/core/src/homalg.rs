//! Bounded chain complexes and chain maps over an exact field.
//!
//! Indexing is homological: the differential `d_n : C_n → C_{n-1}` lowers
//! degree.  Complexes are stored with their support trimmed, so two
//! complexes are equal exactly when their nonzero degrees, dimensions and
//! differentials agree.
//!
//! Sign conventions:
//! * `cone(f)_n = X_{n-1} ⊕ Y_n` with differential `[[-d_X, 0], [-f, d_Y]]`;
//! * `shift(C, k)_n = C_{n-k}` with differential multiplied by `(-1)^k`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Homology dimensions, keyed by degree; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Homology(pub BTreeMap<i64, usize>);

impl Homology {
    /// `true` if every homology group vanishes.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension in degree `n`.
    pub fn get(&self, n: i64) -> usize {
        self.0.get(&n).copied().unwrap_or(0)
    }

    /// The table translated by `k` degrees (the homology of a `k`-fold shift).
    pub fn shifted(&self, k: i64) -> Self {
        Homology(self.0.iter().map(|(&n, &d)| (n + k, d)).collect())
    }

    /// Degreewise sum of two tables.
    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (&n, &d) in &other.0 {
            *out.entry(n).or_insert(0) += d;
        }
        Homology(out)
    }

    /// Euler characteristic `Σ (-1)^n dim H_n`.
    pub fn euler(&self) -> i64 {
        self.0.iter().map(|(&n, &d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (n, d)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}: {d}")?;
        }
        write!(f, "}}")
    }
}

/// A bounded complex of finite-dimensional vector spaces.
#[derive(Clone, PartialEq)]
pub struct ChainComplex<F: Field> {
    field: F,
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[i] = d_{lo+i+1} : C_{lo+i+1} → C_{lo+i}`.
    diffs: Vec<Matrix<F>>,
}

impl<F: Field> fmt::Debug for ChainComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex(lo={}, dims={:?})", self.lo, self.dims)
    }
}

impl<F: Field> ChainComplex<F> {
    /// Builds a complex from its dimensions starting in degree `lo` and the
    /// differentials `d[i] = d_{lo+i+1}`.  Checks shapes and `d∘d = 0`.
    pub fn new(field: &F, lo: i64, dims: Vec<usize>, d: Vec<Matrix<F>>) -> Result<Self> {
        if dims.is_empty() {
            if !d.is_empty() {
                return Err(Error::InvalidComplex("differentials given for an empty complex".into()));
            }
            return Ok(Self::zero(field));
        }
        if d.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                d.len()
            )));
        }
        for (i, m) in d.iter().enumerate() {
            if m.rows() != dims[i] || m.cols() != dims[i + 1] {
                return Err(Error::InvalidComplex(format!(
                    "d_{} has shape {}x{}, expected {}x{}",
                    lo + i as i64 + 1,
                    m.rows(),
                    m.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        for i in 1..d.len() {
            if !d[i - 1].mul(&d[i]).is_zero() {
                return Err(Error::InvalidComplex(format!("d_{} ∘ d_{} ≠ 0", lo + i as i64, lo + i as i64 + 1)));
            }
        }
        Ok(Self::trimmed(field, lo, dims, d))
    }

    /// Like [`ChainComplex::new`] but without the `d∘d = 0` audit; used on
    /// hot paths whose output is correct by construction.
    pub(crate) fn new_unchecked(field: &F, lo: i64, dims: Vec<usize>, d: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(d.len() + 1, dims.len().max(1));
        if dims.is_empty() {
            return Self::zero(field);
        }
        Self::trimmed(field, lo, dims, d)
    }

    /// Builds from a map `degree → dimension` and `degree n → d_n`; missing
    /// differentials are zero.
    pub fn from_parts(field: &F, dims: &BTreeMap<i64, usize>, d: &BTreeMap<i64, Matrix<F>>) -> Result<Self> {
        let nonzero: Vec<i64> = dims.iter().filter(|(_, &v)| v > 0).map(|(&k, _)| k).collect();
        let (Some(&lo), Some(&hi)) = (nonzero.first(), nonzero.last()) else {
            for (n, m) in d {
                if m.rows() != 0 || m.cols() != 0 {
                    return Err(Error::InvalidComplex(format!("d_{n} given on a zero complex")));
                }
            }
            return Ok(Self::zero(field));
        };
        for (&n, m) in d {
            let want = (dims.get(&(n - 1)).copied().unwrap_or(0), dims.get(&n).copied().unwrap_or(0));
            if (m.rows(), m.cols()) != want {
                return Err(Error::InvalidComplex(format!(
                    "d_{n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        let dv: Vec<usize> = (lo..=hi).map(|n| dims.get(&n).copied().unwrap_or(0)).collect();
        let diffs: Vec<Matrix<F>> = (lo + 1..=hi)
            .map(|n| {
                d.get(&n).cloned().unwrap_or_else(|| {
                    Matrix::zeros(field, dv[(n - 1 - lo) as usize], dv[(n - lo) as usize])
                })
            })
            .collect();
        Self::new(field, lo, dv, diffs)
    }

    fn trimmed(field: &F, lo: i64, dims: Vec<usize>, d: Vec<Matrix<F>>) -> Self {
        let first = dims.iter().position(|&x| x > 0);
        let last = dims.iter().rposition(|&x| x > 0);
        match (first, last) {
            (Some(a), Some(b)) => Self {
                field: field.clone(),
                lo: lo + a as i64,
                dims: dims[a..=b].to_vec(),
                diffs: d[a..b].to_vec(),
            },
            _ => Self::zero(field),
        }
    }

    /// The zero complex.
    pub fn zero(field: &F) -> Self {
        Self { field: field.clone(), lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// `k^dim` concentrated in one degree.
    pub fn concentrated(field: &F, degree: i64, dim: usize) -> Self {
        Self::trimmed(field, degree, vec![dim], Vec::new())
    }

    /// The two-term complex `k^dim →(id) k^dim` in degrees `degree+1, degree` (acyclic).
    pub fn contractible(field: &F, degree: i64, dim: usize) -> Self {
        Self::trimmed(field, degree, vec![dim, dim], vec![Matrix::identity(field, dim)])
    }

    /// The field context.
    pub fn field(&self) -> &F {
        &self.field
    }

    /// Lowest degree with nonzero dimension (0 for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree with nonzero dimension (`lo - 1` for the zero complex).
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    /// `true` for the literal zero complex.
    pub fn is_zero_complex(&self) -> bool {
        self.dims.is_empty()
    }

    /// Degrees with nonzero dimension lie in `lo()..=hi()`.
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    /// Dimension in degree `n`.
    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    /// Total dimension.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Dimension table `degree → dim` of nonzero degrees.
    pub fn dim_table(&self) -> BTreeMap<i64, usize> {
        self.degrees().filter(|&n| self.dim(n) > 0).map(|n| (n, self.dim(n))).collect()
    }

    /// The differential `d_n : C_n → C_{n-1}` (a zero matrix outside the support).
    pub fn d(&self, n: i64) -> Matrix<F> {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            Matrix::zeros(&self.field, self.dim(n - 1), self.dim(n))
        }
    }

    fn d_ref(&self, n: i64) -> Option<&Matrix<F>> {
        if n > self.lo && n <= self.hi() {
            Some(&self.diffs[(n - self.lo - 1) as usize])
        } else {
            None
        }
    }

    fn rank_d(&self, n: i64) -> usize {
        self.d_ref(n).map_or(0, |m| m.rank())
    }

    /// `dim H_n = dim ker d_n − rank d_{n+1}` for every degree.
    pub fn homology(&self) -> Homology {
        let mut out = BTreeMap::new();
        let ranks: Vec<usize> = (self.lo..=self.hi() + 1).map(|n| self.rank_d(n)).collect();
        for n in self.degrees() {
            let i = (n - self.lo) as usize;
            let h = self.dim(n) - ranks[i] - ranks[i + 1];
            if h > 0 {
                out.insert(n, h);
            }
        }
        Homology(out)
    }

    /// `true` if all homology vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.homology().is_zero()
    }

    /// Euler characteristic `Σ (-1)^n dim C_n`.
    pub fn euler(&self) -> i64 {
        self.degrees().map(|n| if n.rem_euclid(2) == 0 { self.dim(n) as i64 } else { -(self.dim(n) as i64) }).sum()
    }

    /// Basis of the cycles `Z_n` as matrix columns.
    pub fn cycles(&self, n: i64) -> Matrix<F> {
        self.d(n).kernel()
    }

    /// Spanning set of the boundaries `B_n` as matrix columns.
    pub fn boundaries(&self, n: i64) -> Matrix<F> {
        self.d(n + 1)
    }

    /// Cycles whose classes form a basis of `H_n`, as matrix columns.
    pub fn homology_representatives(&self, n: i64) -> Matrix<F> {
        let z = self.cycles(n);
        let b = self.boundaries(n);
        let keep = Matrix::extend_basis(&b, &z);
        let rows: Vec<usize> = (0..z.rows()).collect();
        z.select(&rows, &keep)
    }

    /// `shift(C, k)_n = C_{n-k}` with differential multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero_complex() {
            return self.clone();
        }
        Self {
            field: self.field.clone(),
            lo: self.lo + k,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|m| m.sign(k)).collect(),
        }
    }

    /// The linear dual: `(C^*)_n = (C_{-n})^*` with transposed differentials.
    pub fn dual(&self) -> Self {
        if self.is_zero_complex() {
            return self.clone();
        }
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        // (C^*)_n → (C^*)_{n-1} is the transpose of d_{-n+1} : C_{-n+1} → C_{-n}.
        let diffs: Vec<Matrix<F>> = self.diffs.iter().rev().map(|m| m.transpose()).collect();
        Self { field: self.field.clone(), lo: -self.hi(), dims, diffs }
    }

    /// A copy with every differential replaced by its image under a
    /// degreewise change of basis `T_n` (new basis coordinates `T_n · old`).
    pub fn conjugate(&self, t: &BTreeMap<i64, Matrix<F>>, t_inv: &BTreeMap<i64, Matrix<F>>) -> Self {
        let diffs = (self.lo + 1..=self.hi())
            .map(|n| t[&(n - 1)].mul(&self.d(n)).mul(&t_inv[&n]))
            .collect();
        Self { field: self.field.clone(), lo: self.lo, dims: self.dims.clone(), diffs }
    }
}

/// Degreewise direct sum with its injections and projections.
pub struct DirectSum<F: Field> {
    /// The sum complex.
    pub sum: ChainComplex<F>,
    /// `ι_i : C_i → ⊕ C`.
    pub injections: Vec<ChainMap<F>>,
    /// `π_i : ⊕ C → C_i`.
    pub projections: Vec<ChainMap<F>>,
}

/// Degreewise direct sum with block-diagonal differential.
pub fn direct_sum<F: Field>(field: &F, parts: &[ChainComplex<F>]) -> Result<DirectSum<F>> {
    for p in parts {
        if p.field() != field {
            return Err(Error::FieldMismatch("direct sum of complexes over different fields".into()));
        }
    }
    let nonzero: Vec<&ChainComplex<F>> = parts.iter().filter(|p| !p.is_zero_complex()).collect();
    let sum = if nonzero.is_empty() {
        ChainComplex::zero(field)
    } else {
        let lo = nonzero.iter().map(|p| p.lo()).min().unwrap();
        let hi = nonzero.iter().map(|p| p.hi()).max().unwrap();
        let dims: Vec<usize> = (lo..=hi).map(|n| parts.iter().map(|p| p.dim(n)).sum()).collect();
        let diffs: Vec<Matrix<F>> = (lo + 1..=hi)
            .map(|n| {
                let blocks: Vec<Matrix<F>> = parts.iter().map(|p| p.d(n)).collect();
                let refs: Vec<&Matrix<F>> = blocks.iter().collect();
                Matrix::block_diag(field, &refs)
            })
            .collect();
        ChainComplex::new_unchecked(field, lo, dims, diffs)
    };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let mut inj = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for n in p.degrees() {
            let offset: usize = parts[..i].iter().map(|q| q.dim(n)).sum();
            let total = sum.dim(n);
            let mut m = Matrix::zeros(field, total, p.dim(n));
            m.paste(offset, 0, &Matrix::identity(field, p.dim(n)));
            proj.insert(n, m.transpose());
            inj.insert(n, m);
        }
        injections.push(ChainMap::new_unchecked(p.clone(), sum.clone(), inj));
        projections.push(ChainMap::new_unchecked(sum.clone(), p.clone(), proj));
    }
    Ok(DirectSum { sum, injections, projections })
}

/// A degree-preserving map of complexes commuting with the differentials.
#[derive(Clone, PartialEq)]
pub struct ChainMap<F: Field> {
    source: ChainComplex<F>,
    target: ChainComplex<F>,
    /// Components in degrees where both sides are nonzero.
    comps: BTreeMap<i64, Matrix<F>>,
}

impl<F: Field> fmt::Debug for ChainMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap({:?} -> {:?}, {:?})", self.source, self.target, self.comps)
    }
}

impl<F: Field> ChainMap<F> {
    /// Builds a chain map; components outside the common support are
    /// ignored if zero-sized and missing components are zero.  Checks
    /// shapes and `f d = d f`.
    pub fn new(source: ChainComplex<F>, target: ChainComplex<F>, comps: BTreeMap<i64, Matrix<F>>) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch("chain map between complexes over different fields".into()));
        }
        for (&n, m) in &comps {
            if (m.rows(), m.cols()) != (target.dim(n), source.dim(n)) {
                return Err(Error::InvalidChainMap(format!(
                    "component {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
        }
        let map = Self::new_unchecked(source, target, comps);
        map.check_commutes()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(source: ChainComplex<F>, target: ChainComplex<F>, comps: BTreeMap<i64, Matrix<F>>) -> Self {
        let comps = comps
            .into_iter()
            .filter(|(n, m)| m.rows() > 0 && m.cols() > 0 && source.dim(*n) > 0 && target.dim(*n) > 0)
            .collect();
        Self { source, target, comps }
    }

    /// Verifies `f_{n-1} d^X_n = d^Y_n f_n` in every degree.
    pub fn check_commutes(&self) -> Result<()> {
        let lo = self.source.lo().min(self.target.lo());
        let hi = self.source.hi().max(self.target.hi());
        for n in lo..=hi + 1 {
            let left = self.comp(n - 1).mul(&self.source.d(n));
            let right = self.target.d(n).mul(&self.comp(n));
            if left != right {
                return Err(Error::InvalidChainMap(format!("does not commute with the differential in degree {n}")));
            }
        }
        Ok(())
    }

    /// The identity map.
    pub fn identity(c: &ChainComplex<F>) -> Self {
        let comps = c.degrees().map(|n| (n, Matrix::identity(c.field(), c.dim(n)))).collect();
        Self::new_unchecked(c.clone(), c.clone(), comps)
    }

    /// The zero map.
    pub fn zero(source: &ChainComplex<F>, target: &ChainComplex<F>) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), BTreeMap::new())
    }

    /// Source complex.
    pub fn source(&self) -> &ChainComplex<F> {
        &self.source
    }

    /// Target complex.
    pub fn target(&self) -> &ChainComplex<F> {
        &self.target
    }

    /// Component in degree `n` (zero matrix if absent).
    pub fn comp(&self, n: i64) -> Matrix<F> {
        self.comps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.source.field(), self.target.dim(n), self.source.dim(n)))
    }

    /// Equality of the underlying maps (endpoints and every component),
    /// independent of which zero components are stored.
    pub fn equals(&self, other: &ChainMap<F>) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let lo = self.source.lo().min(self.target.lo());
        let hi = self.source.hi().max(self.target.hi());
        (lo..=hi).all(|n| self.comp(n) == other.comp(n))
    }

    /// Stored nonzero-size components.
    pub fn components(&self) -> &BTreeMap<i64, Matrix<F>> {
        &self.comps
    }

    /// `true` if every component vanishes.
    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|m| m.is_zero())
    }

    /// Composite `self ∘ first`.
    pub fn compose(&self, first: &ChainMap<F>) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::InvalidChainMap("composite of non-composable maps".into()));
        }
        let comps = first
            .comps
            .iter()
            .filter_map(|(n, m)| self.comps.get(n).map(|g| (*n, g.mul(m))))
            .collect();
        Ok(Self::new_unchecked(first.source.clone(), self.target.clone(), comps))
    }

    /// Sum of two parallel maps.
    pub fn add(&self, other: &ChainMap<F>) -> Result<Self> {
        self.combine(other, |a, b| a.add(b))
    }

    /// Difference of two parallel maps.
    pub fn sub(&self, other: &ChainMap<F>) -> Result<Self> {
        self.combine(other, |a, b| a.sub(b))
    }

    fn combine(&self, other: &ChainMap<F>, op: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidChainMap("combining non-parallel maps".into()));
        }
        let keys: std::collections::BTreeSet<i64> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        let comps = keys.into_iter().map(|n| (n, op(&self.comp(n), &other.comp(n)))).collect();
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), comps))
    }

    /// Negative of the map.
    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|(n, m)| (*n, m.neg())).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    /// The shifted map `shift(f, k)` between shifted complexes (components
    /// are unchanged, so it commutes with the sign-twisted differentials).
    pub fn shift(&self, k: i64) -> Self {
        let comps = self.comps.iter().map(|(n, m)| (n + k, m.clone())).collect();
        Self::new_unchecked(self.source.shift(k), self.target.shift(k), comps)
    }

    /// The dual map `Y^* → X^*`.
    pub fn dual(&self) -> Self {
        let comps = self.comps.iter().map(|(n, m)| (-n, m.transpose())).collect();
        Self::new_unchecked(self.target.dual(), self.source.dual(), comps)
    }

    /// Rank of the induced map `H_n(X) → H_n(Y)`.
    pub fn homology_rank(&self, n: i64) -> usize {
        let field = self.source.field();
        let z = self.source.cycles(n);
        let fz = self.comp(n).mul(&z);
        let b = self.target.boundaries(n);
        let joined = Matrix::hstack(field, self.target.dim(n), &[&fz, &b]);
        joined.rank() - b.rank()
    }

    /// Quasi-isomorphism test by both routes: acyclicity of the cone, and
    /// bijectivity of the induced maps on homology.  A disagreement is an
    /// internal property violation.
    pub fn quasi_iso_check(&self) -> Result<bool> {
        let by_cone = cone(self)?.cone.is_acyclic();
        let hx = self.source.homology();
        let hy = self.target.homology();
        let by_homology = hx == hy && hx.0.iter().all(|(&n, &d)| self.homology_rank(n) == d);
        if by_cone != by_homology {
            return Err(Error::PropertyViolation(format!(
                "quasi-isomorphism routes disagree (cone: {by_cone}, homology: {by_homology})"
            )));
        }
        Ok(by_cone)
    }

    /// `true` iff the map is a quasi-isomorphism (both routes computed).
    ///
    /// # Panics
    /// Panics if the two routes disagree, which would be an implementation bug.
    pub fn is_quasi_iso(&self) -> bool {
        match self.quasi_iso_check() {
            Ok(b) => b,
            Err(e) => panic!("{e}"),
        }
    }

    /// Searches for `h_n : X_n → Y_{n+1}` with `f = d h + h d`; returns the
    /// components `h_n` keyed by `n`, or `None` if `f` is not null-homotopic.
    pub fn null_homotopy(&self) -> Option<BTreeMap<i64, Matrix<F>>> {
        let field = self.source.field().clone();
        let x = &self.source;
        let y = &self.target;
        let lo = x.lo().min(y.lo() - 1);
        let hi = x.hi().max(y.hi());
        // Unknown blocks h_n for every n with X_n and Y_{n+1} nonzero.
        let mut offsets = BTreeMap::new();
        let mut nvars = 0usize;
        for n in lo..=hi {
            let size = y.dim(n + 1) * x.dim(n);
            if size > 0 {
                offsets.insert(n, nvars);
                nvars += size;
            }
        }
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        let mut rhs: Vec<F::Elem> = Vec::new();
        for n in lo..=hi {
            let (ry, cx) = (y.dim(n), x.dim(n));
            if ry == 0 || cx == 0 {
                continue;
            }
            let dy = y.d(n + 1); // Y_{n+1} → Y_n
            let dx = x.d(n); // X_n → X_{n-1}
            let f = self.comp(n);
            for i in 0..ry {
                for j in 0..cx {
                    let mut row = vec![field.zero(); nvars];
                    // (d_Y h_n)[i][j] = Σ_k dY[i][k] h_n[k][j]
                    if let Some(&off) = offsets.get(&n) {
                        for k in 0..y.dim(n + 1) {
                            row[off + k * cx + j] = dy.get(i, k).clone();
                        }
                    }
                    // (h_{n-1} d_X)[i][j] = Σ_k h_{n-1}[i][k] dX[k][j]
                    if let Some(&off) = offsets.get(&(n - 1)) {
                        let xc = x.dim(n - 1);
                        for k in 0..xc {
                            let idx = off + i * xc + k;
                            row[idx] = field.add(&row[idx], dx.get(k, j));
                        }
                    }
                    rows.push(row);
                    rhs.push(f.get(i, j).clone());
                }
            }
        }
        if nvars == 0 {
            return if self.is_zero() { Some(BTreeMap::new()) } else { None };
        }
        let a = Matrix::from_rows(&field, nvars, rows);
        let b = Matrix::from_columns(&field, rhs.len(), &[rhs]);
        let sol = a.solve(&b)?;
        let mut out = BTreeMap::new();
        for (&n, &off) in &offsets {
            let (r, c) = (y.dim(n + 1), x.dim(n));
            let m = Matrix::from_fn(&field, r, c, |i, j| sol.get(off + i * c + j, 0).clone());
            out.insert(n, m);
        }
        Some(out)
    }
}

/// The mapping cone with its canonical triangle maps.
pub struct Cone<F: Field> {
    /// `cone(f)_n = X_{n-1} ⊕ Y_n`.
    pub cone: ChainComplex<F>,
    /// `Y → cone(f)`, `y ↦ (0, y)`.
    pub inclusion: ChainMap<F>,
    /// `cone(f) → shift(X, 1)`, `(x, y) ↦ x`.
    pub projection: ChainMap<F>,
}

/// Mapping cone with differential `[[-d_X, 0], [-f, d_Y]]`.
pub fn cone<F: Field>(f: &ChainMap<F>) -> Result<Cone<F>> {
    let field = f.source().field().clone();
    let x = f.source();
    let y = f.target();
    if x.is_zero_complex() && y.is_zero_complex() {
        let z = ChainComplex::zero(&field);
        return Ok(Cone {
            cone: z.clone(),
            inclusion: ChainMap::zero(y, &z),
            projection: ChainMap::zero(&z, &x.shift(1)),
        });
    }
    let lo = if x.is_zero_complex() { y.lo() } else if y.is_zero_complex() { x.lo() + 1 } else { y.lo().min(x.lo() + 1) };
    let hi = if x.is_zero_complex() { y.hi() } else if y.is_zero_complex() { x.hi() + 1 } else { y.hi().max(x.hi() + 1) };
    let dims: Vec<usize> = (lo..=hi).map(|n| x.dim(n - 1) + y.dim(n)).collect();
    let diffs: Vec<Matrix<F>> = (lo + 1..=hi)
        .map(|n| {
            let (xs, ys) = (x.dim(n - 1), y.dim(n));
            let (xt, yt) = (x.dim(n - 2), y.dim(n - 1));
            let mut m = Matrix::zeros(&field, xt + yt, xs + ys);
            m.paste(0, 0, &x.d(n - 1).neg());
            m.paste(xt, 0, &f.comp(n - 1).neg());
            m.paste(xt, xs, &y.d(n));
            m
        })
        .collect();
    let c = ChainComplex::new_unchecked(&field, lo, dims, diffs);
    let sx = x.shift(1);
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for n in lo..=hi {
        let (xs, ys) = (x.dim(n - 1), y.dim(n));
        let mut i = Matrix::zeros(&field, xs + ys, ys);
        i.paste(xs, 0, &Matrix::identity(&field, ys));
        inc.insert(n, i);
        let mut p = Matrix::zeros(&field, xs, xs + ys);
        p.paste(0, 0, &Matrix::identity(&field, xs));
        proj.insert(n, p);
    }
    Ok(Cone {
        inclusion: ChainMap::new_unchecked(y.clone(), c.clone(), inc),
        projection: ChainMap::new_unchecked(c.clone(), sx, proj),
        cone: c,
    })
}

/// Homology dimensions of a complex (free-function form).
pub fn homology_dims<F: Field>(c: &ChainComplex<F>) -> Homology {
    c.homology()
}
