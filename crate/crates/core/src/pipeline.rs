//! The equivalence between diagrams on `A_n` and the staircase subcategory
//! `A(n,2)` of diagrams on `A_tilde(n,2)`, executed as a chain of
//! restrictions and homotopy Kan extensions; the straightening of a member
//! into a strict complex of `kA_n/I`-representations; the mesh-window
//! construction with its commutativity checks; and the comparison of the
//! staircase backbone with the cofibers of a filtration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::bar::hocolim;
use crate::diagram::squares::{is_bicartesian, SquareRef};
use crate::diagram::{diagram_qis, kan_extend, restrict, same_signature, Diagram, DiagramMap, HomologySignature, KanSide};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homalg::{cone, direct_sum, ChainComplex, ChainMap, Homology};
use crate::membership::{a_n2_spec, is_member, k_spec, mesh_ex_spec, MembershipReport, SubderivatorSpec};
use crate::poset::connectors::{b_label, b_map, i_map, i_mesh, j_image_range, j_label, j_map, DoldKanIndex};
use crate::poset::shapes::{a_n, a_tilde, interval, k_shape, MeshWindow};
use crate::poset::{FinPoset, Label, MonotoneMap};

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

/// Which functor a plan step applies along its map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StepKind {
    /// Restriction `u*`.
    Restrict,
    /// Left homotopy Kan extension `u_!`.
    KanLeft,
    /// Right homotopy Kan extension `u_*`.
    KanRight,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Restrict => "restrict",
            StepKind::KanLeft => "kan_left",
            StepKind::KanRight => "kan_right",
        })
    }
}

/// Direction of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// From `A_n` to the staircase `A_tilde(n,2)`.
    ToStaircase,
    /// From the staircase back to `A_n`.
    ToAn,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ToStaircase => "to_A(n,2)",
            Direction::ToAn => "to_A_n",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "to_A(n,2)" | "to-staircase" | "gn" => Ok(Direction::ToStaircase),
            "to_A_n" | "to-an" | "in" => Ok(Direction::ToAn),
            other => Err(Error::Schema(format!("unknown plan direction \"{other}\""))),
        }
    }
}

/// One step of a plan: the functor, the map it acts along, and the spec its
/// output must satisfy.
#[derive(Clone, Debug)]
pub struct PlanStep {
    /// Functor kind.
    pub kind: StepKind,
    /// The connector.
    pub map: MonotoneMap,
    /// Conditions on the step's output.
    pub expected: SubderivatorSpec,
}

impl PlanStep {
    /// Shape of the step's input.
    pub fn input_shape(&self) -> &Arc<FinPoset> {
        match self.kind {
            StepKind::Restrict => self.map.target(),
            StepKind::KanLeft | StepKind::KanRight => self.map.source(),
        }
    }

    /// Shape of the step's output.
    pub fn output_shape(&self) -> &Arc<FinPoset> {
        match self.kind {
            StepKind::Restrict => self.map.source(),
            StepKind::KanLeft | StepKind::KanRight => self.map.target(),
        }
    }

    /// Applies the step.
    pub fn apply<F: Field>(&self, x: &Diagram<F>) -> Result<Diagram<F>> {
        let x = x.with_shape(self.input_shape().clone())?;
        match self.kind {
            StepKind::Restrict => restrict(&self.map, &x),
            StepKind::KanLeft => kan_extend(KanSide::Left, &self.map, &x),
            StepKind::KanRight => kan_extend(KanSide::Right, &self.map, &x),
        }
    }
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.map.name())
    }
}

/// The composite of restrictions and Kan extensions realizing one direction
/// of the equivalence.
///
/// For `n = 3` the level-one chain ends on `K(3,1,4)`, a three-element chain
/// identified with `A_3` by `identification`; the plan's steps stop at
/// `K(3,1,4)` (resp. start there) and the runner transports along the
/// identification.
#[derive(Clone, Debug)]
pub struct PipelinePlan {
    /// The parameter `n ≥ 3`.
    pub n: usize,
    /// Direction.
    pub direction: Direction,
    /// The steps, in execution order.
    pub steps: Vec<PlanStep>,
    /// For `n = 3`: the isomorphism `K(3,1,4) → A_3`.
    pub identification: Option<MonotoneMap>,
}

impl fmt::Display for PipelinePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "plan(n={}, {}): {} steps", self.n, self.direction, self.steps.len())?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "  {:>2}. {:<24} {} → {}", i + 1, s.to_string(), s.input_shape().name(), s.output_shape().name())?;
        }
        if let Some(u) = &self.identification {
            writeln!(f, "  identification {}: {} ≅ {}", u.name(), u.source().name(), u.target().name())?;
        }
        Ok(())
    }
}

/// The isomorphism `K(3,1,4) → A_3`: `(1,0) ↦ 1`, `(1,1) ↦ 2`, `(2,1) ↦ 3`.
pub fn identification_k314() -> Result<MonotoneMap> {
    MonotoneMap::from_fn("ident(3)", Arc::new(k_shape(3, 1, 4)?), Arc::new(a_n(3)?), |l| {
        Ok(match l.coords() {
            Some([1, 0]) => Label::int(1),
            Some([1, 1]) => Label::int(2),
            Some([2, 1]) => Label::int(3),
            _ => return Err(Error::UnknownObject(format!("{l} in K(3,1,4)"))),
        })
    })
}

fn step(kind: StepKind, n: usize, l: usize, m: usize) -> Result<PlanStep> {
    let map = i_map(n, l, m)?;
    let out = match kind {
        StepKind::Restrict => map.source().clone(),
        _ => map.target().clone(),
    };
    let expected = expected_spec(n, &out)?;
    Ok(PlanStep { kind, map, expected })
}

/// The spec an intermediate on `shape` must satisfy: `K(n,l,m)` for the
/// pipeline shapes (with `K(n,1,1)` read as `A(n,2)`), nothing on `A_n`.
fn expected_spec(n: usize, shape: &Arc<FinPoset>) -> Result<SubderivatorSpec> {
    if **shape == a_n(n)? {
        return Ok(SubderivatorSpec::trivial(shape.clone()));
    }
    if **shape == a_tilde(n)? {
        return a_n2_spec(n);
    }
    let name = shape.name().to_string();
    let params: Vec<usize> = name
        .trim_start_matches('K')
        .trim_start_matches(['(', '~'])
        .trim_end_matches(')')
        .split(',')
        .filter_map(|s| s.trim().parse().ok())
        .collect();
    match params.as_slice() {
        [nn, l, m] if *nn == n && **shape == k_shape(n, *l, *m)? => k_spec(n, *l, *m),
        _ => Err(Error::InvalidShape(format!("no pipeline spec for shape {name}"))),
    }
}

/// The step list of one direction of the equivalence.
pub fn plan(n: usize, direction: Direction) -> Result<PipelinePlan> {
    if n < 3 {
        return Err(Error::InvalidShape(format!("the pipeline needs n ≥ 3, got {n}")));
    }
    use StepKind::*;
    let mut steps = Vec::new();
    match direction {
        Direction::ToAn => {
            for l in 1..=n - 2 {
                if l == 2 {
                    steps.push(step(Restrict, n, 1, 4)?);
                } else if l > 2 {
                    steps.push(step(Restrict, n, l - 1, 5)?);
                }
                steps.push(step(KanLeft, n, l, 1)?);
                steps.push(step(Restrict, n, l, 2)?);
                steps.push(step(Restrict, n, l, 3)?);
                if l >= 2 {
                    steps.push(step(KanLeft, n, l, 4)?);
                }
            }
            if n >= 4 {
                steps.push(step(KanLeft, n, n - 2, 5)?);
            }
        }
        Direction::ToStaircase => {
            if n >= 4 {
                steps.push(step(Restrict, n, n - 2, 5)?);
            }
            for l in (1..=n - 2).rev() {
                if l >= 2 {
                    steps.push(step(Restrict, n, l, 4)?);
                }
                steps.push(step(KanLeft, n, l, 3)?);
                steps.push(step(KanRight, n, l, 2)?);
                steps.push(step(Restrict, n, l, 1)?);
                if l == 2 {
                    steps.push(step(KanLeft, n, 1, 4)?);
                } else if l > 2 {
                    steps.push(step(KanLeft, n, l - 1, 5)?);
                }
            }
        }
    }
    if let Some(last) = steps.last_mut() {
        if direction == Direction::ToStaircase {
            last.expected = a_n2_spec(n)?;
        }
    }
    let identification = if n == 3 { Some(identification_k314()?) } else { None };
    Ok(PipelinePlan { n, direction, steps, identification })
}

// ---------------------------------------------------------------------------
// Running plans
// ---------------------------------------------------------------------------

/// One executed step with its output and, in audit mode, the membership
/// report of the output against the step's expected spec.
#[derive(Clone, Debug)]
pub struct StepOutcome<F: Field> {
    /// `"kan_left i(4,1,1)"` etc.
    pub step: String,
    /// The step's output.
    pub output: Diagram<F>,
    /// Audit report.
    pub report: Option<MembershipReport>,
}

/// Output of a plan run together with every intermediate.
#[derive(Clone, Debug)]
pub struct PipelineRun<F: Field> {
    /// Final diagram (on `A_tilde(n,2)` or `A_n`).
    pub output: Diagram<F>,
    /// Per-step outcomes.
    pub trace: Vec<StepOutcome<F>>,
}

fn run_plan<F: Field>(plan: &PipelinePlan, x: &Diagram<F>, audit: bool) -> Result<PipelineRun<F>> {
    let mut cur = x.clone();
    if plan.direction == Direction::ToStaircase {
        if let Some(u) = &plan.identification {
            cur = restrict(u, &cur)?;
        }
    }
    let mut trace = Vec::new();
    for s in &plan.steps {
        cur = s.apply(&cur)?;
        let report = if audit {
            let cur_on_spec = cur.with_shape(s.expected.shape().clone())?;
            let r = is_member(&s.expected, &cur_on_spec, false)?;
            if !r.pass {
                return Err(Error::PropertyViolation(format!(
                    "after `{s}` the intermediate fails {}: {}",
                    s.expected.name(),
                    r.failures().iter().map(|c| format!("{} {} {}", c.kind, c.subject, c.homology)).collect::<Vec<_>>().join("; ")
                )));
            }
            Some(r)
        } else {
            None
        };
        trace.push(StepOutcome { step: s.to_string(), output: cur.clone(), report });
    }
    let output = match plan.direction {
        Direction::ToStaircase => cur.with_shape(Arc::new(a_tilde(plan.n)?))?,
        Direction::ToAn => match &plan.identification {
            Some(u) => cur.relabel(u)?,
            None => cur.with_shape(Arc::new(a_n(plan.n)?))?,
        },
    };
    Ok(PipelineRun { output, trace })
}

/// The interval module of `kA_n` supported on `[a, b]` (1-based,
/// inclusive): `k` in degree 0 at every vertex of the interval, identities
/// between them, zero elsewhere.
pub fn interval_module<F: Field>(field: &F, n: usize, a: usize, b: usize) -> Result<Diagram<F>> {
    if a == 0 || a > b || b > n {
        return Err(Error::InvalidShape(format!("[{a},{b}] is not an interval of 1..={n}")));
    }
    let shape = Arc::new(a_n(n)?);
    let k = ChainComplex::concentrated(field, 0, 1);
    let values: Vec<ChainComplex<F>> =
        (1..=n).map(|i| if a <= i && i <= b { k.clone() } else { ChainComplex::zero(field) }).collect();
    let mut arrows = BTreeMap::new();
    for &(p, q) in shape.covers() {
        if values[p].total_dim() > 0 && values[q].total_dim() > 0 {
            arrows.insert((p, q), ChainMap::identity(&k));
        }
    }
    Diagram::from_cover_map(field, shape, values, arrows)
}

/// `G^n`: from `A_n` to the staircase, with every intermediate optionally
/// audited against its spec (a failed audit is a property violation).
pub fn g_n_traced<F: Field>(n: usize, x: &Diagram<F>, audit: bool) -> Result<PipelineRun<F>> {
    let p = plan(n, Direction::ToStaircase)?;
    if **x.shape() != a_n(n)? {
        return Err(Error::ShapeMismatch(format!("g_n({n}) needs a diagram on A_{n}, got {}", x.shape().name())));
    }
    run_plan(&p, x, audit)
}

/// `G^n` without auditing.
pub fn g_n<F: Field>(n: usize, x: &Diagram<F>) -> Result<Diagram<F>> {
    Ok(g_n_traced(n, x, false)?.output)
}

/// `G^n` applied to a diagram map `f : X → Y` on `A_n`: the plan is run
/// on the arrow diagram of `f` along every connector times `[1]`, which
/// evaluates slice by slice to `G^n X → G^n Y`.
pub fn g_n_map<F: Field>(n: usize, f: &DiagramMap<F>) -> Result<DiagramMap<F>> {
    let p = plan(n, Direction::ToStaircase)?;
    if **f.source().shape() != a_n(n)? {
        return Err(Error::ShapeMismatch(format!("g_n({n}) needs a map on A_{n}, got {}", f.source().shape().name())));
    }
    let i1 = Arc::new(interval(1));
    let mut cur = f.to_arrow_diagram()?;
    if let Some(u) = &p.identification {
        cur = restrict(&u.times_identity(&i1)?, &cur)?;
    }
    for s in &p.steps {
        let u = s.map.times_identity(&i1)?;
        let input = match s.kind {
            StepKind::Restrict => u.target(),
            StepKind::KanLeft | StepKind::KanRight => u.source(),
        };
        let x = cur.with_shape(input.clone())?;
        cur = match s.kind {
            StepKind::Restrict => restrict(&u, &x)?,
            StepKind::KanLeft => kan_extend(KanSide::Left, &u, &x)?,
            StepKind::KanRight => kan_extend(KanSide::Right, &u, &x)?,
        };
    }
    DiagramMap::from_arrow_diagram(&Arc::new(a_tilde(n)?), &cur)
}

/// `i^n`: from a member of `A(n,2)` back to `A_n`.  A non-member input is a
/// user error.
pub fn i_n_traced<F: Field>(n: usize, y: &Diagram<F>, audit: bool) -> Result<PipelineRun<F>> {
    let p = plan(n, Direction::ToAn)?;
    let spec = a_n2_spec(n)?;
    if **y.shape() != **spec.shape() {
        return Err(Error::ShapeMismatch(format!("i_n({n}) needs a diagram on A_tilde({n},2), got {}", y.shape().name())));
    }
    let y = y.with_shape(spec.shape().clone())?;
    let r = is_member(&spec, &y, false)?;
    if !r.pass {
        return Err(Error::Membership(format!("input is not in {}:\n{r}", spec.name())));
    }
    run_plan(&p, &y, audit)
}

/// `i^n` without auditing.
pub fn i_n_functor<F: Field>(n: usize, y: &Diagram<F>) -> Result<Diagram<F>> {
    Ok(i_n_traced(n, y, false)?.output)
}

/// Isomorphism test for two members of `A(n,2)`: equal homology signatures
/// on the staircase and, after `i^n`, on `A_n` (where signatures are a
/// complete invariant).
pub fn same_member<F: Field>(n: usize, y1: &Diagram<F>, y2: &Diagram<F>) -> Result<bool> {
    Ok(same_signature(y1, y2)? && same_signature(&i_n_functor(n, y1)?, &i_n_functor(n, y2)?)?)
}

// ---------------------------------------------------------------------------
// Straightening
// ---------------------------------------------------------------------------

/// A complex of representations of `A_n` with the relations
/// `α_{i+1} α_i = 0`.
#[derive(Clone, Debug)]
pub struct QuiverComplex<F: Field> {
    /// Number of vertices.
    pub n: usize,
    /// `C_0, …, C_{n−1}`.
    pub vertices: Vec<ChainComplex<F>>,
    /// `α_i : C_i → C_{i+1}`.
    pub maps: Vec<ChainMap<F>>,
}

impl<F: Field> QuiverComplex<F> {
    /// Indices `i` where `α_{i+1} ∘ α_i` is not literally zero.
    pub fn relation_failures(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..self.maps.len().saturating_sub(1) {
            if !self.maps[i + 1].compose(&self.maps[i])?.is_zero() {
                out.push(i);
            }
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for QuiverComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.vertices.iter().enumerate() {
            write!(f, "C_{i}: dims {:?} H {}", c.dim_table(), c.homology())?;
            if let Some(a) = self.maps.get(i) {
                write!(f, "  α_{i} ranks on H: {:?}", c.degrees().map(|d| a.homology_rank(d)).collect::<Vec<_>>())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of [`straighten`]: the strict complex and the zigzag
/// `Y ← Y' → Y''` of pointwise quasi-isomorphisms, where `Y''` is the
/// complex viewed as a staircase diagram with literal zeros at the
/// vanishing slots.
#[derive(Clone, Debug)]
pub struct Straightening<F: Field> {
    /// The strict complex.
    pub quiver: QuiverComplex<F>,
    /// `Y' → Y`: projection off the padding.
    pub padding_leg: DiagramMap<F>,
    /// `Y' → Y''`: the comparison onto the strict diagram.
    pub straight_leg: DiagramMap<F>,
}

/// Staircase bookkeeping: backbone `B_j` and vanishing slots `A_i`.
struct Staircase {
    n: usize,
    shape: Arc<FinPoset>,
    /// Shape index of `B_j`, `j = 0..n`.
    b: Vec<usize>,
    /// Shape index of `A_i`, `i = 0..n−2`.
    a: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    B(usize),
    A(usize),
}

impl Staircase {
    fn new(n: usize) -> Result<Self> {
        let shape = Arc::new(a_tilde(n)?);
        let idx = DoldKanIndex::new(n)?;
        let mut b = vec![0; n];
        let mut a = vec![0; n - 2];
        for (i, l) in shape.objects().iter().enumerate() {
            match idx.degree(l)? {
                // Degree n−1−j for B_j.
                Some(d) => b[(n as i64 - 1 - d) as usize] = i,
                None => a[l.coords().expect("staircase labels are pairs")[0] as usize] = i,
            }
        }
        Ok(Self { n, shape, b, a })
    }

    fn slot(&self, i: usize) -> Slot {
        if let Some(j) = self.b.iter().position(|&x| x == i) {
            Slot::B(j)
        } else {
            Slot::A(self.a.iter().position(|&x| x == i).expect("every object is a slot"))
        }
    }

    fn has_a(&self, i: i64) -> bool {
        i >= 0 && i <= self.n as i64 - 3
    }
}

/// Block structure of a direct sum indexed by tags.
struct Blocks<F: Field> {
    tags: Vec<Slot>,
    sum: crate::homalg::DirectSum<F>,
}

impl<F: Field> Blocks<F> {
    fn new(field: &F, parts: Vec<(Slot, ChainComplex<F>)>) -> Result<Self> {
        let (tags, cs): (Vec<Slot>, Vec<ChainComplex<F>>) = parts.into_iter().unzip();
        Ok(Self { tags, sum: direct_sum(field, &cs)? })
    }

    fn pos(&self, t: Slot) -> Option<usize> {
        self.tags.iter().position(|&x| x == t)
    }

    fn complex(&self) -> &ChainComplex<F> {
        &self.sum.sum
    }
}

/// `Σ ι_t ∘ m ∘ π_s` over the entries whose blocks exist.
fn block_map<F: Field>(src: &Blocks<F>, tgt: &Blocks<F>, entries: Vec<(Slot, Slot, ChainMap<F>)>) -> Result<ChainMap<F>> {
    let mut acc = ChainMap::zero(src.complex(), tgt.complex());
    for (t, s, m) in entries {
        let (Some(ti), Some(si)) = (tgt.pos(t), src.pos(s)) else { continue };
        let term = tgt.sum.injections[ti].compose(&m)?.compose(&src.sum.projections[si])?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

fn bug(context: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::PropertyViolation(_) => e,
        other => Error::PropertyViolation(format!("{context}: {other}")),
    }
}

/// Straightens a member `Y` of `A(n,2)` into a strict complex of
/// `kA_n/I`-representations.
///
/// Writing `B_j` for the backbone values, `A_i` for the acyclic slots and
/// `β, f, g, a` for the structure maps `B_j → B_{j+1}`, `B_i → A_i`,
/// `A_i → B_{i+2}`, `A_i → A_{i+1}`, the strict complex is
/// `C_j = B_j ⊕ A_{j−1}` with
/// `α_j = [[β_j, −g_{j−1}], [f_j, −a_{j−1}]]`; the strictness of `Y` makes
/// every `α_{j+1} α_j` vanish on the nose.  The zigzag goes through the
/// padding `Y'(B_j) = B_j ⊕ A_{j−1} ⊕ A_{j−2}`, `Y'(A_i) = A_i`, whose
/// arrow `A_i → B_{i+2}` is the column `(g_i; a_i; 1)`; the leg to `Y''` is
/// `[[1, 0, −g_{j−2}], [0, 1, −a_{j−2}]]` and the leg to `Y` projects onto
/// `B_j`.  Blocks for slots that do not exist are omitted.
pub fn straighten<F: Field>(n: usize, y: &Diagram<F>) -> Result<Straightening<F>> {
    let spec = a_n2_spec(n)?;
    if **y.shape() != **spec.shape() {
        return Err(Error::ShapeMismatch(format!("straighten({n}) needs a diagram on A_tilde({n},2)")));
    }
    let y = y.with_shape(spec.shape().clone())?;
    let r = is_member(&spec, &y, false)?;
    if !r.pass {
        return Err(Error::Membership(format!("input is not in {}:\n{r}", spec.name())));
    }
    let st = Staircase::new(n)?;
    let field = y.field().clone();
    let shape = st.shape.clone();
    let bv = |j: usize| y.value(st.b[j]).clone();
    let av = |i: usize| y.value(st.a[i]).clone();
    let beta = |j: usize| y.map(st.b[j], st.b[j + 1]);
    let f_ = |i: usize| y.map(st.b[i], st.a[i]);
    let g_ = |i: usize| y.map(st.a[i], st.b[i + 2]);
    let a_ = |i: usize| y.map(st.a[i], st.a[i + 1]);
    let ji = |j: usize, k: i64| j as i64 - k;

    // Padded and strict block structures.
    let mut padded = Vec::new();
    let mut strict = Vec::new();
    for idx in 0..shape.len() {
        match st.slot(idx) {
            Slot::B(j) => {
                let mut p = vec![(Slot::B(j), bv(j))];
                let mut s = vec![(Slot::B(j), bv(j))];
                if st.has_a(ji(j, 1)) {
                    p.push((Slot::A(j - 1), av(j - 1)));
                    s.push((Slot::A(j - 1), av(j - 1)));
                }
                if st.has_a(ji(j, 2)) {
                    p.push((Slot::A(j - 2), av(j - 2)));
                }
                padded.push(Blocks::new(&field, p)?);
                strict.push(Blocks::new(&field, s)?);
            }
            Slot::A(i) => {
                padded.push(Blocks::new(&field, vec![(Slot::A(i), av(i))])?);
                strict.push(Blocks::new(&field, vec![])?);
            }
        }
    }
    let id = |c: ChainComplex<F>| ChainMap::identity(&c);

    // Structure maps of Y' and Y''.
    let mut arrows_p = BTreeMap::new();
    let mut arrows_s = BTreeMap::new();
    for &(u, v) in shape.covers() {
        let (sp, tp) = (&padded[u], &padded[v]);
        let (ss, ts) = (&strict[u], &strict[v]);
        match (st.slot(u), st.slot(v)) {
            (Slot::B(j), Slot::B(k)) if k == j + 1 => {
                let mut e = vec![(Slot::B(k), Slot::B(j), beta(j)?)];
                if st.has_a(j as i64) {
                    e.push((Slot::A(j), Slot::B(j), f_(j)?));
                }
                if st.has_a(ji(j, 1)) {
                    e.push((Slot::A(j - 1), Slot::A(j - 1), id(av(j - 1))));
                }
                arrows_p.insert((u, v), block_map(sp, tp, e)?);
                let mut e = vec![(Slot::B(k), Slot::B(j), beta(j)?)];
                if st.has_a(ji(j, 1)) {
                    e.push((Slot::B(k), Slot::A(j - 1), g_(j - 1)?.neg()));
                }
                if st.has_a(j as i64) {
                    e.push((Slot::A(j), Slot::B(j), f_(j)?));
                    if st.has_a(ji(j, 1)) {
                        e.push((Slot::A(j), Slot::A(j - 1), a_(j - 1)?.neg()));
                    }
                }
                arrows_s.insert((u, v), block_map(ss, ts, e)?);
            }
            (Slot::B(j), Slot::A(i)) if i == j => {
                arrows_p.insert((u, v), block_map(sp, tp, vec![(Slot::A(i), Slot::B(j), f_(i)?)])?);
            }
            (Slot::A(i), Slot::B(k)) if k == i + 2 => {
                let mut e = vec![(Slot::B(k), Slot::A(i), g_(i)?), (Slot::A(i), Slot::A(i), id(av(i)))];
                if st.has_a(i as i64 + 1) {
                    e.push((Slot::A(i + 1), Slot::A(i), a_(i)?));
                }
                arrows_p.insert((u, v), block_map(sp, tp, e)?);
            }
            (Slot::A(i), Slot::A(k)) if k == i + 1 => {
                arrows_p.insert((u, v), block_map(sp, tp, vec![(Slot::A(k), Slot::A(i), a_(i)?)])?);
            }
            (s, t) => {
                return Err(Error::PropertyViolation(format!("unexpected staircase cover {s:?} → {t:?}")));
            }
        }
    }
    let values_p: Vec<ChainComplex<F>> = padded.iter().map(|b| b.complex().clone()).collect();
    let values_s: Vec<ChainComplex<F>> = strict.iter().map(|b| b.complex().clone()).collect();
    let yp = Diagram::from_cover_map(&field, shape.clone(), values_p, arrows_p).map_err(bug("padded diagram"))?;
    let ys = Diagram::from_cover_map(&field, shape.clone(), values_s, arrows_s).map_err(bug("strict diagram"))?;

    // The two legs.
    let mut comps_proj = Vec::new();
    let mut comps_straight = Vec::new();
    for idx in 0..shape.len() {
        match st.slot(idx) {
            Slot::B(j) => {
                comps_proj.push(padded[idx].sum.projections[0].clone());
                let mut e = vec![(Slot::B(j), Slot::B(j), id(bv(j)))];
                if st.has_a(ji(j, 1)) {
                    e.push((Slot::A(j - 1), Slot::A(j - 1), id(av(j - 1))));
                }
                if st.has_a(ji(j, 2)) {
                    e.push((Slot::B(j), Slot::A(j - 2), g_(j - 2)?.neg()));
                    if st.has_a(ji(j, 1)) {
                        e.push((Slot::A(j - 1), Slot::A(j - 2), a_(j - 2)?.neg()));
                    }
                }
                comps_straight.push(block_map(&padded[idx], &strict[idx], e)?);
            }
            Slot::A(_) => {
                comps_proj.push(ChainMap::identity(padded[idx].complex()));
                comps_straight.push(ChainMap::zero(padded[idx].complex(), strict[idx].complex()));
            }
        }
    }
    let padding_leg = DiagramMap::new(yp.clone(), y.clone(), comps_proj).map_err(bug("padding leg"))?;
    let straight_leg = DiagramMap::new(yp, ys.clone(), comps_straight).map_err(bug("straightening leg"))?;
    for (name, leg) in [("padding", &padding_leg), ("straightening", &straight_leg)] {
        if !diagram_qis(leg)? {
            return Err(Error::PropertyViolation(format!("the {name} leg is not a pointwise quasi-isomorphism")));
        }
    }
    let vertices: Vec<ChainComplex<F>> = (0..n).map(|j| ys.value(st.b[j]).clone()).collect();
    let maps: Vec<ChainMap<F>> = (0..n - 1).map(|j| ys.map(st.b[j], st.b[j + 1])).collect::<Result<_>>()?;
    let quiver = QuiverComplex { n, vertices, maps };
    let bad = quiver.relation_failures()?;
    if !bad.is_empty() {
        return Err(Error::PropertyViolation(format!("relations α_(i+1) α_i ≠ 0 for i in {bad:?}")));
    }
    Ok(Straightening { quiver, padding_leg, straight_leg })
}

// ---------------------------------------------------------------------------
// Mesh window
// ---------------------------------------------------------------------------

/// Stage (0–4) at which a mesh object enters the construction:
/// 0 the image of `A_n`; 1 the zero rows `(k,n+1)`, `k ≥ 0` and `(k,0)`,
/// `k > 0`; 2 the interior `k > 0`; 3 the remaining zero rows; 4 the
/// interior `k < 0`.
fn mesh_stage(n: usize, l: &Label) -> usize {
    let c = l.coords().expect("mesh labels are pairs");
    let (k, r) = (c[0], c[1]);
    let top = n as i64 + 1;
    let interior = (1..=n as i64).contains(&r);
    if k == 0 && interior {
        0
    } else if (k >= 0 && r == top) || (k > 0 && r == 0) {
        1
    } else if k > 0 && interior {
        2
    } else if (k < 0 && r == top) || (k <= 0 && r == 0) {
        3
    } else {
        4
    }
}

/// A diagram on a mesh window obtained from an `A_n` diagram by the four
/// Kan-extension stages.
#[derive(Clone, Debug)]
pub struct MeshBuild<F: Field> {
    /// The window.
    pub window: MeshWindow,
    /// The diagram on the window.
    pub diagram: Diagram<F>,
    /// Positions whose value could depend on objects outside the window.
    pub unverified: Vec<Label>,
}

/// `true` if the nerve of the full subposet on `set` has the homology of a
/// point (with a fast path for sets with a greatest or least element).
fn nerve_is_contractible<F: Field>(field: &F, p: &Arc<FinPoset>, set: &[usize]) -> Result<bool> {
    if set.is_empty() {
        return Ok(false);
    }
    let cone_point = |up: bool| set.iter().any(|&m| set.iter().all(|&x| if up { p.leq(x, m) } else { p.leq(m, x) }));
    if cone_point(true) || cone_point(false) {
        return Ok(true);
    }
    let (sub, _) = p.full_subposet("nerve", set);
    let k = ChainComplex::concentrated(field, 0, 1);
    let h = hocolim(&Diagram::constant(field, sub, &k))?.homology();
    Ok(h == Homology(BTreeMap::from([(0, 1)])))
}

/// Runs the four stages on the window.  The fourth stage takes homotopy
/// limits over slices that leave the window; a position is verified when
/// the truncated slice is homotopy initial in the untruncated one, which is
/// decided exactly by testing the comparison posets for every object up to
/// `n + 1` columns beyond the window (farther objects see the whole
/// truncated slice).
pub fn mesh_build<F: Field>(n: usize, x: &Diagram<F>, window: MeshWindow) -> Result<MeshBuild<F>> {
    if **x.shape() != a_n(n)? {
        return Err(Error::ShapeMismatch(format!("mesh_build({n}) needs a diagram on A_{n}")));
    }
    if window.n != n {
        return Err(Error::InvalidShape(format!("window is for M_{}, expected M_{n}", window.n)));
    }
    let (jmin, jmax) = j_image_range(n)?;
    let (need_lo, need_hi) = (jmin.min(0) - 1, jmax.max(0) + 1);
    if window.kmin > need_lo || window.kmax < need_hi {
        return Err(Error::WindowTooSmall(format!(
            "mesh({n},{},{}) must contain [{need_lo},{need_hi}] (the images of j and i with one column of margin)",
            window.kmin, window.kmax
        )));
    }
    let w = Arc::new(window.poset());
    let stages: Vec<usize> = w.objects().iter().map(|l| mesh_stage(n, l)).collect();
    let sub = |s: usize| -> Arc<FinPoset> {
        let set: Vec<usize> = (0..w.len()).filter(|&i| stages[i] <= s).collect();
        if set.len() == w.len() {
            return w.clone();
        }
        w.full_subposet(&format!("S{s}"), &set).0
    };
    let subs: Vec<Arc<FinPoset>> = (1..=4).map(sub).collect();
    let incl = |a: &Arc<FinPoset>, b: &Arc<FinPoset>, name: &str| MonotoneMap::from_fn(name, a.clone(), b.clone(), |l| Ok(l.clone()));
    let s1 = MonotoneMap::from_fn("s1", x.shape().clone(), subs[0].clone(), |l| Ok(Label::pair(0, l.coords().expect("A_n labels")[0])))?;
    let d1 = kan_extend(KanSide::Right, &s1, x)?;
    let d2 = kan_extend(KanSide::Left, &incl(&subs[0], &subs[1], "s2")?, &d1)?;
    let d3 = kan_extend(KanSide::Left, &incl(&subs[1], &subs[2], "s3")?, &d2)?;
    let d4 = kan_extend(KanSide::Right, &incl(&subs[2], &subs[3], "s4")?, &d3)?;

    // Verification of the fourth stage.
    let field = x.field().clone();
    let mut unverified = Vec::new();
    let ni = n as i64;
    for (bi, bl) in w.objects().iter().enumerate() {
        if stages[bi] != 4 {
            continue;
        }
        let slice: Vec<usize> = (0..w.len()).filter(|&a| stages[a] <= 3 && w.leq(bi, a)).collect();
        let mut ok = true;
        'outer: for kq in window.kmax + 1..=window.kmax + ni + 1 {
            for lq in 0..=ni + 1 {
                let q = Label::pair(kq, lq);
                let below: Vec<usize> = slice.iter().copied().filter(|&a| crate::poset::shapes::mesh_leq(w.label(a), &q)).collect();
                if !crate::poset::shapes::mesh_leq(bl, &q) {
                    continue;
                }
                if !nerve_is_contractible(&field, &w, &below)? {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if !ok {
            unverified.push(bl.clone());
        }
    }
    Ok(MeshBuild { window, diagram: d4.with_shape(w)?, unverified })
}

/// Report of [`mesh_build_and_check`].
#[derive(Clone, Debug, Serialize)]
pub struct MeshReport {
    /// `n`.
    pub n: usize,
    /// Window bounds.
    pub window: (i64, i64),
    /// Positions reported unverified.
    pub unverified: Vec<String>,
    /// The zero rows are acyclic.
    pub vanishing_rows: bool,
    /// Number of squares with all corners verified that were tested.
    pub squares_checked: usize,
    /// Tested squares that are not bicartesian.
    pub squares_failed: Vec<String>,
    /// Squares skipped because a corner is unverified.
    pub squares_unverified: usize,
    /// Restriction along `i_n` has the homology signature of `X`.
    pub recovers_input: bool,
    /// Restriction along `j^n` is a member of `A(n,2)` isomorphic to `G^n X`.
    pub triangle_commutes: bool,
    /// Differences found in the triangle comparison.
    pub triangle_notes: Vec<String>,
    /// Overall verdict.
    pub pass: bool,
}

impl fmt::Display for MeshReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(f, "mesh M_{} window [{}, {}]", self.n, self.window.0, self.window.1)?;
        writeln!(f, "  unverified positions: {}", if self.unverified.is_empty() { "none".into() } else { self.unverified.join(" ") })?;
        writeln!(f, "  vanishing rows acyclic: {}", v(self.vanishing_rows))?;
        writeln!(
            f,
            "  bicartesian squares: {}/{} ({} skipped as unverified)",
            self.squares_checked - self.squares_failed.len(),
            self.squares_checked,
            self.squares_unverified
        )?;
        for s in &self.squares_failed {
            writeln!(f, "    not bicartesian: {s}")?;
        }
        writeln!(f, "  i-restriction recovers X: {}", v(self.recovers_input))?;
        writeln!(f, "  j-restriction ≃ G^n X: {}", v(self.triangle_commutes))?;
        for s in &self.triangle_notes {
            writeln!(f, "    {s}")?;
        }
        write!(f, "  verdict: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Builds the mesh diagram of `X` on `[kmin, kmax]` and checks the zero
/// rows, the mesh squares, the recovery of `X` along `i_n` and the
/// comparison of the `j^n`-restriction with `G^n X`.
pub fn mesh_build_and_check<F: Field>(n: usize, x: &Diagram<F>, kmin: i64, kmax: i64) -> Result<MeshReport> {
    let window = MeshWindow::new(n, kmin, kmax)?;
    let mb = mesh_build(n, x, window)?;
    let m = &mb.diagram;
    let spec = mesh_ex_spec(window)?;
    let unverified: std::collections::HashSet<&Label> = mb.unverified.iter().collect();
    let vanishing_rows = spec.vanishing().iter().all(|l| m.value_at(l).map(|c| c.is_acyclic()).unwrap_or(false));
    let mut squares_checked = 0;
    let mut squares_failed = Vec::new();
    let mut squares_unverified = 0;
    for sq in spec.bicartesian() {
        if sq.corners.iter().any(|c| unverified.contains(c)) {
            squares_unverified += 1;
            continue;
        }
        squares_checked += 1;
        if !is_bicartesian(sq, m, false)? {
            squares_failed.push(sq.to_string());
        }
    }
    let back = restrict(&i_mesh(n, window)?, m)?.with_shape(x.shape().clone())?;
    let recovers_input = same_signature(&back, x)?;
    let j = j_map(n, window)?;
    let mut triangle_notes = Vec::new();
    let j_unverified: Vec<String> =
        j.source().objects().iter().map(|l| j.apply(l)).collect::<Result<Vec<_>>>()?.into_iter().filter(|l| unverified.contains(l)).map(|l| l.to_string()).collect();
    if !j_unverified.is_empty() {
        triangle_notes.push(format!("j-image positions unverified: {}", j_unverified.join(" ")));
    }
    let yj = restrict(&j, m)?;
    let gx = g_n(n, x)?;
    let member = is_member(&a_n2_spec(n)?, &yj, false)?;
    if !member.pass {
        triangle_notes.push(format!("j-restriction is not in A({n},2)"));
    }
    let direct = HomologySignature::of(&yj)?.differences(&HomologySignature::of(&gx)?);
    triangle_notes.extend(direct.into_iter().map(|d| format!("staircase: {d}")));
    if member.pass {
        let via = HomologySignature::of(&i_n_functor(n, &yj)?)?.differences(&HomologySignature::of(x)?);
        triangle_notes.extend(via.into_iter().map(|d| format!("after i_n: {d}")));
    }
    let triangle_commutes = triangle_notes.is_empty();
    let pass = vanishing_rows && squares_failed.is_empty() && recovers_input && triangle_commutes;
    Ok(MeshReport {
        n,
        window: (kmin, kmax),
        unverified: mb.unverified.iter().map(|l| l.to_string()).collect(),
        vanishing_rows,
        squares_checked,
        squares_failed,
        squares_unverified,
        recovers_input,
        triangle_commutes,
        triangle_notes,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Filtrations and the backbone
// ---------------------------------------------------------------------------

/// Degree shifts `s` with `H(slot) = H(cofiber)` translated by `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ShiftSet {
    /// Both sides vanish: every shift matches.
    Any,
    /// The matching shifts (at most one when the tables are nonzero).
    Only(Vec<i64>),
}

impl ShiftSet {
    fn of(slot: &Homology, cofiber: &Homology) -> Self {
        match (slot.is_zero(), cofiber.is_zero()) {
            (true, true) => ShiftSet::Any,
            (true, false) | (false, true) => ShiftSet::Only(vec![]),
            (false, false) => {
                let s = slot.0.keys().next().unwrap() - cofiber.0.keys().next().unwrap();
                ShiftSet::Only(if cofiber.shifted(s) == *slot { vec![s] } else { vec![] })
            }
        }
    }

    /// Intersection.
    pub fn meet(&self, other: &Self) -> Self {
        match (self, other) {
            (ShiftSet::Any, x) | (x, ShiftSet::Any) => x.clone(),
            (ShiftSet::Only(a), ShiftSet::Only(b)) => ShiftSet::Only(a.iter().copied().filter(|s| b.contains(s)).collect()),
        }
    }

    /// `false` if no shift matches.
    pub fn is_satisfiable(&self) -> bool {
        !matches!(self, ShiftSet::Only(v) if v.is_empty())
    }
}

impl fmt::Display for ShiftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSet::Any => write!(f, "any"),
            ShiftSet::Only(v) if v.is_empty() => write!(f, "none"),
            ShiftSet::Only(v) => write!(f, "{}", v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")),
        }
    }
}

/// One backbone slot compared with its filtration cofiber.
#[derive(Clone, Debug, Serialize)]
pub struct BackboneSlot {
    /// Staircase label.
    pub slot: String,
    /// Its degree `j` under the indexing `u_n`.
    pub degree: i64,
    /// Homology of the slot.
    pub slot_homology: String,
    /// Homology of `cone(X_j → X_{j+1})` (with `X_0 = 0`).
    pub cofiber_homology: String,
    /// Matching shifts.
    pub shifts: ShiftSet,
    /// Whether the slot is acyclic.
    pub acyclic: bool,
}

/// Report of [`dold_kan_check`].
#[derive(Clone, Debug, Serialize)]
pub struct DoldKanReport {
    /// `n`.
    pub n: usize,
    /// Backbone of the mesh restricted along `b_n`, the reading that is checked.
    pub slots: Vec<BackboneSlot>,
    /// Backbone of `G^n X` itself, reported for comparison.
    pub gn_slots: Vec<BackboneSlot>,
    /// A shift matches every slot of the checked reading.
    pub pass: bool,
}

impl DoldKanReport {
    /// Per-slot shift sets of the checked reading.
    pub fn profile(&self) -> Vec<ShiftSet> {
        self.slots.iter().map(|s| s.shifts.clone()).collect()
    }

    /// Slots of degree `1..n−2` (all but the two ends of the backbone).
    pub fn interior(&self) -> Vec<&BackboneSlot> {
        self.slots.iter().filter(|s| s.degree >= 1 && s.degree <= self.n as i64 - 2).collect()
    }
}

impl fmt::Display for DoldKanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "backbone along b_{} (checked):", self.n)?;
        for s in &self.slots {
            writeln!(f, "  {:<8} deg {}  H {:<16} cofiber H {:<16} shift {}", s.slot, s.degree, s.slot_homology, s.cofiber_homology, s.shifts)?;
        }
        writeln!(f, "backbone of G^{} X (for comparison):", self.n)?;
        for s in &self.gn_slots {
            writeln!(f, "  {:<8} deg {}  H {:<16} cofiber H {:<16} shift {}", s.slot, s.degree, s.slot_homology, s.cofiber_homology, s.shifts)?;
        }
        write!(f, "verdict: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Intersects shift profiles slot by slot.
pub fn meet_profiles(a: &[ShiftSet], b: &[ShiftSet]) -> Vec<ShiftSet> {
    a.iter().zip(b).map(|(x, y)| x.meet(y)).collect()
}

/// The filtration cofibers `gr_{j+1} = cone(X_j → X_{j+1})`, `j = 0..n−1`,
/// with `X_0 = 0` (labels of `A_n` are `1..n`).
pub fn filtration_cofibers<F: Field>(x: &Diagram<F>) -> Result<Vec<Homology>> {
    let n = x.shape().len();
    let mut out = vec![x.value(0).homology()];
    for j in 1..n {
        out.push(cone(&x.map(j - 1, j)?)?.cone.homology());
    }
    Ok(out)
}

/// The smallest window containing the images of `b_n`, `j^n` and `i_n`
/// with one column of margin.
pub fn dold_kan_window(n: usize) -> Result<MeshWindow> {
    let shape = a_tilde(n)?;
    let mut ks = vec![0];
    for l in shape.objects() {
        ks.push(b_label(n, l)?.coords().unwrap()[0]);
        ks.push(j_label(n, l)?.coords().unwrap()[0]);
    }
    MeshWindow::new(n, ks.iter().min().unwrap() - 1, ks.iter().max().unwrap() + 1)
}

fn backbone_slots<F: Field>(n: usize, y: &Diagram<F>, gr: &[Homology]) -> Result<Vec<BackboneSlot>> {
    let idx = DoldKanIndex::new(n)?;
    let mut out = Vec::new();
    for (l, d) in idx.backbone()? {
        let h = y.value_at(&l)?.homology();
        let g = &gr[d as usize];
        out.push(BackboneSlot {
            slot: l.to_string(),
            degree: d,
            slot_homology: h.to_string(),
            cofiber_homology: g.to_string(),
            shifts: ShiftSet::of(&h, g),
            acyclic: h.is_zero(),
        });
    }
    Ok(out)
}

/// Compares the staircase backbone with the cofibers of `X`, read as a
/// filtration `X_1 → … → X_n`.  The checked reading restricts the mesh
/// diagram of `X` along `b_n`; the backbone of `G^n X` is reported beside
/// it.  Passes iff every slot admits a matching shift.
pub fn dold_kan_check<F: Field>(n: usize, x: &Diagram<F>) -> Result<DoldKanReport> {
    let window = dold_kan_window(n)?;
    let mb = mesh_build(n, x, window)?;
    let b = b_map(n, window)?;
    let unverified: Vec<String> = b
        .source()
        .objects()
        .iter()
        .map(|l| b.apply(l))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|l| mb.unverified.contains(l))
        .map(|l| l.to_string())
        .collect();
    if !unverified.is_empty() {
        return Err(Error::WindowTooSmall(format!("b_{n} image positions unverified: {}", unverified.join(" "))));
    }
    let yb = restrict(&b, &mb.diagram)?;
    let gr = filtration_cofibers(x)?;
    let slots = backbone_slots(n, &yb, &gr)?;
    let gn_slots = backbone_slots(n, &g_n(n, x)?, &gr)?;
    let pass = slots.iter().all(|s| s.shifts.is_satisfiable());
    Ok(DoldKanReport { n, slots, gn_slots, pass })
}

/// The squares of a mesh window that the exact subcategory requires to be
/// bicartesian.
pub fn mesh_squares(window: MeshWindow) -> Result<Vec<SquareRef>> {
    Ok(mesh_ex_spec(window)?.bicartesian().to_vec())
}
