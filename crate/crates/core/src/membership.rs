//! Membership predicates for subcategories of diagrams cut out by
//! vanishing, isomorphism and bicartesian-square conditions, and the
//! per-diagram unit certification for restriction functors.
//!
//! "Vanishes" means acyclic and "isomorphism" means quasi-isomorphism, so
//! every predicate is invariant under pointwise quasi-isomorphism.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagram::bar::{bar_complex, vertex_inclusion};
use crate::diagram::model::ProjectiveModel;
use crate::diagram::squares::{is_bicartesian, SquareRef};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poset::shapes::{a_tilde, k_shape, level_width, MeshWindow};
use crate::poset::{FinPoset, Label, MonotoneMap, SliceSide};

/// A conjunction of vanishing, isomorphism and bicartesian conditions on
/// diagrams of one shape.
#[derive(Clone, Debug)]
pub struct SubderivatorSpec {
    name: String,
    shape: Arc<FinPoset>,
    vanishing: Vec<Label>,
    iso_arrows: Vec<(Label, Label)>,
    bicartesian: Vec<SquareRef>,
}

impl SubderivatorSpec {
    /// Builds a spec, checking that every referenced object, arrow and
    /// square exists in `shape`.
    pub fn new(
        name: &str,
        shape: Arc<FinPoset>,
        vanishing: Vec<Label>,
        iso_arrows: Vec<(Label, Label)>,
        bicartesian: Vec<SquareRef>,
    ) -> Result<Self> {
        for l in &vanishing {
            shape.index_of(l)?;
        }
        for (a, b) in &iso_arrows {
            if !shape.leq_labels(a, b)? {
                return Err(Error::InvalidMap(format!("{a} → {b} is not an arrow of {}", shape.name())));
            }
        }
        for sq in &bicartesian {
            sq.embedding(&shape)?;
        }
        Ok(Self { name: name.to_string(), shape, vanishing, iso_arrows, bicartesian })
    }

    /// The spec imposing nothing.
    pub fn trivial(shape: Arc<FinPoset>) -> Self {
        Self { name: format!("all({})", shape.name()), shape, vanishing: vec![], iso_arrows: vec![], bicartesian: vec![] }
    }

    /// Name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Shape.
    pub fn shape(&self) -> &Arc<FinPoset> {
        &self.shape
    }

    /// Objects required to be acyclic.
    pub fn vanishing(&self) -> &[Label] {
        &self.vanishing
    }

    /// Arrows required to be quasi-isomorphisms.
    pub fn iso_arrows(&self) -> &[(Label, Label)] {
        &self.iso_arrows
    }

    /// Squares required to be bicartesian.
    pub fn bicartesian(&self) -> &[SquareRef] {
        &self.bicartesian
    }

    /// Looks up a named built-in spec: `A(n,2)`, `K(n,l,m)` or
    /// `Mn-ex(kmin,kmax)` (e.g. `M3-ex(-4,2)`).
    pub fn named(name: &str) -> Result<Self> {
        name.parse::<NamedSpec>()?.build()
    }
}

/// The built-in specs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedSpec {
    /// `A(n,2)`: staircase diagrams acyclic at `(i,i+1)`.
    AN2(usize),
    /// `K(n,l,m)`: the pipeline's intermediate subcategories.
    K(usize, usize, usize),
    /// `Mn-ex`: exact mesh diagrams on a window.
    MeshEx(MeshWindow),
}

impl NamedSpec {
    /// Builds the spec.
    pub fn build(&self) -> Result<SubderivatorSpec> {
        match *self {
            NamedSpec::AN2(n) => a_n2_spec(n),
            NamedSpec::K(n, l, m) => k_spec(n, l, m),
            NamedSpec::MeshEx(w) => mesh_ex_spec(w),
        }
    }
}

impl fmt::Display for NamedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSpec::AN2(n) => write!(f, "A({n},2)"),
            NamedSpec::K(n, l, m) => write!(f, "K({n},{l},{m})"),
            NamedSpec::MeshEx(w) => write!(f, "M{}-ex({},{})", w.n, w.kmin, w.kmax),
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Membership(format!("bad integer '{t}' in spec name"))))
        .collect()
}

impl FromStr for NamedSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Membership(format!("unknown spec '{s}' (expected A(n,2), K(n,l,m) or Mn-ex(kmin,kmax))"));
        let (head, args) = s.split_once('(').ok_or_else(bad)?;
        let args = parse_ints(args.strip_suffix(')').ok_or_else(bad)?)?;
        let to_usize = |v: i64| usize::try_from(v).map_err(|_| bad());
        match (head, args.as_slice()) {
            ("A", [n, 2]) => Ok(NamedSpec::AN2(to_usize(*n)?)),
            ("K", [n, l, m]) => Ok(NamedSpec::K(to_usize(*n)?, to_usize(*l)?, to_usize(*m)?)),
            (h, [kmin, kmax]) if h.starts_with('M') && h.ends_with("-ex") => {
                let n = h[1..h.len() - 3].parse::<usize>().map_err(|_| bad())?;
                Ok(NamedSpec::MeshEx(MeshWindow::new(n, *kmin, *kmax)?))
            }
            _ => Err(bad()),
        }
    }
}

/// `A(n,2)`: vanishing at the off-diagonal slots `(i,i+1)`, `0 ≤ i ≤ n−3`.
pub fn a_n2_spec(n: usize) -> Result<SubderivatorSpec> {
    let shape = Arc::new(a_tilde(n)?);
    let vanishing = (0..n as i64 - 2).map(|i| Label::pair(i, i + 1)).collect();
    SubderivatorSpec::new(&format!("A({n},2)"), shape, vanishing, vec![], vec![])
}

/// Two-dimensional level-one conditions on a staircase of width `np` for the
/// stage `m`, as `(vanishing, bicartesian)` coordinate pairs.
fn level_one_conditions(np: usize, m: usize) -> (Vec<(i64, i64)>, Vec<[(i64, i64); 4]>) {
    let first = if m >= 4 { 1 } else { 0 };
    let vanishing = (first..np as i64 - 2).map(|i| (i, i + 1)).collect();
    let squares = if m == 2 { vec![[(0, 0), (1, 0), (0, 1), (1, 1)]] } else { vec![] };
    (vanishing, squares)
}

/// `K(n,l,m)`: the conditions satisfied by the pipeline's intermediate
/// diagrams.  Level one: vanishing off-diagonal slots, plus the bicartesian
/// square on `(0,0),(1,0),(0,1),(1,1)` at stage 2.  Higher levels: the
/// level-one conditions in every slice `z`, plus quasi-isomorphisms
/// `(p,z) → (p,z+1)` along the staircase rim and the top.
pub fn k_spec(n: usize, l: usize, m: usize) -> Result<SubderivatorSpec> {
    let shape = Arc::new(k_shape(n, l, m)?);
    let name = format!("K({n},{l},{m})");
    let np = level_width(n, l);
    let (v2, s2) = level_one_conditions(np, m.min(4));
    if l == 1 {
        let vanishing = v2.iter().map(|&(x, y)| Label::pair(x, y)).filter(|lab| shape.contains(lab)).collect();
        let squares = s2
            .iter()
            .map(|q| SquareRef::new(
                Label::pair(q[0].0, q[0].1),
                Label::pair(q[1].0, q[1].1),
                Label::pair(q[2].0, q[2].1),
                Label::pair(q[3].0, q[3].1),
            ))
            .collect();
        return SubderivatorSpec::new(&name, shape, vanishing, vec![], squares);
    }
    let mut vanishing = Vec::new();
    let mut squares = Vec::new();
    let mut isos = Vec::new();
    for z in 0..l as i64 {
        for &(x, y) in &v2 {
            let lab = Label::triple(x, y, z);
            if shape.contains(&lab) {
                vanishing.push(lab);
            }
        }
        for q in &s2 {
            let c: Vec<Label> = q.iter().map(|&(x, y)| Label::triple(x, y, z)).collect();
            if c.iter().all(|lab| shape.contains(lab)) {
                squares.push(SquareRef::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()));
            }
        }
    }
    let top = if np == 3 {
        if m == 1 {
            (1, 1)
        } else {
            (2, 1)
        }
    } else {
        (np as i64 - 2, np as i64 - 2)
    };
    let mut rim = Vec::new();
    for x in 1..=np as i64 - 2 {
        rim.push((x, x - 1));
        rim.push((x - 1, x));
    }
    rim.push(top);
    for z in 0..l as i64 - 1 {
        for &(x, y) in &rim {
            let (a, b) = (Label::triple(x, y, z), Label::triple(x, y, z + 1));
            if shape.contains(&a) && shape.contains(&b) {
                isos.push((a, b));
            }
        }
    }
    SubderivatorSpec::new(&name, shape, vanishing, isos, squares)
}

/// Exact mesh diagrams on a window: acyclic boundary rows `(k,0)` and
/// `(k,n+1)` and bicartesian mesh squares
/// `(k,l), (k,l+1), (k+1,l−1), (k+1,l)` for `1 ≤ l ≤ n`.
pub fn mesh_ex_spec(w: MeshWindow) -> Result<SubderivatorSpec> {
    let shape = Arc::new(w.poset());
    let n = w.n as i64;
    let mut vanishing = Vec::new();
    let mut squares = Vec::new();
    for k in w.kmin..=w.kmax {
        vanishing.push(Label::pair(k, 0));
        vanishing.push(Label::pair(k, n + 1));
        if k < w.kmax {
            for l in 1..=n {
                squares.push(SquareRef::new(
                    Label::pair(k, l),
                    Label::pair(k, l + 1),
                    Label::pair(k + 1, l - 1),
                    Label::pair(k + 1, l),
                ));
            }
        }
    }
    SubderivatorSpec::new(&format!("M{}-ex({},{})", w.n, w.kmin, w.kmax), shape, vanishing, vec![], squares)
}

/// Outcome of one membership condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    /// `vanishing`, `iso` or `bicartesian`.
    pub kind: String,
    /// The object, arrow or square concerned.
    pub subject: String,
    /// Whether the condition holds.
    pub pass: bool,
    /// Homology of the relevant complex (value, cone or total cofiber).
    pub homology: String,
}

/// Per-condition membership report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// Spec name.
    pub spec: String,
    /// Conjunction of all conditions.
    pub pass: bool,
    /// Individual results, in spec order.
    pub conditions: Vec<ConditionResult>,
}

impl MembershipReport {
    /// Failed conditions.
    pub fn failures(&self) -> Vec<&ConditionResult> {
        self.conditions.iter().filter(|c| !c.pass).collect()
    }
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "membership in {}: {}", self.spec, if self.pass { "PASS" } else { "FAIL" })?;
        for c in &self.conditions {
            writeln!(
                f,
                "  {:<5} {:<12} {:<40} H = {}",
                if c.pass { "ok" } else { "FAIL" },
                c.kind,
                c.subject,
                c.homology
            )?;
        }
        Ok(())
    }
}

/// Evaluates every condition of `spec` on `x`.  With `audit`, bicartesian
/// squares are also tested through the total fiber and must agree.
pub fn is_member<F: Field>(spec: &SubderivatorSpec, x: &Diagram<F>, audit: bool) -> Result<MembershipReport> {
    if **spec.shape() != **x.shape() {
        return Err(Error::ShapeMismatch(format!(
            "spec {} lives on {}, diagram on {}",
            spec.name,
            spec.shape.name(),
            x.shape().name()
        )));
    }
    let mut conditions = Vec::new();
    for l in &spec.vanishing {
        let h = x.value_at(l)?.homology();
        conditions.push(ConditionResult {
            kind: "vanishing".into(),
            subject: l.to_string(),
            pass: h.is_zero(),
            homology: h.to_string(),
        });
    }
    for (a, b) in &spec.iso_arrows {
        let (ia, ib) = (x.shape().index_of(a)?, x.shape().index_of(b)?);
        let f = x.map(ia, ib)?;
        let c = crate::homalg::cone(&f)?.cone.homology();
        conditions.push(ConditionResult {
            kind: "iso".into(),
            subject: format!("{a} → {b}"),
            pass: c.is_zero(),
            homology: c.to_string(),
        });
    }
    for sq in &spec.bicartesian {
        let tc = crate::diagram::squares::total_cofiber(sq, x)?.homology();
        let pass = tc.is_zero();
        if audit {
            let verdict = is_bicartesian(sq, x, true)?;
            debug_assert_eq!(verdict, pass);
        }
        conditions.push(ConditionResult {
            kind: "bicartesian".into(),
            subject: sq.to_string(),
            pass,
            homology: tc.to_string(),
        });
    }
    let pass = conditions.iter().all(|c| c.pass);
    Ok(MembershipReport { spec: spec.name.clone(), pass, conditions })
}

/// How the unit `X → u* u_! X` is certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitMethod {
    /// Canonical map into the bar construction over the slice (literal).
    Bar,
    /// Acyclicity of the quotient of projective models (fast).
    Model,
    /// Both, which must agree.
    Both,
}

/// Unit check at one object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitObjectResult {
    /// The object `a`.
    pub object: String,
    /// Whether `X(a) → (u_! X)(u a)` is a quasi-isomorphism.
    pub pass: bool,
    /// Homology of `X(a)`.
    pub value_homology: String,
    /// Homology of the slice homotopy colimit (bar route only).
    pub slice_homology: Option<String>,
    /// Number of objects in the slice `u / u(a)`.
    pub slice_size: usize,
}

/// Unit certification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitReport {
    /// Map name.
    pub map: String,
    /// All objects pass.
    pub pass: bool,
    /// Per-object results.
    pub objects: Vec<UnitObjectResult>,
}

impl UnitReport {
    /// Objects where the unit fails.
    pub fn failures(&self) -> Vec<String> {
        self.objects.iter().filter(|o| !o.pass).map(|o| o.object.clone()).collect()
    }
}

impl fmt::Display for UnitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "unit check along {}: {}", self.map, if self.pass { "PASS" } else { "FAIL" })?;
        for o in &self.objects {
            write!(
                f,
                "  {:<5} {:<16} slice size {:<3} H(X_a) = {}",
                if o.pass { "ok" } else { "FAIL" },
                o.object,
                o.slice_size,
                o.value_homology
            )?;
            if let Some(s) = &o.slice_homology {
                write!(f, "  H(hocolim slice) = {s}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Checks, object by object, that the canonical map
/// `X(a) → hocolim over (u / u(a)) of X` is a quasi-isomorphism.
pub fn unit_iso_check<F: Field>(u: &MonotoneMap, x: &Diagram<F>, method: UnitMethod) -> Result<UnitReport> {
    if **u.source() != **x.shape() {
        return Err(Error::ShapeMismatch(format!(
            "unit check along {} needs a diagram on {}, got {}",
            u.name(),
            u.source().name(),
            x.shape().name()
        )));
    }
    let model_flags = match method {
        UnitMethod::Bar => None,
        _ => Some(ProjectiveModel::build(x)?.unit_quotients_acyclic(u)),
    };
    let mut objects = Vec::new();
    for a in 0..u.source().len() {
        let slice = u.slice_positions(u.at(a), SliceSide::Under);
        let mut slice_homology = None;
        let bar_pass = if method == UnitMethod::Model {
            None
        } else {
            let bar = bar_complex(x, &slice)?;
            slice_homology = Some(bar.complex.homology().to_string());
            Some(vertex_inclusion(x, &bar, a)?.quasi_iso_check()?)
        };
        let pass = match (bar_pass, model_flags.as_ref().map(|m| m[a])) {
            (Some(b), Some(m)) => {
                if b != m {
                    return Err(Error::PropertyViolation(format!(
                        "unit check along {} at {}: bar says {b}, model says {m}",
                        u.name(),
                        u.source().label(a)
                    )));
                }
                b
            }
            (Some(b), None) => b,
            (None, Some(m)) => m,
            (None, None) => unreachable!(),
        };
        objects.push(UnitObjectResult {
            object: u.source().label(a).to_string(),
            pass,
            value_homology: x.value(a).homology().to_string(),
            slice_homology,
            slice_size: slice.len(),
        });
    }
    let pass = objects.iter().all(|o| o.pass);
    Ok(UnitReport { map: u.name().to_string(), pass, objects })
}

/// The counterexample diagram for the collapse `B̃ → B_collapsed`: the
/// constant diagram `k@0` on `B̃`.  It satisfies every condition the
/// collapse could be tested against (its arrow `a → c` is an isomorphism),
/// yet the unit fails at `d`, whose slice is all of `B̃` with a circle as
/// nerve.
pub fn collapse_witness<F: Field>(field: &F) -> Diagram<F> {
    let shape = Arc::new(crate::poset::shapes::b_tilde());
    Diagram::constant(field, shape, &crate::homalg::ChainComplex::concentrated(field, 0, 1))
}
