//! Factory constructors for every named diagram shape.
//!
//! Naming conventions (used in JSON documents and on the command line):
//!
//! | name | shape |
//! |------|-------|
//! | `interval(n)` | the chain `0 < 1 < … < n` |
//! | `square` | `[1] × [1]` with labels `(x,y)` |
//! | `corner` | the span `(1,0) ← (0,0) → (0,1)` |
//! | `cocorner` | the cospan `(1,0) → (1,1) ← (0,1)` |
//! | `A_n` (e.g. `A_4`) | the chain `1 < 2 < … < n` |
//! | `A_tilde(n,2)` | the staircase `(0,0)`, `(i+1,i)`, `(i,i+1)`, top |
//! | `A_tilde(4,2,-)` | `A_tilde(4,2)` without the arrow `(0,1) → (1,2)` |
//! | `K(n,l,m)` | the intermediate shapes of the equivalence pipeline |
//! | `mesh(n,kmin,kmax)` | the mesh poset restricted to `kmin ≤ k ≤ kmax` |
//! | `B_tilde` | `a,b < c,d` |
//! | `B_collapsed` | `b < ac < d` |

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{product, FinPoset, Label};
use crate::error::{Error, Result};

fn componentwise(a: &Label, b: &Label) -> bool {
    match (a.coords(), b.coords()) {
        (Some(x), Some(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p <= q),
        _ => a == b,
    }
}

/// The chain `0 < 1 < … < n`.
pub fn interval(n: usize) -> FinPoset {
    let labels = (0..=n as i64).map(Label::int).collect();
    FinPoset::from_label_relation(&format!("interval({n})"), labels, componentwise).expect("chain")
}

/// The commutative square `[1] × [1]`.
pub fn square() -> FinPoset {
    product(&interval(1), &interval(1)).renamed("square")
}

/// The span shape `(1,0) ← (0,0) → (0,1)`.
pub fn corner() -> FinPoset {
    let labels = vec![Label::pair(0, 0), Label::pair(1, 0), Label::pair(0, 1)];
    FinPoset::from_label_relation("corner", labels, componentwise).expect("span")
}

/// The cospan shape `(1,0) → (1,1) ← (0,1)`.
pub fn cocorner() -> FinPoset {
    let labels = vec![Label::pair(1, 0), Label::pair(0, 1), Label::pair(1, 1)];
    FinPoset::from_label_relation("cocorner", labels, componentwise).expect("cospan")
}

/// The linear quiver shape `1 < 2 < … < n`.
pub fn a_n(n: usize) -> Result<FinPoset> {
    if n == 0 {
        return Err(Error::InvalidShape("A_n needs n ≥ 1".into()));
    }
    let labels = (1..=n as i64).map(Label::int).collect();
    FinPoset::from_label_relation(&format!("A_{n}"), labels, componentwise)
}

/// Top object of the staircase `A_tilde(n,2)`: `(n-2,n-2)`, except that the
/// stand-alone three-vertex case uses `(2,1)` so that `(1,1)` stays free for
/// the pushout corner added by the first Kan extension.
fn staircase_top(n: usize, standalone: bool) -> Label {
    if n == 3 && standalone {
        Label::pair(2, 1)
    } else {
        Label::pair(n as i64 - 2, n as i64 - 2)
    }
}

fn staircase_labels(n: usize, standalone: bool) -> Vec<Label> {
    let mut labels = vec![Label::pair(0, 0)];
    for i in 0..(n as i64 - 2) {
        labels.push(Label::pair(i + 1, i));
        labels.push(Label::pair(i, i + 1));
    }
    // For n = 3 the loop already produced (1,0) and (0,1).
    labels.push(staircase_top(n, standalone));
    labels
}

/// The staircase poset `A_tilde(n,2)` (2(n−1) objects, componentwise order).
pub fn a_tilde(n: usize) -> Result<FinPoset> {
    if n < 3 {
        return Err(Error::InvalidShape(format!("A_tilde(n,2) needs n ≥ 3, got {n}")));
    }
    FinPoset::from_label_relation(&format!("A_tilde({n},2)"), staircase_labels(n, true), componentwise)
}

/// The shape `A_tilde(4,2,-)`: the staircase of `A_tilde(4,2)` generated by
/// its covering arrows except `(0,1) → (1,2)`.
pub fn a_tilde_4_minus() -> FinPoset {
    let p = |x, y| Label::pair(x, y);
    let labels = vec![p(0, 0), p(1, 0), p(0, 1), p(2, 1), p(1, 2), p(2, 2)];
    let arrows = vec![
        (p(0, 0), p(1, 0)),
        (p(0, 0), p(0, 1)),
        (p(0, 1), p(2, 1)),
        (p(1, 0), p(2, 1)),
        (p(1, 0), p(1, 2)),
        (p(1, 2), p(2, 2)),
        (p(2, 1), p(2, 2)),
    ];
    FinPoset::from_covers("A_tilde(4,2,-)", labels, &arrows).expect("A_tilde(4,2,-)")
}

/// Object labels of the two-dimensional level-one shape `K̃^{np}_{1,m}`.
/// `in_product` selects the top `(1,1)` of the three-vertex staircase used
/// as a factor of the three-dimensional shapes.
pub(crate) fn level_one_labels(np: usize, m: usize, in_product: bool) -> Vec<Label> {
    let mut labels = if m == 1 { staircase_labels(np, !in_product) } else { staircase_labels(np, true) };
    if m >= 2 && !labels.contains(&Label::pair(1, 1)) {
        labels.push(Label::pair(1, 1));
    }
    if m >= 3 {
        labels.retain(|l| *l != Label::pair(0, 0));
    }
    if m >= 4 {
        labels.retain(|l| *l != Label::pair(0, 1));
    }
    labels.sort();
    labels
}

/// Number of staircase vertices `n' = n − l + 1` of the level-`l` shapes.
pub fn level_width(n: usize, l: usize) -> usize {
    n + 1 - l
}

/// Checks `(n, l, m)` against the combinations used by the pipeline:
/// `l = 1, m ∈ 1..=4` and `2 ≤ l ≤ n−2, m ∈ 1..=5`.
pub fn check_klm(n: usize, l: usize, m: usize) -> Result<()> {
    let ok = n >= 3
        && ((l == 1 && (1..=4).contains(&m)) || (l >= 2 && l + 2 <= n && (1..=5).contains(&m)));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!("K({n},{l},{m}) is not a valid combination")))
    }
}

/// The pipeline shape `K(n,l,m)`: two-dimensional for `l = 1`, otherwise
/// `K̃^{n−l+1}_{1,m} × [l−1]` with 3-tuple labels; `K(n,l,5)` omits the
/// objects `(1,0,z)` for `z ≥ 1`.
pub fn k_shape(n: usize, l: usize, m: usize) -> Result<FinPoset> {
    check_klm(n, l, m)?;
    let name = format!("K({n},{l},{m})");
    if l == 1 {
        return FinPoset::from_label_relation(&name, level_one_labels(n, m, false), componentwise);
    }
    let np = level_width(n, l);
    let base = level_one_labels(np, m.min(4), true);
    let mut labels = Vec::new();
    for b in &base {
        let c = b.coords().unwrap();
        for z in 0..l as i64 {
            if m == 5 && c == [1, 0] && z >= 1 {
                continue;
            }
            labels.push(Label::triple(c[0], c[1], z));
        }
    }
    FinPoset::from_label_relation(&name, labels, componentwise)
}

/// The mesh order: `(k,l) ≤ (k',l')` iff `k ≤ k'` and `k + l ≤ k' + l'`.
pub fn mesh_leq(a: &Label, b: &Label) -> bool {
    match (a.coords(), b.coords()) {
        (Some([k, l]), Some([k2, l2])) => k <= k2 && k + l <= k2 + l2,
        _ => false,
    }
}

/// A window of the mesh poset `M_n`: objects `(k,l)` with
/// `kmin ≤ k ≤ kmax` and `0 ≤ l ≤ n+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeshWindow {
    /// Number of interior rows.
    pub n: usize,
    /// Smallest first coordinate.
    pub kmin: i64,
    /// Largest first coordinate.
    pub kmax: i64,
}

impl MeshWindow {
    /// Validates `kmin ≤ kmax`.
    pub fn new(n: usize, kmin: i64, kmax: i64) -> Result<Self> {
        if kmin > kmax || n == 0 {
            return Err(Error::InvalidShape(format!("mesh({n},{kmin},{kmax}) is empty")));
        }
        Ok(Self { n, kmin, kmax })
    }

    /// `true` if `(k,l)` lies in the window.
    pub fn contains(&self, l: &Label) -> bool {
        matches!(l.coords(), Some([k, r]) if *k >= self.kmin && *k <= self.kmax && *r >= 0 && *r <= self.n as i64 + 1)
    }

    /// The window as a poset.
    pub fn poset(&self) -> FinPoset {
        let mut labels = Vec::new();
        for k in self.kmin..=self.kmax {
            for l in 0..=(self.n as i64 + 1) {
                labels.push(Label::pair(k, l));
            }
        }
        FinPoset::from_label_relation(&format!("mesh({},{},{})", self.n, self.kmin, self.kmax), labels, mesh_leq)
            .expect("mesh window")
    }
}

/// The mesh window poset `mesh(n,kmin,kmax)`.
pub fn mesh_window(n: usize, kmin: i64, kmax: i64) -> Result<FinPoset> {
    Ok(MeshWindow::new(n, kmin, kmax)?.poset())
}

/// `B̃`: objects `a, b, c, d` with `a, b < c` and `a, b < d`.
pub fn b_tilde() -> FinPoset {
    let labels = ["a", "b", "c", "d"].iter().map(|s| Label::sym(s)).collect();
    let arrows: Vec<(Label, Label)> = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
        .iter()
        .map(|(x, y)| (Label::sym(x), Label::sym(y)))
        .collect();
    FinPoset::from_covers("B_tilde", labels, &arrows).expect("B_tilde")
}

/// `B̃` with `a` and `c` identified: `b < ac < d`.
pub fn b_collapsed() -> FinPoset {
    let labels = ["ac", "b", "d"].iter().map(|s| Label::sym(s)).collect();
    let arrows = vec![(Label::sym("b"), Label::sym("ac")), (Label::sym("ac"), Label::sym("d"))];
    FinPoset::from_covers("B_collapsed", labels, &arrows).expect("B_collapsed")
}

/// `K̃³_{1,2}`: the square with its corner `(1,1)` followed by `(2,1)`;
/// the target of the total-cofiber construction.
pub fn cofiber_shape() -> FinPoset {
    k_shape(3, 1, 2).expect("K(3,1,2)")
}

/// The dual shape for total fibers: `(-1,0) < (0,0)` below the square.
pub fn fiber_shape() -> FinPoset {
    let labels = vec![Label::pair(-1, 0), Label::pair(0, 0), Label::pair(1, 0), Label::pair(0, 1), Label::pair(1, 1)];
    FinPoset::from_label_relation("fiber_shape", labels, componentwise).expect("fiber shape")
}

/// `P` with a new greatest object `pt` adjoined.
pub fn with_top(p: &FinPoset) -> FinPoset {
    let mut labels = p.objects().to_vec();
    labels.push(Label::Pt);
    let n = p.len();
    FinPoset::from_relation(&format!("{}+top", p.name()), labels, |i, j| j == n || (i < n && j < n && p.leq(i, j)))
        .expect("cone poset")
}

/// `P` with a new least object `pt` adjoined.
pub fn with_bottom(p: &FinPoset) -> FinPoset {
    let mut labels = p.objects().to_vec();
    labels.push(Label::Pt);
    let n = p.len();
    FinPoset::from_relation(&format!("{}+bottom", p.name()), labels, |i, j| i == n || (i < n && j < n && p.leq(i, j)))
        .expect("cocone poset")
}

/// A named shape, parseable from its display name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    /// `interval(n)`.
    Interval(usize),
    /// `square`.
    Square,
    /// `corner`.
    Corner,
    /// `cocorner`.
    Cocorner,
    /// `A_n`.
    AN(usize),
    /// `A_tilde(n,2)`.
    ATilde(usize),
    /// `A_tilde(4,2,-)`.
    ATildeMinus,
    /// `K(n,l,m)`.
    K(usize, usize, usize),
    /// `mesh(n,kmin,kmax)`.
    Mesh(usize, i64, i64),
    /// `B_tilde`.
    BTilde,
    /// `B_collapsed`.
    BCollapsed,
}

impl ShapeKind {
    /// Builds the poset.
    pub fn build(&self) -> Result<FinPoset> {
        match *self {
            ShapeKind::Interval(n) => Ok(interval(n)),
            ShapeKind::Square => Ok(square()),
            ShapeKind::Corner => Ok(corner()),
            ShapeKind::Cocorner => Ok(cocorner()),
            ShapeKind::AN(n) => a_n(n),
            ShapeKind::ATilde(n) => a_tilde(n),
            ShapeKind::ATildeMinus => Ok(a_tilde_4_minus()),
            ShapeKind::K(n, l, m) => k_shape(n, l, m),
            ShapeKind::Mesh(n, a, b) => mesh_window(n, a, b),
            ShapeKind::BTilde => Ok(b_tilde()),
            ShapeKind::BCollapsed => Ok(b_collapsed()),
        }
    }

    /// Builds the poset behind an `Arc`.
    pub fn build_arc(&self) -> Result<Arc<FinPoset>> {
        self.build().map(Arc::new)
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeKind::Interval(n) => write!(f, "interval({n})"),
            ShapeKind::Square => write!(f, "square"),
            ShapeKind::Corner => write!(f, "corner"),
            ShapeKind::Cocorner => write!(f, "cocorner"),
            ShapeKind::AN(n) => write!(f, "A_{n}"),
            ShapeKind::ATilde(n) => write!(f, "A_tilde({n},2)"),
            ShapeKind::ATildeMinus => write!(f, "A_tilde(4,2,-)"),
            ShapeKind::K(n, l, m) => write!(f, "K({n},{l},{m})"),
            ShapeKind::Mesh(n, a, b) => write!(f, "mesh({n},{a},{b})"),
            ShapeKind::BTilde => write!(f, "B_tilde"),
            ShapeKind::BCollapsed => write!(f, "B_collapsed"),
        }
    }
}

fn parse_args(s: &str, prefix: &str) -> Option<Vec<i64>> {
    let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|x| x.trim().parse::<i64>().ok()).collect()
}

impl FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidShape(format!("unknown shape name \"{s}\""));
        let nonneg = |v: i64| usize::try_from(v).map_err(|_| bad());
        match s {
            "square" => return Ok(ShapeKind::Square),
            "corner" => return Ok(ShapeKind::Corner),
            "cocorner" => return Ok(ShapeKind::Cocorner),
            "B_tilde" => return Ok(ShapeKind::BTilde),
            "B_collapsed" => return Ok(ShapeKind::BCollapsed),
            "A_tilde(4,2,-)" => return Ok(ShapeKind::ATildeMinus),
            _ => {}
        }
        if let Some(v) = parse_args(s, "interval") {
            if v.len() == 1 {
                return Ok(ShapeKind::Interval(nonneg(v[0])?));
            }
        }
        if let Some(v) = parse_args(s, "A_tilde") {
            if v.len() == 2 && v[1] == 2 {
                return Ok(ShapeKind::ATilde(nonneg(v[0])?));
            }
        }
        if let Some(v) = parse_args(s, "K") {
            if v.len() == 3 {
                return Ok(ShapeKind::K(nonneg(v[0])?, nonneg(v[1])?, nonneg(v[2])?));
            }
        }
        if let Some(v) = parse_args(s, "mesh") {
            if v.len() == 3 {
                return Ok(ShapeKind::Mesh(nonneg(v[0])?, v[1], v[2]));
            }
        }
        if let Some(rest) = s.strip_prefix("A_") {
            if let Ok(n) = rest.parse::<usize>() {
                return Ok(ShapeKind::AN(n));
            }
        }
        Err(bad())
    }
}
