//! Finite posets, monotone maps, slices and nerve chains.
//!
//! Objects carry labels ([`Label`]) and are stored in increasing label
//! order; that fixed order is what makes chain enumeration, bar
//! constructions and matrix bases deterministic.  The order relation is an
//! explicit boolean table, validated on construction.

pub mod connectors;
pub mod shapes;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An object label: a tuple of small integers, the distinguished point
/// `pt`, or a symbolic name (used for the letters of small example posets).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// The distinguished symbol `pt`.
    Pt,
    /// A tuple of integers; one-element tuples print as plain integers.
    Tuple(Vec<i64>),
    /// A symbolic name such as `a` or `ac`.
    Sym(String),
}

impl Label {
    /// One-coordinate label `i`.
    pub fn int(i: i64) -> Self {
        Label::Tuple(vec![i])
    }

    /// Two-coordinate label `(x,y)`.
    pub fn pair(x: i64, y: i64) -> Self {
        Label::Tuple(vec![x, y])
    }

    /// Three-coordinate label `(x,y,z)`.
    pub fn triple(x: i64, y: i64, z: i64) -> Self {
        Label::Tuple(vec![x, y, z])
    }

    /// Symbolic label.
    pub fn sym(s: &str) -> Self {
        Label::Sym(s.to_string())
    }

    /// The integer coordinates, if this is a tuple label.
    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            Label::Tuple(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Pt => write!(f, "pt"),
            Label::Sym(s) => write!(f, "{s}"),
            Label::Tuple(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Label::Tuple(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Label {
    type Err = Error;

    /// Parses `pt`, an integer `3`, a tuple `(1,0,2)`, or a symbol `ac`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "pt" {
            return Ok(Label::Pt);
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let coords: std::result::Result<Vec<i64>, _> = inner.split(',').map(|c| c.trim().parse::<i64>()).collect();
            return coords
                .map(Label::Tuple)
                .map_err(|_| Error::Schema(format!("malformed tuple label \"{s}\"")));
        }
        if let Ok(i) = s.parse::<i64>() {
            return Ok(Label::int(i));
        }
        if s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '~') {
            return Err(Error::Schema(format!("malformed label \"{s}\"")));
        }
        Ok(Label::Sym(s.to_string()))
    }
}

/// A finite poset with labelled objects sorted by label.
#[derive(Clone)]
pub struct FinPoset {
    name: String,
    objects: Vec<Label>,
    index: HashMap<Label, usize>,
    /// Row-major `leq[i * n + j]` ⇔ `objects[i] ≤ objects[j]`.
    leq: Vec<bool>,
    /// Covering pairs `(i, j)` with `i ⋖ j`, sorted.
    covers: Vec<(usize, usize)>,
}

impl PartialEq for FinPoset {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.leq == other.leq
    }
}

impl Eq for FinPoset {}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinPoset {} {:?}", self.name, self.objects)
    }
}

impl FinPoset {
    /// Builds a poset from labels and a relation on positions of `labels`;
    /// validates distinct labels and the partial-order axioms.
    pub fn from_relation(name: &str, labels: Vec<Label>, rel: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        for w in order.windows(2) {
            if labels[w[0]] == labels[w[1]] {
                return Err(Error::InvalidPoset(format!("duplicate label {}", labels[w[0]])));
            }
        }
        let objects: Vec<Label> = order.iter().map(|&i| labels[i].clone()).collect();
        let mut leq = vec![false; n * n];
        for (i, &oi) in order.iter().enumerate() {
            for (j, &oj) in order.iter().enumerate() {
                leq[i * n + j] = rel(oi, oj);
            }
        }
        Self::from_table(name, objects, leq)
    }

    /// Builds a poset from labels (any order) and a predicate on labels.
    pub fn from_label_relation(name: &str, labels: Vec<Label>, rel: impl Fn(&Label, &Label) -> bool) -> Result<Self> {
        let copy = labels.clone();
        Self::from_relation(name, labels, |i, j| rel(&copy[i], &copy[j]))
    }

    /// Builds the poset generated by covering arrows (reflexive-transitive
    /// closure); fails if the closure is not antisymmetric.
    pub fn from_covers(name: &str, labels: Vec<Label>, arrows: &[(Label, Label)]) -> Result<Self> {
        let n = labels.len();
        let pos: HashMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (a, b) in arrows {
            let ia = *pos.get(a).ok_or_else(|| Error::UnknownObject(a.to_string()))?;
            let ib = *pos.get(b).ok_or_else(|| Error::UnknownObject(b.to_string()))?;
            rel[ia * n + ib] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_relation(name, labels, |i, j| rel[i * n + j])
    }

    fn from_table(name: &str, objects: Vec<Label>, leq: Vec<bool>) -> Result<Self> {
        let n = objects.len();
        for i in 0..n {
            if !leq[i * n + i] {
                return Err(Error::InvalidPoset(format!("relation not reflexive at {}", objects[i])));
            }
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::InvalidPoset(format!(
                        "relation not antisymmetric: {} and {}",
                        objects[i], objects[j]
                    )));
                }
                if leq[i * n + j] {
                    for k in 0..n {
                        if leq[j * n + k] && !leq[i * n + k] {
                            return Err(Error::InvalidPoset(format!(
                                "relation not transitive: {} ≤ {} ≤ {}",
                                objects[i], objects[j], objects[k]
                            )));
                        }
                    }
                }
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && !(0..n).any(|k| k != i && k != j && leq[i * n + k] && leq[k * n + j]) {
                    covers.push((i, j));
                }
            }
        }
        let index = objects.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(Self { name: name.to_string(), objects, index, leq, covers })
    }

    /// Descriptive name (e.g. `A_tilde(4,2)`).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// A copy with a different name.
    pub fn renamed(&self, name: &str) -> Self {
        let mut p = self.clone();
        p.name = name.to_string();
        p
    }

    /// Number of objects.
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    /// `true` for the empty poset.
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Object labels in storage order.
    pub fn objects(&self) -> &[Label] {
        &self.objects
    }

    /// Label of object `i`.
    pub fn label(&self, i: usize) -> &Label {
        &self.objects[i]
    }

    /// Position of a label.
    pub fn index_of(&self, l: &Label) -> Result<usize> {
        self.index.get(l).copied().ok_or_else(|| Error::UnknownObject(format!("{l} in {}", self.name)))
    }

    /// `true` if the label is an object.
    pub fn contains(&self, l: &Label) -> bool {
        self.index.contains_key(l)
    }

    /// `i ≤ j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    /// `i < j`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// `a ≤ b` on labels.
    pub fn leq_labels(&self, a: &Label, b: &Label) -> Result<bool> {
        Ok(self.leq(self.index_of(a)?, self.index_of(b)?))
    }

    /// Number of true entries of the order table.
    pub fn relation_count(&self) -> usize {
        self.leq.iter().filter(|&&b| b).count()
    }

    /// Covering pairs `(i, j)`, `i ⋖ j`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Objects covered by `j`.
    pub fn lower_covers(&self, j: usize) -> Vec<usize> {
        self.covers.iter().filter(|c| c.1 == j).map(|c| c.0).collect()
    }

    /// Objects covering `i`.
    pub fn upper_covers(&self, i: usize) -> Vec<usize> {
        self.covers.iter().filter(|c| c.0 == i).map(|c| c.1).collect()
    }

    /// `{ j : j ≤ i }`.
    pub fn downset(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(j, i)).collect()
    }

    /// `{ j : i ≤ j }`.
    pub fn upset(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(i, j)).collect()
    }

    /// The greatest object, if any.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|j| self.leq(j, m)))
    }

    /// The least object, if any.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|j| self.leq(m, j)))
    }

    /// A linear extension: repeatedly take the smallest-index minimal object
    /// among those not yet taken.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut indeg: Vec<usize> = (0..n).map(|j| self.lower_covers(j).len()).collect();
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&j| indeg[j] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(&i) = ready.iter().next() {
            ready.remove(&i);
            out.push(i);
            for j in self.upper_covers(i) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        out
    }

    /// `true` if `set` is downward closed.
    pub fn is_downward_closed(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in set {
            member[s] = true;
        }
        set.iter().all(|&s| (0..self.len()).all(|j| !self.leq(j, s) || member[j]))
    }

    /// `true` if `set` is upward closed.
    pub fn is_upward_closed(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in set {
            member[s] = true;
        }
        set.iter().all(|&s| (0..self.len()).all(|j| !self.leq(s, j) || member[j]))
    }

    /// The full subposet on `set` together with its inclusion.
    pub fn full_subposet(self: &Arc<Self>, name: &str, set: &[usize]) -> (Arc<FinPoset>, MonotoneMap) {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let labels: Vec<Label> = sorted.iter().map(|&i| self.objects[i].clone()).collect();
        let sub = FinPoset::from_relation(name, labels, |i, j| self.leq(sorted[i], sorted[j]))
            .expect("full subposet of a poset is a poset");
        let sub = Arc::new(sub);
        // Labels are sorted identically, so position k maps to sorted[k].
        let map = MonotoneMap { name: format!("incl({name})"), source: sub.clone(), target: self.clone(), assignment: sorted };
        (sub, map)
    }

    /// The opposite poset (same labels, reversed order).
    pub fn opposite(&self) -> FinPoset {
        let n = self.len();
        let leq: Vec<bool> = (0..n * n).map(|k| self.leq[(k % n) * n + k / n]).collect();
        FinPoset::from_table(&format!("{}^op", self.name), self.objects.clone(), leq).expect("opposite of a poset")
    }

    /// All strictly increasing chains `p_0 < … < p_s` (length ≥ 1), sorted
    /// lexicographically by object position.
    pub fn chains(&self) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        while let Some(c) = stack.pop() {
            let last = *c.last().unwrap();
            for j in 0..self.len() {
                if self.lt(last, j) {
                    let mut d = c.clone();
                    d.push(j);
                    stack.push(d);
                }
            }
            out.push(Chain(c));
        }
        out.sort();
        out
    }
}

/// Cartesian product with the componentwise order; tuple labels are
/// concatenated, other labels are paired symbolically.
pub fn product(p: &FinPoset, q: &FinPoset) -> FinPoset {
    let mut labels = Vec::with_capacity(p.len() * q.len());
    for a in p.objects() {
        for b in q.objects() {
            labels.push(product_label(a, b));
        }
    }
    let m = q.len();
    FinPoset::from_relation(&format!("{}x{}", p.name(), q.name()), labels, |i, j| {
        p.leq(i / m, j / m) && q.leq(i % m, j % m)
    })
    .expect("product of posets")
}

/// A strictly increasing chain of object positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain(pub Vec<usize>);

impl Chain {
    /// The vertices.
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Simplicial dimension `s` (number of vertices minus one).
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

/// Classification of a full inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SieveKind {
    /// Not a fully faithful inclusion, or image neither down- nor up-closed.
    None,
    /// Image downward closed.
    Sieve,
    /// Image upward closed.
    Cosieve,
    /// Image both (a union of components).
    Both,
}

impl fmt::Display for SieveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SieveKind::None => "none",
            SieveKind::Sieve => "sieve",
            SieveKind::Cosieve => "cosieve",
            SieveKind::Both => "both",
        };
        write!(f, "{s}")
    }
}

/// Which slice of a monotone map to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceSide {
    /// `{ a : u(a) ≤ b }`.
    Under,
    /// `{ a : b ≤ u(a) }`.
    Over,
}

/// An order-preserving map between finite posets.
#[derive(Clone)]
pub struct MonotoneMap {
    name: String,
    source: Arc<FinPoset>,
    target: Arc<FinPoset>,
    assignment: Vec<usize>,
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonotoneMap {}: {} -> {}", self.name, self.source.name(), self.target.name())
    }
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.assignment == other.assignment
    }
}

impl MonotoneMap {
    /// Builds a map from positions; checks totality and monotonicity.
    pub fn new(name: &str, source: Arc<FinPoset>, target: Arc<FinPoset>, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() || assignment.iter().any(|&t| t >= target.len()) {
            return Err(Error::InvalidMap(format!("{name}: assignment is not a total map")));
        }
        for i in 0..source.len() {
            for j in 0..source.len() {
                if source.leq(i, j) && !target.leq(assignment[i], assignment[j]) {
                    return Err(Error::InvalidMap(format!(
                        "{name}: {} ≤ {} but {} ≰ {}",
                        source.label(i),
                        source.label(j),
                        target.label(assignment[i]),
                        target.label(assignment[j])
                    )));
                }
            }
        }
        Ok(Self { name: name.to_string(), source, target, assignment })
    }

    /// Builds a map from a label function.
    pub fn from_fn(
        name: &str,
        source: Arc<FinPoset>,
        target: Arc<FinPoset>,
        f: impl Fn(&Label) -> Result<Label>,
    ) -> Result<Self> {
        let mut assignment = Vec::with_capacity(source.len());
        for l in source.objects() {
            let img = f(l)?;
            let t = target.index_of(&img).map_err(|_| {
                Error::InvalidMap(format!("{name}: image {img} of {l} is not an object of {}", target.name()))
            })?;
            assignment.push(t);
        }
        Self::new(name, source, target, assignment)
    }

    /// The identity map.
    pub fn identity(p: Arc<FinPoset>) -> Self {
        let n = p.len();
        Self { name: format!("id({})", p.name()), source: p.clone(), target: p, assignment: (0..n).collect() }
    }

    /// Descriptive name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Domain.
    pub fn source(&self) -> &Arc<FinPoset> {
        &self.source
    }

    /// Codomain.
    pub fn target(&self) -> &Arc<FinPoset> {
        &self.target
    }

    /// Image position of source position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Image positions.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Image of a label.
    pub fn apply(&self, l: &Label) -> Result<Label> {
        Ok(self.target.label(self.assignment[self.source.index_of(l)?]).clone())
    }

    /// Composite `self ∘ first`.
    pub fn compose(&self, first: &MonotoneMap) -> Result<Self> {
        if *first.target != *self.source {
            return Err(Error::InvalidMap(format!("cannot compose {} after {}", self.name, first.name)));
        }
        let assignment = first.assignment.iter().map(|&i| self.assignment[i]).collect();
        Ok(Self {
            name: format!("{}∘{}", self.name, first.name),
            source: first.source.clone(),
            target: self.target.clone(),
            assignment,
        })
    }

    /// `true` if the identity map of one poset.
    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.assignment.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Injective on objects.
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    /// Surjective on objects.
    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &t in &self.assignment {
            seen[t] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// Reflects the order: `u(a) ≤ u(a')` implies `a ≤ a'`.
    pub fn is_full(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|i| (0..n).all(|j| !self.target.leq(self.assignment[i], self.assignment[j]) || self.source.leq(i, j)))
    }

    /// Sieve/cosieve classification of a fully faithful inclusion.
    pub fn sieve_kind(&self) -> SieveKind {
        if !self.is_injective() || !self.is_full() {
            return SieveKind::None;
        }
        let image = &self.assignment;
        match (self.target.is_downward_closed(image), self.target.is_upward_closed(image)) {
            (true, true) => SieveKind::Both,
            (true, false) => SieveKind::Sieve,
            (false, true) => SieveKind::Cosieve,
            (false, false) => SieveKind::None,
        }
    }

    /// Source positions in the slice at target position `b`.
    pub fn slice_positions(&self, b: usize, side: SliceSide) -> Vec<usize> {
        (0..self.source.len())
            .filter(|&a| match side {
                SliceSide::Under => self.target.leq(self.assignment[a], b),
                SliceSide::Over => self.target.leq(b, self.assignment[a]),
            })
            .collect()
    }

    /// The slice `(u/b)` (side `Under`) or `(b/u)` (side `Over`) as a full
    /// subposet of the source, with its inclusion.
    pub fn slice(&self, b: &Label, side: SliceSide) -> Result<(Arc<FinPoset>, MonotoneMap)> {
        let bi = self.target.index_of(b)?;
        let set = self.slice_positions(bi, side);
        let tag = match side {
            SliceSide::Under => "under",
            SliceSide::Over => "over",
        };
        Ok(self.source.full_subposet(&format!("{}/{b}/{tag}", self.name), &set))
    }

    /// Product map `self × id_P`.
    pub fn times_identity(&self, p: &Arc<FinPoset>) -> Result<Self> {
        let src = Arc::new(product(&self.source, p));
        let tgt = Arc::new(product(&self.target, p));
        let mut asg = Vec::with_capacity(src.len());
        for (i, a) in self.source.objects().iter().enumerate() {
            for q in p.objects() {
                let s = product_label(a, q);
                let t = product_label(self.target.label(self.assignment[i]), q);
                asg.push((src.index_of(&s)?, tgt.index_of(&t)?));
            }
        }
        asg.sort_unstable();
        let assignment = asg.into_iter().map(|(_, t)| t).collect();
        Self::new(&format!("{}x{}", self.name, p.name()), src, tgt, assignment)
    }

    /// The same assignment viewed between opposite posets.
    pub fn opposite(&self) -> Self {
        Self {
            name: format!("{}^op", self.name),
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            assignment: self.assignment.clone(),
        }
    }

    /// A copy with a different name.
    pub fn renamed(&self, name: &str) -> Self {
        let mut m = self.clone();
        m.name = name.to_string();
        m
    }
}

/// Label of a product object.
pub fn product_label(a: &Label, b: &Label) -> Label {
    match (a, b) {
        (Label::Tuple(x), Label::Tuple(y)) => Label::Tuple(x.iter().chain(y.iter()).copied().collect()),
        _ => Label::Sym(format!("{a}x{b}")),
    }
}
