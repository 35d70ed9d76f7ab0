//! The monotone maps connecting the named shapes.
//!
//! * `i(n,l,m)`: the inclusions and collapses of the equivalence pipeline;
//! * `j(n)`: the staircase embedding `A_tilde(n,2) → M_n`;
//! * `i_mesh(n)`: `A_n → M_n`, `l ↦ (0,l)`;
//! * `f(n)`, `t(n)`: the mesh symmetries `(k,l) ↦ (k+l, n+1−l)` and `(k,l) ↦ (k−1,l)`;
//! * `u_map(n)`: the degree indexing of the staircase (not monotone into a
//!   poset, see [`DoldKanIndex`]);
//! * `collapse_v`: `B̃ → B_collapsed`, identifying `a` and `c`.

use std::sync::Arc;

use super::shapes::{self, check_klm, level_width, MeshWindow};
use super::{FinPoset, Label, MonotoneMap};
use crate::error::{Error, Result};

fn coords(l: &Label) -> Result<Vec<i64>> {
    l.coords().map(|c| c.to_vec()).ok_or_else(|| Error::InvalidMap(format!("label {l} is not a tuple")))
}

/// Source and target shapes of `i(n,l,m)`.
pub fn i_map_shapes(n: usize, l: usize, m: usize) -> Result<(FinPoset, FinPoset)> {
    check_klm(n, l, m)?;
    match (l, m) {
        (_, 1) => Ok((shapes::k_shape(n, l, 1)?, shapes::k_shape(n, l, 2)?)),
        (_, 2) => Ok((shapes::k_shape(n, l, 3)?, shapes::k_shape(n, l, 2)?)),
        (_, 3) => Ok((shapes::k_shape(n, l, 4)?, shapes::k_shape(n, l, 3)?)),
        (1, 4) => {
            if n < 4 {
                return Err(Error::InvalidShape("i(n,1,4) needs n ≥ 4".into()));
            }
            Ok((shapes::k_shape(n, 2, 1)?, shapes::k_shape(n, 1, 4)?))
        }
        (_, 4) => Ok((shapes::k_shape(n, l, 4)?, shapes::k_shape(n, l, 5)?)),
        (_, 5) if l + 2 == n => Ok((shapes::k_shape(n, l, 5)?, shapes::a_n(n)?)),
        (_, 5) => Ok((shapes::k_shape(n, l + 1, 1)?, shapes::k_shape(n, l, 5)?)),
        _ => Err(Error::InvalidShape(format!("i({n},{l},{m}) is not defined"))),
    }
}

/// The pipeline connector `i(n,l,m)`.
pub fn i_map(n: usize, l: usize, m: usize) -> Result<MonotoneMap> {
    let (src, tgt) = i_map_shapes(n, l, m)?;
    let np = level_width(n, l);
    let name = format!("i({n},{l},{m})");
    let rule = |lab: &Label| -> Result<Label> {
        let c = coords(lab)?;
        Ok(match (l, m) {
            // The three-vertex factor moves its top from (1,1) to (2,1).
            (_, 1) if l >= 2 && np == 3 && c[0] == 1 && c[1] == 1 => Label::triple(2, 1, c[2]),
            (_, 1) | (_, 2) | (_, 3) => lab.clone(),
            (1, 4) if c == [0, 0, 0] => Label::pair(1, 0),
            (1, 4) => Label::pair(c[0] + 1, c[1] + 1),
            (_, 4) if c[0] == 1 && c[1] == 0 => Label::triple(1, 0, 0),
            (_, 4) => lab.clone(),
            (_, 5) if l + 2 == n => match (c[0], c[1]) {
                (1, 1) => Label::int(c[2] + 2),
                (1, 0) => Label::int(1),
                (2, 1) => Label::int(n as i64),
                _ => return Err(Error::InvalidMap(format!("{name}: unexpected object {lab}"))),
            },
            (_, 5) if c[2] != 0 => Label::triple(c[0] + 1, c[1] + 1, c[2] - 1),
            (_, 5) if c[0] == 0 && c[1] == 0 => Label::triple(1, 0, 0),
            (_, 5) => Label::triple(c[0] + 1, c[1] + 1, 0),
            _ => unreachable!(),
        })
    };
    MonotoneMap::from_fn(&name, Arc::new(src), Arc::new(tgt), rule)
}

/// Image of a staircase label under `j^n`, using the parity formulas of the
/// embedding into the mesh.
pub fn j_label(n: usize, lab: &Label) -> Result<Label> {
    let c = coords(lab)?;
    let (x, y) = (c[0], c[1]);
    let ni = n as i64;
    let w = ni - 1;
    let top = if n == 3 { (2, 1) } else { (ni - 2, ni - 2) };
    let half = |v: i64| -> i64 {
        debug_assert!(v % 2 == 0, "parity formula produced an odd numerator");
        v / 2
    };
    if (x, y) == top {
        return Ok(Label::pair(0, ni));
    }
    let even = n.is_multiple_of(2);
    let out = if (x, y) == (0, 0) {
        if even {
            (-half(ni - 2) * w, 1)
        } else {
            (half(-ni + 1) * w, ni)
        }
    } else if x == y + 1 {
        let p = x;
        match (even, p % 2 == 1) {
            (true, true) => (half(-ni + p + 1) * w, ni),
            (true, false) => (half(-ni + p + 2) * w, 1),
            (false, true) => (half(-ni + p + 2) * w, 1),
            (false, false) => (half(-ni + p + 1) * w, ni),
        }
    } else if y == x + 1 {
        let p = y;
        match (even, p % 2 == 1) {
            (true, true) => (half(-ni + p + 1) * w + 1, 0),
            (true, false) => (half(-ni + p) * w + 1, ni + 1),
            (false, true) => (half(-ni + p) * w, ni + 1),
            (false, false) => (half(-ni + p + 1) * w + 2, 0),
        }
    } else {
        return Err(Error::InvalidMap(format!("j({n}): {lab} is not a staircase object")));
    };
    Ok(Label::pair(out.0, out.1))
}

fn into_window(name: &str, src: Arc<FinPoset>, win: MeshWindow, f: impl Fn(&Label) -> Result<Label>) -> Result<MonotoneMap> {
    for l in src.objects() {
        let img = f(l)?;
        if !win.contains(&img) {
            return Err(Error::WindowTooSmall(format!(
                "{name}: image {img} of {l} lies outside mesh({},{},{})",
                win.n, win.kmin, win.kmax
            )));
        }
    }
    MonotoneMap::from_fn(name, src, Arc::new(win.poset()), f)
}

/// The smallest window `[kmin,kmax]` containing `j^n`'s image.
pub fn j_image_range(n: usize) -> Result<(i64, i64)> {
    let src = shapes::a_tilde(n)?;
    let ks: Vec<i64> = src.objects().iter().map(|l| j_label(n, l).map(|x| x.coords().unwrap()[0])).collect::<Result<_>>()?;
    Ok((*ks.iter().min().unwrap(), *ks.iter().max().unwrap()))
}

/// `j^n : A_tilde(n,2) → mesh window`.
pub fn j_map(n: usize, win: MeshWindow) -> Result<MonotoneMap> {
    check_window(n, win)?;
    into_window(&format!("j({n})"), Arc::new(shapes::a_tilde(n)?), win, |l| j_label(n, l))
}

/// `i_n : A_n → mesh window`, `l ↦ (0,l)`.
pub fn i_mesh(n: usize, win: MeshWindow) -> Result<MonotoneMap> {
    check_window(n, win)?;
    into_window(&format!("i_mesh({n})"), Arc::new(shapes::a_n(n)?), win, |l| {
        Ok(Label::pair(0, coords(l)?[0]))
    })
}

/// `f_n(k,l) = (k+l, n+1−l)` between mesh windows.
pub fn f_label(n: usize, l: &Label) -> Result<Label> {
    let c = coords(l)?;
    Ok(Label::pair(c[0] + c[1], n as i64 + 1 - c[1]))
}

/// `t_n(k,l) = (k−1, l)`.
pub fn t_label(l: &Label) -> Result<Label> {
    let c = coords(l)?;
    Ok(Label::pair(c[0] - 1, c[1]))
}

/// `t_n^{-1}(k,l) = (k+1, l)`.
pub fn t_inv_label(l: &Label) -> Result<Label> {
    let c = coords(l)?;
    Ok(Label::pair(c[0] + 1, c[1]))
}

fn check_window(n: usize, win: MeshWindow) -> Result<()> {
    if win.n != n {
        return Err(Error::InvalidShape(format!("window is for M_{}, expected M_{n}", win.n)));
    }
    Ok(())
}

/// The shift symmetry `f_n` from window `src` into window `tgt`.
pub fn f_map(n: usize, src: MeshWindow, tgt: MeshWindow) -> Result<MonotoneMap> {
    check_window(n, src)?;
    check_window(n, tgt)?;
    into_window(&format!("f({n})"), Arc::new(src.poset()), tgt, |l| f_label(n, l))
}

/// The translation `t_n` from window `src` into window `tgt`.
pub fn t_map(n: usize, src: MeshWindow, tgt: MeshWindow) -> Result<MonotoneMap> {
    check_window(n, src)?;
    check_window(n, tgt)?;
    into_window(&format!("t({n})"), Arc::new(src.poset()), tgt, t_label)
}

/// `b_n = t_n^{-1} ∘ f_n ∘ j^n : A_tilde(n,2) → mesh window`, the embedding
/// that places the staircase on the cofiber positions of a filtration.
pub fn b_label(n: usize, l: &Label) -> Result<Label> {
    t_inv_label(&f_label(n, &j_label(n, l)?)?)
}

/// `b_n` as a map into a window.
pub fn b_map(n: usize, win: MeshWindow) -> Result<MonotoneMap> {
    check_window(n, win)?;
    into_window(&format!("b({n})"), Arc::new(shapes::a_tilde(n)?), win, |l| b_label(n, l))
}

/// The collapse `v : B̃ → B_collapsed` sending `a, c ↦ ac`.
pub fn collapse_v() -> MonotoneMap {
    MonotoneMap::from_fn("collapse_v", Arc::new(shapes::b_tilde()), Arc::new(shapes::b_collapsed()), |l| {
        Ok(match l {
            Label::Sym(s) if s == "a" || s == "c" => Label::sym("ac"),
            other => other.clone(),
        })
    })
    .expect("collapse_v is monotone")
}

/// `t : □ → K̃³_{1,2}`, sending the square's corner `(1,1)` to `(2,1)`.
pub fn cofiber_map() -> MonotoneMap {
    MonotoneMap::from_fn("tcof", Arc::new(shapes::square()), Arc::new(shapes::cofiber_shape()), |l| {
        Ok(if *l == Label::pair(1, 1) { Label::pair(2, 1) } else { l.clone() })
    })
    .expect("cofiber map is monotone")
}

/// `t' : □ → fiber_shape`, sending the square's corner `(0,0)` to `(-1,0)`.
pub fn fiber_map() -> MonotoneMap {
    MonotoneMap::from_fn("tfib", Arc::new(shapes::square()), Arc::new(shapes::fiber_shape()), |l| {
        Ok(if *l == Label::pair(0, 0) { Label::pair(-1, 0) } else { l.clone() })
    })
    .expect("fiber map is monotone")
}

/// The degree indexing of the staircase objects: the zero object `pt` for
/// the off-diagonal slots `(i,i+1)`, `n−1` for `(0,0)`, `n−i−2` for
/// `(i+1,i)` and `0` for the top.
///
/// The target is the category of coherent chain complexes, which is not a
/// poset (its hom-sets contain both a differential and zero), so this is a
/// plain label assignment rather than a [`MonotoneMap`].
#[derive(Clone, Copy, Debug)]
pub struct DoldKanIndex {
    n: usize,
}

impl DoldKanIndex {
    /// The indexing for `A_tilde(n,2)`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidShape(format!("u_map needs n ≥ 3, got {n}")));
        }
        Ok(Self { n })
    }

    /// Image label: `pt` or a degree.
    pub fn apply(&self, l: &Label) -> Result<Label> {
        Ok(match self.degree(l)? {
            None => Label::Pt,
            Some(d) => Label::int(d),
        })
    }

    /// Degree of a backbone slot, `None` for the slots sent to `pt`.
    pub fn degree(&self, l: &Label) -> Result<Option<i64>> {
        let c = coords(l)?;
        let n = self.n as i64;
        let top = if self.n == 3 { (2, 1) } else { (n - 2, n - 2) };
        if c.len() != 2 {
            return Err(Error::UnknownObject(format!("{l} in A_tilde({n},2)")));
        }
        let (x, y) = (c[0], c[1]);
        if (x, y) == top {
            Ok(Some(0))
        } else if (x, y) == (0, 0) {
            Ok(Some(n - 1))
        } else if x == y + 1 && x <= n - 2 {
            Ok(Some(n - y - 2))
        } else if y == x + 1 && y <= n - 2 {
            Ok(None)
        } else {
            Err(Error::UnknownObject(format!("{l} in A_tilde({n},2)")))
        }
    }

    /// Backbone slots (those with a degree), sorted by decreasing degree.
    pub fn backbone(&self) -> Result<Vec<(Label, i64)>> {
        let shape = shapes::a_tilde(self.n)?;
        let mut out = Vec::new();
        for l in shape.objects() {
            if let Some(d) = self.degree(l)? {
                out.push((l.clone(), d));
            }
        }
        out.sort_by_key(|e| std::cmp::Reverse(e.1));
        Ok(out)
    }
}
