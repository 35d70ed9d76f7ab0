//! Total (co)fibers of commutative squares and the bicartesian test.
//!
//! The total cofiber of a square `Q` is computed by left-Kan-extending the
//! square along `t : □ → K̃³_{1,2}` (which freely adjoins the pushout corner
//! below a new copy of `(1,1)`), reading off the comparison map
//! `(1,1) → (2,1)` and taking its cone.  Dually, the total fiber right-Kan-
//! extends along `□ → fiber_shape` and takes the desuspended cone of the
//! comparison map from the pullback corner.

use std::fmt;
use std::sync::Arc;

use super::{kan_extend, restrict, Diagram, KanSide};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homalg::{cone, ChainComplex};
use crate::poset::connectors::{cofiber_map, fiber_map};
use crate::poset::shapes::square;
use crate::poset::{FinPoset, Label, MonotoneMap};

/// A commutative square inside a shape: positions of the corners
/// `(0,0)`, `(1,0)`, `(0,1)`, `(1,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareRef {
    /// Labels of the four corners in the order `00, 10, 01, 11`.
    pub corners: [Label; 4],
}

impl fmt::Display for SquareRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.corners;
        write!(f, "[{a}, {b}, {c}, {d}]")
    }
}

impl SquareRef {
    /// A square from its corner labels `00, 10, 01, 11`.
    pub fn new(c00: Label, c10: Label, c01: Label, c11: Label) -> Self {
        Self { corners: [c00, c10, c01, c11] }
    }

    /// The embedding `□ → shape`, validating that the corners exist and
    /// satisfy the square relations.
    pub fn embedding(&self, shape: &Arc<FinPoset>) -> Result<MonotoneMap> {
        for c in &self.corners {
            if !shape.contains(c) {
                return Err(Error::InvalidSquare(format!("corner {c} of {self} is not in {}", shape.name())));
            }
        }
        let corners = self.corners.clone();
        MonotoneMap::from_fn(&format!("square{self}"), Arc::new(square()), shape.clone(), move |l| {
            let c = l.coords().expect("square labels are pairs");
            Ok(corners[(c[0] + 2 * c[1]) as usize].clone())
        })
        .map_err(|e| Error::InvalidSquare(format!("{self} does not satisfy the square relations: {e}")))
    }
}

/// The total cofiber of the square `sq` in `x`.
pub fn total_cofiber<F: Field>(sq: &SquareRef, x: &Diagram<F>) -> Result<ChainComplex<F>> {
    let q = restrict(&sq.embedding(x.shape())?, x)?;
    let t = cofiber_map();
    let q = q.with_shape(t.source().clone())?;
    let ext = kan_extend(KanSide::Left, &t, &q)?;
    let shape = t.target();
    let comparison = ext.map(shape.index_of(&Label::pair(1, 1))?, shape.index_of(&Label::pair(2, 1))?)?;
    Ok(cone(&comparison)?.cone)
}

/// The total fiber of the square `sq` in `x`.
pub fn total_fiber<F: Field>(sq: &SquareRef, x: &Diagram<F>) -> Result<ChainComplex<F>> {
    let q = restrict(&sq.embedding(x.shape())?, x)?;
    let t = fiber_map();
    let q = q.with_shape(t.source().clone())?;
    let ext = kan_extend(KanSide::Right, &t, &q)?;
    let shape = t.target();
    let comparison = ext.map(shape.index_of(&Label::pair(-1, 0))?, shape.index_of(&Label::pair(0, 0))?)?;
    Ok(cone(&comparison)?.cone.shift(-1))
}

/// Bicartesian test: the total cofiber is acyclic.  In audit mode the total
/// fiber decision is computed as well and must agree (stability).
pub fn is_bicartesian<F: Field>(sq: &SquareRef, x: &Diagram<F>, audit: bool) -> Result<bool> {
    let cocartesian = total_cofiber(sq, x)?.is_acyclic();
    if audit {
        let cartesian = total_fiber(sq, x)?.is_acyclic();
        if cartesian != cocartesian {
            return Err(Error::PropertyViolation(format!(
                "square {sq}: cocartesian = {cocartesian} but cartesian = {cartesian}"
            )));
        }
    }
    Ok(cocartesian)
}
