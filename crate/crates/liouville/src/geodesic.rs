//! Complete oriented geodesics of the hyperbolic plane, encoded by their
//! ordered pair of distinct endpoints on the circle at infinity.

use serde::{Deserialize, Serialize};

use crate::mobius::{CircleMap, Mobius};
use crate::point::{BoundaryPoint, GeomError};
use crate::tol::TOL_POINT;

/// Which side of an oriented geodesic a boundary point lies on.
///
/// The left of the oriented geodesic tail→head is the open
/// counterclockwise arc (head, tail): the upward axis (0, ∞) of the
/// half-plane chart has the negative reals on its left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An oriented geodesic, from `tail` to `head`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    tail: BoundaryPoint,
    head: BoundaryPoint,
}

impl Geodesic {
    pub fn new(tail: BoundaryPoint, head: BoundaryPoint) -> Result<Self, GeomError> {
        if tail.coincident(head) {
            return Err(GeomError::DegenerateGeodesic);
        }
        Ok(Geodesic { tail, head })
    }

    pub fn tail(&self) -> BoundaryPoint {
        self.tail
    }

    pub fn head(&self) -> BoundaryPoint {
        self.head
    }

    pub fn reverse(&self) -> Geodesic {
        Geodesic {
            tail: self.head,
            head: self.tail,
        }
    }

    /// The image geodesic under any circle homeomorphism.
    pub fn image<M: CircleMap + ?Sized>(&self, h: &M) -> Geodesic {
        Geodesic {
            tail: h.eval(self.tail),
            head: h.eval(self.head),
        }
    }

    pub fn image_mobius(&self, m: &Mobius) -> Geodesic {
        self.image(m)
    }

    /// Side of the geodesic on which `p` lies.
    pub fn side_of(&self, p: BoundaryPoint) -> Result<Side, GeomError> {
        if p.coincident_within(self.tail, TOL_POINT) || p.coincident_within(self.head, TOL_POINT) {
            return Err(GeomError::PointOnGeodesicEndpoint);
        }
        if p.in_open_arc(self.head, self.tail) {
            Ok(Side::Left)
        } else {
            Ok(Side::Right)
        }
    }

    /// Whether the two geodesics cross inside the hyperbolic plane:
    /// exactly one endpoint of `other` lies in the open arc from the tail
    /// of `self` to its head. Sharing an endpoint counts as not crossing,
    /// as do equal or mutually reversed geodesics.
    pub fn crosses(&self, other: &Geodesic) -> bool {
        let shares = |p: BoundaryPoint| {
            p.coincident_within(self.tail, TOL_POINT) || p.coincident_within(self.head, TOL_POINT)
        };
        if shares(other.tail) || shares(other.head) {
            return false;
        }
        let in_arc = |p: BoundaryPoint| p.in_open_arc(self.tail, self.head);
        in_arc(other.tail) != in_arc(other.head)
    }

    /// Unoriented coincidence within `tol`: equal or reversed endpoints.
    pub fn same_unoriented(&self, other: &Geodesic, tol: f64) -> bool {
        (self.tail.coincident_within(other.tail, tol)
            && self.head.coincident_within(other.head, tol))
            || (self.tail.coincident_within(other.head, tol)
                && self.head.coincident_within(other.tail, tol))
    }
}
