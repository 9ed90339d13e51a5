//! Points of the circle at infinity.
//!
//! A boundary point is stored canonically as an angle in `[0, 2π)` on the
//! unit circle. The half-plane chart is a view: the Cayley transform
//! `z = i(1-w)/(1+w)` restricts on the boundary to `x = tan(θ/2)`, sending
//! the angle `π` to `∞`. Storing angles means no stored datum is ever
//! infinite; `∞` only appears when a caller asks for the half-plane
//! coordinate.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol::TOL_POINT;

/// Errors raised by the point/matrix/geodesic layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("points coincide within tolerance")]
    DegeneratePoints,
    #[error("triple contains coincident points")]
    DegenerateTriple,
    #[error("triple is not in counterclockwise order")]
    OrientationMismatch,
    #[error("matrix determinant {det} is not positive")]
    NotOrientationPreserving { det: f64 },
    #[error("geodesic endpoints coincide within tolerance")]
    DegenerateGeodesic,
    #[error("point lies on a geodesic endpoint")]
    PointOnGeodesicEndpoint,
    #[error("box corners {i} and {j} coincide within tolerance")]
    DegenerateCorners { i: usize, j: usize },
    #[error("box corners are not in counterclockwise order")]
    CornersNotCounterclockwise,
}

/// A point of the circle at infinity, stored as an angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryPoint {
    angle: f64,
}

/// Maps any finite angle to its representative in `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

impl BoundaryPoint {
    pub fn from_angle(theta: f64) -> Self {
        BoundaryPoint {
            angle: normalize_angle(theta),
        }
    }

    /// The point whose half-plane coordinate is `x` (use `f64::INFINITY`
    /// for the point at infinity of the chart).
    pub fn from_real(x: f64) -> Self {
        if x.is_infinite() {
            BoundaryPoint { angle: PI }
        } else {
            BoundaryPoint::from_angle(2.0 * x.atan())
        }
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    /// Half-plane chart coordinate `tan(θ/2)`; the angle `π` maps to `∞`.
    pub fn to_real(self) -> f64 {
        if (self.angle - PI).abs() == 0.0 {
            f64::INFINITY
        } else {
            (self.angle / 2.0).tan()
        }
    }

    /// Homogeneous coordinates `(sin(θ/2), cos(θ/2))` of the half-plane
    /// chart point, suitable for the projective matrix action.
    pub(crate) fn homogeneous(self) -> (f64, f64) {
        let h = self.angle / 2.0;
        (h.sin(), h.cos())
    }

    /// Circular distance in `[0, π]`.
    pub fn circular_distance(self, other: BoundaryPoint) -> f64 {
        let d = (self.angle - other.angle).rem_euclid(TAU);
        d.min(TAU - d)
    }

    pub fn coincident(self, other: BoundaryPoint) -> bool {
        self.coincident_within(other, TOL_POINT)
    }

    pub fn coincident_within(self, other: BoundaryPoint, tol: f64) -> bool {
        self.circular_distance(other) < tol
    }

    /// Counterclockwise gap from `self` to `other`, in `[0, 2π)`.
    pub fn ccw_gap_to(self, other: BoundaryPoint) -> f64 {
        (other.angle - self.angle).rem_euclid(TAU)
    }

    /// Point at the given fraction of the counterclockwise arc from
    /// `self` to `other`.
    pub fn arc_point(self, other: BoundaryPoint, fraction: f64) -> BoundaryPoint {
        BoundaryPoint::from_angle(self.angle + fraction * self.ccw_gap_to(other))
    }

    /// Membership in the closed counterclockwise arc `[from, to]`, with
    /// inclusive semantics of width `tol` at the arc endpoints.
    pub fn in_closed_arc(self, from: BoundaryPoint, to: BoundaryPoint, tol: f64) -> bool {
        if self.coincident_within(from, tol) || self.coincident_within(to, tol) {
            return true;
        }
        from.ccw_gap_to(self) <= from.ccw_gap_to(to)
    }

    /// Membership in the open counterclockwise arc `(from, to)`.
    pub fn in_open_arc(self, from: BoundaryPoint, to: BoundaryPoint) -> bool {
        let d = from.ccw_gap_to(self);
        d > 0.0 && d < from.ccw_gap_to(to)
    }

    /// Membership in the half-open counterclockwise arc `[from, to)`, with
    /// tolerance `tol` at both ends: inclusive at `from`, exclusive at
    /// `to`. This is the corner-arc semantics of boxes; it keeps box
    /// masses exactly additive when a box is split along a shared corner.
    pub fn in_half_open_arc(self, from: BoundaryPoint, to: BoundaryPoint, tol: f64) -> bool {
        if self.coincident_within(from, tol) {
            return true;
        }
        if self.coincident_within(to, tol) {
            return false;
        }
        from.ccw_gap_to(self) < from.ccw_gap_to(to)
    }
}

/// True when the three points occur counterclockwise in this order
/// (strictly, i.e. the points must be pairwise distinct).
pub fn ccw(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint) -> bool {
    let ab = a.ccw_gap_to(b);
    let ac = a.ccw_gap_to(c);
    ab > 0.0 && ac > 0.0 && ab < ac
}

/// Crossratio `(a-c)(b-d) / ((a-d)(b-c))` of four boundary points, in the
/// complex coordinates of the disk chart.
///
/// For points on the unit circle the phases cancel and the value reduces
/// to a ratio of sines of half-angle differences, so the computation is
/// real, chart-free, and has no pole at any position of the four points.
/// The value is `> 1` exactly when `(a, b, c, d)` are counterclockwise.
pub fn crossratio(
    a: BoundaryPoint,
    b: BoundaryPoint,
    c: BoundaryPoint,
    d: BoundaryPoint,
) -> Result<f64, GeomError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i].coincident(pts[j]) {
                return Err(GeomError::DegeneratePoints);
            }
        }
    }
    Ok(crossratio_unchecked(a, b, c, d))
}

/// Crossratio without the coincidence check, for callers whose inputs are
/// corners of an already validated box (possibly transported by a map).
pub(crate) fn crossratio_unchecked(
    a: BoundaryPoint,
    b: BoundaryPoint,
    c: BoundaryPoint,
    d: BoundaryPoint,
) -> f64 {
    let s = |p: BoundaryPoint, q: BoundaryPoint| ((p.angle() - q.angle()) / 2.0).sin();
    (s(a, c) * s(b, d)) / (s(a, d) * s(b, c))
}
