//! Boxes of geodesics and their Liouville masses.
//!
//! A box `Q = [a,b] × [c,d]` is the set of geodesics with tail in the
//! counterclockwise corner arc from `a` to `b` and head in the arc from
//! `c` to `d`, for four counterclockwise corner points (see
//! [`GeodesicBox::contains`] for the exact corner semantics). The
//! Liouville mass of a box is the logarithm of the corner crossratio,
//! which makes it invariant under every Möbius transformation.

use serde::{Deserialize, Serialize};

use crate::geodesic::Geodesic;
use crate::mobius::{CircleMap, Mobius};
use crate::point::{ccw, crossratio_unchecked, BoundaryPoint, GeomError};
use crate::tol::TOL_POINT;

/// A box of geodesics, with corners counterclockwise in the order
/// `a, b, c, d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox", into = "RawBox")]
pub struct GeodesicBox {
    a: BoundaryPoint,
    b: BoundaryPoint,
    c: BoundaryPoint,
    d: BoundaryPoint,
}

#[derive(Serialize, Deserialize)]
struct RawBox {
    a: BoundaryPoint,
    b: BoundaryPoint,
    c: BoundaryPoint,
    d: BoundaryPoint,
}

impl TryFrom<RawBox> for GeodesicBox {
    type Error = GeomError;
    fn try_from(r: RawBox) -> Result<Self, GeomError> {
        GeodesicBox::new(r.a, r.b, r.c, r.d)
    }
}

impl From<GeodesicBox> for RawBox {
    fn from(q: GeodesicBox) -> RawBox {
        RawBox {
            a: q.a,
            b: q.b,
            c: q.c,
            d: q.d,
        }
    }
}

impl GeodesicBox {
    /// Validates that the corners are pairwise distinct (within the point
    /// tolerance, for crossratio conditioning) and counterclockwise.
    pub fn new(
        a: BoundaryPoint,
        b: BoundaryPoint,
        c: BoundaryPoint,
        d: BoundaryPoint,
    ) -> Result<Self, GeomError> {
        let corners = [a, b, c, d];
        for i in 0..4 {
            for j in (i + 1)..4 {
                if corners[i].coincident_within(corners[j], TOL_POINT) {
                    return Err(GeomError::DegenerateCorners { i, j });
                }
            }
        }
        if !(ccw(a, b, c) && ccw(b, c, d) && ccw(c, d, a)) {
            return Err(GeomError::CornersNotCounterclockwise);
        }
        Ok(GeodesicBox { a, b, c, d })
    }

    pub fn from_angles(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeomError> {
        GeodesicBox::new(
            BoundaryPoint::from_angle(a),
            BoundaryPoint::from_angle(b),
            BoundaryPoint::from_angle(c),
            BoundaryPoint::from_angle(d),
        )
    }

    /// The standard symmetric box `[1, i] × [-1, -i]`.
    pub fn standard() -> Self {
        use std::f64::consts::{FRAC_PI_2, PI};
        GeodesicBox {
            a: BoundaryPoint::from_angle(0.0),
            b: BoundaryPoint::from_angle(FRAC_PI_2),
            c: BoundaryPoint::from_angle(PI),
            d: BoundaryPoint::from_angle(3.0 * FRAC_PI_2),
        }
    }

    pub fn a(&self) -> BoundaryPoint {
        self.a
    }
    pub fn b(&self) -> BoundaryPoint {
        self.b
    }
    pub fn c(&self) -> BoundaryPoint {
        self.c
    }
    pub fn d(&self) -> BoundaryPoint {
        self.d
    }

    pub fn corners(&self) -> [BoundaryPoint; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Liouville mass `log crossratio(a, b, c, d)`; strictly positive for
    /// a valid box, and invariant under Möbius images.
    pub fn liouville_mass(&self) -> f64 {
        crossratio_unchecked(self.a, self.b, self.c, self.d).ln()
    }

    /// The orthogonal box `Q⊥ = [b,c] × [d,a]` of crossing geodesics.
    pub fn ortho(&self) -> GeodesicBox {
        GeodesicBox {
            a: self.b,
            b: self.c,
            c: self.d,
            d: self.a,
        }
    }

    /// `Q⊥⊥ = [c,d] × [a,b]`: the orientation reversal of the box.
    pub fn reversed(&self) -> GeodesicBox {
        GeodesicBox {
            a: self.c,
            b: self.d,
            c: self.a,
            d: self.b,
        }
    }

    /// A box is symmetric when its mass equals `log 2` within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.liouville_mass() - std::f64::consts::LN_2).abs() <= tol
    }

    /// The image box under a circle homeomorphism. Corners are mapped
    /// directly; a homeomorphism preserves the box invariants, so they are
    /// not re-validated here.
    pub fn image<M: CircleMap + ?Sized>(&self, h: &M) -> GeodesicBox {
        GeodesicBox {
            a: h.eval(self.a),
            b: h.eval(self.b),
            c: h.eval(self.c),
            d: h.eval(self.d),
        }
    }

    pub fn image_mobius(&self, m: &Mobius) -> GeodesicBox {
        self.image(m)
    }

    /// Whether the oriented geodesic belongs to the box: tail in the
    /// corner arc `[a,b)` and head in `[c,d)`.
    ///
    /// The arcs include their starting corner and exclude their ending
    /// corner (with the point tolerance at both ends). This makes the
    /// diagonal `a→c` a member of `Q` and of no other box in the orbit
    /// `{Q, Q⊥, Q⊥⊥, Q⊥⊥⊥}`, and keeps masses exactly additive when a box
    /// is split along a shared corner. Genericity makes corner cases
    /// measure-zero anyway.
    pub fn contains(&self, g: &Geodesic) -> bool {
        g.tail().in_half_open_arc(self.a, self.b, TOL_POINT)
            && g.head().in_half_open_arc(self.c, self.d, TOL_POINT)
    }

    /// The diagonal geodesic from corner `a` to corner `c`.
    pub fn diagonal(&self) -> Geodesic {
        Geodesic::new(self.a, self.c).expect("box corners are distinct")
    }

    /// True when every corner arc of `self` is contained in the matching
    /// corner arc of `other`.
    pub fn contained_in(&self, other: &GeodesicBox) -> bool {
        self.a.in_closed_arc(other.a, other.b, TOL_POINT)
            && self.b.in_closed_arc(other.a, other.b, TOL_POINT)
            && self.c.in_closed_arc(other.c, other.d, TOL_POINT)
            && self.d.in_closed_arc(other.c, other.d, TOL_POINT)
    }
}
