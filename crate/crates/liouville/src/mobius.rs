//! Orientation-preserving isometries of the hyperbolic plane, acting on the
//! circle at infinity.
//!
//! A transformation is stored as a real 2×2 matrix with determinant +1,
//! acting on the half-plane chart by `z ↦ (m11·z + m12)/(m21·z + m22)`.
//! Boundary points are stored as disk angles, so the action is evaluated
//! projectively on the homogeneous pair `(sin(θ/2), cos(θ/2))`; this is
//! smooth across the chart pole and needs no infinity handling.

use serde::{Deserialize, Serialize};

use crate::geodesic::Geodesic;
use crate::point::{ccw, BoundaryPoint, GeomError};
use crate::tol::TOL_DET;

/// Anything that acts on the circle at infinity as a homeomorphism.
pub trait CircleMap {
    fn eval(&self, p: BoundaryPoint) -> BoundaryPoint;
}

/// An orientation-preserving Möbius transformation, normalized to
/// determinant +1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct Mobius {
    m: [[f64; 2]; 2],
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    /// Builds a transformation from a row-major matrix. The determinant
    /// must be positive; it is normalized to +1.
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self, GeomError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det <= 0.0 || !det.is_finite() {
            return Err(GeomError::NotOrientationPreserving { det });
        }
        let s = det.sqrt();
        Ok(Mobius {
            m: [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]],
        })
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, p: BoundaryPoint) -> BoundaryPoint {
        let (nu, nv) = self.apply_homogeneous(p.homogeneous());
        BoundaryPoint::from_angle(2.0 * nu.atan2(nv))
    }

    /// The raw projective action on homogeneous coordinates. Callers that
    /// need accuracy at extreme translation lengths work with these
    /// vectors directly instead of extracting angles.
    pub(crate) fn apply_homogeneous(&self, (u, v): (f64, f64)) -> (f64, f64) {
        (
            self.m[0][0] * u + self.m[0][1] * v,
            self.m[1][0] * u + self.m[1][1] * v,
        )
    }

    /// `self ∘ other`: applies `other` first.
    ///
    /// The product of two unimodular matrices is unimodular, so the result
    /// is not renormalized: recomputing the determinant of a product of
    /// strongly hyperbolic factors cancels catastrophically in floating
    /// point, while the entries themselves stay accurate.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let a = &self.m;
        let b = &other.m;
        Mobius {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    pub fn invert(&self) -> Mobius {
        Mobius {
            m: [[self.m[1][1], -self.m[0][1]], [-self.m[1][0], self.m[0][0]]],
        }
    }

    /// True when the boundary action is the identity, i.e. the matrix is
    /// `±I` within `tol`.
    pub fn is_identity(&self, tol: f64) -> bool {
        let s = self.m[0][0].signum();
        (self.m[0][0] * s - 1.0).abs() <= tol
            && (self.m[1][1] * s - 1.0).abs() <= tol
            && (self.m[0][1]).abs() <= tol
            && (self.m[1][0]).abs() <= tol
    }

    /// Rotation of the disk: boundary angles shift by `theta`.
    pub fn rotation(theta: f64) -> Mobius {
        let h = theta / 2.0;
        Mobius {
            m: [[h.cos(), h.sin()], [-h.sin(), h.cos()]],
        }
    }

    /// Hyperbolic element fixing 0 and ∞ of the half-plane chart:
    /// `z ↦ e^a · z`.
    pub fn dilation(a: f64) -> Mobius {
        let h = (a / 2.0).exp();
        Mobius {
            m: [[h, 0.0], [0.0, 1.0 / h]],
        }
    }

    /// Parabolic element fixing ∞ of the half-plane chart: `z ↦ z + n`.
    pub fn shear(n: f64) -> Mobius {
        Mobius {
            m: [[1.0, n], [0.0, 1.0]],
        }
    }

    /// Parabolic element fixing 0 of the half-plane chart:
    /// `z ↦ z / (n·z + 1)`.
    pub fn lower_shear(n: f64) -> Mobius {
        Mobius {
            m: [[1.0, 0.0], [n, 1.0]],
        }
    }

    /// The hyperbolic isometry that fixes both endpoints of `g` and
    /// translates by signed distance `t` along `g`, toward the head when
    /// `t > 0`.
    pub fn translation_along(g: &Geodesic, t: f64) -> Mobius {
        // Eigenvector construction: the head is the attracting fixed point
        // with eigenvalue e^{t/2}, the tail is repelling with e^{-t/2}.
        let (hu, hv) = g.head().homogeneous();
        let (tu, tv) = g.tail().homogeneous();
        let lp = (t / 2.0).exp();
        let lm = (-t / 2.0).exp();
        // M = P · diag(lp, lm) · P^{-1} with P = [head | tail]. The
        // conjugate of a unimodular diagonal matrix is unimodular, so no
        // determinant renormalization (which would cancel catastrophically
        // for large t) is applied.
        let det = hu * tv - hv * tu;
        Mobius {
            m: [
                [
                    (lp * hu * tv - lm * hv * tu) / det,
                    (lm - lp) * hu * tu / det,
                ],
                [
                    (lp - lm) * hv * tv / det,
                    (lm * hu * tv - lp * hv * tu) / det,
                ],
            ],
        }
    }

    /// The unique transformation sending the counterclockwise triple `src`
    /// to the counterclockwise triple `dst`, pointwise.
    pub fn from_triples(
        src: [BoundaryPoint; 3],
        dst: [BoundaryPoint; 3],
    ) -> Result<Mobius, GeomError> {
        for t in [&src, &dst] {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    if t[i].coincident(t[j]) {
                        return Err(GeomError::DegenerateTriple);
                    }
                }
            }
            if !ccw(t[0], t[1], t[2]) {
                return Err(GeomError::OrientationMismatch);
            }
        }
        let ps = frame_matrix(src);
        let pd = frame_matrix(dst);
        // M = P_dst · P_src^{-1} sends src_i through the standard frame to dst_i.
        let inv = [[ps[1][1], -ps[0][1]], [-ps[1][0], ps[0][0]]];
        let dets = ps[0][0] * ps[1][1] - ps[0][1] * ps[1][0];
        let m = [
            [
                (pd[0][0] * inv[0][0] + pd[0][1] * inv[1][0]) / dets,
                (pd[0][0] * inv[0][1] + pd[0][1] * inv[1][1]) / dets,
            ],
            [
                (pd[1][0] * inv[0][0] + pd[1][1] * inv[1][0]) / dets,
                (pd[1][0] * inv[0][1] + pd[1][1] * inv[1][1]) / dets,
            ],
        ];
        Mobius::new(m).map_err(|_| GeomError::OrientationMismatch)
    }

    /// Frobenius distance of the projective class of `self` to the class
    /// of `other` (the sign ambiguity of the matrices is quotiented out).
    pub fn projective_distance(&self, other: &Mobius) -> f64 {
        let mut dp: f64 = 0.0;
        let mut dm: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                dp += (self.m[i][j] - other.m[i][j]).powi(2);
                dm += (self.m[i][j] + other.m[i][j]).powi(2);
            }
        }
        dp.min(dm).sqrt()
    }
}

/// Matrix whose columns are homogeneous representatives of the triple,
/// scaled so that it sends the standard projective frame to the triple.
fn frame_matrix(t: [BoundaryPoint; 3]) -> [[f64; 2]; 2] {
    let (u1, v1) = t[0].homogeneous();
    let (u2, v2) = t[1].homogeneous();
    let (u3, v3) = t[2].homogeneous();
    // Solve λ·p1 + μ·p3 = p2.
    let det = u1 * v3 - v1 * u3;
    let lambda = (u2 * v3 - v2 * u3) / det;
    let mu = (u1 * v2 - v1 * u2) / det;
    [[lambda * u1, mu * u3], [lambda * v1, mu * v3]]
}

impl CircleMap for Mobius {
    fn eval(&self, p: BoundaryPoint) -> BoundaryPoint {
        self.apply(p)
    }
}

impl From<Mobius> for [f64; 4] {
    fn from(m: Mobius) -> [f64; 4] {
        [m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]]
    }
}

impl TryFrom<[f64; 4]> for Mobius {
    type Error = GeomError;
    fn try_from(v: [f64; 4]) -> Result<Self, GeomError> {
        Mobius::new([[v[0], v[1]], [v[2], v[3]]])
    }
}

/// Checks that the determinant normalization invariant holds.
pub fn det_normalized(m: &Mobius) -> bool {
    (m.det() - 1.0).abs() <= TOL_DET
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::TOL_POINT;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn pt(theta: f64) -> BoundaryPoint {
        BoundaryPoint::from_angle(theta)
    }

    fn real(x: f64) -> BoundaryPoint {
        BoundaryPoint::from_real(x)
    }

    #[test]
    fn identity_fixes_everything() {
        for theta in [0.0, 0.7, PI, 5.5] {
            assert!(Mobius::IDENTITY.apply(pt(theta)).coincident(pt(theta)));
        }
    }

    #[test]
    fn translation_map_acts_on_chart() {
        // z ↦ z + 1 sends 0 to 1.
        let m = Mobius::shear(1.0);
        assert!(m.apply(real(0.0)).coincident(real(1.0)));
        assert!(m.apply(real(f64::INFINITY)).coincident(real(f64::INFINITY)));
    }

    #[test]
    fn hyperbolic_translation_along_vertical_axis() {
        // Translation by log 2 along (0, ∞) is z ↦ 2z, so 1 ↦ 2.
        let g = Geodesic::new(real(0.0), real(f64::INFINITY)).unwrap();
        let m = Mobius::translation_along(&g, 2.0_f64.ln());
        assert!(m.apply(real(1.0)).coincident(real(2.0)));
        // The matrix itself is diag(√2, 1/√2).
        let mm = m.matrix();
        assert!((mm[0][0] - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((mm[1][1] - 0.5_f64.sqrt()).abs() < 1e-12);
        assert!(mm[0][1].abs() < 1e-12 && mm[1][0].abs() < 1e-12);
    }

    #[test]
    fn translation_zero_is_identity() {
        let g = Geodesic::new(pt(1.0), pt(4.0)).unwrap();
        assert!(Mobius::translation_along(&g, 0.0).is_identity(1e-12));
    }

    #[test]
    fn rejects_negative_determinant() {
        let e = Mobius::new([[0.0, 1.0], [1.0, 0.0]]);
        assert!(matches!(e, Err(GeomError::NotOrientationPreserving { .. })));
    }

    #[test]
    fn compose_with_identity() {
        let m = Mobius::rotation(1.3).compose(&Mobius::shear(0.7));
        let c = Mobius::IDENTITY.compose(&m);
        assert!(c.projective_distance(&m) < 1e-12);
    }

    #[test]
    fn inverse_of_translation() {
        // invert(z ↦ z+1) sends 1 to 0.
        let m = Mobius::shear(1.0).invert();
        assert!(m.apply(real(1.0)).coincident(real(0.0)));
    }

    #[test]
    fn triples_identity_when_src_equals_dst() {
        let t = [pt(0.2), pt(1.9), pt(4.0)];
        let m = Mobius::from_triples(t, t).unwrap();
        assert!(m.is_identity(1e-12));
    }

    #[test]
    fn triples_zero_one_infinity_rescaled() {
        // (0, 1, ∞) → (0, 2, ∞) is z ↦ 2z.
        let m = Mobius::from_triples(
            [real(0.0), real(1.0), real(f64::INFINITY)],
            [real(0.0), real(2.0), real(f64::INFINITY)],
        )
        .unwrap();
        assert!(m.projective_distance(&Mobius::dilation(2.0_f64.ln())) < 1e-12);
    }

    #[test]
    fn triples_disk_normalization_points() {
        // (1, i, -1) → (1, i, -1) is the identity.
        let t = [pt(0.0), pt(FRAC_PI_2), pt(PI)];
        assert!(Mobius::from_triples(t, t).unwrap().is_identity(1e-12));
    }

    #[test]
    fn triples_reject_bad_input() {
        let good = [pt(0.0), pt(1.0), pt(2.0)];
        let cw = [pt(2.0), pt(1.0), pt(0.0)];
        let degen = [pt(0.0), pt(0.0), pt(2.0)];
        assert_eq!(
            Mobius::from_triples(cw, good),
            Err(GeomError::OrientationMismatch)
        );
        assert_eq!(
            Mobius::from_triples(good, degen),
            Err(GeomError::DegenerateTriple)
        );
    }

    #[test]
    fn json_roundtrip_row_major() {
        let m = Mobius::rotation(0.9);
        let js = serde_json::to_string(&m).unwrap();
        let back: Mobius = serde_json::from_str(&js).unwrap();
        assert!(m.projective_distance(&back) < 1e-15);
        assert!(js.starts_with('['));
    }

    fn arb_mobius() -> impl Strategy<Value = Mobius> {
        (0.0..TAU, -2.5f64..2.5, -2.5f64..2.5).prop_map(|(r, a, n)| {
            Mobius::rotation(r)
                .compose(&Mobius::dilation(a))
                .compose(&Mobius::shear(n))
        })
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(m in arb_mobius(), theta in 0.0..TAU) {
            let p = pt(theta);
            let q = m.invert().apply(m.apply(p));
            prop_assert!(p.circular_distance(q) < 1e-9);
        }

        #[test]
        fn composition_is_pointwise(m1 in arb_mobius(), m2 in arb_mobius(), theta in 0.0..TAU) {
            let p = pt(theta);
            let q1 = m1.compose(&m2).apply(p);
            let q2 = m1.apply(m2.apply(p));
            prop_assert!(q1.circular_distance(q2) < 1e-9);
        }

        #[test]
        fn determinant_stays_normalized(m1 in arb_mobius(), m2 in arb_mobius()) {
            prop_assert!(det_normalized(&m1.compose(&m2)));
        }

        #[test]
        fn triples_map_points(
            s0 in 0.0..TAU, s1 in 0.3f64..1.8, s2 in 0.3f64..1.8,
            d0 in 0.0..TAU, d1 in 0.3f64..1.8, d2 in 0.3f64..1.8,
        ) {
            let src = [pt(s0), pt(s0 + s1), pt(s0 + s1 + s2)];
            let dst = [pt(d0), pt(d0 + d1), pt(d0 + d1 + d2)];
            let m = Mobius::from_triples(src, dst).unwrap();
            for i in 0..3 {
                prop_assert!(m.apply(src[i]).circular_distance(dst[i]) < TOL_POINT.max(1e-11));
            }
        }

        #[test]
        fn translation_fixes_axis_endpoints(
            t0 in 0.0..TAU, gap in 0.3f64..5.0, t in -3.0f64..3.0,
        ) {
            let g = Geodesic::new(pt(t0), pt(t0 + gap)).unwrap();
            let m = Mobius::translation_along(&g, t);
            prop_assert!(m.apply(g.tail()).circular_distance(g.tail()) < 1e-9);
            prop_assert!(m.apply(g.head()).circular_distance(g.head()) < 1e-9);
        }

        #[test]
        fn translation_flow_adds(
            t0 in 0.0..TAU, gap in 0.3f64..5.0,
            s in -2.0f64..2.0, t in -2.0f64..2.0,
        ) {
            let g = Geodesic::new(pt(t0), pt(t0 + gap)).unwrap();
            let a = Mobius::translation_along(&g, s).compose(&Mobius::translation_along(&g, t));
            let b = Mobius::translation_along(&g, s + t);
            prop_assert!(a.projective_distance(&b) < 1e-9);
        }
    }
}
