//! Piecewise-Möbius circle homeomorphisms.
//!
//! These maps are the concrete boundary representatives of points of the
//! universal Teichmüller space: finitely many Möbius arcs glued
//! continuously around the circle. Elementary earthquakes produce exactly
//! such maps, and every quantity of interest (Liouville pullback masses,
//! class equality, the quasisymmetric constant) is computed from the
//! boundary data alone; no interior extension is ever built.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boxes::GeodesicBox;
use crate::currents::{Atom, BoxMeasure};
use crate::mobius::{CircleMap, Mobius};
use crate::point::{BoundaryPoint, GeomError};
use crate::sampler::{pinned_corner_elements, sup_estimate, SamplerConfig};
use crate::tol::TOL_POINT;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("{pieces} pieces cannot govern {breaks} breakpoints")]
    ArityMismatch { breaks: usize, pieces: usize },
    #[error("breakpoints {i} and {j} coincide within tolerance")]
    DuplicateBreaks { i: usize, j: usize },
    #[error("adjacent pieces disagree at breakpoint {index}")]
    ContinuityViolation { index: usize },
    #[error("image arcs overlap at piece {index}")]
    ImagesOverlap { index: usize },
    #[error("mass pairs do not satisfy the orthogonal-box identity")]
    InconsistentMasses,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// An orientation-preserving circle homeomorphism given by finitely many
/// Möbius arcs.
///
/// `pieces[i]` governs the closed counterclockwise arc from `breaks[i]` to
/// the next breakpoint; with no breakpoints the map is a single global
/// Möbius transformation. Breakpoints are kept sorted by angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct PiecewiseMobiusHomeo {
    breaks: Vec<BoundaryPoint>,
    pieces: Vec<Mobius>,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    breaks: Vec<BoundaryPoint>,
    pieces: Vec<Mobius>,
}

impl TryFrom<RawMap> for PiecewiseMobiusHomeo {
    type Error = MapError;
    fn try_from(r: RawMap) -> Result<Self, MapError> {
        PiecewiseMobiusHomeo::new(r.breaks, r.pieces)
    }
}

impl From<PiecewiseMobiusHomeo> for RawMap {
    fn from(f: PiecewiseMobiusHomeo) -> RawMap {
        RawMap {
            breaks: f.breaks,
            pieces: f.pieces,
        }
    }
}

impl PiecewiseMobiusHomeo {
    pub fn global(m: Mobius) -> Self {
        PiecewiseMobiusHomeo {
            breaks: Vec::new(),
            pieces: vec![m],
        }
    }

    pub fn identity() -> Self {
        PiecewiseMobiusHomeo::global(Mobius::IDENTITY)
    }

    /// Validates breakpoint/piece data. `pieces[i]` starts at `breaks[i]`;
    /// the pairs may be supplied in any order and are sorted by angle.
    pub fn new(breaks: Vec<BoundaryPoint>, pieces: Vec<Mobius>) -> Result<Self, MapError> {
        if breaks.is_empty() {
            if pieces.len() != 1 {
                return Err(MapError::ArityMismatch {
                    breaks: 0,
                    pieces: pieces.len(),
                });
            }
            return Ok(PiecewiseMobiusHomeo { breaks, pieces });
        }
        if pieces.len() != breaks.len() {
            return Err(MapError::ArityMismatch {
                breaks: breaks.len(),
                pieces: pieces.len(),
            });
        }
        let mut pairs: Vec<(BoundaryPoint, Mobius)> = breaks.into_iter().zip(pieces).collect();
        pairs.sort_by(|x, y| x.0.angle().partial_cmp(&y.0.angle()).expect("finite"));
        let n = pairs.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if pairs[i].0.coincident_within(pairs[j].0, TOL_POINT) && n > 1 {
                return Err(MapError::DuplicateBreaks { i, j });
            }
        }
        let map = PiecewiseMobiusHomeo {
            breaks: pairs.iter().map(|p| p.0).collect(),
            pieces: pairs.iter().map(|p| p.1).collect(),
        };
        map.validate()?;
        Ok(map)
    }

    /// Assembles a map whose invariants hold by construction (sorted
    /// breakpoints, continuous pieces), skipping re-validation. The
    /// earthquake builder uses this: at large amplitudes the image corners
    /// collapse below angle resolution and the generic winding check
    /// cannot tell a tiny positive gap from rounding noise, even though
    /// the pieces themselves are exact.
    pub(crate) fn from_parts(breaks: Vec<BoundaryPoint>, pieces: Vec<Mobius>) -> Self {
        debug_assert!(breaks.windows(2).all(|w| w[0].angle() < w[1].angle()));
        debug_assert_eq!(pieces.len(), breaks.len().max(1));
        PiecewiseMobiusHomeo { breaks, pieces }
    }

    fn validate(&self) -> Result<(), MapError> {
        let n = self.breaks.len();
        if n == 0 {
            return Ok(());
        }
        // Continuity: the piece ending at a breakpoint agrees there with
        // the piece starting at it.
        let mut corners = Vec::with_capacity(n);
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let here = self.pieces[i].apply(self.breaks[i]);
            let there = self.pieces[prev].apply(self.breaks[i]);
            if !here.coincident_within(there, TOL_POINT.max(1e-9)) {
                return Err(MapError::ContinuityViolation { index: i });
            }
            corners.push(here);
        }
        // Injectivity and orientation: image corners stay in strict
        // counterclockwise order and wind exactly once.
        let mut total = 0.0;
        for i in 0..n {
            let gap = corners[i].ccw_gap_to(corners[(i + 1) % n]);
            if n > 1 && gap <= 0.0 {
                return Err(MapError::ImagesOverlap { index: i });
            }
            total += gap;
        }
        if n > 1 && (total - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(MapError::ImagesOverlap { index: 0 });
        }
        Ok(())
    }

    pub fn breaks(&self) -> &[BoundaryPoint] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Mobius] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    fn piece_index(&self, p: BoundaryPoint) -> usize {
        let n = self.breaks.len();
        if n == 0 {
            return 0;
        }
        let t = p.angle();
        let k = self.breaks.partition_point(|b| b.angle() <= t);
        (k + n - 1) % n
    }

    pub fn piece_at(&self, p: BoundaryPoint) -> &Mobius {
        &self.pieces[self.piece_index(p)]
    }

    /// Evaluates the map. Well defined at breakpoints by the continuity
    /// invariant.
    pub fn apply(&self, p: BoundaryPoint) -> BoundaryPoint {
        self.piece_at(p).apply(p)
    }

    /// The same map with extra breakpoints inserted (each splitting an arc
    /// into two arcs carrying the same Möbius piece).
    pub fn with_breaks(&self, extra: &[BoundaryPoint]) -> Self {
        let mut pairs: Vec<(BoundaryPoint, Mobius)> = self
            .breaks
            .iter()
            .copied()
            .zip(self.pieces.iter().copied())
            .collect();
        for &p in extra {
            if pairs.iter().any(|(b, _)| b.coincident_within(p, TOL_POINT)) {
                continue;
            }
            // For a global map the single piece starts wherever the first
            // inserted break lands.
            pairs.push((p, *self.piece_at(p)));
        }
        if pairs.is_empty() {
            return self.clone();
        }
        pairs.sort_by(|x, y| x.0.angle().partial_cmp(&y.0.angle()).expect("finite"));
        PiecewiseMobiusHomeo {
            breaks: pairs.iter().map(|q| q.0).collect(),
            pieces: pairs.iter().map(|q| q.1).collect(),
        }
    }

    /// Post-composition with a global Möbius map; keeps every breakpoint.
    pub fn post_compose(&self, m: &Mobius) -> Self {
        PiecewiseMobiusHomeo {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| m.compose(p)).collect(),
        }
    }

    /// `self ∘ other`. Breakpoints of the composite are the breakpoints of
    /// `other` together with the preimages under `other` of the
    /// breakpoints of `self`.
    pub fn compose(&self, other: &Self) -> Result<Self, MapError> {
        if self.breaks.is_empty() {
            return Ok(other.post_compose(&self.pieces[0]));
        }
        let other_inv = other.invert();
        let mut breaks: Vec<BoundaryPoint> = other.breaks.clone();
        for b in &self.breaks {
            let pre = other_inv.apply(*b);
            if !breaks.iter().any(|x| x.coincident_within(pre, TOL_POINT)) {
                breaks.push(pre);
            }
        }
        if breaks.is_empty() {
            return Ok(PiecewiseMobiusHomeo::global(
                self.pieces[0].compose(&other.pieces[0]),
            ));
        }
        breaks.sort_by(|x, y| x.angle().partial_cmp(&y.angle()).expect("finite"));
        let n = breaks.len();
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let mid = breaks[i].arc_point(breaks[(i + 1) % n], 0.5);
            let inner = other.piece_at(mid);
            let outer = self.piece_at(other.apply(mid));
            pieces.push(outer.compose(inner));
        }
        let composite = PiecewiseMobiusHomeo { breaks, pieces };
        composite.validate()?;
        Ok(composite)
    }

    /// The inverse homeomorphism: image corners become the breakpoints and
    /// each piece is inverted.
    pub fn invert(&self) -> Self {
        if self.breaks.is_empty() {
            return PiecewiseMobiusHomeo::global(self.pieces[0].invert());
        }
        let mut pairs: Vec<(BoundaryPoint, Mobius)> = self
            .breaks
            .iter()
            .zip(&self.pieces)
            .map(|(b, m)| (m.apply(*b), m.invert()))
            .collect();
        pairs.sort_by(|x, y| x.0.angle().partial_cmp(&y.0.angle()).expect("finite"));
        PiecewiseMobiusHomeo {
            breaks: pairs.iter().map(|p| p.0).collect(),
            pieces: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Post-composes with the unique Möbius map sending the images of
    /// `src` to `dst`; the result is in the same class and has its three
    /// normalization points pinned.
    pub fn normalize3(
        &self,
        src: [BoundaryPoint; 3],
        dst: [BoundaryPoint; 3],
    ) -> Result<Self, MapError> {
        let imgs = [self.apply(src[0]), self.apply(src[1]), self.apply(src[2])];
        let m = Mobius::from_triples(imgs, dst)?;
        Ok(self.post_compose(&m))
    }

    /// The Liouville pullback of this map: the box measure
    /// `Q ↦ log crossratio(f(a), f(b), f(c), f(d))`.
    pub fn liouville_current(&self) -> LiouvillePullback {
        LiouvillePullback { map: self.clone() }
    }

    /// The image of `p` as a unit homogeneous vector plus the logarithm of
    /// its pre-normalization norm. Mass computations work with these
    /// vectors: extracting an angle first would throw away all precision
    /// near the attracting fixed point of a strong translation.
    pub(crate) fn image_log_vector(&self, p: BoundaryPoint) -> (f64, f64, f64) {
        let (u, v) = self.piece_at(p).apply_homogeneous(p.homogeneous());
        let norm = u.hypot(v);
        (u / norm, v / norm, norm.ln())
    }
}

impl CircleMap for PiecewiseMobiusHomeo {
    fn eval(&self, p: BoundaryPoint) -> BoundaryPoint {
        self.apply(p)
    }
}

/// The standard normalization triple `(1, i, -1)`.
pub fn standard_triple() -> [BoundaryPoint; 3] {
    [
        BoundaryPoint::from_angle(0.0),
        BoundaryPoint::from_angle(std::f64::consts::FRAC_PI_2),
        BoundaryPoint::from_angle(std::f64::consts::PI),
    ]
}

/// Largest pointwise disagreement between the standard-triple
/// normalizations of two maps, sampled at all their breakpoints plus
/// `samples` quasi-uniform (golden-ratio) points. Two maps represent the
/// same boundary class exactly when this vanishes.
pub fn class_deviation(f: &PiecewiseMobiusHomeo, g: &PiecewiseMobiusHomeo, samples: usize) -> f64 {
    let tri = standard_triple();
    let nf = f
        .normalize3(tri, tri)
        .expect("homeomorphism images of a triple stay a triple");
    let ng = g
        .normalize3(tri, tri)
        .expect("homeomorphism images of a triple stay a triple");
    let mut points: Vec<BoundaryPoint> =
        Vec::with_capacity(samples + nf.breaks.len() + ng.breaks.len());
    points.extend_from_slice(&nf.breaks);
    points.extend_from_slice(&ng.breaks);
    const GOLDEN_FRAC: f64 = 0.618_033_988_749_894_9;
    for k in 0..samples {
        let frac = (0.5 + k as f64 * GOLDEN_FRAC).fract();
        points.push(BoundaryPoint::from_angle(std::f64::consts::TAU * frac));
    }
    points
        .iter()
        .map(|&p| nf.apply(p).circular_distance(ng.apply(p)))
        .fold(0.0, f64::max)
}

/// Whether two maps represent the same boundary class, i.e. agree after
/// Möbius post-composition, within `tol` at the sampled points.
pub fn class_equal(
    f: &PiecewiseMobiusHomeo,
    g: &PiecewiseMobiusHomeo,
    tol: f64,
    samples: usize,
) -> bool {
    class_deviation(f, g, samples) <= tol
}

/// The pullback of the target Liouville measure under a boundary map.
///
/// As a [`BoxMeasure`] it assigns to each box the Liouville mass of its
/// image box; it satisfies the orthogonal-box identity because the image
/// of `Q⊥` is the orthogonal box of the image of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillePullback {
    map: PiecewiseMobiusHomeo,
}

impl LiouvillePullback {
    pub fn map(&self) -> &PiecewiseMobiusHomeo {
        &self.map
    }
}

impl BoxMeasure for LiouvillePullback {
    /// `log crossratio` of the image corners, evaluated as a sum of
    /// log-wedges of homogeneous vectors. The wedge of two unit vectors
    /// `(sin s, cos s)`, `(sin t, cos t)` is `sin(s - t)`, so this agrees
    /// exactly with the chart crossratio while staying accurate for
    /// arbitrarily strong maps, where corner angles would collapse.
    fn mass(&self, q: &GeodesicBox) -> f64 {
        let a = self.map.image_log_vector(q.a());
        let b = self.map.image_log_vector(q.b());
        let c = self.map.image_log_vector(q.c());
        let d = self.map.image_log_vector(q.d());
        let log_wedge =
            |p: (f64, f64, f64), r: (f64, f64, f64)| (p.0 * r.1 - p.1 * r.0).abs().ln() + p.2 + r.2;
        log_wedge(a, c) + log_wedge(b, d) - log_wedge(a, d) - log_wedge(b, c)
    }

    fn support_atoms(&self) -> Option<&[Atom]> {
        None
    }
}

/// Lower-bound estimate of the quasisymmetric constant
/// `M(f) = sup over symmetric boxes Q of L_f(Q) / log 2`.
///
/// Symmetric boxes are exactly the Möbius images of the standard box, so
/// the sampler sweeps group elements. Each sample evaluates both the image
/// box and its orthogonal box; the orthogonal-box identity forces the
/// larger of the two masses to be at least `log 2`, so the estimate is
/// always at least `1` up to rounding. Extra candidates pin a box corner
/// near each breakpoint of the map, where the distortion of a
/// piecewise-Möbius map concentrates.
pub fn qs_constant_estimate(
    f: &PiecewiseMobiusHomeo,
    cfg: &SamplerConfig,
) -> Result<f64, crate::currents::CurrentError> {
    let pullback = f.liouville_current();
    let q_std = GeodesicBox::standard();
    let q_ortho = q_std.ortho();
    let objective = move |phi: &Mobius| {
        let m1 = pullback.mass(&q_std.image_mobius(phi));
        let m2 = pullback.mass(&q_ortho.image_mobius(phi));
        m1.max(m2) / std::f64::consts::LN_2
    };
    let mut seeds = vec![Mobius::IDENTITY];
    let near_break_cfg = SamplerConfig {
        dilation_steps: cfg.dilation_steps / 2 + 1,
        shear_steps: cfg.shear_steps / 2 + 1,
        ..cfg.clone()
    };
    for b in f.breaks() {
        seeds.extend(pinned_corner_elements(*b, 0.05, 5, &near_break_cfg));
    }
    sup_estimate(objective, &seeds, cfg)
}

/// Solves for the scale `t` relating two Liouville mass pairs on a box and
/// its orthogonal box, `pair2 = t · pair1`.
///
/// Both pairs must satisfy the orthogonal-box identity within `tol`; the
/// identity pins the scale, so for genuine Liouville data the returned
/// value is `1`.
pub fn recover_projective_scale(
    pair1: (f64, f64),
    pair2: (f64, f64),
    tol: f64,
) -> Result<f64, MapError> {
    let identity_residual = |p: (f64, f64)| ((-p.0).exp() + (-p.1).exp() - 1.0).abs();
    if identity_residual(pair1) > tol || identity_residual(pair2) > tol {
        return Err(MapError::InconsistentMasses);
    }
    let (x1, y1) = pair1;
    let (x2, y2) = pair2;
    let t = (x1 * x2 + y1 * y2) / (x1 * x1 + y1 * y1);
    let scale = x1.abs().max(y1.abs()).max(1.0);
    if (x2 - t * x1).abs() > tol * scale || (y2 - t * y1).abs() > tol * scale {
        return Err(MapError::InconsistentMasses);
    }
    Ok(t)
}

/// The unique `t > 0` for which `(t·x, t·y)` satisfies the orthogonal-box
/// identity, given that `(x, y)` already does. The map
/// `t ↦ e^{-tx} + e^{-ty}` is strictly decreasing, so the root is unique
/// and must equal `1`; recovering it numerically from a remote starting
/// point is the rigidity check. The map is also convex, so Newton from
/// the left converges monotonically.
pub fn ortho_consistent_scale(x: f64, y: f64) -> f64 {
    let psi = |t: f64| (-t * x).exp() + (-t * y).exp() - 1.0;
    let dpsi = |t: f64| -x * (-t * x).exp() - y * (-t * y).exp();
    let mut t = 0.25;
    for _ in 0..80 {
        let v = psi(t);
        let d = dpsi(t);
        let step = v / d;
        t -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::integrate;
    use crate::currents::StepFunction;
    use crate::geodesic::Geodesic;
    use proptest::prelude::*;
    use std::f64::consts::{LN_2, PI, TAU};

    fn pt(theta: f64) -> BoundaryPoint {
        BoundaryPoint::from_angle(theta)
    }

    fn quick() -> SamplerConfig {
        SamplerConfig {
            refine_rounds: 0,
            ..SamplerConfig::coarse()
        }
    }

    /// A two-piece map glued along a diameter: identity on one side,
    /// translation along the diameter on the other.
    fn two_piece_map(t: f64) -> PiecewiseMobiusHomeo {
        let g = Geodesic::new(pt(0.0), pt(PI)).unwrap();
        crate::earthquake::elementary_earthquake(&PiecewiseMobiusHomeo::identity(), &g, t).unwrap()
    }

    #[test]
    fn identity_map_fixes_points() {
        let id = PiecewiseMobiusHomeo::identity();
        for theta in [0.0, 1.0, PI, 5.0] {
            assert!(id.apply(pt(theta)).coincident(pt(theta)));
        }
    }

    #[test]
    fn global_map_agrees_with_matrix() {
        let m = Mobius::rotation(0.7).compose(&Mobius::shear(0.3));
        let f = PiecewiseMobiusHomeo::global(m);
        for theta in [0.0, 1.3, PI, 4.4] {
            assert!(f.apply(pt(theta)).coincident(m.apply(pt(theta))));
        }
    }

    #[test]
    fn breakpoint_values_are_consistent() {
        let f = two_piece_map(0.8);
        for b in f.breaks() {
            let n = f.breaks().len();
            let i = f.breaks().iter().position(|x| x == b).unwrap();
            let prev = f.pieces()[(i + n - 1) % n].apply(*b);
            let here = f.pieces()[i].apply(*b);
            assert!(prev.coincident_within(here, 1e-9));
        }
    }

    #[test]
    fn continuity_violation_is_reported() {
        let breaks = vec![pt(0.0), pt(PI)];
        let pieces = vec![Mobius::IDENTITY, Mobius::shear(1.0)];
        assert!(matches!(
            PiecewiseMobiusHomeo::new(breaks, pieces),
            Err(MapError::ContinuityViolation { .. })
        ));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let f = two_piece_map(1.1);
        let inv = f.invert();
        let comp = f.compose(&inv).unwrap();
        assert!(class_equal(
            &comp,
            &PiecewiseMobiusHomeo::identity(),
            1e-9,
            256
        ));
        for theta in [0.2, 1.5, 3.0, 4.8] {
            assert!(comp.apply(pt(theta)).circular_distance(pt(theta)) < 1e-9);
        }
    }

    #[test]
    fn composite_piece_count_bound() {
        let f = two_piece_map(0.5);
        let g = two_piece_map(-0.4);
        let fg = f.compose(&g).unwrap();
        assert!(fg.piece_count() <= f.piece_count() + g.piece_count());
        // Composing with a global Möbius does not change breakpoint count.
        let m = PiecewiseMobiusHomeo::global(Mobius::rotation(1.0));
        assert_eq!(m.compose(&f).unwrap().piece_count(), f.piece_count());
        assert_eq!(
            f.post_compose(&Mobius::rotation(1.0)).piece_count(),
            f.piece_count()
        );
    }

    #[test]
    fn identity_pullback_of_standard_box() {
        let lp = PiecewiseMobiusHomeo::identity().liouville_current();
        assert!((lp.mass(&GeodesicBox::standard()) - LN_2).abs() < 1e-12);
    }

    #[test]
    fn mobius_pullback_equals_identity_pullback() {
        let m = Mobius::rotation(0.9).compose(&Mobius::dilation(0.6));
        let lp = PiecewiseMobiusHomeo::global(m).liouville_current();
        let q = GeodesicBox::from_angles(0.2, 1.1, 2.4, 4.9).unwrap();
        assert!((lp.mass(&q) - q.liouville_mass()).abs() < 1e-10);
    }

    #[test]
    fn diagonal_earthquake_pullback_mass() {
        // Earthquake of amplitude log 2 along the diagonal of the standard
        // box sends its mass from log 2 to log 3.
        let q = GeodesicBox::standard();
        let f = crate::earthquake::elementary_earthquake(
            &PiecewiseMobiusHomeo::identity(),
            &q.diagonal(),
            2.0_f64.ln(),
        )
        .unwrap();
        let lp = f.liouville_current();
        assert!((lp.mass(&q) - 3.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn normalize3_properties() {
        let tri = standard_triple();
        let f = two_piece_map(0.9);
        let nf = f.normalize3(tri, tri).unwrap();
        // Re-normalizing is a no-op.
        let nnf = nf.normalize3(tri, tri).unwrap();
        for theta in [0.1, 1.0, 2.0, 3.3, 5.1] {
            assert!(nf.apply(pt(theta)).circular_distance(nnf.apply(pt(theta))) < 1e-9);
        }
        // Normalization quotients away Möbius post-composition.
        let m = Mobius::rotation(2.2).compose(&Mobius::shear(-0.7));
        let nmf = f.post_compose(&m).normalize3(tri, tri).unwrap();
        for theta in [0.1, 1.0, 2.0, 3.3, 5.1] {
            assert!(nf.apply(pt(theta)).circular_distance(nmf.apply(pt(theta))) < 1e-8);
        }
        // Pullback masses are unchanged by normalization.
        let lp = f.liouville_current();
        let nlp = nf.liouville_current();
        for k in 0..30 {
            let t0 = 0.11 + 0.2 * k as f64;
            let q = GeodesicBox::from_angles(t0, t0 + 0.9, t0 + 2.0, t0 + 3.9).unwrap();
            assert!((lp.mass(&q) - nlp.mass(&q)).abs() < 1e-9);
        }
    }

    #[test]
    fn class_equality_basics() {
        let f = two_piece_map(1.0);
        let m = Mobius::rotation(0.5).compose(&Mobius::dilation(-0.8));
        assert!(class_equal(&f, &f.post_compose(&m), 1e-9, 256));
        assert!(!class_equal(
            &PiecewiseMobiusHomeo::identity(),
            &f,
            1e-9,
            256
        ));
    }

    #[test]
    fn qs_constant_of_mobius_map_is_one() {
        let m = Mobius::rotation(1.2).compose(&Mobius::shear(0.4));
        let est = qs_constant_estimate(&PiecewiseMobiusHomeo::global(m), &quick()).unwrap();
        assert!((1.0 - 1e-9..=1.0 + 1e-6).contains(&est));
    }

    #[test]
    fn qs_constant_of_earthquake_is_pinned() {
        // Dense-grid oracle for the amplitude-1 earthquake along the
        // diameter (1, -1): enumerating L_f(Q)/log 2 over 10^6 symmetric
        // boxes (100^3 rotation x dilation x shear grid over [0,2π) x
        // [-8,8]^2) gives 1.890007923034; steepest-neighbor refinement of
        // that grid optimum reaches 1.894067860040. The estimate is a
        // lower bound of the same supremum and must dominate the oracle
        // grid; it lands at 1.894636 with either config below.
        const DENSE_GRID_ORACLE: f64 = 1.890007923034;
        let f = two_piece_map(1.0);
        let est = qs_constant_estimate(&f, &quick()).unwrap();
        assert!(est >= DENSE_GRID_ORACLE - 1e-9, "est = {est}");
        assert!(est <= 1.91, "est = {est}");
        // Deterministic: the same configuration reproduces the value.
        let again = qs_constant_estimate(&f, &quick()).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn scale_recovery_for_mobius_related_maps() {
        let f = two_piece_map(0.7);
        let g = f.post_compose(&Mobius::rotation(0.9));
        let q = GeodesicBox::standard();
        let lf = f.liouville_current();
        let lg = g.liouville_current();
        let pair1 = (lf.mass(&q), lf.mass(&q.ortho()));
        let pair2 = (lg.mass(&q), lg.mass(&q.ortho()));
        let t = recover_projective_scale(pair1, pair2, 1e-9).unwrap();
        assert!((t - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scale_recovery_rejects_scaled_pairs() {
        // 2·(valid pair) violates the identity, so no scale is consistent.
        let q = GeodesicBox::standard();
        let lf = PiecewiseMobiusHomeo::identity().liouville_current();
        let pair = (lf.mass(&q), lf.mass(&q.ortho()));
        let doubled = (2.0 * pair.0, 2.0 * pair.1);
        assert_eq!(
            recover_projective_scale(pair, doubled, 1e-9),
            Err(MapError::InconsistentMasses)
        );
    }

    #[test]
    fn unit_scale_root() {
        for (x, y) in [
            (LN_2, LN_2),
            (4.0_f64.ln(), (4.0f64 / 3.0).ln()),
            (0.05, 3.0218575e0),
        ] {
            // Only pairs satisfying the identity: construct y from x.
            let y = if ((-x).exp() + (-y).exp() - 1.0).abs() > 1e-12 {
                -(1.0 - (-x).exp()).ln()
            } else {
                y
            };
            let t = ortho_consistent_scale(x, y);
            assert!((t - 1.0).abs() < 1e-9, "x={x} y={y} t={t}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = two_piece_map(0.6);
        let js = serde_json::to_string(&f).unwrap();
        let back: PiecewiseMobiusHomeo = serde_json::from_str(&js).unwrap();
        assert!(class_equal(&f, &back, 1e-9, 64));
    }

    #[test]
    fn integrate_pullback_against_step_function() {
        let lp = PiecewiseMobiusHomeo::identity().liouville_current();
        let xi = StepFunction::indicator(GeodesicBox::standard());
        assert!((integrate(&lp, &xi) - LN_2).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pullback_satisfies_ortho_identity(
            t in 0.2f64..1.5,
            t0 in 0.0..TAU, g1 in 0.05f64..1.5, g2 in 0.05f64..1.5, g3 in 0.05f64..1.5,
        ) {
            let f = two_piece_map(t);
            let lp = f.liouville_current();
            let q = GeodesicBox::from_angles(t0, t0 + g1, t0 + g1 + g2, t0 + g1 + g2 + g3).unwrap();
            let r = (-lp.mass(&q)).exp() + (-lp.mass(&q.ortho())).exp();
            prop_assert!((r - 1.0).abs() < 1e-8);
        }

        #[test]
        fn apply_invert_roundtrip(t in 0.2f64..1.5, theta in 0.0..TAU) {
            let f = two_piece_map(t);
            let p = pt(theta);
            let q = f.invert().apply(f.apply(p));
            prop_assert!(p.circular_distance(q) < 1e-8);
        }
    }

    #[test]
    fn class_equal_iff_pullbacks_agree() {
        // Equal classes give equal pullback masses everywhere; unequal
        // classes are separated by some sampled box.
        let f = two_piece_map(0.8);
        let g = f.post_compose(&Mobius::dilation(0.5));
        let h = two_piece_map(1.3);
        let boxes: Vec<GeodesicBox> = (0..40)
            .map(|k| {
                let t0 = 0.07 + 0.15 * k as f64;
                GeodesicBox::from_angles(t0, t0 + 0.8, t0 + 2.1, t0 + 4.0).unwrap()
            })
            .collect();
        let (lf, lg, lh) = (
            f.liouville_current(),
            g.liouville_current(),
            h.liouville_current(),
        );
        assert!(class_equal(&f, &g, 1e-8, 256));
        assert!(boxes.iter().all(|q| (lf.mass(q) - lg.mass(q)).abs() < 1e-8));
        assert!(!class_equal(&f, &h, 1e-8, 256));
        assert!(boxes.iter().any(|q| (lf.mass(q) - lh.mass(q)).abs() > 1e-4));
    }

    #[test]
    fn class_equal_is_an_equivalence_on_generated_maps() {
        let maps = [
            two_piece_map(0.5),
            two_piece_map(0.5).post_compose(&Mobius::rotation(1.0)),
            two_piece_map(0.9),
        ];
        let tol = 1e-8;
        for f in &maps {
            assert!(class_equal(f, f, tol, 128));
            for g in &maps {
                assert_eq!(class_equal(f, g, tol, 128), class_equal(g, f, tol, 128));
                for h in &maps {
                    if class_equal(f, g, tol, 128) && class_equal(g, h, tol, 128) {
                        assert!(class_equal(f, h, 2.0 * tol, 128));
                    }
                }
            }
        }
    }
}
