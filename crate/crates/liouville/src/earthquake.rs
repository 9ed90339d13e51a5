//! Elementary and composite earthquakes acting on boundary maps.
//!
//! The elementary earthquake of amplitude `t` along a geodesic `g` keeps
//! the representative map `f` on the left side of `g` and post-composes it
//! with the hyperbolic translation of length `t` along the image geodesic
//! `f(g)` on the right side. The two sides glue continuously because the
//! translation fixes the endpoints of `f(g)`. Composite earthquakes over a
//! finite measured lamination apply one elementary earthquake per atom;
//! the atoms are disjoint, so the resulting class does not depend on the
//! order of application.

use thiserror::Error;

use crate::boundary::{class_equal, MapError, PiecewiseMobiusHomeo};
use crate::boxes::GeodesicBox;
use crate::currents::{is_generic, AtomicCurrent, BoxMeasure, CurrentError, MeasuredLamination};
use crate::geodesic::{Geodesic, Side};
use crate::mobius::Mobius;
use crate::point::{BoundaryPoint, GeomError};
use crate::tol::TOL_POINT;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuakeError {
    #[error("support atoms cross; earthquakes require a measured lamination")]
    NotALamination,
    #[error("box {index} has no diagonal aligned with a lamination atom")]
    BoxNotAligned { index: usize },
    #[error("box {index} is not generic for the lamination; jitter its corners")]
    NonGenericBox { index: usize },
    #[error("geodesic endpoints do not match a classified configuration")]
    ConfigurationUnclassified,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A measured lamination together with a signed amplitude; negative
/// amplitudes are right earthquakes.
#[derive(Debug, Clone, PartialEq)]
pub struct EarthquakeSpec {
    lamination: MeasuredLamination,
    amplitude: f64,
}

impl EarthquakeSpec {
    pub fn new(lamination: MeasuredLamination, amplitude: f64) -> Self {
        EarthquakeSpec {
            lamination,
            amplitude,
        }
    }

    /// Validates that the current is a measured lamination first.
    pub fn from_current(current: AtomicCurrent, amplitude: f64) -> Result<Self, QuakeError> {
        let lamination =
            MeasuredLamination::new(current).map_err(|_| QuakeError::NotALamination)?;
        Ok(EarthquakeSpec::new(lamination, amplitude))
    }

    pub fn lamination(&self) -> &MeasuredLamination {
        &self.lamination
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
}

/// The elementary earthquake of amplitude `t` along `g`, applied to the
/// boundary representative `f`.
///
/// For `t = 0` the result equals `f` (with the endpoints of `g` inserted
/// as breakpoints); reversing the orientation of `g` changes the
/// representative by a Möbius factor only, so the class is unchanged.
pub fn elementary_earthquake(
    f: &PiecewiseMobiusHomeo,
    g: &Geodesic,
    t: f64,
) -> Result<PiecewiseMobiusHomeo, QuakeError> {
    let refined = f.with_breaks(&[g.tail(), g.head()]);
    let image = Geodesic::new(f.apply(g.tail()), f.apply(g.head()))?;
    let phi = Mobius::translation_along(&image, t);
    let breaks = refined.breaks().to_vec();
    let n = breaks.len();
    let mut pieces = Vec::with_capacity(n);
    for (i, piece) in refined.pieces().iter().enumerate() {
        let mid = breaks[i].arc_point(breaks[(i + 1) % n], 0.5);
        let translated = match g.side_of(mid) {
            Ok(Side::Right) => phi.compose(piece),
            _ => *piece,
        };
        pieces.push(translated);
    }
    // Continuity holds by construction: the translation fixes the image of
    // both endpoints of g, so the two sides agree there.
    Ok(PiecewiseMobiusHomeo::from_parts(breaks, pieces))
}

/// The composite earthquake `E^{tλ}` over a finite lamination, built from
/// elementary earthquakes with amplitudes `t·wᵢ`. The class of the result
/// is order-independent because disjoint elementary earthquakes commute;
/// the canonical processing order is innermost atom first (ascending
/// counterclockwise endpoint gap, then tail angle). With that order no
/// earlier translation ever moves a later atom's endpoints, so the image
/// geodesics stay resolvable at arbitrarily large amplitudes.
pub fn earthquake(
    f: &PiecewiseMobiusHomeo,
    spec: &EarthquakeSpec,
) -> Result<PiecewiseMobiusHomeo, QuakeError> {
    let mut atoms: Vec<&crate::currents::Atom> = spec.lamination().atoms().iter().collect();
    atoms.sort_by(|x, y| {
        let span = |g: &Geodesic| g.tail().ccw_gap_to(g.head());
        (span(&x.geodesic), x.geodesic.tail().angle())
            .partial_cmp(&(span(&y.geodesic), y.geodesic.tail().angle()))
            .expect("angles are finite")
    });
    let mut current = f.clone();
    for atom in atoms {
        current = elementary_earthquake(&current, &atom.geodesic, spec.amplitude() * atom.weight)?;
    }
    Ok(current)
}

/// Checks the defining inequality of a left earthquake along `λ`:
/// `L_before(Q) ≤ L_after(Q)` for every supplied box whose `(a, c)`
/// diagonal coincides with a lamination atom.
pub fn left_earthquake_check(
    f_before: &PiecewiseMobiusHomeo,
    f_after: &PiecewiseMobiusHomeo,
    lamination: &MeasuredLamination,
    boxes: &[GeodesicBox],
    tol: f64,
) -> Result<bool, QuakeError> {
    let before = f_before.liouville_current();
    let after = f_after.liouville_current();
    for (index, q) in boxes.iter().enumerate() {
        let diagonal = q.diagonal();
        let aligned = lamination
            .atoms()
            .iter()
            .any(|a| a.geodesic.same_unoriented(&diagonal, TOL_POINT));
        if !aligned {
            return Err(QuakeError::BoxNotAligned { index });
        }
        if before.mass(q) > after.mass(q) + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One row of an earthquake-ray mass table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayRow {
    pub t: f64,
    pub box_index: usize,
    pub normalized_mass: f64,
    pub target_mass: f64,
    pub abs_err: f64,
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// One translation factor of a composite earthquake, kept as its axis
/// directions and amplitude instead of a matrix.
struct RayFactor {
    source: Geodesic,
    head: (f64, f64),
    tail: (f64, f64),
    amplitude: f64,
}

impl RayFactor {
    /// Applies the translation to a unit homogeneous vector carrying a log
    /// scale. Works in the eigenbasis of the axis, so it never overflows
    /// and never forms the catastrophically ill-conditioned matrix of a
    /// strong translation.
    fn apply(&self, v: (f64, f64), log_scale: f64) -> ((f64, f64), f64) {
        let den = cross(self.head, self.tail);
        let along_head = cross(v, self.tail) / den;
        let along_tail = cross(self.head, v) / den;
        let s = self.amplitude;
        // v = α·head + β·tail maps to e^{s/2}α·head + e^{-s/2}β·tail;
        // factor out the dominant exponential before adding.
        let (u, extra) = if s >= 0.0 {
            let w = (
                along_head * self.head.0 + (-s).exp() * along_tail * self.tail.0,
                along_head * self.head.1 + (-s).exp() * along_tail * self.tail.1,
            );
            (w, s / 2.0)
        } else {
            let w = (
                s.exp() * along_head * self.head.0 + along_tail * self.tail.0,
                s.exp() * along_head * self.head.1 + along_tail * self.tail.1,
            );
            (w, -s / 2.0)
        };
        let norm = u.0.hypot(u.1);
        ((u.0 / norm, u.1 / norm), log_scale + extra + norm.ln())
    }
}

/// Exact-in-structure evaluator for the Liouville masses of a composite
/// earthquake `E^{tλ}f`, for amplitudes far beyond what the composed
/// piece matrices can represent.
///
/// The piece governing a boundary point is a product of axis translations
/// over the atoms whose right side contains the point, applied innermost
/// first. Each log-crossratio term is a wedge of two image vectors;
/// factors common to both chains have determinant one and cancel from the
/// wedge, and the residual factors are applied with log-scaled vectors.
/// This keeps every term well conditioned at any amplitude, while the
/// matrix form of the same map loses the contracting directions to
/// rounding once an amplitude exceeds roughly `37` (`-log ε`).
pub struct EarthquakeRay {
    base: PiecewiseMobiusHomeo,
    factors: Vec<RayFactor>,
}

impl EarthquakeRay {
    pub fn new(f: &PiecewiseMobiusHomeo, lamination: &MeasuredLamination, t: f64) -> Self {
        let mut atoms: Vec<&crate::currents::Atom> = lamination.atoms().iter().collect();
        atoms.sort_by(|x, y| {
            let span = |g: &Geodesic| g.tail().ccw_gap_to(g.head());
            (span(&x.geodesic), x.geodesic.tail().angle())
                .partial_cmp(&(span(&y.geodesic), y.geodesic.tail().angle()))
                .expect("angles are finite")
        });
        // Innermost-first processing means no earlier translation moves a
        // later atom's endpoints, so every axis is the base-map image of
        // the atom.
        let factors = atoms
            .iter()
            .map(|atom| {
                let unit = |p| {
                    let (u, v, _) = f.image_log_vector(p);
                    (u, v)
                };
                RayFactor {
                    source: atom.geodesic,
                    head: unit(atom.geodesic.head()),
                    tail: unit(atom.geodesic.tail()),
                    amplitude: t * atom.weight,
                }
            })
            .collect();
        EarthquakeRay {
            base: f.clone(),
            factors,
        }
    }

    /// Indices of the factors whose right side contains `p`, in
    /// application order.
    fn chain(&self, p: BoundaryPoint) -> Vec<usize> {
        (0..self.factors.len())
            .filter(|&i| {
                let g = &self.factors[i].source;
                p.in_open_arc(g.tail(), g.head())
            })
            .collect()
    }

    fn log_wedge(&self, p: BoundaryPoint, q: BoundaryPoint) -> f64 {
        let mut cp = self.chain(p);
        let mut cq = self.chain(q);
        while let (Some(a), Some(b)) = (cp.last(), cq.last()) {
            if a != b {
                break;
            }
            cp.pop();
            cq.pop();
        }
        let image = |point: BoundaryPoint, chain: &[usize]| {
            let (u, v, ls) = self.base.image_log_vector(point);
            let mut vec = (u, v);
            let mut log_scale = ls;
            for &i in chain {
                (vec, log_scale) = self.factors[i].apply(vec, log_scale);
            }
            (vec, log_scale)
        };
        let (vp, lp) = image(p, &cp);
        let (vq, lq) = image(q, &cq);
        cross(vp, vq).abs().ln() + lp + lq
    }

    /// `log crossratio` of the image corners of `q` under `E^{tλ}f`.
    pub fn mass(&self, q: &GeodesicBox) -> f64 {
        self.log_wedge(q.a(), q.c()) + self.log_wedge(q.b(), q.d())
            - self.log_wedge(q.a(), q.d())
            - self.log_wedge(q.b(), q.c())
    }
}

/// Normalized masses `L(E^{tλ}f)(Q)/t` along an earthquake ray. For every
/// λ-generic box the column converges to the lamination mass of the box as
/// `t` grows.
pub fn earthquake_ray_masses(
    f: &PiecewiseMobiusHomeo,
    lamination: &MeasuredLamination,
    ts: &[f64],
    boxes: &[GeodesicBox],
) -> Result<Vec<RayRow>, QuakeError> {
    for (index, q) in boxes.iter().enumerate() {
        match is_generic(lamination, q) {
            Ok(true) => {}
            Ok(false) => return Err(QuakeError::NonGenericBox { index }),
            Err(CurrentError::NotAtomic) => unreachable!("laminations are atomic"),
            Err(_) => return Err(QuakeError::NonGenericBox { index }),
        }
    }
    let mut rows = Vec::with_capacity(ts.len() * boxes.len());
    for &t in ts {
        let ray = EarthquakeRay::new(f, lamination, t);
        for (box_index, q) in boxes.iter().enumerate() {
            let normalized_mass = ray.mass(q) / t;
            let target_mass = lamination.mass(q);
            rows.push(RayRow {
                t,
                box_index,
                normalized_mass,
                target_mass,
                abs_err: (normalized_mass - target_mass).abs(),
            });
        }
    }
    Ok(rows)
}

/// Position of the earthquake geodesic relative to the box corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeCase {
    /// One endpoint in the open arc `(a,b)`, the other in `(c,d)`: the
    /// geodesic lies in the box and the mass decreases as either endpoint
    /// moves counterclockwise.
    InsideBox,
    /// One endpoint in `(b,c)`, the other in `(d,a)`: the geodesic lies in
    /// the orthogonal box and the mass increases.
    InsideOrthoBox,
    /// Both endpoints in one arc: the mass does not depend on the
    /// endpoints at all.
    SameArc,
}

/// Finite-difference report of `∂L(Q)/∂x` and `∂L(Q)/∂y` for the endpoint
/// positions of the earthquake geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    pub case: ProbeCase,
    /// Mass change when the endpoint in the tail-side arc moves
    /// counterclockwise by `step`.
    pub delta_x: f64,
    /// Mass change for the head-side endpoint.
    pub delta_y: f64,
    pub step: f64,
}

fn corner_arc(q: &GeodesicBox, p: BoundaryPoint) -> Option<usize> {
    let corners = q.corners();
    for c in corners {
        if p.coincident_within(c, TOL_POINT) {
            return None;
        }
    }
    (0..4).find(|&i| p.in_open_arc(corners[i], corners[(i + 1) % 4]))
}

/// Probes the monotonicity of `L(E_g^t f)(Q)` in the endpoints of `g`, by
/// a counterclockwise finite difference of step `h`.
pub fn monotonicity_probe(
    f: &PiecewiseMobiusHomeo,
    q: &GeodesicBox,
    g: &Geodesic,
    t: f64,
    h: f64,
) -> Result<MonotonicityReport, QuakeError> {
    let arc_tail = corner_arc(q, g.tail()).ok_or(QuakeError::ConfigurationUnclassified)?;
    let arc_head = corner_arc(q, g.head()).ok_or(QuakeError::ConfigurationUnclassified)?;
    // Canonical labels: x is the endpoint in the lower-indexed arc.
    let (case, x_is_tail) = match (arc_tail, arc_head) {
        (0, 2) => (ProbeCase::InsideBox, true),
        (2, 0) => (ProbeCase::InsideBox, false),
        (1, 3) => (ProbeCase::InsideOrthoBox, true),
        (3, 1) => (ProbeCase::InsideOrthoBox, false),
        (i, j) if i == j => (ProbeCase::SameArc, true),
        _ => return Err(QuakeError::ConfigurationUnclassified),
    };
    let mass_for = |gg: &Geodesic| -> Result<f64, QuakeError> {
        Ok(elementary_earthquake(f, gg, t)?.liouville_current().mass(q))
    };
    let shift = |p: BoundaryPoint| BoundaryPoint::from_angle(p.angle() + h);
    let (x, y) = if x_is_tail {
        (g.tail(), g.head())
    } else {
        (g.head(), g.tail())
    };
    let rebuild = |nx: BoundaryPoint, ny: BoundaryPoint| -> Result<Geodesic, QuakeError> {
        let g2 = if x_is_tail {
            Geodesic::new(nx, ny)
        } else {
            Geodesic::new(ny, nx)
        };
        g2.map_err(QuakeError::from)
    };
    let base = mass_for(g)?;
    let moved_x = mass_for(&rebuild(shift(x), y)?)?;
    let moved_y = mass_for(&rebuild(x, shift(y))?)?;
    Ok(MonotonicityReport {
        case,
        delta_x: moved_x - base,
        delta_y: moved_y - base,
        step: h,
    })
}

/// The strict bounds on the mass of a box after an earthquake along its
/// own diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl DiagonalBounds {
    pub fn strict(&self) -> bool {
        self.lower < self.value && self.value < self.upper
    }
}

/// Mass of `Q` after an earthquake of amplitude `t > 0` along the diagonal
/// of `Q`, together with the strict bounds
/// `t + log(e^L - 1) < value < t + L` where `L` is the mass before.
pub fn diagonal_bounds_check(
    f: &PiecewiseMobiusHomeo,
    q: &GeodesicBox,
    t: f64,
) -> Result<DiagonalBounds, QuakeError> {
    let base = f.liouville_current().mass(q);
    let map = elementary_earthquake(f, &q.diagonal(), t)?;
    let value = map.liouville_current().mass(q);
    Ok(DiagonalBounds {
        lower: t + base.exp_m1().ln(),
        value,
        upper: t + base,
    })
}

/// Closed form for the diagonal case: a class with mass `L` on `Q` has
/// mass `log(e^t·(e^L - 1) + 1)` after the diagonal earthquake of
/// amplitude `t`. Evaluated in a form that stays accurate for large `t`.
pub fn diagonal_mass_closed_form(base_mass: f64, t: f64) -> f64 {
    t + (base_mass.exp_m1() + (-t).exp()).ln()
}

/// Convenience for tests and experiments: whether two maps are equal as
/// boundary classes at the crate's default sampling density.
pub fn same_class(f: &PiecewiseMobiusHomeo, g: &PiecewiseMobiusHomeo, tol: f64) -> bool {
    class_equal(f, g, tol, 256)
}
