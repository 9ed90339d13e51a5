//! Geodesic currents with box-mass semantics.
//!
//! Atomic currents are finite weighted sets of unoriented geodesics; each
//! stored atom stands for the pair `{g, τg}` with both orientations
//! carrying the full weight, so every current here is balanced by
//! construction. Measured laminations additionally require the support to
//! be pairwise non-crossing. Integration against step functions (finite
//! weighted sums of box indicators) reduces every quantity in this crate
//! to box masses, which is what the [`BoxMeasure`] capability abstracts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boxes::GeodesicBox;
use crate::geodesic::Geodesic;
use crate::mobius::CircleMap;
use crate::point::{BoundaryPoint, GeomError};
use crate::tol::TOL_POINT;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurrentError {
    #[error("atom {index} has non-positive weight")]
    NonPositiveWeight { index: usize },
    #[error("support atoms {i} and {j} cross, so this is not a measured lamination")]
    AtomsCross { i: usize, j: usize },
    #[error("operation requires an atomic measure")]
    NotAtomic,
    #[error("the seminorm family is empty")]
    EmptyFamily,
    #[error("sampler budget exceeded: {required} evaluations needed, cap is {cap}")]
    SamplerBudgetExceeded { required: usize, cap: usize },
    #[error("could not restore genericity by jittering the box corners")]
    JitterFailed,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// One weighted unoriented geodesic. The stored orientation is canonical
/// (tail angle below head angle) but both orientations carry `weight`.
/// Serializes flat as `{tail, head, weight}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(flatten)]
    pub geodesic: Geodesic,
    pub weight: f64,
}

/// A finite balanced atomic geodesic current.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom>", into = "Vec<Atom>")]
pub struct AtomicCurrent {
    atoms: Vec<Atom>,
}

fn canonical_orientation(g: &Geodesic) -> Geodesic {
    if g.tail().angle() <= g.head().angle() {
        *g
    } else {
        g.reverse()
    }
}

impl AtomicCurrent {
    /// Empty current (the zero measure).
    pub fn zero() -> Self {
        AtomicCurrent { atoms: Vec::new() }
    }

    /// Builds a current from weighted geodesics. Weights must be strictly
    /// positive; duplicate unoriented geodesics are merged by summing
    /// weights.
    pub fn new(atoms: Vec<(Geodesic, f64)>) -> Result<Self, CurrentError> {
        for (index, (_, w)) in atoms.iter().enumerate() {
            if *w <= 0.0 || !w.is_finite() {
                return Err(CurrentError::NonPositiveWeight { index });
            }
        }
        let mut canon: Vec<Atom> = Vec::with_capacity(atoms.len());
        'outer: for (g, w) in atoms {
            let g = canonical_orientation(&g);
            for existing in canon.iter_mut() {
                if existing.geodesic.same_unoriented(&g, TOL_POINT) {
                    existing.weight += w;
                    continue 'outer;
                }
            }
            canon.push(Atom {
                geodesic: g,
                weight: w,
            });
        }
        canon.sort_by(|x, y| {
            (x.geodesic.tail().angle(), x.geodesic.head().angle())
                .partial_cmp(&(y.geodesic.tail().angle(), y.geodesic.head().angle()))
                .expect("angles are finite")
        });
        Ok(AtomicCurrent { atoms: canon })
    }

    pub fn single(g: Geodesic, weight: f64) -> Result<Self, CurrentError> {
        AtomicCurrent::new(vec![(g, weight)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Rescales every weight by `s > 0`.
    pub fn scaled(&self, s: f64) -> AtomicCurrent {
        AtomicCurrent {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    geodesic: a.geodesic,
                    weight: a.weight * s,
                })
                .collect(),
        }
    }

    /// Whether the support is pairwise non-crossing.
    pub fn is_measured_lamination(&self) -> bool {
        for i in 0..self.atoms.len() {
            for j in (i + 1)..self.atoms.len() {
                if self.atoms[i].geodesic.crosses(&self.atoms[j].geodesic) {
                    return false;
                }
            }
        }
        true
    }
}

impl TryFrom<Vec<Atom>> for AtomicCurrent {
    type Error = CurrentError;
    fn try_from(v: Vec<Atom>) -> Result<Self, CurrentError> {
        AtomicCurrent::new(v.into_iter().map(|a| (a.geodesic, a.weight)).collect())
    }
}

impl From<AtomicCurrent> for Vec<Atom> {
    fn from(c: AtomicCurrent) -> Vec<Atom> {
        c.atoms
    }
}

/// An atomic current whose support geodesics are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomicCurrent", into = "AtomicCurrent")]
pub struct MeasuredLamination {
    current: AtomicCurrent,
}

impl MeasuredLamination {
    pub fn new(current: AtomicCurrent) -> Result<Self, CurrentError> {
        for i in 0..current.atoms.len() {
            for j in (i + 1)..current.atoms.len() {
                if current.atoms[i]
                    .geodesic
                    .crosses(&current.atoms[j].geodesic)
                {
                    return Err(CurrentError::AtomsCross { i, j });
                }
            }
        }
        Ok(MeasuredLamination { current })
    }

    pub fn from_atoms(atoms: Vec<(Geodesic, f64)>) -> Result<Self, CurrentError> {
        MeasuredLamination::new(AtomicCurrent::new(atoms)?)
    }

    pub fn current(&self) -> &AtomicCurrent {
        &self.current
    }

    pub fn atoms(&self) -> &[Atom] {
        self.current.atoms()
    }

    pub fn scaled(&self, s: f64) -> MeasuredLamination {
        MeasuredLamination {
            current: self.current.scaled(s),
        }
    }
}

impl TryFrom<AtomicCurrent> for MeasuredLamination {
    type Error = CurrentError;
    fn try_from(c: AtomicCurrent) -> Result<Self, CurrentError> {
        MeasuredLamination::new(c)
    }
}

impl From<MeasuredLamination> for AtomicCurrent {
    fn from(l: MeasuredLamination) -> AtomicCurrent {
        l.current
    }
}

/// A finite weighted sum of box indicator functions `ξ = Σ wᵢ·χ_{Qᵢ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub terms: Vec<StepTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepTerm {
    #[serde(rename = "box")]
    pub support: GeodesicBox,
    pub weight: f64,
}

impl StepFunction {
    pub fn new(terms: Vec<(GeodesicBox, f64)>) -> Self {
        StepFunction {
            terms: terms
                .into_iter()
                .map(|(support, weight)| StepTerm { support, weight })
                .collect(),
        }
    }

    /// The indicator function of a single box.
    pub fn indicator(q: GeodesicBox) -> Self {
        StepFunction::new(vec![(q, 1.0)])
    }
}

/// Anything that assigns a finite nonnegative mass to every box of
/// geodesics; finitely additive on disjoint box decompositions. This is
/// the capability that unifies atomic currents with Liouville pullbacks
/// for all integrations in this crate.
pub trait BoxMeasure {
    fn mass(&self, q: &GeodesicBox) -> f64;

    /// The support atoms, for measures that have them.
    fn support_atoms(&self) -> Option<&[Atom]> {
        None
    }
}

impl BoxMeasure for AtomicCurrent {
    /// Sum of the weights of the oriented atoms (either orientation of
    /// each unoriented atom) lying in the box.
    fn mass(&self, q: &GeodesicBox) -> f64 {
        self.atoms
            .iter()
            .filter(|a| q.contains(&a.geodesic) || q.contains(&a.geodesic.reverse()))
            .map(|a| a.weight)
            .sum()
    }

    fn support_atoms(&self) -> Option<&[Atom]> {
        Some(&self.atoms)
    }
}

impl BoxMeasure for MeasuredLamination {
    fn mass(&self, q: &GeodesicBox) -> f64 {
        self.current.mass(q)
    }

    fn support_atoms(&self) -> Option<&[Atom]> {
        Some(self.current.atoms())
    }
}

/// `∫ ξ dα = Σᵢ wᵢ·α(Qᵢ)` for a step function `ξ`.
pub fn integrate<M: BoxMeasure + ?Sized>(alpha: &M, xi: &StepFunction) -> f64 {
    xi.terms
        .iter()
        .map(|t| t.weight * alpha.mass(&t.support))
        .sum()
}

/// The weak* seminorm `|α|_ξ = |∫ ξ dα|`.
pub fn weak_seminorm<M: BoxMeasure + ?Sized>(alpha: &M, xi: &StepFunction) -> f64 {
    integrate(alpha, xi).abs()
}

/// A box is generic for an atomic measure when no atom endpoint falls on a
/// corner (within the point tolerance); corner-incident geodesics then
/// have mass zero.
pub fn is_generic<M: BoxMeasure + ?Sized>(
    alpha: &M,
    q: &GeodesicBox,
) -> Result<bool, CurrentError> {
    let atoms = alpha.support_atoms().ok_or(CurrentError::NotAtomic)?;
    for atom in atoms {
        for corner in q.corners() {
            if atom.geodesic.tail().coincident_within(corner, TOL_POINT)
                || atom.geodesic.head().coincident_within(corner, TOL_POINT)
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Nudges box corners counterclockwise in multiples of `jitter` until the
/// box is generic for `alpha`. Genericity is dense, so a handful of steps
/// always suffices for finite atomic data.
pub fn make_generic<M: BoxMeasure + ?Sized>(
    alpha: &M,
    q: &GeodesicBox,
    jitter: f64,
) -> Result<GeodesicBox, CurrentError> {
    let mut candidate = *q;
    for step in 0..64 {
        if is_generic(alpha, &candidate)? {
            return Ok(candidate);
        }
        let delta = jitter * (step + 1) as f64;
        candidate = GeodesicBox::new(
            BoundaryPoint::from_angle(q.a().angle() + delta),
            BoundaryPoint::from_angle(q.b().angle() + 2.0 * delta),
            BoundaryPoint::from_angle(q.c().angle() + delta),
            BoundaryPoint::from_angle(q.d().angle() + 2.0 * delta),
        )?;
    }
    Err(CurrentError::JitterFailed)
}

/// The pushforward of an atomic current under a bijective boundary map:
/// atoms are mapped endpoint-wise, weights are preserved.
pub fn pushforward<M: CircleMap + ?Sized>(alpha: &AtomicCurrent, h: &M) -> AtomicCurrent {
    AtomicCurrent::new(
        alpha
            .atoms()
            .iter()
            .map(|a| (a.geodesic.image(h), a.weight))
            .collect(),
    )
    .expect("pushforward preserves positive weights")
}
