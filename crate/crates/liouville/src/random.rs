//! Seeded generators for boxes, laminations and boundary maps, shared by
//! the test suites and the experiment harness.

use rand::Rng;

use crate::boundary::PiecewiseMobiusHomeo;
use crate::boxes::GeodesicBox;
use crate::currents::{AtomicCurrent, MeasuredLamination};
use crate::earthquake::{earthquake, EarthquakeSpec};
use crate::geodesic::Geodesic;
use crate::mobius::Mobius;
use crate::point::BoundaryPoint;

use std::f64::consts::TAU;

/// A box with corner gaps of at least `min_gap` radians.
pub fn random_box<R: Rng>(rng: &mut R, min_gap: f64) -> GeodesicBox {
    loop {
        let t0 = rng.random_range(0.0..TAU);
        let mut gaps = [0.0; 4];
        let mut total = 0.0;
        for g in gaps.iter_mut() {
            *g = rng.random_range(min_gap..1.0);
            total += *g;
        }
        let scale = (TAU - min_gap) / total;
        if let Ok(q) = GeodesicBox::from_angles(
            t0,
            t0 + gaps[0] * scale,
            t0 + (gaps[0] + gaps[1]) * scale,
            t0 + (gaps[0] + gaps[1] + gaps[2]) * scale,
        ) {
            return q;
        }
    }
}

/// A random Möbius transformation with moderate Iwasawa parameters.
pub fn random_mobius<R: Rng>(rng: &mut R, scale: f64) -> Mobius {
    Mobius::rotation(rng.random_range(0.0..TAU))
        .compose(&Mobius::dilation(rng.random_range(-scale..scale)))
        .compose(&Mobius::shear(rng.random_range(-scale..scale)))
}

/// A random measured lamination with up to `max_atoms` atoms: a random
/// non-crossing matching of `2·k` circle points, built with a stack walk.
/// Weights are drawn from `[0.25, 1.75)`.
pub fn random_lamination<R: Rng>(rng: &mut R, max_atoms: usize) -> MeasuredLamination {
    random_lamination_weighted(rng, max_atoms, 0.25, 1.75)
}

/// As [`random_lamination`] with an explicit weight range. Long earthquake
/// rays keep `amplitude × total weight` below the exponent range of f64 by
/// drawing lighter atoms.
pub fn random_lamination_weighted<R: Rng>(
    rng: &mut R,
    max_atoms: usize,
    w_lo: f64,
    w_hi: f64,
) -> MeasuredLamination {
    let k = rng.random_range(1..=max_atoms.max(1));
    let mut angles: Vec<f64> = Vec::with_capacity(2 * k);
    'sample: loop {
        angles.clear();
        for _ in 0..2 * k {
            angles.push(rng.random_range(0.0..TAU));
        }
        angles.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        for w in angles.windows(2) {
            if w[1] - w[0] < 1e-3 {
                continue 'sample;
            }
        }
        if TAU - angles[2 * k - 1] + angles[0] < 1e-3 {
            continue 'sample;
        }
        break;
    }
    let mut stack: Vec<f64> = Vec::new();
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(k);
    for (i, &theta) in angles.iter().enumerate() {
        let remaining = 2 * k - i;
        let must_close = stack.len() == remaining;
        let close = !stack.is_empty() && (must_close || rng.random_bool(0.5));
        if close {
            pairs.push((stack.pop().expect("nonempty"), theta));
        } else {
            stack.push(theta);
        }
    }
    let atoms = pairs
        .into_iter()
        .map(|(a, b)| {
            let g = Geodesic::new(BoundaryPoint::from_angle(a), BoundaryPoint::from_angle(b))
                .expect("separated angles");
            (g, rng.random_range(w_lo..w_hi))
        })
        .collect();
    MeasuredLamination::from_atoms(atoms).expect("stack matching never crosses")
}

/// A random piecewise-Möbius homeomorphism: a composite earthquake over a
/// random lamination, optionally post-composed with a random Möbius map.
/// With `max_atoms` atoms the result has at most `2·max_atoms` pieces.
pub fn random_earthquake_map<R: Rng>(rng: &mut R, max_atoms: usize) -> PiecewiseMobiusHomeo {
    let lam = random_lamination(rng, max_atoms);
    let amplitude = rng.random_range(0.2..1.8);
    let map = earthquake(
        &PiecewiseMobiusHomeo::identity(),
        &EarthquakeSpec::new(lam, amplitude),
    )
    .expect("lamination earthquakes are valid");
    map.post_compose(&random_mobius(rng, 1.0))
}

/// A random box generic for `alpha`, with every corner at angular distance
/// at least `margin` from every atom endpoint and corner gaps of at least
/// `min_gap`.
pub fn random_generic_box<R: Rng>(
    rng: &mut R,
    alpha: &AtomicCurrent,
    margin: f64,
    min_gap: f64,
) -> GeodesicBox {
    'outer: loop {
        let q = random_box(rng, min_gap);
        for atom in alpha.atoms() {
            for corner in q.corners() {
                if corner.circular_distance(atom.geodesic.tail()) < margin
                    || corner.circular_distance(atom.geodesic.head()) < margin
                {
                    continue 'outer;
                }
            }
        }
        return q;
    }
}
