//! Computational model of the boundary geometry underlying universal
//! Teichmüller space: boxes of geodesics and their Liouville masses,
//! geodesic currents with weak* and uniform weak* seminorms,
//! piecewise-Möbius circle homeomorphisms, and earthquake deformations.
//!
//! Everything lives on the circle at infinity. Points are disk angles,
//! Möbius transformations act through the half-plane chart, geodesics are
//! ordered pairs of boundary points, and every measure in sight is reduced
//! to box masses. All types are immutable values and all operations are
//! pure, so the whole API is safe to use from any number of threads.

pub mod boundary;
pub mod boxes;
pub mod currents;
pub mod earthquake;
pub mod geodesic;
pub mod mobius;
pub mod point;
pub mod random;
pub mod sampler;
pub mod tol;

pub use boundary::{LiouvillePullback, PiecewiseMobiusHomeo};
pub use boxes::GeodesicBox;
pub use currents::{Atom, AtomicCurrent, BoxMeasure, MeasuredLamination, StepFunction};
pub use geodesic::{Geodesic, Side};
pub use mobius::{CircleMap, Mobius};
pub use point::{crossratio, BoundaryPoint, GeomError};
pub use sampler::SamplerConfig;
