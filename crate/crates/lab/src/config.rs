//! Experiment configuration: one structured JSON document per run.
//!
//! Every experiment accepts a `seed` (overridable with `--seed`) and, where
//! it makes sense, a `tol` (overridable with `--tol`). Inline geometric
//! data uses the library wire formats: points as angles in radians,
//! geodesics as `{tail, head}`, laminations as `{atoms: [{tail, head,
//! weight}]}`, boxes as `{a, b, c, d}`, maps as `{breaks, pieces}` with
//! row-major matrices, step functions as `[{box, weight}]`.

use serde::Deserialize;

use liouville::boundary::PiecewiseMobiusHomeo;
use liouville::boxes::GeodesicBox;
use liouville::currents::{Atom, StepFunction, StepTerm};
use liouville::sampler::SamplerConfig;

#[derive(Debug, Clone, Deserialize)]
pub struct LaminationSpec {
    pub atoms: Vec<Atom>,
}

fn default_seed() -> u64 {
    0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrthoIdentityConfig {
    #[serde(default = "OrthoIdentityConfig::default_boxes")]
    pub boxes: usize,
    #[serde(default = "OrthoIdentityConfig::default_maps")]
    pub maps: usize,
    #[serde(default = "OrthoIdentityConfig::default_max_atoms")]
    pub max_atoms: usize,
    #[serde(default = "OrthoIdentityConfig::default_min_corner_gap")]
    pub min_corner_gap: f64,
    #[serde(default = "OrthoIdentityConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl OrthoIdentityConfig {
    fn default_boxes() -> usize {
        10_000
    }
    fn default_maps() -> usize {
        10
    }
    fn default_max_atoms() -> usize {
        8
    }
    fn default_min_corner_gap() -> f64 {
        1e-3
    }
    fn default_tol() -> f64 {
        1e-8
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuakeConvergeConfig {
    /// Inline lamination; when absent a random one is drawn.
    #[serde(default)]
    pub lamination: Option<LaminationSpec>,
    #[serde(default = "QuakeConvergeConfig::default_max_atoms")]
    pub max_atoms: usize,
    #[serde(default = "QuakeConvergeConfig::default_weight_range")]
    pub weight_range: [f64; 2],
    /// Explicit boxes; when absent, `boxes` random lamination-generic
    /// boxes are drawn.
    #[serde(default)]
    pub box_list: Vec<GeodesicBox>,
    #[serde(default = "QuakeConvergeConfig::default_boxes")]
    pub boxes: usize,
    #[serde(default = "QuakeConvergeConfig::default_ts")]
    pub ts: Vec<f64>,
    #[serde(default = "QuakeConvergeConfig::default_corner_margin")]
    pub corner_margin: f64,
    #[serde(default = "QuakeConvergeConfig::default_min_corner_gap")]
    pub min_corner_gap: f64,
    #[serde(default = "QuakeConvergeConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl QuakeConvergeConfig {
    fn default_max_atoms() -> usize {
        8
    }
    fn default_weight_range() -> [f64; 2] {
        [0.1, 0.6]
    }
    fn default_boxes() -> usize {
        20
    }
    fn default_ts() -> Vec<f64> {
        vec![10.0, 20.0, 50.0, 100.0, 200.0]
    }
    fn default_corner_margin() -> f64 {
        0.25
    }
    fn default_min_corner_gap() -> f64 {
        0.5
    }
    fn default_tol() -> f64 {
        0.02
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuakeMonotoneConfig {
    #[serde(default = "QuakeMonotoneConfig::default_configurations")]
    pub configurations: usize,
    #[serde(default = "QuakeMonotoneConfig::default_ts")]
    pub ts: Vec<f64>,
    #[serde(default = "QuakeMonotoneConfig::default_step")]
    pub step: f64,
    #[serde(default = "QuakeMonotoneConfig::default_margin")]
    pub margin: f64,
    /// Flatness budget for the same-arc case.
    #[serde(default = "QuakeMonotoneConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl QuakeMonotoneConfig {
    fn default_configurations() -> usize {
        1_000
    }
    fn default_ts() -> Vec<f64> {
        vec![0.5, 2.0]
    }
    fn default_step() -> f64 {
        1e-4
    }
    fn default_margin() -> f64 {
        0.02
    }
    fn default_tol() -> f64 {
        1e-10
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuakeBoundsConfig {
    #[serde(default = "QuakeBoundsConfig::default_ts")]
    pub ts: Vec<f64>,
    #[serde(default = "QuakeBoundsConfig::default_betas")]
    pub betas: Vec<f64>,
    #[serde(default = "QuakeBoundsConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl QuakeBoundsConfig {
    fn default_ts() -> Vec<f64> {
        vec![0.1, 1.0, std::f64::consts::LN_2, 5.0, 20.0]
    }
    fn default_betas() -> Vec<f64> {
        vec![0.5, 1.0, 3.0]
    }
    fn default_tol() -> f64 {
        1e-9
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakstarDemoConfig {
    #[serde(default = "WeakstarDemoConfig::default_n_max")]
    pub n_max: usize,
    /// Angle the escaping atoms collapse onto.
    #[serde(default = "WeakstarDemoConfig::default_center")]
    pub center: f64,
    /// Weak-seminorm ceiling from this index on.
    #[serde(default = "WeakstarDemoConfig::default_weak_from")]
    pub weak_from: usize,
    #[serde(default = "WeakstarDemoConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "WeakstarDemoConfig::default_uniform_floor")]
    pub uniform_floor: f64,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl WeakstarDemoConfig {
    fn default_n_max() -> usize {
        20
    }
    fn default_center() -> f64 {
        3.0 * std::f64::consts::FRAC_PI_4
    }
    fn default_weak_from() -> usize {
        5
    }
    fn default_tol() -> f64 {
        1e-12
    }
    fn default_uniform_floor() -> f64 {
        0.999
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QsEstimateConfig {
    /// Inline map; when absent, `maps` random earthquake maps are drawn.
    #[serde(default)]
    pub map: Option<PiecewiseMobiusHomeo>,
    #[serde(default = "QsEstimateConfig::default_maps")]
    pub maps: usize,
    #[serde(default = "QsEstimateConfig::default_max_atoms")]
    pub max_atoms: usize,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default = "QsEstimateConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl QsEstimateConfig {
    fn default_maps() -> usize {
        10
    }
    fn default_max_atoms() -> usize {
        8
    }
    fn default_tol() -> f64 {
        1e-9
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormConfig {
    /// Inline current; when absent a random lamination is drawn.
    #[serde(default)]
    pub current: Option<LaminationSpec>,
    #[serde(default = "SeminormConfig::default_max_atoms")]
    pub max_atoms: usize,
    /// Step function terms; defaults to the standard-box indicator.
    #[serde(default)]
    pub step_function: Vec<StepTerm>,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default = "SeminormConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl SeminormConfig {
    fn default_max_atoms() -> usize {
        6
    }
    fn default_tol() -> f64 {
        1e-12
    }

    pub fn step_function(&self) -> StepFunction {
        if self.step_function.is_empty() {
            StepFunction::indicator(GeodesicBox::standard())
        } else {
            StepFunction {
                terms: self.step_function.clone(),
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommuteCheckConfig {
    #[serde(default = "CommuteCheckConfig::default_pairs")]
    pub pairs: usize,
    #[serde(default = "CommuteCheckConfig::default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "CommuteCheckConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "CommuteCheckConfig::default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl CommuteCheckConfig {
    fn default_pairs() -> usize {
        100
    }
    fn default_amplitude() -> f64 {
        1.0
    }
    fn default_tol() -> f64 {
        1e-8
    }
    fn default_samples() -> usize {
        256
    }
}
