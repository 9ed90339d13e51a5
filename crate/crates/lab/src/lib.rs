//! Batch experiment harness: configuration in, CSV out.
//!
//! Each experiment reproduces one verifiable statement about boxes of
//! geodesics, Liouville masses, seminorms or earthquakes as a table with a
//! pass/fail summary. Runs are deterministic: the same configuration and
//! seed produce byte-identical CSV output.

pub mod config;
pub mod experiments;
pub mod output;

use std::fmt;
use std::path::Path;

use anyhow::Context;
use serde::de::DeserializeOwned;

use output::RunSummary;

/// The available experiments, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    OrthoIdentity,
    QuakeConverge,
    QuakeMonotone,
    QuakeBounds,
    WeakstarDemo,
    QsEstimate,
    Seminorm,
    CommuteCheck,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Experiment::OrthoIdentity => "ortho-identity",
            Experiment::QuakeConverge => "quake-converge",
            Experiment::QuakeMonotone => "quake-monotone",
            Experiment::QuakeBounds => "quake-bounds",
            Experiment::WeakstarDemo => "weakstar-demo",
            Experiment::QsEstimate => "qs-estimate",
            Experiment::Seminorm => "seminorm",
            Experiment::CommuteCheck => "commute-check",
        };
        f.write_str(name)
    }
}

fn parse_config<C: DeserializeOwned>(
    raw: &str,
    seed: Option<u64>,
    tol: Option<f64>,
) -> anyhow::Result<C> {
    let mut value: serde_json::Value =
        serde_json::from_str(raw).context("config is not valid JSON")?;
    let obj = value
        .as_object_mut()
        .context("config must be a JSON object")?;
    if let Some(s) = seed {
        obj.insert("seed".into(), serde_json::json!(s));
    }
    if let Some(t) = tol {
        obj.insert("tol".into(), serde_json::json!(t));
    }
    serde_json::from_value(value).context("config does not match the experiment schema")
}

/// Runs one experiment from a JSON configuration string. `seed` and `tol`
/// override the corresponding config fields when given.
pub fn run_experiment(
    experiment: Experiment,
    config_json: &str,
    out_dir: &Path,
    seed: Option<u64>,
    tol: Option<f64>,
) -> anyhow::Result<RunSummary> {
    match experiment {
        Experiment::OrthoIdentity => {
            experiments::ortho_identity(parse_config(config_json, seed, tol)?, out_dir)
        }
        Experiment::QuakeConverge => {
            experiments::quake_converge(parse_config(config_json, seed, tol)?, out_dir)
        }
        Experiment::QuakeMonotone => {
            experiments::quake_monotone(parse_config(config_json, seed, tol)?, out_dir)
        }
        Experiment::QuakeBounds => {
            experiments::quake_bounds(parse_config(config_json, seed, tol)?, out_dir)
        }
        Experiment::WeakstarDemo => {
            experiments::weakstar_demo(parse_config(config_json, seed, tol)?, out_dir)
        }
        Experiment::QsEstimate => {
            experiments::qs_estimate(parse_config(config_json, seed, tol)?, out_dir)
        }
        Experiment::Seminorm => {
            experiments::seminorm(parse_config(config_json, seed, tol)?, out_dir)
        }
        Experiment::CommuteCheck => {
            experiments::commute_check(parse_config(config_json, seed, tol)?, out_dir)
        }
    }
}
