//! Named benchmark parameter sets shared by the command-line frontend and
//! the acceptance suite.
//!
//! Each preset bundles an oscillator pair and its two baths in the
//! nondimensional units of this crate (`ħ = k_B = 1`, first oscillator
//! mass and frequency equal to one). The catalog covers the standard
//! benchmark scenes: absorption spectra of a detuned and of resonant
//! pairs, heat-conductance spectra, a thermally biased detuned pair, the
//! entanglement thresholds of weakly thermal pairs, and the squeezing
//! window of a biased resonant pair.

use crate::bath::BathSpec;
use crate::response::OscillatorPair;
use crate::{DuetError, Result};

/// A named, fully specified benchmark configuration.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub pair: OscillatorPair,
    pub bath1: BathSpec,
    pub bath2: BathSpec,
}

/// The names of every bundled preset, in catalog order.
pub const PRESET_NAMES: [&str; 10] = [
    "fig1a", "fig1b", "fig1c", "fig3left_a", "fig3left_b", "fig3left_c", "fig3right", "fig4a",
    "fig4c", "fig5",
];

fn build(
    name: &'static str,
    description: &'static str,
    (m2, k2, lambda): (f64, f64, f64),
    (gamma1, gamma2, tau_c): (f64, f64, f64),
    (t1, t2): (f64, f64),
) -> Result<Preset> {
    Ok(Preset {
        name,
        description,
        pair: OscillatorPair::new(1.0, m2, 1.0, k2, lambda)?,
        bath1: BathSpec::new(gamma1, tau_c, t1)?,
        bath2: BathSpec::new(gamma2, tau_c, t2)?,
    })
}

/// Looks up a preset by name (`fig4` is an alias for `fig4a`).
pub fn preset(name: &str) -> Result<Preset> {
    // the three bath/coupling scenes reused across the catalog
    let scene_a = (1.0, 1.3225, 0.09); // detuned (ω₂₀ = 1.15), weak coupling
    let scene_b = (1.0, 1.0, 0.27); // resonant, moderate coupling
    let scene_c = (1.0, 1.0, 0.36); // resonant, slow cutoff, strong coupling
    let damp_a = (0.1, 0.1, 0.02);
    let damp_b = (0.4, 0.2, 0.02);
    let damp_c = (0.25, 0.217, 0.5);
    match name {
        "fig1a" => build(
            "fig1a",
            "detuned weakly coupled pair at zero temperature",
            scene_a,
            damp_a,
            (0.0, 0.0),
        ),
        "fig1b" => build(
            "fig1b",
            "resonant pair with asymmetric damping at zero temperature",
            scene_b,
            damp_b,
            (0.0, 0.0),
        ),
        "fig1c" => build(
            "fig1c",
            "resonant strongly coupled pair with a slow bath cutoff",
            scene_c,
            damp_c,
            (0.0, 0.0),
        ),
        "fig3left_a" => build(
            "fig3left_a",
            "heat conductance spectrum of the detuned pair near T = 1",
            scene_a,
            damp_a,
            (1.0, 1.0),
        ),
        "fig3left_b" => build(
            "fig3left_b",
            "heat conductance spectrum of the resonant pair near T = 1",
            scene_b,
            damp_b,
            (1.0, 1.0),
        ),
        "fig3left_c" => build(
            "fig3left_c",
            "heat conductance spectrum of the slow-cutoff pair near T = 1",
            scene_c,
            damp_c,
            (1.0, 1.0),
        ),
        "fig3right" => build(
            "fig3right",
            "strongly detuned pair (ω₂₀ = 0.6) under a hot thermal bias",
            (1.0, 0.36, 0.36),
            (0.1, 0.1, 0.02),
            (5.0, 4.0),
        ),
        "fig4" | "fig4a" => build(
            "fig4a",
            "entanglement threshold sweep of the detuned pair",
            scene_a,
            damp_a,
            (0.1, 0.15),
        ),
        "fig4c" => build(
            "fig4c",
            "entanglement threshold sweep of the slow-cutoff pair",
            scene_c,
            damp_c,
            (0.1, 0.15),
        ),
        "fig5" => build(
            "fig5",
            "squeezing window of the resonant pair under thermal bias",
            scene_b,
            damp_b,
            (0.5, 0.25),
        ),
        other => Err(DuetError::InvalidParameter(format!(
            "unknown preset '{other}'; available: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}
