//! Named parameter sets for the response and fluctuation-spectrum regimes.
//!
//! Couplings and decays are in units of κ; all presets are resonant
//! (Δ_c = Δ_a = Δ_b = 0), zero-temperature, and driven with χ = 1.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::uniform_grid;
use crate::model::SystemParams;
use crate::scalar::{lit, Scalar};

/// Inclusive uniform grid `[start, stop]` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points<T: Scalar>(&self) -> Result<Vec<T>> {
        uniform_grid(lit(self.start), lit(self.stop), self.count)
    }

    pub fn spacing(&self) -> f64 {
        (self.stop - self.start) / (self.count as f64 - 1.0)
    }
}

/// Detuning scan for the response figures: 2001 points on [−100κ, 100κ].
pub const RESPONSE_GRID: GridSpec = GridSpec {
    start: -100.0,
    stop: 100.0,
    count: 2001,
};

/// Frequency grid for the fluctuation spectra: spacing 0.05κ on [−30κ, 30κ].
pub const SPECTRUM_GRID: GridSpec = GridSpec {
    start: -30.0,
    stop: 30.0,
    count: 1201,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetKind {
    Response,
    Spectrum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: PresetKind,
    pub coupling_a: f64,
    pub coupling_b: f64,
    pub decay_a: f64,
    pub decay_b: f64,
    pub grid: GridSpec,
}

impl Preset {
    pub fn params<T: Scalar>(&self) -> SystemParams<T> {
        SystemParams {
            coupling_a: lit(self.coupling_a),
            coupling_b: lit(self.coupling_b),
            decay_a: lit(self.decay_a),
            decay_b: lit(self.decay_b),
            drive: T::one(),
            cavity_decay: T::one(),
            ..Default::default()
        }
    }
}

const fn response(name: &'static str, description: &'static str, g: (f64, f64), gamma: (f64, f64)) -> Preset {
    Preset {
        name,
        description,
        kind: PresetKind::Response,
        coupling_a: g.0,
        coupling_b: g.1,
        decay_a: gamma.0,
        decay_b: gamma.1,
        grid: RESPONSE_GRID,
    }
}

const fn spectrum(name: &'static str, description: &'static str, g: (f64, f64), gamma: (f64, f64)) -> Preset {
    Preset {
        name,
        description,
        kind: PresetKind::Spectrum,
        coupling_a: g.0,
        coupling_b: g.1,
        decay_a: gamma.0,
        decay_b: gamma.1,
        grid: SPECTRUM_GRID,
    }
}

pub const PRESETS: &[Preset] = &[
    response("fig2a", "antinode-node response: G_A=10, G_B=1, γ_A=90, γ_B=9", (10.0, 1.0), (90.0, 9.0)),
    response("fig2b", "node-antinode response: G_A=1, G_B=10, γ_A=9, γ_B=90", (1.0, 10.0), (9.0, 90.0)),
    response("fig3a", "antinode-antinode response: G=10, γ_A=γ_B=5", (10.0, 10.0), (5.0, 5.0)),
    response("fig3b", "antinode-antinode response: G=10, γ_A=γ_B=50", (10.0, 10.0), (50.0, 50.0)),
    response("fig3c", "antinode-antinode response: G=10, γ_A=50, γ_B=5", (10.0, 10.0), (50.0, 5.0)),
    response("fig3d", "antinode-antinode response: G=10, γ_A=5, γ_B=50", (10.0, 10.0), (5.0, 50.0)),
    spectrum("fig4", "fluctuation spectra, antinode-node (same as fig4a)", (10.0, 1.0), (90.0, 9.0)),
    spectrum("fig4a", "fluctuation spectra, antinode-node: G_A=10, G_B=1, γ_A=90, γ_B=9", (10.0, 1.0), (90.0, 9.0)),
    spectrum("fig4b", "fluctuation spectra, node-antinode: G_A=1, G_B=10, γ_A=9, γ_B=90", (1.0, 10.0), (9.0, 90.0)),
    Preset {
        name: "calibration",
        description: "decoupled cavity with unit ensemble decays (Lorentzian cavity spectrum)",
        kind: PresetKind::Spectrum,
        coupling_a: 0.0,
        coupling_b: 0.0,
        decay_a: 1.0,
        decay_b: 1.0,
        grid: GridSpec {
            start: -3.0,
            stop: 3.0,
            count: 61,
        },
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
