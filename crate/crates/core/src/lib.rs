//! Two atomic-ensemble collective modes coupled through a single cavity mode.
//!
//! The crate computes
//! - the driven steady state, in closed form and by direct linear solve
//!   ([`steady`]),
//! - the stationary fluctuation spectra, in closed form and through the
//!   resolvent of the drift matrix ([`spectra`]),
//! - stochastic-trajectory estimates of the same spectra ([`stochastic`]),
//! - and a prominence-based classification of EIT-like transparency windows
//!   in any sampled curve ([`analysis`]).
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod analysis;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod presets;
pub mod scalar;
pub mod spectra;
pub mod steady;
pub mod stochastic;

pub use analysis::{
    classify_window, detect_windows, find_extrema, ExtremaReport, Extremum, WindowReport, DEFAULT_PROMINENCE,
};
pub use error::{Error, Result};
pub use grid::{uniform_grid, validate_grid};
pub use linalg::{Mat3, Vec3};
pub use model::{
    detunings, drift_matrix, effective_from_microscopic, require_stable, thermal_occupation, DriftMatrix,
    EffectiveCouplings, FrequencySet, MicroscopicParams, Mode, SystemParams,
};
pub use presets::{preset, GridSpec, Preset, PresetKind, PRESETS};
pub use scalar::Scalar;
pub use spectra::{
    cavity_spectrum, effective_cavity_omega, ensemble_spectra, k_factors, resolvent_sweep, spectra_analytic,
    spectra_resolvent_oracle, spectrum_sweep, EffectiveCavityOmega, MethodTag, SpectrumCurve,
};
pub use steady::{
    effective_cavity_zero, response_sweep, steady_state_analytic, steady_state_numeric, susceptibilities,
    EffectiveCavity0, LowExcitationCheck, ResponseCurve, SteadyState,
};
pub use stochastic::{
    estimate_spectrum, estimate_spectrum_for, integrate, simulate_trajectory, SimulationConfig, Taper,
    TrajectorySamples,
};

pub type Params = SystemParams<f64>;
pub type Micro = MicroscopicParams<f64>;
pub type Frequencies = FrequencySet<f64>;
pub type Drift = DriftMatrix<f64>;
pub type State = SteadyState<f64>;
pub type Cavity0 = EffectiveCavity0<f64>;
pub type Response = ResponseCurve<f64>;
pub type Spectrum = SpectrumCurve<f64>;
pub type Simulation = SimulationConfig<f64>;
pub type Trajectory = TrajectorySamples<f64>;
pub type Extrema = ExtremaReport<f64>;
pub type Windows = WindowReport<f64>;

/// Single-precision parameter record, for fast plotting sweeps.
pub type ParamsF32 = SystemParams<f32>;
