//! Stationary fluctuation spectra of the three modes.
//!
//! The closed forms express every spectrum through the cavity dressed at
//! frequency ω, `Δ_eff(ω)` and `κ_eff(ω)`. The resolvent route computes the
//! same quantities as the diagonal of `R D R†` with
//! `R(ω) = (−iω − M)⁻¹ F`, which is the frequency-domain solution of the
//! linearized Langevin equations under the `e^{+iωt}` transform convention.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::validate_grid;
use crate::linalg::Mat3;
use crate::model::{drift_matrix, SystemParams};
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCavityOmega<T: Scalar> {
    pub detuning_eff: T,
    pub decay_eff: T,
}

/// Which route produced a [`SpectrumCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodTag {
    Analytic,
    Resolvent,
    Stochastic,
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MethodTag::Analytic => "analytic",
            MethodTag::Resolvent => "resolvent",
            MethodTag::Stochastic => "stochastic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCurve<T: Scalar> {
    pub grid: Vec<T>,
    pub s_c: Vec<T>,
    pub s_a: Vec<T>,
    pub s_b: Vec<T>,
    pub params_snapshot: SystemParams<T>,
    pub method_tag: MethodTag,
    /// Non-fatal diagnostics (e.g. short stochastic runs).
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Lorentzian denominator `(ω − Δ)² + γ²/4` of one ensemble.
#[derive(Debug, Clone, Copy)]
struct EnsembleTerm<T> {
    offset: T,
    lorentz: T,
}

fn ensemble_term<T: Scalar>(omega: T, detuning: T, decay: T, which: &str) -> Result<EnsembleTerm<T>> {
    let offset = omega - detuning;
    let lorentz = offset * offset + lit::<T>(0.25) * decay * decay;
    if lorentz == T::zero() {
        return Err(Error::SingularParameters(format!(
            "ensemble {which} is undamped and ω = Δ exactly"
        )));
    }
    Ok(EnsembleTerm { offset, lorentz })
}

struct Dressed<T: Scalar> {
    a: EnsembleTerm<T>,
    b: EnsembleTerm<T>,
    cavity: EffectiveCavityOmega<T>,
    /// `[ω − Δ_eff(ω)]² + κ_eff²(ω)/4`
    cavity_lorentz: T,
}

fn dressed<T: Scalar>(params: &SystemParams<T>, omega: T) -> Result<Dressed<T>> {
    let a = ensemble_term(omega, params.detuning_a, params.decay_a, "A")?;
    let b = ensemble_term(omega, params.detuning_b, params.decay_b, "B")?;
    let ga2 = params.coupling_a * params.coupling_a;
    let gb2 = params.coupling_b * params.coupling_b;
    let detuning_eff = params.detuning_cavity + ga2 * a.offset / a.lorentz + gb2 * b.offset / b.lorentz;
    let decay_eff =
        params.cavity_decay + params.decay_a * ga2 / a.lorentz + params.decay_b * gb2 / b.lorentz;
    let x = omega - detuning_eff;
    Ok(Dressed {
        a,
        b,
        cavity: EffectiveCavityOmega {
            detuning_eff,
            decay_eff,
        },
        cavity_lorentz: x * x + lit::<T>(0.25) * decay_eff * decay_eff,
    })
}

pub fn effective_cavity_omega<T: Scalar>(
    params: &SystemParams<T>,
    omega: T,
) -> Result<EffectiveCavityOmega<T>> {
    params.validate()?;
    Ok(dressed(params, omega)?.cavity)
}

fn cavity_spectrum_inner<T: Scalar>(params: &SystemParams<T>, d: &Dressed<T>) -> T {
    let [wc, wa, wb] = params.noise_weights();
    let ga2 = params.coupling_a * params.coupling_a;
    let gb2 = params.coupling_b * params.coupling_b;
    let numerator = wc * params.cavity_decay
        + ga2 * params.decay_a * wa / d.a.lorentz
        + gb2 * params.decay_b * wb / d.b.lorentz;
    numerator / d.cavity_lorentz
}

/// `S_c(ω)`.
pub fn cavity_spectrum<T: Scalar>(params: &SystemParams<T>, omega: T) -> Result<T> {
    params.validate()?;
    let d = dressed(params, omega)?;
    Ok(cavity_spectrum_inner(params, &d))
}

fn k_factor<T: Scalar>(omega: T, term: &EnsembleTerm<T>, decay: T, d: &Dressed<T>) -> T {
    let x = omega - d.cavity.detuning_eff;
    (term.offset * x - lit::<T>(0.25) * decay * d.cavity.decay_eff) / (d.cavity_lorentz * term.lorentz)
}

/// Cross-interference factors `(K_A(ω), K_B(ω))`.
pub fn k_factors<T: Scalar>(params: &SystemParams<T>, omega: T) -> Result<(T, T)> {
    params.validate()?;
    let d = dressed(params, omega)?;
    Ok((
        k_factor(omega, &d.a, params.decay_a, &d),
        k_factor(omega, &d.b, params.decay_b, &d),
    ))
}

fn ensemble_spectra_inner<T: Scalar>(params: &SystemParams<T>, omega: T, d: &Dressed<T>, s_c: T) -> (T, T) {
    let [_, wa, wb] = params.noise_weights();
    let two = lit::<T>(2.0);
    let one = T::one();
    let ga2 = params.coupling_a * params.coupling_a;
    let gb2 = params.coupling_b * params.coupling_b;
    let ka = k_factor(omega, &d.a, params.decay_a, d);
    let kb = k_factor(omega, &d.b, params.decay_b, d);
    let s_a = (ga2 * s_c + params.decay_a * wa * (one + two * ga2 * ka)) / d.a.lorentz;
    let s_b = (gb2 * s_c + params.decay_b * wb * (one + two * gb2 * kb)) / d.b.lorentz;
    (s_a, s_b)
}

/// `(S_A(ω), S_B(ω))`.
pub fn ensemble_spectra<T: Scalar>(params: &SystemParams<T>, omega: T) -> Result<(T, T)> {
    params.validate()?;
    let d = dressed(params, omega)?;
    let s_c = cavity_spectrum_inner(params, &d);
    Ok(ensemble_spectra_inner(params, omega, &d, s_c))
}

/// All three closed-form spectra `(S_c, S_A, S_B)` at one frequency.
pub fn spectra_analytic<T: Scalar>(params: &SystemParams<T>, omega: T) -> Result<[T; 3]> {
    params.validate()?;
    let d = dressed(params, omega)?;
    let s_c = cavity_spectrum_inner(params, &d);
    let (s_a, s_b) = ensemble_spectra_inner(params, omega, &d, s_c);
    Ok([s_c, s_a, s_b])
}

/// Independent route: diagonal of `R D R†` with `R = (−iω − M)⁻¹ F`.
pub fn spectra_resolvent_oracle<T: Scalar>(params: &SystemParams<T>, omega: T) -> Result<[T; 3]> {
    let drift = drift_matrix(params)?;
    let shifted = Mat3::identity()
        .scale(Complex::new(T::zero(), -omega))
        .sub(&drift.generator);
    let noise = Mat3::diagonal(drift.noise_amplitudes().map(Complex::from));
    let transfer = shifted.solve_mat(&noise)?;
    let weights = Mat3::diagonal(drift.noise_weights.map(Complex::from));
    let covariance = transfer.mul_mat(&weights).mul_mat(&transfer.conj_transpose());
    Ok([0, 1, 2].map(|i| covariance.get(i, i).re))
}

/// Closed-form spectra on a grid; points where a spectrum is undefined are NaN.
pub fn spectrum_sweep<T: Scalar>(params: &SystemParams<T>, grid: &[T]) -> Result<SpectrumCurve<T>> {
    sweep_with(params, grid, MethodTag::Analytic, spectra_analytic)
}

/// Resolvent-oracle spectra on a grid.
pub fn resolvent_sweep<T: Scalar>(params: &SystemParams<T>, grid: &[T]) -> Result<SpectrumCurve<T>> {
    sweep_with(params, grid, MethodTag::Resolvent, spectra_resolvent_oracle)
}

fn sweep_with<T: Scalar>(
    params: &SystemParams<T>,
    grid: &[T],
    tag: MethodTag,
    eval: fn(&SystemParams<T>, T) -> Result<[T; 3]>,
) -> Result<SpectrumCurve<T>> {
    params.validate()?;
    validate_grid(grid)?;
    let rows: Vec<[T; 3]> = grid
        .par_iter()
        .map(|&w| eval(params, w).unwrap_or([T::nan(); 3]))
        .collect();
    let mut curve = SpectrumCurve {
        grid: grid.to_vec(),
        s_c: Vec::with_capacity(grid.len()),
        s_a: Vec::with_capacity(grid.len()),
        s_b: Vec::with_capacity(grid.len()),
        params_snapshot: *params,
        method_tag: tag,
        warnings: Vec::new(),
    };
    for [c, a, b] in rows {
        curve.s_c.push(c);
        curve.s_a.push(a);
        curve.s_b.push(b);
    }
    Ok(curve)
}
