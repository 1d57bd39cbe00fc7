//! Driven steady state of the three-mode system.
//!
//! Two independent routes are provided: the closed-form amplitudes written
//! in terms of the ensemble susceptibilities and the dressed cavity, and a
//! direct elimination of the 3x3 fixed-point system `M x = −b`. They agree to
//! rounding wherever both are defined.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::validate_grid;
use crate::model::{drift_matrix, SystemParams};
use crate::scalar::{cplx, lit, Scalar};

/// Mean amplitudes `(c_s, A_s, B_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState<T: Scalar> {
    pub amp_c: Complex<T>,
    pub amp_a: Complex<T>,
    pub amp_b: Complex<T>,
}

impl<T: Scalar> SteadyState<T> {
    pub fn as_array(&self) -> [Complex<T>; 3] {
        [self.amp_c, self.amp_a, self.amp_b]
    }

    pub fn from_array(x: [Complex<T>; 3]) -> Self {
        SteadyState {
            amp_c: x[0],
            amp_a: x[1],
            amp_b: x[2],
        }
    }

    /// `(|c_s|², |A_s|², |B_s|²)`.
    pub fn intensities(&self) -> [T; 3] {
        self.as_array().map(|z| z.norm_sqr())
    }
}

/// The cavity dressed by both ensembles at zero frequency offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCavity0<T: Scalar> {
    pub detuning_eff: T,
    pub decay_eff: T,
    pub f_a: Complex<T>,
    pub f_b: Complex<T>,
    /// Renormalisation of the direct drive on ensemble A.
    pub drive_factor: Complex<T>,
}

impl<T: Scalar> EffectiveCavity0<T> {
    /// `Δ_eff − iκ_eff/2`.
    pub fn denominator(&self) -> Complex<T> {
        cplx(self.detuning_eff, -lit::<T>(0.5) * self.decay_eff)
    }
}

fn ensemble_denominator<T: Scalar>(detuning: T, decay: T, which: &str) -> Result<Complex<T>> {
    if detuning == T::zero() && decay == T::zero() {
        return Err(Error::SingularParameters(format!(
            "ensemble {which} is undamped and exactly resonant; no steady state"
        )));
    }
    Ok(cplx(detuning, -lit::<T>(0.5) * decay))
}

/// `f_a = G_A/(Δ_a − iγ_A/2)`, `f_b = G_B/(Δ_b − iγ_B/2)`.
pub fn susceptibilities<T: Scalar>(params: &SystemParams<T>) -> Result<(Complex<T>, Complex<T>)> {
    params.validate()?;
    let da = ensemble_denominator(params.detuning_a, params.decay_a, "A")?;
    let db = ensemble_denominator(params.detuning_b, params.decay_b, "B")?;
    Ok((
        Complex::from(params.coupling_a) / da,
        Complex::from(params.coupling_b) / db,
    ))
}

pub fn effective_cavity_zero<T: Scalar>(params: &SystemParams<T>) -> Result<EffectiveCavity0<T>> {
    let (f_a, f_b) = susceptibilities(params)?;
    let quarter = lit::<T>(0.25);
    let lorentz_a = params.detuning_a.powi(2) + quarter * params.decay_a.powi(2);
    let lorentz_b = params.detuning_b.powi(2) + quarter * params.decay_b.powi(2);
    let ga2 = params.coupling_a.powi(2);
    let gb2 = params.coupling_b.powi(2);

    let decay_eff = params.cavity_decay
        + ga2 * params.decay_a / lorentz_a
        + gb2 * params.decay_b / lorentz_b;
    let detuning_eff = params.detuning_cavity
        - ga2 * params.detuning_a / lorentz_a
        - gb2 * params.detuning_b / lorentz_b;

    let denom = cplx(detuning_eff, -lit::<T>(0.5) * decay_eff);
    let drive_factor = Complex::from(T::one()) + f_a * params.coupling_a / denom;
    Ok(EffectiveCavity0 {
        detuning_eff,
        decay_eff,
        f_a,
        f_b,
        drive_factor,
    })
}

/// Closed-form steady state:
/// `A_s = −χF_A/(Δ_a − iγ_A/2)`, `c_s = χf_a/(Δ_eff − iκ_eff/2)`,
/// `B_s = −f_b c_s`.
pub fn steady_state_analytic<T: Scalar>(params: &SystemParams<T>) -> Result<SteadyState<T>> {
    let eff = effective_cavity_zero(params)?;
    let chi = Complex::from(params.drive);
    let da = cplx(params.detuning_a, -lit::<T>(0.5) * params.decay_a);
    let denom = eff.denominator();

    let amp_a = -chi * eff.drive_factor / da;
    let amp_c = chi * eff.f_a / denom;
    // The fixed point of the B equation gives B = −G_B c/(Δ_b − iγ_B/2).
    let amp_b = -chi * eff.f_a * eff.f_b / denom;
    Ok(SteadyState { amp_c, amp_a, amp_b })
}

/// Direct solve of `M x = −b` with partial pivoting.
pub fn steady_state_numeric<T: Scalar>(params: &SystemParams<T>) -> Result<SteadyState<T>> {
    let drift = drift_matrix(params)?;
    let rhs = drift.drive_vector.map(|v| -v);
    drift.generator.solve(&rhs).map(SteadyState::from_array)
}

/// Sampled response intensities over a detuning scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseCurve<T: Scalar> {
    pub grid: Vec<T>,
    pub intensity_a: Vec<T>,
    pub intensity_b: Vec<T>,
    pub intensity_c: Vec<T>,
    pub params_snapshot: SystemParams<T>,
    pub degenerate: bool,
}

impl<T: Scalar> ResponseCurve<T> {
    /// Number of grid points where no steady state exists (flagged as NaN).
    pub fn flagged_count(&self) -> usize {
        self.intensity_a.iter().filter(|v| v.is_nan()).count()
    }
}

/// Evaluates the closed-form steady state along `grid`, setting `Δ_a = Δ`
/// (and `Δ_b = Δ_c = Δ` when `degenerate`). Points without a steady state are
/// recorded as NaN.
pub fn response_sweep<T: Scalar>(
    params: &SystemParams<T>,
    grid: &[T],
    degenerate: bool,
) -> Result<ResponseCurve<T>> {
    params.validate()?;
    validate_grid(grid)?;
    let rows: Vec<[T; 3]> = grid
        .par_iter()
        .map(|&delta| {
            let p = params.at_detuning(delta, degenerate);
            match steady_state_analytic(&p) {
                Ok(s) => s.intensities(),
                Err(_) => [T::nan(); 3],
            }
        })
        .collect();

    let mut curve = ResponseCurve {
        grid: grid.to_vec(),
        intensity_a: Vec::with_capacity(grid.len()),
        intensity_b: Vec::with_capacity(grid.len()),
        intensity_c: Vec::with_capacity(grid.len()),
        params_snapshot: *params,
        degenerate,
    };
    for [ic, ia, ib] in rows {
        curve.intensity_c.push(ic);
        curve.intensity_a.push(ia);
        curve.intensity_b.push(ib);
    }
    Ok(curve)
}

/// Flags violations of the low-excitation (bosonization) assumption
/// `⟨A†A⟩ ≪ N_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowExcitationCheck<T: Scalar> {
    pub atom_count_a: Option<u64>,
    pub atom_count_b: Option<u64>,
    /// Maximum tolerated `|amp|² / N`.
    pub fraction: T,
}

impl<T: Scalar> Default for LowExcitationCheck<T> {
    fn default() -> Self {
        LowExcitationCheck {
            atom_count_a: None,
            atom_count_b: None,
            fraction: lit(0.1),
        }
    }
}

impl<T: Scalar> LowExcitationCheck<T> {
    /// Returns one message per ensemble whose population exceeds the bound
    /// and logs each at warn level. Silent when atom counts are unknown.
    pub fn check(&self, state: &SteadyState<T>) -> Vec<String> {
        let mut warnings = Vec::new();
        for (name, count, amp) in [
            ("A", self.atom_count_a, state.amp_a),
            ("B", self.atom_count_b, state.amp_b),
        ] {
            let Some(n) = count else { continue };
            let limit = self.fraction * T::from_u64(n).unwrap_or_else(T::infinity);
            let population = amp.norm_sqr();
            if population > limit {
                let msg = format!(
                    "ensemble {name} population {population} exceeds {} of N = {n}; \
                     low-excitation approximation is questionable",
                    self.fraction
                );
                log::warn!("{msg}");
                warnings.push(msg);
            }
        }
        warnings
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::relative_error;

    fn fig2a() -> SystemParams<f64> {
        SystemParams {
            coupling_a: 10.0,
            coupling_b: 1.0,
            decay_a: 90.0,
            decay_b: 9.0,
            drive: 1.0,
            ..Default::default()
        }
    }

    #[test]
    fn susceptibility_examples() {
        let (fa, fb) = susceptibilities(&fig2a()).unwrap();
        // 10/(−45i) = (10/45) i and 1/(−4.5i) = (1/4.5) i
        assert!(relative_error(fa, Complex::new(0.0, 10.0 / 45.0)) < 1e-15);
        assert!(relative_error(fb, Complex::new(0.0, 1.0 / 4.5)) < 1e-15);

        let p = SystemParams::<f64> { coupling_a: 0.0, ..fig2a() };
        assert_eq!(susceptibilities(&p).unwrap().0, Complex::new(0.0, 0.0));

        let p = SystemParams::<f64> { detuning_a: 1e9, ..fig2a() };
        assert!(susceptibilities(&p).unwrap().0.norm() < 1e-7);
    }

    #[test]
    fn resonant_undamped_ensemble_is_singular() {
        let p = SystemParams::<f64> { decay_a: 0.0, ..fig2a() };
        assert!(matches!(susceptibilities(&p), Err(Error::SingularParameters(_))));
        assert!(matches!(steady_state_analytic(&p), Err(Error::SingularParameters(_))));
    }

    #[test]
    fn effective_cavity_fig2a() {
        let eff = effective_cavity_zero(&fig2a()).unwrap();
        // 1 + 9000/2025 + 9/20.25
        let expected = 1.0 + 9000.0 / 2025.0 + 9.0 / 20.25;
        assert!((eff.decay_eff - expected).abs() < 1e-13);
        assert!((eff.decay_eff - 5.888_888_888_888_889).abs() < 1e-13);
        assert_eq!(eff.detuning_eff, 0.0);
        assert!(relative_error(eff.drive_factor, Complex::new(13.0 / 53.0, 0.0)) < 1e-14);
    }

    #[test]
    fn effective_cavity_empty() {
        let p = SystemParams::<f64> {
            detuning_cavity: 0.7,
            detuning_a: 0.3,
            decay_a: 2.0,
            decay_b: 1.0,
            ..Default::default()
        };
        let eff = effective_cavity_zero(&p).unwrap();
        assert_eq!(eff.decay_eff, 1.0);
        assert_eq!(eff.detuning_eff, 0.7);
        assert_eq!(eff.drive_factor, Complex::new(1.0, 0.0));
    }

    #[test]
    fn fig2a_on_resonance_amplitudes() {
        let s = steady_state_analytic(&fig2a()).unwrap();
        // A_s = −i·13/2385 exactly.
        assert!(relative_error(s.amp_a, Complex::new(0.0, -13.0 / 2385.0)) < 1e-14);
        let [ic, ia, ib] = s.intensities();
        assert!((ia - 2.9710e-5).abs() / 2.9710e-5 < 1e-4);
        assert!((ib - 2.8129e-4).abs() / 2.8129e-4 < 1e-4);
        assert!((ic - 5.696e-3).abs() / 5.696e-3 < 1e-3);
    }

    #[test]
    fn isolated_driven_oscillator() {
        let p = SystemParams::<f64> {
            decay_a: 2.0,
            decay_b: 1.0,
            drive: 1.0,
            ..Default::default()
        };
        let s = steady_state_analytic(&p).unwrap();
        assert!(relative_error(s.amp_a, Complex::new(0.0, -1.0)) < 1e-15);
        assert_eq!(s.amp_b, Complex::new(0.0, 0.0));
        assert_eq!(s.amp_c, Complex::new(0.0, 0.0));
    }

    #[test]
    fn zero_drive_gives_zero_state() {
        let p = SystemParams::<f64> { drive: 0.0, ..fig2a() };
        for s in [steady_state_analytic(&p).unwrap(), steady_state_numeric(&p).unwrap()] {
            assert!(s.as_array().iter().all(|z| z.norm() == 0.0));
        }
        let curve = response_sweep(&p, &[-1.0, 0.0, 1.0], true).unwrap();
        assert!(curve.intensity_a.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn numeric_matches_analytic_fig2a() {
        let a = steady_state_analytic(&fig2a()).unwrap();
        let n = steady_state_numeric(&fig2a()).unwrap();
        for (x, y) in a.as_array().iter().zip(n.as_array().iter()) {
            assert!(relative_error(*x, *y) < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn sweep_flags_singular_points() {
        // Undamped uncoupled ensemble A: singular only at Δ = 0.
        let p = SystemParams::<f64> {
            decay_a: 0.0,
            decay_b: 1.0,
            drive: 1.0,
            ..Default::default()
        };
        let curve = response_sweep(&p, &[-1.0, 0.0, 1.0], false).unwrap();
        assert!(curve.intensity_a[1].is_nan());
        assert!(curve.intensity_a[0].is_finite() && curve.intensity_a[2].is_finite());
        assert_eq!(curve.flagged_count(), 1);
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        assert!(response_sweep(&fig2a(), &[], true).is_err());
        assert!(response_sweep(&fig2a(), &[1.0, 0.0], true).is_err());
    }

    #[test]
    fn non_degenerate_sweep_holds_other_detunings() {
        let p = SystemParams::<f64> { detuning_b: 3.0, detuning_cavity: -2.0, ..fig2a() };
        let curve = response_sweep(&p, &[0.5], false).unwrap();
        let direct = steady_state_analytic(&SystemParams { detuning_a: 0.5, ..p }).unwrap();
        assert_eq!(curve.intensity_a[0], direct.intensities()[1]);
    }

    #[test]
    fn low_excitation_warning() {
        let s = SteadyState {
            amp_c: Complex::new(0.0, 0.0),
            amp_a: Complex::new(3.0_f64, 0.0),
            amp_b: Complex::new(0.1, 0.0),
        };
        assert!(LowExcitationCheck::default().check(&s).is_empty());
        let check = LowExcitationCheck {
            atom_count_a: Some(50),
            atom_count_b: Some(50),
            ..Default::default()
        };
        let w = check.check(&s);
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("ensemble A"));
        let check = LowExcitationCheck {
            atom_count_a: Some(1000),
            ..Default::default()
        };
        assert!(check.check(&s).is_empty());
    }
}
