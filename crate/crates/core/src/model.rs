//! Parameter records and the linear generator shared by every solver.
//!
//! Frequencies and rates are expressed in units of the cavity decay rate κ,
//! with ħ = 1 and k_B absorbed into the temperature. Mode order is always
//! (c, A, B): cavity, driven ensemble, undriven ensemble.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::{lit, minus_i, Scalar};

/// Index of each mode in every 3-vector and 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Cavity = 0,
    A = 1,
    B = 2,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Cavity, Mode::A, Mode::B];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Atom-level description of the two ensembles before bosonization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroscopicParams<T: Scalar> {
    pub atom_count_a: u64,
    pub atom_count_b: u64,
    pub single_atom_coupling_a: T,
    pub single_atom_coupling_b: T,
    /// Drive amplitude per atom of the left ensemble.
    pub drive_per_atom: T,
}

impl<T: Scalar> MicroscopicParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.atom_count_a == 0 {
            return Err(invalid("atom_count_a", "must be at least 1"));
        }
        if self.atom_count_b == 0 {
            return Err(invalid("atom_count_b", "must be at least 1"));
        }
        finite("single_atom_coupling_a", self.single_atom_coupling_a)?;
        finite("single_atom_coupling_b", self.single_atom_coupling_b)?;
        finite("drive_per_atom", self.drive_per_atom)?;
        Ok(())
    }
}

/// Collective couplings `(G_A, G_B, χ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCouplings<T: Scalar> {
    pub coupling_a: T,
    pub coupling_b: T,
    pub drive: T,
}

/// Collective enhancement: `G_A = √N_a g_a`, `G_B = √N_b g_b`, `χ = √N_a Ω`.
pub fn effective_from_microscopic<T: Scalar>(
    micro: &MicroscopicParams<T>,
) -> Result<EffectiveCouplings<T>> {
    micro.validate()?;
    let sqrt_na = count::<T>(micro.atom_count_a).sqrt();
    let sqrt_nb = count::<T>(micro.atom_count_b).sqrt();
    Ok(EffectiveCouplings {
        coupling_a: sqrt_na * micro.single_atom_coupling_a,
        coupling_b: sqrt_nb * micro.single_atom_coupling_b,
        drive: sqrt_na * micro.drive_per_atom,
    })
}

fn count<T: Scalar>(n: u64) -> T {
    T::from_u64(n).unwrap_or_else(T::infinity)
}

/// Bare mode frequencies and the drive frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencySet<T: Scalar> {
    pub omega_c: T,
    pub omega_a: T,
    pub omega_b: T,
    pub omega_f: T,
}

impl<T: Scalar> FrequencySet<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_c", self.omega_c),
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("omega_f", self.omega_f),
        ] {
            finite(name, v)?;
            if v <= T::zero() {
                return Err(invalid(name, "must be positive"));
            }
        }
        Ok(())
    }
}

/// Detunings from the drive, `(Δ_c, Δ_a, Δ_b)` with `Δ_r = ω_r − ω_f`.
pub fn detunings<T: Scalar>(freqs: &FrequencySet<T>) -> Result<[T; 3]> {
    freqs.validate()?;
    Ok([
        freqs.omega_c - freqs.omega_f,
        freqs.omega_a - freqs.omega_f,
        freqs.omega_b - freqs.omega_f,
    ])
}

/// Bose-Einstein occupation `1/(exp(ω/T) − 1)`; exactly zero at `T = 0`.
pub fn thermal_occupation<T: Scalar>(omega: T, temperature: T) -> Result<T> {
    if !(omega > T::zero()) || !omega.is_finite() {
        return Err(invalid("omega", format!("must be positive and finite, got {omega}")));
    }
    if !(temperature >= T::zero()) {
        return Err(invalid("temperature", format!("must be non-negative, got {temperature}")));
    }
    if temperature == T::zero() {
        return Ok(T::zero());
    }
    let x = omega / temperature;
    Ok(x.exp_m1().recip())
}

/// The effective three-mode model in the frame rotating at the drive frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<T: Scalar> {
    pub detuning_cavity: T,
    pub detuning_a: T,
    pub detuning_b: T,
    pub coupling_a: T,
    pub coupling_b: T,
    pub drive: T,
    pub cavity_decay: T,
    pub decay_a: T,
    pub decay_b: T,
    pub thermal_c: T,
    pub thermal_a: T,
    pub thermal_b: T,
}

impl<T: Scalar> Default for SystemParams<T> {
    /// Resonant, uncoupled, undriven, κ = 1, zero temperature.
    fn default() -> Self {
        SystemParams {
            detuning_cavity: T::zero(),
            detuning_a: T::zero(),
            detuning_b: T::zero(),
            coupling_a: T::zero(),
            coupling_b: T::zero(),
            drive: T::zero(),
            cavity_decay: T::one(),
            decay_a: T::zero(),
            decay_b: T::zero(),
            thermal_c: T::zero(),
            thermal_a: T::zero(),
            thermal_b: T::zero(),
        }
    }
}

impl<T: Scalar> SystemParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("detuning_cavity", self.detuning_cavity),
            ("detuning_a", self.detuning_a),
            ("detuning_b", self.detuning_b),
        ] {
            finite(name, v)?;
        }
        for (name, v) in [
            ("coupling_a", self.coupling_a),
            ("coupling_b", self.coupling_b),
            ("drive", self.drive),
            ("decay_a", self.decay_a),
            ("decay_b", self.decay_b),
            ("thermal_c", self.thermal_c),
            ("thermal_a", self.thermal_a),
            ("thermal_b", self.thermal_b),
        ] {
            finite(name, v)?;
            if v < T::zero() {
                return Err(invalid(name, format!("must be non-negative, got {v}")));
            }
        }
        finite("cavity_decay", self.cavity_decay)?;
        if self.cavity_decay <= T::zero() {
            return Err(invalid(
                "cavity_decay",
                format!("must be positive, got {}", self.cavity_decay),
            ));
        }
        Ok(())
    }

    /// Replaces the couplings and drive with a collective reduction.
    pub fn with_couplings(mut self, couplings: EffectiveCouplings<T>) -> Self {
        self.coupling_a = couplings.coupling_a;
        self.coupling_b = couplings.coupling_b;
        self.drive = couplings.drive;
        self
    }

    /// Sets the detunings from bare frequencies.
    pub fn with_frequencies(mut self, freqs: &FrequencySet<T>) -> Result<Self> {
        let [dc, da, db] = detunings(freqs)?;
        self.detuning_cavity = dc;
        self.detuning_a = da;
        self.detuning_b = db;
        Ok(self)
    }

    /// Scan helper: sets `Δ_a = delta`, and also `Δ_b = Δ_c = delta` when
    /// `degenerate` is set.
    pub fn at_detuning(mut self, delta: T, degenerate: bool) -> Self {
        self.detuning_a = delta;
        if degenerate {
            self.detuning_b = delta;
            self.detuning_cavity = delta;
        }
        self
    }

    /// Damping rates `(κ, γ_A, γ_B)`.
    pub fn decays(&self) -> [T; 3] {
        [self.cavity_decay, self.decay_a, self.decay_b]
    }

    pub fn detuning_vector(&self) -> [T; 3] {
        [self.detuning_cavity, self.detuning_a, self.detuning_b]
    }

    /// Input-noise strengths `N_r + 1`.
    pub fn noise_weights(&self) -> [T; 3] {
        [
            self.thermal_c + T::one(),
            self.thermal_a + T::one(),
            self.thermal_b + T::one(),
        ]
    }
}

fn finite<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {v}")))
    }
}

/// Linear generator of the mean-field and fluctuation dynamics
/// `ẋ = M x + b + F ξ(t)` over modes (c, A, B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftMatrix<T: Scalar> {
    pub generator: Mat3<T>,
    /// Damping rates `(κ, γ_A, γ_B)`; the noise amplitudes are their square roots.
    pub noise_rates: [T; 3],
    /// `(N_c + 1, N_a + 1, N_b + 1)`.
    pub noise_weights: [T; 3],
    /// Coherent drive `(0, −iχ, 0)`.
    pub drive_vector: Vec3<T>,
}

impl<T: Scalar> DriftMatrix<T> {
    pub fn eigenvalues(&self) -> [Complex<T>; 3] {
        self.generator.eigenvalues()
    }

    /// Largest eigenvalue real part; negative for a stable generator.
    pub fn spectral_abscissa(&self) -> T {
        self.eigenvalues()
            .iter()
            .fold(T::neg_infinity(), |acc, ev| acc.max(ev.re))
    }

    /// Most negative eigenvalue real part (the fastest relaxation rate).
    pub fn fastest_rate(&self) -> T {
        self.eigenvalues()
            .iter()
            .fold(T::zero(), |acc, ev| acc.max(-ev.re))
    }

    /// `F = diag(√κ, √γ_A, √γ_B)`.
    pub fn noise_amplitudes(&self) -> [T; 3] {
        self.noise_rates.map(|r| r.sqrt())
    }

    /// `diag(rate_i * weight_i)`, the diffusion matrix `F D F†`.
    pub fn diffusion(&self) -> [T; 3] {
        [0, 1, 2].map(|i| self.noise_rates[i] * self.noise_weights[i])
    }
}

/// Builds the drift generator:
/// diagonal `−iΔ_r − Γ_r/2`, couplings `−iG_A` (c↔A) and `−iG_B` (c↔B), and
/// no direct A↔B term.
pub fn drift_matrix<T: Scalar>(params: &SystemParams<T>) -> Result<DriftMatrix<T>> {
    params.validate()?;
    let half = lit::<T>(0.5);
    let mut m = Mat3::zeros();
    let [dc, da, db] = params.detuning_vector();
    let [kappa, ga, gb] = params.decays();
    m.0[0][0] = Complex::new(-half * kappa, -dc);
    m.0[1][1] = Complex::new(-half * ga, -da);
    m.0[2][2] = Complex::new(-half * gb, -db);
    m.0[0][1] = minus_i(params.coupling_a);
    m.0[1][0] = minus_i(params.coupling_a);
    m.0[0][2] = minus_i(params.coupling_b);
    m.0[2][0] = minus_i(params.coupling_b);

    Ok(DriftMatrix {
        generator: m,
        noise_rates: params.decays(),
        noise_weights: params.noise_weights(),
        drive_vector: [Complex::zero(), minus_i(params.drive), Complex::zero()],
    })
}

/// Returns an error unless every eigenvalue of the generator has a strictly
/// negative real part.
pub fn require_stable<T: Scalar>(drift: &DriftMatrix<T>) -> Result<()> {
    let abscissa = drift.spectral_abscissa();
    if abscissa < T::zero() {
        Ok(())
    } else {
        Err(Error::SingularParameters(format!(
            "generator is not strictly stable (max eigenvalue real part {abscissa})"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn microscopic_reduction_examples() {
        let micro = MicroscopicParams {
            atom_count_a: 100,
            atom_count_b: 100,
            single_atom_coupling_a: 1.0_f64,
            single_atom_coupling_b: 0.1,
            drive_per_atom: 0.5,
        };
        let eff = effective_from_microscopic(&micro).unwrap();
        assert!((eff.coupling_a - 10.0).abs() < 1e-14);
        assert!((eff.coupling_b - 1.0).abs() < 1e-14);
        assert!((eff.drive - 5.0).abs() < 1e-14);

        let zero = MicroscopicParams {
            atom_count_a: 1,
            atom_count_b: 1,
            single_atom_coupling_a: 0.0_f64,
            single_atom_coupling_b: 0.0,
            drive_per_atom: 0.0,
        };
        let eff = effective_from_microscopic(&zero).unwrap();
        assert_eq!((eff.coupling_a, eff.coupling_b, eff.drive), (0.0, 0.0, 0.0));

        let micro = MicroscopicParams {
            atom_count_a: 2,
            atom_count_b: 8,
            single_atom_coupling_a: 3.0_f64,
            single_atom_coupling_b: 0.25,
            drive_per_atom: 1.0,
        };
        let eff = effective_from_microscopic(&micro).unwrap();
        // Squared values are exact: G_A² = 18, G_B² = 0.5, χ² = 2.
        assert!((eff.coupling_a * eff.coupling_a - 18.0).abs() < 1e-13);
        assert!((eff.coupling_b - 0.707_106_781_186_547_5).abs() < 1e-15);
        assert!((eff.drive - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn zero_atoms_rejected() {
        let micro = MicroscopicParams {
            atom_count_a: 0,
            atom_count_b: 1,
            single_atom_coupling_a: 1.0_f64,
            single_atom_coupling_b: 1.0,
            drive_per_atom: 1.0,
        };
        assert!(matches!(
            effective_from_microscopic(&micro),
            Err(Error::InvalidParameter { name: "atom_count_a", .. })
        ));
    }

    #[test]
    fn detuning_examples() {
        let f = FrequencySet {
            omega_c: 1e7_f64,
            omega_a: 1e7,
            omega_b: 1e7,
            omega_f: 1e7,
        };
        assert_eq!(detunings(&f).unwrap(), [0.0, 0.0, 0.0]);
        let f = FrequencySet {
            omega_c: 5.0_f64,
            omega_a: 5.0,
            omega_b: 5.0,
            omega_f: 5.0,
        };
        assert_eq!(detunings(&f).unwrap(), [0.0, 0.0, 0.0]);
        let f = FrequencySet {
            omega_c: 10.0_f64,
            omega_a: 12.0,
            omega_b: 9.0,
            omega_f: 10.0,
        };
        assert_eq!(detunings(&f).unwrap(), [0.0, 2.0, -1.0]);
        let bad = FrequencySet { omega_f: -1.0, ..f };
        assert!(detunings(&bad).is_err());
    }

    #[test]
    fn thermal_occupation_examples() {
        assert_eq!(thermal_occupation(1e7_f64, 0.0).unwrap(), 0.0);
        // 1/(e − 1), e from the decimal expansion 2.718281828459045235360...
        let e = 2.718_281_828_459_045_235_360_287_f64;
        let expected = 1.0 / (e - 1.0);
        assert!((thermal_occupation(3.0_f64, 3.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.581_976_706_869_326_4).abs() < 1e-15);
        assert!(thermal_occupation(1e6_f64, 1.0).unwrap() == 0.0);
        assert!(thermal_occupation(0.0_f64, 1.0).is_err());
        assert!(thermal_occupation(-1.0_f64, 1.0).is_err());
    }

    #[test]
    fn thermal_occupation_monotone() {
        let mut prev = f64::INFINITY;
        for k in 1..200 {
            let n = thermal_occupation(k as f64 * 0.1, 2.0).unwrap();
            assert!(n < prev);
            prev = n;
        }
        let mut prev = 0.0;
        for k in 1..200 {
            let n = thermal_occupation(1.0, k as f64 * 0.1).unwrap();
            assert!(n > prev);
            prev = n;
        }
    }

    #[test]
    fn drift_matrix_uncoupled() {
        let p = SystemParams::<f64>::default();
        let d = drift_matrix(&p).unwrap();
        assert_eq!(
            d.generator,
            Mat3::diagonal([
                Complex::new(-0.5, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0)
            ])
        );
    }

    #[test]
    fn drift_matrix_fig2a() {
        let p = SystemParams {
            coupling_a: 10.0_f64,
            coupling_b: 1.0,
            decay_a: 90.0,
            decay_b: 9.0,
            drive: 1.0,
            ..Default::default()
        };
        let d = drift_matrix(&p).unwrap();
        let g = &d.generator;
        assert_eq!(g.get(0, 0), Complex::new(-0.5, 0.0));
        assert_eq!(g.get(1, 1), Complex::new(-45.0, 0.0));
        assert_eq!(g.get(2, 2), Complex::new(-4.5, 0.0));
        assert_eq!(g.get(0, 1), Complex::new(0.0, -10.0));
        assert_eq!(g.get(1, 0), Complex::new(0.0, -10.0));
        assert_eq!(g.get(0, 2), Complex::new(0.0, -1.0));
        assert_eq!(g.get(2, 0), Complex::new(0.0, -1.0));
        assert_eq!(g.get(1, 2), Complex::new(0.0, 0.0));
        assert_eq!(g.get(2, 1), Complex::new(0.0, 0.0));
        assert_eq!(d.drive_vector[1], Complex::new(0.0, -1.0));
        assert!(d.drive_vector[0].is_zero() && d.drive_vector[2].is_zero());
        assert!(d.spectral_abscissa() < 0.0);
    }

    #[test]
    fn negative_decay_rejected() {
        let p = SystemParams {
            decay_a: -1.0_f64,
            ..Default::default()
        };
        assert!(matches!(
            drift_matrix(&p),
            Err(Error::InvalidParameter { name: "decay_a", .. })
        ));
        let p = SystemParams {
            cavity_decay: 0.0_f64,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn f32_drift_matrix() {
        let p = SystemParams {
            coupling_a: 2.0_f32,
            decay_a: 1.0,
            decay_b: 1.0,
            ..Default::default()
        };
        let d = drift_matrix(&p).unwrap();
        assert!(d.spectral_abscissa() < 0.0);
    }
}
