//! Classical stochastic simulation of the linearized fluctuation dynamics.
//!
//! The fluctuations obey `dx = M x dt + F dW` with independent complex Wiener
//! increments, `E[dW_i dW_i*] = (N_i + 1) dt`. For a linear system with
//! additive noise the classical second moments coincide with the
//! anti-normally ordered quantum ones, so ensemble-averaged periodograms of
//! these trajectories converge to the closed-form spectra.
//!
//! Every trajectory draws from its own ChaCha8 stream selected by
//! `(seed, trajectory_index)`; draws are consumed in (step, channel) order,
//! so results are bit-identical regardless of thread count.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::validate_grid;
use crate::model::{drift_matrix, require_stable, DriftMatrix, SystemParams};
use crate::scalar::{lit, Scalar};
use crate::spectra::{MethodTag, SpectrumCurve};

/// Data taper applied to each recorded segment before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taper {
    #[default]
    Rectangular,
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig<T: Scalar> {
    /// Euler-Maruyama step, in units of 1/κ.
    pub time_step: T,
    /// Length of the recorded segment after burn-in.
    pub duration: T,
    /// Discarded transient before recording starts.
    pub burn_in: T,
    pub trajectory_count: usize,
    pub seed: u64,
    /// Keep every `record_stride`-th step.
    pub record_stride: usize,
    /// Width of the frequency band averaged around each grid point.
    pub smoothing_bandwidth: T,
    pub taper: Taper,
}

impl<T: Scalar> SimulationConfig<T> {
    /// Step, stride and lengths scaled to the relaxation rates of `params`.
    pub fn recommended(params: &SystemParams<T>, trajectory_count: usize, seed: u64) -> Result<Self> {
        let drift = drift_matrix(params)?;
        require_stable(&drift)?;
        let rates = RateScales::of(&drift);
        // Keeps the Euler variance bias near 1% for every mode.
        let time_step = lit::<T>(0.02) * rates.bias_scale;
        let sample_interval = lit::<T>(0.01).max(time_step);
        let stride = (sample_interval / time_step).round().to_usize().unwrap_or(1).max(1);
        Ok(SimulationConfig {
            time_step,
            duration: lit::<T>(2000.0).max(lit::<T>(50.0) / rates.slowest),
            burn_in: lit::<T>(10.0) / rates.slowest,
            trajectory_count,
            seed,
            record_stride: stride,
            smoothing_bandwidth: lit(0.1),
            taper: Taper::Rectangular,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.time_step > T::zero()) || !self.time_step.is_finite() {
            return Err(invalid("time_step", format!("must be positive, got {}", self.time_step)));
        }
        if !(self.duration > T::zero()) || !self.duration.is_finite() {
            return Err(invalid("duration", format!("must be positive, got {}", self.duration)));
        }
        if !(self.burn_in >= T::zero()) || !self.burn_in.is_finite() {
            return Err(invalid("burn_in", format!("must be non-negative, got {}", self.burn_in)));
        }
        if self.trajectory_count == 0 {
            return Err(invalid("trajectory_count", "must be at least 1"));
        }
        if self.record_stride == 0 {
            return Err(invalid("record_stride", "must be at least 1"));
        }
        if !(self.smoothing_bandwidth >= T::zero()) || !self.smoothing_bandwidth.is_finite() {
            return Err(invalid("smoothing_bandwidth", "must be non-negative"));
        }
        if self.recorded_len() < 2 {
            return Err(invalid("duration", "records fewer than 2 samples"));
        }
        Ok(())
    }

    pub fn sample_interval(&self) -> T {
        self.time_step * T::from_usize(self.record_stride).unwrap_or_else(T::one)
    }

    fn burn_in_steps(&self) -> usize {
        let steps = self.burn_in / self.time_step;
        (steps - steps * lit(1e-9)).ceil().to_usize().unwrap_or(0)
    }

    /// Number of recorded samples per mode.
    pub fn recorded_len(&self) -> usize {
        let samples = self.duration / self.sample_interval();
        (samples + samples * lit(1e-9)).floor().to_usize().unwrap_or(0)
    }

    /// Diagnostics for step sizes and lengths poorly matched to the dynamics.
    pub fn advisories(&self, drift: &DriftMatrix<T>) -> Vec<String> {
        let rates = RateScales::of(drift);
        let mut notes = Vec::new();
        let bias = self.time_step / (lit::<T>(2.0) * rates.bias_scale);
        if bias > lit(0.05) {
            notes.push(format!(
                "time_step {} inflates stationary variances by about {:.0}%; use at most {}",
                self.time_step,
                bias * lit(100.0),
                lit::<T>(0.1) * rates.bias_scale
            ));
        }
        let slowest_time = rates.slowest.recip();
        if self.duration < lit::<T>(50.0) * slowest_time {
            notes.push(format!(
                "duration {} is shorter than 50 slowest decay times ({}); spectral confidence is wide",
                self.duration,
                lit::<T>(50.0) * slowest_time
            ));
        }
        if self.burn_in < lit::<T>(10.0) * slowest_time {
            notes.push(format!(
                "burn_in {} is shorter than 10 slowest decay times ({}); transient leaks into the estimate",
                self.burn_in,
                lit::<T>(10.0) * slowest_time
            ));
        }
        notes
    }
}

struct RateScales<T> {
    slowest: T,
    /// `min |Re λ| / |λ|²`. One Euler step of size `dt` inflates the
    /// stationary variance of mode `λ` by roughly `|λ|² dt / (2 |Re λ|)`.
    bias_scale: T,
}

impl<T: Scalar> RateScales<T> {
    fn of(drift: &DriftMatrix<T>) -> Self {
        let ev = drift.eigenvalues();
        RateScales {
            slowest: ev.iter().fold(T::infinity(), |acc, e| acc.min(-e.re)),
            bias_scale: ev.iter().fold(T::infinity(), |acc, e| acc.min(e.re.abs() / e.norm_sqr())),
        }
    }
}

/// Recorded fluctuation samples of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySamples<T: Scalar> {
    pub times: Vec<T>,
    /// `(δc, δA, δB)` in mode order.
    pub values: [Vec<Complex<T>>; 3],
}

/// Integrates one trajectory of the fluctuation dynamics for `params`.
pub fn simulate_trajectory<T: Scalar>(
    params: &SystemParams<T>,
    config: &SimulationConfig<T>,
    trajectory_index: u64,
) -> Result<TrajectorySamples<T>> {
    let drift = drift_matrix(params)?;
    require_stable(&drift)?;
    integrate(&drift, config, trajectory_index)
}

/// Euler-Maruyama integration of `dx = M x dt + F dW` from `x(0) = 0` for an
/// arbitrary generator and noise weights.
pub fn integrate<T: Scalar>(
    drift: &DriftMatrix<T>,
    config: &SimulationConfig<T>,
    trajectory_index: u64,
) -> Result<TrajectorySamples<T>> {
    config.validate()?;
    let dt = config.time_step;
    let half = lit::<T>(0.5);
    // Per-quadrature standard deviation of F_i dW_i.
    let kicks: [T; 3] = [0, 1, 2].map(|i| (drift.noise_rates[i] * drift.noise_weights[i] * dt * half).sqrt());
    if kicks.iter().any(|k| !k.is_finite()) {
        return Err(invalid("noise_weights", "noise rates and weights must be non-negative"));
    }
    // Euler map x ← (I + M dt) x + kick.
    let mut step_matrix = drift.generator.scale(Complex::from(dt));
    for i in 0..3 {
        step_matrix.0[i][i] = step_matrix.0[i][i] + Complex::from(T::one());
    }

    let limit_sq = divergence_limit(drift).powi(2);
    let burn_in = config.burn_in_steps();
    let stride = config.record_stride;
    let len = config.recorded_len();
    let total = burn_in + len * stride;
    let interval = config.sample_interval();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trajectory_index);

    let mut times = Vec::with_capacity(len);
    let mut values: [Vec<Complex<T>>; 3] = std::array::from_fn(|_| Vec::with_capacity(len));
    let mut x = [Complex::<T>::zero(); 3];

    for step in 1..=total {
        let mut next = step_matrix.mul_vec(&x);
        for (xi, &k) in next.iter_mut().zip(kicks.iter()) {
            let re = T::standard_normal(&mut rng);
            let im = T::standard_normal(&mut rng);
            *xi = *xi + Complex::new(re * k, im * k);
        }
        x = next;

        let norm_sq = x[0].norm_sqr() + x[1].norm_sqr() + x[2].norm_sqr();
        if !(norm_sq <= limit_sq) {
            return Err(Error::IntegrationDiverged {
                trajectory: trajectory_index,
                step,
                time_step: dt.to_f64_lossy(),
            });
        }

        if step > burn_in && (step - burn_in) % stride == 0 {
            let k = (step - burn_in) / stride - 1;
            times.push(config.burn_in_time() + interval * T::from_usize(k).unwrap_or_else(T::zero));
            for (i, v) in values.iter_mut().enumerate() {
                v.push(x[i]);
            }
        }
    }
    Ok(TrajectorySamples { times, values })
}

impl<T: Scalar> SimulationConfig<T> {
    fn burn_in_time(&self) -> T {
        self.time_step * T::from_usize(self.burn_in_steps() + self.record_stride).unwrap_or_else(T::zero)
    }
}

/// `10¹² ×` a bound on the stationary fluctuation amplitude.
fn divergence_limit<T: Scalar>(drift: &DriftMatrix<T>) -> T {
    let diffusion: T = drift.diffusion().iter().fold(T::zero(), |acc, &d| acc + d);
    let slowest = RateScales::of(drift).slowest.max(T::min_positive_value());
    let scale = (diffusion / (lit::<T>(2.0) * slowest)).sqrt().max(T::one());
    lit::<T>(1e12) * scale
}

/// Ensemble-averaged periodogram estimate of `(S_c, S_A, S_B)` on `grid`.
///
/// Each trajectory contributes `|Σ_k x(t_k) e^{iωt_k} Δt|² / T` at the
/// transform bins, averaged over the bins within `smoothing_bandwidth / 2`
/// of each grid frequency (the nearest bin when the band is narrower than
/// the bin spacing).
pub fn estimate_spectrum<T: Scalar>(
    params: &SystemParams<T>,
    config: &SimulationConfig<T>,
    grid: &[T],
) -> Result<SpectrumCurve<T>> {
    let drift = drift_matrix(params)?;
    require_stable(&drift)?;
    let mut curve = estimate_spectrum_for(&drift, config, grid)?;
    curve.params_snapshot = *params;
    Ok(curve)
}

/// [`estimate_spectrum`] for an explicit generator (e.g. overridden noise weights).
pub fn estimate_spectrum_for<T: Scalar>(
    drift: &DriftMatrix<T>,
    config: &SimulationConfig<T>,
    grid: &[T],
) -> Result<SpectrumCurve<T>> {
    config.validate()?;
    validate_grid(grid)?;
    let interval = config.sample_interval();
    let nyquist = T::PI() / interval;
    if grid.iter().any(|w| w.abs() > nyquist) {
        return Err(Error::InvalidGrid(format!(
            "grid exceeds the sampling band |ω| ≤ {nyquist}"
        )));
    }

    let n = config.recorded_len();
    let plan: Arc<dyn Fft<T>> = FftPlanner::new().plan_fft_inverse(n);
    let bands = frequency_bands(grid, n, interval, config.smoothing_bandwidth);
    let taper = taper_weights(config.taper, n);

    let per_trajectory: Vec<Result<Vec<[T; 3]>>> = (0..config.trajectory_count as u64)
        .into_par_iter()
        .map(|index| {
            let samples = integrate(drift, config, index)?;
            Ok(trajectory_periodogram(&samples, plan.as_ref(), &bands, taper.as_deref(), interval))
        })
        .collect();

    let mut sums = vec![[T::zero(); 3]; grid.len()];
    for result in per_trajectory {
        for (acc, row) in sums.iter_mut().zip(result?) {
            for i in 0..3 {
                acc[i] += row[i];
            }
        }
    }
    let count = T::from_usize(config.trajectory_count).unwrap_or_else(T::one);

    let mut warnings = config.advisories(drift);
    let min_bins = bands.iter().map(|b| b.len()).min().unwrap_or(1);
    let rel_se = (count * T::from_usize(min_bins).unwrap_or_else(T::one)).sqrt().recip();
    if rel_se > lit::<T>(0.05) {
        warnings.push(format!(
            "estimated relative standard error {rel_se} per grid point; increase trajectories, duration or smoothing_bandwidth"
        ));
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    Ok(SpectrumCurve {
        grid: grid.to_vec(),
        s_c: sums.iter().map(|r| r[0] / count).collect(),
        s_a: sums.iter().map(|r| r[1] / count).collect(),
        s_b: sums.iter().map(|r| r[2] / count).collect(),
        params_snapshot: SystemParams::default(),
        method_tag: MethodTag::Stochastic,
        warnings,
    })
}

/// Transform-bin indices averaged for each grid frequency.
fn frequency_bands<T: Scalar>(grid: &[T], n: usize, interval: T, bandwidth: T) -> Vec<Vec<usize>> {
    let n_t = T::from_usize(n).unwrap_or_else(T::one);
    let bin = lit::<T>(2.0) * T::PI() / (n_t * interval);
    let half = lit::<T>(0.5) * bandwidth;
    let wrap = |k: i64| -> usize { k.rem_euclid(n as i64) as usize };
    grid.iter()
        .map(|&w| {
            let lo = ((w - half) / bin).ceil().to_i64().unwrap_or(0);
            let hi = ((w + half) / bin).floor().to_i64().unwrap_or(0);
            if hi >= lo {
                (lo..=hi).map(wrap).collect()
            } else {
                vec![wrap((w / bin).round().to_i64().unwrap_or(0))]
            }
        })
        .collect()
}

/// Hann weights normalised to unit mean square.
fn taper_weights<T: Scalar>(taper: Taper, n: usize) -> Option<Vec<T>> {
    match taper {
        Taper::Rectangular => None,
        Taper::Hann => {
            let n_t = T::from_usize(n).unwrap_or_else(T::one);
            let raw: Vec<T> = (0..n)
                .map(|j| {
                    let s = (T::PI() * T::from_usize(j).unwrap_or_else(T::zero) / n_t).sin();
                    s * s
                })
                .collect();
            let mean_sq = raw.iter().fold(T::zero(), |acc, &w| acc + w * w) / n_t;
            let norm = mean_sq.sqrt().recip();
            Some(raw.into_iter().map(|w| w * norm).collect())
        }
    }
}

fn trajectory_periodogram<T: Scalar>(
    samples: &TrajectorySamples<T>,
    plan: &dyn Fft<T>,
    bands: &[Vec<usize>],
    taper: Option<&[T]>,
    interval: T,
) -> Vec<[T; 3]> {
    let n = samples.values[0].len();
    let length = interval * T::from_usize(n).unwrap_or_else(T::one);
    // |Σ x e^{iωt} Δt|² / T
    let norm = interval * interval / length;
    let mut out = vec![[T::zero(); 3]; bands.len()];
    let mut buffer: Vec<Complex<T>> = Vec::with_capacity(n);
    for mode in 0..3 {
        buffer.clear();
        match taper {
            Some(w) => buffer.extend(samples.values[mode].iter().zip(w).map(|(x, &w)| x * w)),
            None => buffer.extend_from_slice(&samples.values[mode]),
        }
        plan.process(&mut buffer);
        for (row, band) in out.iter_mut().zip(bands) {
            let total = band.iter().fold(T::zero(), |acc, &k| acc + buffer[k].norm_sqr());
            row[mode] = total * norm / T::from_usize(band.len()).unwrap_or_else(T::one);
        }
    }
    out
}
