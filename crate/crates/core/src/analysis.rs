//! Extremum extraction and transparency-window classification for sampled
//! curves.
//!
//! An EIT-like window is operationalised as an interior local minimum
//! flanked on both sides by local maxima, where every extremum has
//! topographic prominence of at least a fixed fraction of the curve range.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Default prominence threshold as a fraction of `max − min`.
pub const DEFAULT_PROMINENCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum<T: Scalar> {
    pub position: T,
    pub value: T,
    pub prominence: T,
    /// Index into the original (unfiltered) sample sequence.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremaReport<T: Scalar> {
    pub maxima: Vec<Extremum<T>>,
    pub minima: Vec<Extremum<T>>,
    /// Absolute prominence cut applied (`fraction × range`).
    pub prominence_threshold: T,
    pub prominence_fraction: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport<T: Scalar> {
    pub window_count: usize,
    pub dip_positions: Vec<T>,
    /// `1 − dip / mean(flanking peaks)`.
    pub dip_depths: Vec<T>,
}

#[derive(Clone, Copy)]
struct Sample<T> {
    position: T,
    value: T,
    index: usize,
}

/// Finds local maxima and minima whose topographic prominence is at least
/// `prominence × (max − min)`. Non-finite samples are skipped; plateaus
/// report their leftmost point.
pub fn find_extrema<T: Scalar>(positions: &[T], values: &[T], prominence: T) -> Result<ExtremaReport<T>> {
    if positions.len() != values.len() {
        return Err(Error::InvalidGrid(format!(
            "{} positions but {} values",
            positions.len(),
            values.len()
        )));
    }
    if !(prominence >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "prominence",
            reason: format!("must be non-negative, got {prominence}"),
        });
    }
    let samples: Vec<Sample<T>> = positions
        .iter()
        .zip(values)
        .enumerate()
        .filter(|(_, (p, v))| p.is_finite() && v.is_finite())
        .map(|(index, (&position, &value))| Sample { position, value, index })
        .collect();
    if samples.is_empty() {
        return Err(Error::EmptyCurve);
    }
    if samples.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "need at least 3 finite samples, got {}",
            samples.len()
        )));
    }

    let (lo, hi) = samples
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), s| (lo.min(s.value), hi.max(s.value)));
    let threshold = prominence * (hi - lo);

    let values: Vec<T> = samples.iter().map(|s| s.value).collect();
    let negated: Vec<T> = values.iter().map(|&v| -v).collect();

    let keep = |(i, prom): (usize, T)| {
        if prom >= threshold && prom > T::zero() {
            let s = samples[i];
            Some(Extremum {
                position: s.position,
                value: s.value,
                prominence: prom,
                index: s.index,
            })
        } else {
            None
        }
    };
    let maxima: Vec<_> = peaks_with_prominence(&values).into_iter().filter_map(keep).collect();
    let minima: Vec<_> = peaks_with_prominence(&negated).into_iter().filter_map(keep).collect();

    let (maxima, minima) = interleave(maxima, minima);
    Ok(ExtremaReport {
        maxima,
        minima,
        prominence_threshold: threshold,
        prominence_fraction: prominence,
    })
}

/// Interior local maxima (leftmost point of each plateau) and their prominence.
fn peaks_with_prominence<T: Scalar>(v: &[T]) -> Vec<(usize, T)> {
    let n = v.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if v[i] > v[i - 1] {
            let mut j = i;
            while j + 1 < n && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < n && v[j + 1] < v[i] {
                out.push((i, prominence_of(v, i, j)));
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Height above the higher of the two bases, where each base is the lowest
/// point between the plateau `[start, end]` and the nearest strictly higher
/// sample (or the curve end) on that side.
fn prominence_of<T: Scalar>(v: &[T], start: usize, end: usize) -> T {
    let peak = v[start];
    let mut left_base = peak;
    for k in (0..start).rev() {
        if v[k] > peak {
            break;
        }
        left_base = left_base.min(v[k]);
    }
    let mut right_base = peak;
    for &x in &v[end + 1..] {
        if x > peak {
            break;
        }
        right_base = right_base.min(x);
    }
    peak - left_base.max(right_base)
}

/// Forces strict max/min alternation along the axis: of two consecutive
/// extrema of the same kind only the more extreme survives.
fn interleave<T: Scalar>(maxima: Vec<Extremum<T>>, minima: Vec<Extremum<T>>) -> (Vec<Extremum<T>>, Vec<Extremum<T>>) {
    let mut all: Vec<(bool, Extremum<T>)> = maxima
        .into_iter()
        .map(|e| (true, e))
        .chain(minima.into_iter().map(|e| (false, e)))
        .collect();
    all.sort_by_key(|(_, e)| e.index);

    let mut merged: Vec<(bool, Extremum<T>)> = Vec::with_capacity(all.len());
    for (is_max, e) in all {
        match merged.last_mut() {
            Some((last_is_max, last)) if *last_is_max == is_max => {
                let better = if is_max { e.value > last.value } else { e.value < last.value };
                if better {
                    *last = e;
                }
            }
            _ => merged.push((is_max, e)),
        }
    }
    let (maxima, minima): (Vec<_>, Vec<_>) = merged.into_iter().partition(|(is_max, _)| *is_max);
    (
        maxima.into_iter().map(|(_, e)| e).collect(),
        minima.into_iter().map(|(_, e)| e).collect(),
    )
}

/// Counts interior minima flanked by a qualifying maximum on each side.
pub fn classify_window<T: Scalar>(report: &ExtremaReport<T>) -> WindowReport<T> {
    let mut dip_positions = Vec::new();
    let mut dip_depths = Vec::new();
    for dip in &report.minima {
        let left = report.maxima.iter().filter(|m| m.index < dip.index).max_by_key(|m| m.index);
        let right = report.maxima.iter().filter(|m| m.index > dip.index).min_by_key(|m| m.index);
        if let (Some(l), Some(r)) = (left, right) {
            let mean = lit::<T>(0.5) * (l.value + r.value);
            dip_positions.push(dip.position);
            dip_depths.push(T::one() - dip.value / mean);
        }
    }
    WindowReport {
        window_count: dip_positions.len(),
        dip_positions,
        dip_depths,
    }
}

/// `find_extrema` followed by `classify_window`.
pub fn detect_windows<T: Scalar>(positions: &[T], values: &[T], prominence: T) -> Result<WindowReport<T>> {
    find_extrema(positions, values, prominence).map(|r| classify_window(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64).collect()
    }

    #[test]
    fn lorentzian_has_one_peak() {
        let x: Vec<f64> = (0..201).map(|i| -10.0 + 0.1 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|w| 1.0 / (w * w + 0.25)).collect();
        let r = find_extrema(&x, &y, 0.02).unwrap();
        assert_eq!(r.maxima.len(), 1);
        assert!(r.maxima[0].position.abs() < 1e-12);
        assert!(r.minima.is_empty());
        assert_eq!(classify_window(&r).window_count, 0);
    }

    #[test]
    fn constant_curve_has_no_extrema() {
        let x = grid(50);
        let y = vec![3.0; 50];
        for p in [0.0, 0.02, 0.5] {
            let r = find_extrema(&x, &y, p).unwrap();
            assert!(r.maxima.is_empty() && r.minima.is_empty());
        }
    }

    #[test]
    fn all_flagged_is_empty_curve() {
        let x = grid(5);
        let y = vec![f64::NAN; 5];
        assert_eq!(find_extrema(&x, &y, 0.02), Err(Error::EmptyCurve));
    }

    #[test]
    fn flagged_points_are_skipped() {
        let x = grid(7);
        let y = vec![0.0, 1.0, f64::NAN, 2.0, 0.5, 3.0, 0.0];
        let r = find_extrema(&x, &y, 0.0).unwrap();
        assert_eq!(r.maxima.iter().map(|m| m.index).collect::<Vec<_>>(), vec![3, 5]);
        assert_eq!(r.minima.iter().map(|m| m.index).collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn plateau_reports_leftmost_point() {
        let x = grid(7);
        let y = vec![0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0];
        let r = find_extrema(&x, &y, 0.0).unwrap();
        assert_eq!(r.maxima.len(), 1);
        assert_eq!(r.maxima[0].index, 2);
    }

    #[test]
    fn double_peak_window_depth() {
        let x = grid(5);
        let y = vec![0.0, 4.0, 1.0, 2.0, 0.0];
        let r = find_extrema(&x, &y, 0.02).unwrap();
        let w = classify_window(&r);
        assert_eq!(w.window_count, 1);
        assert_eq!(w.dip_positions, vec![2.0]);
        assert!((w.dip_depths[0] - (1.0 - 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn small_ripple_filtered() {
        let x = grid(7);
        let y = vec![0.0, 10.0, 9.99, 10.0, 5.0, 0.0, 0.0];
        let r = find_extrema(&x, &y, 0.02).unwrap();
        assert_eq!(r.maxima.len(), 1);
        assert_eq!(classify_window(&r).window_count, 0);
        let r = find_extrema(&x, &y, 0.0).unwrap();
        assert_eq!(classify_window(&r).window_count, 1);
    }

    #[test]
    fn endpoint_extrema_never_flank() {
        // Rising into the right edge: the edge sample is not a maximum.
        let x = grid(5);
        let y = vec![5.0, 1.0, 3.0, 2.0, 6.0];
        let w = detect_windows(&x, &y, 0.0).unwrap();
        assert_eq!(w.window_count, 0);
    }

    fn curve_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-5.0..5.0f64, 3..60)
    }

    proptest! {
        #[test]
        fn raising_threshold_never_adds_windows(y in curve_strategy(), p1 in 0.0..0.5f64, dp in 0.0..0.5f64) {
            let x = grid(y.len());
            let low = detect_windows(&x, &y, p1).unwrap().window_count;
            let high = detect_windows(&x, &y, p1 + dp).unwrap().window_count;
            prop_assert!(high <= low);
        }

        #[test]
        fn extrema_interleave_and_pass_threshold(y in curve_strategy(), p in 0.0..0.3f64) {
            let x = grid(y.len());
            let r = find_extrema(&x, &y, p).unwrap();
            let mut all: Vec<(usize, bool)> = r.maxima.iter().map(|e| (e.index, true))
                .chain(r.minima.iter().map(|e| (e.index, false))).collect();
            all.sort();
            for w in all.windows(2) {
                prop_assert_ne!(w[0].1, w[1].1);
            }
            for e in r.maxima.iter().chain(r.minima.iter()) {
                prop_assert!(e.prominence >= r.prominence_threshold);
            }
        }
    }
}
