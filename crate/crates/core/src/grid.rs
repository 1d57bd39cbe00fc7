use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `count` evenly spaced points from `start` to `stop` inclusive.
///
/// Points are computed as `start + i * step` with the last point pinned to
/// `stop`, so grids symmetric about zero stay symmetric to rounding.
pub fn uniform_grid<T: Scalar>(start: T, stop: T, count: usize) -> Result<Vec<T>> {
    if count < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points, got {count}")));
    }
    if !(start < stop) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need finite start < stop, got [{start}, {stop}]"
        )));
    }
    let n = T::from_usize(count - 1).expect("grid size fits the scalar type");
    let span = stop - start;
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                stop
            } else {
                let i = T::from_usize(i).expect("grid index fits the scalar type");
                start + span * i / n
            }
        })
        .collect())
}

/// Checks the grid is non-empty, finite and strictly increasing.
pub fn validate_grid<T: Scalar>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite grid point {bad}")));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid(format!(
            "grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_spacing() {
        let g = uniform_grid(-100.0_f64, 100.0, 2001).unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -100.0);
        assert_eq!(g[1000], 0.0);
        assert_eq!(g[2000], 100.0);
        assert!((g[1] - g[0] - 0.1).abs() < 1e-12);
        for i in 0..2001 {
            assert!((g[i] + g[2000 - i]).abs() < 1e-12);
        }
        validate_grid(&g).unwrap();
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(uniform_grid(1.0_f64, 0.0, 10).is_err());
        assert!(uniform_grid(0.0_f64, 1.0, 1).is_err());
        assert!(validate_grid::<f64>(&[]).is_err());
        assert!(validate_grid(&[0.0_f64, 0.0]).is_err());
        assert!(validate_grid(&[0.0_f64, f64::NAN]).is_err());
    }
}
