//! Uniform periodic position grid and its Fourier dual.
//!
//! Positions live on `[-L, L)` in harmonic-oscillator length units; the
//! conjugate wavenumbers come in FFT ordering with spacing `pi / L`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    n: usize,
    half_width: f64,
    dx: f64,
    xs: Vec<f64>,
    ks: Vec<f64>,
}

impl SpatialGrid {
    /// `n_points` must be a power of two (>= 2); `half_width` positive.
    pub fn new(n_points: usize, half_width: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid.n must be a power of two >= 2, got {n_points}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Config(format!(
                "grid.L must be positive and finite, got {half_width}"
            )));
        }
        let dx = 2.0 * half_width / n_points as f64;
        let xs = (0..n_points).map(|j| -half_width + j as f64 * dx).collect();
        let dk = PI / half_width;
        let ks = (0..n_points)
            .map(|j| {
                let signed = if j < n_points / 2 {
                    j as isize
                } else {
                    j as isize - n_points as isize
                };
                signed as f64 * dk
            })
            .collect();
        Ok(Self {
            n: n_points,
            half_width,
            dx,
            xs,
            ks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Position samples `x_j = -L + j dx`.
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Wavenumbers in FFT ordering (`0, dk, ..., -dk` with `dk = pi/L`).
    pub fn ks(&self) -> &[f64] {
        &self.ks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(SpatialGrid::new(1000, 25.0).is_err());
        assert!(SpatialGrid::new(1, 25.0).is_err());
        assert!(SpatialGrid::new(0, 25.0).is_err());
        assert!(SpatialGrid::new(2048, -1.0).is_err());
        assert!(SpatialGrid::new(2, 25.0).is_ok());
    }

    #[test]
    fn spacing_covers_box_exactly() {
        let g = SpatialGrid::new(2048, 25.0).unwrap();
        assert_eq!(g.dx() * g.n() as f64, 50.0);
        assert_eq!(g.xs()[0], -25.0);
        let last = g.xs()[g.n() - 1];
        assert!((last - (25.0 - g.dx())).abs() < 1e-12);
    }

    #[test]
    fn wavenumbers_are_fourier_dual() {
        let g = SpatialGrid::new(256, 10.0).unwrap();
        let dk = PI / 10.0;
        assert_eq!(g.ks()[0], 0.0);
        assert!((g.ks()[1] - dk).abs() < 1e-15);
        assert!((g.ks()[255] + dk).abs() < 1e-15);
        // Nyquist sits at -n/2 * dk in this ordering.
        assert!((g.ks()[128] + 128.0 * dk).abs() < 1e-12);
    }
}
