//! Wavefunction samples on a spatial grid and initial-state preparation.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;

/// Complex wavefunction on a [`SpatialGrid`] with unit discrete norm.
#[derive(Debug, Clone)]
pub struct WaveState {
    grid: Arc<SpatialGrid>,
    pub psi: Vec<Complex64>,
    pub time: f64,
}

impl WaveState {
    /// Wrap raw samples; the caller is responsible for normalization.
    pub fn from_samples(grid: Arc<SpatialGrid>, psi: Vec<Complex64>, time: f64) -> Result<Self> {
        if psi.len() != grid.n() {
            return Err(Error::Config(format!(
                "state has {} samples but grid has {} points",
                psi.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, psi, time })
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    /// Discrete L2 norm, `sum |psi_j|^2 dx`.
    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Margin demanded between the packet center and the box edge, in units of
/// the packet width this is ~8.5 sigma; the Gaussian tail there is < 1e-30.
const EDGE_MARGIN: f64 = 6.0;

/// Gaussian wavepacket of symmetric widths `sigma_x = sigma_p = sqrt(1/2)`
/// centered at `(x_c, p = 0)`: `psi(x) = pi^(-1/4) exp(-(x - x_c)^2 / 2)`.
pub fn make_initial_state(grid: &Arc<SpatialGrid>, x_c: f64) -> Result<WaveState> {
    let l = grid.half_width();
    if x_c.abs() + EDGE_MARGIN >= l {
        return Err(Error::GridTooSmall {
            x_c,
            required: x_c.abs() + EDGE_MARGIN,
            got: l,
        });
    }
    let norm_const = std::f64::consts::PI.powf(-0.25);
    let mut psi: Vec<Complex64> = grid
        .xs()
        .iter()
        .map(|&x| Complex64::new(norm_const * (-0.5 * (x - x_c) * (x - x_c)).exp(), 0.0))
        .collect();
    // Exact discrete normalization on this grid.
    let norm = (psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.dx()).sqrt();
    for c in &mut psi {
        *c /= norm;
    }
    WaveState::from_samples(Arc::clone(grid), psi, 0.0)
}
