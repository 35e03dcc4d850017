//! Conversion between the dimensionless interaction strength and laboratory
//! quantities. Everything else in the crate is unit-free.

use crate::error::{Error, Result};

/// Reduced Planck constant, J s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Atomic mass constant, kg (CODATA 2018).
pub const ATOMIC_MASS_KG: f64 = 1.660_539_066_60e-27;

/// Atomic masses of common bosonic species, kg (AME2020 mass evaluations).
pub mod masses {
    use super::ATOMIC_MASS_KG;

    pub const K39: f64 = 38.963_706_486_4 * ATOMIC_MASS_KG;
    pub const RB87: f64 = 86.909_180_531 * ATOMIC_MASS_KG;
    pub const LI7: f64 = 7.016_003_436 * ATOMIC_MASS_KG;
    pub const NA23: f64 = 22.989_769_282_0 * ATOMIC_MASS_KG;
}

/// s-wave scattering length (meters) realizing interaction strength `u` for
/// `n_atoms` atoms in a 1D tube: `a_s = u omega0 delta / (2 N omega_perp)`
/// with ground-state width `delta = sqrt(hbar / (m omega0))`.
///
/// Frequencies are ordinary frequencies in Hz (`nu = omega / 2 pi`); only the
/// ground-state width depends on the angular value, the rest is a ratio.
pub fn scattering_length(
    u: f64,
    freq_hz: f64,
    transverse_freq_hz: f64,
    n_atoms: u32,
    mass_kg: f64,
) -> Result<f64> {
    if !(freq_hz > 0.0) || !(transverse_freq_hz > 0.0) {
        return Err(Error::Config(format!(
            "trap frequencies must be positive, got {freq_hz} Hz and {transverse_freq_hz} Hz"
        )));
    }
    if n_atoms == 0 {
        return Err(Error::Config("atom number must be positive".into()));
    }
    if !(mass_kg > 0.0) {
        return Err(Error::Config(format!("mass must be positive, got {mass_kg} kg")));
    }
    let omega0 = std::f64::consts::TAU * freq_hz;
    let delta = (HBAR / (mass_kg * omega0)).sqrt();
    Ok(u * freq_hz * delta / (2.0 * n_atoms as f64 * transverse_freq_hz))
}
