//! Independent oracle for the Husimi computation: the direct Wigner
//! transform of a structured test state, Gaussian-smoothed into the Husimi
//! function, compared pointwise against the coherent-state-overlap route.

use std::sync::Arc;

use bectrap::phase_space::husimi_point;
use bectrap::{SpatialGrid, WaveState};
use num_complex::Complex64;

/// Normalized even cat state: two Gaussians at +-2.
fn cat_state(grid: &Arc<SpatialGrid>) -> WaveState {
    let c = std::f64::consts::PI.powf(-0.25);
    let mut psi: Vec<Complex64> = grid
        .xs()
        .iter()
        .map(|&x| {
            Complex64::new(
                c * ((-0.5 * (x - 2.0) * (x - 2.0)).exp() + (-0.5 * (x + 2.0) * (x + 2.0)).exp()),
                0.0,
            )
        })
        .collect();
    let norm = (psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dx()).sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
    WaveState::from_samples(Arc::clone(grid), psi, 0.0).unwrap()
}

/// Direct Wigner transform
/// `W(x, p) = (1/pi) int psi*(x + y) psi(x - y) e^{2 i p y} dy`
/// by quadrature over the grid (psi = 0 outside the box).
fn wigner(state: &WaveState, x: f64, p: f64) -> f64 {
    let grid = state.grid();
    let xs = grid.xs();
    let dx = grid.dx();
    let n = grid.n();
    let mut acc = Complex64::new(0.0, 0.0);
    for jy in 0..n {
        // y on the same lattice as x, centered on zero.
        let y = xs[jy];
        let xp = x + y;
        let xm = x - y;
        let at = |v: f64| -> Complex64 {
            let idx = ((v - xs[0]) / dx).round();
            if idx < 0.0 || idx >= n as f64 {
                return Complex64::default();
            }
            let i = idx as usize;
            // The probe points are chosen on the lattice, so this lookup is
            // exact rather than an interpolation.
            debug_assert!((xs[i] - v).abs() < 1e-9);
            state.psi[i]
        };
        acc += at(xp).conj() * at(xm) * Complex64::cis(2.0 * p * y);
    }
    (acc * dx / std::f64::consts::PI).re
}

#[test]
fn husimi_is_the_gaussian_smoothed_wigner_transform() {
    let grid = Arc::new(SpatialGrid::new(512, 12.0).unwrap());
    let state = cat_state(&grid);
    let dx = grid.dx();

    // Wigner table on a phase-space rectangle (x on the lattice so the
    // transform needs no interpolation).
    let nx = 321;
    let np = 161;
    let x_lo_idx = 96; // x in [-7.5, 7.52]
    let xs: Vec<f64> = (0..nx).map(|i| grid.xs()[x_lo_idx + i]).collect();
    let dp = 0.1;
    let ps: Vec<f64> = (0..np).map(|i| -8.0 + dp * i as f64).collect();
    let mut w = vec![0.0f64; nx * np];
    for (ix, &x) in xs.iter().enumerate() {
        for (ip, &p) in ps.iter().enumerate() {
            w[ix * np + ip] = wigner(&state, x, p);
        }
    }

    // Wigner marginal over p reproduces the position density.
    for (ix, &x) in xs.iter().enumerate().step_by(16) {
        let marginal: f64 = (0..np).map(|ip| w[ix * np + ip]).sum::<f64>() * dp;
        let idx = ((x - grid.xs()[0]) / dx).round() as usize;
        let density = state.psi[idx].norm_sqr();
        assert!(
            (marginal - density).abs() < 1e-6,
            "x = {x}: marginal {marginal} vs density {density}"
        );
    }

    // The cat's interference fringes make the Wigner function negative in
    // places; the smoothing must wash that out.
    assert!(w.iter().cloned().fold(f64::INFINITY, f64::min) < -0.05);

    // Q(x0, p0) = (1/pi) conv(W, exp(-(x-x0)^2 - (p-p0)^2)).
    let q_from_wigner = |x0: f64, p0: f64| -> f64 {
        let mut acc = 0.0;
        for (ix, &x) in xs.iter().enumerate() {
            let gx = (-(x - x0) * (x - x0)).exp();
            if gx < 1e-14 {
                continue;
            }
            for (ip, &p) in ps.iter().enumerate() {
                acc += w[ix * np + ip] * gx * (-(p - p0) * (p - p0)).exp();
            }
        }
        acc * dx * dp / std::f64::consts::PI
    };

    let mut checked = 0usize;
    for i in 0..13 {
        for k in 0..13 {
            let x0 = -3.0 + 0.5 * i as f64;
            let p0 = -3.0 + 0.5 * k as f64;
            let direct = husimi_point(&state, x0, p0);
            let smoothed = q_from_wigner(x0, p0);
            assert!(
                (direct - smoothed).abs() < 1e-6,
                "({x0}, {p0}): overlap route {direct} vs smoothed Wigner {smoothed}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 169);
}
