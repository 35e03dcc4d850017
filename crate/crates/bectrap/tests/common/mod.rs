//! Shared helpers for the integration-test oracles. Everything here is an
//! independent numerical route: none of it calls the library's own
//! integrators or quadratures.

#![allow(dead_code)]

use num_complex::Complex64;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major).
/// Returns eigenvalues and the eigenvector matrix `v` (columns are
/// eigenvectors, `v[i * n + k]` = component `i` of eigenvector `k`).
pub fn jacobi_eigh(n: usize, a: &mut [f64]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p * n + i];
                    let aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| a[i * n + i]).collect();
    (eigenvalues, v)
}

/// Oscillator eigenfunctions on a grid via the normalized recurrence.
pub fn hermite_modes(xs: &[f64], n_max: usize) -> Vec<Vec<f64>> {
    let c0 = std::f64::consts::PI.powf(-0.25);
    let mut modes: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
    modes.push(xs.iter().map(|&x| c0 * (-0.5 * x * x).exp()).collect());
    if n_max >= 1 {
        let first: Vec<f64> = modes[0]
            .iter()
            .zip(xs)
            .map(|(&v, &x)| (2.0f64).sqrt() * x * v)
            .collect();
        modes.push(first);
    }
    for n in 1..n_max {
        let a = (2.0 / (n as f64 + 1.0)).sqrt();
        let b = (n as f64 / (n as f64 + 1.0)).sqrt();
        let next: Vec<f64> = (0..xs.len())
            .map(|j| a * xs[j] * modes[n][j] - b * modes[n - 1][j])
            .collect();
        modes.push(next);
    }
    modes
}

/// Coefficients of the coherent state centered at `(x_c, 0)` in the
/// oscillator basis: `c_n = e^(-J_c/2) alpha^n / sqrt(n!)`, `alpha = x_c/sqrt(2)`.
pub fn coherent_coefficients(x_c: f64, n_max: usize) -> Vec<f64> {
    let alpha = x_c / (2.0f64).sqrt();
    let mut c = Vec::with_capacity(n_max + 1);
    let mut cur = (-0.5 * alpha * alpha).exp();
    c.push(cur);
    for n in 0..n_max {
        cur *= alpha / ((n as f64 + 1.0).sqrt());
        c.push(cur);
    }
    c
}

/// Crank-Nicolson integrator for the linear Schroedinger equation with a
/// static potential on a uniform grid with Dirichlet ends, using the
/// 6th-order seven-point Laplacian. An independent (finite-difference,
/// A-stable, norm-preserving) route to compare the spectral split-step
/// against; the high-order stencil keeps grid dispersion far below the
/// anharmonic frequency shifts being measured.
pub struct CrankNicolson {
    pub xs: Vec<f64>,
    dx: f64,
    // B = I - i dt/2 H; constant off-diagonals b_off[k-1] at distance k.
    b_diag: Vec<Complex64>,
    b_off: [Complex64; 3],
    // Prefactored banded LU of A = I + i dt/2 H (bandwidth 3).
    u: [Vec<Complex64>; 4],
    l: [Vec<Complex64>; 3],
    rhs: Vec<Complex64>,
}

impl CrankNicolson {
    pub fn new(n: usize, half_width: f64, dt: f64, potential: impl Fn(f64) -> f64) -> Self {
        let dx = 2.0 * half_width / n as f64;
        let xs: Vec<f64> = (0..n).map(|j| -half_width + j as f64 * dx).collect();
        let ih = Complex64::new(0.0, 0.5 * dt);
        // -(1/2) psi'' with the seven-point stencil
        // (1/90, -3/20, 3/2, -49/18, 3/2, -3/20, 1/90) / dx^2.
        let inv = 1.0 / (dx * dx);
        let kin_diag = 49.0 / 36.0 * inv;
        let kin_off = [-0.75 * inv, 3.0 / 40.0 * inv, -inv / 180.0];

        let a_off = [ih * kin_off[0], ih * kin_off[1], ih * kin_off[2]];
        let b_off = [-a_off[0], -a_off[1], -a_off[2]];
        let mut a_diag = Vec::with_capacity(n);
        let mut b_diag = Vec::with_capacity(n);
        for &x in &xs {
            let h = kin_diag + potential(x);
            a_diag.push(Complex64::new(1.0, 0.0) + ih * h);
            b_diag.push(Complex64::new(1.0, 0.0) - ih * h);
        }

        // Banded LU of A (diagonally dominant for the step sizes used here;
        // no pivoting needed). u[k][i] is U at (i, i+k); l[k-1][i] is L at
        // (i, i-k).
        const W: usize = 3;
        let zero = Complex64::default();
        let mut u = [vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]];
        let mut l = [vec![zero; n], vec![zero; n], vec![zero; n]];
        let a_at = |i: isize, j: isize| -> Complex64 {
            if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
                return zero;
            }
            let d = (i - j).unsigned_abs();
            if d == 0 {
                a_diag[i as usize]
            } else if d <= W {
                a_off[d - 1]
            } else {
                zero
            }
        };
        for i in 0..n {
            // Lower factors, farthest first.
            for k in (1..=W.min(i)).rev() {
                let mut acc = a_at(i as isize, (i - k) as isize);
                for m in (k + 1)..=W.min(i) {
                    acc -= l[m - 1][i] * u[m - k][i - m];
                }
                l[k - 1][i] = acc / u[0][i - k];
            }
            // Upper row of U.
            for k in 0..=W {
                if i + k >= n {
                    continue;
                }
                let mut acc = a_at(i as isize, (i + k) as isize);
                for m in 1..=(W - k).min(i) {
                    acc -= l[m - 1][i] * u[k + m][i - m];
                }
                u[k][i] = acc;
            }
        }

        Self {
            xs,
            dx,
            b_diag,
            b_off,
            u,
            l,
            rhs: vec![zero; n],
        }
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// One CN step: solve `(I + i dt/2 H) psi' = (I - i dt/2 H) psi`.
    pub fn step(&mut self, psi: &mut [Complex64]) {
        let n = psi.len();
        for j in 0..n {
            let mut acc = self.b_diag[j] * psi[j];
            for k in 1..=3usize {
                if j >= k {
                    acc += self.b_off[k - 1] * psi[j - k];
                }
                if j + k < n {
                    acc += self.b_off[k - 1] * psi[j + k];
                }
            }
            self.rhs[j] = acc;
        }
        // Forward substitution (L y = rhs), reusing rhs as y.
        for j in 0..n {
            let mut y = self.rhs[j];
            for k in 1..=3usize.min(j) {
                y -= self.l[k - 1][j] * self.rhs[j - k];
            }
            self.rhs[j] = y;
        }
        // Back substitution (U psi = y).
        for j in (0..n).rev() {
            let mut v = self.rhs[j];
            for k in 1..=3usize {
                if j + k < n {
                    v -= self.u[k][j] * psi[j + k];
                }
            }
            psi[j] = v / self.u[0][j];
        }
    }

    pub fn sigma_x(&self, psi: &[Complex64]) -> f64 {
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (&x, c) in self.xs.iter().zip(psi) {
            let d = c.norm_sqr();
            m0 += d;
            m1 += x * d;
            m2 += x * x * d;
        }
        let mean = m1 / m0;
        (m2 / m0 - mean * mean).sqrt()
    }
}
