//! Husimi and Wigner phase-space representations.
//!
//! The Husimi function is the coherent-state overlap density
//! `Q(x0, p0) = |<g_{x0,p0} | psi>|^2 / (2 pi)` with `g` the minimum-
//! uncertainty Gaussian of width `sqrt(1/2)`; it is non-negative and
//! integrates to 1 over `dx0 dp0`. Fields are resampled onto `(phi, J)`
//! through the centered rotating frame so they can be overlaid on the
//! classical map without interpolation.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::classical::AveragedPhaseMap;
use crate::error::{Error, Result};
use crate::frame::{PhasePoint, RotatingFrame};
use crate::state::WaveState;

/// Output grid for a Husimi field in `(phi, J)`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseGridSpec {
    pub n_phi: usize,
    pub n_j: usize,
    pub j_max: f64,
}

/// Scalar field over `(phi, J)`, phi-major like the classical tabulation.
#[derive(Debug, Clone)]
pub struct PhaseSpaceField {
    pub phi: Vec<f64>,
    pub j: Vec<f64>,
    pub values: Vec<f64>,
    /// Time of the underlying state (sets the frame rotation).
    pub time: f64,
    pub omega: f64,
    /// Recentering shift applied to the angle axis (0 when unshifted).
    pub delta_phi: f64,
}

impl PhaseSpaceField {
    pub fn value_at(&self, i_phi: usize, i_j: usize) -> f64 {
        self.values[i_phi * self.j.len() + i_j]
    }

    /// Cyclically shift the field by `cells` angle columns and record the
    /// corresponding `delta_phi`.
    pub fn recentered(&self, cells: isize) -> PhaseSpaceField {
        let n_phi = self.phi.len();
        let n_j = self.j.len();
        let d_phi = TAU / n_phi as f64;
        let mut values = vec![0.0; self.values.len()];
        for ip in 0..n_phi {
            let src = (ip as isize - cells).rem_euclid(n_phi as isize) as usize;
            values[ip * n_j..(ip + 1) * n_j]
                .copy_from_slice(&self.values[src * n_j..(src + 1) * n_j]);
        }
        PhaseSpaceField {
            phi: self.phi.clone(),
            j: self.j.clone(),
            values,
            time: self.time,
            omega: self.omega,
            delta_phi: self.delta_phi + cells as f64 * d_phi,
        }
    }
}

/// Coherent-state overlaps truncated beyond this many widths of `g`.
const OVERLAP_WINDOW_SIGMA: f64 = 9.0;

/// Husimi function of `state` on a `(phi, J)` grid in the given rotating
/// frame. Rejects windows whose mapped `(x0, p0)` points leave the support
/// of the spatial grid.
pub fn husimi(state: &WaveState, spec: &PhaseGridSpec, frame: &RotatingFrame) -> Result<PhaseSpaceField> {
    let grid = state.grid();
    let r_max = (2.0 * spec.j_max).sqrt();
    let x_reach = r_max + OVERLAP_WINDOW_SIGMA * (0.5f64).sqrt();
    if x_reach > grid.half_width() {
        return Err(Error::Config(format!(
            "phase-space window j_max = {} needs |x| up to {x_reach:.1}, beyond the grid half-width {}",
            spec.j_max,
            grid.half_width()
        )));
    }
    let k_max = PI / grid.dx();
    if r_max > 0.9 * k_max {
        return Err(Error::Config(format!(
            "phase-space window j_max = {} needs |p| up to {r_max:.1}, beyond the grid's momentum support {k_max:.1}",
            spec.j_max
        )));
    }

    let n_phi = spec.n_phi;
    let n_j = spec.n_j;
    let d_phi = TAU / n_phi as f64;
    let phi: Vec<f64> = (0..n_phi).map(|i| -PI + (i + 1) as f64 * d_phi).collect();
    let j: Vec<f64> = (0..n_j)
        .map(|i| spec.j_max * i as f64 / (n_j - 1) as f64)
        .collect();
    let mut values = vec![0.0; n_phi * n_j];
    for (ip, &ph) in phi.iter().enumerate() {
        for (ij, &jj) in j.iter().enumerate() {
            let (x0, p0) = frame.from_action_angle(PhasePoint { j: jj, phi: ph }, state.time);
            values[ip * n_j + ij] = husimi_point(state, x0, p0);
        }
    }
    Ok(PhaseSpaceField {
        phi,
        j,
        values,
        time: state.time,
        omega: frame.omega,
        delta_phi: 0.0,
    })
}

/// Husimi density at a single `(x0, p0)` point.
pub fn husimi_point(state: &WaveState, x0: f64, p0: f64) -> f64 {
    let grid = state.grid();
    let xs = grid.xs();
    let dx = grid.dx();
    let n = grid.n();
    let sigma = (0.5f64).sqrt();
    let half = OVERLAP_WINDOW_SIGMA * sigma;
    let lo = (((x0 - half) - xs[0]) / dx).floor().max(0.0) as usize;
    let hi = ((((x0 + half) - xs[0]) / dx).ceil() as usize).min(n - 1);
    if lo >= n || hi <= lo {
        return 0.0;
    }
    let norm_const = PI.powf(-0.25);
    // conj(g)(x) = pi^(-1/4) exp(-(x - x0)^2 / 2) exp(-i p0 x); the phase
    // advances by a constant rotation per grid point.
    let rot = Complex64::cis(-p0 * dx);
    let mut phase = Complex64::cis(-p0 * xs[lo]);
    let mut acc = Complex64::new(0.0, 0.0);
    for idx in lo..=hi {
        let d = xs[idx] - x0;
        let envelope = norm_const * (-0.5 * d * d).exp();
        acc += envelope * phase * state.psi[idx];
        phase *= rot;
    }
    acc *= dx;
    acc.norm_sqr() / (2.0 * PI)
}

/// Husimi field on a cartesian `(x0, p0)` grid (mainly for normalization
/// checks and direct comparisons against the Wigner transform).
pub fn husimi_cartesian(state: &WaveState, x0s: &[f64], p0s: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x0s.len() * p0s.len()];
    for (ix, &x0) in x0s.iter().enumerate() {
        for (ip, &p0) in p0s.iter().enumerate() {
            out[ix * p0s.len() + ip] = husimi_point(state, x0, p0);
        }
    }
    out
}

/// Closed-form Wigner function of the initial Gaussian packet,
/// `W0(x, p) = (1/pi) exp[-(x - x_c)^2 - p^2]`. Non-negative and normalized.
#[derive(Debug, Clone, Copy)]
pub struct InitialWigner {
    pub x_c: f64,
}

impl InitialWigner {
    pub fn new(x_c: f64) -> Self {
        Self { x_c }
    }

    pub fn eval(&self, x: f64, p: f64) -> f64 {
        (1.0 / PI) * (-(x - self.x_c) * (x - self.x_c) - p * p).exp()
    }
}

/// How to choose the recentering shift before measuring containment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Recenter {
    None,
    /// Scan cell-aligned shifts in `[-max_abs, max_abs]` and keep the one
    /// maximizing the inside fraction.
    Scan { max_abs: f64 },
}

/// Containment of a Husimi field against the map's separatrix.
#[derive(Debug, Clone)]
pub struct OverlayReport {
    /// Husimi mass inside the separatrix (measure `dphi dJ`).
    pub inside_mass: f64,
    /// Total Husimi mass captured by the `(phi, J)` window.
    pub window_mass: f64,
    /// `inside_mass / window_mass`.
    pub inside_fraction: f64,
    /// `(phi, J, Q)` of the field maximum after recentering.
    pub peak: (f64, f64, f64),
    /// Recentering shift that was applied.
    pub delta_phi: f64,
}

/// Compute the Husimi field of `state` on the map's own grid and measure how
/// much of it lies inside the separatrix.
pub fn overlay_report(state: &WaveState, map: &AveragedPhaseMap, recenter: Recenter) -> Result<OverlayReport> {
    let separatrix = map
        .separatrix
        .as_ref()
        .ok_or_else(|| Error::Config("overlay requires a traced separatrix".into()))?;
    let spec = PhaseGridSpec {
        n_phi: map.phi.len(),
        n_j: map.j.len(),
        j_max: *map.j.last().unwrap(),
    };
    let frame = RotatingFrame::centered(&map.params);
    let field = husimi(state, &spec, &frame)?;
    let inside = inside_mask(&map.phi, &map.j, separatrix);

    let measure = |f: &PhaseSpaceField| -> (f64, f64) {
        let mut inside_mass = 0.0;
        let mut total = 0.0;
        for (v, &m) in f.values.iter().zip(&inside) {
            total += v;
            if m {
                inside_mass += v;
            }
        }
        let d_phi = TAU / f.phi.len() as f64;
        let d_j = f.j[1] - f.j[0];
        (inside_mass * d_phi * d_j, total * d_phi * d_j)
    };

    let chosen = match recenter {
        Recenter::None => field,
        Recenter::Scan { max_abs } => {
            let d_phi = TAU / field.phi.len() as f64;
            let max_cells = (max_abs / d_phi).floor() as isize;
            let mut best = field.recentered(0);
            let mut best_mass = measure(&best).0;
            for cells in -max_cells..=max_cells {
                if cells == 0 {
                    continue;
                }
                let candidate = field.recentered(cells);
                let mass = measure(&candidate).0;
                if mass > best_mass {
                    best_mass = mass;
                    best = candidate;
                }
            }
            best
        }
    };

    let (inside_mass, window_mass) = measure(&chosen);
    let mut peak = (0usize, 0usize, f64::NEG_INFINITY);
    for ip in 0..chosen.phi.len() {
        for ij in 0..chosen.j.len() {
            let v = chosen.value_at(ip, ij);
            if v > peak.2 {
                peak = (ip, ij, v);
            }
        }
    }
    Ok(OverlayReport {
        inside_mass,
        window_mass,
        inside_fraction: inside_mass / window_mass,
        peak: (chosen.phi[peak.0], chosen.j[peak.1], peak.2),
        delta_phi: chosen.delta_phi,
    })
}

/// Scanline inside-mask of the separatrix over a `(phi, J)` grid: for each
/// angle column, intersect the polygon boundary with the vertical line (the
/// angle taken modulo 2 pi) and fill between crossing pairs.
pub fn inside_mask(phi: &[f64], j: &[f64], sep: &crate::classical::Separatrix) -> Vec<bool> {
    let pts = sep.points();
    let n_edges = pts.len();
    let mut mask = vec![false; phi.len() * j.len()];
    let mut crossings: Vec<f64> = Vec::new();
    for (ip, &p) in phi.iter().enumerate() {
        crossings.clear();
        for shift in [-TAU, 0.0, TAU] {
            let x_line = p + shift;
            for e in 0..n_edges {
                let (xa, ya) = pts[e];
                let (xb, yb) = pts[(e + 1) % n_edges];
                if (xa <= x_line && x_line < xb) || (xb <= x_line && x_line < xa) {
                    let t = (x_line - xa) / (xb - xa);
                    crossings.push(ya + t * (yb - ya));
                }
            }
        }
        crossings.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Fill J nodes between consecutive crossing pairs.
        for pair in crossings.chunks_exact(2) {
            let (lo, hi) = (pair[0], pair[1]);
            for (ij, &jj) in j.iter().enumerate() {
                if jj > hi {
                    break;
                }
                if jj >= lo {
                    mask[ip * j.len() + ij] = true;
                }
            }
        }
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::MapConfig;
    use crate::grid::SpatialGrid;
    use crate::params::ModelParams;
    use crate::state::make_initial_state;
    use std::sync::Arc;

    fn grid() -> Arc<SpatialGrid> {
        Arc::new(SpatialGrid::new(2048, 25.0).unwrap())
    }

    #[test]
    fn ground_state_peak_value() {
        // Self-overlap of the coherent state: Q(0, 0) = 1 / (2 pi).
        let s = make_initial_state(&grid(), 0.0).unwrap();
        let q = husimi_point(&s, 0.0, 0.0);
        assert!((q - 1.0 / TAU).abs() < 1e-9, "Q(0,0) = {q}");
    }

    #[test]
    fn husimi_mass_is_one() {
        let s = make_initial_state(&grid(), -3.0).unwrap();
        let xs: Vec<f64> = (0..121).map(|i| -12.0 + 0.15 * i as f64).collect();
        let ps: Vec<f64> = (0..121).map(|i| -9.0 + 0.15 * i as f64).collect();
        let q = husimi_cartesian(&s, &xs, &ps);
        let mass: f64 = q.iter().sum::<f64>() * 0.15 * 0.15;
        assert!((mass - 1.0).abs() < 1e-6, "mass = {mass}");
        assert!(q.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn initial_packet_peaks_at_resonant_action() {
        let params = ModelParamsLike::packet();
        let s = make_initial_state(&grid(), params.x_c).unwrap();
        let frame = RotatingFrame::centered(&params);
        let spec = PhaseGridSpec {
            n_phi: 400,
            n_j: 400,
            j_max: 96.0,
        };
        let field = husimi(&s, &spec, &frame).unwrap();
        let mut best = (0, 0, f64::NEG_INFINITY);
        for ip in 0..field.phi.len() {
            for ij in 0..field.j.len() {
                let v = field.value_at(ip, ij);
                if v > best.2 {
                    best = (ip, ij, v);
                }
            }
        }
        let d_phi = TAU / 400.0;
        let d_j = 96.0 / 399.0;
        assert!(
            field.phi[best.0].abs() <= d_phi + 1e-12,
            "peak phi = {}",
            field.phi[best.0]
        );
        assert!(
            (field.j[best.1] - 32.0).abs() <= d_j + 1e-12,
            "peak J = {}",
            field.j[best.1]
        );
    }

    // Tiny local alias so the tests read naturally.
    struct ModelParamsLike;
    impl ModelParamsLike {
        fn packet() -> ModelParams {
            ModelParams::new(0.5, 2e-4, -8.0)
        }
    }

    #[test]
    fn window_beyond_grid_support_is_rejected() {
        let s = make_initial_state(&grid(), -8.0).unwrap();
        let frame = RotatingFrame::centered(&ModelParamsLike::packet());
        let spec = PhaseGridSpec {
            n_phi: 100,
            n_j: 100,
            j_max: 400.0,
        };
        assert!(husimi(&s, &spec, &frame).is_err());
    }

    #[test]
    fn initial_wigner_is_normalized_nonnegative_with_gaussian_marginal() {
        let w = InitialWigner::new(-8.0);
        let mut mass = 0.0;
        let h = 0.05;
        for i in 0..800 {
            let x = -20.0 + h * i as f64;
            let mut marginal = 0.0;
            for k in 0..400 {
                let p = -10.0 + h * k as f64;
                let v = w.eval(x, p);
                assert!(v >= 0.0);
                marginal += v * h;
            }
            mass += marginal * h;
            // Marginal over p is the position density of the packet.
            let expected = (1.0 / PI).sqrt() * (-(x + 8.0) * (x + 8.0)).exp();
            assert!((marginal - expected).abs() < 1e-9);
        }
        assert!((mass - 1.0).abs() < 1e-9, "mass = {mass}");
    }

    #[test]
    fn recentering_bookkeeping_is_consistent() {
        // Shifting the field and the separatrix by the same angle must leave
        // the inside mass unchanged.
        let params = ModelParamsLike::packet();
        let map = crate::classical::AveragedPhaseMap::compute(
            &params,
            &MapConfig {
                n_phi: 300,
                n_j: 300,
                ..MapConfig::default()
            },
        )
        .unwrap();
        let sep = map.separatrix.as_ref().unwrap();
        let s = make_initial_state(&grid(), params.x_c).unwrap();
        let frame = RotatingFrame::centered(&params);
        let spec = PhaseGridSpec {
            n_phi: map.phi.len(),
            n_j: map.j.len(),
            j_max: *map.j.last().unwrap(),
        };
        let field = husimi(&s, &spec, &frame).unwrap();

        let mass_with = |f: &PhaseSpaceField, mask: &[bool]| -> f64 {
            f.values
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(v, _)| v)
                .sum()
        };
        let mask0 = inside_mask(&map.phi, &map.j, sep);
        let m0 = mass_with(&field, &mask0);

        let cells = 40isize;
        let delta = cells as f64 * TAU / map.phi.len() as f64;
        let shifted_field = field.recentered(cells);
        // Rotate the polygon by the same cell-aligned angle.
        let rotated_pts: Vec<(f64, f64)> =
            sep.points().iter().map(|&(p, j)| (p + delta, j)).collect();
        let rotated = crate::classical::Separatrix::from_polygon_for_tests(
            rotated_pts,
            sep.area,
            sep.level,
            sep.saddle,
            sep.wraps_phi,
        );
        let mask1 = inside_mask(&map.phi, &map.j, &rotated);
        let m1 = mass_with(&shifted_field, &mask1);
        assert!(
            ((m0 - m1) / m0).abs() < 1e-9,
            "inside mass changed under joint rotation: {m0} vs {m1}"
        );
        assert!((shifted_field.delta_phi - delta).abs() < 1e-12);
    }
}
