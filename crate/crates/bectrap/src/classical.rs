//! The classical averaged-resonance model.
//!
//! In the rotating frame the orbit-averaged Hamiltonian is
//!
//! ```text
//! <H>(J, phi) = (3/4) beta J (J/2 - J_c) + <V_int>(J, phi)
//! ```
//!
//! where `<V_int>` averages the frozen-Gaussian interaction potential over
//! one fast oscillation period. Contours of `<H>` approximate the slow
//! drift of trajectories; the level set through the governing hyperbolic
//! point (the separatrix) bounds the confinement island around the packet
//! center at `(J_c, 0)`, and the share of the initial Wigner distribution
//! inside that island is the confinement fraction `F`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::{level_curves, Curve, Polygon};
use crate::error::{Error, Result};
use crate::params::ModelParams;

pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Default number of quadrature nodes; the integrand is smooth and periodic,
/// so the uniform rule converges spectrally and 256 nodes reach ~1e-15.
pub const DEFAULT_QUADRATURE_NODES: usize = 256;

/// Secular frequency shift `delta_omega = (3/4) beta J_c`: the unique choice
/// for which the angle drift `d/dJ [J (1 - Omega) + (3/8) beta J^2]`
/// vanishes at `J = J_c` (3/8 being the period average of `sin^4`).
pub fn secular_frequency(params: &ModelParams) -> f64 {
    params.delta_omega()
}

/// Precomputed sine/cosine tables for the uniform periodic quadrature.
struct QuadratureNodes {
    sin_t: Vec<f64>,
    cos_t: Vec<f64>,
}

impl QuadratureNodes {
    fn new(n: usize) -> Self {
        let (sin_t, cos_t) = (0..n)
            .map(|i| (TAU * i as f64 / n as f64).sin_cos())
            .unzip();
        Self { sin_t, cos_t }
    }
}

fn avg_interaction_with(j: f64, phi: f64, params: &ModelParams, nodes: &QuadratureNodes) -> f64 {
    let a = (2.0 * j).sqrt();
    let b = (2.0 * params.j_c()).sqrt();
    let (sin_phi, cos_phi) = phi.sin_cos();
    let mut sum = 0.0;
    for (st, ct) in nodes.sin_t.iter().zip(&nodes.cos_t) {
        // a sin(phi + t) - b sin(t)
        let s = a * (sin_phi * ct + cos_phi * st) - b * st;
        sum += (-s * s).exp();
    }
    params.u / SQRT_PI * (sum / nodes.sin_t.len() as f64)
}

/// Orbit-averaged interaction potential, by uniform trapezoidal quadrature of
/// the periodic integrand
/// `exp[-(sqrt(2J) sin(phi + t) - sqrt(2 J_c) sin t)^2]` over one period.
pub fn avg_interaction(j: f64, phi: f64, params: &ModelParams, n_nodes: usize) -> f64 {
    assert!(j >= 0.0, "action must be non-negative, got {j}");
    assert!(n_nodes >= 4, "need at least 4 quadrature nodes");
    avg_interaction_with(j, phi, params, &QuadratureNodes::new(n_nodes))
}

/// `d<V_int>/dJ` by quadrature of the differentiated integrand (J > 0).
fn avg_interaction_dj(j: f64, phi: f64, params: &ModelParams, nodes: &QuadratureNodes) -> f64 {
    let a = (2.0 * j).sqrt();
    let b = (2.0 * params.j_c()).sqrt();
    let (sin_phi, cos_phi) = phi.sin_cos();
    let mut sum = 0.0;
    for (st, ct) in nodes.sin_t.iter().zip(&nodes.cos_t) {
        let sp = sin_phi * ct + cos_phi * st;
        let s = a * sp - b * st;
        sum += (-s * s).exp() * (-2.0 * s) * sp / a;
    }
    params.u / SQRT_PI * (sum / nodes.sin_t.len() as f64)
}

/// The averaged Hamiltonian `(3/4) beta J (J/2 - J_c) + <V_int>(J, phi)`.
pub fn avg_hamiltonian(j: f64, phi: f64, params: &ModelParams) -> f64 {
    avg_hamiltonian_n(j, phi, params, DEFAULT_QUADRATURE_NODES)
}

pub fn avg_hamiltonian_n(j: f64, phi: f64, params: &ModelParams, n_nodes: usize) -> f64 {
    0.75 * params.beta * j * (0.5 * j - params.j_c()) + avg_interaction(j, phi, params, n_nodes)
}

fn avg_hamiltonian_with(j: f64, phi: f64, params: &ModelParams, nodes: &QuadratureNodes) -> f64 {
    0.75 * params.beta * j * (0.5 * j - params.j_c())
        + avg_interaction_with(j, phi, params, nodes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Elliptic,
    Hyperbolic,
    /// Hessian determinant below tolerance; reported, not guessed.
    Degenerate,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FixedPoint {
    pub j: f64,
    pub phi: f64,
    pub kind: PointKind,
    /// `<H>` at the point.
    pub h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub points: Vec<FixedPoint>,
    /// For `u = 0` the whole circle `J = J_c` is stationary; no isolated
    /// points exist and this carries the ring action instead.
    pub degenerate_ring: Option<f64>,
}

/// Locate and classify the stationary points of `<H>` for `J in (0, j_max]`.
///
/// `<V_int>` depends on the angle only through `cos(phi)` (it is even and
/// 2 pi periodic), and `d<H>/dphi` carries a strict `sin(phi)` factor, so
/// every interior stationary point lies on the lines `phi = 0` or
/// `phi = pi`. Those lines are scanned densely and roots of `d<H>/dJ` are
/// refined by bisection; classification uses the central-difference Hessian.
pub fn find_fixed_points(params: &ModelParams, j_max: f64) -> Result<FixedPointSet> {
    let j_c = params.j_c();
    if !(j_max > j_c) {
        return Err(Error::Config(format!(
            "fixed-point search bound j_max = {j_max} must exceed J_c = {j_c}"
        )));
    }
    if params.u == 0.0 {
        return Ok(FixedPointSet {
            points: Vec::new(),
            degenerate_ring: Some(j_c),
        });
    }

    let nodes = QuadratureNodes::new(DEFAULT_QUADRATURE_NODES);
    let grad_j = |j: f64, phi: f64| {
        0.75 * params.beta * (j - j_c) + avg_interaction_dj(j, phi, params, &nodes)
    };

    // Tolerance for "degenerate" Hessians, scaled to the field magnitude.
    let h_scale = params.u.abs() / SQRT_PI + 0.375 * params.beta.abs() * j_max * j_max;
    let det_tol = 1e-12 * h_scale * h_scale;

    let n_scan = 3000;
    let j_lo = 1e-6 * j_max;
    let mut points: Vec<FixedPoint> = Vec::new();
    for phi in [0.0, PI] {
        let mut prev_j = j_lo;
        let mut prev_g = grad_j(prev_j, phi);
        for i in 1..=n_scan {
            let j = j_lo + (j_max - j_lo) * i as f64 / n_scan as f64;
            let g = grad_j(j, phi);
            if prev_g == 0.0 || prev_g * g < 0.0 {
                let (mut lo, mut hi) = (prev_j, j);
                let mut g_lo = prev_g;
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let g_mid = grad_j(mid, phi);
                    if g_lo * g_mid <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        g_lo = g_mid;
                    }
                }
                let root = 0.5 * (lo + hi);
                if points
                    .iter()
                    .all(|p| p.phi != phi || (p.j - root).abs() > 1e-6 * j_max)
                {
                    points.push(classify(root, phi, params, &nodes, det_tol));
                }
            }
            prev_j = j;
            prev_g = g;
        }
    }

    let center_found = points
        .iter()
        .any(|p| p.phi == 0.0 && (p.j - j_c).abs() <= 1e-6 * j_c.max(1.0));
    if !center_found {
        return Err(Error::Numerics(format!(
            "no stationary point found near (J_c, 0) = ({j_c}, 0) for u = {}, beta = {}",
            params.u, params.beta
        )));
    }
    points.sort_by(|a, b| (a.phi, a.j).partial_cmp(&(b.phi, b.j)).unwrap());
    Ok(FixedPointSet {
        points,
        degenerate_ring: None,
    })
}

fn classify(
    j: f64,
    phi: f64,
    params: &ModelParams,
    nodes: &QuadratureNodes,
    det_tol: f64,
) -> FixedPoint {
    let h = avg_hamiltonian_with(j, phi, params, nodes);
    let dj = 1e-4 * j.max(1.0);
    let dp = 1e-4;
    let f = |jj: f64, pp: f64| avg_hamiltonian_with(jj.max(0.0), pp, params, nodes);
    let h_jj = (f(j + dj, phi) - 2.0 * h + f(j - dj, phi)) / (dj * dj);
    let h_pp = (f(j, phi + dp) - 2.0 * h + f(j, phi - dp)) / (dp * dp);
    let h_jp = (f(j + dj, phi + dp) - f(j + dj, phi - dp) - f(j - dj, phi + dp)
        + f(j - dj, phi - dp))
        / (4.0 * dj * dp);
    let det = h_jj * h_pp - h_jp * h_jp;
    let kind = if det.abs() < det_tol {
        PointKind::Degenerate
    } else if det > 0.0 {
        PointKind::Elliptic
    } else {
        PointKind::Hyperbolic
    };
    FixedPoint { j, phi, kind, h }
}

/// Fraction by which the extraction level is pulled from the saddle value
/// towards the island center. A pure saddle-level set pinches to zero width
/// at the hyperbolic point, which marching squares cannot resolve reliably
/// on a finite grid; the tiny pull keeps the island component cleanly
/// separated while moving the traced curve by far less than one cell.
const LEVEL_PULL: f64 = 1e-3;

/// Separatrix of the confinement island around `(J_c, 0)`.
#[derive(Debug, Clone)]
pub struct Separatrix {
    polygon: Polygon,
    pub area: f64,
    /// `<H>` at the governing saddle (the traced level is pulled towards the
    /// island center by `1e-3` of the saddle-to-center gap).
    pub level: f64,
    pub saddle: FixedPoint,
    /// Pendulum-band topology: the island wraps the full angle circle and
    /// the polygon closes through bridges at the periodic seam.
    pub wraps_phi: bool,
}

impl Separatrix {
    /// Closed polygon in `(phi, J)`; `phi` may extend past `(-pi, pi]` for
    /// band-shaped islands.
    pub fn points(&self) -> &[(f64, f64)] {
        self.polygon.points()
    }

    #[cfg(test)]
    pub(crate) fn from_polygon_for_tests(
        points: Vec<(f64, f64)>,
        area: f64,
        level: f64,
        saddle: FixedPoint,
        wraps_phi: bool,
    ) -> Self {
        Self {
            polygon: Polygon::new(points),
            area,
            level,
            saddle,
            wraps_phi,
        }
    }

    /// Point test with the angle taken modulo 2 pi.
    pub fn contains(&self, phi: f64, j: f64) -> bool {
        self.polygon.contains(phi, j)
            || self.polygon.contains(phi + TAU, j)
            || self.polygon.contains(phi - TAU, j)
    }
}

/// Extract the separatrix from a tabulated `<H>` field: the level set through
/// the governing hyperbolic point, keeping the connected component that
/// encloses `(J_c, 0)`. When several hyperbolic points qualify, the one with
/// the smallest enclosed area governs. Returns `None` when no component
/// encloses the center (no confinement region).
pub fn trace_separatrix(
    params: &ModelParams,
    phi: &[f64],
    j: &[f64],
    h: &[f64],
    fixed_points: &FixedPointSet,
) -> Option<Separatrix> {
    let j_c = params.j_c();
    let h_ell = avg_hamiltonian(j_c, 0.0, params);
    let mut best: Option<Separatrix> = None;
    for saddle in fixed_points
        .points
        .iter()
        .filter(|p| p.kind == PointKind::Hyperbolic)
    {
        if saddle.h == h_ell {
            continue; // no island between identical levels
        }
        let level = saddle.h + LEVEL_PULL * (h_ell - saddle.h);
        let curves = level_curves(phi, j, h, level, Some(TAU));
        if let Some(sep) = island_from_curves(&curves, phi, j_c, saddle) {
            if best.as_ref().map_or(true, |b| sep.area < b.area) {
                best = Some(sep);
            }
        }
    }
    best
}

fn island_from_curves(
    curves: &[Curve],
    phi_grid: &[f64],
    j_c: f64,
    saddle: &FixedPoint,
) -> Option<Separatrix> {
    let mut best: Option<Separatrix> = None;
    let mut consider = |sep: Separatrix| {
        if best.as_ref().map_or(true, |b| sep.area < b.area) {
            best = Some(sep);
        }
    };

    // Plain loops enclosing the center.
    for curve in curves.iter().filter(|c| c.closed && c.x_winding == 0) {
        let mut pts = curve.points.clone();
        // Normalize the loop into the base angle window.
        let mean: f64 = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let shift = TAU * ((mean + PI) / TAU).floor();
        if shift != 0.0 {
            for p in &mut pts {
                p.0 -= shift;
            }
        }
        let polygon = Polygon::new(pts);
        if polygon.contains(0.0, j_c) || polygon.contains(TAU, j_c) || polygon.contains(-TAU, j_c) {
            let area = polygon.area();
            consider(Separatrix {
                area,
                polygon,
                level: saddle.h,
                saddle: *saddle,
                wraps_phi: false,
            });
        }
    }

    // Pendulum bands: a pair of cylinder-wrapping curves bracketing J_c.
    let mut wrapping: Vec<Vec<f64>> = Vec::new();
    for curve in curves.iter().filter(|c| c.closed && c.x_winding.abs() == 1) {
        if let Some(j_of_phi) = resample_wrapping(curve, phi_grid) {
            wrapping.push(j_of_phi);
        }
    }
    if wrapping.len() >= 2 {
        let mid = phi_grid.len() / 2; // column closest to phi = 0
        let mut lower: Option<&Vec<f64>> = None;
        let mut upper: Option<&Vec<f64>> = None;
        for w in &wrapping {
            if w[mid] < j_c {
                if lower.map_or(true, |l| w[mid] > l[mid]) {
                    lower = Some(w);
                }
            } else if upper.map_or(true, |u| w[mid] < u[mid]) {
                upper = Some(w);
            }
        }
        if let (Some(lo), Some(up)) = (lower, upper) {
            let mut pts: Vec<(f64, f64)> = Vec::with_capacity(2 * phi_grid.len() + 2);
            for (i, &p) in phi_grid.iter().enumerate() {
                pts.push((p, up[i]));
            }
            pts.push((phi_grid[0] + TAU, up[0]));
            pts.push((phi_grid[0] + TAU, lo[0]));
            for (i, &p) in phi_grid.iter().enumerate().rev() {
                pts.push((p, lo[i]));
            }
            let polygon = Polygon::new(pts);
            let area = polygon.area();
            consider(Separatrix {
                area,
                polygon,
                level: saddle.h,
                saddle: *saddle,
                wraps_phi: true,
            });
        }
    }
    best
}

/// Sample a cylinder-wrapping curve as `J(phi)` on the tabulation columns.
/// Returns `None` if some column is never crossed (not a graph over phi).
fn resample_wrapping(curve: &Curve, phi_grid: &[f64]) -> Option<Vec<f64>> {
    let n = phi_grid.len();
    let base = phi_grid[0];
    let step = phi_grid[1] - phi_grid[0];
    let mut total = vec![0.0f64; n];
    let mut count = vec![0usize; n];
    let m = curve.points.len();
    for k in 0..m {
        let (xa, ya) = curve.points[k];
        // The implicit closure edge continues one winding further in phi.
        let (xb, yb) = if k + 1 < m {
            curve.points[k + 1]
        } else {
            (
                curve.points[0].0 + curve.x_winding as f64 * TAU,
                curve.points[0].1,
            )
        };
        if (xb - xa).abs() > PI {
            continue; // defensive: malformed edge
        }
        let (x0, y0, x1, y1) = if xa <= xb { (xa, ya, xb, yb) } else { (xb, yb, xa, ya) };
        // Columns phi_i + 2 pi w covered by [x0, x1].
        for w in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let lo = ((x0 - base - w * TAU) / step).ceil() as isize;
            let hi = ((x1 - base - w * TAU) / step).floor() as isize;
            for idx in lo..=hi {
                if idx < 0 || idx as usize >= n {
                    continue;
                }
                let phi = base + idx as f64 * step + w * TAU;
                let t = if x1 > x0 { (phi - x0) / (x1 - x0) } else { 0.5 };
                let jv = y0 + t * (y1 - y0);
                total[idx as usize] += jv;
                count[idx as usize] += 1;
            }
        }
    }
    if count.iter().any(|&c| c == 0) {
        return None;
    }
    Some(
        total
            .iter()
            .zip(&count)
            .map(|(&s, &c)| s / c as f64)
            .collect(),
    )
}

/// Tabulation settings for [`AveragedPhaseMap`].
#[derive(Debug, Clone, Copy)]
pub struct MapConfig {
    pub n_phi: usize,
    pub n_j: usize,
    /// Defaults to `3 J_c`.
    pub j_max: Option<f64>,
    pub n_quad: usize,
}

impl Default for MapConfig {
    fn default() -> Self {
        Self {
            n_phi: 600,
            n_j: 600,
            j_max: None,
            n_quad: DEFAULT_QUADRATURE_NODES,
        }
    }
}

/// Tabulated `<H>` with its fixed points and (if present) separatrix.
#[derive(Debug, Clone)]
pub struct AveragedPhaseMap {
    pub params: ModelParams,
    /// Angle columns spanning `(-pi, pi]`.
    pub phi: Vec<f64>,
    /// Action rows spanning `[0, j_max]`.
    pub j: Vec<f64>,
    /// `<H>` samples, phi-major: `h[i_phi * n_j + i_j]`.
    pub h: Vec<f64>,
    pub fixed_points: FixedPointSet,
    pub separatrix: Option<Separatrix>,
}

impl AveragedPhaseMap {
    pub fn compute(params: &ModelParams, cfg: &MapConfig) -> Result<Self> {
        let j_max = cfg.j_max.unwrap_or(3.0 * params.j_c());
        if !(j_max > 0.0) {
            return Err(Error::Config(format!("map j_max must be positive, got {j_max}")));
        }
        let n_phi = cfg.n_phi.max(8);
        let n_j = cfg.n_j.max(8);
        let d_phi = TAU / n_phi as f64;
        let phi: Vec<f64> = (0..n_phi).map(|i| -PI + (i + 1) as f64 * d_phi).collect();
        let j: Vec<f64> = (0..n_j)
            .map(|i| j_max * i as f64 / (n_j - 1) as f64)
            .collect();
        let nodes = QuadratureNodes::new(cfg.n_quad);
        let mut h = vec![0.0f64; n_phi * n_j];
        for (ip, &p) in phi.iter().enumerate() {
            for (ij, &jj) in j.iter().enumerate() {
                h[ip * n_j + ij] = avg_hamiltonian_with(jj, p, params, &nodes);
            }
        }
        let fixed_points = find_fixed_points(params, j_max)?;
        let separatrix = trace_separatrix(params, &phi, &j, &h, &fixed_points);
        Ok(Self {
            params: *params,
            phi,
            j,
            h,
            fixed_points,
            separatrix,
        })
    }

    pub fn h_at(&self, i_phi: usize, i_j: usize) -> f64 {
        self.h[i_phi * self.j.len() + i_j]
    }
}

/// Monte-Carlo estimate of the confinement fraction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FEstimate {
    pub f: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

pub const DEFAULT_MC_SAMPLES: usize = 100_000;

/// Fraction of the initial Wigner distribution
/// `W0(x, p) = (1/pi) exp[-(x - x_c)^2 - p^2]` inside the separatrix,
/// estimated by seeded Monte-Carlo sampling with point-in-polygon tests in
/// the centered rotating frame at `t = 0`.
pub fn confinement_fraction(
    params: &ModelParams,
    separatrix: Option<&Separatrix>,
    seed: u64,
    n_samples: usize,
) -> FEstimate {
    let Some(sep) = separatrix else {
        return FEstimate {
            f: 0.0,
            stderr: 0.0,
            n_samples: 0,
            seed,
        };
    };
    assert!(n_samples > 0);
    let frame = crate::frame::RotatingFrame::centered(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = (0.5f64).sqrt();
    let mut inside = 0usize;
    let sample_normal_pair = |rng: &mut ChaCha8Rng| {
        // Box-Muller; u1 in (0, 1].
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        (r * c, r * s)
    };
    for _ in 0..n_samples {
        let (z1, z2) = sample_normal_pair(&mut rng);
        let x = params.x_c + sigma * z1;
        let p = sigma * z2;
        let pt = frame.to_action_angle(x, p, 0.0);
        if sep.contains(pt.phi, pt.j) {
            inside += 1;
        }
    }
    let f = inside as f64 / n_samples as f64;
    FEstimate {
        f,
        stderr: (f * (1.0 - f) / n_samples as f64).sqrt(),
        n_samples,
        seed,
    }
}

/// Specification of an `F(u, beta)` tabulation and level-contour extraction.
#[derive(Debug, Clone)]
pub struct FContourSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub n_u: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub n_beta: usize,
    pub x_c: f64,
    pub level: f64,
    pub map: MapConfig,
    pub mc_samples: usize,
    pub seed: u64,
}

impl FContourSpec {
    pub fn new(u_range: (f64, f64, usize), beta_range: (f64, f64, usize), x_c: f64) -> Self {
        Self {
            u_min: u_range.0,
            u_max: u_range.1,
            n_u: u_range.2,
            beta_min: beta_range.0,
            beta_max: beta_range.1,
            n_beta: beta_range.2,
            x_c,
            level: 0.9,
            map: MapConfig {
                n_phi: 400,
                n_j: 400,
                ..MapConfig::default()
            },
            mc_samples: 20_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FContourResult {
    pub u: Vec<f64>,
    pub beta: Vec<f64>,
    /// u-major: `f[iu * n_beta + ib]`.
    pub f: Vec<FEstimate>,
    /// Polylines of the requested level in the `(u, beta)` plane.
    pub contours: Vec<Vec<(f64, f64)>>,
}

/// Tabulate `F` on the `(u, beta)` grid and extract the level contour(s).
/// Cells are independent and run in parallel; each draws from its own
/// deterministic seed derived from `spec.seed` and the cell index.
pub fn f_contour(spec: &FContourSpec) -> Result<FContourResult> {
    if spec.n_u < 2 || spec.n_beta < 2 {
        return Err(Error::Config("fcontour grid needs at least 2x2 points".into()));
    }
    if !(spec.u_min < spec.u_max) || !(spec.beta_min < spec.beta_max) {
        return Err(Error::Config("fcontour ranges must be increasing".into()));
    }
    let u: Vec<f64> = (0..spec.n_u)
        .map(|i| spec.u_min + (spec.u_max - spec.u_min) * i as f64 / (spec.n_u - 1) as f64)
        .collect();
    let beta: Vec<f64> = (0..spec.n_beta)
        .map(|i| spec.beta_min + (spec.beta_max - spec.beta_min) * i as f64 / (spec.n_beta - 1) as f64)
        .collect();

    let cells: Vec<(usize, usize)> = (0..spec.n_u)
        .flat_map(|iu| (0..spec.n_beta).map(move |ib| (iu, ib)))
        .collect();
    let f: Vec<FEstimate> = cells
        .par_iter()
        .map(|&(iu, ib)| {
            let params = ModelParams::new(u[iu], beta[ib], spec.x_c);
            let cell_seed = spec
                .seed
                .wrapping_add(((iu * spec.n_beta + ib) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            confinement_for(&params, &spec.map, cell_seed, spec.mc_samples)
        })
        .collect();

    let contours = if spec.level > 0.0 && spec.level < 1.0 {
        let values: Vec<f64> = f.iter().map(|e| e.f).collect();
        level_curves(&u, &beta, &values, spec.level, None)
            .into_iter()
            .map(|c| c.points)
            .collect()
    } else {
        Vec::new()
    };
    Ok(FContourResult { u, beta, f, contours })
}

/// Full classical pipeline for a single parameter set: map, separatrix, F.
pub fn confinement_for(
    params: &ModelParams,
    map_cfg: &MapConfig,
    seed: u64,
    mc_samples: usize,
) -> FEstimate {
    match AveragedPhaseMap::compute(params, map_cfg) {
        Ok(map) => confinement_fraction(params, map.separatrix.as_ref(), seed, mc_samples),
        Err(_) => FEstimate {
            f: 0.0,
            stderr: 0.0,
            n_samples: 0,
            seed,
        },
    }
}
