//! Split-step Fourier integrator for the 1D Gross-Pitaevskii equation
//!
//! ```text
//! i d(psi)/dt = [ -1/2 d^2/dx^2 + x^2/2 + beta x^4/4 + u |psi|^2 ] psi
//! ```
//!
//! in harmonic-oscillator units, with periodic boundary conditions. One step
//! is the symmetric (Strang) composition: half kinetic step in Fourier
//! space, full potential step in position space with `|psi|^2` frozen at the
//! step start (exact for the nonlinear term, which preserves `|psi|`
//! pointwise), half kinetic step.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::params::ModelParams;
use crate::state::WaveState;

/// Time stepping and output cadence for one evolution.
#[derive(Debug, Clone, Copy)]
pub struct SplitStepConfig {
    pub dt: f64,
    pub t_final: f64,
    /// Spacing of stored wavefunction snapshots; `None` stores only `t = 0`.
    pub snapshot_interval: Option<f64>,
    /// Spacing of scalar observable samples.
    pub observable_interval: f64,
}

impl SplitStepConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self {
            dt,
            t_final,
            snapshot_interval: Some(10.0),
            observable_interval: 1.0,
        }
    }

    /// Check positivity and commensurability; returns
    /// `(n_steps, observable_stride, snapshot_stride)`.
    pub fn schedule(&self) -> Result<(usize, usize, Option<usize>)> {
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.t_final < 0.0 {
            return Err(Error::Config(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        let steps = round_multiple(self.t_final, self.dt, "t_final")?;
        let obs = round_multiple(self.observable_interval, self.dt, "observable_interval")?;
        if obs == 0 {
            return Err(Error::Config("observable_interval must be positive".into()));
        }
        let snap = match self.snapshot_interval {
            None => None,
            Some(s) => {
                let k = round_multiple(s, self.dt, "snapshot_interval")?;
                if k == 0 {
                    return Err(Error::Config("snapshot_interval must be positive".into()));
                }
                Some(k)
            }
        };
        Ok((steps, obs, snap))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn round_multiple(value: f64, dt: f64, what: &str) -> Result<usize> {
    let ratio = value / dt;
    let rounded = ratio.round();
    if (ratio - rounded).abs() > 1e-9 * ratio.abs().max(1.0) {
        return Err(Error::Config(format!(
            "{what} = {value} is not an integer multiple of dt = {dt}"
        )));
    }
    Ok(rounded as usize)
}

/// Scalar observables sampled on a common time grid.
#[derive(Debug, Clone, Default)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub sigma_x: Vec<f64>,
    pub sigma_p: Vec<f64>,
    pub norm: Vec<f64>,
    pub energy: Vec<f64>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub psi: Vec<Complex64>,
}

#[derive(Debug)]
pub struct Evolution {
    pub state: WaveState,
    pub series: ObservableSeries,
    pub snapshots: Vec<Snapshot>,
}

/// Density allowed at the box edge before the run aborts: beyond this the
/// periodic images start talking to each other.
const EDGE_DENSITY_LIMIT: f64 = 1e-12;

/// Unit phasor for small angles by truncated series (exact to f64 for the
/// nonlinear phases that arise here), falling back to `cis` otherwise.
#[inline]
fn cis_small(theta: f64) -> Complex64 {
    if theta.abs() < 0.05 {
        let t2 = theta * theta;
        let cos = 1.0 - t2 * (0.5 - t2 * (1.0 / 24.0 - t2 / 720.0));
        let sin = theta * (1.0 - t2 * (1.0 / 6.0 - t2 * (1.0 / 120.0 - t2 / 5040.0)));
        Complex64::new(cos, sin)
    } else {
        Complex64::cis(theta)
    }
}

/// Reusable stepper: FFT plans plus phase tables for a fixed `dt`.
pub struct SplitStepper {
    grid: Arc<SpatialGrid>,
    params: ModelParams,
    dt: f64,
    /// Half/full kinetic phases with the inverse-FFT 1/n normalization folded in.
    kinetic_half: Vec<Complex64>,
    kinetic_full: Vec<Complex64>,
    /// Static trap phase `cis(-(x^2/2 + beta x^4/4) dt)`.
    trap_phase: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl SplitStepper {
    pub fn new(grid: &Arc<SpatialGrid>, params: &ModelParams, dt: f64) -> Self {
        let n = grid.n();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let scratch_len = fft
            .get_inplace_scratch_len()
            .max(ifft.get_inplace_scratch_len());
        let inv_n = 1.0 / n as f64;
        let kinetic_half = grid
            .ks()
            .iter()
            .map(|&k| Complex64::cis(-0.5 * k * k * 0.5 * dt) * inv_n)
            .collect();
        let kinetic_full = grid
            .ks()
            .iter()
            .map(|&k| Complex64::cis(-0.5 * k * k * dt) * inv_n)
            .collect();
        let trap_phase = grid
            .xs()
            .iter()
            .map(|&x| Complex64::cis(-(0.5 * x * x + 0.25 * params.beta * x.powi(4)) * dt))
            .collect();
        Self {
            grid: Arc::clone(grid),
            params: *params,
            dt,
            kinetic_half,
            kinetic_full,
            trap_phase,
            fft,
            ifft,
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    fn kinetic(&mut self, psi: &mut [Complex64], half: bool) {
        self.fft.process_with_scratch(psi, &mut self.scratch);
        let table = if half { &self.kinetic_half } else { &self.kinetic_full };
        for (c, k) in psi.iter_mut().zip(table) {
            *c *= k;
        }
        self.ifft.process_with_scratch(psi, &mut self.scratch);
    }

    fn potential(&self, psi: &mut [Complex64]) {
        let u_dt = -self.params.u * self.dt;
        for (c, tp) in psi.iter_mut().zip(&self.trap_phase) {
            *c *= tp * cis_small(u_dt * c.norm_sqr());
        }
    }

    fn check_finite(&self, psi: &[Complex64], time: f64) -> Result<()> {
        if psi.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::Numerics(format!(
                "non-finite amplitude at t = {time}; step too large or box too small"
            )))
        }
    }

    /// One Strang step; advances `state.time` by `dt`.
    pub fn step(&mut self, state: &mut WaveState) -> Result<()> {
        debug_assert!(Arc::ptr_eq(state.grid(), &self.grid));
        self.kinetic(&mut state.psi, true);
        self.potential(&mut state.psi);
        self.kinetic(&mut state.psi, true);
        state.time += self.dt;
        self.check_finite(&state.psi, state.time)
    }

    /// `m` consecutive Strang steps with the interior half-kinetic factors
    /// fused pairwise (`exp(-i k^2 dt/4)` twice equals `exp(-i k^2 dt/2)`
    /// exactly), saving two transforms per interior step.
    pub fn run_steps(&mut self, state: &mut WaveState, m: usize) -> Result<()> {
        if m == 0 {
            return Ok(());
        }
        debug_assert!(Arc::ptr_eq(state.grid(), &self.grid));
        self.kinetic(&mut state.psi, true);
        self.potential(&mut state.psi);
        for _ in 1..m {
            self.kinetic(&mut state.psi, false);
            self.potential(&mut state.psi);
        }
        self.kinetic(&mut state.psi, true);
        state.time += m as f64 * self.dt;
        self.check_finite(&state.psi, state.time)
    }
}

/// Single split step as a pure function (plans FFTs on each call; use
/// [`SplitStepper`] for long runs).
pub fn step(state: &WaveState, params: &ModelParams, dt: f64) -> Result<WaveState> {
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let mut out = state.clone();
    SplitStepper::new(state.grid(), params, dt).step(&mut out)?;
    Ok(out)
}

/// Spectral helper shared by the observable and energy computations.
struct SpectralOps {
    fft: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    buf: Vec<Complex64>,
}

impl SpectralOps {
    fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(n);
        let scratch_len = fft.get_inplace_scratch_len();
        Self {
            fft,
            scratch: vec![Complex64::default(); scratch_len],
            buf: vec![Complex64::default(); n],
        }
    }

    /// `(<p>, <p^2>, kinetic energy density integral)` of a state.
    fn momentum_moments(&mut self, state: &WaveState) -> (f64, f64, f64) {
        let grid = state.grid();
        self.buf.copy_from_slice(&state.psi);
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        let mut w_sum = 0.0;
        let mut p_sum = 0.0;
        let mut p2_sum = 0.0;
        for (c, &k) in self.buf.iter().zip(grid.ks()) {
            let w = c.norm_sqr();
            w_sum += w;
            p_sum += k * w;
            p2_sum += k * k * w;
        }
        let mean_p = p_sum / w_sum;
        let mean_p2 = p2_sum / w_sum;
        // Parseval: integral |dpsi/dx|^2 dx = sum k^2 |psi_k|^2 dx / n.
        let kinetic = 0.5 * p2_sum * grid.dx() / grid.n() as f64;
        (mean_p, mean_p2, kinetic)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ObservableSample {
    pub time: f64,
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub norm: f64,
    pub energy: f64,
}

fn sample_observables(
    state: &WaveState,
    params: &ModelParams,
    spectral: &mut SpectralOps,
) -> ObservableSample {
    let grid = state.grid();
    let dx = grid.dx();
    let mut norm = 0.0;
    let mut x_sum = 0.0;
    let mut x2_sum = 0.0;
    let mut potential = 0.0;
    let mut interaction = 0.0;
    for (&x, c) in grid.xs().iter().zip(&state.psi) {
        let d = c.norm_sqr();
        norm += d;
        x_sum += x * d;
        x2_sum += x * x * d;
        let v = 0.5 * x * x + 0.25 * params.beta * x.powi(4);
        potential += v * d;
        interaction += 0.5 * params.u * d * d;
    }
    let mean_x = x_sum / norm;
    let var_x = (x2_sum / norm - mean_x * mean_x).max(0.0);
    let (mean_p, mean_p2, kinetic) = spectral.momentum_moments(state);
    let var_p = (mean_p2 - mean_p * mean_p).max(0.0);
    ObservableSample {
        time: state.time,
        sigma_x: var_x.sqrt(),
        sigma_p: var_p.sqrt(),
        norm: norm * dx,
        energy: kinetic + (potential + interaction) * dx,
    }
}

/// Gross-Pitaevskii energy functional
/// `E = integral [ |psi'|^2/2 + (x^2/2 + beta x^4/4) |psi|^2 + (u/2) |psi|^4 ] dx`
/// with the derivative evaluated spectrally. Conserved by the flow.
pub fn gp_energy(state: &WaveState, params: &ModelParams) -> f64 {
    let mut spectral = SpectralOps::new(state.grid().n());
    sample_observables(state, params, &mut spectral).energy
}

/// Current scalar observables of a state.
pub fn observables(state: &WaveState, params: &ModelParams) -> ObservableSample {
    let mut spectral = SpectralOps::new(state.grid().n());
    sample_observables(state, params, &mut spectral)
}

/// Evolve by repeated Strang steps, sampling observables and snapshots on
/// their schedules (both always include `t = 0`).
pub fn evolve(initial: &WaveState, params: &ModelParams, cfg: &SplitStepConfig) -> Result<Evolution> {
    let (n_steps, obs_stride, snap_stride) = cfg.schedule()?;
    let mut state = initial.clone();
    let t0 = state.time;
    let mut stepper = SplitStepper::new(state.grid(), params, cfg.dt);
    let mut spectral = SpectralOps::new(state.grid().n());

    let mut series = ObservableSeries::default();
    let mut snapshots = Vec::new();
    let record = |state: &WaveState,
                      series: &mut ObservableSeries,
                      spectral: &mut SpectralOps|
     -> Result<()> {
        let s = sample_observables(state, params, spectral);
        let edge = state.psi[0]
            .norm_sqr()
            .max(state.psi[state.grid().n() - 1].norm_sqr());
        if edge > EDGE_DENSITY_LIMIT {
            return Err(Error::Numerics(format!(
                "density {edge:.3e} at the box edge at t = {}; enlarge grid.L",
                state.time
            )));
        }
        if (s.norm - 1.0).abs() > 1e-6 {
            return Err(Error::Numerics(format!(
                "norm drifted to {} at t = {}",
                s.norm, state.time
            )));
        }
        series.times.push(s.time);
        series.sigma_x.push(s.sigma_x);
        series.sigma_p.push(s.sigma_p);
        series.norm.push(s.norm);
        series.energy.push(s.energy);
        Ok(())
    };

    record(&state, &mut series, &mut spectral)?;
    snapshots.push(Snapshot {
        time: state.time,
        psi: state.psi.clone(),
    });

    // Boundaries where output happens; between them steps run fused.
    let event_stride = match snap_stride {
        Some(snap) => gcd(obs_stride, snap),
        None => obs_stride,
    };
    let mut i = 0usize;
    while i < n_steps {
        let m = event_stride.min(n_steps - i);
        stepper.run_steps(&mut state, m)?;
        i += m;
        // Track time as an exact multiple rather than accumulating.
        state.time = t0 + i as f64 * cfg.dt;
        if i % obs_stride == 0 {
            record(&state, &mut series, &mut spectral)?;
        }
        if let Some(snap) = snap_stride {
            if i % snap == 0 {
                snapshots.push(Snapshot {
                    time: state.time,
                    psi: state.psi.clone(),
                });
            }
        }
    }
    Ok(Evolution {
        state,
        series,
        snapshots,
    })
}

/// Mean of `sigma_x * sigma_p` over samples with `t` in `[window.0, window.1]`.
pub fn localization_metric(series: &ObservableSeries, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    if !(lo <= hi) {
        return Err(Error::Config(format!("empty window [{lo}, {hi}]")));
    }
    let eps = 1e-9 * hi.abs().max(1.0);
    let (first, last) = match (series.times.first(), series.times.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::Config("observable series is empty".into())),
    };
    if lo < first - eps || hi > last + eps {
        return Err(Error::Config(format!(
            "window [{lo}, {hi}] outside sampled range [{first}, {last}]"
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (i, &t) in series.times.iter().enumerate() {
        if t >= lo - eps && t <= hi + eps {
            sum += series.sigma_x[i] * series.sigma_p[i];
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Config(format!(
            "no observable samples inside window [{lo}, {hi}]"
        )));
    }
    Ok(sum / count as f64)
}
