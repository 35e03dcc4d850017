//! Classical test-particle orbits driven by the prescribed oscillating
//! Gaussian potential (the frozen packet density riding its unperturbed
//! orbit), for overlay on contours of the averaged Hamiltonian.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::frame::RotatingFrame;
use crate::params::ModelParams;

/// Sampled orbit in both coordinate systems. `(J, phi)` derive from `(x, p)`
/// through the centered rotating frame at `Omega = 1 + delta_omega`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub j: Vec<f64>,
    pub phi: Vec<f64>,
    pub params: ModelParams,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Prescribed interaction potential and its spatial gradient:
/// `V(x, t) = (u / sqrt(pi)) exp[-(x - x_cen(t))^2]` with the center
/// `x_cen(t) = sqrt(2 J_c) sin(Omega t + theta_c)` riding the packet orbit
/// (`x_cen(0) = x_c`).
pub fn prescribed_potential(x: f64, t: f64, params: &ModelParams) -> (f64, f64) {
    let frame = RotatingFrame::centered(params);
    let x_cen = (2.0 * params.j_c()).sqrt() * (frame.omega * t + frame.theta_c).sin();
    let d = x - x_cen;
    let v = params.u / crate::classical::SQRT_PI * (-d * d).exp();
    (v, -2.0 * d * v)
}

/// Fixed-step RK4 integration of `x' = p`, `p' = -x - beta x^3 - dV/dx`
/// under the prescribed potential. Samples every `sample_stride` steps
/// (state at `t = 0` included).
pub fn integrate_trajectory(
    start: (f64, f64),
    params: &ModelParams,
    t_final: f64,
    dt: f64,
    sample_stride: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if t_final < 0.0 {
        return Err(Error::Config(format!("t_final must be non-negative, got {t_final}")));
    }
    let stride = sample_stride.max(1);
    let n_steps = (t_final / dt).round() as usize;
    let frame = RotatingFrame::centered(params);
    let beta = params.beta;

    let accel = |x: f64, t: f64| -> f64 {
        let (_, dv) = prescribed_potential(x, t, params);
        -x - beta * x * x * x - dv
    };

    let mut traj = Trajectory {
        times: Vec::new(),
        x: Vec::new(),
        p: Vec::new(),
        j: Vec::new(),
        phi: Vec::new(),
        params: *params,
    };
    let push = |traj: &mut Trajectory, t: f64, x: f64, p: f64| {
        let pt = frame.to_action_angle(x, p, t);
        traj.times.push(t);
        traj.x.push(x);
        traj.p.push(p);
        traj.j.push(pt.j);
        traj.phi.push(pt.phi);
    };

    let (mut x, mut p) = start;
    push(&mut traj, 0.0, x, p);
    for i in 0..n_steps {
        let t = i as f64 * dt;
        let k1x = p;
        let k1p = accel(x, t);
        let k2x = p + 0.5 * dt * k1p;
        let k2p = accel(x + 0.5 * dt * k1x, t + 0.5 * dt);
        let k3x = p + 0.5 * dt * k2p;
        let k3p = accel(x + 0.5 * dt * k2x, t + 0.5 * dt);
        let k4x = p + dt * k3p;
        let k4p = accel(x + dt * k3x, t + dt);
        x += dt / 6.0 * (k1x + 2.0 * (k2x + k3x) + k4x);
        p += dt / 6.0 * (k1p + 2.0 * (k2p + k3p) + k4p);
        if !x.is_finite() || !p.is_finite() {
            return Err(Error::Numerics(format!(
                "trajectory diverged at t = {}; last valid (x, p) = ({}, {})",
                t,
                traj.x.last().unwrap(),
                traj.p.last().unwrap()
            )));
        }
        if (i + 1) % stride == 0 {
            push(&mut traj, (i + 1) as f64 * dt, x, p);
        }
    }
    Ok(traj)
}

/// Secular drift curve: sliding-window average of `(J, phi)` over one fast
/// period. The angle is averaged on its unwrapped representation and the
/// output keeps it unwrapped; `(x, p)` are rebuilt from the averaged
/// action-angle point at the window-center time.
pub fn slow_component(traj: &Trajectory, period: f64) -> Result<Trajectory> {
    if traj.len() < 2 {
        return Err(Error::Config("trajectory too short to average".into()));
    }
    let dt_sample = traj.times[1] - traj.times[0];
    let window = (period / dt_sample).round() as usize;
    if window < 1 || window > traj.len() {
        return Err(Error::Config(format!(
            "averaging window of {period} time units needs more samples than the trajectory has"
        )));
    }

    // Unwrap the angle once over the whole trajectory.
    let mut unwrapped = Vec::with_capacity(traj.len());
    let mut offset = 0.0;
    let mut prev = traj.phi[0];
    unwrapped.push(prev);
    for &raw in &traj.phi[1..] {
        let mut d = raw - prev;
        if d > std::f64::consts::PI {
            d -= TAU;
        } else if d < -std::f64::consts::PI {
            d += TAU;
        }
        offset += d;
        prev = raw;
        unwrapped.push(traj.phi[0] + offset);
    }

    let frame = RotatingFrame::centered(&traj.params);
    let n_out = traj.len() - window + 1;
    let mut out = Trajectory {
        times: Vec::with_capacity(n_out),
        x: Vec::with_capacity(n_out),
        p: Vec::with_capacity(n_out),
        j: Vec::with_capacity(n_out),
        phi: Vec::with_capacity(n_out),
        params: traj.params,
    };
    let inv = 1.0 / window as f64;
    let mut j_sum: f64 = traj.j[..window].iter().sum();
    let mut phi_sum: f64 = unwrapped[..window].iter().sum();
    let mut t_sum: f64 = traj.times[..window].iter().sum();
    let emit = |t: f64, j: f64, phi: f64, out: &mut Trajectory| {
        let (x, p) = frame.from_action_angle(crate::frame::PhasePoint { j, phi }, t);
        out.times.push(t);
        out.x.push(x);
        out.p.push(p);
        out.j.push(j);
        out.phi.push(phi);
    };
    emit(t_sum * inv, j_sum * inv, phi_sum * inv, &mut out);
    for i in window..traj.len() {
        j_sum += traj.j[i] - traj.j[i - window];
        phi_sum += unwrapped[i] - unwrapped[i - window];
        t_sum += traj.times[i] - traj.times[i - window];
        emit(t_sum * inv, j_sum * inv, phi_sum * inv, &mut out);
    }
    Ok(out)
}
