//! Physical parameters of one scenario.

use serde::{Deserialize, Serialize};

/// Interaction strength `u`, anharmonicity `beta` and initial displacement
/// `x_c`, all dimensionless in harmonic-oscillator units. The derived
/// quantities (resonant action, secular frequency shift) are methods so they
/// can never drift out of sync with the raw fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub u: f64,
    pub beta: f64,
    pub x_c: f64,
}

impl ModelParams {
    pub fn new(u: f64, beta: f64, x_c: f64) -> Self {
        Self { u, beta, x_c }
    }

    /// Action of the packet-center orbit, `J_c = x_c^2 / 2`.
    pub fn j_c(&self) -> f64 {
        self.x_c * self.x_c / 2.0
    }

    /// Secular shift of the orbit frequency, `(3/4) beta J_c`.
    pub fn delta_omega(&self) -> f64 {
        0.75 * self.beta * self.j_c()
    }

    /// Rotating-frame frequency `Omega = 1 + delta_omega`.
    pub fn omega(&self) -> f64 {
        1.0 + self.delta_omega()
    }

    /// Same scenario with both `u` and `beta` negated.
    pub fn sign_flipped(&self) -> Self {
        Self {
            u: -self.u,
            beta: -self.beta,
            x_c: self.x_c,
        }
    }
}
