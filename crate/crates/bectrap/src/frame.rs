//! Action-angle variables of the unit-frequency oscillator and the rotating
//! frame co-moving with the displaced packet.
//!
//! Conventions used everywhere in this crate:
//! `x = sqrt(2J) sin(theta)`, `p = sqrt(2J) cos(theta)`, and the rotating
//! angle is `phi = theta - Omega t` (raw frame) or `phi = theta - Omega t -
//! theta_c` (centered frame, which puts the packet center at `phi = 0`).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::params::ModelParams;

/// Reduce an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// A point in `(J, phi)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub j: f64,
    pub phi: f64,
}

/// Map `(x, p)` at time `t` into the rotating frame at frequency `omega`,
/// with no angular offset. At the phase-space origin the angle is fixed to 0.
pub fn to_action_angle(x: f64, p: f64, t: f64, omega: f64) -> PhasePoint {
    let j = 0.5 * (x * x + p * p);
    if j == 0.0 {
        return PhasePoint { j: 0.0, phi: 0.0 };
    }
    PhasePoint {
        j,
        phi: wrap_angle(f64::atan2(x, p) - omega * t),
    }
}

/// Inverse of [`to_action_angle`].
pub fn from_action_angle(pt: PhasePoint, t: f64, omega: f64) -> (f64, f64) {
    let theta = pt.phi + omega * t;
    let r = (2.0 * pt.j).sqrt();
    (r * theta.sin(), r * theta.cos())
}

/// Rotating frame with an angular offset `theta_c` chosen so that the
/// initial packet center sits at `phi = 0`. All phase-space figures and the
/// averaged model use this frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingFrame {
    pub omega: f64,
    pub theta_c: f64,
}

impl RotatingFrame {
    /// Frame for a scenario: `omega = 1 + delta_omega`, and `theta_c` is the
    /// initial angle of the packet center (`-pi/2` for `x_c < 0`).
    pub fn centered(params: &ModelParams) -> Self {
        let theta_c = if params.x_c < 0.0 {
            -FRAC_PI_2
        } else if params.x_c > 0.0 {
            FRAC_PI_2
        } else {
            0.0
        };
        Self {
            omega: params.omega(),
            theta_c,
        }
    }

    pub fn to_action_angle(&self, x: f64, p: f64, t: f64) -> PhasePoint {
        let j = 0.5 * (x * x + p * p);
        if j == 0.0 {
            return PhasePoint { j: 0.0, phi: 0.0 };
        }
        PhasePoint {
            j,
            phi: wrap_angle(f64::atan2(x, p) - self.omega * t - self.theta_c),
        }
    }

    pub fn from_action_angle(&self, pt: PhasePoint, t: f64) -> (f64, f64) {
        let theta = pt.phi + self.omega * t + self.theta_c;
        let r = (2.0 * pt.j).sqrt();
        (r * theta.sin(), r * theta.cos())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn displaced_packet_angle() {
        let pt = to_action_angle(-8.0, 0.0, 0.0, 1.0);
        assert_eq!(pt.j, 32.0);
        assert!((pt.phi + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn origin_uses_zero_angle() {
        let pt = to_action_angle(0.0, 0.0, 17.3, 1.0048);
        assert_eq!(pt.j, 0.0);
        assert_eq!(pt.phi, 0.0);
    }

    #[test]
    fn centered_frame_puts_packet_at_zero() {
        let params = ModelParams::new(0.5, 2e-4, -8.0);
        let frame = RotatingFrame::centered(&params);
        let pt = frame.to_action_angle(-8.0, 0.0, 0.0);
        assert!((pt.phi).abs() < 1e-15);
        assert_eq!(pt.j, 32.0);
        let (x, p) = frame.from_action_angle(PhasePoint { j: 32.0, phi: 0.0 }, 0.0);
        assert!((x + 8.0).abs() < 1e-12);
        assert!(p.abs() < 1e-12);
    }

    #[test]
    fn round_trip_thousand_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let omega = 1.0048;
        for _ in 0..1000 {
            let j = rng.gen_range(1e-6..100.0);
            let phi = rng.gen_range(-PI..PI);
            let t = rng.gen_range(0.0..2000.0);
            let (x, p) = from_action_angle(PhasePoint { j, phi }, t, omega);
            let back = to_action_angle(x, p, t, omega);
            assert!((back.j - j).abs() < 1e-12 * j.max(1.0), "j {} vs {}", back.j, j);
            assert!(wrap_angle(back.phi - phi).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn wrap_angle_stays_in_range(a in -1e6f64..1e6) {
            let w = wrap_angle(a);
            prop_assert!(w > -PI && w <= PI);
            // Same angle modulo 2 pi.
            prop_assert!(((a - w).rem_euclid(TAU)).min((w - a).rem_euclid(TAU)) < 1e-6);
        }
    }
}
