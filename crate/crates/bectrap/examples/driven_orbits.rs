//! Classical test particles driven by the orbiting Gaussian potential: the
//! fast orbit wiggles around a slow drift that rides contours of the
//! averaged Hamiltonian.
//!
//!     cargo run --release --example driven_orbits

use std::f64::consts::TAU;

use bectrap::classical::avg_hamiltonian;
use bectrap::trajectories::{integrate_trajectory, slow_component};
use bectrap::{wrap_angle, ModelParams, PhasePoint, RotatingFrame};

fn main() -> bectrap::Result<()> {
    let params = ModelParams::new(-0.20, 2e-4, -8.0);
    let frame = RotatingFrame::centered(&params);
    let period = TAU / frame.omega;

    for (j0, phi0) in [(40.0, 0.0), (24.0, 0.0), (56.0, 0.0)] {
        let (x0, p0) = frame.from_action_angle(PhasePoint { j: j0, phi: phi0 }, 0.0);
        let traj = integrate_trajectory((x0, p0), &params, 300.0, 1e-3, 10)?;
        let slow = slow_component(&traj, period)?;
        let h0 = avg_hamiltonian(slow.j[0], wrap_angle(slow.phi[0]), &params);
        let mut worst = 0.0f64;
        for i in 0..slow.len() {
            let h = avg_hamiltonian(slow.j[i], wrap_angle(slow.phi[i]), &params);
            worst = worst.max(((h - h0) / h0).abs());
        }
        println!(
            "start (J, phi) = ({j0:5.1}, {phi0:+.1}): <H> = {h0:+.5}, slow drift J {:5.2} -> {:5.2}, max <H> variation {:.2}%",
            slow.j[0],
            slow.j.last().unwrap(),
            100.0 * worst
        );
    }
    println!("(the slow components ride contours of the averaged Hamiltonian)");
    Ok(())
}
