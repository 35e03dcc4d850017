//! Integrate a displaced Gaussian wavepacket in the anharmonic trap and
//! watch its width observables.
//!
//!     cargo run --release --example evolve_wavepacket

use std::sync::Arc;

use bectrap::gpe::{evolve, SplitStepConfig};
use bectrap::{make_initial_state, ModelParams, SpatialGrid};

fn main() -> bectrap::Result<()> {
    let grid = Arc::new(SpatialGrid::new(1024, 25.0)?);
    let params = ModelParams::new(0.5, 1.89e-4, -8.0);
    let state = make_initial_state(&grid, params.x_c)?;
    let cfg = SplitStepConfig {
        dt: 5e-3,
        t_final: 200.0,
        snapshot_interval: None,
        observable_interval: 1.0,
    };

    println!(
        "evolving u = {}, beta = {:.2e}, x_c = {} to t = {}",
        params.u, params.beta, params.x_c, cfg.t_final
    );
    let ev = evolve(&state, &params, &cfg)?;
    println!("{:>8} {:>10} {:>10} {:>12} {:>14}", "t", "sigma_x", "sigma_p", "norm-1", "energy");
    for i in (0..ev.series.len()).step_by(20) {
        println!(
            "{:8.1} {:10.5} {:10.5} {:12.2e} {:14.8}",
            ev.series.times[i],
            ev.series.sigma_x[i],
            ev.series.sigma_p[i],
            ev.series.norm[i] - 1.0,
            ev.series.energy[i]
        );
    }
    let drift = (ev.series.energy.last().unwrap() - ev.series.energy[0]).abs()
        / ev.series.energy[0].abs();
    println!("relative energy drift: {drift:.2e}");
    Ok(())
}
