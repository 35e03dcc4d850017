//! Miniature localization heatmap: sweep a few interaction strengths and
//! anharmonicities, evolving each cell and reducing to the late-time
//! sigma_x sigma_p metric. Desk-scale version of the phase-diagram runs.
//!
//!     cargo run --release --example localization_sweep

use std::sync::Arc;

use bectrap::gpe::{evolve, localization_metric, SplitStepConfig};
use bectrap::{make_initial_state, ModelParams, SpatialGrid};

fn main() -> bectrap::Result<()> {
    let u_values = [-0.3, 0.1, 0.5];
    let beta_values = [1.5e-4, 2.5e-4];
    let t_final = 400.0;
    let window = (300.0, 400.0);

    let grid = Arc::new(SpatialGrid::new(1024, 25.0)?);
    println!("late-time sigma_x sigma_p over t in [{}, {}]:", window.0, window.1);
    print!("{:>12}", "beta \\ u");
    for u in u_values {
        print!("{u:>10.2}");
    }
    println!();
    for beta in beta_values {
        print!("{beta:>12.1e}");
        for u in u_values {
            let params = ModelParams::new(u, beta, -8.0);
            let state = make_initial_state(&grid, params.x_c)?;
            let cfg = SplitStepConfig {
                dt: 5e-3,
                t_final,
                snapshot_interval: None,
                observable_interval: 1.0,
            };
            let ev = evolve(&state, &params, &cfg)?;
            let metric = localization_metric(&ev.series, window)?;
            print!("{metric:>10.2}");
        }
        println!();
    }
    println!("\nsmall values = localized packet, large values = spread over the trap");
    Ok(())
}
