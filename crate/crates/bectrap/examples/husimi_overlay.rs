//! Husimi function of the initial packet overlaid on the classical
//! separatrix: how much of the state starts inside the confinement island.
//!
//!     cargo run --release --example husimi_overlay

use std::sync::Arc;

use bectrap::classical::{confinement_fraction, AveragedPhaseMap, MapConfig};
use bectrap::phase_space::{overlay_report, Recenter};
use bectrap::{make_initial_state, ModelParams, SpatialGrid};

fn main() -> bectrap::Result<()> {
    let grid = Arc::new(SpatialGrid::new(1024, 25.0)?);
    for &u in &[0.5, 0.1] {
        let params = ModelParams::new(u, 2e-4, -8.0);
        let map = AveragedPhaseMap::compute(
            &params,
            &MapConfig {
                n_phi: 300,
                n_j: 300,
                ..MapConfig::default()
            },
        )?;
        let state = make_initial_state(&grid, params.x_c)?;
        let report = overlay_report(&state, &map, Recenter::None)?;
        let f = confinement_fraction(&params, map.separatrix.as_ref(), 1, 100_000);
        println!("u = {u}:");
        println!(
            "    Husimi peak at (phi, J) = ({:+.3}, {:.2}), Q = {:.4}",
            report.peak.0, report.peak.1, report.peak.2
        );
        println!(
            "    inside the separatrix: {:.1}% of the Husimi mass; Wigner F = {:.3}",
            100.0 * report.inside_fraction,
            f.f
        );
    }
    Ok(())
}
