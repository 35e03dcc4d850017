//! Build the averaged-resonance model for one parameter set: tabulate the
//! averaged Hamiltonian, classify its fixed points, trace the separatrix and
//! estimate the confinement fraction.
//!
//!     cargo run --release --example classical_phase_map

use bectrap::classical::{confinement_fraction, AveragedPhaseMap, MapConfig};
use bectrap::ModelParams;

fn main() -> bectrap::Result<()> {
    for &u in &[-0.20, -0.02, 0.10, 0.5] {
        let params = ModelParams::new(u, 2e-4, -8.0);
        let map = AveragedPhaseMap::compute(&params, &MapConfig::default())?;
        println!("u = {u:+.2}, beta = 2e-4, J_c = {}:", params.j_c());
        for p in &map.fixed_points.points {
            println!(
                "    fixed point at (J, phi) = ({:7.3}, {:+.3})  {:?}  <H> = {:+.5}",
                p.j, p.phi, p.kind, p.h
            );
        }
        match &map.separatrix {
            Some(sep) => {
                let f = confinement_fraction(&params, Some(sep), 1, 100_000);
                println!(
                    "    separatrix through the saddle at J = {:.2}: area {:.2}, {} vertices",
                    sep.saddle.j,
                    sep.area,
                    sep.points().len()
                );
                println!("    confinement fraction F = {:.4} +/- {:.4}", f.f, f.stderr);
            }
            None => println!("    no confining separatrix"),
        }
        println!();
    }
    Ok(())
}
