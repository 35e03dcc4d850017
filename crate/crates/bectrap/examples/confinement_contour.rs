//! Coarse map of the confinement fraction F over the (u, beta) plane with
//! its F = 0.9 level contour: the theory line separating parameter regions
//! of localized and delocalized late-time behaviour.
//!
//!     cargo run --release --example confinement_contour

use bectrap::classical::{f_contour, FContourSpec, MapConfig};

fn main() -> bectrap::Result<()> {
    let mut spec = FContourSpec::new((-0.5, 0.5, 9), (0.5e-4, 3e-4, 6), -8.0);
    spec.map = MapConfig {
        n_phi: 250,
        n_j: 250,
        ..MapConfig::default()
    };
    spec.mc_samples = 20_000;
    let result = f_contour(&spec)?;

    println!("F(u, beta), x_c = -8:");
    print!("{:>10}", "beta \\ u");
    for &u in &result.u {
        print!("{u:>7.2}");
    }
    println!();
    for (ib, &beta) in result.beta.iter().enumerate() {
        print!("{beta:>10.1e}");
        for iu in 0..result.u.len() {
            print!("{:>7.3}", result.f[iu * result.beta.len() + ib].f);
        }
        println!();
    }
    println!("\nF = 0.9 contour polylines ({} found):", result.contours.len());
    for (i, c) in result.contours.iter().enumerate() {
        let (u0, b0) = c[0];
        let (u1, b1) = c[c.len() - 1];
        println!(
            "    #{i}: {} vertices from (u, beta) = ({u0:.3}, {b0:.2e}) to ({u1:.3}, {b1:.2e})",
            c.len()
        );
    }
    Ok(())
}
