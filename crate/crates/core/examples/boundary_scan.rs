//! Two-parameter stability boundaries: the bistable band between the inphase
//! and antiphase stability changes narrows as σ grows.
//!
//! cargo run --release --example boundary_scan

use elliptic_sync::model::{CouplingSpec, ModelParams};
use elliptic_sync::scan::{boundary_scan, Grid, ScanPlane};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ModelParams::new(3.0, 0.8, 0.05, 3.0, 1.35)?;
    let k = CouplingSpec::all_to_all(2, 0.001, 0.2);
    let b = boundary_scan(
        ScanPlane::Sigma,
        &Grid::new(2.0, 6.0, 9)?,
        &Grid::new(-0.99, -0.01, 197)?,
        &p,
        &k,
    )?;
    println!("{:>6} {:>10} {:>10} {:>8}  regions (high u to low u)", "sigma", "u_in", "u_anti", "width");
    for row in &b.rows {
        let labels: Vec<&str> = row.regions.iter().rev().map(|r| r.2.as_str()).collect();
        println!(
            "{:6.2} {:10.5} {:10.5} {:8.5}  {}",
            row.lambda,
            row.first_u_in().unwrap_or(f64::NAN),
            row.first_u_anti().unwrap_or(f64::NAN),
            row.bistable_width(),
            labels.join(" ")
        );
    }
    Ok(())
}
