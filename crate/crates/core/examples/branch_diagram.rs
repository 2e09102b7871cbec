//! Equilibria of the frozen-u fast subsystem of a pair, traced against u.
//! Prints the u-ranges where the symmetric states are stable and writes the
//! branch points as CSV to stdout when given `--csv`.
//!
//! cargo run --release --example branch_diagram [-- --csv]

use elliptic_sync::model::{CouplingSpec, ModelParams};
use elliptic_sync::scan::{branch_diagram, Grid};
use elliptic_sync::stability::{BranchTag, SeedGrid};

fn range(us: &[f64]) -> String {
    match (us.iter().copied().reduce(f64::min), us.iter().copied().reduce(f64::max)) {
        (Some(lo), Some(hi)) => format!("[{lo:+.3}, {hi:+.3}]"),
        _ => "none".into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ModelParams::new(3.0, 0.8, 0.05, 3.0, 1.35)?;
    let k = CouplingSpec::all_to_all(2, 0.001, 0.2);
    let d = branch_diagram(&Grid::new(-0.99, -0.01, 99)?, &p, &k, &SeedGrid::default());

    if std::env::args().any(|a| a == "--csv") {
        println!("branch,u,r_l,r_t,phi,tag,stability");
        for (bi, br) in d.branches.iter().enumerate() {
            for &(g, i) in br {
                let e = &d.points[g][i];
                println!(
                    "{bi},{},{},{},{},{},{}",
                    e.u,
                    e.r_l,
                    e.r_t,
                    e.phi,
                    e.branch.as_str(),
                    e.classification.as_str()
                );
            }
        }
        return Ok(());
    }
    println!("{} branches, {} equilibria", d.branches.len(), d.all_points().count());
    println!("stable inphase   u in {}", range(&d.stable_u(BranchTag::Inphase)));
    println!("stable antiphase u in {}", range(&d.stable_u(BranchTag::Antiphase)));
    Ok(())
}
