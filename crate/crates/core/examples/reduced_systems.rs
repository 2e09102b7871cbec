//! The burst-synchronized pair in (r₁, r₂, φ, u) and in longitudinal /
//! transverse coordinates: the same vector field seen two ways, and the
//! symmetric-subspace branch the stability analysis starts from.
//!
//! cargo run --release --example reduced_systems

use elliptic_sync::constrained::{eval_lt_field, eval_reduced_field, r1r2_to_lt, ReducedState};
use elliptic_sync::model::{CouplingSpec, ModelParams};
use elliptic_sync::stability::{classify_branch, solve_branch_r, BranchTag};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ModelParams::new(3.0, 0.8, 0.05, 3.0, 1.35)?;
    let k = CouplingSpec::all_to_all(2, 0.001, 0.2);

    let s = ReducedState::new(1.3, 1.1, 0.4, -0.3)?;
    let f = eval_reduced_field(&s, &p, &k)?;
    let lt = r1r2_to_lt(&s)?;
    let g = eval_lt_field(&lt, &p, &k)?;
    println!("(r1, r2) rates: {:+.6} {:+.6}   phi rate {:+.6}", f.r1, f.r2, f.phi);
    println!(
        "(r_l, r_t) rates: {:+.6} {:+.6}  = half sum / half difference {:+.6} {:+.6}",
        g.r_l,
        g.r_t,
        0.5 * (f.r1 + f.r2),
        0.5 * (f.r1 - f.r2)
    );

    println!("\n   u      r_in   inphase        r_anti antiphase");
    for i in 0..9 {
        let u = -0.9 + 0.1 * i as f64;
        let ri = solve_branch_r(u, BranchTag::Inphase, &k)?;
        let ra = solve_branch_r(u, BranchTag::Antiphase, &k)?;
        let ci = classify_branch(BranchTag::Inphase, u, &p, &k)?;
        let ca = classify_branch(BranchTag::Antiphase, u, &p, &k)?;
        println!("{u:+.2}  {ri:.4}  {:<14} {ra:.4}  {}", ci.as_str(), ca.as_str());
    }
    Ok(())
}
