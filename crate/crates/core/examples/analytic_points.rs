//! Where the inphase and antiphase states change stability, three ways:
//! first-order asymptotics, the closed-form determinant zero, and bisection
//! along the branch. Both signs of κ₂ are shown; they swap the two states.
//!
//! cargo run --release --example analytic_points

use elliptic_sync::model::{CouplingSpec, ModelParams};
use elliptic_sync::scan::det_zero_bisect;
use elliptic_sync::stability::{asymptotic_points, exact_det_zero, BranchTag};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ModelParams::new(3.0, 0.8, 0.05, 3.0, 1.35)?;
    for kappa2 in [0.2, -0.2] {
        let k = CouplingSpec::all_to_all(2, 0.0, kappa2);
        let a = asymptotic_points(&p, &k)?;
        println!("kappa2 = {kappa2:+}");
        println!(
            "  asymptotic  r_in = {:.4}  r_anti = {:.4}  u_in = {:.4}  u_anti = {:.4}",
            a.r_in, a.r_anti, a.u_in, a.u_anti
        );
        for tag in [BranchTag::Inphase, BranchTag::Antiphase] {
            let exact = exact_det_zero(&p, &k, tag)?;
            let bis = det_zero_bisect(tag, (-0.99, -0.01), &p, &k)?;
            println!(
                "  {:<9}  exact (r, u) = ({:.7}, {:.7})  bisection (r, u) = ({:.7}, {:.7})",
                tag.as_str(),
                exact.r,
                exact.u,
                bis.r,
                bis.u
            );
        }
    }
    Ok(())
}
