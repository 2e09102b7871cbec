//! Delay of the simulated inphase-to-antiphase switch behind the frozen-u
//! prediction. The full network switches at a more negative u.
//!
//! cargo run --release --example slow_passage

use elliptic_sync::integrator::{simulate_network, IntegratorConfig};
use elliptic_sync::model::{CouplingSpec, ModelParams, NetworkState};
use elliptic_sync::scan::det_zero_bisect;
use elliptic_sync::stability::BranchTag;
use elliptic_sync::synchrony::{slow_passage_offset, DetectionConfig};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ModelParams::new(0.0003, 0.8, 0.005, 3.0, 1.35)?;
    let k = CouplingSpec::all_to_all(2, 0.001, 0.2);
    let u_in = det_zero_bisect(BranchTag::Inphase, (-0.99, -0.01), &p, &k)?.u;
    println!("frozen-u inphase loss of stability: u_in = {u_in:.4}");

    let z0 = Complex64::new(1e-3, 0.0);
    let s0 = NetworkState::from_parts(&[z0, z0], &[-0.5, -0.5])?;
    for noise in [1e-5, 1e-3] {
        let cfg = IntegratorConfig {
            t_end: 20000.0,
            sample_dt: 0.05,
            noise_amplitude: noise,
            rng_seed: 1,
            ..IntegratorConfig::default()
        };
        let traj = simulate_network(&p, &k, &s0, &cfg)?;
        let du = slow_passage_offset(&traj, &DetectionConfig::default(), u_in)?;
        println!("noise {noise:e}: mean offset u(transition) - u_in = {du:+.4}");
    }
    Ok(())
}
