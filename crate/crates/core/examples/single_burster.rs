//! One uncoupled burster: onset well after u = 0, offset near the fold at
//! u = −1, and tonic spiking once the slow nullcline sits above the fold.
//!
//! cargo run --release --example single_burster

use elliptic_sync::integrator::{simulate_network, IntegratorConfig};
use elliptic_sync::model::{CouplingSpec, ModelParams, NetworkState};
use elliptic_sync::synchrony::{burst_shapes, min_radius_after, DetectionConfig};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = IntegratorConfig {
        rel_tol: 1e-10,
        t_end: 400.0,
        sample_dt: 0.005,
        ..IntegratorConfig::default()
    };
    let s0 = NetworkState::from_parts(&[Complex64::new(0.01, 0.0)], &[-0.5])?;
    let k = CouplingSpec::uncoupled(1);

    let bursting = ModelParams::new(3.0, 0.8, 0.1, 0.0, 1.35)?;
    let traj = simulate_network(&bursting, &k, &s0, &cfg)?;
    println!("a = 0.8: {} samples", traj.len());
    for s in burst_shapes(&traj, 0, &DetectionConfig::default(), 0.5, -1.0)? {
        println!(
            "  burst at t = {:7.2}: onset u = {:+.4}, last spike r = {:.4}, ends at u = {:+.4}",
            s.t_start,
            s.onset_u,
            s.last_spike_r.unwrap_or(f64::NAN),
            s.end_u
        );
    }

    let tonic = ModelParams { a: 1.2, ..bursting };
    let traj = simulate_network(&tonic, &k, &s0, &cfg)?;
    println!("a = 1.2: smallest radius after transient = {:.4}", min_radius_after(&traj, 0.2));
    Ok(())
}
