//! Three all-to-all coupled bursters whose spikes start each burst in a splay
//! state and end it inphase, tracked through the Kuramoto order parameter.
//!
//! cargo run --release --example three_bursters

use elliptic_sync::integrator::{simulate_network, IntegratorConfig};
use elliptic_sync::model::{CouplingSpec, ModelParams, NetworkState};
use elliptic_sync::synchrony::{detect_transitions, DetectionConfig};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ModelParams::new(0.1, 0.8, 0.005, 5.0, 1.35)?;
    let k = CouplingSpec::all_to_all(3, -0.001, -0.2);
    let z0 = Complex64::new(1e-3, 0.0);
    let s0 = NetworkState::from_parts(&[z0; 3], &[-0.5; 3])?;
    let cfg = IntegratorConfig {
        t_end: 8000.0,
        sample_dt: 0.05,
        noise_amplitude: 1e-5,
        rng_seed: 1,
        ..IntegratorConfig::default()
    };
    let traj = simulate_network(&p, &k, &s0, &cfg)?;
    let report = detect_transitions(&traj, &DetectionConfig::default())?;
    for b in &report.bursts {
        let r: Vec<f64> = b.windows.iter().map(|w| w.order).collect();
        let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let t: Vec<String> = b.transitions.iter().map(|t| format!("{}->{}", t.from, t.to)).collect();
        println!(
            "burst {} (u {:+.3} -> {:+.3}): order parameter {lo:.2}..{hi:.2}, {}",
            b.index,
            b.u_start,
            b.u_end,
            t.join(", ")
        );
    }
    Ok(())
}
