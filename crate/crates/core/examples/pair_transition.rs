//! Two noisy coupled bursters and the within-burst synchrony labels found by
//! the window classifier. Arguments: κ₂ (default 0.2), η (default 0.05), seed.
//!
//! cargo run --release --example pair_transition -- 0.2 0.005 1

use elliptic_sync::integrator::{simulate_network, IntegratorConfig};
use elliptic_sync::model::{CouplingSpec, ModelParams, NetworkState};
use elliptic_sync::synchrony::{detect_transitions, DetectionConfig, SyncLabel};
use num_complex::Complex64;

fn letter(l: SyncLabel) -> char {
    match l {
        SyncLabel::Inphase => 'I',
        SyncLabel::Antiphase => 'A',
        SyncLabel::Splay => 'S',
        SyncLabel::Mixed => '.',
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let kappa2 = args.first().copied().unwrap_or(0.2);
    let eta = args.get(1).copied().unwrap_or(0.05);
    let seed = args.get(2).copied().unwrap_or(1.0) as u64;
    // Slower slow dynamics need a slower base frequency and a longer run for the same number of bursts.
    let (omega, t_end) = if eta < 0.01 { (0.0003, 20000.0) } else { (0.01, 3000.0) };

    let p = ModelParams::new(omega, 0.8, eta, 3.0, 1.35)?;
    let k = CouplingSpec::all_to_all(2, 0.001, kappa2);
    let z0 = Complex64::new(1e-3, 0.0);
    let s0 = NetworkState::from_parts(&[z0, z0], &[-0.5, -0.5])?;
    let cfg = IntegratorConfig {
        dt: 1e-3,
        t_end,
        sample_dt: 0.05,
        noise_amplitude: 1e-5,
        rng_seed: seed,
        ..IntegratorConfig::default()
    };
    let traj = simulate_network(&p, &k, &s0, &cfg)?;
    let report = detect_transitions(&traj, &DetectionConfig::default())?;
    println!("I inphase, A antiphase, . mixed; one letter per window");
    for b in &report.bursts {
        let labels: String = b.windows.iter().map(|w| letter(w.label)).collect();
        let first = b
            .transitions
            .first()
            .map(|t| format!("{} -> {} at u = {:+.3}", t.from, t.to, t.u_mean))
            .unwrap_or_else(|| "no transition".into());
        println!("t = {:8.1}  {first:32} {labels}", b.t_start);
    }
    Ok(())
}
