//! The integrators work on any `VectorField`. Here a van der Pol oscillator is
//! solved with the adaptive Dormand–Prince scheme and with additive noise, and
//! a sampled trajectory is compared against dense output.
//!
//! cargo run --release --example custom_vector_field

use elliptic_sync::integrator::{integrate, integrate_dense, DenseOutput, FnField, IntegratorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mu = 2.0;
    let vdp = FnField::new(2, move |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = mu * (1.0 - y[0] * y[0]) * y[1] - y[0];
    });
    let y0 = [2.0, 0.0];

    let cfg = IntegratorConfig {
        t_end: 20.0,
        sample_dt: 0.5,
        ..IntegratorConfig::default()
    };
    let dense = integrate_dense(&vdp, &y0, &cfg)?;
    println!("adaptive: {} accepted steps", dense.n_steps());
    let mut y = [0.0; 2];
    dense.eval_into(7.25, &mut y)?;
    println!("dense output at t = 7.25: x = {:+.6}, y = {:+.6}", y[0], y[1]);

    let noisy = IntegratorConfig {
        noise_amplitude: 0.05,
        rng_seed: 42,
        ..cfg
    };
    let a = integrate(&vdp, &y0, &cfg)?;
    let b = integrate(&vdp, &y0, &noisy)?;
    println!("   t   deterministic x   noisy x");
    for i in (0..a.len()).step_by(8) {
        println!("{:5.1}   {:+.6}         {:+.6}", a.times[i], a.row(i)[0], b.row(i)[0]);
    }
    Ok(())
}
