//! Scan the pulse frequency Ω and locate the growth resonance. Because the
//! drive also shifts the mode frequency on average, the peak sits at
//! Ω = 2(ω₀ + ⟨δω⟩), not at the naive 2ω₀.
//!
//!     cargo run --release -p dce --example resonance_scan

use dce::squeezing::{integrate, resonance_frequency, DriveSpec, IntegrationOptions};
use num_complex::Complex64;
use rayon::prelude::*;

fn main() {
    let mean_delta_omega = 0.02;
    let g_fourier = Complex64::new(0.0, 0.005);
    let n_pulses = 300;

    let omegas: Vec<f64> = (0..=40).map(|i| 2.0 + 0.002 * i as f64).collect();
    let results: Vec<(f64, f64)> = omegas
        .par_iter()
        .map(|&omega_drive| {
            let detuning = omega_drive / 2.0 - 1.0 - mean_delta_omega;
            let drive =
                DriveSpec::with_detuning(1.0, mean_delta_omega, g_fourier, detuning, n_pulses);
            let traj = integrate(
                &drive.default_schedule(),
                drive.t1(),
                &IntegrationOptions::for_drive(&drive),
            )
            .unwrap();
            (omega_drive, traj.final_state().photon_number(0).unwrap())
        })
        .collect();

    println!("{:>10} {:>14}", "Omega/w0", "n after 300");
    for (omega, n) in &results {
        // crude log-scale bar
        let bar = "#".repeat(((n.max(1e-2)).log10() + 2.0).max(0.0) as usize * 3);
        println!("{omega:>10.3} {n:>14.4e}  {bar}");
    }

    let peak = results
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    println!(
        "\npeak at Omega = {:.3} omega0; predicted resonance 2(omega0 + <dw>) = {:.3} omega0",
        peak.0,
        resonance_frequency(1.0, mean_delta_omega)
    );
}
