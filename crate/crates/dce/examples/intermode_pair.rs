//! Intermode transfer: in a cubic cavity the lowest mode and the mode with
//! triple its frequency satisfy ω₂ - ω₁ = 2ω₁ ≈ Ω, so the intermode
//! coupling becomes resonant and photons pile up in both modes together.
//!
//!     cargo run --release -p dce --example intermode_pair

use std::f64::consts::PI;
use std::sync::Arc;

use dce::cavity_modes::{CouplingSchedule, IntermodeFn, ModeWaveform};
use dce::squeezing::{integrate, intermode_resonant_pair, IntegrationOptions};
use ndarray::Array2;
use num_complex::Complex64;

fn main() {
    // the classic pair: (1,1,1) and (1,1,5) have norms sqrt(3) and sqrt(27)
    for pair in [[1, 1, 5], [1, 1, 2], [3, 3, 3]] {
        let check = intermode_resonant_pair([1, 1, 1], pair).unwrap();
        println!(
            "modes (1,1,1) vs ({},{},{}): frequency ratio {:.4} -> {}",
            pair[0],
            pair[1],
            pair[2],
            check.ratio,
            if check.resonant { "resonant" } else { "off resonance" }
        );
    }

    // squeeze mode 1 at Omega = 2 w1 and couple it to mode 2 at w2 = 3 w1
    let omega_drive = 2.0;
    let period = 2.0 * PI / omega_drive;
    let pulse = move |t: f64| 1.0 - (omega_drive * t).cos();
    let mode1 = ModeWaveform::new(1.0, |_| 0.0, move |t| Complex64::new(0.0, 0.01) * pulse(t));
    let mode2 = ModeWaveform::idle(3.0);
    let intermode: IntermodeFn = Arc::new(move |t| {
        let mut m = Array2::zeros((2, 2));
        m[(0, 1)] = Complex64::new(0.01, 0.0) * pulse(t);
        m[(1, 0)] = m[(0, 1)].conj();
        m
    });
    let schedule =
        CouplingSchedule::multimode(vec![mode1, mode2], Some(intermode)).with_drive_period(period);

    let opts = IntegrationOptions::for_pulse_period(period)
        .with_step(period / 500.0)
        .with_stride(25)
        .with_tolerance(1e-8);
    let traj = integrate(&schedule, 300.0 * period, &opts).unwrap();

    println!("\n{:>6} {:>13} {:>13} {:>8}", "pulse", "n_1", "n_2", "n_1/n_2");
    for (m, s) in traj.stroboscopic().iter().enumerate() {
        if m % 30 == 0 && m > 0 {
            let n1 = s.photon_number(0).unwrap();
            let n2 = s.photon_number(1).unwrap();
            println!("{m:>6} {n1:>13.4e} {n2:>13.4e} {:>8.2}", n1 / n2);
        }
    }
    println!(
        "\nboth occupations grow together; multimode symplectic residual {:.2e}",
        traj.max_drift
    );
}
