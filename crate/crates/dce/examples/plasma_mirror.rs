//! From slab physics to Hamiltonian couplings: a laser-pulsed semiconductor
//! slab in the middle of the cavity, its effective wall displacements, the
//! resulting ω(t), g(t) schedule, and the in-slab dispersion relation.
//!
//!     cargo run --release -p dce --example plasma_mirror

use std::f64::consts::PI;
use std::sync::Arc;

use dce::cavity_modes::{
    coupling_schedule, dispersion_check, displacements_by_quadrature, plasma_displacements,
    SlabCavityConfig,
};

fn main() {
    let omega_drive = 2.0 * PI; // pulse period T = 1 in cavity units
    // peak surface density chosen so n_s e²/(m* ε₀) L = 1 at full power,
    // which puts the conductivity displacement at δ_m ≈ 0.1 L
    let cfg = SlabCavityConfig {
        cavity_length: 1.0,
        slab_position: 0.5,
        slab_thickness: 1e-3,
        epsilon0: 1.0,
        epsilon1: Arc::new(|_| 4.0),
        surface_density: Arc::new(move |t| 0.5 * (1.0 - (omega_drive * t).cos())),
        charge_sq_over_mass: 1.0,
        mode_wavenumber: PI,
        k_perp: 0.0,
    }
    .validated()
    .unwrap();

    let omega0 = cfg.omega0();
    println!("mode: k = pi/L, omega0 = {omega0:.4} (cavity units)");

    let t_peak = PI / omega_drive; // pulse maximum
    let d = plasma_displacements(&cfg, t_peak).unwrap();
    let q = displacements_by_quadrature(&cfg, t_peak, 1024).unwrap();
    println!("\neffective wall displacements at the pulse peak:");
    println!("  delta_m / L   = {:.5}  (thin slab)", d.delta_m / cfg.cavity_length);
    println!("  delta_m / L   = {:.5}  (quadrature cross-check)", q.delta_m / cfg.cavity_length);
    println!(
        "  delta_eps / L = {:.5}  (constant epsilon1 -> no dielectric part)",
        d.delta_eps / cfg.cavity_length + 0.0
    );

    let schedule = coupling_schedule(&cfg).unwrap();
    println!("\ncoupling schedule over one pulse:");
    println!("{:>8} {:>12} {:>12} {:>12}", "t/T", "dw/omega0", "|g|/omega0", "validity");
    for i in 0..=8 {
        let t = i as f64 / 8.0;
        let dw = schedule.delta_omega(0, t).unwrap();
        let g = schedule.g(0, t).unwrap();
        let ratio = schedule.model_validity_ratio(t).unwrap();
        println!(
            "{:>8.3} {:>12.5} {:>12.5} {:>12}",
            t,
            dw / omega0,
            g.norm() / omega0,
            if ratio > dce::cavity_modes::MODEL_VALIDITY_LIMIT { "exceeded" } else { "ok" },
        );
    }

    let disp = dispersion_check(&cfg, t_peak).unwrap();
    println!("\ndispersion at the pulse peak:");
    println!("  omega_bar^2 = {:.4}", disp.omega_bar_sq);
    println!(
        "  k'^2        = {:.4}  ({})",
        disp.kprime_sq,
        if disp.kprime_sq < 0.0 { "evanescent: the slab acts as a mirror" } else { "propagating" }
    );
}
