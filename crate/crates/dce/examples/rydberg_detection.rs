//! Reading the photons out with Rydberg atoms: perturbative excitation
//! growth checked against the regime rates, and the cavity-Q windows that
//! make the detection efficient.
//!
//!     cargo run --release -p dce --example rydberg_detection

use dce::cli::output::detection_text;
use dce::detection::{
    excitation_linear, feasibility, rabi_rate, relaxation_rate, AtomFieldParams,
};
use dce::squeezing::CavityLoss;

fn main() {
    // microwave cavity at ω₀ = 1.5e10 s⁻¹ with 1000 atoms, κ = 3e3 s⁻¹,
    // transit rate equal to κ, Q = 5000
    let omega0 = 1.5e10;
    let kappa = 3e3;
    let params = AtomFieldParams::new(
        kappa,
        1000,
        omega0,
        omega0,
        1.0 / 3e3,
        CavityLoss::from_q(omega0, 5e3).unwrap(),
    )
    .unwrap();
    let n_gamma = 1e6;

    println!("single-atom coupling  kappa = {kappa:.1e} 1/s");
    println!("collective coupling   kbar  = {:.3e} 1/s", params.kappa_collective());
    println!("rabi onset            {:.3e} 1/s", rabi_rate(&params, n_gamma).rate);
    println!("relaxation            {:.3e} 1/s\n", relaxation_rate(&params));

    // early excitation growth out of n_γ photons; the perturbative formula
    // holds while N_e stays well below N_Ryd (here the first ~0.1 µs), after
    // which the count saturates near N_Ryd/2 per transit
    println!("{:>12} {:>14}", "t [ns]", "N_e(t)");
    for i in 1..=8 {
        let t = i as f64 * 12e-9;
        println!("{:>12.0} {:>14.2}", t * 1e9, excitation_linear(&params, n_gamma, t));
    }
    println!();

    let report = feasibility(&params, n_gamma);
    print!("{}", detection_text(&report, omega0, omega0));
}
