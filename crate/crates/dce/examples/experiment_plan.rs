//! The full design chain: aim for 10⁶ photons in 300 pulses, convert
//! 0.01 µJ laser pulses into an achievable squeezing rate, check the growth
//! threshold, and close the loop against detection feasibility.
//!
//!     cargo run --release -p dce --example experiment_plan

use dce::cli::output::plan_text;
use dce::detection::AtomFieldParams;
use dce::planner::{plan, required_squeezing_rate, PlanInput};
use dce::squeezing::CavityLoss;

fn main() {
    let omega0 = 1.5e10; // s⁻¹
    let atoms = AtomFieldParams::new(
        3e3,
        1000,
        omega0,
        omega0,
        1.0 / 3e3,
        CavityLoss::from_q(omega0, 5e3).unwrap(),
    )
    .unwrap();

    println!(
        "to create 1e6 photons in 300 pulses the squeezing rate must reach chi/omega0 = {:.4}\n",
        required_squeezing_rate(1e6, 300).unwrap()
    );

    let input = PlanInput {
        target_n_gamma: 1e6,
        n_pulses: 300,
        laser_energy_uj: Some(0.01),
        r_omega: 0.1,
        slab: None,
        atoms,
        refine_with_integration: true,
    };
    let report = plan(&input).unwrap();
    print!("{}", plan_text(&report, omega0, omega0));

    println!("\nscaling with the pulse energy:");
    println!("{:>12} {:>12} {:>16}", "W [µJ]", "chi/omega0", "predicted n");
    for w in [0.002, 0.005, 0.008, 0.01, 0.012] {
        let r = plan(&PlanInput {
            laser_energy_uj: Some(w),
            refine_with_integration: false,
            ..input.clone()
        })
        .unwrap();
        println!(
            "{w:>12.3} {:>12.4} {:>16.3e}",
            r.achieved_chi_over_omega0, r.predicted_n_gamma
        );
    }
}
