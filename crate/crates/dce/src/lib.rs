//! Photon creation in a resonant cavity with a laser-pulsed semiconductor
//! plasma mirror, and its detection with Rydberg atoms.
//!
//! Periodic laser pulses make a thin semiconductor slab inside a microwave
//! cavity intermittently reflective. That modulates the mode frequency and
//! produces a two-photon (squeezing) coupling, so photons build up from the
//! vacuum — the dynamical Casimir effect. This crate models the whole
//! pipeline:
//!
//! * [`cavity_modes`] — slab/laser parameters → time-dependent `ω(t)`, `g(t)`
//!   couplings, in the fixed-basis (canonical) and instantaneous-mode
//!   formulations;
//! * [`squeezing`] — Bogoliubov master equations (single- and multimode),
//!   the rotating-wave analytic solution, cavity damping, and the `χ > Γ/2`
//!   growth threshold;
//! * [`detection`] — collective Rydberg-atom excitation, detection rates,
//!   and the cavity-Q feasibility windows;
//! * [`planner`] — the experiment-design chain from target photon count and
//!   laser power to a full feasibility report;
//! * [`cli`] — the `dce` binary: `simulate`, `sweep`, `plan`, `detect`
//!   subcommands with CSV and gnuplot output.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p dce --example photon_growth      # resonant vs detuned growth + analytic check
//! cargo run --release -p dce --example plasma_mirror      # slab parameters → couplings
//! cargo run --release -p dce --example formulations       # canonical vs instantaneous-mode comparison
//! cargo run --release -p dce --example resonance_scan     # locate Ω = 2(ω₀ + ⟨δω⟩)
//! cargo run --release -p dce --example intermode_pair     # two-mode resonant transfer (ω₂ = 3ω₁)
//! cargo run --release -p dce --example rydberg_detection  # excitation curves and Q windows
//! cargo run --release -p dce --example experiment_plan    # full design chain
//! ```
//!
//! # Quick start
//!
//! ```
//! use dce::squeezing::{integrate, rwa_photon_number, DriveSpec, IntegrationOptions};
//! use num_complex::Complex64;
//!
//! // 30 resonant pulses at the shifted resonance Ω = 2(ω₀ + ⟨δω⟩)
//! let drive = DriveSpec::resonant(1.0, 0.02, Complex64::new(0.0, 0.005), 30);
//! let schedule = drive.default_schedule();
//! let traj = integrate(&schedule, drive.t1(), &IntegrationOptions::for_drive(&drive)).unwrap();
//! let n = traj.final_state().photon_number(0).unwrap();
//! assert!((n - rwa_photon_number(&drive, drive.t1())).abs() / n < 0.1);
//! ```
//!
//! Natural units `ħ = c = 1` throughout; frequencies are multiples of the
//! mode frequency `ω₀` unless a caller supplies absolute rates (any
//! consistent unit system works).

// validation guards are written `!(x > 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity_modes;
pub mod cli;
pub mod detection;
pub mod error;
pub mod planner;
pub mod squeezing;

pub use error::{Error, Result};
