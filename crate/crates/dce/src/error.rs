use thiserror::Error;

use crate::cavity_modes::Formulation;

/// Errors produced by the simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("slab permittivity vanished at t = {t}")]
    SingularPermittivity { t: f64 },

    #[error("negative surface electron density n_s = {value:e} at t = {t}")]
    NegativeElectronDensity { t: f64, value: f64 },

    #[error("expected a {expected:?} schedule, got {found:?}")]
    FormulationMismatch {
        expected: Formulation,
        found: Formulation,
    },

    #[error("schedule carries no drive period; cannot choose a differentiation step")]
    MissingDrivePeriod,

    #[error("integration step {step:e} exceeds drive period / 50 = {max:e}")]
    StepTooLarge { step: f64, max: f64 },

    #[error("symplectic invariant drift {drift:e} exceeded tolerance {tolerance:e} at t = {t}")]
    IntegrationFailure { t: f64, drift: f64, tolerance: f64 },

    #[error("intermode coupling is not Hermitian with zero diagonal at t = {t}")]
    BadIntermodeCoupling { t: f64 },

    #[error("mode index {mode} out of range for {n_modes} mode(s)")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("{0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
