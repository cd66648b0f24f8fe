//! Time-dependent mode frequencies and squeezing couplings of a resonant
//! cavity containing a laser-pulsed semiconductor slab (a plasma mirror).
//!
//! The slab occupies `[l, l + δ]` inside a cavity of length `L` (natural
//! units, `c = ħ = 1`). Laser pulses change the slab permittivity `ε₁(t)`
//! and create conduction electrons with surface density `n_s(t) = n_e(t)·δ`,
//! which shifts the mode frequency and produces a squeezing coupling. Both
//! effects are conveniently expressed as effective wall displacements:
//!
//! ```text
//! δ_ε(t)/δ = -[ε₁(0)/ε₀][1 - ε₁(0)/ε₁(t)]·sin²(kl)
//! δ_m(t)/δ = [n_e(t)e²/(m*ε₀(ω₀)²)]·sin²(kl)
//! δω(t)  = ω₀[δ_ε + δ_m]/L
//! g(t)   = -(i/2)ω₀[-δ_ε + δ_m]/L
//! ```
//!
//! For a slab touching the boundary (`l = 0`) the mode-function factor
//! `sin²(kl)` degenerates to `(kδ)²/3`.
//!
//! Two formulations of the resulting [`CouplingSchedule`] are supported: the
//! fixed initial-mode (canonical) one, and the instantaneous-mode one obtained
//! through `δω̄ = δω`, `ḡ = [i/2ω̄(t)]·ġ`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A pure, thread-safe function of time. User-supplied handles must be
/// side-effect-free; schedules are evaluated concurrently during sweeps.
pub type TimeFn<T> = Arc<dyn Fn(f64) -> T + Send + Sync>;

/// Fallible variant used internally so that material-model errors (e.g. a
/// vanishing permittivity) surface at evaluation time.
pub type FallibleTimeFn<T> = Arc<dyn Fn(f64) -> Result<T> + Send + Sync>;

/// Matrix-valued intermode coupling `μ_αβ(t)`; must be Hermitian with zero
/// diagonal at every time.
pub type IntermodeFn = Arc<dyn Fn(f64) -> Array2<Complex64> + Send + Sync>;

/// The couplings are trusted up to `|δω(t)|/ω₀` of this size; beyond it the
/// fixed-basis expansion starts to break down and results should be treated
/// as qualitative.
pub const MODEL_VALIDITY_LIMIT: f64 = 0.1;

/// Physical cavity + slab + laser-pulse parameters.
///
/// Natural units with `c = ħ = 1`; one choice of `cavity_length` fixes the
/// frequency scale.
#[derive(Clone)]
pub struct SlabCavityConfig {
    /// Cavity length `L`.
    pub cavity_length: f64,
    /// Slab position `l`, `0 ≤ l ≤ L - δ`.
    pub slab_position: f64,
    /// Slab thickness `δ ≪ L`.
    pub slab_thickness: f64,
    /// Vacuum-region permittivity `ε₀` (baseline outside the slab).
    pub epsilon0: f64,
    /// Slab permittivity `ε₁(t)`, with `ε₁(0) > 0`.
    pub epsilon1: TimeFn<f64>,
    /// Surface electron density `n_s(t) = n_e(t)·δ`, proportional to the
    /// laser power. Must vanish at `t = 0` (laser off).
    pub surface_density: TimeFn<f64>,
    /// Combined material constant `e²/m*`, so that `m_p²(t) = n_e(t)·e²/m*`.
    pub charge_sq_over_mass: f64,
    /// Longitudinal wavenumber `k` of the studied mode (`k = nπ/L` for the
    /// baseline slab-off state).
    pub mode_wavenumber: f64,
    /// Transverse momentum magnitude (0 in strict 1+1-D runs).
    pub k_perp: f64,
}

impl fmt::Debug for SlabCavityConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SlabCavityConfig")
            .field("cavity_length", &self.cavity_length)
            .field("slab_position", &self.slab_position)
            .field("slab_thickness", &self.slab_thickness)
            .field("epsilon0", &self.epsilon0)
            .field("epsilon1(0)", &(self.epsilon1)(0.0))
            .field("charge_sq_over_mass", &self.charge_sq_over_mass)
            .field("mode_wavenumber", &self.mode_wavenumber)
            .field("k_perp", &self.k_perp)
            .finish()
    }
}

impl SlabCavityConfig {
    /// Checks the geometric and material invariants, returning the config
    /// unchanged when they hold.
    pub fn validated(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.slab_thickness > 0.0 && self.slab_thickness < self.cavity_length) {
            return bad(format!(
                "slab thickness {} outside (0, L = {})",
                self.slab_thickness, self.cavity_length
            ));
        }
        if !(self.slab_position >= 0.0
            && self.slab_position <= self.cavity_length - self.slab_thickness)
        {
            return bad(format!(
                "slab position {} outside [0, L - δ]",
                self.slab_position
            ));
        }
        if !(self.epsilon0 > 0.0) {
            return bad(format!("epsilon0 = {} must be positive", self.epsilon0));
        }
        let eps1_0 = (self.epsilon1)(0.0);
        if !(eps1_0 > 0.0) {
            return bad(format!("epsilon1(0) = {eps1_0} must be positive"));
        }
        let ns0 = (self.surface_density)(0.0);
        if ns0 != 0.0 {
            return bad(format!("surface density must vanish at t = 0, got {ns0}"));
        }
        if !(self.mode_wavenumber > 0.0) {
            return bad("mode wavenumber must be positive".into());
        }
        if self.k_perp < 0.0 || self.charge_sq_over_mass < 0.0 {
            return bad("k_perp and e²/m* must be non-negative".into());
        }
        Ok(self)
    }

    /// Baseline mode frequency `ω₀ = sqrt((k² + k⊥²)/ε₀)`.
    pub fn omega0(&self) -> f64 {
        ((self.mode_wavenumber.powi(2) + self.k_perp.powi(2)) / self.epsilon0).sqrt()
    }

    /// Plasma mass term `m_p²(t) = n_e(t)·e²/m*` with `n_e = n_s/δ`.
    pub fn plasma_mass_sq(&self, t: f64) -> Result<f64> {
        let ns = (self.surface_density)(t);
        if ns < 0.0 {
            return Err(Error::NegativeElectronDensity { t, value: ns });
        }
        Ok(ns / self.slab_thickness * self.charge_sq_over_mass)
    }

    /// The squared mode function at the slab: `sin²(kl)`, replaced by
    /// `(kδ)²/3` when the slab sits on the boundary `l = 0`.
    fn mode_factor(&self) -> f64 {
        if self.slab_position == 0.0 {
            (self.mode_wavenumber * self.slab_thickness).powi(2) / 3.0
        } else {
            (self.mode_wavenumber * self.slab_position).sin().powi(2)
        }
    }
}

/// Effective wall displacements produced by the slab at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacements {
    /// Dielectric contribution `δ_ε(t)` (≤ 0 while `ε₁(t) ≥ ε₁(0)`).
    pub delta_eps: f64,
    /// Conductivity contribution `δ_m(t)` (≥ 0 for physical densities).
    pub delta_m: f64,
}

/// Evaluates `δ_ε(t)` and `δ_m(t)` in the thin-slab approximation
/// `∫f² ≈ f²(l)·δ`.
pub fn plasma_displacements(cfg: &SlabCavityConfig, t: f64) -> Result<Displacements> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time {t} must be non-negative")));
    }
    let eps1_0 = (cfg.epsilon1)(0.0);
    let eps1_t = (cfg.epsilon1)(t);
    if eps1_t == 0.0 {
        return Err(Error::SingularPermittivity { t });
    }
    let ns = (cfg.surface_density)(t);
    if ns < 0.0 {
        return Err(Error::NegativeElectronDensity { t, value: ns });
    }
    let factor = cfg.mode_factor();
    let delta = cfg.slab_thickness;
    let omega0_sq = cfg.omega0().powi(2);
    let delta_eps = -delta * (eps1_0 / cfg.epsilon0) * (1.0 - eps1_0 / eps1_t) * factor;
    // δ·n_e·e²/m* = n_s·e²/m*
    let delta_m = ns * cfg.charge_sq_over_mass / (cfg.epsilon0 * omega0_sq) * factor;
    Ok(Displacements { delta_eps, delta_m })
}

/// Same displacements, but with the slab overlap integrals `G^ε`, `G^m`
/// evaluated by Simpson quadrature of the t = 0 mode function over
/// `[l, l + δ]` instead of the thin-slab shortcut. Cross-check path for
/// [`plasma_displacements`].
pub fn displacements_by_quadrature(
    cfg: &SlabCavityConfig,
    t: f64,
    panels: usize,
) -> Result<Displacements> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time {t} must be non-negative")));
    }
    let eps1_0 = (cfg.epsilon1)(0.0);
    let eps1_t = (cfg.epsilon1)(t);
    if eps1_t == 0.0 {
        return Err(Error::SingularPermittivity { t });
    }
    let mp_sq = cfg.plasma_mass_sq(t)?;
    let omega0 = cfg.omega0();
    let length = cfg.cavity_length;
    let k = cfg.mode_wavenumber;
    // Mode normalization ∫ ε(x,0) f² dx = 1/(2ω₀), dominated by the vacuum
    // region for a thin slab: f(x) = sin(kx)/sqrt(ε₀ ω₀ L).
    let norm = 1.0 / (cfg.epsilon0 * omega0 * length);
    let f_sq = |x: f64| (k * x).sin().powi(2) * norm;
    let overlap = simpson(f_sq, cfg.slab_position, cfg.slab_position + cfg.slab_thickness, panels);

    let g_eps = 0.5 * omega0.powi(2) * eps1_0.powi(2) * (1.0 / eps1_t - 1.0 / eps1_0) * overlap;
    let g_m = 0.5 * mp_sq * overlap;
    Ok(Displacements {
        delta_eps: 2.0 * length * g_eps / omega0,
        delta_m: 2.0 * length * g_m / omega0,
    })
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2) & !1; // even
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Which mode basis a [`CouplingSchedule`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Fixed initial modes; couplings from the slab overlap integrals.
    Canonical,
    /// Re-diagonalizing mode basis; `ḡ = [i/2ω̄(t)]·ġ`.
    InstantaneousMode,
}

/// One mode's time-dependent Hamiltonian coefficients.
#[derive(Clone)]
pub struct ModeWaveform {
    /// Baseline frequency `ω⁰`.
    pub omega0: f64,
    delta_omega: FallibleTimeFn<f64>,
    g: FallibleTimeFn<Complex64>,
}

impl ModeWaveform {
    pub fn new(
        omega0: f64,
        delta_omega: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            omega0,
            delta_omega: Arc::new(move |t| Ok(delta_omega(t))),
            g: Arc::new(move |t| Ok(g(t))),
        }
    }

    pub fn new_fallible(
        omega0: f64,
        delta_omega: FallibleTimeFn<f64>,
        g: FallibleTimeFn<Complex64>,
    ) -> Self {
        Self { omega0, delta_omega, g }
    }

    /// A mode that just sits there: `δω = 0`, `g = 0`.
    pub fn idle(omega0: f64) -> Self {
        Self::new(omega0, |_| 0.0, |_| Complex64::new(0.0, 0.0))
    }
}

/// Time-dependent `ω(t)` and `g(t)` for one or more modes, plus an optional
/// intermode coupling matrix `μ(t)`.
///
/// All evaluation methods are pure; a schedule can be shared across threads.
#[derive(Clone)]
pub struct CouplingSchedule {
    modes: Vec<ModeWaveform>,
    intermode: Option<IntermodeFn>,
    formulation: Formulation,
    drive_period: Option<f64>,
}

impl fmt::Debug for CouplingSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CouplingSchedule")
            .field("n_modes", &self.modes.len())
            .field("formulation", &self.formulation)
            .field("drive_period", &self.drive_period)
            .field("has_intermode", &self.intermode.is_some())
            .finish()
    }
}

impl CouplingSchedule {
    pub fn single_mode(
        omega0: f64,
        delta_omega: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            modes: vec![ModeWaveform::new(omega0, delta_omega, g)],
            intermode: None,
            formulation: Formulation::Canonical,
            drive_period: None,
        }
    }

    /// The default pulse-train waveforms
    /// `ω(t) = ω₀ + ⟨δω⟩(1 - cos Ωt)`, `g(t) = 2⟨g⟩_Ω(1 - cos Ωt)`.
    pub fn default_drive(
        omega0: f64,
        mean_delta_omega: f64,
        two_g_fourier: Complex64,
        omega_drive: f64,
    ) -> Self {
        let dw = mean_delta_omega;
        let g2 = two_g_fourier;
        Self {
            modes: vec![ModeWaveform::new(
                omega0,
                move |t| dw * (1.0 - (omega_drive * t).cos()),
                move |t| g2 * (1.0 - (omega_drive * t).cos()),
            )],
            intermode: None,
            formulation: Formulation::Canonical,
            drive_period: Some(2.0 * PI / omega_drive),
        }
    }

    pub fn multimode(modes: Vec<ModeWaveform>, intermode: Option<IntermodeFn>) -> Self {
        assert!(!modes.is_empty(), "schedule needs at least one mode");
        Self {
            modes,
            intermode,
            formulation: Formulation::Canonical,
            drive_period: None,
        }
    }

    pub fn with_drive_period(mut self, period: f64) -> Self {
        self.drive_period = Some(period);
        self
    }

    pub fn with_intermode(mut self, intermode: IntermodeFn) -> Self {
        self.intermode = Some(intermode);
        self
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn drive_period(&self) -> Option<f64> {
        self.drive_period
    }

    pub fn has_intermode(&self) -> bool {
        self.intermode.is_some()
    }

    pub fn omega0(&self, mode: usize) -> f64 {
        self.modes[mode].omega0
    }

    pub fn delta_omega(&self, mode: usize, t: f64) -> Result<f64> {
        (self.modes[mode].delta_omega)(t)
    }

    /// Full mode frequency `ω(t) = ω₀ + δω(t)`.
    pub fn omega(&self, mode: usize, t: f64) -> Result<f64> {
        Ok(self.modes[mode].omega0 + self.delta_omega(mode, t)?)
    }

    pub fn g(&self, mode: usize, t: f64) -> Result<Complex64> {
        (self.modes[mode].g)(t)
    }

    /// Evaluates `μ(t)`, if any. The matrix contract (Hermitian, zero
    /// diagonal) is enforced by the integrator on a sample grid.
    pub fn intermode_at(&self, t: f64) -> Option<Array2<Complex64>> {
        self.intermode.as_ref().map(|f| f(t))
    }

    /// Largest `|δω(t)|/ω₀` over the modes; values above
    /// [`MODEL_VALIDITY_LIMIT`] flag a regime where the coupling formulas are
    /// only qualitative (this is a warning condition, not an error).
    pub fn model_validity_ratio(&self, t: f64) -> Result<f64> {
        let mut worst = 0.0_f64;
        for m in 0..self.modes.len() {
            worst = worst.max(self.delta_omega(m, t)?.abs() / self.modes[m].omega0);
        }
        Ok(worst)
    }

    /// Converts a canonical schedule to the instantaneous-mode one using
    /// `δω̄ = δω` and `ḡ(t) = [i/2ω̄(t)]·ġ(t)`, with `ġ` from a centered
    /// finite difference of step `10⁻⁴·(drive period)`.
    pub fn to_instantaneous(&self) -> Result<CouplingSchedule> {
        let period = self.drive_period.ok_or(Error::MissingDrivePeriod)?;
        self.to_instantaneous_with_step(1e-4 * period)
    }

    /// Same as [`Self::to_instantaneous`] with an explicit differentiation
    /// step.
    pub fn to_instantaneous_with_step(&self, h: f64) -> Result<CouplingSchedule> {
        if self.formulation != Formulation::Canonical {
            return Err(Error::FormulationMismatch {
                expected: Formulation::Canonical,
                found: self.formulation,
            });
        }
        if !(h > 0.0) {
            return Err(Error::Domain(format!("differentiation step {h} must be positive")));
        }
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let omega0 = m.omega0;
                let dw = Arc::clone(&m.delta_omega);
                let dw_for_g = Arc::clone(&m.delta_omega);
                let g = Arc::clone(&m.g);
                let g_bar: FallibleTimeFn<Complex64> = Arc::new(move |t| {
                    let gdot = if t >= h {
                        (g(t + h)? - g(t - h)?) / (2.0 * h)
                    } else {
                        // second-order forward difference; waveforms need not
                        // be defined for t < 0
                        (-3.0 * g(t)? + 4.0 * g(t + h)? - g(t + 2.0 * h)?) / (2.0 * h)
                    };
                    let omega_bar = omega0 + dw_for_g(t)?;
                    Ok(Complex64::i() * gdot / (2.0 * omega_bar))
                });
                Ok(ModeWaveform::new_fallible(omega0, dw, g_bar))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CouplingSchedule {
            modes,
            intermode: self.intermode.clone(),
            formulation: Formulation::InstantaneousMode,
            drive_period: self.drive_period,
        })
    }
}

/// Builds the canonical single-mode schedule implied by a slab configuration:
/// `δω(t) = ω₀[δ_ε + δ_m]/L`, `g(t) = -(i/2)ω₀[-δ_ε + δ_m]/L`.
///
/// The schedule carries no drive period (the laser waveform lives inside the
/// user functions); attach one with
/// [`CouplingSchedule::with_drive_period`] before requesting the
/// instantaneous formulation.
pub fn coupling_schedule(cfg: &SlabCavityConfig) -> Result<CouplingSchedule> {
    let cfg = cfg.clone().validated()?;
    let omega0 = cfg.omega0();
    let length = cfg.cavity_length;
    let cfg_dw = cfg.clone();
    let cfg_g = cfg.clone();
    let delta_omega: FallibleTimeFn<f64> = Arc::new(move |t| {
        let d = plasma_displacements(&cfg_dw, t)?;
        Ok(omega0 * (d.delta_eps + d.delta_m) / length)
    });
    let g: FallibleTimeFn<Complex64> = Arc::new(move |t| {
        let d = plasma_displacements(&cfg_g, t)?;
        Ok(Complex64::new(0.0, -0.5) * omega0 * (-d.delta_eps + d.delta_m) / length)
    });
    Ok(CouplingSchedule {
        modes: vec![ModeWaveform::new_fallible(omega0, delta_omega, g)],
        intermode: None,
        formulation: Formulation::Canonical,
        drive_period: None,
    })
}

/// Both sides of the slab dispersion relation
/// `ω̄² = (k² + k⊥²)/ε₀ = (k′² + k⊥² + m_p²)/ε₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionCheck {
    /// Common mode frequency squared.
    pub omega_bar_sq: f64,
    /// Implied slab wavenumber squared; negative in the evanescent regime
    /// (`k′ = i|k′|` for large `m_p²`).
    pub kprime_sq: f64,
}

/// Solves the dispersion relation for `ω̄²` and the implied `k′²` at time `t`.
pub fn dispersion_check(cfg: &SlabCavityConfig, t: f64) -> Result<DispersionCheck> {
    let omega_bar_sq =
        (cfg.mode_wavenumber.powi(2) + cfg.k_perp.powi(2)) / cfg.epsilon0;
    let eps1_t = (cfg.epsilon1)(t);
    let mp_sq = cfg.plasma_mass_sq(t)?;
    let kprime_sq = eps1_t * omega_bar_sq - cfg.k_perp.powi(2) - mp_sq;
    Ok(DispersionCheck { omega_bar_sq, kprime_sq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn constant(v: f64) -> TimeFn<f64> {
        Arc::new(move |_| v)
    }

    /// Baseline slab config with constant permittivity and a (1 - cos)
    /// electron-density pulse, normalized so n_s·e²/(m*ε₀)·L = peak at the
    /// pulse maximum.
    fn test_config(slab_position: f64, ns_peak: f64) -> SlabCavityConfig {
        SlabCavityConfig {
            cavity_length: 1.0,
            slab_position,
            slab_thickness: 1e-3,
            epsilon0: 1.0,
            epsilon1: constant(1.0),
            surface_density: Arc::new(move |t| ns_peak * 0.5 * (1.0 - (2.0 * t).cos())),
            charge_sq_over_mass: 1.0,
            mode_wavenumber: PI,
            k_perp: 0.0,
        }
        .validated()
        .unwrap()
    }

    #[test]
    fn node_placement_kills_both_displacements() {
        // k = 2π/L and l = L/2 puts the slab on a node of the mode function.
        let cfg = SlabCavityConfig {
            mode_wavenumber: 2.0 * PI,
            ..test_config(0.5, 1.0)
        };
        let d = plasma_displacements(&cfg, 0.7).unwrap();
        assert_abs_diff_eq!(d.delta_eps, 0.0, epsilon = 1e-30);
        assert_abs_diff_eq!(d.delta_m, 0.0, epsilon = 1e-32);
    }

    #[test]
    fn antinode_slab_reaches_tenth_of_cavity_length() {
        // n_s e²/(m* ε₀) L = 1 with ω₀ L = π and sin²(kl) = 1 gives
        // δ_m/L = 1/π² ≈ 0.101.
        let cfg = test_config(0.5, 1.0);
        let t_peak = PI / 2.0; // pulse maximum of (1 - cos 2t)/2
        let d = plasma_displacements(&cfg, t_peak).unwrap();
        assert_relative_eq!(d.delta_m / cfg.cavity_length, 1.0 / (PI * PI), max_relative = 1e-12);
        assert_abs_diff_eq!(d.delta_eps, 0.0);
    }

    #[test]
    fn dielectric_displacement_matches_quadrature() {
        // ε₁ doubling with ε₁(0)/ε₀ = 10 at an antinode: δ_ε/δ = -5.
        let cfg = SlabCavityConfig {
            epsilon1: Arc::new(|t| if t > 0.0 { 20.0 } else { 10.0 }),
            surface_density: constant(0.0),
            ..test_config(0.5, 0.0)
        };
        let d = plasma_displacements(&cfg, 1.0).unwrap();
        assert_relative_eq!(d.delta_eps / cfg.slab_thickness, -5.0, max_relative = 1e-6);
        assert_abs_diff_eq!(d.delta_m, 0.0);

        let q = displacements_by_quadrature(&cfg, 1.0, 512).unwrap();
        assert_relative_eq!(q.delta_eps, d.delta_eps, max_relative = 1e-4);
    }

    #[test]
    fn boundary_slab_uses_kdelta_factor() {
        let cfg = test_config(0.0, 1.0);
        let t_peak = PI / 2.0;
        let d = plasma_displacements(&cfg, t_peak).unwrap();
        let kd = cfg.mode_wavenumber * cfg.slab_thickness;
        let expected = 1.0 / (PI * PI) * (kd * kd / 3.0);
        assert_relative_eq!(d.delta_m / cfg.cavity_length, expected, max_relative = 1e-12);
        // the quadrature limit reproduces the same (kδ)²/3 suppression
        let q = displacements_by_quadrature(&cfg, t_peak, 512).unwrap();
        assert_relative_eq!(q.delta_m, d.delta_m, max_relative = 1e-5);
    }

    #[test]
    fn singular_permittivity_is_an_error() {
        let cfg = SlabCavityConfig {
            epsilon1: Arc::new(|t| if t > 0.0 { 0.0 } else { 1.0 }),
            ..test_config(0.5, 1.0)
        };
        assert!(matches!(
            plasma_displacements(&cfg, 1.0),
            Err(Error::SingularPermittivity { .. })
        ));
    }

    #[test]
    fn negative_density_is_an_error() {
        let cfg = SlabCavityConfig {
            surface_density: Arc::new(|t| if t > 0.0 { -1.0 } else { 0.0 }),
            ..test_config(0.5, 1.0)
        };
        assert!(matches!(
            plasma_displacements(&cfg, 1.0),
            Err(Error::NegativeElectronDensity { .. })
        ));
    }

    #[test]
    fn schedule_is_diagonal_at_t0_and_matches_displacements() {
        let cfg = test_config(0.5, 0.2);
        let schedule = coupling_schedule(&cfg).unwrap();
        assert_eq!(schedule.formulation(), Formulation::Canonical);
        assert_abs_diff_eq!(schedule.delta_omega(0, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(schedule.g(0, 0.0).unwrap().norm(), 0.0);

        // at the pulse peak: δ_ε = 0, so δω = ω₀ δ_m/L and g = -i δω/2
        let t_peak = PI / 2.0;
        let d = plasma_displacements(&cfg, t_peak).unwrap();
        let dw = schedule.delta_omega(0, t_peak).unwrap();
        let g = schedule.g(0, t_peak).unwrap();
        assert_relative_eq!(dw, cfg.omega0() * d.delta_m / cfg.cavity_length, max_relative = 1e-12);
        assert_relative_eq!(g.im, -dw / 2.0, max_relative = 1e-12);
        assert_abs_diff_eq!(g.re, 0.0);
    }

    #[test]
    fn equal_displacements_cancel_g() {
        // ε₁ drops below ε₁(0), making δ_ε positive; tune n_s so δ_m = δ_ε.
        let eps1_0 = 2.0;
        let eps1_t = 1.0;
        let cfg = SlabCavityConfig {
            epsilon1: Arc::new(move |t| if t > 0.0 { eps1_t } else { eps1_0 }),
            // δ_ε/δ = -2·(1 - 2) = 2, so target δ_m/δ = 2 → n_s·e²/m*/(ε₀ω₀²δ) = 2
            surface_density: Arc::new(|t| if t > 0.0 { 2.0 * PI * PI * 1e-3 } else { 0.0 }),
            ..test_config(0.5, 0.0)
        };
        let d = plasma_displacements(&cfg, 1.0).unwrap();
        assert_relative_eq!(d.delta_eps, d.delta_m, max_relative = 1e-12);
        let schedule = coupling_schedule(&cfg).unwrap();
        let g = schedule.g(0, 1.0).unwrap();
        assert_abs_diff_eq!(g.norm(), 0.0, epsilon = 1e-18);
        let dw = schedule.delta_omega(0, 1.0).unwrap();
        assert_relative_eq!(
            dw,
            2.0 * cfg.omega0() * d.delta_m / cfg.cavity_length,
            max_relative = 1e-12
        );
    }

    #[test]
    fn schedule_values_at_two_percent_displacement() {
        // δ_m/L = 0.02 with δ_ε = 0 gives δω = 0.02 ω₀ and g = -i 0.01 ω₀.
        let ns = 0.02 * PI * PI; // δ_m = n_s/(ω₀²) at an antinode, ω₀ = π
        let cfg = SlabCavityConfig {
            surface_density: Arc::new(move |t| if t > 0.0 { ns } else { 0.0 }),
            ..test_config(0.5, 0.0)
        };
        let schedule = coupling_schedule(&cfg).unwrap();
        let w0 = cfg.omega0();
        assert_relative_eq!(schedule.delta_omega(0, 1.0).unwrap(), 0.02 * w0, max_relative = 1e-12);
        let g = schedule.g(0, 1.0).unwrap();
        assert_relative_eq!(g.im, -0.01 * w0, max_relative = 1e-12);
    }

    #[test]
    fn unchanged_medium_gives_zero_couplings() {
        let cfg = test_config(0.5, 0.0);
        let schedule = coupling_schedule(&cfg).unwrap();
        for &t in &[0.0, 0.3, 1.7, 42.0] {
            assert_abs_diff_eq!(schedule.delta_omega(0, t).unwrap(), 0.0);
            assert_abs_diff_eq!(schedule.g(0, t).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn instantaneous_g_matches_analytic_derivative() {
        let omega0 = 1.0;
        let omega_drive = 2.04;
        let g2 = Complex64::new(0.0, 0.01);
        let schedule = CouplingSchedule::default_drive(omega0, 0.02, g2, omega_drive);
        let inst = schedule.to_instantaneous().unwrap();
        assert_eq!(inst.formulation(), Formulation::InstantaneousMode);

        for i in 1..40 {
            let t = i as f64 * 0.37;
            let omega_bar = omega0 + 0.02 * (1.0 - (omega_drive * t).cos());
            let gdot = g2 * omega_drive * (omega_drive * t).sin();
            let expected = Complex64::i() * gdot / (2.0 * omega_bar);
            let got = inst.g(0, t).unwrap();
            if expected.norm() > 1e-6 {
                assert_relative_eq!(got.re, expected.re, max_relative = 1e-6);
                assert_relative_eq!(got.im, expected.im, max_relative = 1e-6);
            } else {
                assert_abs_diff_eq!((got - expected).norm(), 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn instantaneous_of_constant_or_zero_g_vanishes() {
        let zero = CouplingSchedule::single_mode(1.0, |_| 0.0, |_| Complex64::new(0.0, 0.0))
            .with_drive_period(PI);
        let inst = zero.to_instantaneous().unwrap();
        assert_abs_diff_eq!(inst.g(0, 1.3).unwrap().norm(), 0.0);

        let constant = CouplingSchedule::single_mode(1.0, |_| 0.0, |_| Complex64::new(0.3, 0.4))
            .with_drive_period(PI);
        let inst = constant.to_instantaneous().unwrap();
        assert_abs_diff_eq!(inst.g(0, 2.0).unwrap().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn instantaneous_requires_canonical_input() {
        let schedule = CouplingSchedule::default_drive(1.0, 0.02, Complex64::i() * 0.01, 2.04);
        let inst = schedule.to_instantaneous().unwrap();
        assert!(matches!(
            inst.to_instantaneous(),
            Err(Error::FormulationMismatch { .. })
        ));
        let no_period = CouplingSchedule::single_mode(1.0, |_| 0.0, |_| Complex64::new(0.0, 0.0));
        assert!(matches!(no_period.to_instantaneous(), Err(Error::MissingDrivePeriod)));
    }

    #[test]
    fn dispersion_uniform_medium() {
        let cfg = test_config(0.5, 0.0);
        let d = dispersion_check(&cfg, 0.0).unwrap();
        assert_relative_eq!(d.kprime_sq, cfg.mode_wavenumber.powi(2), max_relative = 1e-12);
    }

    #[test]
    fn dispersion_slab_arithmetic() {
        // ε₀ = 1, k = π, k⊥ = 0, ε₁ = 4, m_p² = π² → ω̄² = π², k′² = 3π².
        let cfg = SlabCavityConfig {
            epsilon1: constant(4.0),
            surface_density: Arc::new(|t| if t > 0.0 { PI * PI * 1e-3 } else { 0.0 }),
            ..test_config(0.5, 0.0)
        };
        let d = dispersion_check(&cfg, 1.0).unwrap();
        assert_relative_eq!(d.omega_bar_sq, PI * PI, max_relative = 1e-12);
        assert_relative_eq!(d.kprime_sq, 3.0 * PI * PI, max_relative = 1e-12);
    }

    #[test]
    fn dispersion_evanescent_regime_is_legal() {
        let cfg = SlabCavityConfig {
            surface_density: Arc::new(|t| if t > 0.0 { 100.0 * 1e-3 } else { 0.0 }),
            ..test_config(0.5, 0.0)
        };
        let d = dispersion_check(&cfg, 1.0).unwrap();
        assert!(d.kprime_sq < 0.0);
    }

    #[test]
    fn validity_ratio_flags_strong_drives() {
        let schedule = CouplingSchedule::default_drive(1.0, 0.08, Complex64::i() * 0.04, 2.16);
        // peak δω = 2·0.08 = 0.16 > limit
        let peak_t = PI / 2.16;
        assert!(schedule.model_validity_ratio(peak_t).unwrap() > MODEL_VALIDITY_LIMIT);
        assert!(schedule.model_validity_ratio(0.0).unwrap() < MODEL_VALIDITY_LIMIT);
    }

    proptest! {
        #[test]
        fn delta_m_linear_in_surface_density(scale in 1e-3f64..1e3, ns in 1e-6f64..1.0) {
            let cfg = SlabCavityConfig {
                surface_density: Arc::new(move |t| if t > 0.0 { ns } else { 0.0 }),
                ..test_config(0.4, 0.0)
            };
            let scaled = SlabCavityConfig {
                surface_density: Arc::new(move |t| if t > 0.0 { scale * ns } else { 0.0 }),
                ..cfg.clone()
            };
            let d = plasma_displacements(&cfg, 1.0).unwrap();
            let ds = plasma_displacements(&scaled, 1.0).unwrap();
            prop_assert!((ds.delta_m - scale * d.delta_m).abs() <= 1e-12 * ds.delta_m.abs().max(1e-300));
        }

        #[test]
        fn delta_m_follows_mode_function(l1 in 0.05f64..0.95, l2 in 0.05f64..0.95) {
            let c1 = test_config(l1, 1.0);
            let c2 = test_config(l2, 1.0);
            let s1 = (PI * l1).sin().powi(2);
            let s2 = (PI * l2).sin().powi(2);
            prop_assume!(s1 > 1e-3 && s2 > 1e-3);
            let d1 = plasma_displacements(&c1, 0.9).unwrap();
            let d2 = plasma_displacements(&c2, 0.9).unwrap();
            let ratio = d1.delta_m / d2.delta_m;
            prop_assert!((ratio - s1 / s2).abs() < 1e-9 * (s1 / s2));
        }

        #[test]
        fn displacement_signs(ns in 0.0f64..2.0, eps_rise in 1.0f64..5.0) {
            let cfg = SlabCavityConfig {
                epsilon1: Arc::new(move |t| if t > 0.0 { 2.0 * eps_rise } else { 2.0 }),
                surface_density: Arc::new(move |t| if t > 0.0 { ns } else { 0.0 }),
                ..test_config(0.3, 0.0)
            };
            let d = plasma_displacements(&cfg, 1.0).unwrap();
            prop_assert!(d.delta_m >= 0.0);
            prop_assert!(d.delta_eps <= 0.0);
        }

        #[test]
        fn schedule_vanishes_at_t0(ns in 0.0f64..1.0, l in 0.1f64..0.9) {
            let cfg = SlabCavityConfig {
                surface_density: Arc::new(move |t| ns * 0.5 * (1.0 - (2.0 * t).cos())),
                ..test_config(l, 0.0)
            };
            let schedule = coupling_schedule(&cfg).unwrap();
            prop_assert!(schedule.delta_omega(0, 0.0).unwrap().abs() < 1e-15);
            prop_assert!(schedule.g(0, 0.0).unwrap().norm() < 1e-15);
        }
    }
}
