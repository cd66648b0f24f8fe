//! Scenario configuration: a sectioned TOML file (comments allowed) mirroring
//! the library's input types. Unknown keys are rejected, not ignored; command
//! line `--set key=value` overrides are applied to the parsed document before
//! validation, so they obey the same schema.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cavity_modes::{CouplingSchedule, SlabCavityConfig};
use crate::detection::AtomFieldParams;
use crate::error::{Error, Result};
use crate::planner::{PlanInput, SlabPlanPath};
use crate::squeezing::{CavityLoss, DriveSpec};

/// Built-in scenario presets.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1", include_str!("../../presets/fig1.toml")),
    ("fig2", include_str!("../../presets/fig2.toml")),
    ("nominal", include_str!("../../presets/nominal.toml")),
];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub drive: DriveSection,
    pub integration: IntegrationSection,
    pub loss: LossSection,
    pub atoms: AtomsSection,
    pub detect: DetectSection,
    pub plan: PlanSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slab: Option<SlabSection>,
    pub output: OutputSection,
    pub sweep: SweepSection,
}

/// Drive parameters; frequencies in units of `omega0`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DriveSection {
    /// Mode frequency (sets the unit scale; keep at 1.0 for natural units).
    pub omega0: f64,
    /// Period-averaged frequency shift ⟨δω⟩/ω₀.
    pub mean_delta_omega: f64,
    /// Re and Im of 2⟨g⟩_Ω in units of ω₀.
    pub two_g_re: f64,
    pub two_g_im: f64,
    /// Detuning Δ/ω₀ from the shifted resonance Ω = 2(ω₀ + ⟨δω⟩ + Δ).
    pub detuning: f64,
    pub n_pulses: u32,
    pub waveform: WaveformKind,
    /// CSV table (phase,delta_omega,two_g_re,two_g_im) for `waveform = "table"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub waveform_table: Option<PathBuf>,
}

impl Default for DriveSection {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            mean_delta_omega: 0.02,
            two_g_re: 0.0,
            two_g_im: 0.01,
            detuning: 0.0,
            n_pulses: 300,
            waveform: WaveformKind::Default,
            waveform_table: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum WaveformKind {
    /// `ω(t) = ω₀ + ⟨δω⟩(1 - cos Ωt)`, `g(t) = 2⟨g⟩_Ω(1 - cos Ωt)`.
    #[default]
    Default,
    /// Piecewise-linear periodic waveform from a CSV table.
    Table,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrationSection {
    pub steps_per_pulse: u32,
    pub sample_stride: u32,
    pub drift_tolerance: f64,
}

impl Default for IntegrationSection {
    fn default() -> Self {
        Self {
            steps_per_pulse: 200,
            sample_stride: 4,
            drift_tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields, default)]
pub struct LossSection {
    /// Cavity quality factor; omit for a lossless cavity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
}

/// Detection-stage parameters; rates in units of `omega0`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct AtomsSection {
    /// Single atom-photon coupling κ/ω₀.
    pub kappa: f64,
    pub n_ryd: u32,
    /// Atomic detuning Δ_e/ω₀ = (ω_e - ω₀)/ω₀.
    pub delta_e: f64,
    /// Transit rate Γ_tr/ω₀.
    pub transit_rate: f64,
    /// SI anchor for reports (s⁻¹); display only.
    pub omega0_si: f64,
}

impl Default for AtomsSection {
    fn default() -> Self {
        Self {
            kappa: 2e-7,
            n_ryd: 1000,
            delta_e: 0.0,
            transit_rate: 2e-7,
            omega0_si: 1.5e10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DetectSection {
    /// Photon count assumed present for `dce detect`.
    pub n_gamma: f64,
}

impl Default for DetectSection {
    fn default() -> Self {
        Self { n_gamma: 1e6 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PlanSection {
    pub target_n_gamma: f64,
    /// Laser pulse energy in µJ; omit to use only the slab route.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laser_energy_uj: Option<f64>,
    pub r_omega: f64,
    pub refine_with_integration: bool,
}

impl Default for PlanSection {
    fn default() -> Self {
        Self {
            target_n_gamma: 1e6,
            laser_energy_uj: Some(0.01),
            r_omega: 0.1,
            refine_with_integration: false,
        }
    }
}

/// Slab (plasma mirror) description. The laser pulse train shape is the
/// default `(1 - cos Ωt)/2` profile scaled by `surface_density_peak`;
/// the permittivity is held constant (conductivity-dominated regime).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SlabSection {
    pub cavity_length: f64,
    pub slab_position: f64,
    pub slab_thickness: f64,
    pub epsilon0: f64,
    /// Constant slab permittivity ε₁.
    pub epsilon1: f64,
    /// Peak surface electron density n_s (natural units).
    pub surface_density_peak: f64,
    /// Material constant e²/m*.
    pub charge_sq_over_mass: f64,
    /// Longitudinal mode number n, so k = nπ/L.
    pub mode_number: u32,
    pub k_perp: f64,
}

impl Default for SlabSection {
    fn default() -> Self {
        Self {
            cavity_length: 1.0,
            slab_position: 0.5,
            slab_thickness: 1e-3,
            epsilon0: 1.0,
            epsilon1: 1.0,
            surface_density_peak: 0.1,
            charge_sq_over_mass: 1.0,
            mode_number: 1,
            k_perp: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub figure: FigureKind,
    /// Also run the detuned companion (Δ = -⟨δω⟩, i.e. Ω = 2ω₀).
    pub compare_off_resonance: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum FigureKind {
    #[default]
    None,
    /// Linear plot of the early growth, resonant and detuned runs.
    Fig1,
    /// Log plot of the full pulse sequence.
    Fig2,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub axes: Vec<SweepAxis>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted config path, e.g. `drive.detuning` or `loss.q`.
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

/// Where a scenario comes from.
#[derive(Debug, Clone)]
pub enum ConfigSource {
    Preset(String),
    File(PathBuf),
    Defaults,
}

/// A parsed scenario plus the raw document (kept for sweep-axis edits) and
/// its canonical hash.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ScenarioConfig,
    pub base: toml::Value,
    pub hash: String,
}

pub fn preset_text(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            Error::InvalidConfig(format!("unknown preset '{name}', available: {names:?}"))
        })
}

/// Loads, overrides, validates, and hashes a scenario.
pub fn load_scenario(source: &ConfigSource, sets: &[String]) -> Result<LoadedConfig> {
    let text = match source {
        ConfigSource::Preset(name) => preset_text(name)?.to_string(),
        ConfigSource::File(path) => std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidConfig(format!("cannot read config {}: {e}", path.display()))
        })?,
        ConfigSource::Defaults => String::new(),
    };
    let mut value: toml::Value = toml::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("config parse error: {e}")))?;
    for setting in sets {
        apply_set(&mut value, setting)?;
    }
    finish_load(value)
}

/// Deserializes and validates an already-edited document (sweep grid points).
pub fn finish_load(value: toml::Value) -> Result<LoadedConfig> {
    let config: ScenarioConfig = value
        .clone()
        .try_into()
        .map_err(|e| Error::InvalidConfig(format!("config error: {e}")))?;
    config.validate()?;
    let hash = config.canonical_hash();
    Ok(LoadedConfig { config, base: value, hash })
}

/// Applies one `section.key=value` override to the raw document.
pub fn apply_set(doc: &mut toml::Value, setting: &str) -> Result<()> {
    let (key, raw) = setting
        .split_once('=')
        .ok_or_else(|| Error::InvalidConfig(format!("--set needs KEY=VALUE, got '{setting}'")))?;
    set_path(doc, key.trim(), parse_scalar(raw.trim()))
}

/// Inserts `value` at a dotted path, creating intermediate tables.
pub fn set_path(doc: &mut toml::Value, path: &str, value: toml::Value) -> Result<()> {
    if path.is_empty() {
        return Err(Error::InvalidConfig("empty --set key".into()));
    }
    let mut node = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        if !node.is_table() {
            return Err(Error::InvalidConfig(format!("'{part}' in '{path}' is not a table")));
        }
        node = node
            .as_table_mut()
            .unwrap()
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| Error::InvalidConfig(format!("cannot set '{path}' on a non-table")))?;
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Parses the right-hand side of a `--set` as a TOML value (numbers, bools,
/// quoted strings, arrays, inline tables); bare words fall back to strings.
fn parse_scalar(raw: &str) -> toml::Value {
    if let Ok(table) = toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        if let Some(v) = table.get("v") {
            return v.clone();
        }
    }
    toml::Value::String(raw.to_string())
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let check_finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} = {v} must be finite")))
            }
        };
        check_finite("drive.omega0", self.drive.omega0)?;
        if !(self.drive.omega0 > 0.0) {
            return Err(Error::InvalidConfig("drive.omega0 must be positive".into()));
        }
        check_finite("drive.mean_delta_omega", self.drive.mean_delta_omega)?;
        check_finite("drive.two_g_re", self.drive.two_g_re)?;
        check_finite("drive.two_g_im", self.drive.two_g_im)?;
        check_finite("drive.detuning", self.drive.detuning)?;
        if self.drive.n_pulses < 1 {
            return Err(Error::InvalidConfig("drive.n_pulses must be at least 1".into()));
        }
        if self.drive.waveform == WaveformKind::Table && self.drive.waveform_table.is_none() {
            return Err(Error::InvalidConfig(
                "waveform = \"table\" needs drive.waveform_table".into(),
            ));
        }
        if self.integration.steps_per_pulse < 50 {
            return Err(Error::InvalidConfig(
                "integration.steps_per_pulse must be at least 50".into(),
            ));
        }
        if self.integration.sample_stride < 1 {
            return Err(Error::InvalidConfig("integration.sample_stride must be >= 1".into()));
        }
        if let Some(q) = self.loss.q {
            if !(q > 0.0) {
                return Err(Error::InvalidConfig(format!("loss.q = {q} must be positive")));
            }
        }
        for axis in &self.sweep.axes {
            if axis.count < 1 {
                return Err(Error::InvalidConfig(format!(
                    "sweep axis '{}' count must be >= 1",
                    axis.name
                )));
            }
            check_finite(&format!("sweep axis '{}' min", axis.name), axis.min)?;
            check_finite(&format!("sweep axis '{}' max", axis.name), axis.max)?;
            if axis.min > axis.max {
                return Err(Error::InvalidConfig(format!(
                    "sweep axis '{}' has min > max",
                    axis.name
                )));
            }
        }
        Ok(())
    }

    /// Hash of the canonical (parsed) form: insensitive to key order and
    /// formatting of the source file.
    pub fn canonical_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Drive in absolute units (ω₀ multiples resolved).
    pub fn drive_spec(&self) -> DriveSpec {
        let w0 = self.drive.omega0;
        DriveSpec::with_detuning(
            w0,
            self.drive.mean_delta_omega * w0,
            Complex64::new(self.drive.two_g_re, self.drive.two_g_im) * w0 / 2.0,
            self.drive.detuning * w0,
            self.drive.n_pulses,
        )
    }

    pub fn cavity_loss(&self) -> Result<CavityLoss> {
        match self.loss.q {
            Some(q) => CavityLoss::from_q(self.drive.omega0, q),
            None => Ok(CavityLoss::lossless()),
        }
    }

    pub fn atom_params(&self) -> Result<AtomFieldParams> {
        let w0 = self.drive.omega0;
        let loss = self.cavity_loss()?;
        AtomFieldParams::new(
            self.atoms.kappa * w0,
            self.atoms.n_ryd,
            w0 * (1.0 + self.atoms.delta_e),
            w0,
            1.0 / (self.atoms.transit_rate * w0),
            loss,
        )
    }

    /// The canonical coupling schedule for this scenario. Table waveforms are
    /// resolved relative to `table_root`.
    pub fn canonical_schedule(&self, table_root: &Path) -> Result<CouplingSchedule> {
        let drive = self.drive_spec();
        match self.drive.waveform {
            WaveformKind::Default => Ok(drive.default_schedule()),
            WaveformKind::Table => {
                let rel = self.drive.waveform_table.as_ref().expect("validated");
                let path = if rel.is_absolute() { rel.clone() } else { table_root.join(rel) };
                let table = Arc::new(WaveformTable::load(&path, self.drive.omega0)?);
                let period = drive.pulse_period();
                let t1 = Arc::clone(&table);
                let t2 = Arc::clone(&table);
                Ok(CouplingSchedule::single_mode(
                    self.drive.omega0,
                    move |t| t1.delta_omega_at(t / period),
                    move |t| t2.g_at(t / period),
                )
                .with_drive_period(period))
            }
        }
    }

    /// Drive spec consistent with the schedule actually integrated: exact
    /// parameters for the default waveform, numerical extraction for tables.
    pub fn effective_drive(&self, schedule: &CouplingSchedule) -> Result<DriveSpec> {
        match self.drive.waveform {
            WaveformKind::Default => Ok(self.drive_spec()),
            WaveformKind::Table => DriveSpec::from_schedule(
                schedule,
                self.drive_spec().omega_drive,
                self.drive.n_pulses,
            ),
        }
    }

    pub fn slab_config(&self) -> Result<Option<(SlabCavityConfig, f64)>> {
        let Some(s) = &self.slab else { return Ok(None) };
        let omega_drive = self.drive_spec().omega_drive;
        let peak = s.surface_density_peak;
        let eps1 = s.epsilon1;
        let cfg = SlabCavityConfig {
            cavity_length: s.cavity_length,
            slab_position: s.slab_position,
            slab_thickness: s.slab_thickness,
            epsilon0: s.epsilon0,
            epsilon1: Arc::new(move |_| eps1),
            surface_density: Arc::new(move |t| peak * 0.5 * (1.0 - (omega_drive * t).cos())),
            charge_sq_over_mass: s.charge_sq_over_mass,
            mode_wavenumber: s.mode_number as f64 * std::f64::consts::PI / s.cavity_length,
            k_perp: s.k_perp,
        }
        .validated()?;
        // the (1 - cos)/2 profile peaks half a drive period in
        let eval_time = std::f64::consts::PI / omega_drive;
        Ok(Some((cfg, eval_time)))
    }

    pub fn plan_input(&self) -> Result<PlanInput> {
        let slab = self
            .slab_config()?
            .map(|(config, eval_time)| SlabPlanPath { config, eval_time });
        Ok(PlanInput {
            target_n_gamma: self.plan.target_n_gamma,
            n_pulses: self.drive.n_pulses,
            laser_energy_uj: self.plan.laser_energy_uj,
            r_omega: self.plan.r_omega,
            slab,
            atoms: self.atom_params()?,
            refine_with_integration: self.plan.refine_with_integration,
        })
    }
}

/// Periodic piecewise-linear waveform table over one drive period.
/// Columns: `phase` in [0, 1), `delta_omega` and `two_g_re`/`two_g_im` in
/// units of ω₀.
#[derive(Debug)]
pub struct WaveformTable {
    phases: Vec<f64>,
    delta_omega: Vec<f64>,
    two_g: Vec<Complex64>,
    omega0: f64,
}

impl WaveformTable {
    pub fn load(path: &Path, omega0: f64) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidConfig(format!("cannot read waveform table {}: {e}", path.display()))
        })?;
        Self::parse(&text, omega0)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str, omega0: f64) -> std::result::Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or("empty waveform table")?;
        let expected = "phase,delta_omega,two_g_re,two_g_im";
        if header.trim() != expected {
            return Err(format!("waveform table header must be '{expected}'"));
        }
        let mut phases = Vec::new();
        let mut delta_omega = Vec::new();
        let mut two_g = Vec::new();
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 4 {
                return Err(format!("row {}: expected 4 fields", i + 2));
            }
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("row {}: {e}", i + 2));
            let u = parse(fields[0])?;
            if !(0.0..1.0).contains(&u) {
                return Err(format!("row {}: phase {u} outside [0, 1)", i + 2));
            }
            if let Some(&last) = phases.last() {
                if u <= last {
                    return Err(format!("row {}: phases must be strictly increasing", i + 2));
                }
            }
            phases.push(u);
            delta_omega.push(parse(fields[1])?);
            two_g.push(Complex64::new(parse(fields[2])?, parse(fields[3])?));
        }
        if phases.len() < 2 {
            return Err("waveform table needs at least two rows".into());
        }
        Ok(Self { phases, delta_omega, two_g, omega0 })
    }

    fn interp(&self, values_at: impl Fn(usize) -> f64, u: f64) -> f64 {
        let u = u.rem_euclid(1.0);
        let n = self.phases.len();
        // find the segment [phase[i], phase[i+1]) containing u, wrapping
        let (i, j, span, frac) = match self.phases.partition_point(|&p| p <= u) {
            0 => {
                // before the first knot: wrap from the last one
                let span = self.phases[0] + 1.0 - self.phases[n - 1];
                (n - 1, 0, span, u + 1.0 - self.phases[n - 1])
            }
            k if k == n => {
                let span = self.phases[0] + 1.0 - self.phases[n - 1];
                (n - 1, 0, span, u - self.phases[n - 1])
            }
            k => {
                let span = self.phases[k] - self.phases[k - 1];
                (k - 1, k, span, u - self.phases[k - 1])
            }
        };
        let w = frac / span;
        values_at(i) * (1.0 - w) + values_at(j) * w
    }

    /// δω at drive phase `u` (absolute units).
    pub fn delta_omega_at(&self, u: f64) -> f64 {
        self.interp(|i| self.delta_omega[i], u) * self.omega0
    }

    /// g at drive phase `u` (absolute units; table stores 2g, so halve).
    pub fn g_at(&self, u: f64) -> Complex64 {
        let re = self.interp(|i| self.two_g[i].re, u);
        let im = self.interp(|i| self.two_g[i].im, u);
        Complex64::new(re, im) * self.omega0 / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn defaults_validate_and_roundtrip() {
        let cfg = ScenarioConfig::default();
        cfg.validate().unwrap();
        let text = toml::to_string_pretty(&cfg).unwrap();
        let back: ScenarioConfig = toml::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn presets_parse() {
        for (name, _) in PRESETS {
            let loaded = load_scenario(&ConfigSource::Preset(name.to_string()), &[]).unwrap();
            loaded.config.validate().unwrap();
        }
        assert!(preset_text("no-such-preset").is_err());
    }

    #[test]
    fn hash_ignores_key_order() {
        let a = "[drive]\nn_pulses = 30\nmean_delta_omega = 0.02\n";
        let b = "[drive]\nmean_delta_omega = 0.02\nn_pulses = 30\n";
        let la = finish_load(toml::from_str(a).unwrap()).unwrap();
        let lb = finish_load(toml::from_str(b).unwrap()).unwrap();
        assert_eq!(la.hash, lb.hash);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let doc: toml::Value = toml::from_str("[drive]\nnot_a_field = 1\n").unwrap();
        assert!(finish_load(doc).is_err());
        let doc: toml::Value = toml::from_str("[typo_section]\nx = 1\n").unwrap();
        assert!(finish_load(doc).is_err());
    }

    #[test]
    fn set_overrides_apply_and_are_schema_checked() {
        let mut doc: toml::Value = toml::from_str("").unwrap();
        apply_set(&mut doc, "drive.detuning=-0.02").unwrap();
        apply_set(&mut doc, "drive.n_pulses=30").unwrap();
        apply_set(&mut doc, "output.compare_off_resonance=true").unwrap();
        let loaded = finish_load(doc.clone()).unwrap();
        assert_relative_eq!(loaded.config.drive.detuning, -0.02);
        assert_eq!(loaded.config.drive.n_pulses, 30);
        assert!(loaded.config.output.compare_off_resonance);

        apply_set(&mut doc, "drive.no_such=1").unwrap();
        assert!(finish_load(doc).is_err());
    }

    #[test]
    fn sweep_axis_grid() {
        let axis = SweepAxis { name: "drive.detuning".into(), min: -0.02, max: 0.02, count: 5 };
        let v = axis.values();
        assert_eq!(v.len(), 5);
        assert_relative_eq!(v[0], -0.02);
        assert_relative_eq!(v[2], 0.0);
        assert_relative_eq!(v[4], 0.02);
        let single = SweepAxis { name: "loss.q".into(), min: 1e3, max: 1e6, count: 1 };
        assert_eq!(single.values(), vec![1e3]);
    }

    #[test]
    fn waveform_table_interpolates_periodically() {
        let text = "phase,delta_omega,two_g_re,two_g_im\n0.0,0.0,0.0,0.0\n0.5,0.04,0.0,0.02\n";
        let table = WaveformTable::parse(text, 1.0).unwrap();
        assert_relative_eq!(table.delta_omega_at(0.25), 0.02);
        assert_relative_eq!(table.delta_omega_at(0.5), 0.04);
        // wraps: phase 0.75 is halfway back down
        assert_relative_eq!(table.delta_omega_at(0.75), 0.02);
        assert_relative_eq!(table.delta_omega_at(1.25), 0.02);
        // table stores 2g
        assert_relative_eq!(table.g_at(0.5).im, 0.01);
    }

    #[test]
    fn waveform_table_rejects_bad_rows() {
        assert!(WaveformTable::parse("phase,delta_omega\n0,0\n", 1.0).is_err());
        assert!(WaveformTable::parse(
            "phase,delta_omega,two_g_re,two_g_im\n0.5,0,0,0\n0.2,0,0,0\n",
            1.0
        )
        .is_err());
        assert!(WaveformTable::parse(
            "phase,delta_omega,two_g_re,two_g_im\n1.5,0,0,0\n",
            1.0
        )
        .is_err());
    }

    #[test]
    fn scenario_conversions() {
        let cfg = ScenarioConfig::default();
        let drive = cfg.drive_spec();
        assert_relative_eq!(drive.omega_drive, 2.04);
        assert_relative_eq!(drive.two_g().im, 0.01);
        let atoms = cfg.atom_params().unwrap();
        assert_relative_eq!(atoms.omega0 / atoms.kappa, 5e6);
        assert_relative_eq!(atoms.transit_rate(), 2e-7);
        let loss = cfg.cavity_loss().unwrap();
        assert!(loss.q.is_infinite());
    }
}
