//! CSV, gnuplot-script, sidecar and report emission.
//!
//! Data files are deterministic: identical configs produce byte-identical
//! CSV (comma separator, `.` decimal, header row, LF endings, no
//! timestamps). Run metadata lives in a `*.meta.toml` sidecar instead.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::detection::{Condition, DetectionReport, Relation};
use crate::error::Result;
use crate::planner::PlanReport;

/// One emitted sample of a simulate run.
#[derive(Debug, Clone, Copy)]
pub struct SimRow {
    pub t: f64,
    pub n_pulse: f64,
    pub re_a: f64,
    pub im_a: f64,
    pub re_b: f64,
    pub im_b: f64,
    pub n_canonical: f64,
    pub n_instantaneous: f64,
    pub n_rwa: f64,
    pub n_e: f64,
}

pub const SIMULATE_HEADER: &str =
    "t,n_pulse,re_a,im_a,re_b,im_b,n_canonical,n_instantaneous,n_rwa,n_e";

/// Scenario record: the data rows plus identification and the condition
/// table evaluated at the final photon count. Timestamps go to the sidecar
/// only, so data files stay reproducible.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub scenario_hash: String,
    pub timestamp_unix: u64,
    pub rows: Vec<SimRow>,
    pub conditions: Vec<Condition>,
}

impl RunRecord {
    pub fn new(scenario_hash: String, rows: Vec<SimRow>, conditions: Vec<Condition>) -> Self {
        let timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self { scenario_hash, timestamp_unix, rows, conditions }
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:e}")
}

pub fn simulate_csv(rows: &[SimRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96 + 64);
    out.push_str(SIMULATE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_f(r.t),
            fmt_f(r.n_pulse),
            fmt_f(r.re_a),
            fmt_f(r.im_a),
            fmt_f(r.re_b),
            fmt_f(r.im_b),
            fmt_f(r.n_canonical),
            fmt_f(r.n_instantaneous),
            fmt_f(r.n_rwa),
            fmt_f(r.n_e),
        );
    }
    out
}

/// One grid point of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    pub n_gamma_final: f64,
    pub chi_re: f64,
    pub chi_im: f64,
    pub threshold_ok: bool,
    pub detection_ok: bool,
}

pub fn sweep_csv(axis_names: &[String], rows: &[SweepRow]) -> String {
    let mut out = String::new();
    for name in axis_names {
        out.push_str(name);
        out.push(',');
    }
    out.push_str("n_gamma_final,chi_re,chi_im,threshold_ok,detection_ok\n");
    for r in rows {
        for v in &r.axis_values {
            out.push_str(&fmt_f(*v));
            out.push(',');
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f(r.n_gamma_final),
            fmt_f(r.chi_re),
            fmt_f(r.chi_im),
            u8::from(r.threshold_ok),
            u8::from(r.detection_ok),
        );
    }
    out
}

pub fn conditions_csv(conditions: &[Condition]) -> String {
    let mut out = String::from("name,inequality,lhs,rhs,relation,pass,order_of_magnitude\n");
    for c in conditions {
        let rel = match c.relation {
            Relation::Ge => ">=",
            Relation::Le => "<=",
        };
        let _ = writeln!(
            out,
            "{},\"{}\",{},{},{},{},{}",
            c.name,
            c.inequality,
            fmt_f(c.lhs),
            fmt_f(c.rhs),
            rel,
            u8::from(c.pass),
            u8::from(c.order_of_magnitude),
        );
    }
    out
}

/// Gnuplot script for the early-growth layout: linear axes, resonant and
/// detuned runs overlaid, canonical solid / instantaneous dashed.
pub fn fig1_script(resonant_csv: &str, detuned_csv: &str) -> String {
    format!(
        "# photon growth over the first pulses: resonant vs detuned drive\n\
         set datafile separator ','\n\
         set key left top\n\
         set xlabel 'pulse number'\n\
         set ylabel 'photon number'\n\
         set style line 1 lw 2\n\
         plot '{resonant_csv}' using 2:7 with lines lw 2 title 'resonant, canonical', \\\n\
         \x20    '{resonant_csv}' using 2:8 with lines dt 3 lw 2 title 'resonant, instantaneous', \\\n\
         \x20    '{detuned_csv}' using 2:7 with lines lw 2 title 'detuned, canonical', \\\n\
         \x20    '{detuned_csv}' using 2:8 with lines dt 3 lw 2 title 'detuned, instantaneous'\n"
    )
}

/// Gnuplot script for the full-sequence layout: log photon axis, canonical,
/// instantaneous and analytic curves.
pub fn fig2_script(csv: &str) -> String {
    format!(
        "# photon growth over the full pulse sequence (log scale)\n\
         set datafile separator ','\n\
         set key left top\n\
         set xlabel 'pulse number'\n\
         set ylabel 'photon number'\n\
         set logscale y\n\
         set format y '10^{{%T}}'\n\
         plot '{csv}' using 2:7 with lines lw 2 title 'canonical', \\\n\
         \x20    '{csv}' using 2:8 with lines dt 3 lw 2 title 'instantaneous', \\\n\
         \x20    '{csv}' using 2:9 with lines dt 2 title 'rotating-wave'\n"
    )
}

/// Run metadata sidecar (the only place timestamps appear).
#[derive(Debug, Serialize)]
pub struct Sidecar<'a> {
    pub scenario_hash: &'a str,
    pub timestamp_unix: u64,
    pub tool_version: &'a str,
    pub max_drift_canonical: f64,
    pub max_drift_instantaneous: f64,
    /// Samples where |δω(t)|/ω₀ exceeded the coupling-model validity limit.
    pub validity_violations: usize,
}

pub fn write_sidecar(path: &Path, sidecar: &Sidecar) -> Result<()> {
    let text = toml::to_string_pretty(sidecar)
        .expect("sidecar serializes");
    fs::write(path, text)?;
    Ok(())
}

fn push_conditions_text(out: &mut String, conditions: &[Condition]) {
    let _ = writeln!(
        out,
        "{:<24} {:>13} {:>4} {:>13}  verdict",
        "condition", "lhs", "", "rhs"
    );
    for c in conditions {
        let rel = match c.relation {
            Relation::Ge => ">=",
            Relation::Le => "<=",
        };
        let _ = writeln!(
            out,
            "{:<24} {:>13.4e} {:>4} {:>13.4e}  {}{}",
            c.name,
            c.lhs,
            rel,
            c.rhs,
            if c.pass { "pass" } else { "FAIL" },
            if c.order_of_magnitude { " (order of magnitude)" } else { "" },
        );
    }
}

/// Rates are stated both in ω₀ units and in s⁻¹ through the SI anchor.
pub fn detection_text(report: &DetectionReport, omega0: f64, omega0_si: f64) -> String {
    let to_si = omega0_si / omega0;
    let mut out = String::new();
    let _ = writeln!(out, "detection feasibility");
    let _ = writeln!(out, "=====================");
    let _ = writeln!(out, "regime:               {:?}", report.regime);
    let _ = writeln!(
        out,
        "rabi rate:            {:.4e} omega0 = {:.4e} 1/s",
        report.rabi_rate / omega0,
        report.rabi_rate * to_si
    );
    let _ = writeln!(
        out,
        "relaxation rate:      {:.4e} omega0 = {:.4e} 1/s ({:?} branch)",
        report.relax_rate / omega0,
        report.relax_rate * to_si,
        report.relax_branch
    );
    let _ = writeln!(out, "excited at transit:   {:.4e} atoms", report.n_e_at_transit);
    let _ = writeln!(
        out,
        "q window (active):    [{:.4e}, {:.4e}]",
        report.q_window.0, report.q_window.1
    );
    let _ = writeln!(
        out,
        "q window (low-Q):     [{:.4e}, {:.4e}]",
        report.q_window_low_branch.0, report.q_window_low_branch.1
    );
    let _ = writeln!(out, "q bound (high-Q):     >= {:.4e}", report.q_min_high_branch);
    let _ = writeln!(out, "branch consistent:    {}", report.regime_consistent);
    let _ = writeln!(out, "slack:                {}", report.slack);
    let _ = writeln!(out);
    push_conditions_text(&mut out, &report.conditions);
    let _ = writeln!(out);
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

pub fn plan_text(report: &PlanReport, omega0: f64, omega0_si: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "experiment plan");
    let _ = writeln!(out, "===============");
    let _ = writeln!(
        out,
        "required chi/omega0:  {:.4e}",
        report.required_chi_over_omega0
    );
    let _ = writeln!(
        out,
        "achieved chi/omega0:  {:.4e} ({:?})",
        report.achieved_chi_over_omega0, report.chain.source
    );
    let _ = writeln!(
        out,
        "delta_m / L:          {:.4e}",
        report.chain.delta_m_over_length
    );
    let _ = writeln!(
        out,
        "delta_omega/omega0:   {:.4e}{}",
        report.chain.delta_omega_over_omega0,
        if report.chain.validity_warning { "  (beyond model validity 0.1)" } else { "" }
    );
    if let Some(slab) = &report.slab_chain {
        let _ = writeln!(
            out,
            "slab-model chi:       {:.4e} (ratio primary/slab = {:.3})",
            slab.chi_over_omega0,
            report.chain_ratio.unwrap_or(f64::NAN)
        );
    }
    let _ = writeln!(
        out,
        "resonant drive:       Omega = {:.6} omega0 (mean shift {:.4e} omega0)",
        report.resonance_omega_over_omega0, report.mean_delta_omega_over_omega0
    );
    let _ = writeln!(out, "threshold chi>Gamma/2: {}", report.threshold_ok);
    let _ = writeln!(out, "predicted n_gamma:    {:.4e}", report.predicted_n_gamma);
    if let Some(n) = report.predicted_n_gamma_integrated {
        let _ = writeln!(out, "integrated n_gamma:   {:.4e}", n);
    }
    let _ = writeln!(
        out,
        "relax before repeat:  >= {:.0e} s",
        report.recommended_relax_time_s
    );
    let _ = writeln!(out);
    out.push_str(&detection_text(&report.detection, omega0, omega0_si));
    let _ = writeln!(out);
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}
