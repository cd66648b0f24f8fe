//! Command-line front end: `simulate`, `sweep`, `plan`, and `detect`
//! subcommands over a sectioned TOML scenario file.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure
//! (symplectic-invariant drift beyond tolerance).

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::detection::feasibility;
use crate::error::{Error, Result};
use crate::planner::plan;
use crate::squeezing::{
    dce_threshold, effective_squeezing_rate, integrate, rwa_photon_number, IntegrationOptions,
    Trajectory,
};
use config::{
    finish_load, load_scenario, set_path, ConfigSource, FigureKind, LoadedConfig, ScenarioConfig,
};
use output::{RunRecord, Sidecar, SimRow, SweepRow};

#[derive(Debug, Parser)]
#[command(
    name = "dce",
    version,
    about = "Photon creation with a laser-pulsed plasma mirror and its detection with Rydberg atoms"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a photon-creation run; write CSV, plot script and metadata
    Simulate(RunArgs),
    /// Scan a parameter grid; one CSV row per point
    Sweep(RunArgs),
    /// Experiment-design report (required vs achievable squeezing rate)
    Plan(RunArgs),
    /// Detection-feasibility report for a given photon count
    Detect(DetectArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario file (TOML); defaults apply for missing sections
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset: fig1, fig2, nominal
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override a config key, e.g. --set drive.detuning=-0.02 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads for sweep grids (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Photon count to assume present (overrides [detect] n_gamma)
    #[arg(long)]
    n_gamma: Option<f64>,
}

/// Parses the command line and runs the requested subcommand, returning the
/// process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args).map(|_| ()),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Plan(args) => cmd_plan(args),
        Command::Detect(args) => cmd_detect(args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::IntegrationFailure { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn resolve_source(args: &RunArgs) -> ConfigSource {
    if let Some(path) = &args.config {
        ConfigSource::File(path.clone())
    } else if let Some(name) = &args.preset {
        ConfigSource::Preset(name.clone())
    } else {
        ConfigSource::Defaults
    }
}

fn table_root(args: &RunArgs) -> PathBuf {
    args.config
        .as_ref()
        .and_then(|p| p.parent().map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// One integrated scenario: both formulations, analytic series, excitation
/// column, drift and validity statistics.
struct SimOutput {
    rows: Vec<SimRow>,
    max_drift_canonical: f64,
    max_drift_instantaneous: f64,
    validity_violations: usize,
}

fn simulate_scenario(config: &ScenarioConfig, root: &Path) -> Result<SimOutput> {
    let schedule = config.canonical_schedule(root)?;
    let drive = config.effective_drive(&schedule)?;
    let opts = IntegrationOptions {
        step: drive.pulse_period() / config.integration.steps_per_pulse as f64,
        sample_stride: config.integration.sample_stride as usize,
        drift_tolerance: config.integration.drift_tolerance,
    };
    let canonical = integrate(&schedule, drive.t1(), &opts)?;
    let instantaneous = integrate(&schedule.to_instantaneous()?, drive.t1(), &opts)?;

    let atoms = config.atom_params()?;
    let n_series: Vec<(f64, f64)> = canonical
        .states
        .iter()
        .map(|s| Ok((s.t, s.photon_number(0)?)))
        .collect::<Result<_>>()?;
    let n_e = crate::detection::excitation_during_dce(&atoms, &n_series);

    let period = drive.pulse_period();
    let mut validity_violations = 0usize;
    let mut rows = Vec::with_capacity(canonical.states.len());
    for (i, s) in canonical.states.iter().enumerate() {
        if schedule.model_validity_ratio(s.t)? > crate::cavity_modes::MODEL_VALIDITY_LIMIT {
            validity_violations += 1;
        }
        rows.push(SimRow {
            t: s.t,
            n_pulse: s.t / period,
            re_a: s.a[(0, 0)].re,
            im_a: s.a[(0, 0)].im,
            re_b: s.b[(0, 0)].re,
            im_b: s.b[(0, 0)].im,
            n_canonical: n_series[i].1,
            n_instantaneous: instantaneous.states[i].photon_number(0)?,
            n_rwa: rwa_photon_number(&drive, s.t),
            n_e: n_e[i].1,
        });
    }
    if validity_violations > 0 {
        log::warn!(
            "coupling-model validity exceeded (|delta omega|/omega0 > 0.1) at {validity_violations} samples"
        );
    }
    Ok(SimOutput {
        rows,
        max_drift_canonical: canonical.max_drift,
        max_drift_instantaneous: instantaneous.max_drift,
        validity_violations,
    })
}

/// Detuned companion scenario driven at the naive `Ω = 2ω₀`.
fn off_resonance_config(config: &ScenarioConfig) -> ScenarioConfig {
    let mut off = config.clone();
    off.drive.detuning = -config.drive.mean_delta_omega;
    off
}

fn cmd_simulate(args: &RunArgs) -> Result<RunRecord> {
    let loaded = load_scenario(&resolve_source(args), &args.set)?;
    let config = &loaded.config;
    let root = table_root(args);
    std::fs::create_dir_all(&args.out)?;

    let main = simulate_scenario(config, &root)?;
    let want_pair =
        config.output.compare_off_resonance || config.output.figure == FigureKind::Fig1;
    let off = if want_pair {
        Some(simulate_scenario(&off_resonance_config(config), &root)?)
    } else {
        None
    };

    std::fs::write(args.out.join("simulate.csv"), output::simulate_csv(&main.rows))?;
    if let Some(off) = &off {
        std::fs::write(
            args.out.join("simulate_off_resonance.csv"),
            output::simulate_csv(&off.rows),
        )?;
    }
    match config.output.figure {
        FigureKind::Fig1 => std::fs::write(
            args.out.join("fig1.gp"),
            output::fig1_script("simulate.csv", "simulate_off_resonance.csv"),
        )?,
        FigureKind::Fig2 => {
            std::fs::write(args.out.join("fig2.gp"), output::fig2_script("simulate.csv"))?
        }
        FigureKind::None => {}
    }

    let final_row = main.rows.last().expect("run has samples");
    let atoms = config.atom_params()?;
    let conditions = feasibility(&atoms, final_row.n_canonical).conditions;
    let record = RunRecord::new(loaded.hash.clone(), main.rows.clone(), conditions);

    write_common_outputs(args, config, &loaded, &main)?;
    println!(
        "simulate: {} pulses -> n_gamma canonical {:.4e}, instantaneous {:.4e}, rwa {:.4e}",
        config.drive.n_pulses, final_row.n_canonical, final_row.n_instantaneous, final_row.n_rwa
    );
    println!(
        "max symplectic drift: canonical {:.3e}, instantaneous {:.3e}",
        main.max_drift_canonical, main.max_drift_instantaneous
    );
    Ok(record)
}

fn write_common_outputs(
    args: &RunArgs,
    config: &ScenarioConfig,
    loaded: &LoadedConfig,
    main: &SimOutput,
) -> Result<()> {
    let echo = toml::to_string_pretty(config)
        .map_err(|e| Error::InvalidConfig(format!("config echo failed: {e}")))?;
    std::fs::write(args.out.join("config_echo.toml"), echo)?;
    let record_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    output::write_sidecar(
        &args.out.join("run.meta.toml"),
        &Sidecar {
            scenario_hash: &loaded.hash,
            timestamp_unix: record_time,
            tool_version: env!("CARGO_PKG_VERSION"),
            max_drift_canonical: main.max_drift_canonical,
            max_drift_instantaneous: main.max_drift_instantaneous,
            validity_violations: main.validity_violations,
        },
    )?;
    Ok(())
}

/// Final state of one sweep grid point (canonical formulation).
fn sweep_point(config: &ScenarioConfig, root: &Path) -> Result<SweepRow> {
    let schedule = config.canonical_schedule(root)?;
    let drive = config.effective_drive(&schedule)?;
    let opts = IntegrationOptions {
        step: drive.pulse_period() / config.integration.steps_per_pulse as f64,
        sample_stride: config.integration.sample_stride as usize,
        drift_tolerance: config.integration.drift_tolerance,
    };
    let traj: Trajectory = integrate(&schedule, drive.t1(), &opts)?;
    let n_final = traj.final_state().photon_number(0)?;
    let chi = effective_squeezing_rate(&drive).value;
    let loss = config.cavity_loss()?;
    let atoms = config.atom_params()?;
    let detection_ok = feasibility(&atoms, n_final).all_pass();
    Ok(SweepRow {
        axis_values: Vec::new(),
        n_gamma_final: n_final,
        chi_re: chi.re / config.drive.omega0,
        chi_im: chi.im / config.drive.omega0,
        threshold_ok: dce_threshold(&drive, &loss),
        detection_ok,
    })
}

fn cmd_sweep(args: &RunArgs) -> Result<()> {
    let loaded = load_scenario(&resolve_source(args), &args.set)?;
    let axes = loaded.config.sweep.axes.clone();
    if axes.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs at least one [[sweep.axes]] entry".into(),
        ));
    }
    let root = table_root(args);
    std::fs::create_dir_all(&args.out)?;

    // cartesian grid in axis declaration order
    let grids: Vec<Vec<f64>> = axes.iter().map(|a| a.values()).collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for grid in &grids {
        points = points
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }

    let run_point = |values: &Vec<f64>| -> Result<SweepRow> {
        let mut doc = loaded.base.clone();
        for (axis, v) in axes.iter().zip(values) {
            set_path(&mut doc, &axis.name, toml::Value::Float(*v))?;
        }
        let point = finish_load(doc)?;
        let mut row = sweep_point(&point.config, &root)?;
        row.axis_values = values.clone();
        Ok(row)
    };

    let mut rows: Vec<SweepRow> = match args.workers {
        Some(workers) => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
            pool.install(|| points.par_iter().map(run_point).collect::<Result<Vec<_>>>())?
        }
        None => {
            use rayon::prelude::*;
            points.par_iter().map(run_point).collect::<Result<Vec<_>>>()?
        }
    };

    // deterministic row order: lexicographic in the axis values
    rows.sort_by(|a, b| {
        for (x, y) in a.axis_values.iter().zip(&b.axis_values) {
            match x.total_cmp(y) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });

    let names: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    std::fs::write(args.out.join("sweep.csv"), output::sweep_csv(&names, &rows))?;
    let best = rows
        .iter()
        .max_by(|a, b| a.n_gamma_final.total_cmp(&b.n_gamma_final))
        .expect("grid is non-empty");
    println!(
        "sweep: {} points -> best n_gamma {:.4e} at {:?}",
        rows.len(),
        best.n_gamma_final,
        best.axis_values
    );
    Ok(())
}

fn cmd_plan(args: &RunArgs) -> Result<()> {
    let loaded = load_scenario(&resolve_source(args), &args.set)?;
    let config = &loaded.config;
    std::fs::create_dir_all(&args.out)?;
    let input = config.plan_input()?;
    let report = plan(&input)?;
    let text = output::plan_text(&report, config.drive.omega0, config.atoms.omega0_si);
    std::fs::write(args.out.join("plan.txt"), &text)?;
    std::fs::write(
        args.out.join("plan_conditions.csv"),
        output::conditions_csv(&report.detection.conditions),
    )?;
    print!("{text}");
    Ok(())
}

fn cmd_detect(args: &DetectArgs) -> Result<()> {
    let loaded = load_scenario(&resolve_source(&args.run), &args.run.set)?;
    let config = &loaded.config;
    std::fs::create_dir_all(&args.run.out)?;
    let n_gamma = args.n_gamma.unwrap_or(config.detect.n_gamma);
    if !(n_gamma >= 0.0) {
        return Err(Error::InvalidConfig(format!("n_gamma {n_gamma} must be >= 0")));
    }
    let atoms = config.atom_params()?;
    let report = feasibility(&atoms, n_gamma);
    let text = output::detection_text(&report, config.drive.omega0, config.atoms.omega0_si);
    std::fs::write(args.run.out.join("detect.txt"), &text)?;
    std::fs::write(
        args.run.out.join("detect_conditions.csv"),
        output::conditions_csv(&report.conditions),
    )?;
    print!("{text}");
    Ok(())
}
