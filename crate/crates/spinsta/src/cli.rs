//! The `design` / `sweep` / `reproduce` commands.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical or
//! design failure. All datasets are CSV/JSON files written atomically;
//! reproduce bundles are deterministic for a fixed configuration.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig, SweepParamName};
use crate::output::{self, SweepData};
use crate::scenarios::{self, DesignKind, MPlan, RunOptions, Scenario, SweepParam, SweepPlan};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "spinsta",
    about = "Invariant-based shortcut pulses for interacting spins: design, robustness sweeps, dataset reproduction",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Design a pulse: write its samples and a JSON design record.
    Design(CommonArgs),
    /// Sweep a perturbation parameter and write the fidelity curves.
    Sweep(SweepArgs),
    /// Reproduce a complete figure dataset (fig2..fig6).
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Registry scenario name.
    #[arg(long)]
    scenario: Option<String>,
    /// TOML run configuration (flags override it).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Dataset format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Integrator steps per unit time.
    #[arg(long)]
    steps: Option<usize>,
    /// Quadrature absolute tolerance.
    #[arg(long)]
    quad_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sweep parameter (delta or D).
    #[arg(long)]
    param: Option<String>,
    /// Sweep grid lo:hi:step (inclusive).
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// Figure id: fig2, fig3, fig4, fig5 or fig6.
    figure: String,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Integrator steps per unit time.
    #[arg(long)]
    steps: Option<usize>,
}

/// Parse argv and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage problems are exit 2
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Design(args) => cmd_design(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Reproduce(args) => cmd_reproduce(&args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::UnknownScenario(_)
        | Error::BasisMismatch { .. }
        | Error::OutsideSupport { .. }
        | Error::NoCrossing => 2,
        _ => 3,
    }
}

#[derive(Debug)]
struct Effective {
    scenario: Scenario,
    opts: RunOptions,
    out: PathBuf,
    format: OutputFormat,
}

fn effective(common: &CommonArgs) -> Result<Effective> {
    let config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let scenario = match common.scenario.as_deref().or(config.scenario.as_deref()) {
        Some(name) => scenarios::find(name)?,
        None => scenario_from_config(&config)?,
    };
    let mut opts = RunOptions::default();
    if let Some(steps) = common.steps.or(config.steps_per_unit) {
        if steps == 0 {
            return Err(Error::Config("steps must be positive".into()));
        }
        opts.steps_per_unit = steps;
    }
    if let Some(tol) = common.quad_tol.or(config.quad_tol) {
        if tol <= 0.0 {
            return Err(Error::Config("quad tolerance must be positive".into()));
        }
        opts.quad_tol = tol;
    }
    if let Some(sweep) = &config.sweep {
        opts.sweep_override = Some(SweepPlan {
            param: param_for(&scenario, sweep.param)?,
            lo: sweep.lo,
            hi: sweep.hi,
            step: sweep.step,
        });
    }
    let out = config
        .out
        .clone()
        .filter(|_| common.out == Path::new("out"))
        .unwrap_or_else(|| common.out.clone());
    let format = match common.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => config.format.unwrap_or(OutputFormat::Csv),
    };
    Ok(Effective {
        scenario,
        opts,
        out,
        format,
    })
}

/// Build an ad-hoc scenario from the inline `[model]`/`[ansatz]` blocks.
fn scenario_from_config(config: &RunConfig) -> Result<Scenario> {
    let model = config
        .model
        .ok_or_else(|| Error::Config("no scenario name and no inline [model] block".into()))?;
    let ansatz = config
        .ansatz
        .ok_or_else(|| Error::Config("inline scenario needs an [ansatz] block".into()))?;
    let initial = config.initial.unwrap_or(0);
    let target = config
        .target
        .ok_or_else(|| Error::Config("inline scenario needs a target state index".into()))?;
    if initial >= model.dim || target >= model.dim {
        return Err(Error::Config(format!(
            "state indices must be below dim {}",
            model.dim
        )));
    }
    if (ansatz.kappa.value() - model.kappa()).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "ansatz kappa {} does not match the {:?} representation (κ = {})",
            ansatz.kappa.value(),
            model.kind,
            model.kappa()
        )));
    }
    let m = match ansatz.m_family {
        crate::pulse::MFamily::AlphaForm { alpha } => MPlan::Alpha { alpha },
        crate::pulse::MFamily::NForm { n } => MPlan::NForm { n },
        crate::pulse::MFamily::Zero => MPlan::Zero,
    };
    Ok(Scenario {
        name: "custom",
        title: "user-supplied scenario",
        model,
        design: DesignKind::Shortcut {
            theta: ansatz.theta_family,
            m,
        },
        duration: ansatz.duration,
        initial,
        target,
        sweep: None,
        sensitivity: None,
        stretch: 1.0,
        with_composite: false,
    })
}

fn param_for(scenario: &Scenario, name: SweepParamName) -> Result<SweepParam> {
    Ok(match name {
        SweepParamName::D => {
            let dm_capable = matches!(
                scenario.model.kind,
                crate::spinmodel::InteractionKind::HeisenbergDm
            );
            if !dm_capable {
                return Err(Error::Config(format!(
                    "scenario `{}` has no DM strength to sweep; use --param delta",
                    scenario.name
                )));
            }
            SweepParam::DmStrength
        }
        SweepParamName::Delta => match scenario.sweep.map(|p| p.param) {
            // keep each scenario's own meaning of δ
            Some(p) if p != SweepParam::DmStrength => p,
            _ => SweepParam::Systematic,
        },
    })
}

fn parse_range(range: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "range must be lo:hi:step, got `{range}`"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number `{p}` in range")))
        })
        .collect::<Result<_>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || hi < lo {
        return Err(Error::Config(format!("empty range `{range}`")));
    }
    Ok((lo, hi, step))
}

fn scenario_dir(out: &Path, scenario: &Scenario) -> PathBuf {
    out.join(scenario.name)
}

/// `design`: pulse samples plus the JSON design record.
fn cmd_design(args: &CommonArgs) -> Result<()> {
    let eff = effective(args)?;
    let mut opts = eff.opts;
    opts.with_sweep = false;
    let run = scenarios::run(&eff.scenario, &opts)?;
    let dir = scenario_dir(&eff.out, &eff.scenario);
    let samples = run.design.pulse.samples(crate::pulse::DEFAULT_SAMPLES);
    output::write_pulse_csv(&dir.join("pulse.csv"), &samples)?;
    let target = crate::dynamics::QuantumState::basis_state(
        eff.scenario.model.dim,
        eff.scenario.target,
        run.sim.basis,
    );
    output::write_trajectory_csv(
        &dir.join("populations.csv"),
        &run.sim,
        &run.design.pulse,
        &target.amps,
    )?;
    output::write_json(&dir.join("design.json"), &run.record)?;
    println!(
        "designed `{}`: F = {:.9}, files in {}",
        eff.scenario.name,
        run.record.final_fidelity,
        dir.display()
    );
    Ok(())
}

fn write_sweep(dir: &Path, data: &SweepData, format: OutputFormat) -> Result<PathBuf> {
    let path = match format {
        OutputFormat::Csv => dir.join(format!("sweep_{}_{}.csv", data.param, data.name)),
        OutputFormat::Json => dir.join(format!("sweep_{}_{}.json", data.param, data.name)),
    };
    match format {
        OutputFormat::Csv => output::write_sweep_csv(&path, data)?,
        OutputFormat::Json => output::write_json(&path, data)?,
    }
    Ok(path)
}

/// `sweep`: fidelity curves over the perturbation grid.
fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let mut eff = effective(&args.common)?;
    let plan_param = match &args.param {
        Some(p) => Some(param_for(&eff.scenario, p.parse()?)?),
        None => None,
    };
    let base = eff
        .opts
        .sweep_override
        .or(eff.scenario.sweep)
        .unwrap_or(SweepPlan {
            param: SweepParam::Systematic,
            lo: -0.5,
            hi: 0.5,
            step: 0.01,
        });
    let (lo, hi, step) = match &args.range {
        Some(r) => parse_range(r)?,
        None => (base.lo, base.hi, base.step),
    };
    eff.opts.sweep_override = Some(SweepPlan {
        param: plan_param.unwrap_or(base.param),
        lo,
        hi,
        step,
    });
    eff.opts.with_sim_fit = false;
    let run = scenarios::run(&eff.scenario, &eff.opts)?;
    if run.sweeps.is_empty() {
        return Err(Error::Config(format!(
            "scenario `{}` has no sweepable parameter",
            eff.scenario.name
        )));
    }
    let dir = scenario_dir(&eff.out, &eff.scenario);
    for data in &run.sweeps {
        let path = write_sweep(&dir, data, eff.format)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: u32,
    figure: &'a str,
    scenario: &'a str,
    parameters: &'a scenarios::DesignRecord,
    files: Vec<String>,
}

/// `reproduce`: every sub-panel dataset of one figure plus a manifest.
fn cmd_reproduce(args: &ReproduceArgs) -> Result<()> {
    let scenario_name = match args.figure.as_str() {
        "fig2" => "heis-flip-optimal",
        "fig3" => "heis-flip-dm",
        "fig4" => "ising-bell-amp",
        "fig5" => "ising-bell-dm",
        "fig6" => "baselines-compare",
        other => {
            return Err(Error::Config(format!(
                "unknown figure id `{other}` (expected fig2..fig6)"
            )));
        }
    };
    let scenario = scenarios::find(scenario_name)?;
    let mut opts = RunOptions::default();
    if let Some(steps) = args.steps {
        opts.steps_per_unit = steps;
    }
    opts.with_sim_fit = false;
    let run = scenarios::run(&scenario, &opts)?;
    let dir = args.out.join(&args.figure);
    let mut files = Vec::new();

    if args.figure != "fig6" {
        let samples = run.design.pulse.samples(crate::pulse::DEFAULT_SAMPLES);
        output::write_pulse_csv(&dir.join("pulse.csv"), &samples)?;
        files.push("pulse.csv".to_string());
        let target = crate::dynamics::QuantumState::basis_state(
            scenario.model.dim,
            scenario.target,
            run.sim.basis,
        );
        output::write_trajectory_csv(
            &dir.join("populations.csv"),
            &run.sim,
            &run.design.pulse,
            &target.amps,
        )?;
        files.push("populations.csv".to_string());
    }
    for data in &run.sweeps {
        let path = write_sweep(&dir, data, OutputFormat::Csv)?;
        files.push(
            path.file_name()
                .and_then(|n| n.to_str())
                .unwrap_or_default()
                .to_string(),
        );
    }
    let manifest = Manifest {
        schema_version: scenarios::SCHEMA_VERSION,
        figure: &args.figure,
        scenario: scenario.name,
        parameters: &run.record,
        files,
    };
    output::write_json(&dir.join("manifest.json"), &manifest)?;
    println!("reproduced {} into {}", args.figure, dir.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-0.5:0.5:0.1").unwrap(), (-0.5, 0.5, 0.1));
        assert!(parse_range("0.5:-0.5:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("a:b:c").is_err());
    }

    #[test]
    fn unknown_scenario_is_a_config_error() {
        let args = CommonArgs {
            scenario: Some("nope".into()),
            config: None,
            out: PathBuf::from("out"),
            format: None,
            steps: None,
            quad_tol: None,
        };
        let err = effective(&args).unwrap_err();
        assert_eq!(exit_code_for(&err), 2);
    }

    #[test]
    fn numerical_errors_map_to_exit_3() {
        assert_eq!(exit_code_for(&Error::Design("x".into())), 3);
        assert_eq!(
            exit_code_for(&Error::Quadrature {
                a: 0.0,
                b: 1.0,
                err: 1.0
            }),
            3
        );
        assert_eq!(exit_code_for(&Error::UnknownScenario("x".into())), 2);
    }
}
