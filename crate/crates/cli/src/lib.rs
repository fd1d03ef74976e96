//! Experiment runner for the collective-spin quantum battery: scenario
//! configuration, steady-state and dynamics sweeps, CSV/JSON/SVG output and
//! a golden-data regression suite.

// Negated comparisons are how parameter checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod golden;
pub mod run;
pub mod scenario;
pub mod table;

use std::path::{Path, PathBuf};

pub use error::CliError;
pub use run::{DynamicsRun, PowerReport};
pub use scenario::{
    parse_angle, resolve, ConfigFile, OutputFormat, Overrides, Scenario, Sweep, SweepAxis,
};
pub use table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Steady,
    Sweep,
    Evolve,
    PowerScaling,
    Quench,
}

impl std::str::FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "steady" => Ok(Self::Steady),
            "sweep" => Ok(Self::Sweep),
            "evolve" => Ok(Self::Evolve),
            "power-scaling" => Ok(Self::PowerScaling),
            "quench" => Ok(Self::Quench),
            other => Err(CliError::Config(format!("unknown command '{other}'"))),
        }
    }
}

/// One table produced by a command, with its optional power sidecar.
#[derive(Debug, Clone)]
pub struct Output {
    /// Distinguishes several tables of one command (quench protocols).
    pub suffix: Option<&'static str>,
    pub table: Table,
    pub power: Option<PowerReport>,
}

pub fn produce(command: Command, scenario: &Scenario) -> Result<Vec<Output>, CliError> {
    let single = |table: Table, power: Option<PowerReport>| {
        vec![Output {
            suffix: None,
            table,
            power,
        }]
    };
    Ok(match command {
        Command::Steady => single(run::run_steady_sweep(scenario)?, None),
        Command::Sweep => {
            if scenario.sweep.is_none() {
                return Err(CliError::Config(
                    "sweep needs --sweep axis:start:stop:count".into(),
                ));
            }
            single(run::run_steady_sweep(scenario)?, None)
        }
        Command::Evolve => {
            let run = run::run_dynamics(scenario)?;
            single(run.table, Some(run.power))
        }
        Command::PowerScaling => single(run::run_power_sweep(scenario)?, None),
        Command::Quench => run::run_quench(scenario)?
            .into_iter()
            .map(|(name, run)| Output {
                suffix: Some(name),
                table: run.table,
                power: Some(run.power),
            })
            .collect(),
    })
}

/// `dir/stem[.suffix].ext` for an output path `dir/stem.ext`.
pub fn derived_path(out: &Path, suffix: Option<&str>, ext: &str) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let name = match suffix {
        Some(s) => format!("{stem}.{s}.{ext}"),
        None => format!("{stem}.{ext}"),
    };
    out.with_file_name(name)
}

/// Writes every output in the requested format. Dynamics outputs also get a
/// `<stem>.power.json` sidecar. Without a path, a single table goes to
/// standard output and its sidecar to standard error.
pub fn emit(
    outputs: &[Output],
    out: Option<&Path>,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, CliError> {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
        OutputFormat::Svg => "svg",
    };
    let render = |t: &Table| match format {
        OutputFormat::Csv => t.to_csv(),
        OutputFormat::Json => t.to_json(),
        OutputFormat::Svg => t.to_svg(None),
    };
    let mut written = Vec::new();
    match out {
        None => {
            if outputs.len() != 1 {
                return Err(CliError::Config(
                    "this command writes several files; pass --out".into(),
                ));
            }
            table::write_output(None, &render(&outputs[0].table)?)?;
            if let Some(p) = &outputs[0].power {
                let json =
                    serde_json::to_string_pretty(p).map_err(|e| CliError::Output(e.to_string()))?;
                eprintln!("{json}");
            }
        }
        Some(path) => {
            for o in outputs {
                let target = match o.suffix {
                    Some(_) => derived_path(path, o.suffix, ext),
                    None => path.to_path_buf(),
                };
                table::write_output(Some(&target), &render(&o.table)?)?;
                written.push(target);
                if let Some(p) = &o.power {
                    let suffix = match o.suffix {
                        Some(s) => format!("{s}.power"),
                        None => "power".into(),
                    };
                    let sidecar = derived_path(path, Some(suffix.as_str()), "json");
                    let json = serde_json::to_string_pretty(p)
                        .map_err(|e| CliError::Output(e.to_string()))?;
                    table::write_output(Some(&sidecar), &(json + "\n"))?;
                    written.push(sidecar);
                }
            }
        }
    }
    Ok(written)
}
