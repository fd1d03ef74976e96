use std::path::PathBuf;
use std::process::ExitCode;

use battery_cli::{
    emit, golden, produce, resolve, CliError, Command, ConfigFile, OutputFormat, Overrides,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "qbattery",
    version,
    about = "Collective-spin quantum battery charged by a squeezed reservoir"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Steady-state metrics at one point (or along --sweep).
    Steady(Common),
    /// Steady-state metrics along --sweep.
    Sweep(Common),
    /// Time series of the battery metrics plus a power summary.
    Evolve(Common),
    /// Peak charging powers along --sweep (default n:1:6:6).
    PowerScaling(Common),
    /// Continuous, quenched and vacuum protocols side by side.
    Quench(Common),
    /// Regenerate the golden data and compare it with the stored CSVs.
    GoldenCheck {
        /// Directory of golden cases (defaults to the one shipped with the crate).
        #[arg(long)]
        golden_dir: Option<PathBuf>,
        /// Overwrite the stored CSVs instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

/// Angles accept expressions such as `pi/3` or `0.46pi`.
#[derive(Args)]
struct Common {
    /// TOML scenario file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of charger spins.
    #[arg(long)]
    nc: Option<usize>,
    /// Number of battery spins.
    #[arg(long)]
    nb: Option<usize>,
    /// Polar angle of the charger's coherent spin state.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Azimuthal angle of the charger's coherent spin state.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Relative phase; overrides --phi/--varphi and sets phi = 0.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Squeezing strength.
    #[arg(long)]
    r: Option<f64>,
    /// Squeezing phase.
    #[arg(long, allow_hyphen_values = true)]
    varphi: Option<String>,
    /// Collective decay rate.
    #[arg(long)]
    gamma: Option<f64>,
    /// Quench time (`inf` for continuous squeezing).
    #[arg(long)]
    tq: Option<String>,
    /// Final time of a dynamics run.
    #[arg(long)]
    t_end: Option<f64>,
    /// Number of output times in [0, t_end].
    #[arg(long)]
    grid: Option<usize>,
    /// `axis:start:stop:count` with axis one of theta, delta, r, n.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, json or svg.
    #[arg(long, default_value = "csv")]
    format: String,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            nc: self.nc,
            nb: self.nb,
            theta: self.theta.clone(),
            phi: self.phi.clone(),
            delta: self.delta.clone(),
            r: self.r,
            varphi: self.varphi.clone(),
            gamma: self.gamma,
            tq: self.tq.clone(),
            t_end: self.t_end,
            grid: self.grid,
            sweep: self.sweep.clone(),
        }
    }
}

fn execute(command: Command, args: &Common) -> Result<(), CliError> {
    let file = args.config.as_deref().map(ConfigFile::load).transpose()?;
    let scenario = resolve(file.as_ref(), &args.overrides())?;
    let format: OutputFormat = args.format.parse()?;
    let outputs = produce(command, &scenario)?;
    for path in emit(&outputs, args.out.as_deref(), format)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn golden_check(dir: Option<PathBuf>, bless: bool) -> Result<(), CliError> {
    let dir = dir.unwrap_or_else(golden::default_dir);
    let reports = golden::check(&dir, bless)?;
    let mut failed = Vec::new();
    for r in &reports {
        let status = if bless {
            "WROTE"
        } else if r.passed() {
            "ok"
        } else {
            "MISMATCH"
        };
        println!("{status:8} {} (worst/tolerance {:.3e})", r.file, r.worst);
        if !r.passed() {
            failed.push(r.file.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Golden(failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Steady(a) => execute(Command::Steady, a),
        Cmd::Sweep(a) => execute(Command::Sweep, a),
        Cmd::Evolve(a) => execute(Command::Evolve, a),
        Cmd::PowerScaling(a) => execute(Command::PowerScaling, a),
        Cmd::Quench(a) => execute(Command::Quench, a),
        Cmd::GoldenCheck { golden_dir, bless } => golden_check(golden_dir.clone(), *bless),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
