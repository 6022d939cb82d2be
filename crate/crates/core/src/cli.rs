//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 refused because
//! the time step is unstable, 3 the solution blew up.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::load_config;
use crate::error::{Error, Result};
use crate::output::{self, DesignReport, Summary};
use crate::scenarios::{design_depth, run_scenario, sweep, DesignPlan, ScenarioSpec, SweepParameter};
use crate::solver::diffusion_number;
use crate::units::{convert_temperature, TemperatureUnit};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_UNSTABLE: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tubheat", version, about = "Bathtub heat-conduction simulator")]
pub struct Cli {
    /// Temperature unit for reports and command-line temperatures.
    #[arg(long, global = true, value_parser = parse_unit)]
    pub units: Option<TemperatureUnit>,
    /// Run even when dt exceeds the stability limit.
    #[arg(long, global = true)]
    pub allow_unstable: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_unit(s: &str) -> std::result::Result<TemperatureUnit, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the scenario once.
    Run {
        config: PathBuf,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Steady temperature against depth, conductivity or source power.
    Sweep {
        config: PathBuf,
        /// depth | k | Q (defaults to the config's sweep block).
        #[arg(long)]
        param: Option<String>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
    /// Water depth that holds the bath at a target temperature.
    Design {
        config: PathBuf,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Report the stability limit for the configured dt without running.
    CheckStability { config: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run { .. } => "run",
            Command::Sweep { .. } => "sweep",
            Command::Design { .. } => "design",
            Command::CheckStability { .. } => "check-stability",
        }
    }

    pub fn config(&self) -> &Path {
        match self {
            Command::Run { config, .. }
            | Command::Sweep { config, .. }
            | Command::Design { config, .. }
            | Command::CheckStability { config } => config,
        }
    }
}

/// What an invocation did.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub files: Vec<PathBuf>,
    pub exit_code: i32,
    pub error_kind: Option<String>,
    pub error: Option<String>,
}

impl RunManifest {
    /// One-line JSON for stderr.
    pub fn error_line(&self) -> Option<String> {
        let kind = self.error_kind.as_ref()?;
        Some(
            serde_json::json!({
                "error": kind,
                "exit_code": self.exit_code,
                "message": self.error,
            })
            .to_string(),
        )
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Unstable { .. } => EXIT_UNSTABLE,
        Error::BlowUp { .. } => EXIT_BLOWUP,
        _ => EXIT_CONFIG,
    }
}

fn prepare(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn emit(stdout: &mut dyn Write, text: &str) {
    // A closed stdout must not turn a finished run into a failure.
    let _ = stdout.write_all(text.as_bytes());
}

/// Runs one parsed command line, writing result files and a short report
/// to `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> RunManifest {
    let mut manifest = RunManifest {
        command: cli.command.name().to_string(),
        config_path: cli.command.config().to_path_buf(),
        out_dir: None,
        files: Vec::new(),
        exit_code: EXIT_OK,
        error_kind: None,
        error: None,
    };
    if let Err(err) = dispatch(cli, stdout, &mut manifest) {
        manifest.exit_code = exit_code(&err);
        manifest.error_kind = Some(err.kind().to_string());
        manifest.error = Some(err.to_string());
    }
    manifest
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, manifest: &mut RunManifest) -> Result<()> {
    let mut spec = load_config(cli.command.config())?;
    if cli.allow_unstable {
        spec.solver.allow_unstable = true;
    }
    let unit = cli.units.unwrap_or(spec.units);

    match &cli.command {
        Command::Run { out, .. } => {
            manifest.out_dir = Some(out.clone());
            match run_scenario(&spec) {
                Ok(result) => {
                    prepare(out)?;
                    manifest.files = output::write_run(out, spec.kind.name(), &result, unit, false)?;
                    emit(stdout, &output::to_json(&Summary::new(spec.kind.name(), &result, unit, false)));
                    Ok(())
                }
                Err(Error::BlowUp { step, time, partial }) => {
                    if let Some(p) = &partial {
                        prepare(out)?;
                        manifest.files = output::write_run(out, spec.kind.name(), p, unit, true)?;
                    }
                    Err(Error::BlowUp { step, time, partial })
                }
                Err(e) => Err(e),
            }
        }
        Command::Sweep {
            param,
            values,
            out,
            parallel,
            ..
        } => {
            manifest.out_dir = Some(out.clone());
            let (param, values) = sweep_plan(&spec, param.as_deref(), values)?;
            let result = sweep(&spec, param, &values, *parallel)?;
            prepare(out)?;
            manifest.files = output::write_sweep(out, &result, unit)?;
            emit(stdout, &output::sweep_csv(&result, unit));
            Ok(())
        }
        Command::Design { target, tol, out, .. } => {
            manifest.out_dir = Some(out.clone());
            let plan = design_plan(&spec, unit, *target, *tol)?;
            let outcome = design_depth(&spec, &plan)?;
            prepare(out)?;
            let report = output::to_json(&DesignReport::new(&outcome, unit));
            manifest.files = vec![output::write_file(out, output::DESIGN_FILE, &report)?];
            emit(stdout, &report);
            Ok(())
        }
        Command::CheckStability { .. } => check_stability(&mut spec, stdout),
    }
}

fn check_stability(spec: &mut ScenarioSpec, stdout: &mut dyn Write) -> Result<()> {
    let m = spec.effective_material()?;
    let limit = spec.stability_limit()?;
    let dt = spec.solver.dt;
    let pass = dt <= limit;
    emit(
        stdout,
        &format!(
            "dt_s={dt} dt_stable_max_s={limit} r={} {}\n",
            diffusion_number(&m, &spec.grid, dt),
            if pass { "PASS" } else { "FAIL" }
        ),
    );
    if pass || spec.solver.allow_unstable {
        Ok(())
    } else {
        Err(Error::Unstable { dt, limit })
    }
}

fn sweep_plan(spec: &ScenarioSpec, param: Option<&str>, values: &[f64]) -> Result<(SweepParameter, Vec<f64>)> {
    let param = match (param, &spec.sweep) {
        (Some(p), _) => p.parse()?,
        (None, Some(plan)) => plan.param,
        (None, None) => return Err(Error::invalid("sweep.param", "give --param or a sweep block")),
    };
    let values = match (values.is_empty(), &spec.sweep) {
        (false, _) => values.to_vec(),
        (true, Some(plan)) => plan.values.clone(),
        (true, None) => return Err(Error::invalid("sweep.values", "give --values or a sweep block")),
    };
    Ok((param, values))
}

fn design_plan(spec: &ScenarioSpec, unit: TemperatureUnit, target: Option<f64>, tol: Option<f64>) -> Result<DesignPlan> {
    let mut plan = match (&spec.design, target, tol) {
        (Some(p), _, _) => p.clone(),
        (None, Some(_), Some(_)) => DesignPlan::new(0.0, 1.0),
        _ => return Err(Error::invalid("design", "give --target and --tol or a design block")),
    };
    if let Some(t) = target {
        if !t.is_finite() {
            return Err(Error::invalid("--target", "must be finite"));
        }
        plan.target = convert_temperature(t, unit, TemperatureUnit::Celsius);
    }
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::invalid("--tol", "must be > 0"));
        }
        plan.tolerance = unit.delta_to_kelvin(t);
    }
    Ok(plan)
}

/// Parses `args`, runs, and returns the process exit code. Errors go to
/// `stderr` as one JSON line.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                emit(stdout, &e.to_string());
                return EXIT_OK;
            }
            let line = serde_json::json!({
                "error": "usage",
                "exit_code": EXIT_CONFIG,
                "message": e.to_string().trim(),
            });
            let _ = writeln!(stderr, "{line}");
            return EXIT_CONFIG;
        }
    };
    let manifest = execute(&cli, stdout);
    if let Some(line) = manifest.error_line() {
        let _ = writeln!(stderr, "{line}");
    }
    manifest.exit_code
}
