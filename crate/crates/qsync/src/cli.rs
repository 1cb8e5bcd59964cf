//! Command-line front end.
//!
//! Six subcommands cover the library surface: `evolve` tabulates the
//! decay amplitude and density matrix over time, `qfunc` and `sphase`
//! sample the phase-space observables at one instant, `sweep` evaluates
//! an observable over a parameter grid, `figure` runs a named preset
//! and writes CSV plus metadata, and `verify` cross-checks the closed
//! form against the memory-kernel integrator.
//!
//! Scalar parameters resolve in three layers: built-in defaults, then a
//! flat `key = value` config file passed with `--config`, then explicit
//! flags. Exit codes: 0 on success, 1 on a validation error (the
//! message names the offending flag), 2 when `verify` finds a
//! mismatch, 3 on an I/O failure.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::bath::BathParams;
use crate::dynamics::{evolve, h_closed_form, time_grid, volterra_solve, InitialState};
use crate::error::{Error, Result};
use crate::export::{format_value, render_long_csv, render_matrix, RunMetadata};
use crate::sweep::{
    figure_preset, run_sweep, AxisName, AxisSpec, GridResult, Observable, SweepGrid, PRESET_IDS,
};

/// Exit code when `verify` finds a closed-form/integrator mismatch.
const EXIT_VERIFY: i32 = 2;
/// Exit code for I/O failures.
const EXIT_IO: i32 = 3;
/// Largest deviation `verify` accepts per parameter set.
const VERIFY_TOL: f64 = 1e-5;

const VERSION_LINE: &str = concat!(env!("CARGO_PKG_VERSION"), " (grid-hash fnv1a-64)");

#[derive(Debug, Parser)]
#[command(
    name = "qsync",
    version = VERSION_LINE,
    about = "Dissipative qubit dynamics and phase synchronization in a Lorentzian bath"
)]
struct Cli {
    /// Flat `key = value` file with defaults for gamma, lambda and delta.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the decay amplitude and density matrix over time.
    Evolve(EvolveArgs),
    /// Sample the Husimi function over the Bloch sphere at one instant.
    Qfunc(QfuncArgs),
    /// Sample the shifted phase distribution at one instant.
    Sphase(SphaseArgs),
    /// Evaluate an observable over a parameter grid.
    Sweep(SweepArgs),
    /// Run a named figure preset and write its CSV plus metadata.
    Figure(FigureArgs),
    /// Cross-check the closed form against the memory-kernel integrator.
    Verify,
}

/// Bath parameters as optional flags; unset values fall back to the
/// config file and then to the built-in defaults.
#[derive(Debug, Clone, Copy, Args)]
struct BathFlags {
    /// Coupling strength in units of the reference decay rate [default: 1].
    #[arg(long, value_name = "G", allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Spectral half-width of the bath [default: 1].
    #[arg(long, value_name = "L", allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Detuning of the qubit from the bath center [default: 0].
    #[arg(long, value_name = "D", allow_negative_numbers = true)]
    delta: Option<f64>,
}

/// Initial state and output destination, shared by the subcommands that
/// evaluate the dynamics.
#[derive(Debug, Clone, Args)]
struct StateFlags {
    /// Initial state as `rho11,re_rho10,im_rho10` [default: the plus state].
    #[arg(long, value_name = "RHO", allow_hyphen_values = true)]
    initial: Option<String>,
    /// Output destination; `-` writes to stdout.
    #[arg(long, value_name = "PATH", default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    bath: BathFlags,
    /// End of the time window.
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,
    /// Sampling step.
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[command(flatten)]
    state: StateFlags,
}

#[derive(Debug, Args)]
struct QfuncArgs {
    #[command(flatten)]
    bath: BathFlags,
    /// Evaluation time.
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    /// Number of polar samples on [0, pi].
    #[arg(long, default_value_t = 91)]
    ntheta: usize,
    /// Number of azimuthal samples on [-pi, pi].
    #[arg(long, default_value_t = 181)]
    nphi: usize,
    #[command(flatten)]
    state: StateFlags,
}

#[derive(Debug, Args)]
struct SphaseArgs {
    #[command(flatten)]
    bath: BathFlags,
    /// Evaluation time.
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    /// Number of azimuthal samples on [-pi, pi].
    #[arg(long, default_value_t = 181)]
    nphi: usize,
    #[command(flatten)]
    state: StateFlags,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Sweep axis as `name:min:max:count[:log]`; repeat for up to three axes.
    #[arg(long = "axis", value_name = "SPEC")]
    axes: Vec<String>,
    /// Fixed parameter as `name=value`; repeat as needed.
    #[arg(long = "fixed", value_name = "KV", allow_hyphen_values = true)]
    fixed: Vec<String>,
    /// Observable evaluated at every grid point.
    #[arg(long, default_value = "abs_rho10")]
    observable: String,
    /// Output layout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Long)]
    format: OutputFormat,
    /// Number of worker threads [default: all cores].
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    #[command(flatten)]
    state: StateFlags,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Preset identifier, e.g. `fig2a` or `sfig3c`.
    #[arg(long)]
    id: String,
    /// Directory receiving `<id>.csv` and `<id>.meta.json`.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Number of worker threads [default: all cores].
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

/// CSV layout for sweep results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// One row per grid point with explicit coordinates.
    Long,
    /// Two-axis matrix with the first axis across the columns.
    Matrix,
}

/// Scalar defaults read from a config file.
#[derive(Debug, Clone, Copy, Default)]
struct FileConfig {
    gamma: Option<f64>,
    lambda: Option<f64>,
    delta: Option<f64>,
}

/// Parameters of one invocation after merging built-in defaults, the
/// config file and explicit flags, in that order.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub gamma: f64,
    pub lambda: f64,
    pub delta: f64,
    pub initial: InitialState,
    pub out: String,
}

impl CliConfig {
    fn merge(file: &FileConfig, bath: &BathFlags, state: &StateFlags) -> Result<Self> {
        let initial = match &state.initial {
            None => InitialState::default(),
            Some(text) => parse_initial(text)?,
        };
        Ok(CliConfig {
            gamma: bath.gamma.or(file.gamma).unwrap_or(1.0),
            lambda: bath.lambda.or(file.lambda).unwrap_or(1.0),
            delta: bath.delta.or(file.delta).unwrap_or(0.0),
            initial,
            out: state.out.clone(),
        })
    }

    fn bath(&self) -> Result<BathParams> {
        BathParams::new(self.gamma, self.lambda, self.delta)
    }
}

/// Parses the command line and executes one subcommand, returning the
/// process exit code. Callers pass `std::env::args_os()`.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            err.print().ok();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Io(_) => EXIT_IO,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let file = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Evolve(args) => {
            let cfg = CliConfig::merge(&file, &args.bath, &args.state)?;
            let rendered = render_evolve(&cfg, args.tmax, args.dt)?;
            write_output(&cfg.out, &rendered)?;
            Ok(0)
        }
        Command::Qfunc(args) => {
            let cfg = CliConfig::merge(&file, &args.bath, &args.state)?;
            let grid = qfunc_grid(&cfg, args.t, args.ntheta, args.nphi)?;
            let rendered = render_long_csv(&run_sweep(&grid)?)?;
            write_output(&cfg.out, &rendered)?;
            Ok(0)
        }
        Command::Sphase(args) => {
            let cfg = CliConfig::merge(&file, &args.bath, &args.state)?;
            let grid = sphase_grid(&cfg, args.t, args.nphi)?;
            let rendered = render_long_csv(&run_sweep(&grid)?)?;
            write_output(&cfg.out, &rendered)?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let initial = match &args.state.initial {
                None => InitialState::default(),
                Some(text) => parse_initial(text)?,
            };
            let grid = build_sweep_grid(&args, initial, &file)?;
            let result = run_grid(&grid, args.jobs)?;
            let rendered = match args.format {
                OutputFormat::Long => render_long_csv(&result)?,
                OutputFormat::Matrix => render_matrix(&result)?,
            };
            write_output(&args.state.out, &rendered)?;
            Ok(0)
        }
        Command::Figure(args) => run_figure(&args),
        Command::Verify => run_verify(),
    }
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => parse_config(&fs::read_to_string(p)?),
    }
}

/// Parses the flat config format: one `key = value` per line, `#`
/// starts a comment, keys limited to gamma, lambda and delta.
fn parse_config(text: &str) -> Result<FileConfig> {
    let mut cfg = FileConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::invalid(
                "config",
                format!("line {lineno}: expected `key = value`, got `{line}`"),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        let parsed: f64 = value.parse().map_err(|_| {
            Error::invalid(
                "config",
                format!("line {lineno}: cannot parse value `{value}` for `{key}`"),
            )
        })?;
        match key {
            "gamma" => cfg.gamma = Some(parsed),
            "lambda" => cfg.lambda = Some(parsed),
            "delta" => cfg.delta = Some(parsed),
            other => {
                return Err(Error::invalid(
                    "config",
                    format!("line {lineno}: unknown key `{other}` (expected gamma, lambda or delta)"),
                ))
            }
        }
    }
    Ok(cfg)
}

fn parse_initial(text: &str) -> Result<InitialState> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(
            "initial",
            format!("expected `rho11,re_rho10,im_rho10`, got `{text}`"),
        ));
    }
    let mut nums = [0.0f64; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| {
            Error::invalid(
                "initial",
                format!("cannot parse `{}` as a number", part.trim()),
            )
        })?;
    }
    InitialState::new(nums[0], Complex64::new(nums[1], nums[2]))
}

fn write_output(out: &str, rendered: &str) -> Result<()> {
    if out == "-" {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(rendered.as_bytes())?;
        lock.flush()?;
    } else {
        fs::write(out, rendered)?;
    }
    Ok(())
}

fn render_evolve(cfg: &CliConfig, tmax: f64, dt: f64) -> Result<String> {
    let bath = cfg.bath()?;
    let times = time_grid(tmax, dt)?;
    let mut out = String::from("t,re_h,im_h,abs_h,rho11,re_rho10,im_rho10,abs_rho10\n");
    for &t in &times {
        let amp = h_closed_form(&bath, t)?;
        let state = evolve(&cfg.initial, &amp)?;
        let h = amp.value;
        let rho10 = state.rho10();
        let fields = [
            t,
            h.re,
            h.im,
            h.norm(),
            state.rho11(),
            rho10.re,
            rho10.im,
            rho10.norm(),
        ];
        for (i, v) in fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_value(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

fn qfunc_grid(cfg: &CliConfig, t: f64, ntheta: usize, nphi: usize) -> Result<SweepGrid> {
    cfg.bath()?;
    if ntheta < 2 {
        return Err(Error::invalid("ntheta", "need at least 2 polar samples"));
    }
    if nphi < 2 {
        return Err(Error::invalid("nphi", "need at least 2 azimuthal samples"));
    }
    let axes = vec![
        AxisSpec::linear(AxisName::Theta, 0.0, PI, ntheta)?,
        AxisSpec::linear(AxisName::Phi, -PI, PI, nphi)?,
    ];
    let mut grid = SweepGrid::new(axes, fixed_bath(cfg, t), Observable::Q)?;
    grid.initial = cfg.initial;
    Ok(grid)
}

fn sphase_grid(cfg: &CliConfig, t: f64, nphi: usize) -> Result<SweepGrid> {
    cfg.bath()?;
    if nphi < 2 {
        return Err(Error::invalid("nphi", "need at least 2 azimuthal samples"));
    }
    let axes = vec![AxisSpec::linear(AxisName::Phi, -PI, PI, nphi)?];
    let mut grid = SweepGrid::new(axes, fixed_bath(cfg, t), Observable::S)?;
    grid.initial = cfg.initial;
    Ok(grid)
}

fn fixed_bath(cfg: &CliConfig, t: f64) -> BTreeMap<AxisName, f64> {
    let mut fixed = BTreeMap::new();
    fixed.insert(AxisName::Gamma, cfg.gamma);
    fixed.insert(AxisName::Lambda, cfg.lambda);
    fixed.insert(AxisName::Delta, cfg.delta);
    fixed.insert(AxisName::T, t);
    fixed
}

fn build_sweep_grid(args: &SweepArgs, initial: InitialState, file: &FileConfig) -> Result<SweepGrid> {
    let mut axes = Vec::new();
    for spec in &args.axes {
        axes.push(spec.parse::<AxisSpec>().map_err(|e| rename_grid(e, "axis"))?);
    }
    let observable: Observable = args
        .observable
        .parse()
        .map_err(|e| rename_grid(e, "observable"))?;
    let mut fixed: BTreeMap<AxisName, f64> = BTreeMap::new();
    for kv in &args.fixed {
        let Some((name, value)) = kv.split_once('=') else {
            return Err(Error::invalid(
                "fixed",
                format!("expected `name=value`, got `{kv}`"),
            ));
        };
        let name: AxisName = name.trim().parse().map_err(|e| rename_grid(e, "fixed"))?;
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::invalid(
                "fixed",
                format!("cannot parse value `{}` for `{name}`", value.trim()),
            )
        })?;
        if fixed.insert(name, value).is_some() {
            return Err(Error::invalid(
                "fixed",
                format!("parameter `{name}` given twice"),
            ));
        }
    }
    let soft = [
        (AxisName::Gamma, file.gamma),
        (AxisName::Lambda, file.lambda),
        (AxisName::Delta, file.delta),
    ];
    let needed = observable.required_params();
    for (name, value) in soft {
        if let Some(v) = value {
            let is_axis = axes.iter().any(|a| a.name == name);
            if needed.contains(&name) && !is_axis {
                fixed.entry(name).or_insert(v);
            }
        }
    }
    let mut grid = SweepGrid::new(axes, fixed, observable)?;
    grid.initial = initial;
    Ok(grid)
}

/// Maps a grid-definition error onto the flag that carried the bad
/// value, so the message names the flag.
fn rename_grid(err: Error, flag: &str) -> Error {
    match err {
        Error::Grid(msg) => Error::invalid(flag, msg),
        other => other,
    }
}

fn run_grid(grid: &SweepGrid, jobs: Option<usize>) -> Result<GridResult> {
    match jobs {
        None => run_sweep(grid),
        Some(0) => Err(Error::invalid("jobs", "need at least one worker thread")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid("jobs", format!("cannot build thread pool: {e}")))?;
            pool.install(|| run_sweep(grid))
        }
    }
}

fn run_figure(args: &FigureArgs) -> Result<i32> {
    let grid = figure_preset(&args.id).map_err(|e| match e {
        Error::UnknownPreset(id) => Error::invalid(
            "id",
            format!("unknown preset `{id}`; expected one of {}", PRESET_IDS.join(", ")),
        ),
        other => other,
    })?;
    let result = run_grid(&grid, args.jobs)?;
    let csv = render_long_csv(&result)?;
    fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join(format!("{}.csv", args.id));
    let meta_path = args.out.join(format!("{}.meta.json", args.id));
    fs::write(&csv_path, &csv)?;
    let meta = RunMetadata::describe(&result, &csv);
    fs::write(&meta_path, meta.to_json())?;
    println!("{}", csv_path.display());
    println!("{}", meta_path.display());
    Ok(0)
}

/// Integrates five representative parameter sets on `[0, 50]` and
/// compares the result against the closed form pointwise.
fn run_verify() -> Result<i32> {
    const CASES: [(f64, f64, f64); 5] = [
        (5.0, 0.0, 1.0),
        (0.01, 0.0, 1.0),
        (0.01, 1.0, 1.0),
        (2.0, 0.0, 1.0),
        (0.1, 0.5, 1.0),
    ];
    let mut failures = 0usize;
    for (lambda, delta, gamma) in CASES {
        let params = BathParams::new(gamma, lambda, delta)?;
        let numeric = volterra_solve(&params, 50.0, 1e-3)?;
        let mut worst = 0.0f64;
        for amp in &numeric {
            let exact = h_closed_form(&params, amp.t)?;
            worst = worst.max((amp.value - exact.value).norm());
        }
        let verdict = if worst < VERIFY_TOL { "PASS" } else { "FAIL" };
        if worst >= VERIFY_TOL {
            failures += 1;
        }
        println!("lambda={lambda} delta={delta} gamma={gamma}: max deviation {worst:.3e} {verdict}");
    }
    if failures == 0 {
        println!(
            "verify: all {} parameter sets agree within {VERIFY_TOL:e}",
            CASES.len()
        );
        Ok(0)
    } else {
        println!(
            "verify: {failures} of {} parameter sets exceed {VERIFY_TOL:e}",
            CASES.len()
        );
        Ok(EXIT_VERIFY)
    }
}
