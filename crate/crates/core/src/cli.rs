//! Command-line surface.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 a bound was violated,
//! 3 a numerical routine did not converge.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds::{evaluate_bounds, linear_grid, phi, phi_curve, PhiMode};
use crate::decoherence::{run_trajectory, QUASI_STATIC_LABEL};
use crate::error::Error;
use crate::io::{read_barrier, read_state};
use crate::moments::compute_moments;
use crate::oracle::{
    certify, default_method, falsification_sweep, min_product_fock_mixture_with, Method, OracleOptions,
    DEFAULT_MAX_ITERATIONS,
};
use crate::report::{
    bound_report, falsification_report, invalid_state_report, oracle_table, phi_curve_table, phi_report,
    sweep_table, thermal_table, to_pretty, trajectory_table, Table, SCHEMA_VERSION,
};
use crate::state::{validate_state, QuantumState};
use crate::thermal::{log_grid, thermal_sweep, ThermalModel};
use crate::tunneling::{transparency_vs_purity, transparency_vs_temperature, PurityLaw};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hbar-eff",
    version,
    about = "Purity- and correlation-dependent uncertainty bounds and WKB tunneling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// rank-2 analytic for mu >= 5/9, grid-refine below
    Auto,
    Rank2Analytic,
    Rank3Analytic,
    GridRefine,
    ProjectedGradient,
    RandomDensitySampling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PurityLawArg {
    Exact,
    HighTemperature,
}

#[derive(Debug, Args)]
pub struct MuGrid {
    /// One or more purities, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["mu_from", "mu_to"])]
    pub mu: Vec<f64>,
    #[arg(long, requires_all = ["mu_to", "steps"])]
    pub mu_from: Option<f64>,
    #[arg(long, requires_all = ["mu_from", "steps"])]
    pub mu_to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

impl MuGrid {
    fn values(&self) -> Result<Vec<f64>, Failure> {
        match (self.mu_from, self.mu_to, self.steps) {
            (Some(a), Some(b), Some(n)) => Ok(linear_grid(a, b, n)?),
            _ if !self.mu.is_empty() => Ok(self.mu.clone()),
            _ => Err(Failure::usage("give --mu or --mu-from/--mu-to/--steps")),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments, bounds, slacks and pass flags for a state file (JSON).
    Check {
        #[arg(long)]
        state: PathBuf,
        /// Planck constant used in the bounds; defaults to the state's own.
        #[arg(long)]
        hbar: Option<f64>,
        #[arg(long, default_value = "exact")]
        phi_mode: PhiMode,
        #[command(flatten)]
        output: Output,
    },
    /// Phi(mu) at one purity.
    Phi {
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value = "exact")]
        phi_mode: PhiMode,
        #[command(flatten)]
        output: Output,
    },
    /// Phi on a uniform purity grid.
    PhiCurve {
        #[arg(long)]
        mu_from: f64,
        #[arg(long)]
        mu_to: f64,
        #[arg(long)]
        steps: usize,
        /// Columns to fill; the others are left empty.
        #[arg(long, value_delimiter = ',', default_value = "exact,interpolation,asymptote")]
        modes: Vec<PhiMode>,
        #[command(flatten)]
        output: Output,
    },
    /// Minimum uncertainty product at fixed purity, or a random falsification sweep.
    Oracle {
        #[command(flatten)]
        grid: MuGrid,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Step budget for projected-gradient; exhausting it exits with 3.
        #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
        max_iterations: usize,
        /// Random draws for sampling methods and --falsify.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Required by every stochastic path.
        #[arg(long)]
        seed: Option<u64>,
        /// Check the purity bound on random density matrices instead (JSON).
        #[arg(long)]
        falsify: bool,
        /// Hilbert-space dimension for --falsify.
        #[arg(long, default_value_t = 6)]
        dim: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Thermal oscillator sweep; with --barrier, the transparency sweep T·ln D.
    Thermal {
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value = "exact")]
        phi_mode: PhiMode,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Explicit energy levels instead of the oscillator ladder.
        #[arg(long, value_delimiter = ',')]
        spectrum: Option<Vec<f64>>,
        #[arg(long, requires = "energy")]
        barrier: Option<PathBuf>,
        #[arg(long)]
        energy: Option<f64>,
        #[arg(long, value_enum, default_value = "exact")]
        purity_law: PurityLawArg,
        #[command(flatten)]
        output: Output,
    },
    /// WKB transparency with the effective Planck constant, over purities.
    Tunnel {
        #[arg(long)]
        barrier: PathBuf,
        #[arg(long)]
        energy: f64,
        #[command(flatten)]
        grid: MuGrid,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value = "exact")]
        phi_mode: PhiMode,
        #[command(flatten)]
        output: Output,
    },
    /// Dephasing trajectory of a Fock state with quasi-static transparency.
    Decohere {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        t_max: f64,
        /// Number of time points, both ends included.
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        barrier: PathBuf,
        #[arg(long)]
        energy: f64,
        #[arg(long, default_value = "exact")]
        phi_mode: PhiMode,
        #[command(flatten)]
        output: Output,
    },
}

/// A failed run: message for stderr and the exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// A completed run. `code` is 0 or [`EXIT_VIOLATION`].
#[derive(Debug)]
pub struct Execution {
    pub code: i32,
    pub output: String,
    pub notes: Vec<String>,
    pub out: Option<PathBuf>,
}

fn emit(table: Table, output: &Output) -> Execution {
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => to_pretty(&table.to_json()),
    };
    Execution {
        code: EXIT_OK,
        output: text,
        notes: Vec::new(),
        out: output.out.clone(),
    }
}

fn emit_json(value: serde_json::Value, output: &Output, code: i32) -> Result<Execution, Failure> {
    if output.format == Some(Format::Csv) {
        return Err(Failure::usage("this command only writes JSON"));
    }
    Ok(Execution {
        code,
        output: to_pretty(&value),
        notes: Vec::new(),
        out: output.out.clone(),
    })
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64, Failure> {
    seed.ok_or_else(|| Failure::usage(format!("{what} is stochastic: pass --seed")))
}

pub fn execute(cli: Cli) -> Result<Execution, Failure> {
    match cli.command {
        Command::Check {
            state,
            hbar,
            phi_mode,
            output,
        } => {
            let state = read_state(&state)?;
            let validation = validate_state(&state);
            if !validation.is_valid() {
                return emit_json(invalid_state_report(&validation), &output, EXIT_VIOLATION);
            }
            let hbar = hbar.unwrap_or_else(|| state.hbar());
            let moments = compute_moments(&state)?;
            let report = evaluate_bounds(&moments, hbar, phi_mode)?;
            let code = if report.flags.all_pass() { EXIT_OK } else { EXIT_VIOLATION };
            emit_json(bound_report(&moments, &report), &output, code)
        }
        Command::Phi { mu, phi_mode, output } => {
            let p = phi(mu, phi_mode)?;
            match output.format {
                Some(Format::Csv) => {
                    let text = format!(
                        "mu,phi,branch,fallback_flag\n{},{},{},{}\n",
                        crate::report::format_number(mu),
                        crate::report::format_number(p.value),
                        p.branch.name(),
                        u8::from(p.fallback)
                    );
                    Ok(Execution {
                        code: EXIT_OK,
                        output: text,
                        notes: Vec::new(),
                        out: output.out,
                    })
                }
                _ => emit_json(phi_report(mu, &p), &output, EXIT_OK),
            }
        }
        Command::PhiCurve {
            mu_from,
            mu_to,
            steps,
            modes,
            output,
        } => {
            if steps == 0 {
                return Err(Failure::usage("--steps must be at least 1"));
            }
            let rows = phi_curve(&linear_grid(mu_from, mu_to, steps)?, &modes)?;
            Ok(emit(phi_curve_table(&rows), &output))
        }
        Command::Oracle {
            grid,
            levels,
            method,
            max_iterations,
            samples,
            seed,
            falsify,
            dim,
            output,
        } => {
            let mus = grid.values()?;
            if falsify {
                let seed = require_seed(seed, "--falsify")?;
                let reports = mus
                    .iter()
                    .map(|&mu| falsification_sweep(mu, dim, samples, seed))
                    .collect::<Result<Vec<_>, _>>()?;
                let code = if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_VIOLATION };
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "reports": reports.iter().map(falsification_report).collect::<Vec<_>>(),
                });
                return emit_json(doc, &output, code);
            }
            let certs = mus
                .iter()
                .map(|&mu| {
                    let m = match method {
                        MethodArg::Auto => default_method(mu),
                        MethodArg::Rank2Analytic => Method::Rank2Analytic,
                        MethodArg::Rank3Analytic => Method::Rank3Analytic,
                        MethodArg::GridRefine => Method::GridRefine,
                        MethodArg::ProjectedGradient => Method::ProjectedGradient,
                        MethodArg::RandomDensitySampling => Method::RandomDensitySampling {
                            samples,
                            seed: require_seed(seed, "random-density-sampling")?,
                        },
                    };
                    let options = OracleOptions { max_iterations };
                    Ok(certify(&min_product_fock_mixture_with(mu, levels, m, options)?)?)
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(emit(oracle_table(&certs), &output))
        }
        Command::Thermal {
            t_min,
            t_max,
            steps,
            r,
            phi_mode,
            hbar,
            mass,
            omega,
            spectrum,
            barrier,
            energy,
            purity_law,
            output,
        } => {
            let mut model = match spectrum {
                Some(levels) => ThermalModel::spectrum(levels)?,
                None => ThermalModel::oscillator_with(hbar, mass, omega)?,
            };
            model.hbar = hbar;
            match barrier {
                None => Ok(emit(
                    thermal_table(&thermal_sweep(&model, t_min, t_max, steps, r, phi_mode)?),
                    &output,
                )),
                Some(path) => {
                    let barrier = read_barrier(&path)?;
                    let energy = energy.ok_or_else(|| Failure::usage("--barrier needs --energy"))?;
                    let law = match purity_law {
                        PurityLawArg::Exact => PurityLaw::Exact,
                        PurityLawArg::HighTemperature => PurityLaw::HighTemperature,
                    };
                    let grid = log_grid(t_min, t_max, steps)?;
                    let records =
                        transparency_vs_temperature(&barrier, energy, hbar, &model, &grid, r, phi_mode, law)?;
                    Ok(emit(sweep_table(&records), &output))
                }
            }
        }
        Command::Tunnel {
            barrier,
            energy,
            grid,
            hbar,
            r,
            phi_mode,
            output,
        } => {
            let barrier = read_barrier(&barrier)?;
            let records = transparency_vs_purity(&barrier, energy, hbar, r, &grid.values()?, phi_mode)?;
            Ok(emit(sweep_table(&records), &output))
        }
        Command::Decohere {
            state,
            gamma,
            t_max,
            steps,
            barrier,
            energy,
            phi_mode,
            output,
        } => {
            let QuantumState::Fock(rho) = read_state(&state)? else {
                return Err(Failure::usage("decohere needs a fock state file"));
            };
            let barrier = read_barrier(&barrier)?;
            let traj = run_trajectory(&rho, gamma, t_max, steps, &barrier, energy, phi_mode)?;
            let mut exec = emit(trajectory_table(&traj), &output);
            exec.notes.push(format!("transparency values are a {QUASI_STATIC_LABEL}"));
            for (step, w) in &traj.truncation {
                exec.notes.push(format!(
                    "warning: step {step}: top Fock level of dim {} holds population {:e}",
                    w.dim, w.top_population
                ));
            }
            Ok(exec)
        }
    }
}

/// Parses `args` (program name first), runs, writes output and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(exec) => {
            for note in &exec.notes {
                eprintln!("{note}");
            }
            match &exec.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &exec.output) {
                        eprintln!("error: {}: {e}", path.display());
                        return EXIT_INPUT;
                    }
                }
                None => print!("{}", exec.output),
            }
            exec.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
