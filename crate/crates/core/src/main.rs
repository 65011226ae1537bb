use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use corrbus::cli;
use corrbus::model::coupling_coefficient;
use corrbus::validation::{ValidationOptions, VALIDATION_SEED};

/// Elementary charge [C] and reduced Planck constant [J·s], for the
/// coupling calculator.
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
const HBAR: f64 = 1.054_571_817e-34;

#[derive(Parser)]
#[command(
    name = "corrbus",
    version,
    about = "Dissipative two-qubit/resonator dynamics with coherence and discord measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config file and write CSV/JSON output
    Run {
        /// Path to the flat JSON configuration document
        config: PathBuf,
    },
    /// Run one scenario per swept value of a numeric config key
    Sweep {
        /// Path to the base JSON configuration document
        config: PathBuf,
        /// Config key to sweep (e.g. amplitude_sq)
        #[arg(long)]
        key: String,
        /// Comma-separated values, e.g. 0.5,0.2,0.1
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Execute the built-in validation suite
    Validate {
        /// Restrict to a comma-separated list of criterion ids (1-11)
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
        /// Override the integrator step [ns] of every evolution-based
        /// criterion (deliberate-failure probe)
        #[arg(long)]
        override_dt: Option<f64>,
        /// Seed for the randomized checks
        #[arg(long, default_value_t = VALIDATION_SEED)]
        seed: u64,
    },
    /// Coupling-coefficient calculator: circuit parameters in SI units in,
    /// g/2π in MHz out
    Coupling {
        /// Coupling capacitance C_c [F]
        #[arg(long)]
        cc: f64,
        /// Total qubit capacitance C_tot [F]
        #[arg(long)]
        ctot: f64,
        /// Resonator angular frequency ω₀ [rad/s]
        #[arg(long)]
        omega0: f64,
        /// Resonator length L [m]
        #[arg(long)]
        length: f64,
        /// Capacitance per unit length C₀ [F/m]
        #[arg(long)]
        c0: f64,
        /// Charge e [C]
        #[arg(long, default_value_t = ELEMENTARY_CHARGE)]
        echarge: f64,
    },
}

fn run(command: Command) -> corrbus::Result<i32> {
    match command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = cli::parse_config(&text)?;
            let summary = cli::run_scenario(&cfg)?;
            println!(
                "wrote {} rows to {} (diagnostics: {})",
                summary.rows,
                summary.output_path.display(),
                summary.diagnostics_path.display()
            );
            Ok(0)
        }
        Command::Sweep {
            config,
            key,
            values,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = cli::parse_config(&text)?;
            let summary = cli::run_sweep(&cfg, &key, &values)?;
            for item in &summary.items {
                match &item.error {
                    None => println!("{} = {}: {}", key, item.value, item.output_path.display()),
                    Some(e) => println!("{} = {}: FAILED ({e})", key, item.value),
                }
            }
            println!("manifest: {}", summary.manifest_path.display());
            Ok(summary.exit_code)
        }
        Command::Validate {
            only,
            override_dt,
            seed,
        } => {
            let opts = ValidationOptions {
                seed,
                dt_override: override_dt,
            };
            let (_, all_passed) = cli::run_validate(only.as_deref(), &opts)?;
            Ok(if all_passed { 0 } else { 1 })
        }
        Command::Coupling {
            cc,
            ctot,
            omega0,
            length,
            c0,
            echarge,
        } => {
            // SI inputs give g as an energy [J]; dividing by ħ converts to
            // angular frequency.
            let g_joule = coupling_coefficient(echarge, cc, ctot, omega0, length, c0)?;
            let g_rad_s = g_joule / HBAR;
            let g_mhz = g_rad_s / (std::f64::consts::TAU * 1e6);
            println!("g = {g_joule:.6e} J = {g_rad_s:.6e} rad/s");
            println!("g/2pi = {g_mhz:.6} MHz");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code.clamp(0, 255) as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code().clamp(0, 255) as u8)
        }
    }
}
