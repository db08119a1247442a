use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lspsim::cli::{run_command, CommandKind};
use lspsim::config::parse_config;
use lspsim::error::Error;

/// Dressed states of a quantum emitter coupled to the plasmon modes of a
/// metal nanosphere: mode tables, spectra, radiation patterns, dynamics.
#[derive(Parser)]
#[command(name = "lspsim", version, about)]
struct Cli {
    /// Configuration file (TOML, flat keys). Falls back to $LSPSIM_CONFIG,
    /// then to built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the configuration).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Per-key override, e.g. --set radius_nm=20 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the pseudomode table (omega_n, gamma_n, g_n) as CSV.
    Modes,
    /// Diagonalize the effective Hamiltonian; eigenvalue and weight CSVs.
    Dressed {
        /// Also write the full complex eigenvectors as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Emission spectra.
    Spectrum {
        #[command(subcommand)]
        which: SpectrumCommand,
    },
    /// Angular radiation pattern at a fixed photon energy.
    Pattern {
        /// Photon energy in eV (default: the emitter transition energy).
        #[arg(long)]
        energy_ev: Option<f64>,
        /// Detector radius in nm (default: the configured detector).
        #[arg(long)]
        r: Option<f64>,
    },
    /// Emitter and per-mode population dynamics as CSV.
    Dynamics,
    /// Run the property suite and print a pass/fail table.
    Validate,
}

#[derive(Subcommand)]
enum SpectrumCommand {
    /// Near-field polarization spectrum.
    Near {
        /// Restrict the multipole sum to these orders, e.g. --modes 3.
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u32>>,
    },
    /// Far-field spectrum at the detector.
    Far {
        /// Detector radius in nm.
        #[arg(long)]
        r: Option<f64>,
        /// Detector polar angle in rad.
        #[arg(long)]
        theta: Option<f64>,
    },
}

fn load_config_text(path: &Option<PathBuf>) -> Result<String, Error> {
    if let Some(p) = path {
        return std::fs::read_to_string(p)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())));
    }
    if let Ok(p) = std::env::var("LSPSIM_CONFIG") {
        if !p.is_empty() {
            return std::fs::read_to_string(&p)
                .map_err(|e| Error::Config(format!("cannot read {p}: {e}")));
        }
    }
    Ok(String::new())
}

fn run(cli: Cli) -> Result<(), Error> {
    let text = load_config_text(&cli.config)?;
    let mut overrides = cli.set.clone();
    // command-line conveniences become ordinary overrides so the sidecar
    // echoes exactly what ran
    let command = match &cli.command {
        Command::Modes => CommandKind::Modes,
        Command::Dressed { json } => CommandKind::Dressed { json: *json },
        Command::Spectrum { which } => match which {
            SpectrumCommand::Near { modes } => {
                if let Some(m) = modes {
                    let list =
                        m.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
                    overrides.push(format!("mode_subset=[{list}]"));
                }
                CommandKind::SpectrumNear
            }
            SpectrumCommand::Far { r, theta } => {
                if let Some(r) = r {
                    overrides.push(format!("detector_r_nm={r}"));
                }
                if let Some(t) = theta {
                    overrides.push(format!("detector_theta_rad={t}"));
                }
                CommandKind::SpectrumFar
            }
        },
        Command::Pattern { energy_ev, r } => {
            CommandKind::Pattern { energy_ev: *energy_ev, r_nm: *r }
        }
        Command::Dynamics => CommandKind::Dynamics,
        Command::Validate => CommandKind::Validate,
    };
    if let Some(out) = &cli.out {
        overrides.push(format!("out_dir=\"{}\"", out.display()));
    }
    let cfg = parse_config(&text, &overrides)?;
    let written = run_command(&cfg, &command)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let payload = serde_json::json!({
                "error": { "kind": err.kind(), "message": err.to_string() }
            });
            eprintln!("{payload}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
