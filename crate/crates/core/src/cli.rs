//! Command dispatch: every subcommand resolves a configuration, runs the
//! pipeline, and emits deterministic CSV files with JSON sidecars.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::coupling::mode_table;
use crate::dynamics::{dominant_mode_report, populations_eigen};
use crate::effective::{build_h_eff, diagonalize};
use crate::error::Result;
use crate::output::{columns, write_csv, write_sidecar, Cell, Sidecar};
use crate::spectra::{far_spectrum, polarization_spectrum, radiation_pattern, Spectrum};
use crate::validate::{render_table, run_all};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The resolved command set.
#[derive(Debug, Clone, PartialEq)]
pub enum CommandKind {
    Modes,
    Dressed { json: bool },
    SpectrumNear,
    SpectrumFar,
    Pattern { energy_ev: Option<f64>, r_nm: Option<f64> },
    Dynamics,
    Validate,
}

/// Execute one command. Returns the files written (empty for `validate`,
/// which prints its table to stdout).
pub fn run_command(cfg: &RunConfig, command: &CommandKind) -> Result<Vec<PathBuf>> {
    match command {
        CommandKind::Modes => cmd_modes(cfg),
        CommandKind::Dressed { json } => cmd_dressed(cfg, *json),
        CommandKind::SpectrumNear => cmd_spectrum_near(cfg),
        CommandKind::SpectrumFar => cmd_spectrum_far(cfg),
        CommandKind::Pattern { energy_ev, r_nm } => cmd_pattern(cfg, *energy_ev, *r_nm),
        CommandKind::Dynamics => cmd_dynamics(cfg),
        CommandKind::Validate => cmd_validate(cfg),
    }
}

fn cmd_modes(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let table = mode_table(
        &cfg.emitter()?,
        &cfg.system()?,
        cfg.n_modes,
        &cfg.omega_grid()?,
        cfg.backend,
    )?;
    let rows: Vec<Vec<Cell>> = table
        .iter()
        .map(|p| {
            vec![
                Cell::Int(p.order as i64),
                Cell::Float(p.omega_ev),
                Cell::Float(p.gamma_ev),
                Cell::Float(p.g_ev),
                Cell::Float(p.fit.residual),
            ]
        })
        .collect();
    let path = cfg.out_dir.join("modes.csv");
    write_csv(&path, &["n", "omega_n_eV", "gamma_n_eV", "g_n_eV", "fit_residual"], &rows)?;
    write_sidecar(
        &path,
        &Sidecar {
            command: "modes",
            version: VERSION,
            columns: columns(&[
                ("n", "dimensionless"),
                ("omega_n_eV", "eV"),
                ("gamma_n_eV", "eV"),
                ("g_n_eV", "eV"),
                ("fit_residual", "dimensionless"),
            ]),
            config: cfg,
        },
    )?;
    Ok(vec![path])
}

#[derive(Serialize)]
struct DressedJson {
    omega_eg_ev: f64,
    orders: Vec<u32>,
    eigenvalues_re_ev: Vec<f64>,
    eigenvalues_im_ev: Vec<f64>,
    right_re: Vec<Vec<f64>>,
    right_im: Vec<Vec<f64>>,
    left_re: Vec<Vec<f64>>,
    left_im: Vec<Vec<f64>>,
    condition: f64,
}

fn cmd_dressed(cfg: &RunConfig, json: bool) -> Result<Vec<PathBuf>> {
    let table = mode_table(
        &cfg.emitter()?,
        &cfg.system()?,
        cfg.n_modes,
        &cfg.omega_grid()?,
        cfg.backend,
    )?;
    let h = build_h_eff(cfg.omega_eg_ev, cfg.gamma_d_ev, &table)?;
    let states = diagonalize(&h)?;
    let mut written = Vec::new();

    let rows: Vec<Vec<Cell>> = (0..states.len())
        .map(|m| {
            vec![
                Cell::Int(m as i64 + 1),
                Cell::Float(states.dressed_energy_ev(m)),
                Cell::Float(states.width_ev(m)),
            ]
        })
        .collect();
    let path = cfg.out_dir.join("dressed.csv");
    write_csv(&path, &["m", "Omega_eV", "width_eV"], &rows)?;
    write_sidecar(
        &path,
        &Sidecar {
            command: "dressed",
            version: VERSION,
            columns: columns(&[
                ("m", "dimensionless"),
                ("Omega_eV", "eV"),
                ("width_eV", "eV"),
            ]),
            config: cfg,
        },
    )?;
    written.push(path);

    // weight matrix: one row per dressed state, |m0|^2 then |m_n|^2
    let weights = states.weights();
    let mut header: Vec<String> = vec!["m".into(), "w_emitter".into()];
    header.extend(states.orders.iter().map(|n| format!("w_lsp{n}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<Cell>> = weights
        .iter()
        .enumerate()
        .map(|(m, row)| {
            let mut cells = vec![Cell::Int(m as i64 + 1)];
            cells.extend(row.iter().map(|&w| Cell::Float(w)));
            cells
        })
        .collect();
    let wpath = cfg.out_dir.join("dressed_weights.csv");
    write_csv(&wpath, &header_refs, &rows)?;
    write_sidecar(
        &wpath,
        &Sidecar {
            command: "dressed",
            version: VERSION,
            columns: columns(&[("m", "dimensionless"), ("w_*", "dimensionless")]),
            config: cfg,
        },
    )?;
    written.push(wpath);

    if json {
        let dim = states.len();
        let grab = |mat: &ndarray::Array2<Complex64>, re: bool| -> Vec<Vec<f64>> {
            (0..dim)
                .map(|m| {
                    (0..dim)
                        .map(|i| if re { mat[(i, m)].re } else { mat[(i, m)].im })
                        .collect()
                })
                .collect()
        };
        let payload = DressedJson {
            omega_eg_ev: states.omega_eg_ev,
            orders: states.orders.clone(),
            eigenvalues_re_ev: states.eigenvalues.iter().map(|l| l.re).collect(),
            eigenvalues_im_ev: states.eigenvalues.iter().map(|l| l.im).collect(),
            right_re: grab(&states.right, true),
            right_im: grab(&states.right, false),
            left_re: grab(&states.left, true),
            left_im: grab(&states.left, false),
            condition: states.condition,
        };
        let jpath = cfg.out_dir.join("dressed_states.json");
        std::fs::write(&jpath, serde_json::to_string_pretty(&payload).unwrap())?;
        written.push(jpath);
    }
    Ok(written)
}

fn write_spectrum(cfg: &RunConfig, s: &Spectrum, stem: &str, abscissa: (&str, &str)) -> Result<PathBuf> {
    let rows: Vec<Vec<Cell>> = s
        .abscissa
        .iter()
        .zip(&s.values)
        .map(|(&x, &y)| vec![Cell::Float(x), Cell::Float(y)])
        .collect();
    let path = cfg.out_dir.join(format!("{stem}.csv"));
    write_csv(&path, &[abscissa.0, "value"], &rows)?;
    write_sidecar(
        &path,
        &Sidecar {
            command: stem,
            version: VERSION,
            columns: columns(&[abscissa, ("value", "arbitrary")]),
            config: cfg,
        },
    )?;
    Ok(path)
}

fn cmd_spectrum_near(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let s = polarization_spectrum(
        &cfg.emitter()?,
        &cfg.system()?,
        &cfg.omega_grid()?,
        cfg.mode_subset.as_deref(),
        cfg.n_modes,
        cfg.backend,
    )?;
    Ok(vec![write_spectrum(cfg, &s, "spectrum_near", ("energy_eV", "eV"))?])
}

fn cmd_spectrum_far(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let s = far_spectrum(
        &cfg.emitter()?,
        &cfg.system()?,
        &cfg.detector(),
        &cfg.omega_grid()?,
        cfg.n_modes,
        cfg.projection,
        cfg.backend,
    )?;
    Ok(vec![write_spectrum(cfg, &s, "spectrum_far", ("energy_eV", "eV"))?])
}

fn cmd_pattern(cfg: &RunConfig, energy_ev: Option<f64>, r_nm: Option<f64>) -> Result<Vec<PathBuf>> {
    let e = energy_ev.unwrap_or(cfg.omega_eg_ev);
    let r = r_nm.unwrap_or(cfg.detector_r_nm);
    let s = radiation_pattern(
        &cfg.emitter()?,
        &cfg.system()?,
        e,
        &cfg.theta_grid(),
        r,
        cfg.n_modes,
        cfg.projection,
    )?;
    Ok(vec![write_spectrum(cfg, &s, "pattern", ("theta_rad", "rad"))?])
}

fn cmd_dynamics(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let table = mode_table(
        &cfg.emitter()?,
        &cfg.system()?,
        cfg.n_modes,
        &cfg.omega_grid()?,
        cfg.backend,
    )?;
    let h = build_h_eff(cfg.omega_eg_ev, cfg.gamma_d_ev, &table)?;
    let states = diagonalize(&h)?;
    let trace = populations_eigen(&states, &cfg.time_grid_fs())?;

    let mut header: Vec<String> = vec!["t_fs".into(), "Pe".into()];
    header.extend(trace.orders.iter().map(|n| format!("P{n}")));
    header.push("norm".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<Cell>> = (0..trace.times_fs.len())
        .map(|i| {
            let mut row = vec![Cell::Float(trace.times_fs[i]), Cell::Float(trace.emitter[i])];
            row.extend(trace.modes.iter().map(|m| Cell::Float(m[i])));
            row.push(Cell::Float(trace.norm[i]));
            row
        })
        .collect();
    let path = cfg.out_dir.join("dynamics.csv");
    write_csv(&path, &header_refs, &rows)?;
    write_sidecar(
        &path,
        &Sidecar {
            command: "dynamics",
            version: VERSION,
            columns: columns(&[
                ("t_fs", "fs"),
                ("Pe", "dimensionless"),
                ("P*", "dimensionless"),
                ("norm", "dimensionless"),
            ]),
            config: cfg,
        },
    )?;

    // ranking sidecar: which modes carry the transfer
    let report = dominant_mode_report(&trace);
    let rows: Vec<Vec<Cell>> = report
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.order as i64),
                Cell::Float(r.peak_population),
                Cell::Float(r.integrated_population_fs),
            ]
        })
        .collect();
    let rpath = cfg.out_dir.join("dynamics_ranking.csv");
    write_csv(&rpath, &["n", "peak_population", "integrated_population_fs"], &rows)?;
    write_sidecar(
        &rpath,
        &Sidecar {
            command: "dynamics",
            version: VERSION,
            columns: columns(&[
                ("n", "dimensionless"),
                ("peak_population", "dimensionless"),
                ("integrated_population_fs", "fs"),
            ]),
            config: cfg,
        },
    )?;
    Ok(vec![path, rpath])
}

fn cmd_validate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let results = run_all(cfg)?;
    print!("{}", render_table(&results));
    if results.iter().any(|r| !r.passed) {
        return Err(crate::error::Error::Numerics(
            "one or more validation checks failed".into(),
        ));
    }
    Ok(Vec::new())
}
