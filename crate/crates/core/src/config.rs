//! Configuration ingestion: TOML-style flat key/value documents with
//! comments, per-key CLI overrides, full validation, and a resolved echo
//! for the reproducibility sidecar.

use std::path::PathBuf;

use serde::Serialize;

use crate::coupling::EmitterParams;
use crate::drude::DrudeMaterial;
use crate::error::{Error, Result};
use crate::greens::{Detector, EmitterGeometry, GreensBackend, SphereSystem};
use crate::grid::LinearGrid;
use crate::spectra::Projection;

/// Fully resolved run configuration. Defaults reproduce the reference
/// setup: a silver sphere of radius 8 nm, an emitter 2 nm away with
/// ħω_eg = 2.94 eV, d = 24 D, ħγ_d = 15 meV, N = 25 modes, detector at
/// (1 µm, π/2).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub material_preset: String,
    pub eps_inf: f64,
    pub hbar_omega_p_ev: f64,
    pub hbar_gamma_p_ev: f64,
    pub eps_background: f64,
    pub radius_nm: f64,
    pub gap_nm: f64,
    pub omega_eg_ev: f64,
    pub dipole_debye: f64,
    pub gamma_d_ev: f64,
    pub n_modes: u32,
    pub backend: GreensBackend,
    pub omega_min_ev: f64,
    pub omega_max_ev: f64,
    pub omega_points: usize,
    pub t_max_fs: f64,
    pub t_points: usize,
    pub theta_points: usize,
    pub detector_r_nm: f64,
    pub detector_theta_rad: f64,
    pub mode_subset: Option<Vec<u32>>,
    pub projection: Projection,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            material_preset: "silver-drude".into(),
            eps_inf: 6.0,
            hbar_omega_p_ev: 7.90,
            hbar_gamma_p_ev: 0.051,
            eps_background: 1.0,
            radius_nm: 8.0,
            gap_nm: 2.0,
            omega_eg_ev: 2.94,
            dipole_debye: 24.0,
            gamma_d_ev: 0.015,
            n_modes: 25,
            backend: GreensBackend::Mie,
            omega_min_ev: 2.0,
            omega_max_ev: 3.4,
            omega_points: 14001,
            t_max_fs: 200.0,
            t_points: 2000,
            theta_points: 721,
            detector_r_nm: 1000.0,
            detector_theta_rad: std::f64::consts::FRAC_PI_2,
            mode_subset: None,
            projection: Projection::Vector,
            out_dir: PathBuf::from("out"),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "material_preset",
    "eps_inf",
    "hbar_omega_p_ev",
    "hbar_gamma_p_ev",
    "eps_background",
    "radius_nm",
    "gap_nm",
    "omega_eg_ev",
    "dipole_debye",
    "gamma_d_ev",
    "n_modes",
    "backend",
    "omega_min_ev",
    "omega_max_ev",
    "omega_points",
    "t_max_fs",
    "t_points",
    "theta_points",
    "detector_r_nm",
    "detector_theta_rad",
    "mode_subset",
    "projection",
    "out_dir",
];

/// Parse a configuration document, then apply `key=value` overrides in
/// order. An empty document yields the full default configuration; any
/// unknown key is an error.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e| Error::Config(format!("cannot parse configuration: {e}")))?;
    for item in overrides {
        let Some((key, value)) = item.split_once('=') else {
            return Err(Error::Config(format!(
                "override '{item}' is not of the form key=value"
            )));
        };
        let key = key.trim();
        // parse the value with TOML semantics; fall back to a string
        let parsed: toml::Table = format!("{key} = {value}")
            .parse()
            .or_else(|_| format!("{key} = \"{value}\"").parse())
            .map_err(|e| Error::Config(format!("override '{item}': {e}")))?;
        for (k, v) in parsed {
            table.insert(k, v);
        }
    }
    build(table)
}

fn build(table: toml::Table) -> Result<RunConfig> {
    for key in table.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "unknown configuration key '{key}' (known keys: {})",
                KNOWN_KEYS.join(", ")
            )));
        }
    }
    let mut cfg = RunConfig::default();

    if let Some(s) = get_str(&table, "material_preset")? {
        match s.as_str() {
            "silver-drude" => {
                let ag = DrudeMaterial::silver();
                cfg.eps_inf = ag.eps_inf();
                cfg.hbar_omega_p_ev = ag.omega_p_ev();
                cfg.hbar_gamma_p_ev = ag.gamma_p_ev();
            }
            "custom" => {}
            other => {
                return Err(Error::Config(format!(
                    "material_preset must be 'silver-drude' or 'custom', got '{other}'"
                )))
            }
        }
        cfg.material_preset = s;
    }
    if let Some(v) = get_f64(&table, "eps_inf")? {
        cfg.eps_inf = v;
    }
    if let Some(v) = get_f64(&table, "hbar_omega_p_ev")? {
        cfg.hbar_omega_p_ev = v;
    }
    if let Some(v) = get_f64(&table, "hbar_gamma_p_ev")? {
        cfg.hbar_gamma_p_ev = v;
    }
    if let Some(v) = get_f64(&table, "eps_background")? {
        cfg.eps_background = v;
    }
    if let Some(v) = get_f64(&table, "radius_nm")? {
        cfg.radius_nm = v;
    }
    if let Some(v) = get_f64(&table, "gap_nm")? {
        cfg.gap_nm = v;
    }
    if let Some(v) = get_f64(&table, "omega_eg_ev")? {
        cfg.omega_eg_ev = v;
    }
    if let Some(v) = get_f64(&table, "dipole_debye")? {
        cfg.dipole_debye = v;
    }
    if let Some(v) = get_f64(&table, "gamma_d_ev")? {
        cfg.gamma_d_ev = v;
    }
    if let Some(v) = get_int(&table, "n_modes")? {
        cfg.n_modes = v as u32;
    }
    if let Some(s) = get_str(&table, "backend")? {
        cfg.backend = match s.as_str() {
            "mie" => GreensBackend::Mie,
            "quasistatic" => GreensBackend::Quasistatic,
            other => {
                return Err(Error::Config(format!(
                    "backend must be 'mie' or 'quasistatic', got '{other}'"
                )))
            }
        };
    }
    if let Some(v) = get_f64(&table, "omega_min_ev")? {
        cfg.omega_min_ev = v;
    }
    if let Some(v) = get_f64(&table, "omega_max_ev")? {
        cfg.omega_max_ev = v;
    }
    if let Some(v) = get_int(&table, "omega_points")? {
        cfg.omega_points = v as usize;
    }
    if let Some(v) = get_f64(&table, "t_max_fs")? {
        cfg.t_max_fs = v;
    }
    if let Some(v) = get_int(&table, "t_points")? {
        cfg.t_points = v as usize;
    }
    if let Some(v) = get_int(&table, "theta_points")? {
        cfg.theta_points = v as usize;
    }
    if let Some(v) = get_f64(&table, "detector_r_nm")? {
        cfg.detector_r_nm = v;
    }
    if let Some(v) = get_f64(&table, "detector_theta_rad")? {
        cfg.detector_theta_rad = v;
    }
    if let Some(v) = table.get("mode_subset") {
        let arr = v.as_array().ok_or_else(|| {
            Error::Config("mode_subset must be an array of orders, e.g. [3]".into())
        })?;
        let mut subset = Vec::new();
        for item in arr {
            let n = item
                .as_integer()
                .ok_or_else(|| Error::Config("mode_subset entries must be integers".into()))?;
            if n < 1 {
                return Err(Error::Config("mode_subset entries must be >= 1".into()));
            }
            subset.push(n as u32);
        }
        cfg.mode_subset = Some(subset);
    }
    if let Some(s) = get_str(&table, "projection")? {
        cfg.projection = match s.as_str() {
            "vector" => Projection::Vector,
            "scalar" => Projection::Scalar,
            other => {
                return Err(Error::Config(format!(
                    "projection must be 'vector' or 'scalar', got '{other}'"
                )))
            }
        };
    }
    if let Some(s) = get_str(&table, "out_dir")? {
        cfg.out_dir = PathBuf::from(s);
    }

    validate(&cfg)?;
    Ok(cfg)
}

fn get_f64(table: &toml::Table, key: &str) -> Result<Option<f64>> {
    match table.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_float()
            .or_else(|| v.as_integer().map(|i| i as f64))
            .map(Some)
            .ok_or_else(|| Error::Config(format!("'{key}' must be a number"))),
    }
}

fn get_int(table: &toml::Table, key: &str) -> Result<Option<i64>> {
    match table.get(key) {
        None => Ok(None),
        Some(v) => {
            let i = v
                .as_integer()
                .ok_or_else(|| Error::Config(format!("'{key}' must be an integer")))?;
            if i < 0 {
                return Err(Error::Config(format!("'{key}' must be >= 0, got {i}")));
            }
            Ok(Some(i))
        }
    }
}

fn get_str(table: &toml::Table, key: &str) -> Result<Option<String>> {
    match table.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_str()
            .map(|s| Some(s.to_string()))
            .ok_or_else(|| Error::Config(format!("'{key}' must be a string"))),
    }
}

fn validate(cfg: &RunConfig) -> Result<()> {
    let fail = |msg: String| Err(Error::Config(msg));
    if cfg.eps_inf < 1.0 {
        return fail(format!("eps_inf must be >= 1, got {}", cfg.eps_inf));
    }
    if cfg.hbar_omega_p_ev < 0.0 {
        return fail(format!("hbar_omega_p_ev must be >= 0, got {}", cfg.hbar_omega_p_ev));
    }
    if cfg.hbar_gamma_p_ev <= 0.0 {
        return fail(format!("hbar_gamma_p_ev must be > 0, got {}", cfg.hbar_gamma_p_ev));
    }
    if cfg.eps_background < 1.0 {
        return fail(format!("eps_background must be >= 1, got {}", cfg.eps_background));
    }
    if cfg.radius_nm <= 0.0 {
        return fail(format!("radius must be > 0, got {}", cfg.radius_nm));
    }
    if cfg.gap_nm <= 0.0 {
        return fail(format!("gap must be > 0 (emitter outside the metal), got {}", cfg.gap_nm));
    }
    if cfg.omega_eg_ev <= 0.0 {
        return fail(format!("omega_eg_ev must be > 0, got {}", cfg.omega_eg_ev));
    }
    if cfg.dipole_debye <= 0.0 {
        return fail(format!("dipole_debye must be > 0, got {}", cfg.dipole_debye));
    }
    if cfg.gamma_d_ev < 0.0 {
        return fail(format!("gamma_d_ev must be >= 0, got {}", cfg.gamma_d_ev));
    }
    if cfg.n_modes < 1 || cfg.n_modes > 60 {
        return fail(format!("n_modes must be in 1..=60, got {}", cfg.n_modes));
    }
    if cfg.omega_max_ev <= cfg.omega_min_ev || cfg.omega_min_ev <= 0.0 {
        return fail(format!(
            "frequency grid must satisfy 0 < omega_min_ev < omega_max_ev, got [{}, {}]",
            cfg.omega_min_ev, cfg.omega_max_ev
        ));
    }
    if cfg.omega_points < 2 || cfg.omega_points > 200_000 {
        return fail(format!("omega_points must be in 2..=200000, got {}", cfg.omega_points));
    }
    if cfg.t_max_fs <= 0.0 {
        return fail(format!("t_max_fs must be > 0, got {}", cfg.t_max_fs));
    }
    if cfg.t_points < 2 {
        return fail(format!("t_points must be >= 2, got {}", cfg.t_points));
    }
    if cfg.theta_points < 3 {
        return fail(format!("theta_points must be >= 3, got {}", cfg.theta_points));
    }
    if cfg.detector_r_nm <= cfg.radius_nm + cfg.gap_nm {
        return fail(format!(
            "detector_r_nm must exceed the emitter distance {} nm, got {}",
            cfg.radius_nm + cfg.gap_nm,
            cfg.detector_r_nm
        ));
    }
    if !(0.0..=std::f64::consts::PI).contains(&cfg.detector_theta_rad) {
        return fail(format!(
            "detector_theta_rad must lie in [0, pi], got {}",
            cfg.detector_theta_rad
        ));
    }
    if let Some(subset) = &cfg.mode_subset {
        if subset.is_empty() {
            return fail("mode_subset must not be empty".into());
        }
        for &n in subset {
            if n < 1 || n > cfg.n_modes {
                return fail(format!(
                    "mode_subset entry {n} outside 1..={}",
                    cfg.n_modes
                ));
            }
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn material(&self) -> Result<DrudeMaterial> {
        DrudeMaterial::new(self.eps_inf, self.hbar_omega_p_ev, self.hbar_gamma_p_ev)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn system(&self) -> Result<SphereSystem> {
        SphereSystem::new(self.radius_nm, self.material()?, self.eps_background)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn emitter(&self) -> Result<EmitterParams> {
        let geometry = EmitterGeometry::new(self.radius_nm + self.gap_nm)
            .map_err(|e| Error::Config(e.to_string()))?;
        EmitterParams::new(self.omega_eg_ev, self.dipole_debye, self.gamma_d_ev, geometry)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn omega_grid(&self) -> Result<LinearGrid> {
        LinearGrid::new(self.omega_min_ev, self.omega_max_ev, self.omega_points)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn time_grid_fs(&self) -> Vec<f64> {
        (0..self.t_points)
            .map(|i| self.t_max_fs * i as f64 / (self.t_points - 1) as f64)
            .collect()
    }

    pub fn theta_grid(&self) -> Vec<f64> {
        (0..self.theta_points)
            .map(|i| std::f64::consts::PI * i as f64 / (self.theta_points - 1) as f64)
            .collect()
    }

    pub fn detector(&self) -> Detector {
        Detector { r_nm: self.detector_r_nm, theta_rad: self.detector_theta_rad }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_paper_defaults() {
        let cfg = parse_config("", &[]).unwrap();
        assert_eq!(cfg.radius_nm, 8.0);
        assert_eq!(cfg.gap_nm, 2.0);
        assert_eq!(cfg.omega_eg_ev, 2.94);
        assert_eq!(cfg.dipole_debye, 24.0);
        assert_eq!(cfg.gamma_d_ev, 0.015);
        assert_eq!(cfg.n_modes, 25);
        assert_eq!(cfg.detector_r_nm, 1000.0);
        assert_eq!(cfg.hbar_omega_p_ev, 7.90);
        assert!(matches!(cfg.backend, GreensBackend::Mie));
    }

    #[test]
    fn comments_and_overrides() {
        let text = "# reference configuration\nradius_nm = 20.0 # large sphere\ngap_nm = 2.0\n";
        let cfg = parse_config(text, &["dipole_debye=6".into()]).unwrap();
        assert_eq!(cfg.radius_nm, 20.0);
        assert_eq!(cfg.dipole_debye, 6.0);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = parse_config("radius = 5.0", &[]).unwrap_err();
        assert!(err.to_string().contains("unknown configuration key 'radius'"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn out_of_range_named_constraint() {
        let err = parse_config("radius_nm = -1.0", &[]).unwrap_err();
        assert!(err.to_string().contains("radius must be > 0"));
        let err = parse_config("n_modes = 0", &[]).unwrap_err();
        assert!(err.to_string().contains("n_modes"));
        let err = parse_config("backend = \"exact\"", &[]).unwrap_err();
        assert!(err.to_string().contains("backend"));
    }

    #[test]
    fn weak_coupling_override() {
        let cfg = parse_config("", &["dipole_debye=6".into()]).unwrap();
        assert_eq!(cfg.dipole_debye, 6.0);
        assert_eq!(cfg.omega_eg_ev, 2.94);
    }

    #[test]
    fn subset_round_trip() {
        let cfg = parse_config("mode_subset = [3]", &[]).unwrap();
        assert_eq!(cfg.mode_subset, Some(vec![3]));
        assert!(parse_config("mode_subset = []", &[]).is_err());
        assert!(parse_config("mode_subset = [40]", &[]).is_err());
    }

    #[test]
    fn resolved_pieces_construct() {
        let cfg = parse_config("", &[]).unwrap();
        assert!(cfg.system().is_ok());
        assert!(cfg.emitter().is_ok());
        assert!(cfg.omega_grid().is_ok());
        assert_eq!(cfg.time_grid_fs().len(), 2000);
        assert_eq!(cfg.theta_grid().len(), 721);
    }

    #[test]
    fn string_override_parses() {
        let cfg = parse_config("", &["backend=quasistatic".into()]).unwrap();
        assert!(matches!(cfg.backend, GreensBackend::Quasistatic));
    }
}
