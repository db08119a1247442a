//! Near-field polarization spectrum, far-field detector spectrum, and
//! angular radiation patterns.
//!
//! The near-field spectrum uses only the scattered Green's function at the
//! emitter (the free-space part is already absorbed into ω_eg and γ_d);
//! the far-field weight uses the total (free + scattered) propagator to
//! the detector. That asymmetry is deliberate and load-bearing.

use serde::Serialize;

use crate::constants::coupling_prefactor;
use crate::coupling::EmitterParams;
use crate::error::{Error, Result};
use crate::exec::map_grid;
use crate::fit;
use crate::greens::{
    far_field_green_column, scattered_guu_orders, Detector, GreensBackend, SphereSystem,
};
use crate::grid::{trapezoid, LinearGrid};

/// How the far-field Green's column is turned into a detector weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    /// Squared norm of the full column |G·û|² (the field correlation is a
    /// vector dot product).
    Vector,
    /// |û·G·û|², the scalar dyadic component along the emitter axis.
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Near,
    Far,
    Pattern,
}

/// A sampled curve plus the configuration that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    /// Photon energies in eV for near/far, polar angle in rad for patterns.
    pub abscissa: Vec<f64>,
    /// Near: 1/eV² up to a global scale. Far: dimensionless, the
    /// documented prefactor being pref(E)²·W·P/2π with pref = k₀²d²/ε₀ in
    /// eV·nm. Pattern: normalized to unit maximum.
    pub values: Vec<f64>,
    pub metadata: SpectrumMeta,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumMeta {
    pub backend: GreensBackend,
    pub n_max: u32,
    pub mode_subset: Option<Vec<u32>>,
    pub detector: Option<Detector>,
    pub projection: Option<Projection>,
    /// Fixed photon energy of a pattern, eV.
    pub energy_ev: Option<f64>,
    /// Detector radius of a pattern, nm.
    pub pattern_r_nm: Option<f64>,
}

/// Near-field polarization spectrum
/// P(E) = |ω_eg − E − iγ_d/2 − pref(E)·G_uu^scatt(E)|⁻², in 1/eV².
///
/// `mode_subset` restricts the multipole sum to the listed orders;
/// `None` sums 1..=n_max.
pub fn polarization_spectrum(
    emitter: &EmitterParams,
    system: &SphereSystem,
    grid: &LinearGrid,
    mode_subset: Option<&[u32]>,
    n_max: u32,
    backend: GreensBackend,
) -> Result<Spectrum> {
    let subset = validate_subset(mode_subset, n_max)?;
    let energies = grid.values();
    let values = map_grid(&energies, |&e| {
        Ok(polarization_at(emitter, system, e, subset.as_deref(), n_max, backend)?)
    })?;
    Ok(Spectrum {
        kind: SpectrumKind::Near,
        abscissa: energies,
        values,
        metadata: SpectrumMeta {
            backend,
            n_max,
            mode_subset: subset,
            detector: None,
            projection: None,
            energy_ev: None,
            pattern_r_nm: None,
        },
    })
}

/// P(E) at a single energy; shared by the near and far spectra.
pub fn polarization_at(
    emitter: &EmitterParams,
    system: &SphereSystem,
    energy_ev: f64,
    mode_subset: Option<&[u32]>,
    n_max: u32,
    backend: GreensBackend,
) -> Result<f64> {
    let orders = scattered_guu_orders(system, &emitter.geometry, energy_ev, n_max, backend)?;
    let g = match mode_subset {
        None => orders.iter().sum(),
        Some(subset) => subset
            .iter()
            .map(|&n| orders[n as usize - 1])
            .sum::<num_complex::Complex64>(),
    };
    let sigma = coupling_prefactor(energy_ev, emitter.dipole_debye) * g;
    let denom = num_complex::Complex64::new(
        emitter.omega_eg_ev - energy_ev - sigma.re,
        -0.5 * emitter.gamma_d_ev - sigma.im,
    );
    Ok(1.0 / denom.norm_sqr())
}

fn validate_subset(subset: Option<&[u32]>, n_max: u32) -> Result<Option<Vec<u32>>> {
    match subset {
        None => Ok(None),
        Some([]) => Err(Error::Domain("mode subset must not be empty".into())),
        Some(s) => {
            for &n in s {
                if n < 1 || n > n_max {
                    return Err(Error::Domain(format!(
                        "mode subset entry {n} outside 1..={n_max}"
                    )));
                }
            }
            Ok(Some(s.to_vec()))
        }
    }
}

fn detector_weight(column: &[num_complex::Complex64; 3], theta: f64, projection: Projection) -> f64 {
    match projection {
        Projection::Vector => {
            column[0].norm_sqr() + column[1].norm_sqr() + column[2].norm_sqr()
        }
        Projection::Scalar => {
            // zhat . column in the detector's spherical basis
            (theta.cos() * column[0] - theta.sin() * column[1]).norm_sqr()
        }
    }
}

/// Far-field spectrum S(E) = pref(E)²·W(E)·P(E)/2π at a fixed detector,
/// dimensionless. W is the squared column norm (vector projection,
/// default) or the squared scalar G_uu (literal-dyadic-component variant).
pub fn far_spectrum(
    emitter: &EmitterParams,
    system: &SphereSystem,
    detector: &Detector,
    grid: &LinearGrid,
    n_max: u32,
    projection: Projection,
    backend: GreensBackend,
) -> Result<Spectrum> {
    if detector.r_nm <= emitter.geometry.z_nm() {
        return Err(Error::Geometry(format!(
            "detector at r = {} nm must lie beyond the emitter at z = {} nm",
            detector.r_nm,
            emitter.geometry.z_nm()
        )));
    }
    let energies = grid.values();
    let values = map_grid(&energies, |&e| {
        let p = polarization_at(emitter, system, e, None, n_max, backend)?;
        let col = far_field_green_column(system, &emitter.geometry, detector, e, n_max)?;
        let w = detector_weight(&col, detector.theta_rad, projection);
        let pref = coupling_prefactor(e, emitter.dipole_debye);
        Ok(pref * pref * w * p / (2.0 * std::f64::consts::PI))
    })?;
    Ok(Spectrum {
        kind: SpectrumKind::Far,
        abscissa: energies,
        values,
        metadata: SpectrumMeta {
            backend,
            n_max,
            mode_subset: None,
            detector: Some(*detector),
            projection: Some(projection),
            energy_ev: None,
            pattern_r_nm: None,
        },
    })
}

/// Angular radiation pattern S(θ) at a fixed photon energy, normalized to
/// unit maximum. θ runs from the emitter axis; the detector stays at
/// radius `r_nm`, which must satisfy k·r > 10 (far zone).
pub fn radiation_pattern(
    emitter: &EmitterParams,
    system: &SphereSystem,
    energy_ev: f64,
    theta_grid: &[f64],
    r_nm: f64,
    n_max: u32,
    projection: Projection,
) -> Result<Spectrum> {
    if theta_grid.len() < 2 || theta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid("theta grid must be strictly increasing".into()));
    }
    let kr = system.background_wavenumber(energy_ev) * r_nm;
    if kr <= 10.0 {
        return Err(Error::Geometry(format!(
            "pattern detector must sit in the far zone: k r = {kr:.2} <= 10"
        )));
    }
    let values_raw = map_grid(theta_grid, |&theta| {
        let det = Detector { r_nm, theta_rad: theta };
        let col = far_field_green_column(system, &emitter.geometry, &det, energy_ev, n_max)?;
        Ok(detector_weight(&col, theta, projection))
    })?;
    let max = values_raw.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return Err(Error::Numerics("radiation pattern is identically zero".into()));
    }
    let values = values_raw.iter().map(|v| v / max).collect();
    Ok(Spectrum {
        kind: SpectrumKind::Pattern,
        abscissa: theta_grid.to_vec(),
        values,
        metadata: SpectrumMeta {
            backend: GreensBackend::Mie,
            n_max,
            mode_subset: None,
            detector: None,
            projection: Some(projection),
            energy_ev: Some(energy_ev),
            pattern_r_nm: Some(r_nm),
        },
    })
}

/// Refined local maxima of a spectrum as (abscissa, height) pairs.
pub fn peak_positions(spectrum: &Spectrum) -> Vec<(f64, f64)> {
    fit::local_maxima(&spectrum.abscissa, &spectrum.values)
        .into_iter()
        .map(|p| (p.x, p.y))
        .collect()
}

/// Distance between the two highest maxima (eV for energy spectra).
pub fn splitting(spectrum: &Spectrum) -> Result<f64> {
    fit::splitting(&spectrum.abscissa, &spectrum.values)
}

/// Forward/backward asymmetry of a radiation pattern over [0, π]:
/// A = (∫₀^{π/2} − ∫_{π/2}^π) S sinθ dθ / ∫₀^π S sinθ dθ.
pub fn pattern_asymmetry(pattern: &Spectrum) -> Result<f64> {
    let th = &pattern.abscissa;
    if (th[0] - 0.0).abs() > 1e-9 || (th[th.len() - 1] - std::f64::consts::PI).abs() > 1e-9 {
        return Err(Error::Grid("asymmetry needs a theta grid covering [0, pi]".into()));
    }
    let w: Vec<f64> =
        th.iter().zip(&pattern.values).map(|(&t, &s)| s * t.sin()).collect();
    let total = trapezoid(th, &w);
    let half = std::f64::consts::FRAC_PI_2;
    let mut front = 0.0;
    for i in 1..th.len() {
        let (a, b) = (th[i - 1], th[i]);
        if b <= half {
            front += 0.5 * (w[i] + w[i - 1]) * (b - a);
        } else if a < half {
            // split the straddling cell at pi/2
            let f = (half - a) / (b - a);
            let wm = w[i - 1] + f * (w[i] - w[i - 1]);
            front += 0.5 * (w[i - 1] + wm) * (half - a);
        }
    }
    let back = total - front;
    Ok((front - back) / total)
}
