//! Physical constants and the audited unit-conversion helpers.
//!
//! Internal unit system: energies in eV, lengths in nm, times in fs.
//! SI values appear only inside [`coupling_prefactor`] and
//! [`debye_to_si`]; everything downstream works with the eV/nm/fs
//! combination those two return.

use crate::error::{Error, Result};

/// Reduced Planck constant, eV·fs.
pub const HBAR_EV_FS: f64 = 0.6582119;

/// Speed of light in vacuum, nm/fs.
pub const C_NM_FS: f64 = 299.792458;

/// ħc, eV·nm. Derived from the two constants above so that
/// `wavenumber(e) * C_NM_FS * HBAR_EV_FS == e` holds exactly.
pub const HBAR_C_EV_NM: f64 = HBAR_EV_FS * C_NM_FS;

/// Vacuum permittivity, F/m (SI).
pub const EPS0_F_PER_M: f64 = 8.854_187_812_8e-12;

/// One electron-volt in joules; numerically the elementary charge in C.
pub const EV_IN_J: f64 = 1.602_176_634e-19;

/// One Debye in C·m.
pub const DEBYE_C_M: f64 = 3.33564e-30;

/// Vacuum wavenumber k₀ = E/ħc, 1/nm, for a photon energy in eV.
#[inline]
pub fn wavenumber(energy_ev: f64) -> f64 {
    energy_ev / HBAR_C_EV_NM
}

/// Convert a dipole moment from Debye to C·m.
///
/// Errors on negative input.
pub fn debye_to_si(dipole_debye: f64) -> Result<f64> {
    if dipole_debye < 0.0 {
        return Err(Error::Domain(format!(
            "dipole moment must be >= 0 Debye, got {dipole_debye}"
        )));
    }
    Ok(dipole_debye * DEBYE_C_M)
}

/// The single dimensionful prefactor k₀²d²/ε₀, returned in eV·nm.
///
/// All dimensionful couplings in the crate are built from this helper:
/// multiplying it by a Green's function value in 1/nm gives an energy in
/// eV. The emitter self-energy is `pref * G_uu`, the golden-rule energy
/// width `2 * pref * Im G_uu`, and the per-mode coupling density
/// `pref * Im G_n / π`.
///
/// Computed in SI (k₀ in 1/m, d in C·m, ε₀ in F/m → J·m) and converted
/// once to eV·nm.
pub fn coupling_prefactor(energy_ev: f64, dipole_debye: f64) -> f64 {
    let k0_per_m = energy_ev / (HBAR_C_EV_NM * 1e-9);
    let d_cm = dipole_debye * DEBYE_C_M;
    k0_per_m * k0_per_m * d_cm * d_cm / EPS0_F_PER_M / EV_IN_J * 1e9
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn debye_conversion_matches_definition() {
        assert_eq!(debye_to_si(0.0).unwrap(), 0.0);
        assert_eq!(debye_to_si(1.0).unwrap(), 3.33564e-30);
        assert_relative_eq!(debye_to_si(24.0).unwrap(), 8.005536e-29, max_relative = 1e-12);
        assert!(debye_to_si(-1.0).is_err());
    }

    #[test]
    fn wavenumber_roundtrip() {
        let e = 2.92;
        assert_relative_eq!(wavenumber(e) * HBAR_C_EV_NM, e, max_relative = 1e-15);
        // ~425 nm wavelength at 2.92 eV
        let lambda = 2.0 * std::f64::consts::PI / wavenumber(e);
        assert_relative_eq!(lambda, 424.6, max_relative = 1e-3);
    }

    #[test]
    fn prefactor_magnitude() {
        // k0^2 d^2 / eps0 at 2.92 eV, 24 D, evaluated by hand in SI:
        // k0 = 2.92/ħc = 1.4798e7 1/m, d = 8.0055e-29 C m
        // value = k0^2 d^2/eps0 = 1.5852e-31 J m = 9.894e-4 eV nm
        let p = coupling_prefactor(2.92, 24.0);
        assert_relative_eq!(p, 9.894e-4, max_relative = 1e-3);
        // quadratic in both arguments
        assert_relative_eq!(coupling_prefactor(5.84, 24.0), 4.0 * p, max_relative = 1e-12);
        assert_relative_eq!(coupling_prefactor(2.92, 48.0), 4.0 * p, max_relative = 1e-12);
    }
}
