//! Multipole-resolved scattered Green's tensor of a metal sphere for a
//! radial dipole on the sphere axis, plus the far-field Green's column to
//! a detector.
//!
//! Geometry: sphere of radius R centered at the origin, emitter on the +z
//! axis at distance z > R from the center, dipole along +z (radial). Only
//! the m = 0 TM multipoles couple; each order n is one mode.
//!
//! Sign and prefactor conventions are pinned by oracle constraints rather
//! than transcribed from a single reference: the Mie per-order G must
//! reduce to the quasi-static per-order G in the deep-subwavelength limit,
//! Im[G_uu at the source] must be positive (local density of states), and
//! the far-field column must (a) reduce to the analytic free dyad without
//! the sphere and (b) satisfy power balance against the independent
//! radiative-rate series. All four are asserted in the test suite.

use num_complex::Complex64;
use serde::Serialize;

use crate::bessel::{legendre_all, log_deriv_psi_all, sph_h1_all, sph_jn_yn_all};
use crate::constants::wavenumber;
use crate::drude::DrudeMaterial;
use crate::error::{Error, Result};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Metal sphere in a transparent background.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereSystem {
    radius_nm: f64,
    material: DrudeMaterial,
    eps_background: f64,
}

impl SphereSystem {
    pub fn new(radius_nm: f64, material: DrudeMaterial, eps_background: f64) -> Result<Self> {
        if radius_nm <= 0.0 {
            return Err(Error::Domain(format!("radius must be > 0 nm, got {radius_nm}")));
        }
        if eps_background < 1.0 {
            return Err(Error::Domain(format!(
                "background permittivity must be >= 1, got {eps_background}"
            )));
        }
        Ok(Self { radius_nm, material, eps_background })
    }

    pub fn radius_nm(&self) -> f64 {
        self.radius_nm
    }

    pub fn material(&self) -> &DrudeMaterial {
        &self.material
    }

    pub fn eps_background(&self) -> f64 {
        self.eps_background
    }

    /// Background wavenumber k = √εb · ω/c in 1/nm.
    pub fn background_wavenumber(&self, energy_ev: f64) -> f64 {
        self.eps_background.sqrt() * wavenumber(energy_ev)
    }
}

/// Radial emitter on the +z axis at distance `z_nm` from the sphere center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmitterGeometry {
    z_nm: f64,
}

impl EmitterGeometry {
    pub fn new(z_nm: f64) -> Result<Self> {
        if z_nm <= 0.0 {
            return Err(Error::Domain(format!("emitter distance must be > 0 nm, got {z_nm}")));
        }
        Ok(Self { z_nm })
    }

    pub fn z_nm(&self) -> f64 {
        self.z_nm
    }

    fn check_outside(&self, system: &SphereSystem) -> Result<()> {
        if self.z_nm <= system.radius_nm {
            return Err(Error::Geometry(format!(
                "emitter at z = {} nm lies inside the sphere of radius {} nm",
                self.z_nm, system.radius_nm
            )));
        }
        Ok(())
    }
}

/// Which per-order Green's function backs the mode sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GreensBackend {
    /// Full Mie series with retardation and radiative damping.
    Mie,
    /// Nonretarded multipole polarizabilities.
    Quasistatic,
}

/// Result of a truncated multipole sum with its convergence report.
#[derive(Debug, Clone, Copy)]
pub struct GreensSum {
    /// G_uu^scatt(r_d, r_d, ω) in 1/nm.
    pub value: Complex64,
    /// |last term| / |sum|; non-convergence is reported here, not raised.
    pub last_term_ratio: f64,
    /// Truncation order used.
    pub orders: usize,
}

/// Detector position in the meridional plane: distance from the sphere
/// center (nm) and polar angle from the emitter axis (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detector {
    pub r_nm: f64,
    pub theta_rad: f64,
}

/// Quasi-static multipole polarizability αₙ in nm^(2n+1):
/// αₙ = R^(2n+1) n(ε − εb) / (nε + (n+1)εb). The pole of the denominator
/// defines the LSPₙ resonance.
pub fn quasistatic_polarizability(
    system: &SphereSystem,
    n: u32,
    energy_ev: f64,
) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::Domain("multipole order must be >= 1".into()));
    }
    let eps = system.material.permittivity(energy_ev)?;
    let nf = n as f64;
    let eb = system.eps_background;
    let r_pow = system.radius_nm.powi(2 * n as i32 + 1);
    Ok(r_pow * nf * (eps - eb) / (nf * eps + (nf + 1.0) * eb))
}

/// Quasi-static order-n contribution to G_uu^scatt at the emitter, 1/nm:
/// (1/4πk²) (n+1)² αₙ / z^(2n+4), radial dipole, nonretarded.
pub fn quasistatic_guu_order(
    system: &SphereSystem,
    geometry: &EmitterGeometry,
    n: u32,
    energy_ev: f64,
) -> Result<Complex64> {
    geometry.check_outside(system)?;
    let alpha = quasistatic_polarizability(system, n, energy_ev)?;
    let k = system.background_wavenumber(energy_ev);
    let nf = n as f64;
    let z_pow = geometry.z_nm.powi(2 * n as i32 + 4);
    Ok((nf + 1.0) * (nf + 1.0) / (FOUR_PI * k * k * z_pow) * alpha)
}

/// TM (electric multipole) Mie scattering coefficient bₙ.
///
/// Bohren-Huffman normalization via logarithmic derivatives: for a
/// lossless sphere bₙ lies on the circle |bₙ − 1/2| = 1/2. The metal
/// refractive index branch is chosen with Im √ε ≥ 0.
pub fn mie_coefficient_b(system: &SphereSystem, n: u32, energy_ev: f64) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::Domain("multipole order must be >= 1".into()));
    }
    let tables = MieTables::build(system, n as usize, energy_ev)?;
    Ok(tables.coefficient(n as usize))
}

/// Per-frequency tables shared by every order of the Mie series.
struct MieTables {
    x: f64,
    m: Complex64,
    j: Vec<f64>,
    y: Vec<f64>,
    d: Vec<Complex64>,
}

impl MieTables {
    fn build(system: &SphereSystem, n_max: usize, energy_ev: f64) -> Result<Self> {
        let eps = system.material.permittivity(energy_ev)?;
        let mut m = (eps / system.eps_background).sqrt();
        if m.im < 0.0 {
            m = -m;
        }
        let k = system.background_wavenumber(energy_ev);
        let x = k * system.radius_nm;
        let (j, y) = sph_jn_yn_all(n_max, x);
        let d = log_deriv_psi_all(n_max, m * x);
        Ok(Self { x, m, j, y, d })
    }

    fn coefficient(&self, n: usize) -> Complex64 {
        let x = self.x;
        let nf = n as f64;
        let psi = x * self.j[n];
        let psi_prev = x * self.j[n - 1];
        let xi = x * Complex64::new(self.j[n], self.y[n]);
        let xi_prev = x * Complex64::new(self.j[n - 1], self.y[n - 1]);
        let t = self.d[n] / self.m + nf / x;
        (t * psi - psi_prev) / (t * xi - xi_prev)
    }
}

/// Mie order-n contribution to G_uu^scatt at the emitter, 1/nm:
/// −(ik/4π) n(n+1)(2n+1) bₙ [h⁽¹⁾ₙ(kz)/(kz)]².
///
/// The overall sign goes with the Bohren-Huffman bₙ normalization; it is
/// fixed by requiring agreement with [`quasistatic_guu_order`] as kR → 0
/// and a positive scattered local density of states near resonance.
pub fn mie_guu_order(
    system: &SphereSystem,
    geometry: &EmitterGeometry,
    n: u32,
    energy_ev: f64,
) -> Result<Complex64> {
    geometry.check_outside(system)?;
    let b = mie_coefficient_b(system, n, energy_ev)?;
    let k = system.background_wavenumber(energy_ev);
    let kz = k * geometry.z_nm;
    let h = sph_h1_all(n as usize, kz);
    let nf = n as f64;
    let hn_over = h[n as usize] / kz;
    Ok(-Complex64::i() * k / FOUR_PI * nf * (nf + 1.0) * (2.0 * nf + 1.0) * b * hn_over * hn_over)
}

/// Per-order contributions G_uu,n for n = 1..=n_max, one backend, one
/// frequency. Shared Bessel tables make this the fast path for mode sums.
pub fn scattered_guu_orders(
    system: &SphereSystem,
    geometry: &EmitterGeometry,
    energy_ev: f64,
    n_max: u32,
    backend: GreensBackend,
) -> Result<Vec<Complex64>> {
    if n_max < 1 {
        return Err(Error::Domain("truncation order must be >= 1".into()));
    }
    geometry.check_outside(system)?;
    match backend {
        GreensBackend::Quasistatic => (1..=n_max)
            .map(|n| quasistatic_guu_order(system, geometry, n, energy_ev))
            .collect(),
        GreensBackend::Mie => {
            let tables = MieTables::build(system, n_max as usize, energy_ev)?;
            let k = system.background_wavenumber(energy_ev);
            let kz = k * geometry.z_nm;
            let h = sph_h1_all(n_max as usize, kz);
            Ok((1..=n_max as usize)
                .map(|n| {
                    let nf = n as f64;
                    let b = tables.coefficient(n);
                    let hn_over = h[n] / kz;
                    -Complex64::i() * k / FOUR_PI
                        * nf
                        * (nf + 1.0)
                        * (2.0 * nf + 1.0)
                        * b
                        * hn_over
                        * hn_over
                })
                .collect())
        }
    }
}

/// Scattered Green's function G_uu^scatt(r_d, r_d, ω), 1/nm, summed over
/// multipole orders 1..=n_max with a convergence report.
pub fn scattered_guu(
    system: &SphereSystem,
    geometry: &EmitterGeometry,
    energy_ev: f64,
    n_max: u32,
    backend: GreensBackend,
) -> Result<GreensSum> {
    let orders = scattered_guu_orders(system, geometry, energy_ev, n_max, backend)?;
    let value: Complex64 = orders.iter().sum();
    let last = orders.last().copied().unwrap_or_default();
    let last_term_ratio = if value.norm() > 0.0 { last.norm() / value.norm() } else { 0.0 };
    Ok(GreensSum { value, last_term_ratio, orders: n_max as usize })
}

/// Im G_uu of the homogeneous background at the source: k/6π, 1/nm.
/// Normalizes every decay-rate statement in the crate.
pub fn free_guu_im(system: &SphereSystem, energy_ev: f64) -> f64 {
    system.background_wavenumber(energy_ev) / (6.0 * std::f64::consts::PI)
}

/// Free-space dyadic Green's column G⁰(r_det, r_src)·ẑ for the radial
/// dipole at z on the axis, expressed in spherical components
/// (r̂, θ̂, φ̂) at the detector. Units 1/nm. The φ̂ component vanishes
/// by axial symmetry.
pub fn free_field_column(
    geometry: &EmitterGeometry,
    detector: &Detector,
    k: f64,
) -> [Complex64; 3] {
    let (st, ct) = detector.theta_rad.sin_cos();
    // detector and source in cartesian (meridional plane, phi = 0)
    let rd = [detector.r_nm * st, 0.0, detector.r_nm * ct];
    let rs = [0.0, 0.0, geometry.z_nm];
    let dx = rd[0] - rs[0];
    let dz = rd[2] - rs[2];
    let dist = (dx * dx + dz * dz).sqrt();
    let kr = k * dist;
    let ikr = Complex64::new(0.0, kr);
    let pref = ikr.exp() / (FOUR_PI * dist);
    let a = 1.0 + (ikr - 1.0) / (kr * kr);
    let b = (Complex64::new(3.0, 0.0) - 3.0 * ikr - kr * kr) / (kr * kr);
    let rh = [dx / dist, 0.0, dz / dist];
    // column = pref * (a zhat + b rhat (rhat . zhat))
    let col_x = pref * b * rh[0] * rh[2];
    let col_z = pref * (a + b * rh[2] * rh[2]);
    // project on the detector's spherical basis
    [
        col_x * st + col_z * ct,
        col_x * ct - col_z * st,
        Complex64::new(0.0, 0.0),
    ]
}

/// Total Green's column (G⁰ + G^scatt)·ẑ from the emitter to the detector,
/// spherical components at the detector, 1/nm.
///
/// The free part is the analytic homogeneous dyad; the scattered part is
/// the outgoing TM multipole series with h⁽¹⁾ₙ(kr) at the detector,
/// h⁽¹⁾ₙ(kz) source factors and Legendre angular functions Pₙ(cos θ),
/// τₙ(θ) = dPₙ/dθ.
pub fn far_field_green_column(
    system: &SphereSystem,
    geometry: &EmitterGeometry,
    detector: &Detector,
    energy_ev: f64,
    n_max: u32,
) -> Result<[Complex64; 3]> {
    geometry.check_outside(system)?;
    if detector.r_nm <= system.radius_nm {
        return Err(Error::Geometry(format!(
            "detector at r = {} nm lies inside the sphere of radius {} nm",
            detector.r_nm, system.radius_nm
        )));
    }
    if detector.r_nm <= geometry.z_nm {
        return Err(Error::Geometry(format!(
            "detector at r = {} nm must lie beyond the emitter at z = {} nm",
            detector.r_nm, geometry.z_nm
        )));
    }
    let k = system.background_wavenumber(energy_ev);
    let mut col = free_field_column(geometry, detector, k);

    let nmax = n_max as usize;
    let tables = MieTables::build(system, nmax, energy_ev)?;
    let kz = k * geometry.z_nm;
    let kr = k * detector.r_nm;
    let hz = sph_h1_all(nmax, kz);
    let hr = sph_h1_all(nmax, kr);
    let (p, dp) = legendre_all(nmax, detector.theta_rad.cos());
    let sin_t = detector.theta_rad.sin();
    let pref = Complex64::i() * k / FOUR_PI;
    for n in 1..=nmax {
        let nf = n as f64;
        let b = tables.coefficient(n);
        // outgoing amplitude of mode n excited by the dipole
        let c = (2.0 * nf + 1.0) * (-b) * hz[n] / kz;
        // xi_n'(kr) = kr h_{n-1}(kr) - n h_n(kr)
        let xi_d = kr * hr[n - 1] - nf * hr[n];
        let tau = -sin_t * dp[n];
        col[0] += pref * c * nf * (nf + 1.0) * hr[n] / kr * p[n];
        col[1] += pref * c * xi_d / kr * tau;
    }
    Ok(col)
}

/// Radiative decay rate over the free-space rate for the radial dipole,
/// from the independent multipole series
/// (3/2) Σₙ n(n+1)(2n+1) |[jₙ(kz) − bₙ h⁽¹⁾ₙ(kz)]/(kz)|².
/// Used as the power-balance oracle for the far-field column.
pub fn radiative_rate_series(
    system: &SphereSystem,
    geometry: &EmitterGeometry,
    energy_ev: f64,
    n_max: u32,
) -> Result<f64> {
    geometry.check_outside(system)?;
    let nmax = n_max as usize;
    let tables = MieTables::build(system, nmax, energy_ev)?;
    let k = system.background_wavenumber(energy_ev);
    let kz = k * geometry.z_nm;
    let (j, y) = sph_jn_yn_all(nmax, kz);
    let mut sum = 0.0;
    for n in 1..=nmax {
        let nf = n as f64;
        let b = tables.coefficient(n);
        let h = Complex64::new(j[n], y[n]);
        let c = (Complex64::new(j[n], 0.0) - b * h) / kz;
        sum += nf * (nf + 1.0) * (2.0 * nf + 1.0) * c.norm_sqr();
    }
    Ok(1.5 * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn silver_system() -> SphereSystem {
        SphereSystem::new(8.0, DrudeMaterial::silver(), 1.0).unwrap()
    }

    fn paper_geometry() -> EmitterGeometry {
        EmitterGeometry::new(10.0).unwrap()
    }

    #[test]
    fn polarizability_pole_positions() {
        let sys = silver_system();
        // oracle: algebraic root of the Drude form, omega_n = omega_p/sqrt(eps_inf+(n+1)/n)
        for n in [1u32, 3] {
            let e_res = sys.material().lsp_resonance_ev(n, 1.0);
            // Re denominator changes sign across the resonance; the window
            // must cover the O(gamma_p^2/2 omega) damping shift (~0.5 meV)
            let eps_lo = sys.material().permittivity(e_res - 3e-3).unwrap();
            let eps_hi = sys.material().permittivity(e_res + 3e-3).unwrap();
            let nf = n as f64;
            let den_lo = nf * eps_lo.re + (nf + 1.0);
            let den_hi = nf * eps_hi.re + (nf + 1.0);
            assert!(den_lo < 0.0 && den_hi > 0.0, "no sign change at order {n}");
        }
        assert_relative_eq!(
            sys.material().lsp_resonance_ev(1, 1.0),
            2.793,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            sys.material().lsp_resonance_ev(3, 1.0),
            2.917,
            max_relative = 1e-3
        );
    }

    #[test]
    fn index_matched_sphere_vanishes() {
        // eps(omega) == eps_b makes alpha_n = 0; emulate with eps_b equal to
        // the metal permittivity real part at a frequency where Im eps ~ 0
        // is unreachable for Drude, so check the algebraic limit instead:
        // alpha_n -> 0 as (eps - eps_b) -> 0 linearly.
        let m = DrudeMaterial::new(6.0, 0.0, 0.051).unwrap(); // eps = 6 exactly
        let sys = SphereSystem::new(8.0, m, 6.0).unwrap();
        let a = quasistatic_polarizability(&sys, 2, 2.9).unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));
        let g = quasistatic_guu_order(&sys, &paper_geometry(), 2, 2.9).unwrap();
        assert_eq!(g, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn quasistatic_decay_rate_identity() {
        // 1 + (6pi c/omega) Im[sum G_n] == 1 + (3/2) k^-3 sum (n+1)^2 Im alpha_n / z^(2n+4)
        let sys = silver_system();
        let geom = paper_geometry();
        for &e in &[2.6, 2.79, 2.88, 2.92, 3.05] {
            let k = sys.background_wavenumber(e);
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            for n in 1..=20u32 {
                let g = quasistatic_guu_order(&sys, &geom, n, e).unwrap();
                lhs += 6.0 * std::f64::consts::PI / k * g.im;
                let alpha = quasistatic_polarizability(&sys, n, e).unwrap();
                let nf = n as f64;
                rhs += 1.5 / (k * k * k) * (nf + 1.0) * (nf + 1.0) * alpha.im
                    / geom.z_nm.powi(2 * n as i32 + 4);
            }
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn quasistatic_im_peaks_at_dipole_resonance() {
        let sys = silver_system();
        let geom = paper_geometry();
        let peak = sys.material().lsp_resonance_ev(1, 1.0);
        let at = |e: f64| quasistatic_guu_order(&sys, &geom, 1, e).unwrap().im;
        assert!(at(peak) > at(peak - 0.05));
        assert!(at(peak) > at(peak + 0.05));
    }

    #[test]
    fn mie_reference_values() {
        // frozen from an independent direct-ratio evaluation
        let sys = silver_system();
        let b1 = mie_coefficient_b(&sys, 1, 2.92).unwrap();
        let want = Complex64::new(0.0008278911127787328, 0.003456485622566245);
        assert!((b1 - want).norm() < 1e-14);
        let b3 = mie_coefficient_b(&sys, 3, 2.92).unwrap();
        let want = Complex64::new(4.9398847389840706e-9, 4.157699242349212e-10);
        assert!((b3 - want).norm() < 1e-20);

        let g3 = mie_guu_order(&sys, &paper_geometry(), 3, 2.92).unwrap();
        let want = Complex64::new(-1.8460379865494883, 21.933319682923496);
        assert!((g3 - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn mie_lossless_unitarity_circle() {
        // Im eps = 0: |b_n - 1/2| <= 1/2
        // Build a lossless dielectric by taking the Drude eps at gamma_p -> 0
        // numerically: use a large constant-eps material instead.
        let m = DrudeMaterial::new(4.0, 0.0, 0.051).unwrap(); // eps = 4, lossless
        let sys = SphereSystem::new(20.0, m, 1.0).unwrap();
        for n in 1..=4u32 {
            let b = mie_coefficient_b(&sys, n, 2.92).unwrap();
            let d = (b - Complex64::new(0.5, 0.0)).norm();
            assert!(d <= 0.5 + 1e-10, "order {n}: |b - 1/2| = {d}");
        }
    }

    #[test]
    fn mie_quadrupole_visible_at_r20() {
        let sys = SphereSystem::new(20.0, DrudeMaterial::silver(), 1.0).unwrap();
        let b2 = mie_coefficient_b(&sys, 2, 2.89).unwrap();
        assert!(b2.norm() > 1e-3, "|b2| = {}", b2.norm());
    }

    #[test]
    fn quasistatic_agreement_in_subwavelength_limit() {
        // kR < 0.05, kz < 0.1 at 2.92 eV: R = 3 nm, z = 6 nm
        let sys = SphereSystem::new(3.0, DrudeMaterial::silver(), 1.0).unwrap();
        let geom = EmitterGeometry::new(6.0).unwrap();
        assert!(sys.background_wavenumber(2.92) * 3.0 < 0.05);
        assert!(sys.background_wavenumber(2.92) * 6.0 < 0.1);
        for n in 1..=6u32 {
            let gq = quasistatic_guu_order(&sys, &geom, n, 2.92).unwrap();
            let gm = mie_guu_order(&sys, &geom, n, 2.92).unwrap();
            let rel = (gm - gq).norm() / gq.norm();
            assert!(rel < 0.02, "order {n}: relative difference {rel}");
        }
    }

    #[test]
    fn purcell_enhancement_at_gap() {
        let sys = silver_system();
        let geom = paper_geometry();
        let g = scattered_guu(&sys, &geom, 2.92, 25, GreensBackend::Mie).unwrap();
        let enhancement = 1.0 + g.value.im / free_guu_im(&sys, 2.92);
        assert!(enhancement > 100.0, "enhancement {enhancement}");
    }

    #[test]
    fn truncation_convergence() {
        let sys = silver_system();
        let geom = paper_geometry();
        for &e in &[2.5, 2.8, 2.92, 3.1] {
            let s = scattered_guu(&sys, &geom, e, 25, GreensBackend::Mie).unwrap();
            assert!(s.last_term_ratio < 1e-3, "E = {e}: ratio {}", s.last_term_ratio);
            // terms decay by (R/z)^2 = 0.64 per order: once the tail sits
            // below 1e-6 (N = 50 here), doubling N barely moves the sum
            let s2 = scattered_guu(&sys, &geom, e, 50, GreensBackend::Mie).unwrap();
            let s4 = scattered_guu(&sys, &geom, e, 100, GreensBackend::Mie).unwrap();
            assert!((s4.value - s2.value).norm() / s2.value.norm() < 1e-6);
        }
        // N = 1 equals the single-order value exactly
        let s1 = scattered_guu(&sys, &geom, 2.92, 1, GreensBackend::Mie).unwrap();
        let o1 = mie_guu_order(&sys, &geom, 1, 2.92).unwrap();
        assert_eq!(s1.value, o1);
    }

    #[test]
    fn ldos_positive_over_band() {
        let sys = silver_system();
        let geom = paper_geometry();
        for backend in [GreensBackend::Mie, GreensBackend::Quasistatic] {
            for i in 0..=70 {
                let e = 2.0 + 0.02 * i as f64;
                let g = scattered_guu(&sys, &geom, e, 25, backend).unwrap();
                assert!(
                    free_guu_im(&sys, e) + g.value.im > 0.0,
                    "total LDOS negative at {e} eV ({backend:?})"
                );
            }
        }
    }

    #[test]
    fn free_column_reference_value() {
        // frozen from an independent evaluation of the homogeneous dyad
        let geom = paper_geometry();
        let det = Detector { r_nm: 1000.0, theta_rad: std::f64::consts::FRAC_PI_2 };
        let col = free_field_column(&geom, &det, wavenumber(2.92));
        let want_r = Complex64::new(-6.092726852274808e-7, 5.202358775170192e-7);
        let want_t = Complex64::new(5.2886719349489055e-5, -5.9202143025611476e-5);
        assert!((col[0] - want_r).norm() < 1e-12 * want_r.norm().max(1e-8));
        assert!((col[1] - want_t).norm() < 1e-12 * want_t.norm());
        assert_eq!(col[2], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn no_sphere_reduces_to_free_dipole() {
        // index-matched sphere: b_n = 0, column = free dyad column
        let m = DrudeMaterial::new(1.0, 0.0, 0.051).unwrap();
        let sys = SphereSystem::new(8.0, m, 1.0).unwrap();
        let geom = paper_geometry();
        let det = Detector { r_nm: 2000.0, theta_rad: 1.0 };
        let col = far_field_green_column(&sys, &geom, &det, 2.92, 25).unwrap();
        let free = free_field_column(&geom, &det, sys.background_wavenumber(2.92));
        for i in 0..3 {
            assert!((col[i] - free[i]).norm() < 1e-14);
        }
        // far-zone |column|^2 ~ sin^2(theta); on-axis transverse null
        let far = 1e6;
        let norm_at = |th: f64| {
            let c = free_field_column(&geom, &Detector { r_nm: far, theta_rad: th }, 0.0148);
            (c[0].norm_sqr() + c[1].norm_sqr() + c[2].norm_sqr()).sqrt()
        };
        let mid = norm_at(std::f64::consts::FRAC_PI_2);
        for &th in &[0.3, 0.7, 1.1, 2.0, 2.6] {
            assert_relative_eq!(norm_at(th) / mid, th.sin().abs(), max_relative = 1e-3);
        }
        let on_axis = free_field_column(
            &geom,
            &Detector { r_nm: far, theta_rad: 0.0 },
            0.0148,
        );
        assert!(on_axis[1].norm() / mid < 1e-6);
        assert!(on_axis[0].norm() / mid < 1e-3); // radial piece dies as 1/(kr)^2
    }

    #[test]
    fn detector_inside_sphere_rejected() {
        let sys = silver_system();
        let geom = paper_geometry();
        let det = Detector { r_nm: 5.0, theta_rad: 1.0 };
        assert!(far_field_green_column(&sys, &geom, &det, 2.92, 10).is_err());
        let det = Detector { r_nm: 9.0, theta_rad: 1.0 };
        assert!(far_field_green_column(&sys, &geom, &det, 2.92, 10).is_err());
    }

    fn sphere_integral_power(sys: &SphereSystem, geom: &EmitterGeometry, e: f64, r: f64) -> f64 {
        // 2 pi r^2 int |col|^2 sin(theta) d(theta)
        let n = 720;
        let mut acc = 0.0;
        let mut prev: Option<f64> = None;
        for i in 0..=n {
            let th = std::f64::consts::PI * i as f64 / n as f64;
            let col = far_field_green_column(sys, geom, &Detector { r_nm: r, theta_rad: th }, e, 25)
                .unwrap();
            let v = (col[0].norm_sqr() + col[1].norm_sqr()) * th.sin();
            if let Some(p) = prev {
                acc += 0.5 * (p + v) * std::f64::consts::PI / n as f64;
            }
            prev = Some(v);
        }
        2.0 * std::f64::consts::PI * r * r * acc
    }

    #[test]
    fn power_balance_against_radiative_rate() {
        let sys = silver_system();
        let geom = paper_geometry();
        let e = 2.92;
        // free-dipole reference power in this G normalization:
        // far-zone |G0.zhat| = sin(theta)/(4 pi r), so the sphere integral
        // is (1/16pi^2)(8pi/3) = 1/(6 pi)
        let p_free = 1.0 / (6.0 * std::f64::consts::PI);
        let rate_oracle = radiative_rate_series(&sys, &geom, e, 25).unwrap();
        for &r in &[1.0e4, 2.0e4] {
            let p = sphere_integral_power(&sys, &geom, e, r);
            assert_relative_eq!(p / p_free, rate_oracle, max_relative = 1e-2);
        }
    }

    #[test]
    fn far_field_outgoing_amplitude_decay() {
        let sys = silver_system();
        let geom = paper_geometry();
        let th = 1.1;
        let e = 2.92;
        let r = 1.0e4;
        let norm = |r: f64| {
            let c = far_field_green_column(&sys, &geom, &Detector { r_nm: r, theta_rad: th }, e, 25)
                .unwrap();
            (c[0].norm_sqr() + c[1].norm_sqr() + c[2].norm_sqr()).sqrt()
        };
        let ratio = norm(2.0 * r) * 2.0 * r / (norm(r) * r);
        assert!((ratio - 1.0).abs() < 1e-3, "1/r decay violated: {ratio}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ldos_positivity_random_geometry(
            z_extra in 0.5f64..30.0,
            e in 2.2f64..3.3,
        ) {
            let sys = silver_system();
            let geom = EmitterGeometry::new(8.0 + z_extra).unwrap();
            let g = scattered_guu(&sys, &geom, e, 25, GreensBackend::Mie).unwrap();
            prop_assert!(free_guu_im(&sys, e) + g.value.im > 0.0);
        }
    }
}
