//! Drude dielectric model and its analytic-consistency checks.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::LinearGrid;

/// Dispersive metal permittivity ε(ω) = ε∞ − ωp²/(ω² + iγpω), with the
/// plasma energy ħωp and damping ħγp stored in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrudeMaterial {
    eps_inf: f64,
    omega_p_ev: f64,
    gamma_p_ev: f64,
}

impl DrudeMaterial {
    /// Requires ε∞ ≥ 1 and ħγp > 0. ħωp may be zero (dispersionless
    /// limit, useful for validation runs); a metal has ħωp > 0.
    pub fn new(eps_inf: f64, omega_p_ev: f64, gamma_p_ev: f64) -> Result<Self> {
        if eps_inf < 1.0 {
            return Err(Error::Domain(format!("eps_inf must be >= 1, got {eps_inf}")));
        }
        if omega_p_ev < 0.0 {
            return Err(Error::Domain(format!(
                "plasma energy must be >= 0 eV, got {omega_p_ev}"
            )));
        }
        if gamma_p_ev <= 0.0 {
            return Err(Error::Domain(format!(
                "Drude damping must be > 0 eV, got {gamma_p_ev}"
            )));
        }
        Ok(Self { eps_inf, omega_p_ev, gamma_p_ev })
    }

    /// Silver: ε∞ = 6, ħωp = 7.90 eV, ħγp = 51 meV.
    pub fn silver() -> Self {
        Self { eps_inf: 6.0, omega_p_ev: 7.90, gamma_p_ev: 0.051 }
    }

    pub fn eps_inf(&self) -> f64 {
        self.eps_inf
    }

    pub fn omega_p_ev(&self) -> f64 {
        self.omega_p_ev
    }

    pub fn gamma_p_ev(&self) -> f64 {
        self.gamma_p_ev
    }

    /// Complex relative permittivity at photon energy ħω (eV).
    ///
    /// Im ε > 0 for every ω > 0 whenever ħωp > 0 (passivity).
    pub fn permittivity(&self, energy_ev: f64) -> Result<Complex64> {
        if energy_ev <= 0.0 {
            return Err(Error::Domain(format!(
                "permittivity requires a positive photon energy, got {energy_ev} eV"
            )));
        }
        let denom = Complex64::new(energy_ev * energy_ev, self.gamma_p_ev * energy_ev);
        Ok(self.eps_inf - self.omega_p_ev * self.omega_p_ev / denom)
    }

    /// Quasi-static multipole resonance energy ħωn = ħωp/√(ε∞ + (n+1)/n · εb),
    /// the root of Re[n ε(ω) + (n+1) εb] = 0 with damping neglected.
    pub fn lsp_resonance_ev(&self, n: u32, eps_background: f64) -> f64 {
        let nf = n as f64;
        self.omega_p_ev / (self.eps_inf + (nf + 1.0) / nf * eps_background).sqrt()
    }

    /// Maximum relative Kramers-Kronig residual of ε over `grid`.
    ///
    /// Re ε(ω) − ε∞ is compared against the principal-value Hilbert
    /// transform (2/π) P∫₀^∞ ω′ Im ε(ω′)/(ω′² − ω²) dω′ evaluated by a
    /// singularity-subtracted trapezoid rule. The integration grid is the
    /// given grid extended down to ω = 0 at the same spacing (ω Im ε(ω)
    /// stays finite there); the residual is reported over evaluation
    /// energies in [ωmin + 2% of span, ωmax/2], away from the truncated
    /// upper tail.
    ///
    /// This is a validation tool for the integration machinery: the Drude
    /// form satisfies the relations analytically. Grid requirements
    /// (heuristics, violations produce a diagnostic error): span ≥ 50·ħωp
    /// and spacing ≤ 2·ħγp so the low-frequency structure of Im ε is
    /// resolved.
    pub fn kramers_kronig_residual(&self, grid: &LinearGrid) -> Result<f64> {
        if grid.min <= 0.0 {
            return Err(Error::Grid(format!(
                "Kramers-Kronig grid must start above 0 eV, got {} eV",
                grid.min
            )));
        }
        // Dispersionless: both sides vanish identically.
        if self.omega_p_ev == 0.0 {
            return Ok(0.0);
        }
        let span_needed = 50.0 * self.omega_p_ev;
        if grid.max < span_needed {
            return Err(Error::Grid(format!(
                "Kramers-Kronig grid too narrow: span reaches {} eV but needs >= {} eV (50 x plasma energy)",
                grid.max, span_needed
            )));
        }
        let h = grid.step();
        if h > 2.0 * self.gamma_p_ev {
            return Err(Error::Grid(format!(
                "Kramers-Kronig grid too coarse: spacing {} eV exceeds 2 x damping = {} eV; \
                 the low-frequency structure of Im eps would be unresolved",
                h,
                2.0 * self.gamma_p_ev
            )));
        }

        // omega * Im eps(omega) and its derivative; finite at omega -> 0.
        let wp2 = self.omega_p_ev * self.omega_p_ev;
        let gp = self.gamma_p_ev;
        let w_im = |w: f64| wp2 * gp / (w * w + gp * gp);
        let dw_im = |w: f64| -2.0 * wp2 * gp * w / ((w * w + gp * gp) * (w * w + gp * gp));

        // Integration grid: [0] + extension + user grid, uniform spacing h.
        let n_ext = (grid.min / h).ceil() as usize;
        let mut wg = Vec::with_capacity(grid.points + n_ext + 1);
        wg.push(0.0);
        for i in (1..=n_ext).rev() {
            let w = grid.min - h * i as f64;
            if w > 0.5 * h {
                wg.push(w);
            }
        }
        wg.extend(grid.values());

        let lo = grid.min + 0.02 * (grid.max - grid.min);
        let hi = 0.5 * grid.max;
        let b = *wg.last().unwrap();

        let mut worst: f64 = 0.0;
        for &we in grid.values().iter().filter(|&&w| w >= lo && w <= hi) {
            let wim_e = w_im(we);
            // trapezoid over the subtracted, regular integrand
            let f = |w: f64| {
                if (w - we).abs() < 1e-12 {
                    dw_im(we) / (2.0 * we)
                } else {
                    (w_im(w) - wim_e) / (w * w - we * we)
                }
            };
            let mut integral = 0.0;
            for i in 1..wg.len() {
                integral += 0.5 * (f(wg[i]) + f(wg[i - 1])) * (wg[i] - wg[i - 1]);
            }
            // exact principal value of the subtracted constant over [0, b]
            integral += wim_e * ((b - we) / (b + we)).ln() / (2.0 * we);
            let kk = 2.0 / std::f64::consts::PI * integral;
            let lhs = -wp2 / (we * we + gp * gp); // Re eps - eps_inf
            let resid = (lhs - kk).abs() / lhs.abs();
            worst = worst.max(resid);
        }
        Ok(worst)
    }
}
