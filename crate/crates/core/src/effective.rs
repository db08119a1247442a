//! Non-Hermitian effective Hamiltonian of the emitter-LSP star system,
//! its biorthogonal dressed states, and the 2x2 analytic reduction.
//!
//! Basis ordering: {|e,∅⟩, |g,1₁⟩, …, |g,1_N⟩}. The matrix is stored
//! ħ-divided, in eV:
//!
//! ```text
//! H[0][0] = -i γ_d/2          H[0][n] = +i g_n
//! H[n][0] = -i g_n            H[n][n] = Δ_n - i γ_n/2,  Δ_n = ω_n - ω_eg
//! ```
//!
//! with no mode-mode couplings (star topology). With D = diag(-1,1,…,1)
//! the structure gives Hᵀ = D H D, so the left eigenvector paired with a
//! right eigenvector (m₀, m₁, …, m_N) is (-m₀*, m₁*, …, m_N*) up to scale.

use ndarray::{Array1, Array2};
use ndarray_linalg::Eig;
use num_complex::Complex64;
use serde::Serialize;

use crate::coupling::ModeParams;
use crate::error::{Error, Result};

/// Dense (N+1)x(N+1) star Hamiltonian in eV, plus the labels needed to
/// interpret it.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub matrix: Array2<Complex64>,
    pub omega_eg_ev: f64,
    /// LSP order of each mode row/column 1..=N.
    pub orders: Vec<u32>,
}

impl EffectiveHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_modes(&self) -> usize {
        self.dim() - 1
    }
}

/// Eigensystem of the effective Hamiltonian with biorthonormal left/right
/// pairs, sorted by Re λ (ties by Im λ).
#[derive(Debug, Clone)]
pub struct DressedStates {
    /// Complex eigenvalues λ_m, eV, relative to ω_eg.
    pub eigenvalues: Vec<Complex64>,
    /// Right eigenvectors as columns, unit Euclidean norm, phase fixed.
    pub right: Array2<Complex64>,
    /// Left eigenvectors as columns, scaled so ⟨L_m|R_m⟩ = 1.
    pub left: Array2<Complex64>,
    pub omega_eg_ev: f64,
    pub orders: Vec<u32>,
    /// max_m 1/|R_mᵀ D R_m| for unit-norm right vectors; grows without
    /// bound as the matrix approaches a defective point.
    pub condition: f64,
}

impl DressedStates {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Dressed frequency Ω_m = ω_eg + Re λ_m, eV.
    pub fn dressed_energy_ev(&self, m: usize) -> f64 {
        self.omega_eg_ev + self.eigenvalues[m].re
    }

    /// Dressed width -2 Im λ_m, eV.
    pub fn width_ev(&self, m: usize) -> f64 {
        -2.0 * self.eigenvalues[m].im
    }

    /// Emitter amplitude m₀ of state m.
    pub fn emitter_amplitude(&self, m: usize) -> Complex64 {
        self.right[(0, m)]
    }

    /// Per-state weight table |m₀|², |m₁|², …, |m_N|², each row normalized
    /// to unit sum for display.
    pub fn weights(&self) -> Vec<Vec<f64>> {
        let dim = self.len();
        (0..dim)
            .map(|m| {
                let mut row: Vec<f64> =
                    (0..dim).map(|i| self.right[(i, m)].norm_sqr()).collect();
                let total: f64 = row.iter().sum();
                for v in row.iter_mut() {
                    *v /= total;
                }
                row
            })
            .collect()
    }
}

/// Assemble the star Hamiltonian from the emitter parameters and the
/// pseudomode table. All inputs and the stored matrix are in eV.
pub fn build_h_eff(
    omega_eg_ev: f64,
    gamma_d_ev: f64,
    modes: &[ModeParams],
) -> Result<EffectiveHamiltonian> {
    if modes.is_empty() {
        return Err(Error::Domain("effective Hamiltonian needs at least one mode".into()));
    }
    for p in modes {
        if p.g_ev < 0.0 {
            return Err(Error::Domain(format!("mode {} has negative coupling", p.order)));
        }
    }
    let dim = modes.len() + 1;
    let mut h = Array2::zeros((dim, dim));
    h[(0, 0)] = Complex64::new(0.0, -0.5 * gamma_d_ev);
    for (i, p) in modes.iter().enumerate() {
        let n = i + 1;
        h[(n, n)] = Complex64::new(p.omega_ev - omega_eg_ev, -0.5 * p.gamma_ev);
        h[(0, n)] = Complex64::new(0.0, p.g_ev);
        h[(n, 0)] = Complex64::new(0.0, -p.g_ev);
    }
    Ok(EffectiveHamiltonian {
        matrix: h,
        omega_eg_ev,
        orders: modes.iter().map(|p| p.order).collect(),
    })
}

/// Full complex eigendecomposition with the biorthogonal convention:
/// right vectors are unit-norm with the emitter component rotated to the
/// nonnegative real axis (falling back to the first component above
/// 1e-12); each left vector is D·conj(right) rescaled so the bilinear
/// pairing ⟨L_m|R_m⟩ is exactly 1.
///
/// Errors when a bilinear self-product |R_mᵀ D R_m| falls below 1e-8,
/// which signals an (almost) defective matrix; perturbing the parameters
/// is the remedy.
pub fn diagonalize(h: &EffectiveHamiltonian) -> Result<DressedStates> {
    let dim = h.dim();
    let (eigvals, eigvecs) = h
        .matrix
        .eig()
        .map_err(|e| Error::Numerics(format!("eigendecomposition failed: {e}")))?;

    // sort by Re, ties by Im
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (eigvals[a], eigvals[b]);
        x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap())
    });

    let mut eigenvalues = Vec::with_capacity(dim);
    let mut right = Array2::zeros((dim, dim));
    let mut left = Array2::zeros((dim, dim));
    let mut condition = 0.0f64;

    for (m, &src) in order.iter().enumerate() {
        eigenvalues.push(eigvals[src]);
        let mut v: Array1<Complex64> = eigvecs.column(src).to_owned();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.mapv_inplace(|c| c / norm);
        // phase: emitter component real-nonnegative where it is resolvable
        let anchor = if v[0].norm() > 1e-12 {
            v[0]
        } else {
            *v.iter().find(|c| c.norm() > 1e-12).unwrap()
        };
        let phase = anchor / anchor.norm();
        v.mapv_inplace(|c| c / phase);

        // bilinear self-product s = R^T D R with D = diag(-1, 1, ..., 1)
        let mut s = -v[0] * v[0];
        for i in 1..dim {
            s += v[i] * v[i];
        }
        if s.norm() < 1e-8 {
            return Err(Error::Numerics(format!(
                "state {m} is numerically defective (|R^T D R| = {:.2e}); \
                 perturb the mode parameters",
                s.norm()
            )));
        }
        condition = condition.max(1.0 / s.norm());

        for i in 0..dim {
            right[(i, m)] = v[i];
            let d = if i == 0 { -1.0 } else { 1.0 };
            left[(i, m)] = d * v[i].conj() / s.conj();
        }
    }

    Ok(DressedStates {
        eigenvalues,
        right,
        left,
        omega_eg_ev: h.omega_eg_ev,
        orders: h.orders.clone(),
        condition,
    })
}

/// Dressed-state pair of the two-level reduction (emitter + one mode).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoModeDressed {
    /// λ± as offsets from ω_eg, eV.
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
}

impl TwoModeDressed {
    /// Re λ₊ − Re λ₋ = Ω₊ − Ω₋, eV.
    pub fn splitting_ev(&self) -> f64 {
        self.lambda_plus.re - self.lambda_minus.re
    }

    pub fn widths_ev(&self) -> (f64, f64) {
        (-2.0 * self.lambda_plus.im, -2.0 * self.lambda_minus.im)
    }
}

/// Closed-form eigenvalues of the 2x2 star block
/// [[-iγ_d/2, ig], [-ig, Δ - iγ_n/2]]:
/// λ± = (a+b)/2 ± √(((a−b)/2)² + g²) with a = -iγ_d/2, b = Δ - iγ_n/2.
/// For γ = 0 and Δ = 0 this is the textbook ±g vacuum splitting.
pub fn two_mode_analytic(g_ev: f64, delta_ev: f64, gamma_d_ev: f64, gamma_n_ev: f64) -> TwoModeDressed {
    let a = Complex64::new(0.0, -0.5 * gamma_d_ev);
    let b = Complex64::new(delta_ev, -0.5 * gamma_n_ev);
    let half_sum = 0.5 * (a + b);
    let half_diff = 0.5 * (a - b);
    let root = (half_diff * half_diff + g_ev * g_ev).sqrt();
    // λ+ carries the larger real part
    let (lp, lm) = (half_sum + root, half_sum - root);
    if lp.re >= lm.re {
        TwoModeDressed { lambda_plus: lp, lambda_minus: lm }
    } else {
        TwoModeDressed { lambda_plus: lm, lambda_minus: lp }
    }
}
