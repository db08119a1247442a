//! Population dynamics of the emitter and each LSP mode.
//!
//! Two independent routes produce the same traces: [`populations_eigen`]
//! expands the initial state |e,∅⟩ over the biorthogonal dressed states,
//! [`populations_propagate`] time-steps the amplitude vector with a matrix
//! exponential. Their agreement is one of the crate's standing checks.
//!
//! Sign bookkeeping: the expansion coefficients are η_m = ⟨Π_m^L|ψ(0)⟩
//! evaluated under this crate's normalization convention, and the
//! C_e(0) = 1 identity is asserted at build time instead of trusting any
//! transcription of signs.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::constants::HBAR_EV_FS;
use crate::effective::{DressedStates, EffectiveHamiltonian};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::grid::trapezoid;

/// |C_e(t)|², per-mode |C_n(t)|² and the total norm on a time grid (fs).
#[derive(Debug, Clone)]
pub struct PopulationTrace {
    pub times_fs: Vec<f64>,
    pub emitter: Vec<f64>,
    /// modes[i] is the trace of the i-th mode (order as labeled in `orders`).
    pub modes: Vec<Vec<f64>>,
    pub norm: Vec<f64>,
    pub orders: Vec<u32>,
}

impl PopulationTrace {
    fn validate(self) -> Result<Self> {
        const TOL: f64 = 1e-9;
        if (self.norm[0] - 1.0).abs() > TOL {
            return Err(Error::Numerics(format!(
                "initial norm is {} instead of 1",
                self.norm[0]
            )));
        }
        let in_range = |v: &f64| *v >= 0.0 && *v <= 1.0 + TOL;
        if !self.emitter.iter().all(in_range)
            || !self.modes.iter().all(|m| m.iter().all(in_range))
        {
            return Err(Error::Numerics("population left the [0, 1] range".into()));
        }
        Ok(self)
    }

    /// Max |C_n|² over the trace, per mode.
    pub fn peak_populations(&self) -> Vec<f64> {
        self.modes
            .iter()
            .map(|m| m.iter().cloned().fold(0.0f64, f64::max))
            .collect()
    }

    /// Time-integrated |C_n|² (fs), per mode.
    pub fn integrated_populations(&self) -> Vec<f64> {
        self.modes.iter().map(|m| trapezoid(&self.times_fs, m)).collect()
    }
}

/// Populations from the dressed-state expansion of |e,∅⟩.
///
/// C_e(t) = Σ_m η_m m₀,m e^{−iλ_m t/ħ} and
/// C_n(t) = Σ_m η_m m_n,m e^{−iλ_m t/ħ} with η_m = ⟨Π_m^L|e,∅⟩.
/// Times in fs, eigenvalues in eV.
pub fn populations_eigen(states: &DressedStates, times_fs: &[f64]) -> Result<PopulationTrace> {
    check_times(times_fs)?;
    let dim = states.len();
    let eta: Vec<Complex64> = (0..dim).map(|m| states.left[(0, m)].conj()).collect();

    // C_e(0) = 1 must hold by completeness; guard against a degraded basis
    let c0: Complex64 = (0..dim).map(|m| eta[m] * states.right[(0, m)]).sum();
    if (c0 - 1.0).norm() > 1e-8 {
        return Err(Error::Numerics(format!(
            "dressed-state completeness violated: C_e(0) = {c0}"
        )));
    }

    let n_modes = dim - 1;
    let mut emitter = Vec::with_capacity(times_fs.len());
    let mut modes = vec![Vec::with_capacity(times_fs.len()); n_modes];
    let mut norm = Vec::with_capacity(times_fs.len());
    for &t in times_fs {
        let phases: Vec<Complex64> = (0..dim)
            .map(|m| (-Complex64::i() * states.eigenvalues[m] * (t / HBAR_EV_FS)).exp())
            .collect();
        let mut total = 0.0;
        for row in 0..dim {
            let mut amp = Complex64::new(0.0, 0.0);
            for m in 0..dim {
                amp += eta[m] * states.right[(row, m)] * phases[m];
            }
            let p = amp.norm_sqr();
            total += p;
            if row == 0 {
                emitter.push(p);
            } else {
                modes[row - 1].push(p);
            }
        }
        norm.push(total);
    }
    PopulationTrace {
        times_fs: times_fs.to_vec(),
        emitter,
        modes,
        norm,
        orders: states.orders.clone(),
    }
    .validate()
}

/// Populations by matrix-exponential time stepping of −iH/ħ.
///
/// Uniform grids reuse one step matrix; nonuniform grids build one per
/// step. Independent of the eigendecomposition path by construction.
pub fn populations_propagate(
    h: &EffectiveHamiltonian,
    times_fs: &[f64],
) -> Result<PopulationTrace> {
    check_times(times_fs)?;
    let dim = h.dim();
    let gen = h.matrix.mapv(|c| -Complex64::i() * c / HBAR_EV_FS);

    let steps: Vec<f64> = times_fs.windows(2).map(|w| w[1] - w[0]).collect();
    let uniform = steps
        .windows(2)
        .all(|w| (w[1] - w[0]).abs() <= 1e-9 * w[0].abs().max(1e-12));
    let shared_step: Option<Array2<Complex64>> = if uniform && !steps.is_empty() {
        Some(expm(&gen.mapv(|c| c * steps[0]))?)
    } else {
        None
    };

    let mut psi = Array1::<Complex64>::zeros(dim);
    psi[0] = Complex64::new(1.0, 0.0);
    // the first output sample is t = 0 only when the grid starts there
    if times_fs[0] > 0.0 {
        psi = expm(&gen.mapv(|c| c * times_fs[0]))?.dot(&psi);
    }

    let n_modes = dim - 1;
    let mut emitter = Vec::with_capacity(times_fs.len());
    let mut modes = vec![Vec::with_capacity(times_fs.len()); n_modes];
    let mut norm = Vec::with_capacity(times_fs.len());
    let record = |psi: &Array1<Complex64>,
                      emitter: &mut Vec<f64>,
                      modes: &mut Vec<Vec<f64>>,
                      norm: &mut Vec<f64>| {
        let mut total = 0.0;
        for row in 0..dim {
            let p = psi[row].norm_sqr();
            total += p;
            if row == 0 {
                emitter.push(p);
            } else {
                modes[row - 1].push(p);
            }
        }
        norm.push(total);
    };
    record(&psi, &mut emitter, &mut modes, &mut norm);
    for (i, &dt) in steps.iter().enumerate() {
        let u = match &shared_step {
            Some(u) => u.clone(),
            None => expm(&gen.mapv(|c| c * dt))?,
        };
        psi = u.dot(&psi);
        if psi.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Numerics(format!(
                "propagation diverged at t = {} fs",
                times_fs[i + 1]
            )));
        }
        record(&psi, &mut emitter, &mut modes, &mut norm);
    }
    PopulationTrace {
        times_fs: times_fs.to_vec(),
        emitter,
        modes,
        norm,
        orders: h.orders.clone(),
    }
    .validate()
}

fn check_times(times_fs: &[f64]) -> Result<()> {
    if times_fs.is_empty() {
        return Err(Error::Grid("time grid is empty".into()));
    }
    if times_fs[0] < 0.0 {
        return Err(Error::Grid("time grid must start at t >= 0".into()));
    }
    if times_fs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// One row of the dominant-mode ranking.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ModeRank {
    pub order: u32,
    pub peak_population: f64,
    pub integrated_population_fs: f64,
}

/// Modes ranked by time-integrated population (descending), the measure
/// that identifies which plasmon orders carry the energy exchange; the
/// instantaneous peak population is reported alongside.
pub fn dominant_mode_report(trace: &PopulationTrace) -> Vec<ModeRank> {
    let peak = trace.peak_populations();
    let integ = trace.integrated_populations();
    let mut rows: Vec<ModeRank> = trace
        .orders
        .iter()
        .zip(peak.iter().zip(&integ))
        .map(|(&order, (&p, &i))| ModeRank {
            order,
            peak_population: p,
            integrated_population_fs: i,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.integrated_population_fs
            .partial_cmp(&a.integrated_population_fs)
            .unwrap()
            .then(a.order.cmp(&b.order))
    });
    rows
}
