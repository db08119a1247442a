//! Peak finding, FWHM measurement and Lorentzian least-squares refinement.

use crate::error::{Error, Result};

/// A refined local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub x: f64,
    pub y: f64,
}

/// Local maxima by discrete second difference, each refined by a 3-point
/// parabola. Plateau ties resolve to the leftmost sample.
pub fn local_maxima(x: &[f64], y: &[f64]) -> Vec<Peak> {
    let mut out = Vec::new();
    for i in 1..y.len() - 1 {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] {
            out.push(refine_parabola(x, y, i));
        }
    }
    out
}

/// 3-point parabolic refinement around an interior sample.
pub fn refine_parabola(x: &[f64], y: &[f64], i: usize) -> Peak {
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() < f64::MIN_POSITIVE * 1e10 {
        return Peak { index: i, x: x[i], y: y1 };
    }
    let shift = 0.5 * (y0 - y2) / denom;
    let h = 0.5 * (x[i + 1] - x[i - 1]);
    Peak { index: i, x: x[i] + shift * h, y: y1 - 0.25 * (y0 - y2) * shift }
}

/// Distance between the two highest maxima; ties broken toward lower x.
pub fn splitting(x: &[f64], y: &[f64]) -> Result<f64> {
    let mut peaks = local_maxima(x, y);
    if peaks.len() < 2 {
        return Err(Error::Fit(format!(
            "splitting needs at least two local maxima, found {}",
            peaks.len()
        )));
    }
    peaks.sort_by(|a, b| b.y.partial_cmp(&a.y).unwrap().then(a.x.partial_cmp(&b.x).unwrap()));
    Ok((peaks[0].x - peaks[1].x).abs())
}

/// Full width at half maximum of the peak at `ipk`, by linear
/// interpolation of the half-height crossings on both flanks.
pub fn fwhm(x: &[f64], y: &[f64], ipk: usize, peak_height: f64) -> Result<f64> {
    let half = 0.5 * peak_height;
    let mut il = ipk;
    while y[il] > half {
        if il == 0 {
            return Err(Error::Fit("half-height crossing runs off the grid on the left".into()));
        }
        il -= 1;
    }
    let xl = x[il] + (half - y[il]) / (y[il + 1] - y[il]) * (x[il + 1] - x[il]);
    let mut ir = ipk;
    while y[ir] > half {
        if ir + 1 == y.len() {
            return Err(Error::Fit("half-height crossing runs off the grid on the right".into()));
        }
        ir += 1;
    }
    let xr = x[ir - 1] + (y[ir - 1] - half) / (y[ir - 1] - y[ir]) * (x[ir] - x[ir - 1]);
    Ok(xr - xl)
}

/// Lorentzian coupling-density model
/// f(E; ω, γ, g) = (γ/2π) g² / ((E−ω)² + γ²/4).
pub fn lorentzian_density(e: f64, omega: f64, gamma: f64, g: f64) -> f64 {
    gamma / (2.0 * std::f64::consts::PI) * g * g / ((e - omega).powi(2) + 0.25 * gamma * gamma)
}

/// Levenberg-Marquardt refinement of (ω, γ, g) against sampled data.
/// Returns the refined parameters and the relative RMS residual
/// (RMS misfit over the window divided by the peak height).
pub fn fit_lorentzian(
    x: &[f64],
    y: &[f64],
    seed: [f64; 3],
) -> Result<([f64; 3], f64)> {
    assert_eq!(x.len(), y.len());
    if x.len() < 5 {
        return Err(Error::Fit(format!("Lorentzian fit needs >= 5 samples, got {}", x.len())));
    }
    let mut p = seed;
    let mut lambda = 1e-3;
    let mut chi2 = chi_squared(x, y, &p);
    for _ in 0..100 {
        // normal equations J^T J and J^T r with analytic Jacobian
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jtr = [0.0f64; 3];
        for (&xi, &yi) in x.iter().zip(y) {
            let (omega, gamma, g) = (p[0], p[1], p[2]);
            let d = xi - omega;
            let den = d * d + 0.25 * gamma * gamma;
            let m = lorentzian_density(xi, omega, gamma, g);
            let jac = [
                m * 2.0 * d / den,
                m * (1.0 / gamma - 0.5 * gamma / den),
                2.0 * m / g,
            ];
            let r = yi - m;
            for a in 0..3 {
                jtr[a] += jac[a] * r;
                for b in 0..3 {
                    jtj[a][b] += jac[a] * jac[b];
                }
            }
        }
        let mut damped = jtj;
        for a in 0..3 {
            damped[a][a] *= 1.0 + lambda;
        }
        let Some(step) = solve3(&damped, &jtr) else {
            lambda *= 10.0;
            continue;
        };
        let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
        if trial[1] <= 0.0 || trial[2] <= 0.0 {
            lambda *= 10.0;
            continue;
        }
        let trial_chi2 = chi_squared(x, y, &trial);
        if trial_chi2 < chi2 {
            let rel_step = step
                .iter()
                .zip(&p)
                .map(|(s, v)| (s / v.abs().max(1e-300)).abs())
                .fold(0.0f64, f64::max);
            p = trial;
            chi2 = trial_chi2;
            lambda = (lambda * 0.3).max(1e-12);
            if rel_step < 1e-12 {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    let peak = y.iter().cloned().fold(0.0f64, f64::max);
    let residual = (chi2 / x.len() as f64).sqrt() / peak;
    Ok((p, residual))
}

fn chi_squared(x: &[f64], y: &[f64], p: &[f64; 3]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - lorentzian_density(xi, p[0], p[1], p[2]);
            r * r
        })
        .sum()
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let inv_det = 1.0 / det;
    let x = [
        b[0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (b[1] * a[2][2] - a[1][2] * b[2])
            + a[0][2] * (b[1] * a[2][1] - a[1][1] * b[2]),
        a[0][0] * (b[1] * a[2][2] - a[1][2] * b[2])
            - b[0] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * b[2] - b[1] * a[2][0]),
        a[0][0] * (a[1][1] * b[2] - b[1] * a[2][1])
            - a[0][1] * (a[1][0] * b[2] - b[1] * a[2][0])
            + b[0] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]),
    ];
    Some([x[0] * inv_det, x[1] * inv_det, x[2] * inv_det])
}

/// Ordinary least squares y = a x + b; returns (a, b, r_squared).
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 3 {
        return Err(Error::Fit("linear fit needs >= 3 samples".into()));
    }
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::Fit("degenerate abscissa in linear fit".into()));
    }
    let a = (n * sxy - sx * sy) / denom;
    let b = (sy - a * sx) / n;
    let mean = sy / n;
    let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(&xi, &yi)| {
        let r = yi - (a * xi + b);
        r * r
    }).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok((a, b, r2))
}
