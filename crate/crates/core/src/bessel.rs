//! Spherical Bessel/Hankel functions and Legendre polynomials.
//!
//! `j_n` runs the Miller downward recurrence normalized against
//! `j_0 = sin z / z`, which is stable for every order; `y_n` runs upward,
//! stable because |y_n| grows with n. Mie coefficients never form ratios of
//! raw under/overflowed function values: the interior solution enters only
//! through the logarithmic derivative of ψ_n(z) = z j_n(z), computed by its
//! own downward recurrence.

use num_complex::Complex64;

/// j_0..j_nmax at complex argument. Downward recurrence with rescaling.
pub fn sph_jn_all(n_max: usize, z: Complex64) -> Vec<Complex64> {
    if z.norm() < 1e-12 {
        let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    let start = n_max + 16 + (1.5 * z.norm()) as usize;
    let mut f_up = Complex64::new(0.0, 0.0);
    let mut f = Complex64::new(1e-30, 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for k in (0..=start).rev() {
        let f_down = (2 * k + 3) as f64 / z * f - f_up;
        f_up = f;
        f = f_down;
        if k <= n_max {
            out[k] = f;
        }
        if f.norm() > 1e250 {
            let s = 1e-250;
            f *= s;
            f_up *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    let j0 = z.sin() / z;
    let scale = j0 / out[0];
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// (j_0..j_nmax, y_0..y_nmax) at real positive argument.
pub fn sph_jn_yn_all(n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(x > 0.0, "spherical Bessel argument must be positive");
    let j: Vec<f64> = sph_jn_all(n_max, Complex64::new(x, 0.0))
        .into_iter()
        .map(|c| c.re)
        .collect();
    let mut y = vec![0.0; n_max + 1];
    y[0] = -x.cos() / x;
    if n_max >= 1 {
        y[1] = -x.cos() / (x * x) - x.sin() / x;
        for k in 1..n_max {
            y[k + 1] = (2 * k + 1) as f64 / x * y[k] - y[k - 1];
        }
    }
    (j, y)
}

/// Outgoing spherical Hankel functions h⁽¹⁾_0..h⁽¹⁾_nmax at real argument.
pub fn sph_h1_all(n_max: usize, x: f64) -> Vec<Complex64> {
    let (j, y) = sph_jn_yn_all(n_max, x);
    j.into_iter()
        .zip(y)
        .map(|(jj, yy)| Complex64::new(jj, yy))
        .collect()
}

/// Logarithmic derivatives D_n(z) = ψ_n'(z)/ψ_n(z), ψ_n(z) = z j_n(z),
/// for n = 0..n_max. Downward recurrence from a padded start order.
pub fn log_deriv_psi_all(n_max: usize, z: Complex64) -> Vec<Complex64> {
    let start = n_max + 16 + (1.2 * z.norm()) as usize;
    let mut d = Complex64::new(0.0, 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for k in (1..=start).rev() {
        let kf = k as f64;
        d = kf / z - 1.0 / (d + kf / z);
        if k - 1 <= n_max {
            out[k - 1] = d;
        }
    }
    out
}

/// Legendre P_n(x) and dP_n/dx for n = 0..n_max.
pub fn legendre_all(n_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![0.0; n_max + 1];
    let mut dp = vec![0.0; n_max + 1];
    p[0] = 1.0;
    if n_max >= 1 {
        p[1] = x;
        dp[1] = 1.0;
        for n in 2..=n_max {
            let nf = n as f64;
            p[n] = ((2.0 * nf - 1.0) * x * p[n - 1] - (nf - 1.0) * p[n - 2]) / nf;
            dp[n] = dp[n - 2] + (2.0 * nf - 1.0) * p[n - 1];
        }
    }
    (p, dp)
}
