//! Dense complex matrix exponential by Padé(13) with scaling and squaring.
//!
//! Standalone so the time propagator never shares code with the
//! eigendecomposition path it is meant to cross-validate. For the matrix
//! sizes used here (≤ ~64) the error per call sits at the 1e-13 level
//! relative to the norm of the result.

use ndarray::Array2;
use ndarray_linalg::Solve;
use num_complex::Complex64;

use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &Array2<Complex64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Numerics("expm requires a square matrix".into()));
    }
    let norm = one_norm(a);
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let scale = Complex64::new(0.5f64.powi(s), 0.0);
    let a = a.mapv(|c| c * scale);

    let eye = Array2::<Complex64>::eye(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let b = &PADE13;
    let u_inner = a6.mapv(|c| c * b[13]) + a4.mapv(|c| c * b[11]) + a2.mapv(|c| c * b[9]);
    let u_poly = a6.dot(&u_inner)
        + a6.mapv(|c| c * b[7])
        + a4.mapv(|c| c * b[5])
        + a2.mapv(|c| c * b[3])
        + eye.mapv(|c| c * b[1]);
    let u = a.dot(&u_poly);
    let v_inner = a6.mapv(|c| c * b[12]) + a4.mapv(|c| c * b[10]) + a2.mapv(|c| c * b[8]);
    let v = a6.dot(&v_inner)
        + a6.mapv(|c| c * b[6])
        + a4.mapv(|c| c * b[4])
        + a2.mapv(|c| c * b[2])
        + eye.mapv(|c| c * b[0]);

    // solve (V - U) X = (V + U) column by column
    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut x = Array2::<Complex64>::zeros((n, n));
    for j in 0..n {
        let col = lhs
            .solve(&rhs.column(j).to_owned())
            .map_err(|e| Error::Numerics(format!("expm Pade solve failed: {e}")))?;
        x.column_mut(j).assign(&col);
    }

    for _ in 0..s {
        x = x.dot(&x);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_zero() {
        let z = Array2::<Complex64>::zeros((3, 3));
        let e = expm(&z).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e[(i, j)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rotation_block() {
        // exp(t [[0, 1], [-1, 0]]) = [[cos t, sin t], [-sin t, cos t]]
        for &t in &[0.3, 2.0, 17.5] {
            let a = ndarray::array![[c(0.0, 0.0), c(t, 0.0)], [c(-t, 0.0), c(0.0, 0.0)]];
            let e = expm(&a).unwrap();
            assert!((e[(0, 0)] - t.cos()).norm() < 1e-12);
            assert!((e[(0, 1)] - t.sin()).norm() < 1e-12);
            assert!((e[(1, 0)] + t.sin()).norm() < 1e-12);
        }
    }

    #[test]
    fn diagonal_complex() {
        let a = ndarray::array![
            [c(0.1, -0.4), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-0.2, 2.0)]
        ];
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)] - c(0.1, -0.4).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - c(-0.2, 2.0).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-16);
    }

    #[test]
    fn nilpotent_exact() {
        let a = ndarray::array![[c(0.0, 0.0), c(3.0, 1.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        let e = expm(&a).unwrap();
        assert!((e[(0, 1)] - c(3.0, 1.0)).norm() < 1e-15);
        assert!((e[(0, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn group_property_large_norm() {
        // exp(A) = exp(A/2)^2 exercised through the scaling branch
        let a = ndarray::array![
            [c(2.0, 30.0), c(1.0, -2.0), c(0.3, 0.0)],
            [c(0.0, 1.0), c(-1.0, 25.0), c(0.7, 0.7)],
            [c(0.2, 0.0), c(0.0, -0.4), c(0.5, -40.0)]
        ];
        let whole = expm(&a).unwrap();
        let half = expm(&a.mapv(|v| v * 0.5)).unwrap();
        let squared = half.dot(&half);
        let num: f64 = (&whole - &squared).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = whole.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(num / den < 1e-12);
    }
}
