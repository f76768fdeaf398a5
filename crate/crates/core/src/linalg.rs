//! Eigenvalues of complex Hermitian matrices via cyclic Jacobi rotations.
//!
//! Only eigenvalues are needed (grid-level positivity checks on density
//! matrices), matrices are small (n <= a few hundred), and quadratic Jacobi
//! convergence makes this reliable without pulling in a LAPACK binding.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The strict upper triangle is taken as authoritative; the input is
/// symmetrized internally so callers may pass matrices with round-off level
/// Hermiticity defects.
pub fn eigvalsh(matrix: &Array2<C64>) -> Result<Vec<f64>> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, expected square",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let mut a = matrix.clone();
    // symmetrize: a <- (a + a^H)/2
    for i in 0..n {
        a[[i, i]] = C64::new(a[[i, i]].re, 0.0);
        for j in (i + 1)..n {
            let m = 0.5 * (a[[i, j]] + a[[j, i]].conj());
            a[[i, j]] = m;
            a[[j, i]] = m.conj();
        }
    }

    let scale: f64 = a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let tol = 1e-14 * scale;

    for _sweep in 0..100 {
        let off: f64 = {
            let mut s = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    s += a[[i, j]].norm_sqr();
                }
            }
            (2.0 * s).sqrt()
        };
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[[p, q]].norm();
                if g <= 1e-300 {
                    continue;
                }
                let phi = a[[p, q]].arg();
                let alpha = a[[p, p]].re;
                let beta = a[[q, q]].re;
                let theta = 0.5 * (2.0 * g).atan2(alpha - beta);
                let (s, c) = theta.sin_cos();
                let e_m = C64::from_polar(1.0, -phi);
                let e_p = C64::from_polar(1.0, phi);
                // column update: col_p <- c*col_p + s e^{-i phi} col_q,
                //                col_q <- -s e^{+i phi} col_p + c col_q
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[[i, p]];
                    let aiq = a[[i, q]];
                    let new_ip = aip * c + aiq * (s * e_m);
                    let new_iq = -aip * (s * e_p) + aiq * c;
                    a[[i, p]] = new_ip;
                    a[[i, q]] = new_iq;
                    a[[p, i]] = new_ip.conj();
                    a[[q, i]] = new_iq.conj();
                }
                let app = alpha * c * c + 2.0 * g * c * s + beta * s * s;
                let aqq = alpha * s * s - 2.0 * g * c * s + beta * c * c;
                a[[p, p]] = C64::new(app, 0.0);
                a[[q, q]] = C64::new(aqq, 0.0);
                a[[p, q]] = C64::new(0.0, 0.0);
                a[[q, p]] = C64::new(0.0, 0.0);
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[[i, i]].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eig)
}
