//! Dense complex eigenvalues in double precision: diagonal balancing
//! followed by a complex Schur decomposition.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parlett–Reinsch balancing by powers of two, in place.
///
/// Returns the diagonal scaling `d` with `B = D⁻¹ A D`.
pub fn balance(a: &mut DMatrix<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    let mut d = vec![1.0; n];
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            let mut cc = c;
            while cc < g {
                f *= RADIX;
                cc *= sqrdx;
            }
            g = r * RADIX;
            while cc > g {
                f /= RADIX;
                cc /= sqrdx;
            }
            if (cc + r / f) / f < 0.95 * s {
                done = false;
                d[i] *= f;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
    d
}

/// Eigenvalues of a dense complex matrix.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut b = m.clone();
    balance(&mut b);
    let schur = Schur::try_new(b, f64::EPSILON, 200 * n).ok_or(Error::NonConvergence { index: 0, worst: f64::NAN })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Relative eigen-residual `‖(M − λI)v‖ / ‖M‖` with `v` from inverse
/// iteration.
pub fn residual(m: &DMatrix<Complex64>, lambda: Complex64) -> f64 {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let shift = lambda + Complex64::new(norm * 1e-14, norm * 1e-14);
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let lu = a.lu();
    let mut v = nalgebra::DVector::from_element(n, Complex64::new(1.0, 0.0));
    for _ in 0..3 {
        match lu.solve(&v) {
            Some(x) => {
                let s = x.norm();
                if !s.is_finite() || s == 0.0 {
                    break;
                }
                v = x / Complex64::new(s, 0.0);
            }
            None => break,
        }
    }
    let mut r = m * &v;
    r -= &v * lambda;
    r.norm() / norm / v.norm()
}
