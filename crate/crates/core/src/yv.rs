//! Yablonskii–Vorob'ev polynomials, their zero loci and the rational
//! solutions of the second Painlevé equation they generate.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::{Complex, Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{IntPoly, Var};
use crate::numeric::aberth;
use crate::pointset::PointSet;

/// Largest index accepted by [`yv_zeros`] by default.
pub const DEFAULT_ZEROS_CAP: usize = 60;

/// Working precision for evaluating the polynomials at sample points.
const EVAL_BITS: u32 = 256;

/// `YV_0, …, YV_N` with integer coefficients in `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YvSequence {
    pub polys: Vec<IntPoly>,
}

impl YvSequence {
    pub fn get(&self, n: usize) -> Option<&IntPoly> {
        self.polys.get(n)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// `n(n+1)/2`
pub fn yv_degree(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `YV_0 = 1`, `YV_1 = t` and
/// `YV_{n+1} = (t·YV_n² − 4(YV_n·YV_n″ − (YV_n′)²)) / YV_{n−1}`,
/// each division checked to be exact.
pub fn yv_generate(n_max: usize) -> Result<YvSequence> {
    let t = IntPoly::x().with_var(Var::T);
    let mut polys = vec![IntPoly::one().with_var(Var::T)];
    if n_max >= 1 {
        polys.push(t.clone());
    }
    let four = IntPoly::constant(Integer::from(4));
    for n in 1..n_max {
        let y = &polys[n];
        let d1 = y.derivative();
        let d2 = d1.derivative();
        let wronskian_like = &(y * &d2) - &(&d1 * &d1);
        let numer = &(&t * &(y * y)) - &(&four * &wronskian_like);
        let next = numer.exact_div(&polys[n - 1])?;
        if next.degree() != Some(yv_degree(n + 1)) {
            return Err(Error::DegreeMismatch { expected: yv_degree(n + 1), got: next.degree().unwrap_or(0) });
        }
        polys.push(next.with_var(Var::T));
    }
    Ok(YvSequence { polys })
}

/// The single polynomial `YV_n`.
pub fn yv(n: usize) -> Result<IntPoly> {
    Ok(yv_generate(n)?.polys.swap_remove(n))
}

/// `|p(z)| / Σ|c_k||z|^k`, the backward error of `z` as a root of `p`.
pub fn relative_residual(p: &IntPoly, z: Complex64) -> f64 {
    let zc = Complex::with_val(EVAL_BITS, (z.re, z.im));
    let r = Float::with_val(EVAL_BITS, z.norm());
    let mut v = Complex::new(EVAL_BITS);
    let mut m = Float::new(EVAL_BITS);
    for c in p.coeffs().iter().rev() {
        v *= &zc;
        v += c;
        m *= &r;
        m += Float::with_val(EVAL_BITS, Integer::from(c.abs_ref()));
    }
    if m.is_zero() {
        return 0.0;
    }
    Float::with_val(EVAL_BITS, v.abs_ref()).to_f64() / m.to_f64()
}

/// The zero locus `𝒵_n` of `YV_n`, with multiplicity.
pub fn yv_zeros(n: usize, cap: usize) -> Result<PointSet> {
    if n > cap {
        return Err(Error::InvalidInput(format!("n = {n} exceeds the cap {cap}")));
    }
    let p = yv(n)?;
    let bits = 64 + p.max_bits() / 4;
    let roots = aberth::integer_poly_roots(p.coeffs(), bits, 45)?;
    let worst = roots.par_iter().map(|&z| relative_residual(&p, z)).reduce(|| 0.0, f64::max);
    if !(worst < 1e-10) {
        return Err(Error::NonConvergence { index: n, worst });
    }
    Ok(PointSet::new("yv-zeros", roots).with_meta("n", n).with_meta("scaling", "none").sorted())
}

/// `(9/2)^{2/3} n^{2/3}`
pub fn zeros_scale(n: usize) -> f64 {
    (4.5f64 * n as f64).powf(2.0 / 3.0)
}

/// `𝒵_n / ((9/2)^{2/3} n^{2/3})`
pub fn scaled_zeros(n: usize, cap: usize) -> Result<PointSet> {
    let mut ps = yv_zeros(n, cap)?.scaled(zeros_scale(n));
    ps.label = "scaled-yv-zeros".into();
    ps.meta.insert("scaling".into(), "(9/2)^(2/3) n^(2/3)".into());
    Ok(ps)
}

/// `p, p′, p″, p‴` at `z` in multiprecision.
fn jet(p: &IntPoly, z: &Complex) -> [Complex; 4] {
    let prec = z.prec().0;
    let mut out: [Complex; 4] = std::array::from_fn(|_| Complex::new(prec));
    for c in p.coeffs().iter().rev() {
        for k in (1..4).rev() {
            let prev = Complex::with_val(prec, &out[k - 1] * k as u32);
            out[k] *= z;
            out[k] += prev;
        }
        out[0] *= z;
        out[0] += c;
    }
    out
}

/// Logarithmic derivatives `(ln p)′, (ln p)″, (ln p)‴` at `t`, rejecting
/// points whose Newton distance `|p/p′|` to a zero is below `tol`.
fn log_derivatives(p: &IntPoly, t: Complex64, tol: f64) -> Result<[Complex64; 3]> {
    let z = Complex::with_val(EVAL_BITS, (t.re, t.im));
    let [f, f1, f2, f3] = jet(p, &z);
    if !f1.is_zero() {
        let dist = aberth::to_c64(&Complex::with_val(EVAL_BITS, &f / &f1)).norm();
        if dist < tol {
            return Err(Error::PoleTooClose { distance: dist });
        }
    }
    if f.is_zero() {
        return Err(Error::PoleTooClose { distance: 0.0 });
    }
    let g1 = Complex::with_val(EVAL_BITS, &f1 / &f);
    let g2 = Complex::with_val(EVAL_BITS, &f2 / &f);
    let g3 = Complex::with_val(EVAL_BITS, &f3 / &f);
    let l1 = g1.clone();
    let sq = Complex::with_val(EVAL_BITS, &g1 * &g1);
    let l2 = Complex::with_val(EVAL_BITS, &g2 - &sq);
    // (ln p)‴ = p‴/p − 3 p′p″/p² + 2 (p′/p)³
    let mut l3 = g3;
    l3 -= Complex::with_val(EVAL_BITS, &g1 * &g2) * 3u32;
    l3 += Complex::with_val(EVAL_BITS, &sq * &g1) * 2u32;
    Ok([aberth::to_c64(&l1), aberth::to_c64(&l2), aberth::to_c64(&l3)])
}

/// Distance below which a sample counts as a pole.
pub const POLE_TOL: f64 = 1e-8;

/// `u(t; n) = d/dt ln(YV_{n−1}/YV_n)` at each sample, the rational solution
/// of `u″ = tu + 2u³ + n`. `u(t; 0) = 0`.
pub fn painleve_rational(n: usize, samples: &[Complex64]) -> Result<Vec<Complex64>> {
    Ok(painleve_jets(n, samples)?.into_iter().map(|j| j[0]).collect())
}

/// `(u, u′, u″)` at each sample.
pub fn painleve_jets(n: usize, samples: &[Complex64]) -> Result<Vec<[Complex64; 3]>> {
    if n == 0 {
        return Ok(vec![[Complex64::new(0.0, 0.0); 3]; samples.len()]);
    }
    let seq = yv_generate(n)?;
    let (lo, hi) = (&seq.polys[n - 1], &seq.polys[n]);
    samples
        .par_iter()
        .map(|&t| {
            let a = log_derivatives(lo, t, POLE_TOL)?;
            let b = log_derivatives(hi, t, POLE_TOL)?;
            Ok([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
        })
        .collect()
}

/// `|u″ − tu − 2u³ − n|` at each sample, from analytic derivatives.
pub fn painleve_residuals(n: usize, samples: &[Complex64]) -> Result<Vec<f64>> {
    let jets = painleve_jets(n, samples)?;
    Ok(samples
        .iter()
        .zip(jets)
        .map(|(&t, [u, _, u2])| (u2 - t * u - 2.0 * u * u * u - n as f64).norm())
        .collect())
}
