//! Simultaneous polynomial root refinement (Aberth–Ehrlich) in arbitrary
//! precision.
//!
//! The iteration only needs `f(z)` and `f'(z)`, supplied through
//! [`MpFunction`], so it can run on a coefficient vector or directly on a
//! determinant recurrence without ever forming coefficients.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};

/// A polynomial-like function evaluable in multiprecision.
pub trait MpFunction: Sync {
    fn degree(&self) -> usize;
    fn prec(&self) -> u32;
    /// Returns `(f(z), f'(z))`.
    fn eval(&self, z: &Complex) -> (Complex, Complex);
}

/// Dense polynomial with multiprecision complex coefficients, ascending.
pub struct MpPoly {
    coeffs: Vec<Complex>,
    prec: u32,
}

impl MpPoly {
    pub fn from_integers(c: &[Integer], prec: u32) -> Self {
        let coeffs = c.iter().map(|x| Complex::with_val(prec, (Float::with_val(prec, x), 0))).collect();
        Self { coeffs, prec }
    }

    pub fn from_complex(coeffs: Vec<Complex>, prec: u32) -> Self {
        Self { coeffs, prec }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }
}

impl MpFunction for MpPoly {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn prec(&self) -> u32 {
        self.prec
    }

    fn eval(&self, z: &Complex) -> (Complex, Complex) {
        let mut p = Complex::new(self.prec);
        let mut dp = Complex::new(self.prec);
        for c in self.coeffs.iter().rev() {
            dp *= z;
            dp += &p;
            p *= z;
            p += c;
        }
        (p, dp)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AberthOptions {
    pub max_iter: usize,
    /// A root is converged once its correction is below
    /// `2^-tol_bits · max_j |z_j|`.
    pub tol_bits: u32,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self { max_iter: 500, tol_bits: 70 }
    }
}

fn to_mp(z: Complex64, prec: u32) -> Complex {
    Complex::with_val(prec, (z.re, z.im))
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// Nudges coincident starting points apart so the Aberth sums stay finite.
fn separate(init: &[Complex64]) -> Vec<Complex64> {
    let scale = init.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let mut out: Vec<Complex64> = init.to_vec();
    for i in 0..out.len() {
        let mut k = 0;
        while out[..i].iter().any(|w| (*w - out[i]).norm() < 1e-12 * scale) {
            k += 1;
            let ang = 2.399963 * (i + k) as f64;
            out[i] += Complex64::from_polar(1e-8 * scale * k as f64, ang);
        }
    }
    out
}

/// Iterations without a newly converged root after which [`aberth`] stops.
const STALL_WINDOW: usize = 200;

/// Refines all roots of `f` starting from `init`.
///
/// The result keeps the order of `init`. [`Error::NonConvergence`] reports
/// the first unconverged index and its last correction when the iteration
/// budget runs out or progress stalls, which usually means the working
/// precision is too low.
pub fn aberth<F: MpFunction>(f: &F, init: &[Complex64], opts: AberthOptions) -> Result<Vec<Complex>> {
    let n = f.degree();
    if init.len() != n {
        return Err(Error::InvalidInput(format!("{} starting points for degree {n}", init.len())));
    }
    let prec = f.prec();
    let mut z: Vec<Complex> = separate(init).into_iter().map(|w| to_mp(w, prec)).collect();
    let mut done = vec![false; n];
    let mut last = vec![f64::INFINITY; n];
    let (mut converged, mut since_progress) = (0, 0);
    for _ in 0..opts.max_iter {
        let scale = z.iter().map(|w| to_c64(w).norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let thresh = scale * 2f64.powi(-(opts.tol_bits as i32));
        let updates: Vec<Option<(Complex, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                if done[i] {
                    return None;
                }
                let (p, dp) = f.eval(&z[i]);
                if p.is_zero() {
                    return Some((Complex::new(prec), 0.0));
                }
                let ratio = Complex::with_val(prec, &p / &dp);
                let mut s = Complex::new(prec);
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        let d = Complex::with_val(prec, &z[i] - zj);
                        s += d.recip();
                    }
                }
                // w = N / (1 − N·S)
                let mut den = Complex::with_val(prec, &ratio * &s);
                den = Complex::with_val(prec, 1) - den;
                let w = if den.is_zero() { ratio } else { ratio / den };
                let size = to_c64(&w).norm();
                Some((w, size))
            })
            .collect();
        for (i, u) in updates.into_iter().enumerate() {
            if let Some((w, size)) = u {
                if !size.is_finite() {
                    continue;
                }
                z[i] -= &w;
                last[i] = size;
                if size <= thresh {
                    done[i] = true;
                }
            }
        }
        let now = done.iter().filter(|&&d| d).count();
        if now == n {
            return Ok(z);
        }
        if now > converged {
            (converged, since_progress) = (now, 0);
        } else {
            since_progress += 1;
            if since_progress >= STALL_WINDOW {
                break;
            }
        }
    }
    let (index, worst) = last
        .iter()
        .enumerate()
        .filter(|(i, _)| !done[*i])
        .map(|(i, &w)| (i, w))
        .next()
        .unwrap_or((0, f64::NAN));
    Err(Error::NonConvergence { index, worst })
}

/// Bini's starting points: circles whose radii come from the upper convex
/// hull of `(k, log|c_k|)`.
pub fn initial_guesses(log_abs: &[f64]) -> Vec<Complex64> {
    let n = log_abs.len() - 1;
    let pts: Vec<(usize, f64)> = log_abs
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .map(|(k, &v)| (k, v))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (k0, v0) = w[0];
        let (k1, v1) = w[1];
        let cnt = k1 - k0;
        let r = ((v0 - v1) / cnt as f64).exp();
        for j in 0..cnt {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / cnt as f64 + 2.0 * std::f64::consts::PI * k0 as f64 / n as f64 + sigma;
            out.push(Complex64::from_polar(r, ang));
        }
    }
    // a zero constant term leaves roots at the origin
    while out.len() < n {
        out.push(Complex64::new(0.0, 0.0));
    }
    out
}

/// `ln|c|` for a big integer, `-∞` for zero.
pub fn ln_abs(c: &Integer) -> f64 {
    if c.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = c.significant_bits();
    if bits < 1000 {
        return c.to_f64().abs().ln();
    }
    let shift = bits - 60;
    Integer::from(c >> shift).to_f64().abs().ln() + shift as f64 * std::f64::consts::LN_2
}

/// All roots of an integer polynomial, escalating precision until two
/// consecutive precisions agree to `2^-check_bits` relative.
pub fn integer_poly_roots(c: &[Integer], start_prec: u32, check_bits: u32) -> Result<Vec<Complex64>> {
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    let c = &c[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if c.len() <= 1 {
        return Ok(roots);
    }
    // p(z) = q(z^g) when every exponent is a multiple of g
    let g = c.iter().enumerate().filter(|(_, x)| !x.is_zero()).fold(0usize, |g, (k, _)| gcd(g, k));
    if g > 1 {
        let q: Vec<Integer> = c.iter().step_by(g).cloned().collect();
        for w in nonzero_roots(&q, start_prec, check_bits)? {
            let r = Complex64::from_polar(w.norm().powf(1.0 / g as f64), w.arg() / g as f64);
            for k in 0..g {
                roots.push(r * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / g as f64));
            }
        }
    } else {
        roots.extend(nonzero_roots(c, start_prec, check_bits)?);
    }
    Ok(roots)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn nonzero_roots(c: &[Integer], start_prec: u32, check_bits: u32) -> Result<Vec<Complex64>> {
    let logs: Vec<f64> = c.iter().map(ln_abs).collect();
    let init = initial_guesses(&logs);
    roots_escalating(|prec| MpPoly::from_integers(c, prec), init, start_prec, check_bits)
}

/// All roots of the polynomial with coefficients `build(prec)`, ascending.
/// Zero coefficients are detected at the starting precision; roots at the
/// origin are split off and a polynomial in `z^g` is solved in `z^g`.
pub fn complex_poly_roots(
    build: impl Fn(u32) -> Vec<Complex>,
    start_prec: u32,
    check_bits: u32,
) -> Result<Vec<Complex64>> {
    let probe = build(start_prec);
    let zeros = probe.iter().take_while(|x| x.is_zero()).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if probe.len() <= zeros + 1 {
        return Ok(roots);
    }
    let g = probe[zeros..].iter().enumerate().filter(|(_, x)| !x.is_zero()).fold(0usize, |g, (k, _)| gcd(g, k));
    let reduce = |c: Vec<Complex>| -> Vec<Complex> { c.into_iter().skip(zeros).step_by(g).collect() };
    let logs: Vec<f64> = reduce(probe)
        .iter()
        .map(|c| {
            let m = Float::with_val(64, c.abs_ref());
            if m.is_zero() { f64::NEG_INFINITY } else { m.ln().to_f64() }
        })
        .collect();
    let found = roots_escalating(
        |prec| MpPoly::from_complex(reduce(build(prec)), prec),
        initial_guesses(&logs),
        start_prec,
        check_bits,
    )?;
    for w in found {
        let r = Complex64::from_polar(w.norm().powf(1.0 / g as f64), w.arg() / g as f64);
        for k in 0..g {
            roots.push(r * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / g as f64));
        }
    }
    Ok(roots)
}

/// Runs [`aberth`] on `build(prec)` at doubling precisions, starting from
/// `init`, until two consecutive runs agree to `2^-check_bits` relative.
pub fn roots_escalating<F: MpFunction>(
    build: impl Fn(u32) -> F,
    init: Vec<Complex64>,
    start_prec: u32,
    check_bits: u32,
) -> Result<Vec<Complex64>> {
    let mut prec = start_prec;
    let mut prev: Option<Vec<Complex64>> = None;
    let mut guess = init;
    loop {
        let f = build(prec);
        let opts = AberthOptions { max_iter: 2000, tol_bits: (prec.saturating_sub(20)).clamp(30, 90) };
        match aberth(&f, &guess, opts) {
            Ok(z) => {
                let cur: Vec<Complex64> = z.iter().map(to_c64).collect();
                if let Some(p) = &prev {
                    let scale = cur.iter().map(|w| w.norm()).fold(0.0, f64::max).max(1e-300);
                    let diff = cur.iter().zip(p).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    if diff <= scale * 2f64.powi(-(check_bits as i32)) {
                        return Ok(cur);
                    }
                }
                guess = cur.clone();
                prev = Some(cur);
            }
            Err(e) => {
                if prec > 1 << 15 {
                    return Err(e);
                }
            }
        }
        prec *= 2;
    }
}
