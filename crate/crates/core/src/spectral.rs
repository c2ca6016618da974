//! The four-band spectral matrix, its characteristic polynomial through the
//! principal-minor recurrence, and its eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rug::{Assign, Complex, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, ExactPoly, IntPoly, Var};
use crate::numeric::aberth::{self, AberthOptions, MpFunction};
use crate::numeric::eigen;
use crate::pointset::PointSet;

/// Largest matrix parameter accepted by [`eigenvalues`] by default.
pub const DEFAULT_N_CAP: usize = 400;

/// The `(n+1)×(n+1)` matrix with subdiagonal `n, n−1, …, 1`, zero diagonal,
/// superdiagonal `a, 2a, …, na` and second superdiagonal `2, 6, …, n(n−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralMatrix {
    pub n: usize,
    pub a: Complex64,
}

impl SpectralMatrix {
    pub fn size(&self) -> usize {
        self.n + 1
    }

    /// Entry `(i, j)` (zero-based) with `a` replaced by `a`.
    fn entry<T>(n: usize, i: usize, j: usize, a: &T, from_int: impl Fn(i64) -> T, scale: impl Fn(&T, i64) -> T) -> T {
        if i == j + 1 {
            from_int((n - j) as i64)
        } else if j == i + 1 {
            scale(a, (i + 1) as i64)
        } else if j == i + 2 {
            from_int(((i + 1) * (i + 2)) as i64)
        } else {
            from_int(0)
        }
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        let s = self.size();
        DMatrix::from_fn(s, s, |i, j| {
            Self::entry(self.n, i, j, &self.a, |v| Complex64::new(v as f64, 0.0), |a, k| a * k as f64)
        })
    }

    /// Exact entries for rational `a`.
    pub fn exact(n: usize, a: &Rational) -> Vec<Vec<Rational>> {
        let s = n + 1;
        (0..s)
            .map(|i| (0..s).map(|j| Self::entry(n, i, j, a, Rational::from, |a, k| Rational::from(a * k))).collect())
            .collect()
    }
}

pub fn build_matrix(n: usize, a: Complex64) -> Result<SpectralMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    Ok(SpectralMatrix { n, a })
}

/// Coefficients of the principal-minor recurrence
/// `D_k = −λ D_{k−1} − b_k a D_{k−2} + c_k D_{k−3}` for `D_k` the leading
/// `k×k` minor of `M − λI`.
fn recurrence_coeffs(n: usize, k: usize) -> (i64, i64) {
    let (n, k) = (n as i64, k as i64);
    let b = if k >= 2 { (k - 1) * (n - k + 2) } else { 0 };
    let c = if k >= 3 { (n - k + 2) * (n - k + 3) * (k - 1) * (k - 2) } else { 0 };
    (b, c)
}

/// `Sp_n(a, λ) = det(M − λI)` as a polynomial in `λ` and `a` with integer
/// coefficients.
pub fn spectral_polynomial_symbolic(n: usize) -> BivariatePoly {
    // D_k as a list of rows (coefficient of λ^i is a polynomial in a)
    let zero = || BivariatePoly::zero(Var::Lambda, Var::A);
    let mut d2 = zero();
    let mut d1 = zero();
    let mut d0 = BivariatePoly::from_rows(vec![IntPoly::one()], Var::Lambda, Var::A);
    for k in 1..=n + 1 {
        let (b, c) = recurrence_coeffs(n, k);
        let len = k + 1;
        let mut rows = vec![IntPoly::zero(); len];
        for (i, r) in d0.rows().iter().enumerate() {
            rows[i + 1] = &rows[i + 1] - r;
        }
        if b != 0 {
            for (i, r) in d1.rows().iter().enumerate() {
                rows[i] = &rows[i] - &r.shift(1).scale(&Integer::from(b));
            }
        }
        if c != 0 {
            for (i, r) in d2.rows().iter().enumerate() {
                rows[i] = &rows[i] + &r.scale(&Integer::from(c));
            }
        }
        let next = BivariatePoly::from_rows(rows, Var::Lambda, Var::A);
        d2 = std::mem::replace(&mut d1, std::mem::replace(&mut d0, next));
    }
    d0
}

/// `Sp_n(a, λ)` for a fixed rational `a`.
pub fn spectral_polynomial(n: usize, a: &Rational) -> ExactPoly {
    let mut d2 = ExactPoly::zero();
    let mut d1 = ExactPoly::zero();
    let mut d0 = ExactPoly::one();
    let lam = ExactPoly::x();
    for k in 1..=n + 1 {
        let (b, c) = recurrence_coeffs(n, k);
        let mut next = -&(&lam * &d0);
        if b != 0 {
            next = &next - &d1.scale(&Rational::from(a * b));
        }
        if c != 0 {
            next = &next + &d2.scale(&Rational::from(c));
        }
        d2 = std::mem::replace(&mut d1, std::mem::replace(&mut d0, next));
    }
    d0.with_var(Var::Lambda)
}

/// `Sp_n(a, ·)` and its `λ`-derivative evaluated through the recurrence in
/// multiprecision.
pub struct SpectralEvaluator {
    n: usize,
    a: Complex,
    prec: u32,
}

impl SpectralEvaluator {
    pub fn new(n: usize, a: Complex64, prec: u32) -> Self {
        Self { n, a: Complex::with_val(prec, (a.re, a.im)), prec }
    }
}

impl MpFunction for SpectralEvaluator {
    fn degree(&self) -> usize {
        self.n + 1
    }

    fn prec(&self) -> u32 {
        self.prec
    }

    fn eval(&self, z: &Complex) -> (Complex, Complex) {
        let p = self.prec;
        let mut d = [Complex::new(p), Complex::new(p), Complex::with_val(p, 1)];
        let mut e = [Complex::new(p), Complex::new(p), Complex::new(p)];
        let mut t = Complex::new(p);
        for k in 1..=self.n + 1 {
            let (b, c) = recurrence_coeffs(self.n, k);
            // derivative first, it needs the old values
            let mut de = Complex::with_val(p, -&d[2]);
            t.assign(z * &e[2]);
            de -= &t;
            let mut dv = Complex::with_val(p, z * &d[2]);
            dv = -dv;
            if b != 0 {
                t.assign(&self.a * &e[1]);
                t *= b;
                de -= &t;
                t.assign(&self.a * &d[1]);
                t *= b;
                dv -= &t;
            }
            if c != 0 {
                t.assign(&e[0] * c);
                de += &t;
                t.assign(&d[0] * c);
                dv += &t;
            }
            d.rotate_left(1);
            e.rotate_left(1);
            d[2] = dv;
            e[2] = de;
        }
        let [_, _, dn] = d;
        let [_, _, en] = e;
        (dn, en)
    }
}

/// Working precision used by [`eigenvalues`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Double-precision dense solve, then multiprecision refinement with
    /// automatic precision escalation.
    #[default]
    Auto,
    /// Double-precision dense solve only.
    Double,
    /// Multiprecision refinement at a fixed number of bits.
    Bits(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub precision: Precision,
    /// Relative residual bound for double-precision eigenpairs.
    pub tol: f64,
    pub n_cap: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { precision: Precision::Auto, tol: 1e-10, n_cap: DEFAULT_N_CAP }
    }
}

/// Bits at which the automatic mode starts refining.
pub fn starting_bits(n: usize) -> u32 {
    64 + 2 * n as u32
}

/// The `n+1` eigenvalues of `M_n^{(a)}`, sorted by `(re, im)`.
pub fn eigenvalues(n: usize, a: Complex64, opts: &EigenOptions) -> Result<PointSet> {
    let m = build_matrix(n, a)?;
    if n > opts.n_cap {
        return Err(Error::InvalidInput(format!("n = {n} exceeds the cap {}", opts.n_cap)));
    }
    let dense = m.dense();
    let guess = eigen::eigenvalues(&dense)?;
    let points = match opts.precision {
        Precision::Double => {
            for (i, &z) in guess.iter().enumerate() {
                let r = eigen::residual(&dense, z);
                if !(r <= opts.tol) {
                    return Err(Error::NonConvergence { index: i, worst: r });
                }
            }
            guess
        }
        Precision::Bits(bits) => refine(n, a, &guess, bits)?,
        Precision::Auto => refine_auto(n, a, &guess)?,
    };
    Ok(PointSet::new("spectrum", points)
        .with_meta("n", n)
        .with_meta("a", format_complex(a))
        .with_meta("scaling", "none")
        .sorted())
}

fn refine(n: usize, a: Complex64, guess: &[Complex64], bits: u32) -> Result<Vec<Complex64>> {
    let f = SpectralEvaluator::new(n, a, bits);
    let opts = AberthOptions { max_iter: 1000, tol_bits: bits.saturating_sub(16).clamp(20, 80) };
    Ok(aberth::aberth(&f, guess, opts)?.iter().map(aberth::to_c64).collect())
}

/// Refines at increasing precision until two runs `64` bits apart agree to
/// `1e−13` relative to the spectral radius.
fn refine_auto(n: usize, a: Complex64, guess: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut bits = starting_bits(n);
    let mut start = guess.to_vec();
    loop {
        match refine(n, a, &start, bits) {
            Ok(lo) => {
                let hi = refine(n, a, &lo, bits + 64)?;
                let scale = hi.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
                let diff = lo.iter().zip(&hi).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                if diff <= 1e-13 * scale {
                    return Ok(hi);
                }
                start = hi;
            }
            Err(e) if bits > 8192 => return Err(e),
            Err(_) => {}
        }
        bits *= 2;
    }
}

/// How the matrix parameter depends on `n` in [`scaled_spectrum`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "rule", content = "a")]
pub enum ARule {
    /// `a_n = a`
    Constant(Complex64),
    /// `a_n = a · n^{2/3}`
    Scaled(Complex64),
}

impl ARule {
    pub fn a_n(&self, n: usize) -> Complex64 {
        match *self {
            ARule::Constant(a) => a,
            ARule::Scaled(a) => a * (n as f64).powf(2.0 / 3.0),
        }
    }
}

/// Eigenvalues of `M_n^{(a_n)}` divided by `n^{4/3}`.
pub fn scaled_spectrum(n: usize, rule: ARule, opts: &EigenOptions) -> Result<PointSet> {
    let a_n = rule.a_n(n);
    let s = (n as f64).powf(4.0 / 3.0);
    let mut ps = eigenvalues(n, a_n, opts)?.scaled(s);
    ps.label = "scaled-spectrum".into();
    ps.meta.insert("scaling".into(), "n^(4/3)".into());
    ps.meta.insert("a_rule".into(), serde_json::to_value(rule)?);
    Ok(ps)
}

/// `(1/|S|) Σ 1/(z − ξ)` over the points of `S`.
pub fn empirical_cauchy(s: &PointSet, z: Complex64, tol: f64) -> Result<Complex64> {
    if s.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let dmin = s.points.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min);
    if dmin <= tol {
        return Err(Error::TooClose { distance: dmin });
    }
    Ok(s.points.iter().map(|p| 1.0 / (z - p)).sum::<Complex64>() / s.len() as f64)
}

/// `re+imi` with shortest round-trip formatting.
pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_matrices() {
        let m = build_matrix(2, c(5.0, 0.0)).unwrap().dense();
        let expect = [[0.0, 5.0, 2.0], [2.0, 0.0, 10.0], [0.0, 1.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], c(expect[i][j], 0.0));
            }
        }
        let m4 = build_matrix(4, c(1.0, 0.0)).unwrap().dense();
        assert_eq!([m4[(0, 2)].re, m4[(1, 3)].re, m4[(2, 4)].re], [2.0, 6.0, 12.0]);
        let tr: Complex64 = (0..5).map(|i| m4[(i, i)]).sum();
        assert_eq!(tr, c(0.0, 0.0));
        assert!(build_matrix(0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn exact_small_polynomials() {
        // n = 1: λ² − a
        let s1 = spectral_polynomial_symbolic(1);
        assert_eq!(s1, BivariatePoly::from_grid(&[vec![0, -1], vec![], vec![1]], Var::Lambda, Var::A));
        // n = 2: −λ³ + 4aλ + 4
        let s2 = spectral_polynomial_symbolic(2);
        assert_eq!(s2, BivariatePoly::from_grid(&[vec![4], vec![0, 4], vec![], vec![-1]], Var::Lambda, Var::A));
        assert_eq!(spectral_polynomial(2, &Rational::new()), ExactPoly::from_i64s(&[4, 0, 0, -1]));
    }

    #[test]
    fn degrees_of_symbolic_polynomial() {
        for n in 1..=15 {
            let s = spectral_polynomial_symbolic(n);
            assert_eq!(s.main_degree(), Some(n + 1));
            assert_eq!(s.total_degree(), Some(n + 1));
            assert_eq!(s.inner_degree(), Some((n + 1) / 2));
        }
    }

    #[test]
    fn evaluator_matches_exact_polynomial() {
        let n = 9;
        let a = Rational::from((3, 7));
        let p = spectral_polynomial(n, &a);
        let f = SpectralEvaluator::new(n, c(3.0 / 7.0, 0.0), 200);
        for x in [-2.5f64, 0.75, 4.0] {
            let z = Complex::with_val(200, (x, 0.0));
            let (v, dv) = f.eval(&z);
            let xr = Rational::from_f64(x).unwrap();
            let ev = p.eval(&xr).to_f64();
            let edv = p.derivative().eval(&xr).to_f64();
            assert!((v.real().to_f64() - ev).abs() <= 1e-12 * ev.abs().max(1.0));
            assert!((dv.real().to_f64() - edv).abs() <= 1e-12 * edv.abs().max(1.0));
        }
    }

    #[test]
    fn tiny_spectra() {
        let s = eigenvalues(1, c(4.0, 0.0), &EigenOptions::default()).unwrap();
        assert!((s.points[0] - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((s.points[1] - c(2.0, 0.0)).norm() < 1e-14);
        let s = eigenvalues(2, c(0.0, 0.0), &EigenOptions::default()).unwrap();
        let r = 4f64.cbrt();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let expect = PointSet::new("e", vec![c(r, 0.0), w * r, w * w * r]);
        assert!(s.matches(&expect, 1e-13));
        let scaled = scaled_spectrum(2, ARule::Constant(c(0.0, 0.0)), &EigenOptions::default()).unwrap();
        assert!((scaled.max_modulus() - r / 2f64.powf(4.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn double_mode_checks_residuals() {
        let opts = EigenOptions { precision: Precision::Double, ..Default::default() };
        let s = eigenvalues(6, c(0.5, -0.25), &opts).unwrap();
        assert_eq!(s.len(), 7);
    }

    #[test]
    fn cauchy_of_trivial_sets() {
        let s = PointSet::new("s", vec![c(0.0, 0.0)]);
        assert_eq!(empirical_cauchy(&s, c(2.0, 0.0), 1e-12).unwrap(), c(0.5, 0.0));
        let s = PointSet::new("s", vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(empirical_cauchy(&s, c(0.0, 0.0), 1e-12).unwrap(), c(0.0, 0.0));
        assert!(matches!(empirical_cauchy(&s, c(1.0, 0.0), 1e-12), Err(Error::TooClose { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn trace_product_and_conjugation(n in 2usize..30, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let a = c(re, im);
            let s = eigenvalues(n, a, &EigenOptions::default()).unwrap();
            let scale = s.max_modulus().max(1.0);
            prop_assert!(s.sum().norm() <= 1e-9 * scale * (n as f64));
            // product of eigenvalues = det M = Sp_n(a, 0) (det(M − 0·I))
            let f = SpectralEvaluator::new(n, a, 256);
            let (det, _) = f.eval(&Complex::with_val(256, (0.0, 0.0)));
            let det = aberth::to_c64(&det);
            let prod: Complex64 = s.points.iter().product();
            prop_assert!((prod - det).norm() <= 1e-8 * det.norm().max(1.0));
            let sr = eigenvalues(n, c(re, 0.0), &EigenOptions::default()).unwrap();
            let conj = PointSet::new("c", sr.points.iter().map(|z| z.conj()).collect());
            prop_assert!(sr.matches(&conj, 1e-8 * scale));
        }
    }
}
