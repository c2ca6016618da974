//! Root asymptotics of the limiting constant-coefficient recurrences.
//!
//! For `k/n → τ` the scaled minor recurrence tends to
//! `Δ⁽ᵏ⁾ = −βΔ⁽ᵏ⁻¹⁾ − aτ(1−τ)Δ⁽ᵏ⁻²⁾ + τ²(1−τ)²Δ⁽ᵏ⁻³⁾` with characteristic
//! cubic `Ψ³ + βΨ² + aτ(1−τ)Ψ − τ²(1−τ)² = 0`. The zeros of its solutions
//! accumulate where the two largest characteristic roots have equal modulus.
//! Averaging over `τ ∈ [0, 1]` gives the limiting measure of the scaled
//! spectra and its Cauchy transform.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, ExactPoly, IntPoly, Var};
use crate::numeric::aberth;
use crate::numeric::poly::{monic_cubic_roots, real_cubic_roots};
use crate::numeric::quad::gauss_legendre_on;
use crate::pointset::PointSet;
use crate::spectral::format_complex;

/// Default relative tolerance for equal moduli.
pub const EQUIMODULAR_TOL: f64 = 1e-4;

/// The constant-coefficient recurrence at fixed `(a, τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub a: Complex64,
    pub tau: f64,
}

impl RecurrenceSpec {
    pub fn new(a: Complex64, tau: f64) -> Self {
        Self { a, tau }
    }

    /// `τ(1 − τ)`
    pub fn s(&self) -> f64 {
        self.tau * (1.0 - self.tau)
    }

    /// `(b, c, d)` of the monic cubic `Ψ³ + bΨ² + cΨ + d`.
    pub fn cubic(&self, beta: Complex64) -> [Complex64; 3] {
        let s = self.s();
        [beta, self.a * s, Complex64::new(-s * s, 0.0)]
    }

    /// Characteristic roots sorted by decreasing modulus.
    pub fn characteristic_roots(&self, beta: Complex64) -> [Complex64; 3] {
        let [b, c, d] = self.cubic(beta);
        if b.im == 0.0 && c.im == 0.0 {
            real_cubic_roots(b.re, c.re, d.re)
        } else {
            monic_cubic_roots(b, c, d)
        }
    }

    /// `∂Ψ/∂β` at a characteristic root `psi`.
    pub fn root_derivative(&self, beta: Complex64, psi: Complex64) -> Complex64 {
        -psi * psi / (3.0 * psi * psi + 2.0 * beta * psi + self.a * self.s())
    }

    /// At a branch point `beta`, whether the double root is at least as large
    /// as the simple one. The double root is taken among the critical points
    /// `3Ψ² + 2βΨ + aτ(1−τ) = 0` as the one closest to solving the cubic.
    pub fn double_root_is_dominant(&self, beta: Complex64) -> bool {
        let [b, c, d] = self.cubic(beta);
        let disc = (b * b - 3.0 * c).sqrt();
        let cubic = |z: Complex64| ((z + b) * z + c) * z + d;
        let crit = [(-b + disc) / 3.0, (-b - disc) / 3.0];
        let double = if cubic(crit[0]).norm() <= cubic(crit[1]).norm() { crit[0] } else { crit[1] };
        let simple = -b - 2.0 * double;
        simple.norm() <= double.norm() * (1.0 + 1e-9)
    }

    /// The value of `β` at which `psi` is a characteristic root.
    pub fn beta_of_root(&self, psi: Complex64) -> Complex64 {
        let s = self.s();
        -psi - self.a * s / psi + s * s / (psi * psi)
    }
}

pub fn characteristic_roots(beta: Complex64, a: Complex64, tau: f64) -> [Complex64; 3] {
    RecurrenceSpec::new(a, tau).characteristic_roots(beta)
}

/// Relative gap `(|Ψ₁| − |Ψ₂|)/|Ψ₁|` between the two largest moduli.
pub fn modulus_gap(beta: Complex64, a: Complex64, tau: f64) -> f64 {
    let r = characteristic_roots(beta, a, tau);
    let top = r[0].norm();
    if top == 0.0 {
        return 0.0;
    }
    (top - r[1].norm()) / top
}

/// Whether the two largest characteristic roots are equimodular to `tol`.
pub fn support_membership(beta: Complex64, a: Complex64, tau: f64, tol: f64) -> bool {
    modulus_gap(beta, a, tau) < tol
}

/// Cubic in `β` whose coefficients are exact polynomials in `a`, ascending in
/// `β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaCubic {
    pub coeffs: [ExactPoly; 4],
}

impl BetaCubic {
    /// Numerical coefficients at a complex `a`.
    pub fn eval(&self, a: Complex64) -> [Complex64; 4] {
        self.coeffs.clone().map(|p| {
            p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * a + c.to_f64())
        })
    }

    /// Roots in `β` at a complex `a`.
    pub fn roots(&self, a: Complex64) -> [Complex64; 3] {
        let [c0, c1, c2, c3] = self.eval(a);
        let (b, c, d) = (c2 / c3, c1 / c3, c0 / c3);
        if b.im == 0.0 && c.im == 0.0 && d.im == 0.0 {
            real_cubic_roots(b.re, c.re, d.re)
        } else {
            monic_cubic_roots(b, c, d)
        }
    }

    /// The same cubic with denominators cleared, as an integer polynomial in
    /// `β` over `ℤ[a]`.
    pub fn to_bivariate(&self) -> BivariatePoly {
        let mut den = rug::Integer::from(1);
        for p in &self.coeffs {
            for c in p.coeffs() {
                den.lcm_mut(c.denom());
            }
        }
        let den = Rational::from(den);
        let rows: Vec<IntPoly> = self
            .coeffs
            .iter()
            .map(|p| {
                let scaled = p.scale(&den);
                IntPoly::from_coeffs(scaled.coeffs().iter().map(|c| c.numer().clone()).collect())
            })
            .collect();
        BivariatePoly::from_rows(rows, Var::Beta, Var::A)
    }
}

fn poly_a(coeffs: Vec<Rational>) -> ExactPoly {
    ExactPoly::from_coeffs(coeffs).with_var(Var::A)
}

/// `4β³ + a²β² − 18aβ·s + s(27τ² − 27τ − 4a³)` with `s = τ(1 − τ)`, whose
/// roots are the branch points of the characteristic cubic.
pub fn branch_cubic(tau: &Rational) -> BetaCubic {
    let s = Rational::from(tau * Rational::from(1 - tau.clone()));
    let z = Rational::new;
    let c0 = poly_a(vec![
        Rational::from(&s * Rational::from(27 * Rational::from(tau * tau) - 27 * tau.clone())),
        z(),
        z(),
        Rational::from(&s * -4),
    ]);
    let c1 = poly_a(vec![z(), Rational::from(&s * -18)]);
    let c2 = poly_a(vec![z(), z(), Rational::from(1)]);
    let c3 = poly_a(vec![Rational::from(4)]);
    BetaCubic { coeffs: [c0, c1, c2, c3] }
}

/// `4Λ³ + a²Λ² − 9aΛ/2 − a³ − 27/16`, the critical values of the turning-point
/// quartic.
pub fn endpoint_cubic() -> BetaCubic {
    let q = |n: i64, d: i64| Rational::from((n, d));
    let c0 = poly_a(vec![q(-27, 16), q(0, 1), q(0, 1), q(-1, 1)]);
    let c1 = poly_a(vec![q(0, 1), q(-9, 2)]);
    let c2 = poly_a(vec![q(0, 1), q(0, 1), q(1, 1)]);
    let c3 = poly_a(vec![q(4, 1)]);
    BetaCubic { coeffs: [c0, c1, c2, c3] }
}

/// Branch points in `β` of the characteristic cubic at `(a, τ)`.
pub fn branch_points(a: Complex64, tau: f64) -> [Complex64; 3] {
    let s = tau * (1.0 - tau);
    let b = a * a / 4.0;
    let c = -4.5 * s * a;
    let d = -s * (27.0 * s + 4.0 * a * a * a) / 4.0;
    if a.im == 0.0 {
        real_cubic_roots(b.re, c.re, d.re)
    } else {
        monic_cubic_roots(b, c, d)
    }
}

/// Roots of [`endpoint_cubic`].
pub fn support_endpoints(a: Complex64) -> [Complex64; 3] {
    endpoint_cubic().roots(a)
}

/// `16τ(1 − τ)(a³ − 27τ + 27τ²)³`, the discriminant in `β` of the branch
/// cubic.
pub fn dsc(a: Complex64, tau: f64) -> Complex64 {
    let s = tau * (1.0 - tau);
    16.0 * s * (a * a * a - 27.0 * s).powi(3)
}

/// [`dsc`] in exact arithmetic, given `a³`.
pub fn dsc_exact(a_cubed: &Rational, tau: &Rational) -> Rational {
    let s = Rational::from(tau * Rational::from(1 - tau.clone()));
    let inner = Rational::from(a_cubed - Rational::from(&s * 27));
    let cube = Rational::from(&inner * &inner) * &inner;
    Rational::from(16 * s) * cube
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyOptions {
    /// Starting Gauss–Legendre order.
    pub order: usize,
    /// Order doubling stops once successive values differ by less than this.
    pub tol: f64,
    pub max_order: usize,
    /// Equimodularity tolerance for the support check at the nodes.
    pub membership_tol: f64,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        Self { order: 64, tol: 1e-10, max_order: 4096, membership_tol: EQUIMODULAR_TOL }
    }
}

/// The root with `Ψ/β → −1` at infinity, continued along the straight ray
/// from `|β| = 10(1 + |a|)` inward to `beta`.
///
/// The step halves whenever the tracked root moves more than a tenth of its
/// distance to the other roots. When the continued root differs from the
/// dominant root the ray crossed the support for this `τ`, and the dominant
/// root is returned.
pub fn principal_root(beta: Complex64, spec: &RecurrenceSpec) -> Result<Complex64> {
    let far = 10.0 * (1.0 + spec.a.norm());
    let start = if beta.norm() >= far {
        beta
    } else if beta.norm() == 0.0 {
        Complex64::new(far, 0.0)
    } else {
        beta * (far / beta.norm())
    };
    let pick = |roots: &[Complex64; 3], target: Complex64| -> (Complex64, f64) {
        let i = (0..3).min_by(|&i, &j| (roots[i] - target).norm().total_cmp(&(roots[j] - target).norm())).unwrap_or(0);
        let sep = (0..3).filter(|&j| j != i).map(|j| (roots[j] - roots[i]).norm()).fold(f64::INFINITY, f64::min);
        (roots[i], sep)
    };
    let (mut psi, _) = pick(&spec.characteristic_roots(start), -start);
    let mut u = 0.0;
    let mut h: f64 = 1.0 / 32.0;
    while u < 1.0 {
        let step = h.min(1.0 - u);
        let b0 = start + (beta - start) * u;
        let b1 = start + (beta - start) * (u + step);
        let predicted = psi + spec.root_derivative(b0, psi) * (b1 - b0);
        let (next, sep) = pick(&spec.characteristic_roots(b1), predicted);
        let motion = (next - psi).norm();
        if sep > 10.0 * motion || (sep == 0.0 && motion == 0.0) {
            psi = next;
            u += step;
            h = (h * 1.5).min(1.0 / 16.0);
        } else {
            h = step / 2.0;
            if h < 1e-12 {
                return Err(Error::BranchCollision { re: b1.re, im: b1.im });
            }
        }
    }
    let dominant = spec.characteristic_roots(beta)[0];
    if (dominant - psi).norm() > 1e-8 * psi.norm().max(1e-300) {
        return Ok(dominant);
    }
    Ok(psi)
}

fn cauchy_at_order(beta: Complex64, a: Complex64, order: usize, tol: f64) -> Result<Complex64> {
    let (nodes, weights) = gauss_legendre_on(order, 0.0, 1.0);
    let terms: Result<Vec<Complex64>> = nodes
        .par_iter()
        .zip(&weights)
        .map(|(&tau, &w)| {
            if support_membership(beta, a, tau, tol) {
                return Err(Error::InsideSupport { re: beta.re, im: beta.im });
            }
            let spec = RecurrenceSpec::new(a, tau);
            let psi = principal_root(beta, &spec)?;
            Ok(w * spec.root_derivative(beta, psi) / psi)
        })
        .collect();
    Ok(terms?.into_iter().sum())
}

/// Cauchy transform `∫₀¹ Ψ̃′_β/Ψ̃ dτ` of the averaged limiting measure at a
/// point `beta` off the union of the supports.
pub fn cauchy_nu(beta: Complex64, a: Complex64, opts: &CauchyOptions) -> Result<Complex64> {
    let mut order = opts.order.max(2);
    let mut prev = cauchy_at_order(beta, a, order, opts.membership_tol)?;
    while order < opts.max_order {
        order *= 2;
        let cur = cauchy_at_order(beta, a, order, opts.membership_tol)?;
        if (cur - prev).norm() < opts.tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence { index: order, worst: f64::NAN })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportOptions {
    /// Samples of the modulus ratio angle in `(0, π]`.
    pub theta_samples: usize,
    pub membership_tol: f64,
}

impl Default for SupportOptions {
    fn default() -> Self {
        Self { theta_samples: 400, membership_tol: EQUIMODULAR_TOL }
    }
}

/// Support of one recurrence of the family.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TauSupport {
    pub tau: f64,
    /// Points of the equimodular locus, including the endpoints.
    pub curve: Vec<Complex64>,
    /// Branch points at which the double root is the dominant one.
    pub endpoints: Vec<Complex64>,
}

/// Union over a `τ`-grid of the per-`τ` supports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SupportSample {
    pub a: Complex64,
    pub tau_grid: Vec<f64>,
    pub legs: Vec<TauSupport>,
    /// Points of the `β`-grid lying in the support for some grid `τ`.
    pub grid_hits: Vec<Complex64>,
}

impl SupportSample {
    /// All curve points of every `τ`.
    pub fn cloud(&self) -> PointSet {
        let pts = self.legs.iter().flat_map(|l| l.curve.iter().copied()).collect();
        PointSet::new("union-support", pts).with_meta("a", format_complex(self.a))
    }

    /// The union as a single real interval, if every support point is real
    /// to `tol` and the per-`τ` intervals overlap without gaps.
    pub fn real_interval(&self, tol: f64) -> Option<(f64, f64)> {
        let mut spans: Vec<(f64, f64)> = Vec::new();
        for leg in &self.legs {
            if leg.curve.iter().any(|z| z.im.abs() > tol * (1.0 + z.norm())) {
                return None;
            }
            let lo = leg.curve.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            let hi = leg.curve.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            if lo <= hi {
                spans.push((lo, hi));
            }
        }
        spans.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (lo, mut hi) = *spans.first()?;
        for &(l, h) in &spans[1..] {
            if l > hi + tol * (1.0 + hi.abs()) {
                return None;
            }
            hi = hi.max(h);
        }
        Some((lo, hi))
    }
}

/// Equimodular locus for one `τ`.
///
/// Writing the dominant pair as `Ψ` and `tΨ` with `|t| = 1`, `Ψ` solves
/// `Ψ³ − (as/t)Ψ + s²(1 + t)/t² = 0` and `β = −Ψ − as/Ψ + s²/Ψ²`; the point
/// is kept when the third root `−β − Ψ − tΨ` is not larger.
pub fn tau_support(a: Complex64, tau: f64, opts: &SupportOptions) -> TauSupport {
    let spec = RecurrenceSpec::new(a, tau);
    let s = spec.s();
    let mut out = TauSupport { tau, ..Default::default() };
    if s == 0.0 {
        out.curve.push(Complex64::new(0.0, 0.0));
        out.endpoints.push(Complex64::new(0.0, 0.0));
        return out;
    }
    let m = opts.theta_samples.max(2);
    for j in 1..=m {
        let x = j as f64 / m as f64;
        let theta = std::f64::consts::PI * x * x;
        let t = Complex64::from_polar(1.0, theta);
        let c = -a * s / t;
        let d = s * s * (1.0 + t) / (t * t);
        for psi in monic_cubic_roots(Complex64::new(0.0, 0.0), c, d) {
            if psi.norm() == 0.0 {
                continue;
            }
            let beta = spec.beta_of_root(psi);
            let third = -beta - psi - t * psi;
            if third.norm() <= psi.norm() * (1.0 + 1e-9) {
                out.curve.push(beta);
            }
        }
    }
    for b in branch_points(a, tau) {
        if spec.double_root_is_dominant(b) {
            out.endpoints.push(b);
            out.curve.push(b);
        }
    }
    out
}

/// Union of the supports over `tau_grid`, with membership hits on `beta_grid`.
pub fn union_support(a: Complex64, tau_grid: &[f64], beta_grid: &[Complex64], opts: &SupportOptions) -> SupportSample {
    let legs: Vec<TauSupport> = tau_grid.par_iter().map(|&tau| tau_support(a, tau, opts)).collect();
    let grid_hits: Vec<Complex64> = beta_grid
        .par_iter()
        .filter(|&&b| tau_grid.iter().any(|&tau| support_membership(b, a, tau, opts.membership_tol)))
        .copied()
        .collect();
    SupportSample { a, tau_grid: tau_grid.to_vec(), legs, grid_hits }
}

/// `k+1` equally spaced values on `[0, 1]`.
pub fn uniform_tau_grid(k: usize) -> Vec<f64> {
    (0..=k).map(|i| i as f64 / k as f64).collect()
}

fn recurrence_coefficients(k_max: usize, a: Complex64, tau: f64, prec: u32) -> Vec<Complex> {
    let s = Float::with_val(prec, tau) * Float::with_val(prec, 1.0 - tau);
    let a = Complex::with_val(prec, (a.re, a.im));
    let a_s = Complex::with_val(prec, &a * &s);
    let s2 = Float::with_val(prec, &s * &s);
    let mut d0: Vec<Complex> = Vec::new();
    let mut d1: Vec<Complex> = Vec::new();
    let mut d2: Vec<Complex> = vec![Complex::with_val(prec, 1)];
    for _ in 0..k_max {
        let mut next: Vec<Complex> = vec![Complex::new(prec); d2.len() + 1];
        for (i, c) in d2.iter().enumerate() {
            next[i + 1] -= c;
        }
        for (i, c) in d1.iter().enumerate() {
            next[i] -= Complex::with_val(prec, c * &a_s);
        }
        for (i, c) in d0.iter().enumerate() {
            next[i] += Complex::with_val(prec, c * &s2);
        }
        d0 = std::mem::replace(&mut d1, std::mem::replace(&mut d2, next));
    }
    d2
}

/// Zeros in `β` of the `k_max`-th solution of the recurrence with
/// `Δ⁽⁻²⁾ = Δ⁽⁻¹⁾ = 0`, `Δ⁽⁰⁾ = 1`.
pub fn recurrence_roots(tau: f64, a: Complex64, k_max: usize) -> Result<PointSet> {
    if k_max < 3 {
        return Err(Error::InvalidInput(format!("k_max = {k_max} is below 3")));
    }
    let roots = aberth::complex_poly_roots(|prec| recurrence_coefficients(k_max, a, tau, prec), 128, 40)?;
    Ok(PointSet::new("recurrence-roots", roots)
        .with_meta("tau", tau)
        .with_meta("a", format_complex(a))
        .with_meta("k", k_max)
        .sorted())
}
