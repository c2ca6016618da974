//! Structure of `Sp_n(0, λ)`: the three-term splitting in `ξ = λ³`, the
//! triple recurrence for the minors, and exact certification that their
//! roots are real, negative, simple and interlacing.
//!
//! Minors here use the `det(M_k + λI)` convention, in which
//! `Δ_k = λ Δ_{k−1} + c_k Δ_{k−3}` has positive coefficients;
//! `Δ_{3l} = P_l(ξ)`, `Δ_{3l+1} = λ Q_l(ξ)` and `Δ_{3l+2} = λ² R_l(ξ)`.

use std::time::Instant;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{certify_interlacing, count_real_roots, Bound, ExactPoly, Interlacing, Var};
use crate::spectral::spectral_polynomial;

/// `P_l, Q_l, R_l` for one `l`, as polynomials in `ξ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqrTriple {
    pub n: usize,
    pub l: usize,
    pub p: ExactPoly,
    pub q: ExactPoly,
    pub r: ExactPoly,
}

impl PqrTriple {
    /// `P_l` is a principal minor of the `(n+1)×(n+1)` matrix.
    pub fn p_genuine(&self) -> bool {
        3 * self.l <= self.n + 1
    }

    pub fn q_genuine(&self) -> bool {
        3 * self.l + 1 <= self.n + 1
    }

    pub fn r_genuine(&self) -> bool {
        3 * self.l + 2 <= self.n + 1
    }
}

/// `c_k = (n−k+2)(n−k+3)(k−1)(k−2)`.
fn c(n: usize, k: usize) -> Integer {
    let (n, k) = (n as i64, k as i64);
    Integer::from(n - k + 2) * (n - k + 3) * (k - 1) * (k - 2)
}

/// The triple recurrence for `l = 0..=⌊(n+1)/3⌋`, enough to rebuild
/// `Sp_n(0, λ)`.
pub fn pqr_sequences(n: usize) -> Result<Vec<PqrTriple>> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let xi = ExactPoly::x().with_var(Var::Xi);
    let one = ExactPoly::one().with_var(Var::Xi);
    let mut out = vec![PqrTriple { n, l: 0, p: one.clone(), q: one.clone(), r: one }];
    for l in 1..=(n + 1) / 3 {
        let prev = &out[l - 1];
        let k = 3 * l;
        let p = &(&xi * &prev.r) + &prev.p.scale(&Rational::from(c(n, k)));
        let q = &p + &prev.q.scale(&Rational::from(c(n, k + 1)));
        let r = &q + &prev.r.scale(&Rational::from(c(n, k + 2)));
        out.push(PqrTriple { n, l, p, q, r });
    }
    Ok(out)
}

/// `Sp_n(0, λ) = λ^r · q(λ³)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorStructure {
    pub r: usize,
    pub q: ExactPoly,
}

/// Splits `Sp_n(0, λ)`; any coefficient off the `λ^{3j+r}` positions is a
/// [`Error::StructureViolation`].
pub fn factor_structure(n: usize) -> Result<FactorStructure> {
    let sp = spectral_polynomial(n, &Rational::new());
    let r = (n + 1) % 3;
    for k in sp.support() {
        if k % 3 != r {
            return Err(Error::StructureViolation(format!("Sp_{n}(0, λ) has a nonzero coefficient at λ^{k}")));
        }
    }
    let coeffs = sp.coeffs().iter().skip(r).step_by(3).cloned().collect();
    Ok(FactorStructure { r, q: ExactPoly::from_coeffs(coeffs).with_var(Var::Xi) })
}

/// Rebuilds `Sp_n(0, λ)` from the triple recurrence by undoing the sign
/// convention: `Sp_n(0, λ) = Δ_{n+1}(−λ)`.
pub fn spectral_from_pqr(n: usize) -> Result<ExactPoly> {
    let seq = pqr_sequences(n)?;
    let (l, r) = ((n + 1) / 3, (n + 1) % 3);
    let t = &seq[l];
    let x = match r {
        0 => &t.p,
        1 => &t.q,
        _ => &t.r,
    };
    // Δ(λ) = λ^r X(λ³), so Δ(−λ) = (−1)^r λ^r X(−λ³)
    let mut coeffs = vec![Rational::new(); r];
    for (j, cj) in x.coeffs().iter().enumerate() {
        let neg = (j + r) % 2 == 1;
        coeffs.push(if neg { Rational::from(-cj) } else { cj.clone() });
        if j + 1 < x.coeffs().len() {
            coeffs.push(Rational::new());
            coeffs.push(Rational::new());
        }
    }
    Ok(ExactPoly::from_coeffs(coeffs).with_var(Var::Lambda))
}

/// One line of a certification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub l: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl Certificate {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn negative_simple_real(p: &ExactPoly) -> std::result::Result<(), String> {
    let deg = p.degree().unwrap_or(0);
    if p.coeffs().iter().any(|c| *c <= 0) {
        return Err("a coefficient is not positive".into());
    }
    match count_real_roots(p, &Bound::NegInf, &Bound::Open(Rational::new())) {
        Ok(count) if count == deg => Ok(()),
        Ok(count) => Err(format!("{count} negative roots for degree {deg}")),
        Err(e) => Err(e.to_string()),
    }
}

fn arrow(a: &ExactPoly, b: &ExactPoly) -> std::result::Result<(), String> {
    match certify_interlacing(a, b) {
        Ok(Interlacing::LargestInP) => Ok(()),
        Ok(v) => Err(format!("{v:?}")),
        Err(e) => Err(e.to_string()),
    }
}

fn check(name: &str, l: usize, r: std::result::Result<(), String>) -> Check {
    Check { name: name.into(), l, pass: r.is_ok(), detail: r.err() }
}

/// Exact certification for one `n`: splitting, reconstruction, real
/// negative simple roots of every genuine minor, and the interlacing chains
/// `ξR_{l−1} ← P_l ← P_{l−1}`, `P_l ← Q_l ← Q_{l−1}`, `Q_l ← R_l ← R_{l−1}`,
/// where `A ← B` means the roots alternate with the largest one in `A`.
pub fn certify(n: usize, timing: bool) -> Result<Certificate> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let fs = factor_structure(n);
    checks.push(check("z3-splitting", 0, fs.as_ref().map(|_| ()).map_err(|e| e.to_string())));
    let rebuilt = spectral_from_pqr(n)?;
    let sp = spectral_polynomial(n, &Rational::new());
    checks.push(check(
        "reconstruction",
        0,
        if rebuilt == sp { Ok(()) } else { Err(format!("{rebuilt} != {sp}")) },
    ));
    let seq = pqr_sequences(n)?;
    let xi = ExactPoly::x().with_var(Var::Xi);
    for l in 1..seq.len() {
        let (t, prev) = (&seq[l], &seq[l - 1]);
        if t.p_genuine() {
            checks.push(check("P-real-negative-simple", l, negative_simple_real(&t.p)));
            checks.push(check("xiR<-P", l, arrow(&(&xi * &prev.r), &t.p)));
            checks.push(check("P<-Pprev", l, arrow(&t.p, &prev.p)));
        }
        if t.q_genuine() {
            checks.push(check("Q-real-negative-simple", l, negative_simple_real(&t.q)));
            checks.push(check("P<-Q", l, arrow(&t.p, &t.q)));
            checks.push(check("Q<-Qprev", l, arrow(&t.q, &prev.q)));
        }
        if t.r_genuine() {
            checks.push(check("R-real-negative-simple", l, negative_simple_real(&t.r)));
            checks.push(check("Q<-R", l, arrow(&t.q, &t.r)));
            checks.push(check("R<-Rprev", l, arrow(&t.r, &prev.r)));
        }
    }
    Ok(Certificate { n, checks, seconds: timing.then(|| start.elapsed().as_secs_f64()) })
}

/// [`certify`] for every `n` in `1..=n_max`, in parallel.
pub fn certify_range(n_max: usize, timing: bool) -> Result<Vec<Certificate>> {
    (1..=n_max).into_par_iter().map(|n| certify(n, timing)).collect()
}
