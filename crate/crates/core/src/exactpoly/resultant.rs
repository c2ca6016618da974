//! Resultants of bivariate integer polynomials by evaluation at small
//! integer points, univariate resultants over word-size primes, Newton
//! interpolation and Chinese remaindering.
//!
//! The result is the Sylvester determinant with the rows of `p` on top.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use super::modular::{self, crt_symmetric, interpolate, reduce, resultant_mod};
use super::{BivariatePoly, ExactPoly, IntPoly};
use crate::error::{Error, Result};

/// Which variable of a [`BivariatePoly`] is eliminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eliminate {
    Main,
    Inner,
}

/// Evaluation points checked beyond the degree bound.
const CHECK_POINTS: usize = 2;

/// `res_x(p, q)` for the chosen variable `x`, as a polynomial in the other one.
pub fn resultant(p: &BivariatePoly, q: &BivariatePoly, eliminate: Eliminate) -> Result<ExactPoly> {
    Ok(resultant_with_degree_bound(p, q, eliminate, None)?.to_exact())
}

/// Integer resultant with an optional a-priori degree bound on the result.
///
/// Without a bound the Sylvester row bound is used. A bound that is too small
/// is detected by extra check points and reported as
/// [`Error::DegreeMismatch`].
pub fn resultant_with_degree_bound(
    p: &BivariatePoly,
    q: &BivariatePoly,
    eliminate: Eliminate,
    degree_bound: Option<usize>,
) -> Result<IntPoly> {
    let (p, q) = match eliminate {
        Eliminate::Main => (p.clone(), q.clone()),
        Eliminate::Inner => (p.transpose(), q.transpose()),
    };
    let out_var = p.inner_var();
    let m = p
        .main_degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::InvalidInput("first resultant argument has no positive degree".into()))?;
    let n = q
        .main_degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::InvalidInput("second resultant argument has no positive degree".into()))?;

    let row_bound = n * p.inner_degree().unwrap_or(0) + m * q.inner_degree().unwrap_or(0);
    let deg = degree_bound.unwrap_or(row_bound).min(row_bound);
    if deg + 1 > super::COEFF_CAP {
        return Err(Error::DegreeCap { size: deg + 1, cap: super::COEFF_CAP });
    }

    let bits = hadamard_log2(&p, n) + hadamard_log2(&q, m);
    // symmetric range needs one extra bit; each prime contributes at least 61
    let nprimes = ((bits + 2.0) / 61.0).ceil() as usize + 1;
    let primes = modular::primes(nprimes + 4);

    let per_prime: Vec<Option<(u64, Vec<u64>)>> = primes
        .par_iter()
        .map(|&pr| image_mod(&p, &q, deg, pr).map(|r| r.map(|c| (pr, c))))
        .collect::<Result<Vec<_>>>()?;
    let good: Vec<(u64, Vec<u64>)> = per_prime.into_iter().flatten().take(nprimes).collect();
    if good.len() < nprimes {
        return Err(Error::InvalidInput("too many unlucky primes for the modular resultant".into()));
    }
    let ps: Vec<u64> = good.iter().map(|(p, _)| *p).collect();
    let coeffs: Vec<Integer> = (0..=deg)
        .into_par_iter()
        .map(|k| {
            let rs: Vec<u64> = good.iter().map(|(_, c)| c.get(k).copied().unwrap_or(0)).collect();
            crt_symmetric(&rs, &ps)
        })
        .collect();
    Ok(IntPoly::from_coeffs(coeffs).with_var(out_var))
}

/// `log2` of a Hadamard bound for the `count` Sylvester rows built from `p`,
/// valid for the inner variable on the unit circle.
fn hadamard_log2(p: &BivariatePoly, count: usize) -> f64 {
    let mut sq = Integer::new();
    for r in p.rows() {
        let one_norm: Integer = r.coeffs().iter().map(|c| Integer::from(c.abs_ref())).sum();
        sq += Integer::from(one_norm.square_ref());
    }
    0.5 * log2_int(&sq) * count as f64
}

fn log2_int(x: &Integer) -> f64 {
    let bits = x.significant_bits();
    if bits <= 1000 {
        return x.to_f64().max(1.0).log2();
    }
    let shift = bits - 60;
    Integer::from(x >> shift).to_f64().log2() + shift as f64
}

/// Image of the resultant modulo `pr`, or `None` if `pr` kills a leading
/// coefficient identically.
fn image_mod(p: &BivariatePoly, q: &BivariatePoly, deg: usize, pr: u64) -> Result<Option<Vec<u64>>> {
    let pm: Vec<Vec<u64>> = p.rows().iter().map(|r| r.coeffs().iter().map(|c| reduce(c, pr)).collect()).collect();
    let qm: Vec<Vec<u64>> = q.rows().iter().map(|r| r.coeffs().iter().map(|c| reduce(c, pr)).collect()).collect();
    let lp = pm.last().expect("nonzero");
    let lq = qm.last().expect("nonzero");
    if lp.iter().all(|&c| c == 0) || lq.iter().all(|&c| c == 0) {
        return Ok(None);
    }
    let need = deg + 1 + CHECK_POINTS;
    let mut xs = Vec::with_capacity(need);
    let mut ys = Vec::with_capacity(need);
    let mut x = 0u64;
    while xs.len() < need {
        let lpv = modular::eval_poly(lp, x, pr);
        let lqv = modular::eval_poly(lq, x, pr);
        if lpv != 0 && lqv != 0 {
            let f: Vec<u64> = pm.iter().map(|r| modular::eval_poly(r, x, pr)).collect();
            let g: Vec<u64> = qm.iter().map(|r| modular::eval_poly(r, x, pr)).collect();
            xs.push(x);
            ys.push(resultant_mod(&f, &g, pr));
        }
        x += 1;
    }
    let c = interpolate(&xs[..deg + 1], &ys[..deg + 1], pr);
    for (&cx, &cy) in xs[deg + 1..].iter().zip(&ys[deg + 1..]) {
        if modular::eval_poly(&c, cx, pr) != cy {
            return Err(Error::DegreeMismatch { expected: deg, got: deg + 1 });
        }
    }
    Ok(Some(c))
}

/// Sylvester resultant of two univariate rational polynomials.
pub(super) fn univariate_resultant(f: &ExactPoly, g: &ExactPoly) -> Rational {
    if f.is_zero() || g.is_zero() {
        return Rational::new();
    }
    let mut f = f.clone();
    let mut g = g.clone();
    let mut acc = Rational::from(1);
    loop {
        let m = f.degree().expect("nonzero");
        let n = g.degree().expect("nonzero");
        let lg = g.leading().expect("nonzero").clone();
        if n == 0 {
            return acc * Rational::from((&lg).pow(m as i32));
        }
        let (_, r) = f.div_rem(&g).expect("nonzero divisor");
        let Some(k) = r.degree() else {
            return Rational::new();
        };
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= Rational::from((&lg).pow((m - k) as i32));
        f = g;
        g = r;
    }
}
