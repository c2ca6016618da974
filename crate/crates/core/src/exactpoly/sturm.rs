//! Exact real-root counting and isolation with Sturm sequences, and exact
//! interlacing certification built on top of it.

use std::cmp::Ordering;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::{ExactPoly, IntPoly};
use crate::error::{Error, Result};

/// Endpoint of a real interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    PosInf,
    Closed(Rational),
    Open(Rational),
}

impl Bound {
    pub fn closed(v: i64) -> Self {
        Bound::Closed(Rational::from(v))
    }

    pub fn open(v: i64) -> Self {
        Bound::Open(Rational::from(v))
    }
}

/// Count of real roots in an interval with isolating intervals.
///
/// Each interval `(lo, hi)` contains exactly one root, lying in the
/// half-open range `(lo, hi]`, or exactly at `lo` when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoots {
    pub count: usize,
    pub intervals: Vec<(Rational, Rational)>,
}

/// Outcome of an interlacing test between `p` and `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interlacing {
    /// Roots strictly alternate and the largest one belongs to `p`.
    LargestInP,
    /// Roots strictly alternate and the largest one belongs to `q`.
    LargestInQ,
    NotInterlacing,
}

struct Sturm {
    seq: Vec<IntPoly>,
}

fn sign_at(p: &IntPoly, x: &Rational) -> Ordering {
    // sign of Σ c_k (u/v)^k equals the sign of Σ c_k u^k v^(d−k) for v > 0
    let Some(d) = p.degree() else {
        return Ordering::Equal;
    };
    let (u, v) = (x.numer(), x.denom());
    let mut vp = Vec::with_capacity(d + 1);
    vp.push(Integer::from(1));
    for k in 1..=d {
        let next = Integer::from(&vp[k - 1] * v);
        vp.push(next);
    }
    let mut acc = Integer::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        acc *= u;
        acc += Integer::from(c * &vp[d - k]);
    }
    acc.cmp0()
}

impl Sturm {
    fn new(p: &ExactPoly) -> Self {
        let mut seq = vec![p.to_primitive_int(), p.derivative().to_primitive_int()];
        while !seq[seq.len() - 1].is_zero() {
            let r = seq[seq.len() - 2].positive_pseudo_rem(&seq[seq.len() - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Sturm { seq }
    }

    fn variations(&self, x: &Rational) -> usize {
        variations(self.seq.iter().map(|s| sign_at(s, x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        variations(self.seq.iter().map(|s| sign_at_infinity(s, positive)))
    }

    /// Number of roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut v = 0;
    for sg in signs {
        if sg == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && sg != last {
            v += 1;
        }
        last = sg;
    }
    v
}

fn sign_at_infinity(p: &IntPoly, positive: bool) -> Ordering {
    match (p.leading(), p.degree()) {
        (Some(l), Some(d)) if !positive && d % 2 == 1 => l.cmp0().reverse(),
        (Some(l), _) => l.cmp0(),
        _ => Ordering::Equal,
    }
}

/// Strict bound on the modulus of every root.
fn cauchy_bound(p: &ExactPoly) -> Rational {
    let lead = Rational::from(p.leading().expect("nonzero").abs_ref());
    let mut m = Rational::new();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = Rational::from(c.abs_ref()) / &lead;
        if r > m {
            m = r;
        }
    }
    m + 1u32
}

fn check_squarefree(p: &ExactPoly) -> std::result::Result<(), ExactPoly> {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) > 0 {
        Err(g)
    } else {
        Ok(())
    }
}

/// Counts and isolates the real roots of a squarefree polynomial in the
/// interval bounded by `lo` and `hi`.
pub fn real_roots(p: &ExactPoly, lo: &Bound, hi: &Bound) -> Result<RealRoots> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no isolated roots".into()));
    }
    check_squarefree(p).map_err(|gcd| Error::NotSquarefree { gcd })?;
    if p.degree() == Some(0) {
        return Ok(RealRoots { count: 0, intervals: Vec::new() });
    }
    let cb = cauchy_bound(p);
    let lower = match lo {
        Bound::NegInf => Rational::from(-&cb),
        Bound::Closed(x) | Bound::Open(x) => x.clone(),
        Bound::PosInf => return Err(Error::InvalidInput("lower bound cannot be +∞".into())),
    };
    let upper = match hi {
        Bound::PosInf => cb.clone(),
        Bound::Closed(x) | Bound::Open(x) => x.clone(),
        Bound::NegInf => return Err(Error::InvalidInput("upper bound cannot be −∞".into())),
    };
    if lower > upper {
        return Err(Error::InvalidInput("empty interval".into()));
    }
    let sturm = Sturm::new(p);
    let mut intervals = Vec::new();
    if matches!(lo, Bound::Closed(_)) && p.eval(&lower).is_zero() {
        intervals.push((lower.clone(), lower.clone()));
    }
    isolate(&sturm, &lower, &upper, &mut intervals);
    if matches!(hi, Bound::Open(_)) && p.eval(&upper).is_zero() {
        intervals.retain(|(a, b)| b != &upper && a != &upper);
    }
    intervals.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(RealRoots { count: intervals.len(), intervals })
}

/// Number of real roots of a squarefree polynomial in the interval bounded
/// by `lo` and `hi`, without isolating them.
pub fn count_real_roots(p: &ExactPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no isolated roots".into()));
    }
    check_squarefree(p).map_err(|gcd| Error::NotSquarefree { gcd })?;
    if let (Bound::Closed(a) | Bound::Open(a), Bound::Closed(b) | Bound::Open(b)) = (lo, hi) {
        if a > b {
            return Err(Error::InvalidInput("empty interval".into()));
        }
    }
    let sturm = Sturm::new(p);
    let is_root = |x: &Rational| usize::from(p.eval(x).is_zero());
    let (v_lo, extra) = match lo {
        Bound::NegInf => (sturm.variations_at_infinity(false), 0),
        Bound::Closed(x) => (sturm.variations(x), is_root(x)),
        Bound::Open(x) => (sturm.variations(x), 0),
        Bound::PosInf => return Err(Error::InvalidInput("lower bound cannot be +∞".into())),
    };
    let (v_hi, excess) = match hi {
        Bound::PosInf => (sturm.variations_at_infinity(true), 0),
        Bound::Closed(x) => (sturm.variations(x), 0),
        Bound::Open(x) => (sturm.variations(x), is_root(x)),
        Bound::NegInf => return Err(Error::InvalidInput("upper bound cannot be −∞".into())),
    };
    Ok(v_lo - v_hi + extra - excess)
}

fn isolate(s: &Sturm, a: &Rational, b: &Rational, out: &mut Vec<(Rational, Rational)>) {
    let c = s.count(a, b);
    match c {
        0 => {}
        1 => out.push((a.clone(), b.clone())),
        _ => {
            let mid = Rational::from(a + b) / 2u32;
            isolate(s, a, &mid, out);
            isolate(s, &mid, b, out);
        }
    }
}

/// Shrinks an isolating interval of a simple root by one bisection step.
fn bisect(p: &ExactPoly, iv: &mut (Rational, Rational)) {
    if iv.0 == iv.1 {
        return;
    }
    let sb = sign_of(p, &iv.1);
    if sb == Ordering::Equal {
        iv.0 = iv.1.clone();
        return;
    }
    let mid = Rational::from(&iv.0 + &iv.1) / 2u32;
    let sm = sign_of(p, &mid);
    if sm == Ordering::Equal {
        iv.0 = mid.clone();
        iv.1 = mid;
    } else if sm != sb {
        iv.0 = mid;
    } else {
        iv.1 = mid;
    }
}

fn sign_of(p: &ExactPoly, x: &Rational) -> Ordering {
    p.eval(x).cmp0()
}

/// Refines isolating intervals until each has width at most `eps`.
pub fn refine(p: &ExactPoly, intervals: &mut [(Rational, Rational)], eps: &Rational) {
    for iv in intervals.iter_mut() {
        while Rational::from(&iv.1 - &iv.0) > *eps {
            bisect(p, iv);
        }
    }
}

/// Exact interlacing test.
///
/// Both polynomials must be squarefree; a repeated root is reported as
/// [`Error::MultipleRoot`]. A common root, a non-real root, or a degree
/// difference other than 0 or 1 gives [`Interlacing::NotInterlacing`].
///
/// The roots of `p` and `q` alternate exactly when the Cauchy index of
/// `q/p` over the real line equals `± deg p` (for `deg q ≤ deg p`), which
/// is read off a generalised Sturm sequence at `±∞`.
pub fn certify_interlacing(p: &ExactPoly, q: &ExactPoly) -> Result<Interlacing> {
    for f in [p, q] {
        if f.is_zero() {
            return Err(Error::InvalidInput("interlacing of the zero polynomial".into()));
        }
        check_squarefree(f).map_err(|gcd| Error::MultipleRoot { gcd })?;
    }
    let dp = p.degree().expect("nonzero");
    let dq = q.degree().expect("nonzero");
    if dq == dp + 1 {
        return Ok(match certify_interlacing(q, p)? {
            Interlacing::LargestInP => Interlacing::LargestInQ,
            Interlacing::LargestInQ => Interlacing::LargestInP,
            Interlacing::NotInterlacing => Interlacing::NotInterlacing,
        });
    }
    if !(dp == dq || dp == dq + 1) {
        return Ok(Interlacing::NotInterlacing);
    }
    if dp == 0 {
        return Ok(Interlacing::LargestInP);
    }
    let pi = p.to_primitive_int();
    let mut qi = q.to_primitive_int();
    if dq == dp {
        qi = qi.positive_pseudo_rem(&pi)?;
        if qi.is_zero() {
            return Ok(Interlacing::NotInterlacing);
        }
    }
    let mut seq = vec![pi, qi];
    loop {
        let r = seq[seq.len() - 2].positive_pseudo_rem(&seq[seq.len() - 1])?;
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    if seq.last().and_then(|g| g.degree()).unwrap_or(0) > 0 {
        return Ok(Interlacing::NotInterlacing);
    }
    let index = variations(seq.iter().map(|f| sign_at_infinity(f, false))) as i64
        - variations(seq.iter().map(|f| sign_at_infinity(f, true))) as i64;
    if index.unsigned_abs() as usize != dp {
        return Ok(Interlacing::NotInterlacing);
    }
    if dq < dp {
        return Ok(Interlacing::LargestInP);
    }
    // the root of q beyond the roots of p lies to the right when q/p changes
    // sign between the largest pole and +∞
    let kappa = p.leading().expect("nonzero").cmp0() == q.leading().expect("nonzero").cmp0();
    Ok(if kappa == (index > 0) { Interlacing::LargestInP } else { Interlacing::LargestInQ })
}
