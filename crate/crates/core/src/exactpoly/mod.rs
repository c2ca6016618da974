//! Exact dense univariate polynomials over big integers and big rationals.
//!
//! [`Poly`] is generic over a [`Coeff`] ring; the two instantiations used in
//! the crate are [`IntPoly`] (coefficients in `rug::Integer`) and
//! [`ExactPoly`] (coefficients in `rug::Rational`). Coefficients are stored in
//! ascending degree and the vector never carries trailing zeros, so the zero
//! polynomial is the empty vector.

mod bivariate;
mod coeff;
pub mod modular;
mod resultant;
mod sturm;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bivariate::BivariatePoly;
pub use coeff::Coeff;
pub use resultant::{resultant, resultant_with_degree_bound, Eliminate};
pub use sturm::{certify_interlacing, count_real_roots, real_roots, refine, Bound, Interlacing, RealRoots};

/// Largest number of coefficients any polynomial may carry.
pub const COEFF_CAP: usize = 100_000;

/// Below this length schoolbook multiplication is used.
const KARATSUBA_THRESHOLD: usize = 24;

/// Descriptive variable label; has no effect on arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    #[default]
    X,
    Lambda,
    A,
    Xi,
    T,
    Beta,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::X => "x",
            Var::Lambda => "λ",
            Var::A => "a",
            Var::Xi => "ξ",
            Var::T => "t",
            Var::Beta => "β",
        };
        f.write_str(s)
    }
}

/// Equality compares coefficients only; the variable label is ignored.
#[derive(Clone)]
pub struct Poly<C: Coeff> {
    coeffs: Vec<C>,
    var: Var,
}

impl<C: Coeff> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<C: Coeff> Eq for Poly<C> {}

pub type IntPoly = Poly<Integer>;
pub type ExactPoly = Poly<Rational>;

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new(), var: Var::X }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·x^k`
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(C::is_zero) {
            coeffs.pop();
        }
        Self { coeffs, var: Var::X }
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        Self::from_coeffs(v.iter().map(|&c| C::from_i64(c)).collect())
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn check_cap(&self) -> Result<()> {
        if self.coeffs.len() > COEFF_CAP {
            return Err(Error::DegreeCap { size: self.coeffs.len(), cap: COEFF_CAP });
        }
        Ok(())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_ref(&C::from_i64(k as i64)))
            .collect();
        Self::from_coeffs(coeffs).with_var(self.var)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.mul_ref(c)).collect()).with_var(self.var)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![C::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self { coeffs: v, var: self.var }
    }

    /// Horner evaluation in the coefficient ring.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x);
            acc.add_assign_ref(c);
        }
        acc
    }

    /// `p(x^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![C::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::from_coeffs(v).with_var(self.var)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one().with_var(self.var);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Number of coefficients that are nonzero.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k)
    }
}

impl IntPoly {
    /// Exact quotient `self / d`.
    ///
    /// The division is carried out over the integers; any non-integral
    /// quotient coefficient or nonzero remainder is reported as
    /// [`Error::NotDivisible`].
    pub fn exact_div(&self, d: &IntPoly) -> Result<IntPoly> {
        let dd = d.degree().ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
        let Some(nd) = self.degree() else {
            return Ok(IntPoly::zero().with_var(self.var));
        };
        if nd < dd {
            return Err(Error::NotDivisible { remainder_degree: nd });
        }
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Integer::new(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.clone().div_rem(lead.clone());
            if !r.is_zero() {
                return Err(Error::NotDivisible { remainder_degree: k + dd });
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + i] -= &q * dc;
                }
            }
            quot[k] = q;
        }
        if let Some(pos) = rem.iter().rposition(|c| !c.is_zero()) {
            return Err(Error::NotDivisible { remainder_degree: pos });
        }
        Ok(IntPoly::from_coeffs(quot).with_var(self.var))
    }

    /// Remainder of `self` modulo `d` times a positive integer, computed
    /// without fractions and with the content removed.
    pub fn positive_pseudo_rem(&self, d: &IntPoly) -> Result<IntPoly> {
        let dd = d.degree().ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
        let Some(nd) = self.degree() else {
            return Ok(self.clone());
        };
        if nd < dd {
            return Ok(self.without_content());
        }
        let flip = d.coeffs[dd] < 0;
        let dc: Vec<Integer> = d.coeffs.iter().map(|c| if flip { Integer::from(-c) } else { c.clone() }).collect();
        let lead = &dc[dd];
        let mut rem = self.coeffs.clone();
        for k in (0..=nd - dd).rev() {
            let top = std::mem::take(&mut rem[k + dd]);
            if top.is_zero() {
                continue;
            }
            for c in rem[..k + dd].iter_mut() {
                *c *= lead;
            }
            for (i, c) in dc[..dd].iter().enumerate() {
                rem[k + i] -= Integer::from(&top * c);
            }
        }
        rem.truncate(dd);
        Ok(IntPoly::from_coeffs(rem).with_var(self.var).without_content())
    }

    /// Divides out the content, keeping every sign.
    pub fn without_content(&self) -> IntPoly {
        let g = self.content();
        if g <= 1 {
            return self.clone();
        }
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| Integer::from(c / &g)).collect()).with_var(self.var)
    }

    /// Nonnegative gcd of the coefficients (the content).
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| *l < 0) {
            g = -g;
        }
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| Integer::from(c / &g)).collect()).with_var(self.var)
    }

    pub fn to_exact(&self) -> ExactPoly {
        ExactPoly::from_coeffs(self.coeffs.iter().map(|c| Rational::from(c.clone())).collect()).with_var(self.var)
    }

    /// Maximum coefficient bit length.
    pub fn max_bits(&self) -> u32 {
        self.coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(0)
    }
}

impl ExactPoly {
    /// Euclidean division over the rationals.
    pub fn div_rem(&self, d: &ExactPoly) -> Result<(ExactPoly, ExactPoly)> {
        let dd = d.degree().ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
        let Some(nd) = self.degree() else {
            return Ok((ExactPoly::zero(), ExactPoly::zero()));
        };
        if nd < dd {
            return Ok((ExactPoly::zero().with_var(self.var), self.clone()));
        }
        let inv_lead = Rational::from(d.coeffs[dd].recip_ref());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::new(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            if rem[k + dd].is_zero() {
                continue;
            }
            let q = Rational::from(&rem[k + dd] * &inv_lead);
            for (i, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + i] -= Rational::from(&q * dc);
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((
            ExactPoly::from_coeffs(quot).with_var(self.var),
            ExactPoly::from_coeffs(rem).with_var(self.var),
        ))
    }

    /// Exact quotient over the rationals; a nonzero remainder is an error.
    pub fn exact_div(&self, d: &ExactPoly) -> Result<ExactPoly> {
        let (q, r) = self.div_rem(d)?;
        match r.degree() {
            None => Ok(q),
            Some(k) => Err(Error::NotDivisible { remainder_degree: k }),
        }
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, other: &ExactPoly) -> ExactPoly {
        let mut a = self.to_primitive_int();
        let mut b = other.to_primitive_int();
        while !b.is_zero() {
            let r = a.positive_pseudo_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.to_exact().monic()
    }

    pub fn monic(&self) -> ExactPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&Rational::from(l.recip_ref())),
        }
    }

    /// Clears denominators and returns the primitive integer polynomial with
    /// the same sign of leading coefficient.
    pub fn to_primitive_int(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero().with_var(self.var);
        }
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm.lcm_mut(c.denom());
        }
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * Integer::from(&lcm / c.denom())))
            .collect();
        let p = IntPoly::from_coeffs(ints).with_var(self.var);
        let g = p.content();
        IntPoly::from_coeffs(p.coeffs.iter().map(|c| Integer::from(c / &g)).collect()).with_var(self.var)
    }

    /// Univariate Sylvester resultant over the rationals.
    pub fn resultant(&self, other: &ExactPoly) -> Rational {
        resultant::univariate_resultant(self, other)
    }

    /// `res(p, p')` without leading-coefficient normalisation.
    pub fn discriminant_unnormalized(&self) -> Rational {
        self.resultant(&self.derivative())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }
}

fn add_coeffs<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        o.add_assign_ref(s);
    }
    out
}

fn schoolbook<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_mul_assign(x, y);
        }
    }
    out
}

/// Karatsuba product on coefficient slices; falls back to schoolbook on
/// short or very unbalanced operands.
fn karatsuba<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let n = a.len().min(b.len());
    if n < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    let m = a.len().max(b.len()).div_ceil(2);
    if n <= m {
        // unbalanced: split the longer operand into blocks of the shorter length
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = vec![C::zero(); a.len() + b.len() - 1];
        for (blk, chunk) in long.chunks(short.len()).enumerate() {
            let prod = karatsuba(chunk, short);
            let off = blk * short.len();
            for (k, c) in prod.into_iter().enumerate() {
                out[off + k].add_assign_ref(&c);
            }
        }
        return out;
    }
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let s1 = add_coeffs(a0, a1);
    let s2 = add_coeffs(b0, b1);
    let mut z1 = karatsuba(&s1, &s2);
    for (k, c) in z0.iter().enumerate() {
        z1[k].sub_assign_ref(c);
    }
    for (k, c) in z2.iter().enumerate() {
        z1[k].sub_assign_ref(c);
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (k, c) in z0.into_iter().enumerate() {
        out[k].add_assign_ref(&c);
    }
    for (k, c) in z1.into_iter().enumerate() {
        if k + m < out.len() {
            out[k + m].add_assign_ref(&c);
        } else {
            debug_assert!(c.is_zero());
        }
    }
    for (k, c) in z2.into_iter().enumerate() {
        out[k + 2 * m].add_assign_ref(&c);
    }
    out
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        Poly::from_coeffs(add_coeffs(&self.coeffs, &rhs.coeffs)).with_var(self.var)
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.coeffs.clone();
        if out.len() < rhs.coeffs.len() {
            out.resize(rhs.coeffs.len(), C::zero());
        }
        for (o, r) in out.iter_mut().zip(&rhs.coeffs) {
            o.sub_assign_ref(r);
        }
        Poly::from_coeffs(out).with_var(self.var)
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        Poly::from_coeffs(karatsuba(&self.coeffs, &rhs.coeffs)).with_var(self.var)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::from_coeffs(self.coeffs.iter().map(C::neg_ref).collect()).with_var(self.var)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c.to_decimal())?,
                1 => write!(f, "{}·{}", c.to_decimal(), self.var)?,
                _ => write!(f, "{}·{}^{}", c.to_decimal(), self.var, k)?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    var: Var,
    coeffs: Vec<String>,
}

impl<C: Coeff> Serialize for Poly<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr { var: self.var, coeffs: self.coeffs.iter().map(C::to_decimal).collect() }.serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for Poly<C> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| C::parse_decimal(s).ok_or_else(|| serde::de::Error::custom(format!("bad coefficient `{s}`"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Poly::from_coeffs(coeffs).with_var(repr.var))
    }
}
