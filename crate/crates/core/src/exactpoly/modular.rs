//! Word-size modular arithmetic used by the evaluation/interpolation
//! resultant: prime selection, univariate resultants over 𝔽ₚ, Newton
//! interpolation and Chinese remaindering back to big integers.

use rug::integer::IsPrime;
use rug::Integer;

/// `a·b mod p`.
#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// The first `count` primes above `2^61`, ascending.
pub fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut x = Integer::from(1u64 << 61);
    while out.len() < count {
        x.next_prime_mut();
        debug_assert!(x.is_probably_prime(30) != IsPrime::No);
        out.push(x.to_u64().expect("prime fits in u64"));
    }
    out
}

/// Reduces a big integer into `[0, p)`.
pub fn reduce(x: &Integer, p: u64) -> u64 {
    let r = Integer::from(x % p);
    let r = if r < 0 { r + p } else { r };
    r.to_u64().expect("residue fits in u64")
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Horner evaluation of an ascending coefficient vector.
pub fn eval_poly(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &k| add_mod(mul_mod(acc, x, p), k, p))
}

/// Remainder of `f` modulo `g` (g nonzero, trimmed), in place.
fn rem_in_place(f: &mut Vec<u64>, g: &[u64], p: u64) {
    let dg = g.len() - 1;
    let inv = inv_mod(g[dg], p);
    while f.len() > dg {
        let top = f.len() - 1;
        let q = mul_mod(f[top], inv, p);
        if q != 0 {
            let off = top - dg;
            for (i, &gi) in g.iter().enumerate() {
                f[off + i] = sub_mod(f[off + i], mul_mod(q, gi, p), p);
            }
        }
        f.pop();
        trim(f);
    }
    trim(f);
}

/// Sylvester resultant of two polynomials over 𝔽ₚ given as ascending
/// coefficient vectors whose leading entries are nonzero.
pub fn resultant_mod(f: &[u64], g: &[u64], p: u64) -> u64 {
    let mut f = f.to_vec();
    let mut g = g.to_vec();
    trim(&mut f);
    trim(&mut g);
    if f.is_empty() || g.is_empty() {
        return 0;
    }
    let mut acc = 1u64;
    loop {
        let m = f.len() - 1;
        let n = g.len() - 1;
        if n == 0 {
            return mul_mod(acc, pow_mod(g[0], m as u64, p), p);
        }
        let lg = g[n];
        rem_in_place(&mut f, &g, p);
        if f.is_empty() {
            return 0;
        }
        let k = f.len() - 1;
        if (m * n) % 2 == 1 {
            acc = sub_mod(0, acc, p);
        }
        acc = mul_mod(acc, pow_mod(lg, (m - k) as u64, p), p);
        std::mem::swap(&mut f, &mut g);
    }
}

/// Monomial-basis coefficients of the interpolant through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub_mod(dd[i], dd[i - 1], p);
            let den = sub_mod(xs[i], xs[i - j], p);
            dd[i] = mul_mod(num, inv_mod(den, p), p);
        }
    }
    // Horner on the Newton form: c(x) = dd[n-1]; c = c·(x - xs[i]) + dd[i]
    let mut c = vec![0u64; n];
    let mut len = 0usize;
    for i in (0..n).rev() {
        // c <- c·(x - xs[i])
        let mut next = vec![0u64; len + 1];
        for k in 0..len {
            next[k + 1] = add_mod(next[k + 1], c[k], p);
            next[k] = sub_mod(next[k], mul_mod(c[k], xs[i], p), p);
        }
        next[0] = add_mod(next[0], dd[i], p);
        len += 1;
        c[..len].copy_from_slice(&next[..len]);
    }
    c.truncate(len);
    trim(&mut c);
    c
}

/// Garner reconstruction of the symmetric-range integer congruent to
/// `residues[i]` modulo `primes[i]`.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> Integer {
    let mut x = Integer::from(residues[0]);
    let mut m = Integer::from(primes[0]);
    for (&r, &p) in residues.iter().zip(primes).skip(1) {
        let xm = reduce(&x, p);
        let mm = reduce(&m, p);
        let t = mul_mod(sub_mod(r, xm, p), inv_mod(mm, p), p);
        x += Integer::from(&m * t);
        m *= p;
    }
    let half = Integer::from(&m >> 1);
    if x > half {
        x -= m;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    #[test]
    fn resultant_of_linear_factors() {
        // res(x - 2, x - 5) = (2 - 5) = -3
        let r = resultant_mod(&[P - 2, 1], &[P - 5, 1], P);
        assert_eq!(r, P - 3);
        // res(x^2 - 1, 2x): lc(f)^1 · g(1) g(-1) = 2 · (-2) = -4
        let r = resultant_mod(&[P - 1, 0, 1], &[0, 2], P);
        assert_eq!(r, P - 4);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let c = [3u64, P - 7, 0, 11];
        let xs: Vec<u64> = (1..=6).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| eval_poly(&c, x, P)).collect();
        assert_eq!(interpolate(&xs, &ys, P), c.to_vec());
    }

    #[test]
    fn crt_recovers_signed_value() {
        let ps = primes(3);
        let v: Integer = -(Integer::from(1u64 << 62) * 12345u32 + 17u32);
        let rs: Vec<u64> = ps.iter().map(|&p| reduce(&v, p)).collect();
        assert_eq!(crt_symmetric(&rs, &ps), v);
    }
}
