//! Double-precision complex polynomial helpers for low degrees.

use num_complex::Complex64;

/// `(p(z), p'(z))` for ascending coefficients.
pub fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &k in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + k;
    }
    (p, dp)
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (p, dp) = eval_with_derivative(c, z);
        let next = z - p / dp;
        if !next.is_finite() || eval_with_derivative(c, next).0.norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Roots of `z³ + b z² + c z + d` by the closed form, each polished with
/// Newton steps, sorted by decreasing modulus.
pub fn monic_cubic_roots(b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 3] {
    let d0 = b * b - 3.0 * c;
    let d1 = 2.0 * b * b * b - 9.0 * b * c + 27.0 * d;
    let s = (d1 * d1 - 4.0 * d0 * d0 * d0).sqrt();
    // pick the sign that avoids cancellation
    let big = if (d1 + s).norm() >= (d1 - s).norm() { d1 + s } else { d1 - s };
    let cc = (big / 2.0).powf(1.0 / 3.0);
    let xi = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let coeffs = [d, c, b, Complex64::new(1.0, 0.0)];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut ck = cc;
    for o in out.iter_mut() {
        let z = if ck.norm() == 0.0 { -b / 3.0 } else { -(b + ck + d0 / ck) / 3.0 };
        *o = polish(&coeffs, z);
        ck *= xi;
    }
    out.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    out
}

/// Roots of `z³ + b z² + c z + d` with real coefficients, sorted by
/// decreasing modulus. When the discriminant is nonnegative the three roots
/// come from the trigonometric form and have exactly zero imaginary part.
pub fn real_cubic_roots(b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let mut out = if p == 0.0 && q == 0.0 {
        [Complex64::new(shift, 0.0); 3]
    } else if p < 0.0 && disc >= 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let real = [d, c, b, 1.0];
        let mut r = [0.0; 3];
        for (k, v) in r.iter_mut().enumerate() {
            let x = m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift;
            *v = polish_real(&real, x);
        }
        r.map(|x| Complex64::new(x, 0.0))
    } else {
        let mut r = monic_cubic_roots(Complex64::new(b, 0.0), Complex64::new(c, 0.0), Complex64::new(d, 0.0));
        // one real root and a conjugate pair
        let ireal = (0..3).min_by(|&i, &j| r[i].im.abs().total_cmp(&r[j].im.abs())).unwrap_or(0);
        r[ireal].im = 0.0;
        let others: Vec<usize> = (0..3).filter(|&i| i != ireal).collect();
        let z = r[others[0]];
        let w = r[others[1]];
        let re = 0.5 * (z.re + w.re);
        let im = 0.5 * (z.im.abs() + w.im.abs());
        r[others[0]] = Complex64::new(re, im);
        r[others[1]] = Complex64::new(re, -im);
        r
    };
    out.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    out
}

fn polish_real(c: &[f64], mut x: f64) -> f64 {
    let eval = |x: f64| {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &k in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + k;
        }
        (p, dp)
    };
    for _ in 0..3 {
        let (p, dp) = eval(x);
        let next = x - p / dp;
        // near a double root the quotient is rounding noise
        if !next.is_finite() || eval(next).0.abs() >= p.abs() {
            break;
        }
        x = next;
    }
    x
}

/// All roots of a polynomial with ascending complex coefficients, by a
/// double-precision Aberth iteration followed by Newton polishing.
pub fn roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = c.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    let c = &c[zeros..];
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return out;
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    if n == 3 {
        out.extend(monic_cubic_roots(monic[2], monic[1], monic[0]));
        return out;
    }
    let r = monic[..n].iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    out.extend(z.into_iter().map(|w| polish(&monic, w)));
    out
}
