//! Arc-length integration of horizontal trajectories.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{p_eval, Endpoint, Trajectory, TurningPoint};
use crate::error::{Error, Result};
use crate::numeric::quad::gauss_legendre;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Local error bound per step.
    pub tol: f64,
    /// Capture radius as a fraction of the turning-point diameter.
    pub capture_frac: f64,
    /// Start offset from the turning point as a fraction of the diameter.
    pub offset_frac: f64,
    /// Escape radius; `0` selects `10 (1 + |a| + |Λ|)^{1/2}`.
    pub escape_radius: f64,
    /// Longest trajectory as a multiple of the escape radius.
    pub max_length_factor: f64,
    /// Resolved capture radius; `0` until resolved.
    pub capture_radius: f64,
    /// Resolved start offset; `0` until resolved.
    pub offset: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            capture_frac: 1e-3,
            offset_frac: 1e-2,
            escape_radius: 0.0,
            max_length_factor: 20.0,
            capture_radius: 0.0,
            offset: 0.0,
        }
    }
}

impl TraceOptions {
    /// Fills in the radii that depend on the configuration.
    pub fn resolved(&self, a: Complex64, lambda: Complex64, tps: &[TurningPoint]) -> Self {
        let mut diam: f64 = 0.0;
        for p in tps {
            for q in tps {
                diam = diam.max((p.z - q.z).norm());
            }
        }
        if diam == 0.0 {
            diam = 1.0;
        }
        let mut o = *self;
        if o.escape_radius <= 0.0 {
            o.escape_radius = 10.0 * (1.0 + a.norm() + lambda.norm()).sqrt();
        }
        if o.capture_radius <= 0.0 {
            o.capture_radius = o.capture_frac * diam;
        }
        if o.offset <= 0.0 {
            o.offset = o.offset_frac * diam;
        }
        o
    }
}

/// The unit horizontal direction at `z` closest to `reference`.
pub fn horizontal_direction(a: Complex64, lambda: Complex64, z: Complex64, reference: Complex64) -> Complex64 {
    let p = p_eval(a, lambda, z).0;
    let v = (-p.conj() / p.norm()).sqrt();
    if (v * reference.conj()).re < 0.0 {
        -v
    } else {
        v
    }
}

/// `|Im w| / |w|` for `w = ∫ √(−P) dΘ` along the chord from `z0` to `z1`;
/// zero on an exact horizontal arc.
pub fn horizontality_residual(a: Complex64, lambda: Complex64, z0: Complex64, z1: Complex64) -> f64 {
    let (x, wt) = gauss_legendre(8);
    let mid = 0.5 * (z0 + z1);
    let half = 0.5 * (z1 - z0);
    let q_mid = (-p_eval(a, lambda, mid).0).sqrt();
    let mut w = Complex64::new(0.0, 0.0);
    for (t, wk) in x.iter().zip(&wt) {
        let mut q = (-p_eval(a, lambda, mid + half * t).0).sqrt();
        if (q * q_mid.conj()).re < 0.0 {
            q = -q;
        }
        w += q * wk;
    }
    w *= half;
    if w.norm() == 0.0 {
        0.0
    } else {
        w.im.abs() / w.norm()
    }
}

/// Distance from each turning point to the nearest other one.
fn separations(tps: &[TurningPoint]) -> Vec<f64> {
    tps.iter()
        .map(|p| tps.iter().map(|q| (p.z - q.z).norm()).filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min))
        .collect()
}

/// Start offset used for rays leaving turning point `i`.
pub(super) fn ray_offset(tps: &[TurningPoint], i: usize, opts: &TraceOptions) -> f64 {
    opts.offset.min(0.25 * separations(tps)[i])
}

/// Distance from `p` to the segment `[a, b]`.
fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One step of length `h`; returns the new point and the error estimate.
fn dp_step(a: Complex64, lambda: Complex64, z: Complex64, dir: Complex64, h: f64) -> (Complex64, f64) {
    let mut k = [Complex64::new(0.0, 0.0); 7];
    for s in 0..7 {
        let zs = z + h * (0..s).map(|j| k[j] * A[s][j]).sum::<Complex64>();
        k[s] = horizontal_direction(a, lambda, zs, dir);
    }
    let z5 = z + h * (0..7).map(|s| k[s] * B5[s]).sum::<Complex64>();
    let z4 = z + h * (0..7).map(|s| k[s] * B4[s]).sum::<Complex64>();
    (z5, (z5 - z4).norm())
}

/// Follows the horizontal trajectory through `start` with initial direction
/// `direction` until it reaches a turning point, escapes or exceeds the
/// maximum length. Turning point `skip` is ignored for captures during the
/// first `4·offset` of arc length.
fn integrate(
    a: Complex64,
    lambda: Complex64,
    tps: &[TurningPoint],
    start: Complex64,
    direction: Complex64,
    skip: Option<usize>,
    opts: &TraceOptions,
) -> Result<(Vec<Complex64>, Endpoint, f64)> {
    let sep = separations(tps);
    let offset = skip.map_or(opts.offset, |i| opts.offset.min(0.25 * sep[i]));
    let scale = 1.0 + opts.escape_radius;
    let h_max = 0.02 * scale;
    let h_min = 1e-13 * scale;
    let max_len = opts.max_length_factor * opts.escape_radius;
    let mut z = start;
    let mut dir = horizontal_direction(a, lambda, z, direction);
    let mut pts = vec![z];
    let mut len = 0.0;
    let mut h = (0.1 * offset).max(h_min);
    loop {
        let (next, err) = dp_step(a, lambda, z, dir, h);
        if !(err <= opts.tol * scale) || !next.is_finite() {
            h *= 0.5;
            if h < h_min {
                return Err(Error::StallNearTurningPoint { re: z.re, im: z.im });
            }
            continue;
        }
        len += h;
        for (i, tp) in tps.iter().enumerate() {
            if skip == Some(i) && len < 4.0 * offset {
                continue;
            }
            if segment_distance(tp.z, z, next) < opts.capture_radius.min(0.1 * sep[i]) {
                pts.push(tp.z);
                return Ok((pts, Endpoint::TurningPoint(i), len + (tp.z - next).norm()));
            }
        }
        dir = horizontal_direction(a, lambda, next, next - z);
        z = next;
        pts.push(z);
        if z.norm() > opts.escape_radius {
            return Ok((pts, Endpoint::Escape, len));
        }
        if len > max_len {
            return Ok((pts, Endpoint::MaxLength, len));
        }
        let grow = if err == 0.0 { 2.0 } else { (0.9 * (opts.tol * scale / err).powf(0.2)).clamp(0.2, 2.0) };
        // keep steps short relative to the nearest turning point so that
        // captures and the direction field stay resolved
        let near = tps.iter().map(|t| (t.z - z).norm()).fold(f64::INFINITY, f64::min);
        h = (h * grow).min(h_max).min(0.25 * near.max(opts.capture_radius.min(0.1 * near)));
    }
}

/// Horizontal trajectory from `start` in `direction`, which need not be
/// exactly horizontal; the nearest horizontal direction is used.
pub fn trace_horizontal(
    a: Complex64,
    lambda: Complex64,
    start: Complex64,
    direction: Complex64,
    opts: &TraceOptions,
) -> Result<Trajectory> {
    let tps = super::turning_points(a, lambda);
    let opts = opts.resolved(a, lambda, &tps);
    let from = tps.iter().position(|t| (t.z - start).norm() < opts.capture_radius);
    let (start, skip) = match from {
        Some(i) => (tps[i].z + ray_offset(&tps, i, &opts) * direction / direction.norm(), Some(i)),
        None => (start, None),
    };
    let (mut points, end, length) = integrate(a, lambda, &tps, start, direction, skip, &opts)?;
    if let Some(i) = from {
        points.insert(0, tps[i].z);
    }
    Ok(Trajectory { from: from.unwrap_or(usize::MAX), end, length, points })
}

/// The ray leaving turning point `i` in the exact local direction `d`.
pub(super) fn trace_ray(
    a: Complex64,
    lambda: Complex64,
    tps: &[TurningPoint],
    i: usize,
    d: Complex64,
    opts: &TraceOptions,
) -> Result<Trajectory> {
    let offset = ray_offset(tps, i, opts);
    let (mut points, end, length) = integrate(a, lambda, tps, tps[i].z + offset * d, d, Some(i), opts)?;
    points.insert(0, tps[i].z);
    Ok(Trajectory { from: i, end, length: length + offset, points })
}
