//! Closed paths in the parameter plane built from segments and circular arcs.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::branching::{BranchSet, GridIndex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// Arc of `center + radius·e^{iθ}` for `θ` from `start` to `end`.
    Arc { center: Complex64, radius: f64, start: f64, end: f64 },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, start, end, .. } => radius * (end - start).abs(),
        }
    }

    /// Point at fraction `s ∈ [0, 1]` of the segment.
    pub fn at(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { center, radius, start, end } => center + Complex64::from_polar(radius, start + (end - start) * s),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, end } => Segment::Arc { center, radius, start: end, end: start },
        }
    }

    fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                let t = if len2 == 0.0 { 0.0 } else { (((p - from) * d.conj()).re / len2).clamp(0.0, 1.0) };
                (p - (from + d * t)).norm()
            }
            Segment::Arc { .. } => (0..=720).map(|k| (self.at(k as f64 / 720.0) - p).norm()).fold(f64::INFINITY, f64::min),
        }
    }
}

/// A closed path parametrised by normalised arc length `t ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct APath {
    pub base: Complex64,
    pub segments: Vec<Segment>,
    /// Distance to the nearest avoided point, when known.
    pub clearance: Option<f64>,
}

impl APath {
    pub fn new(base: Complex64, segments: Vec<Segment>) -> Self {
        Self { base, segments, clearance: None }
    }

    /// The circle `R e^{2πit}`.
    pub fn circle(radius: f64) -> Self {
        Self::new(
            Complex64::new(radius, 0.0),
            vec![Segment::Arc { center: Complex64::new(0.0, 0.0), radius, start: 0.0, end: 2.0 * PI }],
        )
    }

    /// The path that stays at `base`.
    pub fn constant(base: Complex64) -> Self {
        Self::new(base, vec![Segment::Line { from: base, to: base }])
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn at(&self, t: f64) -> Complex64 {
        let total = self.length();
        if total == 0.0 {
            return self.base;
        }
        let mut rest = t.clamp(0.0, 1.0) * total;
        for s in &self.segments {
            let l = s.length();
            if rest <= l && l > 0.0 {
                return s.at(rest / l);
            }
            rest -= l;
        }
        self.segments.last().map_or(self.base, |s| s.at(1.0))
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        (self.at(0.0) - self.base).norm() <= tol && (self.at(1.0) - self.base).norm() <= tol
    }

    /// Smallest distance from the path to any of `points`.
    pub fn distance_to(&self, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&p| self.segments.iter().map(|s| s.distance_to(p)).fold(f64::INFINITY, f64::min))
            .fold(f64::INFINITY, f64::min)
    }

    /// The same path traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        Self { base: self.base, segments: self.segments.iter().rev().map(Segment::reversed).collect(), clearance: self.clearance }
    }
}

/// Side on which real branching points are passed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bump {
    #[default]
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathOptions {
    /// Circle radius as a fraction of the distance to the nearest other
    /// branching point.
    pub radius_factor: f64,
    /// Required distance from other branching points as a fraction of the
    /// median spacing of the set.
    pub clearance_factor: f64,
    pub bump: Bump,
    /// Smallest radius factor tried before giving up.
    pub radius_floor: f64,
    /// Smallest clearance factor accepted for the legs to and from the
    /// circle, whose height is fixed by the branching point.
    pub clearance_floor: f64,
}

impl Default for PathOptions {
    fn default() -> Self {
        Self { radius_factor: 0.3, clearance_factor: 0.05, bump: Bump::Up, radius_floor: 0.02, clearance_floor: 0.005 }
    }
}

/// Default base point `2·max|Σ_n| + 1`.
pub fn default_base(set: &BranchSet) -> f64 {
    2.0 * set.points.max_modulus() + 1.0
}

/// Median nearest-neighbour distance within the set.
pub fn median_spacing(points: &[Complex64]) -> f64 {
    let mut d: Vec<f64> = points
        .iter()
        .map(|p| points.iter().map(|q| (p - q).norm()).filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min))
        .filter(|x| x.is_finite())
        .collect();
    d.sort_by(f64::total_cmp);
    if d.is_empty() {
        1.0
    } else {
        d[d.len() / 2]
    }
}

fn hook(set: &BranchSet, sigma: Complex64, base: f64, factor: f64, bump: Bump) -> Vec<Segment> {
    let b = Complex64::new(base, 0.0);
    let r = factor * set.nearest_other(sigma);
    let scale = 1.0 + sigma.norm();
    let full = Segment::Arc { center: sigma, radius: r, start: 0.0, end: 2.0 * PI };
    let mut out = Vec::new();
    if sigma.im.abs() > 1e-9 * scale {
        let corner = Complex64::new(base, sigma.im);
        out.push(Segment::Line { from: b, to: corner });
        out.push(Segment::Line { from: corner, to: sigma + r });
    } else {
        let mut blockers: Vec<Complex64> = set
            .points
            .points
            .iter()
            .copied()
            .filter(|z| z.im.abs() <= 1e-9 * (1.0 + z.norm()) && z.re > sigma.re + 1e-9 * scale)
            .collect();
        blockers.sort_by(|x, y| y.re.total_cmp(&x.re));
        let mut x = b;
        for z in blockers {
            let rho = factor * set.nearest_other(z);
            out.push(Segment::Line { from: x, to: Complex64::new(z.re + rho, 0.0) });
            let end = match bump {
                Bump::Up => PI,
                Bump::Down => -PI,
            };
            out.push(Segment::Arc { center: Complex64::new(z.re, 0.0), radius: rho, start: 0.0, end });
            x = Complex64::new(z.re - rho, 0.0);
        }
        out.push(Segment::Line { from: x, to: sigma + r });
    }
    let back: Vec<Segment> = out.iter().rev().map(Segment::reversed).collect();
    out.push(full);
    out.extend(back);
    out
}

/// Hook from the real base point to the branching point with grid index
/// `idx`: up or down to its imaginary part, left to it, once around it
/// counterclockwise and back the same way.
pub fn standard_path(set: &BranchSet, idx: GridIndex, base: f64, opts: &PathOptions) -> Result<APath> {
    let sigma = set
        .point(idx)
        .ok_or_else(|| Error::InvalidInput(format!("no branching point with index ({}, {})", idx.i, idx.j)))?;
    if base <= set.points.points.iter().map(|z| z.re).fold(f64::MIN, f64::max) {
        return Err(Error::InvalidInput(format!("base {base} is not to the right of the branching set")));
    }
    let others: Vec<Complex64> = set.points.points.iter().copied().filter(|&z| z != sigma).collect();
    let spacing = median_spacing(&set.points.points);
    let mut factor = opts.radius_factor;
    let mut clearance = opts.clearance_factor;
    loop {
        let mut path = APath::new(Complex64::new(base, 0.0), hook(set, sigma, base, factor, opts.bump));
        let (circle, legs): (Vec<Segment>, Vec<Segment>) =
            path.segments.iter().partition(|s| matches!(s, Segment::Arc { center, .. } if *center == sigma));
        let d_circle = APath::new(path.base, circle).distance_to(&others);
        let d_legs = APath::new(path.base, legs).distance_to(&others);
        if d_circle > clearance * spacing && d_legs > clearance * spacing {
            path.clearance = Some(d_circle.min(d_legs));
            return Ok(path);
        }
        if d_circle <= clearance * spacing {
            factor *= 0.5;
        } else {
            clearance *= 0.5;
        }
        if factor < opts.radius_floor || clearance < opts.clearance_floor {
            return Err(Error::ClearanceViolation { distance: d_circle.min(d_legs), clearance: clearance * spacing });
        }
    }
}
