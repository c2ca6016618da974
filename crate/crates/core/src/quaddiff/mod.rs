//! Turning points and critical horizontal trajectories of the quadratic
//! differential `−P(Θ) dΘ²` with `P(Θ) = (Θ² − a)² − 4(Θ − Λ)`, and the shape
//! of the limiting eigenvalue support.
//!
//! A direction `v` is horizontal at `Θ` when `−P(Θ) v² > 0`.

mod topology;
mod trace;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numeric::poly;

pub use topology::{classify_cloud, support_topology, Skeleton, Topology, TopologyOptions, TopologyReport};
pub use trace::{horizontal_direction, horizontality_residual, trace_horizontal, TraceOptions};

/// Relative distance below which two roots of `P` count as one.
pub const MERGE_TOL: f64 = 1e-7;

/// Ascending coefficients of `P(·, Λ)`.
pub fn quartic_coeffs(a: Complex64, lambda: Complex64) -> [Complex64; 5] {
    let one = Complex64::new(1.0, 0.0);
    [a * a + 4.0 * lambda, Complex64::new(-4.0, 0.0), -2.0 * a, Complex64::new(0.0, 0.0), one]
}

/// `(P(Θ), P′(Θ))`
pub fn p_eval(a: Complex64, lambda: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let u = z * z - a;
    (u * u - 4.0 * (z - lambda), 4.0 * z * u - 4.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint {
    pub z: Complex64,
    pub multiplicity: usize,
}

/// Roots of `P(·, Λ)` with clusters closer than [`MERGE_TOL`] merged.
pub fn turning_points(a: Complex64, lambda: Complex64) -> Vec<TurningPoint> {
    let raw = poly::roots(&quartic_coeffs(a, lambda));
    let scale = 1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut group: Vec<usize> = (0..raw.len()).collect();
    for i in 0..raw.len() {
        for j in 0..i {
            if (raw[i] - raw[j]).norm() < MERGE_TOL * scale {
                let (gi, gj) = (group[i], group[j]);
                group.iter_mut().filter(|g| **g == gi).for_each(|g| *g = gj);
            }
        }
    }
    let mut out: Vec<TurningPoint> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for &g in &group {
        if seen.contains(&g) {
            continue;
        }
        seen.push(g);
        let members: Vec<Complex64> = raw.iter().zip(&group).filter(|(_, h)| **h == g).map(|(z, _)| *z).collect();
        let m = members.len();
        out.push(TurningPoint { z: members.iter().sum::<Complex64>() / m as f64, multiplicity: m });
    }
    out.sort_by(|x, y| x.z.re.total_cmp(&y.z.re).then(x.z.im.total_cmp(&y.z.im)));
    out
}

/// Directions of the `m + 2` horizontal rays leaving a turning point of
/// multiplicity `m`.
pub fn local_rays(a: Complex64, lambda: Complex64, tp: &TurningPoint) -> Vec<Complex64> {
    let m = tp.multiplicity;
    // leading Taylor coefficient P^{(m)}(Θ₀)/m!
    let coeffs = quartic_coeffs(a, lambda);
    let mut c = Complex64::new(0.0, 0.0);
    for (k, ck) in coeffs.iter().enumerate().skip(m) {
        let binom = (0..m).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64);
        c += ck * binom * tp.z.powu((k - m) as u32);
    }
    let k = (m + 2) as f64;
    (0..m + 2)
        .map(|j| Complex64::from_polar(1.0, (std::f64::consts::PI - c.arg() + 2.0 * std::f64::consts::PI * j as f64) / k))
        .collect()
}

/// Where a traced trajectory stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    TurningPoint(usize),
    Escape,
    MaxLength,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Index of the turning point the ray leaves.
    pub from: usize,
    pub end: Endpoint,
    pub length: f64,
    pub points: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryGraph {
    pub a: Complex64,
    pub lambda: Complex64,
    pub turning_points: Vec<TurningPoint>,
    pub trajectories: Vec<Trajectory>,
    /// Pairs of turning points joined by a critical trajectory, `i ≤ j`.
    pub connectivity: Vec<(usize, usize)>,
    /// Whether every turning point lies on a critical trajectory, counting a
    /// multiple turning point as a critical trajectory of length zero.
    pub all_critical: bool,
    /// Whether every turning point is an endpoint of a traced critical
    /// trajectory.
    pub all_critical_strict: bool,
    pub options: TraceOptions,
}

impl TrajectoryGraph {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per polyline vertex: `trajectory,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("trajectory,re,im\n");
        for (k, t) in self.trajectories.iter().enumerate() {
            for z in &t.points {
                s.push_str(&format!("{k},{},{}\n", z.re, z.im));
            }
        }
        s
    }

    /// Largest [`horizontality_residual`] over the integrated segments, which
    /// are all segments except those ending at a turning point.
    pub fn worst_horizontality(&self) -> f64 {
        let is_tp = |z: &Complex64| self.turning_points.iter().any(|t| t.z == *z);
        self.trajectories
            .iter()
            .flat_map(|t| t.points.windows(2))
            .filter(|w| !is_tp(&w[0]) && !is_tp(&w[1]))
            .map(|w| horizontality_residual(self.a, self.lambda, w[0], w[1]))
            .fold(0.0, f64::max)
    }
}

/// Traces every ray from every turning point.
pub fn critical_graph(a: Complex64, lambda: Complex64, opts: &TraceOptions) -> Result<TrajectoryGraph> {
    let tps = turning_points(a, lambda);
    let opts = opts.resolved(a, lambda, &tps);
    let starts: Vec<(usize, Complex64)> = tps
        .iter()
        .enumerate()
        .flat_map(|(i, tp)| local_rays(a, lambda, tp).into_iter().map(move |d| (i, d)))
        .collect();
    let trajectories = starts
        .par_iter()
        .map(|&(i, d)| trace::trace_ray(a, lambda, &tps, i, d, &opts))
        .collect::<Result<Vec<_>>>()?;
    let mut connectivity: Vec<(usize, usize)> = trajectories
        .iter()
        .filter_map(|t| match t.end {
            Endpoint::TurningPoint(j) => Some((t.from.min(j), t.from.max(j))),
            _ => None,
        })
        .collect();
    connectivity.sort_unstable();
    connectivity.dedup();
    let joined = |i: usize| connectivity.iter().any(|&(p, q)| p == i || q == i);
    let all_critical_strict = (0..tps.len()).all(joined);
    let all_critical = (0..tps.len()).all(|i| joined(i) || tps[i].multiplicity > 1);
    Ok(TrajectoryGraph {
        a,
        lambda,
        turning_points: tps,
        trajectories,
        connectivity,
        all_critical,
        all_critical_strict,
        options: opts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn double_point_at_three_quarters() {
        let tps = turning_points(c(0.0, 0.0), c(0.75, 0.0));
        assert_eq!(tps.len(), 3);
        let d = tps.iter().find(|t| t.multiplicity == 2).unwrap();
        assert!((d.z - c(1.0, 0.0)).norm() < 1e-7);
        // hand check: P(1) = 1 − 4 + 3 and P′(1) = 4 − 4
        let (p, dp) = p_eval(c(0.0, 0.0), c(0.75, 0.0), c(1.0, 0.0));
        assert_eq!((p, dp), (c(0.0, 0.0), c(0.0, 0.0)));
        assert_eq!(local_rays(c(0.0, 0.0), c(0.75, 0.0), d).len(), 4);
    }

    #[test]
    fn zero_parameters_factor() {
        let tps = turning_points(c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(tps.len(), 4);
        let r = 4f64.cbrt();
        for want in [c(0.0, 0.0), c(r, 0.0), r * c(-0.5, 0.75f64.sqrt()), r * c(-0.5, -(0.75f64.sqrt()))] {
            assert!(tps.iter().any(|t| (t.z - want).norm() < 1e-12 && t.multiplicity == 1));
        }
    }

    #[test]
    fn rays_are_horizontal() {
        let (a, l) = (c(0.3, -0.2), c(0.1, 0.4));
        for tp in turning_points(a, l) {
            for d in local_rays(a, l, &tp) {
                let z = tp.z + 1e-4 * d;
                let q = -p_eval(a, l, z).0 * d * d;
                assert!(q.re > 0.0 && q.im.abs() < 1e-3 * q.norm());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn vieta(ar in -3.0..3.0f64, ai in -3.0..3.0f64, lr in -3.0..3.0f64, li in -3.0..3.0f64) {
            let (a, l) = (c(ar, ai), c(lr, li));
            let tps = turning_points(a, l);
            let roots: Vec<Complex64> = tps.iter().flat_map(|t| std::iter::repeat_n(t.z, t.multiplicity)).collect();
            prop_assert_eq!(roots.len(), 4);
            let mut e = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
            for r in &roots {
                for k in (1..5).rev() {
                    e[k] = e[k] - e[k - 1] * r;
                }
            }
            let p = quartic_coeffs(a, l);
            let scale = 1.0 + p.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for k in 0..5 {
                prop_assert!((e[k] - p[4 - k]).norm() < 1e-9 * scale, "k {} {} {}", k, e[k], p[4 - k]);
            }
        }
    }

    #[test]
    fn symmetric_configuration_is_critical() {
        let g = critical_graph(c(0.0, 0.0), c(0.0, 0.0), &TraceOptions::default()).unwrap();
        assert!(g.all_critical);
        assert_eq!(g.trajectories.len(), 12);
        assert!(g.worst_horizontality() < 1e-6);
        // three legs from the origin to the cube roots of 4
        let origin = g.turning_points.iter().position(|t| t.z.norm() < 1e-12).unwrap();
        let legs = g.connectivity.iter().filter(|&&(p, q)| p == origin || q == origin).count();
        assert_eq!(legs, 3);
    }

    #[test]
    fn far_parameters_are_not_critical() {
        let g = critical_graph(c(0.0, 0.0), c(5.0, 5.0), &TraceOptions::default()).unwrap();
        assert!(!g.all_critical);
        assert!(g.worst_horizontality() < 1e-6);
    }

    #[test]
    fn double_point_is_critical() {
        let g = critical_graph(c(0.0, 0.0), c(0.75, 0.0), &TraceOptions::default()).unwrap();
        assert!(g.all_critical);
        assert!(!g.all_critical_strict);
        assert!(g.worst_horizontality() < 1e-6);
        // just inside the support the two merging points are joined
        for l in [0.3, 0.7, 0.7499] {
            let g = critical_graph(c(0.0, 0.0), c(l, 0.0), &TraceOptions::default()).unwrap();
            assert!(g.all_critical_strict, "Λ = {l}");
        }
    }

    fn real_segment_joined(g: &TrajectoryGraph) -> bool {
        let real: Vec<usize> = (0..g.turning_points.len()).filter(|&i| g.turning_points[i].z.im.abs() < 1e-7).collect();
        g.trajectories.iter().any(|t| {
            matches!(t.end, Endpoint::TurningPoint(j) if real.contains(&j) && real.contains(&t.from) && j != t.from)
                && t.points.iter().all(|z| z.im.abs() < 1e-6)
        })
    }

    #[test]
    fn real_parameters_beyond_collision() {
        for a in [1.9, 2.5, 3.0] {
            let ends = crate::bkw::support_endpoints(c(a, 0.0));
            let mut re: Vec<f64> = ends.iter().map(|z| z.re).collect();
            re.sort_by(f64::total_cmp);
            let g = critical_graph(c(a, 0.0), c(re[2], 0.0), &TraceOptions::default()).unwrap();
            assert!(g.all_critical, "a = {a}");
            assert!(g.worst_horizontality() < 1e-6);
            let inside = re[1] + 0.9 * (re[2] - re[1]);
            let g = critical_graph(c(a, 0.0), c(inside, 0.0), &TraceOptions::default()).unwrap();
            assert!(g.all_critical_strict, "a = {a}");
            assert!(real_segment_joined(&g), "a = {a}");
        }
    }
}
