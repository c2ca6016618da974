//! Data behind each figure, written as point clouds and JSON reports.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::json;

use super::config::RunConfig;
use super::output::Bundle;
use crate::bkw::{branch_points, recurrence_roots, support_endpoints, union_support, uniform_tau_grid, SupportOptions};
use crate::branching::{compare_sets, lattice_probe, scaled_sigma, sigma_points, Window, DEFAULT_SIGMA_CAP};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::monodromy::kac_limit_check;
use crate::pointset::PointSet;
use crate::quaddiff::{classify_cloud, TopologyOptions};
use crate::spectral::{format_complex, scaled_spectrum, ARule};
use crate::yv::{scaled_zeros, DEFAULT_ZEROS_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    FigTau,
    FigA1,
    Triangle,
    FigA3,
    FigAtau,
    FigA,
    Triangle10,
    FigSlopes,
    Lattice,
}

impl Figure {
    pub const ALL: [Figure; 10] = [
        Figure::Fig1,
        Figure::FigTau,
        Figure::FigA1,
        Figure::Triangle,
        Figure::FigA3,
        Figure::FigAtau,
        Figure::FigA,
        Figure::Triangle10,
        Figure::FigSlopes,
        Figure::Lattice,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::FigTau => "figTau",
            Figure::FigA1 => "figA1",
            Figure::Triangle => "triangle",
            Figure::FigA3 => "figA3",
            Figure::FigAtau => "figAtau",
            Figure::FigA => "figA",
            Figure::Triangle10 => "triangle10",
            Figure::FigSlopes => "figslopes",
            Figure::Lattice => "lattice",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Figure::Fig1 => "scaled spectrum at a = 0",
            Figure::FigTau => "roots of the constant-coefficient recurrence for τ = 1/4, 1/2, 3/4",
            Figure::FigA1 => "union supports and scaled spectra for three complex parameters",
            Figure::Triangle => "scaled branching set against the scaled Yablonskii–Vorob'ev zeros",
            Figure::FigA3 => "union support and branch points at a = 3",
            Figure::FigAtau => "the curve a³ = 27τ(1 − τ) in the real (a, τ) plane",
            Figure::FigA => "scaled spectra, support endpoints and topology for three parameters",
            Figure::Triangle10 => "branching set with its triangular grid indices",
            Figure::FigSlopes => "normalised spectra at large |a| against the equispaced grid",
            Figure::Lattice => "drift of the branching lattice from n to n + 3",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn points_json(v: &[Complex64]) -> Vec<String> {
    v.iter().map(|&z| format_complex(z)).collect()
}

/// The three parameters of the supports figure, or `--a`.
fn supports_parameters(cfg: &RunConfig) -> Vec<Complex64> {
    cfg.a.map_or_else(|| vec![c(0.5, -0.5), c(0.0, 0.5), c(1.0, 1.0)], |a| vec![a])
}

/// The three parameters of the topology figure, or `--a`.
fn topology_parameters(cfg: &RunConfig) -> Vec<Complex64> {
    cfg.a.map_or_else(|| vec![c(0.5, -0.5), c(0.8, -2.0 / 3.0), c(2.0 / 3.0, -1.0)], |a| vec![a])
}

/// Computes one figure and writes its files; returns the manifest path.
pub fn run_figure(fig: Figure, cfg: &RunConfig, cache: &Cache) -> Result<std::path::PathBuf> {
    let mut b = Bundle::create(cfg, fig.name(), json!({ "figure": fig.name() }))?;
    let eig = cfg.eigen_options();
    match fig {
        Figure::Fig1 => {
            let n = cfg.n_or(200);
            let a = cfg.a.unwrap_or_default();
            b.op("scaled_spectrum", json!({ "n": n, "a": format_complex(a), "rule": "constant" }));
            let s = scaled_spectrum(n, ARule::Constant(a), &eig)?;
            b.csv("spectrum.csv", &s)?;
            b.json("summary.json", &json!({ "n": n, "count": s.len(), "max_modulus": s.max_modulus() }))?;
        }
        Figure::FigTau => {
            let n = cfg.n_or(150);
            let a = cfg.a.unwrap_or_default();
            let mut report = Vec::new();
            for tau in [0.25, 0.5, 0.75] {
                b.op("recurrence_roots", json!({ "tau": tau, "a": format_complex(a), "k_max": n }));
                let r = recurrence_roots(tau, a, n)?.sorted();
                b.csv(&format!("tau-{tau}.csv"), &r)?;
                b.op("branch_points", json!({ "a": format_complex(a), "tau": tau }));
                let bp = branch_points(a, tau);
                report.push(json!({
                    "tau": tau,
                    "count": r.len(),
                    "max_modulus": r.max_modulus(),
                    "branch_points": points_json(&bp),
                }));
            }
            b.json("summary.json", &report)?;
        }
        Figure::FigA1 => {
            let n = cfg.n_or(200);
            let taus = uniform_tau_grid(cfg.grid);
            let mut report = Vec::new();
            for (k, a) in supports_parameters(cfg).into_iter().enumerate() {
                b.op("union_support", json!({ "a": format_complex(a), "tau_samples": taus.len() }));
                let sup = union_support(a, &taus, &[], &SupportOptions::default());
                b.csv(&format!("support-{k}.csv"), &sup.cloud())?;
                b.op("scaled_spectrum", json!({ "n": n, "a": format_complex(a), "rule": "scaled" }));
                let s = scaled_spectrum(n, ARule::Scaled(a), &eig)?;
                b.csv(&format!("spectrum-{k}.csv"), &s)?;
                let ends: Vec<Complex64> = sup.legs.iter().flat_map(|l| l.endpoints.iter().copied()).collect();
                b.csv(&format!("endpoints-{k}.csv"), &PointSet::new("endpoints", ends))?;
                report.push(json!({ "index": k, "a": format_complex(a), "support_points": sup.cloud().len() }));
            }
            b.json("summary.json", &report)?;
        }
        Figure::Triangle => {
            let n = cfg.n_or(40);
            b.op("scaled_sigma", json!({ "n": n }));
            let sigma = scaled_sigma(n, DEFAULT_SIGMA_CAP.max(n), Some(cache))?;
            b.op("scaled_zeros", json!({ "n": n }));
            let zeros = scaled_zeros(n, DEFAULT_ZEROS_CAP.max(n))?;
            b.op("compare_sets", json!({}));
            let raw = compare_sets(&sigma, &zeros);
            let reflected = PointSet::new("reflected-zeros", zeros.points.iter().map(|z| -z).collect());
            let mirrored = compare_sets(&sigma, &reflected);
            b.csv("sigma.csv", &sigma)?;
            b.csv("zeros.csv", &zeros)?;
            b.json("comparison.json", &json!({ "n": n, "raw": raw, "reflected": mirrored }))?;
        }
        Figure::FigA3 => {
            let a = cfg.a.unwrap_or(c(3.0, 0.0));
            let taus = uniform_tau_grid(cfg.grid);
            b.op("union_support", json!({ "a": format_complex(a), "tau_samples": taus.len() }));
            let sup = union_support(a, &taus, &[], &SupportOptions::default());
            b.csv("support.csv", &sup.cloud())?;
            b.op("branch_points", json!({ "a": format_complex(a), "tau": 0.5 }));
            let bp = PointSet::new("branch-points", branch_points(a, 0.5).to_vec()).sorted();
            b.csv("branch-points.csv", &bp)?;
            b.op("support_endpoints", json!({ "a": format_complex(a) }));
            let ends = support_endpoints(a);
            b.json(
                "summary.json",
                &json!({
                    "a": format_complex(a),
                    "real_interval": sup.real_interval(1e-9),
                    "support_endpoints": points_json(&ends),
                    "branch_points": points_json(&bp.points),
                }),
            )?;
        }
        Figure::FigAtau => {
            let rows: Vec<Vec<f64>> = uniform_tau_grid(cfg.grid)
                .into_iter()
                .map(|t| vec![t, (27.0 * t * (1.0 - t)).cbrt()])
                .collect();
            b.op("discriminant_curve", json!({ "tau_samples": rows.len() }));
            b.table("curve.csv", "tau,a", &rows)?;
            b.json("summary.json", &json!({ "max_a": 3.0 / 4f64.cbrt(), "argmax_tau": 0.5 }))?;
        }
        Figure::FigA => {
            let n = cfg.n_or(200);
            let mut report = Vec::new();
            for (k, a) in topology_parameters(cfg).into_iter().enumerate() {
                b.op("scaled_spectrum", json!({ "n": n, "a": format_complex(a), "rule": "scaled" }));
                let s = scaled_spectrum(n, ARule::Scaled(a), &eig)?;
                b.csv(&format!("spectrum-{k}.csv"), &s)?;
                b.op("support_endpoints", json!({ "a": format_complex(a) }));
                let ends = PointSet::new("endpoints", support_endpoints(a).to_vec()).sorted();
                b.csv(&format!("endpoints-{k}.csv"), &ends)?;
                b.op("support_topology", json!({ "a": format_complex(a), "n_probe": n }));
                let topo = match classify_cloud(&s.points, &TopologyOptions::default()) {
                    Ok(r) => json!({
                        "topology": r.topology,
                        "endpoints": r.endpoints,
                        "junctions": r.junctions,
                        "max_turn_deg": r.max_turn_deg,
                    }),
                    Err(e) => json!({ "error": e.to_string() }),
                };
                report.push(json!({ "index": k, "a": format_complex(a), "classification": topo }));
            }
            b.json("summary.json", &report)?;
        }
        Figure::Triangle10 => {
            let n = cfg.n_or(10);
            b.op("sigma_points", json!({ "n": n }));
            let set = sigma_points(n, DEFAULT_SIGMA_CAP.max(n), Some(cache))?;
            b.csv("sigma.csv", &set.points)?;
            let grid: Vec<_> = match &set.grid_index {
                Some(g) => g
                    .iter()
                    .zip(&set.points.points)
                    .map(|(idx, z)| json!({ "i": idx.i, "j": idx.j, "sigma": format_complex(*z) }))
                    .collect(),
                None => Vec::new(),
            };
            b.json("grid.json", &json!({ "n": n, "count": set.points.len(), "points": grid }))?;
        }
        Figure::FigSlopes => {
            let n = cfg.n_or(8);
            let params: Vec<Complex64> = cfg.a.map_or_else(
                || [4.0 * PI / 5.0, 6.0 * PI / 5.0].map(|phi| Complex64::from_polar(500.0, phi)).to_vec(),
                |a| vec![a],
            );
            let mut report = Vec::new();
            for (k, a) in params.into_iter().enumerate() {
                b.op("kac_limit_check", json!({ "n": n, "a": format_complex(a) }));
                let r = kac_limit_check(n, a)?;
                b.csv(&format!("normalized-{k}.csv"), &PointSet::new("normalized", r.normalized.clone()))?;
                report.push(json!({ "index": k, "a": format_complex(a), "max_deviation": r.max_deviation }));
            }
            b.json("summary.json", &report)?;
        }
        Figure::Lattice => {
            let n = cfg.n_or(34);
            let window = Window { re_min: -4.0, re_max: 4.0, im_min: -4.0, im_max: 4.0 };
            b.op("lattice_probe", json!({ "n": n, "window": window }));
            let probe = lattice_probe(n, window, DEFAULT_SIGMA_CAP.max(n + 3), Some(cache))?;
            let here = PointSet::new("sigma-n", probe.pairs.iter().map(|p| p.0).collect());
            let there = PointSet::new("sigma-n+3", probe.pairs.iter().map(|p| p.1).collect());
            b.csv("sigma-n.csv", &here)?;
            b.csv("sigma-n3.csv", &there)?;
            b.json(
                "summary.json",
                &json!({
                    "n": n,
                    "pairs": probe.pairs.len(),
                    "spacing": probe.spacing,
                    "max_drift": probe.max_drift(),
                }),
            )?;
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!(matches!("fig2".parse::<Figure>(), Err(Error::UnknownFigure(_))));
    }

    fn snapshot(manifest: &std::path::Path) -> Vec<(std::path::PathBuf, Vec<u8>)> {
        let mut v: Vec<_> = std::fs::read_dir(manifest.parent().unwrap())
            .unwrap()
            .map(|e| {
                let p = e.unwrap().path();
                let bytes = std::fs::read(&p).unwrap();
                (p, bytes)
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn small_figures_are_deterministic() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            n: Some(12),
            grid: 20,
            out: tmp.path().join("out"),
            cache_dir: tmp.path().join("cache"),
            ..RunConfig::default()
        };
        let cache = Cache::new(&cfg.cache_dir);
        for f in [Figure::Fig1, Figure::FigAtau, Figure::Triangle10, Figure::FigSlopes] {
            let first = snapshot(&run_figure(f, &cfg, &cache).unwrap());
            let second = snapshot(&run_figure(f, &cfg, &cache).unwrap());
            assert!(first.len() >= 2);
            assert_eq!(first, second, "{f}");
        }
    }
}
