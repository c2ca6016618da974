//! Verification suites: exact algebra, asymptotics and monodromy.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::bkw::{
    branch_cubic, branch_points, cauchy_nu, dsc_exact, endpoint_cubic, support_endpoints, union_support, uniform_tau_grid,
    CauchyOptions, SupportOptions,
};
use crate::branching::{compare_sets, scaled_sigma, sigma_degree, sigma_points, sigma_polynomial, DEFAULT_SIGMA_CAP};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::exactpoly::IntPoly;
use crate::monodromy::{
    compose_word, default_base, kac_matrix_check, monodromy_table_for, track_path, APath, Bump, MonodromyTable,
    PathOptions, Permutation, TrackOptions, TranspositionRule,
};
use crate::quaddiff::{classify_cloud, Topology, TopologyOptions};
use crate::spectral::{empirical_cauchy, scaled_spectrum, spectral_polynomial, ARule, EigenOptions, SpectralMatrix};
use crate::yv::{painleve_residuals, scaled_zeros, yv, yv_degree, yv_generate, yv_zeros};
use crate::zcase::certify_range;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Exact,
    Asymptotic,
    Monodromy,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Exact => "exact",
            Suite::Asymptotic => "asymptotic",
            Suite::Monodromy => "monodromy",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Exact, Suite::Asymptotic, Suite::Monodromy, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub pass: bool,
    pub checks: Vec<Outcome>,
}

/// Sizes used by the suites; `None` selects the defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteSizes {
    /// Largest `n` certified by the exact suite.
    pub exact_n: Option<usize>,
    /// Size of the spectra probed by the asymptotic suite.
    pub probe_n: Option<usize>,
    /// Largest `n` whose standard paths are tracked.
    pub monodromy_n: Option<usize>,
}

struct Log {
    suite: &'static str,
    checks: Vec<Outcome>,
}

impl Log {
    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Outcome { suite: self.suite.into(), name: name.into(), pass, detail: detail.into() });
    }

    fn push_result(&mut self, name: &str, r: Result<(bool, String)>) {
        match r {
            Ok((pass, detail)) => self.push(name, pass, detail),
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }
}

/// `det(M)` by Gaussian elimination over `ℚ`.
fn det_rational(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::from(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| m[r][col] != 0) else {
            return Rational::new();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let f = Rational::from(&m[r][col] / &pivot);
            for c in col..n {
                let t = Rational::from(&f * &m[col][c]);
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Twenty fixed rationals with mixed signs and denominators.
fn sample_rationals() -> Vec<Rational> {
    (1..=20i64).map(|k| Rational::from(((k * k * 7) % 23 - 11, (k * 5) % 13 + 1))).collect()
}

fn exact_suite(n_max: usize, log: &mut Log) {
    log.push_result(
        "z3-certificate",
        certify_range(n_max, false).map(|certs| {
            let failed: Vec<usize> = certs.iter().filter(|c| !c.pass()).map(|c| c.n).collect();
            let checks: usize = certs.iter().map(|c| c.checks.len()).sum();
            (failed.is_empty(), format!("n ≤ {n_max}: {checks} exact checks, failing n = {failed:?}"))
        }),
    );

    let mut mismatches = Vec::new();
    for n in 1..=12 {
        for a in sample_rationals() {
            let sp = spectral_polynomial(n, &a);
            for k in 0..(n + 2) as i64 {
                let lambda = Rational::from((k * 3 - 7, 2));
                let mut m = SpectralMatrix::exact(n, &a);
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] -= &lambda;
                }
                if sp.eval(&lambda) != det_rational(m) {
                    mismatches.push((n, a.to_string()));
                }
            }
        }
    }
    log.push(
        "recurrence-equals-determinant",
        mismatches.is_empty(),
        format!("n ≤ 12, 20 rational a, n + 2 rational λ each; mismatches {mismatches:?}"),
    );

    log.push_result(
        "yv-divisibility-and-degree",
        yv_generate(40).map(|seq| {
            let bad: Vec<usize> =
                (0..seq.len()).filter(|&n| seq.get(n).and_then(|p| p.degree()) != Some(yv_degree(n))).collect();
            (bad.is_empty(), format!("exact divisions through n = 40; degree mismatches at {bad:?}"))
        }),
    );

    log.push_result(
        "yv-small-cases",
        yv(2).and_then(|yv2| Ok((yv2, yv(3)?))).map(|(yv2, yv3)| {
            let ok = yv2 == IntPoly::from_i64s(&[4, 0, 0, 1]).with_var(yv2.var())
                && yv3 == IntPoly::from_i64s(&[-80, 0, 0, 20, 0, 0, 1]).with_var(yv3.var());
            (ok, format!("YV_2 = {yv2}, YV_3 = {yv3}"))
        }),
    );

    let sigma_n = n_max.min(10);
    log.push_result(
        "sigma-degree",
        (2..=sigma_n)
            .map(|n| sigma_polynomial(n, DEFAULT_SIGMA_CAP).map(|p| (n, p.degree())))
            .collect::<Result<Vec<_>>>()
            .map(|v| {
                let bad: Vec<_> = v.iter().filter(|(n, d)| *d != Some(sigma_degree(*n))).collect();
                (bad.is_empty(), format!("2 ≤ n ≤ {sigma_n}; mismatches {bad:?}"))
            }),
    );

    log.push_result(
        "sigma-2",
        sigma_points(2, DEFAULT_SIGMA_CAP, None).map(|s| {
            let r = 3.0 * 2f64.powf(-4.0 / 3.0);
            let worst = (0..3)
                .map(|k| {
                    let w = Complex64::from_polar(r, 2.0 * PI * k as f64 / 3.0);
                    s.points.points.iter().map(|z| (z - w).norm()).fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max);
            (s.points.len() == 3 && worst < 1e-10, format!("distance to 3·2^(-4/3)·ω^k at most {worst:.2e}"))
        }),
    );

    let same = branch_cubic(&Rational::from((1, 2))).to_bivariate() == endpoint_cubic().to_bivariate();
    log.push("endpoints-equal-branch-points", same, "branch cubic at τ = 1/2 against the endpoint cubic, exact");
    let d = dsc_exact(&Rational::from((27, 4)), &Rational::from((1, 2)));
    log.push("dsc-vanishes", d == 0, format!("Dsc at a³ = 27/4, τ = 1/2 equals {d}"));
}

fn asymptotic_suite(n_probe: usize, log: &mut Log) {
    let eig = EigenOptions::default();
    let zero = Complex64::new(0.0, 0.0);

    let sizes = [n_probe / 4, n_probe / 2, n_probe];
    log.push_result(
        "max-modulus-trend",
        sizes
            .iter()
            .map(|&n| scaled_spectrum(n, ARule::Constant(zero), &eig).map(|s| (s.max_modulus() - 0.75).abs()))
            .collect::<Result<Vec<f64>>>()
            .map(|e| {
                let ok = e[2] < 0.075 && e[2] < e[1] && e[1] < e[0];
                (ok, format!("|max − 3/4| at n = {sizes:?}: {e:.4?}"))
            }),
    );

    log.push_result(
        "cauchy-consistency",
        scaled_spectrum(n_probe, ARule::Constant(zero), &eig).and_then(|s| {
            let mut worst: f64 = 0.0;
            for k in 0..10 {
                let beta = Complex64::from_polar(2.0, 2.0 * PI * k as f64 / 10.0 + 0.1);
                let d = (cauchy_nu(beta, zero, &CauchyOptions::default())? - empirical_cauchy(&s, beta, 1e-12)?).norm();
                worst = worst.max(d);
            }
            Ok((worst < 1e-2, format!("10 points on |β| = 2, n = {n_probe}: worst difference {worst:.2e}")))
        }),
    );

    let worst = support_endpoints(zero)
        .iter()
        .map(|z| (0..3).map(|k| (z - Complex64::from_polar(0.75, 2.0 * PI * k as f64 / 3.0)).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    log.push("endpoints-at-zero", worst < 1e-12, format!("distance to (3/4)ω^k at most {worst:.2e}"));

    for a in [1.9, 2.5, 3.0] {
        let ac = Complex64::new(a, 0.0);
        let taus: Vec<f64> = (0..1000).map(|k| k as f64 / 999.0).collect();
        let complex = taus.iter().filter(|&&t| branch_points(ac, t).iter().any(|z| z.im != 0.0)).count();
        let sup = union_support(ac, &uniform_tau_grid(400), &[], &SupportOptions::default());
        let mut ends: Vec<f64> = support_endpoints(ac).iter().map(|z| z.re).collect();
        ends.sort_by(f64::total_cmp);
        let (ok, detail) = match sup.real_interval(1e-9) {
            Some((lo, hi)) => {
                let err = (lo - ends[1]).abs().max((hi - ends[2]).abs());
                (complex == 0 && err < 1e-6, format!("{complex} complex branch points; interval [{lo:.8}, {hi:.8}], endpoint error {err:.2e}"))
            }
            None => (false, format!("{complex} complex branch points; union support is not a real interval")),
        };
        log.push(&format!("real-support-a={a}"), ok, detail);
    }

    let mut worst: f64 = 0.0;
    let mut used = 0;
    for n in 1..=10 {
        for i in -5..=5 {
            for j in -5..=5 {
                let t = Complex64::new(i as f64 + 0.25, j as f64 + 0.35);
                if let Ok(r) = painleve_residuals(n, &[t]) {
                    worst = worst.max(r[0]);
                    used += 1;
                }
            }
        }
    }
    log.push("painleve-residual", worst < 1e-6, format!("{used} samples, n ≤ 10: worst residual {worst:.2e}"));

    log.push_result(
        "yv-growth",
        yv_zeros(40, 60).map(|z| {
            let ratio = z.max_modulus() / 40f64.powf(2.0 / 3.0);
            let target = 4.5f64.powf(2.0 / 3.0);
            let rel = (ratio - target).abs() / target;
            (rel < 0.1, format!("max|Z_40|/40^(2/3) = {ratio:.4} against (9/2)^(2/3) = {target:.4}, off by {:.1}%", 100.0 * rel))
        }),
    );

    log.push_result(
        "sigma-zeros-trend",
        [10, 20]
            .iter()
            .map(|&n| Ok(compare_sets(&scaled_sigma(n, DEFAULT_SIGMA_CAP, None)?, &scaled_zeros(n, 60)?)))
            .collect::<Result<Vec<_>>>()
            .map(|c| {
                let ok = c.iter().all(|x| x.len_a == x.len_b) && c[1].mean_nn < c[0].mean_nn;
                (ok, format!("mean NN distance {:.4} at n = 10, {:.4} at n = 20", c[0].mean_nn, c[1].mean_nn))
            }),
    );

    let cases = [
        (Complex64::new(0.5, -0.5), Topology::ThreeLegs),
        (Complex64::new(2.0 / 3.0, -1.0), Topology::OneArc),
        (Complex64::new(0.8, -2.0 / 3.0), Topology::Singular),
    ];
    for (a, want) in cases {
        log.push_result(
            &format!("topology-{want}"),
            scaled_spectrum(n_probe, ARule::Scaled(a), &eig)
                .and_then(|s| classify_cloud(&s.points, &TopologyOptions::default()))
                .map(|r| (r.topology == want, match r.max_turn_deg {
                    Some(t) => format!("a = {a}: {} (largest turn {t:.1}°)", r.topology),
                    None => format!("a = {a}: {} ({} endpoints, {} junction)", r.topology, r.endpoints, r.junctions),
                })),
        );
    }
}

fn same_permutations(a: &MonodromyTable, b: &MonodromyTable) -> bool {
    a.entries.len() == b.entries.len()
        && a.entries.iter().zip(&b.entries).all(|(x, y)| x.index == y.index && x.permutation == y.permutation)
}

fn monodromy_suite(n_max: usize, cache: &Cache, log: &mut Log) {
    log.push_result(
        "kac-spectrum",
        kac_matrix_check(8, Complex64::new(1.0, 0.0))
            .map(|r| (r.max_deviation < 1e-10, format!("n = 8, a = 1: deviation from −1 + k/4 is {:.2e}", r.max_deviation))),
    );

    log.push_result(
        "big-circle-reversal",
        track_path(8, &APath::circle(500.0), &TrackOptions::default()).map(|r| {
            (r.permutation == Permutation::reversal(9), format!("n = 8, |a| = 500: {}", r.permutation))
        }),
    );

    let mut adjacent = Vec::new();
    let mut column = Vec::new();
    let mut mirrored = Vec::new();
    let mut doubling = Vec::new();
    let mut deformation = Vec::new();
    let mut word = Vec::new();
    let mut errors = Vec::new();
    for n in 2..=n_max {
        let mut run = || -> Result<()> {
            let set = sigma_points(n, DEFAULT_SIGMA_CAP, Some(cache))?;
            let base = default_base(&set);
            let track = TrackOptions::default();
            let t = monodromy_table_for(&set, base, &PathOptions::default(), &track)?;
            let t2 = monodromy_table_for(&set, base, &PathOptions::default(), &TrackOptions { steps: 2 * track.steps, ..track })?;
            let deformed = PathOptions { bump: Bump::Down, radius_factor: 0.15, ..PathOptions::default() };
            let t3 = monodromy_table_for(&set, base, &deformed, &track)?;
            if t.entries.iter().any(|e| e.permutation.as_adjacent_transposition().is_none()) {
                adjacent.push(n);
            }
            column.push((n, t.exceptions(TranspositionRule::Column).len()));
            if !t.exceptions(TranspositionRule::MirroredColumn).is_empty() {
                mirrored.push(n);
            }
            if !same_permutations(&t, &t2) {
                doubling.push(n);
            }
            if !same_permutations(&t, &t3) {
                deformation.push(n);
            }
            if compose_word(n + 1, t.big_circle_word()) != Permutation::reversal(n + 1) {
                word.push(n);
            }
            Ok(())
        };
        if let Err(e) = run() {
            errors.push(format!("n = {n}: {e}"));
        }
    }
    let ok = errors.is_empty();
    let range = format!("2 ≤ n ≤ {n_max}");
    log.push("standard-paths-adjacent", ok && adjacent.is_empty(), format!("{range}; non-adjacent at {adjacent:?}; {errors:?}"));
    let total: usize = column.iter().map(|c| c.1).sum();
    log.push(
        "transposition-(j,j+1)",
        ok && total == 0,
        format!("{range}; entries contradicting (j, j+1) per n: {column:?}"),
    );
    log.push(
        "transposition-(n+1-j,n+2-j)",
        ok && mirrored.is_empty(),
        format!("{range}; exceptions at {mirrored:?}"),
    );
    log.push("step-doubling", ok && doubling.is_empty(), format!("{range}; changed at {doubling:?}"));
    log.push("path-deformation", ok && deformation.is_empty(), format!("{range}; changed at {deformation:?}"));
    log.push("loop-word-is-reversal", ok && word.is_empty(), format!("{range}; failed at {word:?}"));
}

/// Runs one suite, or all three.
pub fn run_suite(suite: Suite, sizes: SuiteSizes, cache: &Cache) -> Report {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Exact | Suite::All) {
        let mut log = Log { suite: "exact", checks: Vec::new() };
        exact_suite(sizes.exact_n.unwrap_or(60), &mut log);
        checks.extend(log.checks);
    }
    if matches!(suite, Suite::Asymptotic | Suite::All) {
        let mut log = Log { suite: "asymptotic", checks: Vec::new() };
        asymptotic_suite(sizes.probe_n.unwrap_or(200), &mut log);
        checks.extend(log.checks);
    }
    if matches!(suite, Suite::Monodromy | Suite::All) {
        let mut log = Log { suite: "monodromy", checks: Vec::new() };
        monodromy_suite(sizes.monodromy_n.unwrap_or(6), cache, &mut log);
        checks.extend(log.checks);
    }
    Report { suite, pass: checks.iter().all(|c| c.pass), checks }
}
