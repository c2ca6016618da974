//! The branching set `Σ_n`: values of `a` at which `Sp_n(a, ·)` has a
//! multiple root, as the zero locus of the `λ`-discriminant.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::exactpoly::{resultant_with_degree_bound, Eliminate, IntPoly, Var};
use crate::numeric::{aberth, assign, poly};
use crate::pointset::PointSet;
use crate::spectral::spectral_polynomial_symbolic;
use crate::yv::relative_residual;

/// Largest `n` accepted by [`sigma_polynomial`] by default.
pub const DEFAULT_SIGMA_CAP: usize = 40;

/// Cache kind for discriminant polynomials.
pub const SIGMA_KIND: &str = "sigma_poly";

/// `n(n+1)/2`
pub fn sigma_degree(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `res_λ(Sp_n, ∂Sp_n/∂λ)` with its content removed and a positive leading
/// coefficient.
pub fn sigma_polynomial(n: usize, cap: usize) -> Result<IntPoly> {
    if n == 0 || n > cap {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..={cap}")));
    }
    let sp = spectral_polynomial_symbolic(n);
    let expected = sigma_degree(n);
    let r = resultant_with_degree_bound(&sp, &sp.derivative_main(), Eliminate::Main, Some(expected))?;
    let p = r.primitive_part().with_var(Var::A);
    match p.degree() {
        Some(d) if d == expected => Ok(p),
        d => Err(Error::DegreeMismatch { expected, got: d.unwrap_or(0) }),
    }
}

/// [`sigma_polynomial`] through the disk cache.
pub fn sigma_polynomial_cached(n: usize, cap: usize, cache: Option<&Cache>) -> Result<IntPoly> {
    match cache {
        Some(c) => c.get_or_insert_with(SIGMA_KIND, n, || sigma_polynomial(n, cap)),
        None => sigma_polynomial(n, cap),
    }
}

/// Row and column of a branching point in the triangular layout.
///
/// Columns run left to right, `j = 1..=n`, column `j` holding `n − j + 1`
/// points. Rows run bottom to top, `i = 1..=2n−1`; column `j` occupies rows
/// `j, j+2, …, 2n−j`, so real points sit in the middle row `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridIndex {
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchSet {
    pub n: usize,
    pub disc_poly: IntPoly,
    pub points: PointSet,
    /// One index per point, in the order of `points`, when the layout could
    /// be recovered.
    pub grid_index: Option<Vec<GridIndex>>,
}

impl BranchSet {
    /// The point with the given grid index.
    pub fn point(&self, idx: GridIndex) -> Option<Complex64> {
        let g = self.grid_index.as_ref()?;
        g.iter().position(|&x| x == idx).map(|k| self.points.points[k])
    }

    /// Distance from `z` to the nearest other point of the set.
    pub fn nearest_other(&self, z: Complex64) -> f64 {
        self.points
            .points
            .iter()
            .map(|p| (p - z).norm())
            .filter(|&d| d > 1e-12 * (1.0 + z.norm()))
            .fold(f64::INFINITY, f64::min)
    }

    /// Pairs of non-real points whose imaginary parts agree to `tol`.
    pub fn imaginary_part_collisions(&self, tol: f64) -> Vec<(Complex64, Complex64)> {
        let pts: Vec<Complex64> = self.points.points.iter().copied().filter(|z| z.im.abs() > tol).collect();
        let mut out = Vec::new();
        for (k, a) in pts.iter().enumerate() {
            for b in &pts[k + 1..] {
                if (a.im - b.im).abs() <= tol {
                    out.push((*a, *b));
                }
            }
        }
        out
    }
}

/// Splits sorted values into `k` groups at the `k − 1` largest gaps and
/// returns the group of each input value.
fn cluster_1d(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut gaps: Vec<(f64, usize)> = order.windows(2).enumerate().map(|(p, w)| (values[w[1]] - values[w[0]], p)).collect();
    gaps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut cuts: Vec<usize> = gaps.iter().take(k.saturating_sub(1)).map(|g| g.1).collect();
    cuts.sort_unstable();
    let mut group = vec![0; values.len()];
    let mut g = 0;
    for (p, &idx) in order.iter().enumerate() {
        group[idx] = g;
        if cuts.binary_search(&p).is_ok() {
            g += 1;
        }
    }
    group
}

/// Recovers the triangular layout of `Σ_n`.
pub fn grid_indices(points: &[Complex64], n: usize) -> Result<Vec<GridIndex>> {
    if points.len() != sigma_degree(n) {
        return Err(Error::IndexingAmbiguity(format!("{} points for n = {n}", points.len())));
    }
    let re: Vec<f64> = points.iter().map(|z| z.re).collect();
    let col = cluster_1d(&re, n);
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &c) in col.iter().enumerate() {
        columns[c].push(k);
    }
    let mut out = vec![GridIndex { i: 0, j: 0 }; points.len()];
    for (c, members) in columns.iter_mut().enumerate() {
        let j = c + 1;
        if members.len() != n - j + 1 {
            let sizes: Vec<usize> = (0..n).map(|c| col.iter().filter(|&&x| x == c).count()).collect();
            return Err(Error::IndexingAmbiguity(format!("column sizes {sizes:?}")));
        }
        members.sort_by(|&a, &b| points[a].im.total_cmp(&points[b].im));
        for (r, &k) in members.iter().enumerate() {
            out[k] = GridIndex { i: j + 2 * r, j };
        }
    }
    Ok(out)
}

/// Numerical roots of the discriminant with their grid layout.
pub fn sigma_points(n: usize, cap: usize, cache: Option<&Cache>) -> Result<BranchSet> {
    let disc_poly = sigma_polynomial_cached(n, cap, cache)?;
    let roots = aberth::integer_poly_roots(disc_poly.coeffs(), 64 + disc_poly.max_bits() / 4, 45)?;
    let worst = roots.par_iter().map(|&z| relative_residual(&disc_poly, z)).reduce(|| 0.0, f64::max);
    if !(worst < 1e-10) {
        return Err(Error::NonConvergence { index: n, worst });
    }
    let points = PointSet::new("sigma", roots).with_meta("n", n).with_meta("scaling", "none").sorted();
    let grid_index = grid_indices(&points.points, n).ok();
    Ok(BranchSet { n, disc_poly, points, grid_index })
}

/// `(27/4)^{1/3} n^{2/3}`, equal to `3/∛4 · n^{2/3}`.
pub fn sigma_scale(n: usize) -> f64 {
    (6.75f64).cbrt() * (n as f64).powf(2.0 / 3.0)
}

/// `Σ_n / ((27/4)^{1/3} n^{2/3})`
pub fn scaled_sigma(n: usize, cap: usize, cache: Option<&Cache>) -> Result<PointSet> {
    let mut ps = sigma_points(n, cap, cache)?.points.scaled(sigma_scale(n));
    ps.label = "scaled-sigma".into();
    ps.meta.insert("scaling".into(), "(27/4)^(1/3) n^(2/3)".into());
    Ok(ps)
}

/// Distances between two point sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetComparison {
    pub len_a: usize,
    pub len_b: usize,
    pub hausdorff: f64,
    /// Mean over both sets of the distance to the nearest point of the other.
    pub mean_nn: f64,
    /// Total cost of the optimal one-to-one matching, for equal sizes.
    pub assignment_cost: Option<f64>,
}

fn nn_distances(a: &[Complex64], b: &[Complex64]) -> Vec<f64> {
    a.par_iter().map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).collect()
}

pub fn compare_sets(a: &PointSet, b: &PointSet) -> SetComparison {
    let ab = nn_distances(&a.points, &b.points);
    let ba = nn_distances(&b.points, &a.points);
    let hausdorff = ab.iter().chain(&ba).copied().fold(0.0, f64::max);
    let total = ab.len() + ba.len();
    let mean_nn = if total == 0 { 0.0 } else { ab.iter().chain(&ba).sum::<f64>() / total as f64 };
    let assignment_cost = (a.len() == b.len()).then(|| {
        let cost: Vec<Vec<f64>> = a.points.iter().map(|x| b.points.iter().map(|y| (x - y).norm()).collect()).collect();
        assign::min_cost_assignment(&cost).iter().enumerate().map(|(i, &j)| cost[i][j]).sum()
    });
    SetComparison { len_a: a.len(), len_b: b.len(), hausdorff, mean_nn, assignment_cost }
}

/// Axis-aligned rectangle in the `a`-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn contains(&self, z: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeProbe {
    pub n: usize,
    /// `(σ ∈ Σ_n, nearest point of Σ_{n+3}, distance)` for `σ` in the window.
    pub pairs: Vec<(Complex64, Complex64, f64)>,
    /// Median nearest-neighbour distance within `Σ_n ∩ window`.
    pub spacing: f64,
}

impl LatticeProbe {
    pub fn max_drift(&self) -> f64 {
        self.pairs.iter().map(|p| p.2).fold(0.0, f64::max)
    }
}

/// Matches the unscaled points of `Σ_n` in `window` to their nearest
/// neighbours in `Σ_{n+3}`.
pub fn lattice_probe(n: usize, window: Window, cap: usize, cache: Option<&Cache>) -> Result<LatticeProbe> {
    let a = sigma_points(n, cap, cache)?;
    let b = sigma_points(n + 3, cap.max(n + 3), cache)?;
    let inside: Vec<Complex64> = a.points.points.iter().copied().filter(|z| window.contains(*z)).collect();
    let pairs: Vec<(Complex64, Complex64, f64)> = inside
        .iter()
        .filter_map(|&z| {
            b.points
                .points
                .iter()
                .map(|&w| (w, (w - z).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .map(|(w, d)| (z, w, d))
        })
        .collect();
    let mut nn: Vec<f64> = inside
        .iter()
        .map(|z| inside.iter().map(|w| (w - z).norm()).filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min))
        .filter(|d| d.is_finite())
        .collect();
    nn.sort_by(f64::total_cmp);
    let spacing = if nn.is_empty() { f64::NAN } else { nn[nn.len() / 2] };
    Ok(LatticeProbe { n, pairs, spacing })
}

/// Coefficients in `λ` of `Sp_n(a, λ)` at a complex `a`.
pub fn spectral_coefficients(n: usize, a: Complex64) -> Vec<Complex64> {
    spectral_polynomial_symbolic(n)
        .rows()
        .iter()
        .map(|row| row.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * a + c.to_f64()))
        .collect()
}

/// Smallest distance between two roots of `Sp_n(σ, ·)`, the witness that `σ`
/// is a branching point.
pub fn multiple_root_gap(n: usize, sigma: Complex64) -> f64 {
    let r = poly::roots(&spectral_coefficients(n, sigma));
    let mut gap = f64::INFINITY;
    for (k, x) in r.iter().enumerate() {
        for y in &r[k + 1..] {
            gap = gap.min((x - y).norm());
        }
    }
    gap
}
