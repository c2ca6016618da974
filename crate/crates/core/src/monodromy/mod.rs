//! Eigenvalue monodromy along closed loops in the parameter plane.

mod path;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branching::{sigma_points, BranchSet, GridIndex, DEFAULT_SIGMA_CAP};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::numeric::{assign, eigen};
use crate::spectral::build_matrix;

pub use path::{default_base, median_spacing, standard_path, APath, Bump, PathOptions, Segment};

/// A permutation of `{0, …, m−1}` stored in one-line form: `map[k]` is the
/// final position of the entry that started at position `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    /// The transposition of positions `j` and `j+1`, one-based.
    pub fn adjacent(m: usize, j: usize) -> Self {
        let mut p = Self::identity(m);
        p.0.swap(j - 1, j);
        p
    }

    pub fn reversal(m: usize) -> Self {
        Self((0..m).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.len()];
        self.0.iter().all(|&k| k < seen.len() && !std::mem::replace(&mut seen[k], true))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&k| next.0[k]).collect())
    }

    /// The single transposition `(j, j+1)` this permutation equals, one-based.
    pub fn as_adjacent_transposition(&self) -> Option<usize> {
        (1..self.len()).find(|&j| *self == Self::adjacent(self.len(), j))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Composes the permutations of a word of loops traversed left to right.
pub fn compose_word<'a>(m: usize, word: impl IntoIterator<Item = &'a Permutation>) -> Permutation {
    word.into_iter().fold(Permutation::identity(m), |acc, p| acc.then(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackOptions {
    /// Initial and largest step is `1/steps`.
    pub steps: usize,
    /// A step is accepted when no eigenvalue moves more than this fraction
    /// of the smallest gap in the current frame.
    pub motion_factor: f64,
    pub min_step: f64,
    /// Keep every frame in the result.
    pub keep_frames: bool,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self { steps: 400, motion_factor: 0.3, min_step: 1e-9, keep_frames: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    pub permutation: Permutation,
    /// Smallest distance between two eigenvalues met along the path.
    pub min_gap: f64,
    /// Eigenvalues at the base point sorted by real part.
    pub start: Vec<Complex64>,
    /// Tracked eigenvalues at the end, in starting order.
    pub end: Vec<Complex64>,
    pub accepted_steps: usize,
    /// `(t, eigenvalues)` in starting order, when requested.
    pub frames: Vec<(f64, Vec<Complex64>)>,
}

impl MonodromyResult {
    /// Largest distance between the sorted start and end eigenvalues.
    pub fn closure_error(&self) -> f64 {
        let mut end = self.end.clone();
        end.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        self.start.iter().zip(&end).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

fn spectrum(n: usize, a: Complex64) -> Result<Vec<Complex64>> {
    eigen::eigenvalues(&build_matrix(n, a)?.dense())
}

fn min_gap(v: &[Complex64]) -> f64 {
    let mut g = f64::INFINITY;
    for (i, x) in v.iter().enumerate() {
        for y in &v[i + 1..] {
            g = g.min((x - y).norm());
        }
    }
    g
}

fn sort_by_re(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Follows the eigenvalues of `M_n^{(a(t))}` around the path and returns
/// the permutation of the base-point spectrum sorted by real part.
pub fn track_path(n: usize, path: &APath, opts: &TrackOptions) -> Result<MonodromyResult> {
    let mut start = spectrum(n, path.at(0.0))?;
    sort_by_re(&mut start);
    let m = start.len();
    let h_max = 1.0 / opts.steps.max(1) as f64;
    let mut cur = start.clone();
    let mut t = 0.0;
    let mut h = h_max;
    let mut gap_min = min_gap(&cur);
    let mut accepted = 0;
    let mut frames = Vec::new();
    if opts.keep_frames {
        frames.push((0.0, cur.clone()));
    }
    while t < 1.0 {
        let step = h.min(1.0 - t);
        let cand = spectrum(n, path.at(t + step))?;
        let cost: Vec<Vec<f64>> = cur.iter().map(|x| cand.iter().map(|y| (x - y).norm()).collect()).collect();
        let assignment = assign::min_cost_assignment(&cost);
        let motion = (0..m).map(|k| cost[k][assignment[k]]).fold(0.0, f64::max);
        let gap = min_gap(&cur);
        if motion > opts.motion_factor * gap {
            h = step * 0.5;
            if h < opts.min_step {
                return Err(Error::CollisionUnresolved { t });
            }
            continue;
        }
        cur = assignment.iter().map(|&l| cand[l]).collect();
        t += step;
        accepted += 1;
        gap_min = gap_min.min(gap).min(min_gap(&cur));
        if opts.keep_frames {
            frames.push((t, cur.clone()));
        }
        h = (step * 2.0).min(h_max);
    }
    let mut positions = Vec::with_capacity(m);
    for z in &cur {
        let k = (0..m).min_by(|&i, &j| (start[i] - z).norm().total_cmp(&(start[j] - z).norm())).unwrap();
        positions.push(k);
    }
    let permutation = Permutation(positions);
    if !permutation.is_bijection() {
        return Err(Error::CollisionUnresolved { t: 1.0 });
    }
    Ok(MonodromyResult { permutation, min_gap: gap_min, start, end: cur, accepted_steps: accepted, frames })
}

/// [`track_path`] repeated with doubled step counts until two consecutive
/// runs give the same permutation.
pub fn track_path_checked(n: usize, path: &APath, opts: &TrackOptions) -> Result<MonodromyResult> {
    let mut o = *opts;
    let mut prev = track_path(n, path, &o)?;
    for _ in 0..4 {
        o.steps *= 2;
        let next = track_path(n, path, &o)?;
        if next.permutation == prev.permutation {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::CollisionUnresolved { t: f64::NAN })
}

/// The tridiagonal matrix approximating `M_n^{(a)}/n` for large `|a|`: zero
/// diagonal, sub-diagonal `(n−j)/n` and super-diagonal `(i+1)a/n`.
pub fn kac_matrix(n: usize, a: Complex64) -> DMatrix<Complex64> {
    let s = n + 1;
    let nf = n as f64;
    DMatrix::from_fn(s, s, |i, j| {
        if i == j + 1 {
            Complex64::new((n - j) as f64 / nf, 0.0)
        } else if j == i + 1 {
            a * ((i + 1) as f64 / nf)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `−1 + 2k/n` for `k = 0..=n`.
pub fn kac_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|k| -1.0 + 2.0 * k as f64 / n as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KacReport {
    pub n: usize,
    pub a: Complex64,
    /// Eigenvalues of `M_n^{(a)}` divided by `n√a`, ordered along the segment.
    pub normalized: Vec<Complex64>,
    /// Largest distance to the equispaced grid on `[−1, 1]`.
    pub max_deviation: f64,
}

fn deviation_from_grid(n: usize, mut v: Vec<Complex64>) -> (Vec<Complex64>, f64) {
    sort_by_re(&mut v);
    let dev = v.iter().zip(kac_grid(n)).map(|(z, g)| (z - g).norm()).fold(0.0, f64::max);
    (v, dev)
}

/// Compares the spectrum of `M_n^{(a)}`, divided by `n√a`, with the
/// equispaced grid on `[−1, 1]`.
pub fn kac_limit_check(n: usize, a: Complex64) -> Result<KacReport> {
    if a.norm() == 0.0 {
        return Err(Error::InvalidInput("a must be nonzero".into()));
    }
    let s = n as f64 * a.sqrt();
    let v: Vec<Complex64> = spectrum(n, a)?.iter().map(|z| z / s).collect();
    let (normalized, max_deviation) = deviation_from_grid(n, v);
    Ok(KacReport { n, a, normalized, max_deviation })
}

/// Deviation of the spectrum of [`kac_matrix`] divided by `√a` from the grid.
pub fn kac_matrix_check(n: usize, a: Complex64) -> Result<KacReport> {
    let s = a.sqrt();
    let v: Vec<Complex64> = eigen::eigenvalues(&kac_matrix(n, a))?.iter().map(|z| z / s).collect();
    let (normalized, max_deviation) = deviation_from_grid(n, v);
    Ok(KacReport { n, a, normalized, max_deviation })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub index: GridIndex,
    pub sigma: Complex64,
    pub permutation: Permutation,
    pub min_gap: f64,
    pub clearance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyTable {
    pub n: usize,
    pub base: f64,
    pub entries: Vec<TableEntry>,
}

/// Which adjacent transposition a loop around a point of column `j` is
/// compared with, for eigenvalues ordered by increasing real part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranspositionRule {
    /// `(j, j+1)`
    Column,
    /// `(n+1−j, n+2−j)`, the same rule with the eigenvalues ordered by
    /// decreasing real part.
    MirroredColumn,
}

impl TranspositionRule {
    pub fn expected(&self, n: usize, j: usize) -> usize {
        match self {
            TranspositionRule::Column => j,
            TranspositionRule::MirroredColumn => n + 1 - j,
        }
    }
}

impl MonodromyTable {
    /// Entries whose permutation is not the transposition the rule predicts.
    pub fn exceptions(&self, rule: TranspositionRule) -> Vec<&TableEntry> {
        self.entries
            .iter()
            .filter(|e| e.permutation.as_adjacent_transposition() != Some(rule.expected(self.n, e.index.j)))
            .collect()
    }

    /// Loops ordered so that traversing them in turn is homotopic to one
    /// counterclockwise turn around the whole branching set: decreasing
    /// imaginary part, real points from left to right.
    pub fn big_circle_word(&self) -> Vec<&Permutation> {
        let mut e: Vec<&TableEntry> = self.entries.iter().collect();
        e.sort_by(|x, y| y.sigma.im.total_cmp(&x.sigma.im).then(x.sigma.re.total_cmp(&y.sigma.re)));
        e.iter().map(|x| &x.permutation).collect()
    }

    pub fn by_index(&self) -> BTreeMap<GridIndex, &Permutation> {
        self.entries.iter().map(|e| (e.index, &e.permutation)).collect()
    }
}

/// Monodromy of every standard path of `Σ_n` based at `base`.
pub fn monodromy_table_for(
    set: &BranchSet,
    base: f64,
    path_opts: &PathOptions,
    track_opts: &TrackOptions,
) -> Result<MonodromyTable> {
    let grid = set
        .grid_index
        .clone()
        .ok_or_else(|| Error::IndexingAmbiguity(format!("no grid layout for n = {}", set.n)))?;
    let entries = grid
        .par_iter()
        .zip(set.points.points.par_iter())
        .map(|(&index, &sigma)| {
            let path = standard_path(set, index, base, path_opts)?;
            let r = track_path_checked(set.n, &path, track_opts)?;
            Ok(TableEntry { index, sigma, permutation: r.permutation, min_gap: r.min_gap, clearance: path.clearance.unwrap_or(0.0) })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = entries;
    entries.sort_by_key(|e| (e.index.j, e.index.i));
    Ok(MonodromyTable { n: set.n, base, entries })
}

/// [`monodromy_table_for`] with the default base point and options.
pub fn monodromy_table(n: usize, base: Option<f64>, cache: Option<&Cache>) -> Result<MonodromyTable> {
    let set = sigma_points(n, DEFAULT_SIGMA_CAP, cache)?;
    let base = base.unwrap_or_else(|| default_base(&set));
    monodromy_table_for(&set, base, &PathOptions::default(), &TrackOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn permutation_algebra() {
        let t = Permutation::adjacent(4, 2);
        assert_eq!(t.0, vec![0, 2, 1, 3]);
        assert_eq!(t.then(&t), Permutation::identity(4));
        assert_eq!(t.as_adjacent_transposition(), Some(2));
        assert_eq!(t.to_string(), "(1 3 2 4)");
        assert_eq!(compose_word(3, []), Permutation::identity(3));
        assert!(Permutation::reversal(5).is_bijection());
        assert!(!Permutation(vec![0, 0]).is_bijection());
        // (1 2) then (2 3) sends the first entry to position 3
        let p = Permutation::adjacent(3, 1).then(&Permutation::adjacent(3, 2));
        assert_eq!(p.0, vec![2, 0, 1]);
    }

    #[test]
    fn kac_spectrum_is_equispaced() {
        let r = kac_matrix_check(8, Complex64::new(1.0, 0.0)).unwrap();
        assert!(r.max_deviation < 1e-10, "{}", r.max_deviation);
        // weights 1 for λ and 2 for a
        let a = Complex64::new(0.7, 0.4);
        for t in [0.1, 0.37, 0.8] {
            let rot = Complex64::from_polar(1.0, PI * t);
            let mut x: Vec<Complex64> = eigen::eigenvalues(&kac_matrix(6, a * rot * rot)).unwrap();
            let mut y: Vec<Complex64> = eigen::eigenvalues(&kac_matrix(6, a)).unwrap().iter().map(|z| z * rot).collect();
            sort_by_re(&mut x);
            sort_by_re(&mut y);
            assert!(x.iter().zip(&y).all(|(p, q)| (p - q).norm() < 1e-10));
        }
    }

    #[test]
    fn large_parameter_spectrum_is_nearly_uniform() {
        for phi in [4.0 * PI / 5.0, 6.0 * PI / 5.0] {
            let r = kac_limit_check(8, Complex64::from_polar(500.0, phi)).unwrap();
            assert!(r.max_deviation < 0.05, "φ {phi} deviation {}", r.max_deviation);
        }
    }

    #[test]
    fn constant_path_is_identity() {
        let r = track_path(3, &APath::constant(Complex64::new(10.0, 0.0)), &TrackOptions::default()).unwrap();
        assert_eq!(r.permutation, Permutation::identity(4));
    }

    #[test]
    fn big_circle_reverses_order() {
        let r = track_path_checked(8, &APath::circle(500.0), &TrackOptions::default()).unwrap();
        assert_eq!(r.permutation, Permutation::reversal(9));
        assert!(r.closure_error() < 1e-8);
        assert!(r.start.iter().all(|z| z.im.abs() < 1e-8));
    }

    #[test]
    fn second_table_and_word() {
        let t = monodromy_table(2, Some(10.0), None).unwrap();
        assert_eq!(t.entries.len(), 3);
        assert!(t.exceptions(TranspositionRule::MirroredColumn).is_empty(), "{:?}", t.entries);
        // the two real-axis neighbours that collide at the real point are the
        // two leftmost eigenvalues just to its right
        let real = t.entries.iter().find(|e| e.sigma.im == 0.0).unwrap();
        let s = crate::spectral::eigenvalues(2, real.sigma + 0.01, &Default::default()).unwrap().points;
        assert!((s[0] - s[1]).norm() < (s[1] - s[2]).norm());
        assert_eq!(real.permutation, Permutation::adjacent(3, 1));
        let word = compose_word(3, t.big_circle_word());
        let direct = track_path_checked(2, &APath::circle(10.0), &TrackOptions::default()).unwrap();
        assert_eq!(word, direct.permutation);
    }

    #[test]
    fn small_tables_are_adjacent_transpositions() {
        for n in 3..=4 {
            let t = monodromy_table(n, None, None).unwrap();
            assert_eq!(t.entries.len(), n * (n + 1) / 2);
            assert!(t.exceptions(TranspositionRule::MirroredColumn).is_empty(), "n {n}: {:?}", t.entries);
            assert!(!t.exceptions(TranspositionRule::Column).is_empty());
            let word = compose_word(n + 1, t.big_circle_word());
            let direct = track_path_checked(n, &APath::circle(t.base), &TrackOptions::default()).unwrap();
            assert_eq!(word, direct.permutation, "n {n}");
            assert_eq!(word, Permutation::reversal(n + 1), "n {n}");
        }
    }
}
