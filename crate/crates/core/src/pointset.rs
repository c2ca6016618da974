//! Finite multisets of complex points with export helpers.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub label: String,
    pub points: Vec<Complex64>,
    /// Factor every point has been divided by, if any.
    pub scale: Option<f64>,
    /// Free-form metadata (parameters that produced the set).
    pub meta: Map<String, Value>,
}

impl PointSet {
    pub fn new(label: impl Into<String>, points: Vec<Complex64>) -> Self {
        Self { label: label.into(), points, scale: None, meta: Map::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Divides every point by `s` and records the factor.
    pub fn scaled(mut self, s: f64) -> Self {
        for p in &mut self.points {
            *p /= s;
        }
        self.scale = Some(self.scale.unwrap_or(1.0) * s);
        self
    }

    /// Sorts lexicographically by `(re, im)`.
    pub fn sort_lex(&mut self) {
        self.points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    }

    pub fn sorted(mut self) -> Self {
        self.sort_lex();
        self
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.points.iter().sum()
    }

    /// CSV with a `re,im` header and shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im\n");
        for p in &self.points {
            let _ = writeln!(s, "{},{}", p.re, p.im);
        }
        s
    }

    /// Multiset equality up to `tol`, by optimal matching.
    pub fn matches(&self, other: &PointSet, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        max_matching_distance(&self.points, &other.points) <= tol
    }
}

/// Largest pair distance in the cost-minimising matching of two equal-size
/// point lists.
pub fn max_matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let assign = crate::numeric::assign::min_cost_assignment(&cost);
    assign.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max)
}
