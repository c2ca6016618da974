use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::{ExactPoly, IntPoly, Var};

/// Polynomial in a main variable (default `λ`) whose coefficients are integer
/// polynomials in a second variable (default `a`).
///
/// `rows[i]` is the coefficient of `main^i`; each row is an [`IntPoly`] in
/// the inner variable. Trailing zero rows are never stored.
///
/// Equality compares coefficients only; variable labels are ignored.
#[derive(Clone, Serialize, Deserialize)]
pub struct BivariatePoly {
    rows: Vec<IntPoly>,
    main: Var,
    inner: Var,
}

impl BivariatePoly {
    pub fn from_rows(mut rows: Vec<IntPoly>, main: Var, inner: Var) -> Self {
        while rows.last().is_some_and(IntPoly::is_zero) {
            rows.pop();
        }
        let rows = rows.into_iter().map(|r| r.with_var(inner)).collect();
        Self { rows, main, inner }
    }

    /// Builds from a dense grid `grid[i][j]` = coefficient of `main^i inner^j`.
    pub fn from_grid(grid: &[Vec<i64>], main: Var, inner: Var) -> Self {
        Self::from_rows(grid.iter().map(|r| IntPoly::from_i64s(r)).collect(), main, inner)
    }

    pub fn zero(main: Var, inner: Var) -> Self {
        Self { rows: Vec::new(), main, inner }
    }

    pub fn rows(&self) -> &[IntPoly] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> IntPoly {
        self.rows.get(i).cloned().unwrap_or_else(|| IntPoly::zero().with_var(self.inner))
    }

    pub fn main_var(&self) -> Var {
        self.main
    }

    pub fn inner_var(&self) -> Var {
        self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coefficient of `main^i inner^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Integer {
        self.rows.get(i).map(|r| r.coeff(j)).unwrap_or_default()
    }

    pub fn main_degree(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn inner_degree(&self) -> Option<usize> {
        self.rows.iter().filter_map(IntPoly::degree).max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.rows.iter().enumerate().filter_map(|(i, r)| r.degree().map(|d| i + d)).max()
    }

    /// Partial derivative in the main variable.
    pub fn derivative_main(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, r)| r.scale(&Integer::from(i)))
            .collect();
        Self::from_rows(rows, self.main, self.inner)
    }

    /// Specialises the inner variable, giving a polynomial in the main one.
    pub fn eval_inner(&self, x: &Rational) -> ExactPoly {
        let coeffs = self.rows.iter().map(|r| r.to_exact().eval(x)).collect();
        ExactPoly::from_coeffs(coeffs).with_var(self.main)
    }

    /// Specialises the main variable, giving a polynomial in the inner one.
    pub fn eval_main(&self, x: &Rational) -> ExactPoly {
        let mut acc = ExactPoly::zero().with_var(self.inner);
        for r in self.rows.iter().rev() {
            acc = &acc.scale(x) + &r.to_exact();
        }
        acc
    }

    /// Swaps the roles of the two variables.
    pub fn transpose(&self) -> Self {
        let deg = self.inner_degree().map_or(0, |d| d + 1);
        let rows = (0..deg)
            .map(|j| IntPoly::from_coeffs(self.rows.iter().map(|r| r.coeff(j)).collect()))
            .collect();
        Self::from_rows(rows, self.inner, self.main)
    }

    /// Every `(i, j)` with a nonzero coefficient of `main^i inner^j`.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.support().map(move |j| (i, j)))
            .collect()
    }
}

impl PartialEq for BivariatePoly {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for BivariatePoly {}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, r) in self.rows.iter().enumerate().rev() {
            if r.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({r})")?,
                1 => write!(f, "({r})·{}", self.main)?,
                _ => write!(f, "({r})·{}^{i}", self.main)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_derivative() {
        // -λ^3 + 4aλ + 4
        let p = BivariatePoly::from_grid(&[vec![4], vec![0, 4], vec![], vec![-1]], Var::Lambda, Var::A);
        assert_eq!(p.main_degree(), Some(3));
        assert_eq!(p.inner_degree(), Some(1));
        assert_eq!(p.total_degree(), Some(3));
        let d = p.derivative_main();
        assert_eq!(d, BivariatePoly::from_grid(&[vec![0, 4], vec![], vec![-3]], Var::Lambda, Var::A));
        let at1 = p.eval_inner(&Rational::from(1));
        assert_eq!(at1, ExactPoly::from_i64s(&[4, 4, 0, -1]));
    }

    #[test]
    fn transpose_round_trip() {
        let p = BivariatePoly::from_grid(&[vec![1, 2], vec![0, 0, 3], vec![5]], Var::Lambda, Var::A);
        let t = p.transpose();
        assert_eq!(t.coeff(2, 1), Integer::from(3));
        assert_eq!(t.transpose(), p);
        assert_eq!(p.eval_main(&Rational::from(2)), ExactPoly::from_i64s(&[21, 2, 6]));
    }
}
