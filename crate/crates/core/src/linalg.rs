//! Small dense solvers for the normal equations.
//!
//! Systems here are at most 25x25, so everything is plain row-major `Vec<f64>`.

use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the largest diagonal entry are
/// treated as zero.
pub const RELATIVE_PIVOT_TOL: f64 = 1e-12;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds from rows; panics if the rows are ragged or not square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend_from_slice(row);
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `vᵀ A v`.
    pub fn quadratic(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    fn max_abs_diagonal(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)].abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Root-free Cholesky factorization `A = L D Lᵀ` with unit lower-triangular `L`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    lower: Matrix,
    diag: Vec<f64>,
}

impl Cholesky {
    /// Factors a symmetric positive-definite matrix. Fails with the index of
    /// the first pivot that is not safely positive.
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.dim();
        let tol = RELATIVE_PIVOT_TOL * a.max_abs_diagonal();
        let mut l = Matrix::identity(n);
        let mut d = vec![0.0; n];
        for j in 0..n {
            let dj = a[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)] * d[k]).sum::<f64>();
            if !(dj > tol) {
                return Err(Error::SingularSystem { pivot: j });
            }
            d[j] = dj;
            for i in (j + 1)..n {
                let s = a[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)] * d[k]).sum::<f64>();
                l[(i, j)] = s / dj;
            }
        }
        Ok(Self { lower: l, diag: d })
    }

    /// Diagonal pivots `D_jj`.
    pub fn pivots(&self) -> Vec<f64> {
        self.diag.clone()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.lower;
        let n = l.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
            y[i] = b[i] - s;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| l[(k, i)] * x[k]).sum();
            x[i] = y[i] / self.diag[i] - s;
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Cholesky,
    PivotedElimination,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub pivots: Vec<f64>,
    pub method: SolveMethod,
}

impl Solution {
    /// Ratio of the largest to the smallest pivot magnitude.
    pub fn condition_estimate(&self) -> f64 {
        let max = self.pivots.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        let min = self.pivots.iter().fold(f64::INFINITY, |m, p| m.min(p.abs()));
        if self.pivots.is_empty() {
            1.0
        } else {
            max / min
        }
    }
}

/// Solves `A x = b` for symmetric `A`: Cholesky first, row-pivoted
/// elimination if Cholesky meets a nonpositive pivot.
pub fn solve_symmetric(a: &Matrix, b: &[f64]) -> Result<Solution> {
    assert_eq!(a.dim(), b.len(), "dimension mismatch");
    match Cholesky::factor(a) {
        Ok(chol) => Ok(Solution {
            x: chol.solve(b),
            pivots: chol.pivots(),
            method: SolveMethod::Cholesky,
        }),
        Err(_) => {
            let (x, pivots) = pivoted_elimination(a, b)?;
            Ok(Solution { x, pivots, method: SolveMethod::PivotedElimination })
        }
    }
}

/// Gaussian elimination with partial (row) pivoting.
pub fn pivoted_elimination(a: &Matrix, b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = a.dim();
    let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = RELATIVE_PIVOT_TOL * scale;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap();
        if !(m[(p, k)].abs() > tol) {
            return Err(Error::SingularSystem { pivot: k });
        }
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            rhs.swap(k, p);
        }
        let pivot = m[(k, k)];
        pivots.push(pivot);
        for i in (k + 1)..n {
            let factor = m[(i, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                let v = m[(k, j)];
                m[(i, j)] -= factor * v;
            }
            rhs[i] -= factor * rhs[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (rhs[i] - s) / m[(i, i)];
    }
    Ok((x, pivots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let sol = solve_symmetric(&Matrix::identity(4), &[1.0, -2.0, 3.5, 0.0]).unwrap();
        assert_eq!(sol.x, vec![1.0, -2.0, 3.5, 0.0]);
        assert_eq!(sol.method, SolveMethod::Cholesky);
        assert_eq!(sol.condition_estimate(), 1.0);
    }

    #[test]
    fn single_row_normal_equation() {
        // 714.6̇ b - 357.3̇ = 0
        let sol = solve_symmetric(&Matrix::from_rows(&[vec![2144.0 / 3.0]]), &[1072.0 / 3.0]).unwrap();
        assert_eq!(sol.x, vec![0.5]);
    }

    #[test]
    fn indefinite_falls_back_to_elimination() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let sol = solve_symmetric(&a, &[2.0, 3.0]).unwrap();
        assert_eq!(sol.method, SolveMethod::PivotedElimination);
        assert_eq!(sol.x, vec![3.0, 2.0]);
    }

    #[test]
    fn singular_reports_pivot() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(solve_symmetric(&a, &[1.0, 1.0]).unwrap_err(), Error::SingularSystem { pivot: 1 });
        let z = Matrix::zeros(3);
        assert_eq!(solve_symmetric(&z, &[0.0; 3]).unwrap_err(), Error::SingularSystem { pivot: 0 });
    }

    #[test]
    fn cholesky_pivots_of_known_matrix() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let chol = Cholesky::factor(&a).unwrap();
        let p = chol.pivots();
        assert!((p[0] - 4.0).abs() < 1e-15 && (p[1] - 2.0).abs() < 1e-15);
        let x = chol.solve(&[6.0, 5.0]);
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }
}
