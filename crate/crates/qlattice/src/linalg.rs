use std::fmt;

use crate::error::{QError, Result};
use crate::scalar::{from_u, lit, Scalar};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(QError::InvalidSpec("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, o: &Matrix<T>) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out[(i, j)] = out[(i, j)] + a * o[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:.6e}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub s: Vec<T>,
    pub v: Matrix<T>,
}

const MAX_SWEEPS: usize = 80;

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// One-sided Jacobi on the columns of a tall matrix.
fn jacobi_tall<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    let (m, n) = (a.rows, a.cols);
    let mut w: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    let eps = T::epsilon() * from_u::<T>(m.max(1));
    let negligible = {
        let total: T = w.iter().map(|c| dot(c, c)).sum();
        T::epsilon() * T::epsilon() * T::epsilon() * total
    };
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = dot(&w[i], &w[i]);
                let beta = dot(&w[j], &w[j]);
                let gamma = dot(&w[i], &w[j]);
                if gamma == T::zero()
                    || alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= eps * (alpha.sqrt() * beta.sqrt())
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (lit::<T>(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let (x, y) = (w[i][r], w[j][r]);
                    w[i][r] = c * x - s * y;
                    w[j][r] = s * x + c * y;
                }
                for r in 0..n {
                    let (x, y) = (v[i][r], v[j][r]);
                    v[i][r] = c * x - s * y;
                    v[j][r] = s * x + c * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QError::non_convergence(MAX_SWEEPS, "Jacobi SVD sweeps"));
    }
    let mut order: Vec<(T, usize)> = w
        .iter()
        .enumerate()
        .map(|(j, c)| (dot(c, c).sqrt(), j))
        .collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = Matrix::zeros(m, n);
    let mut vm = Matrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (col, &(sigma, j)) in order.iter().enumerate() {
        s.push(sigma);
        for r in 0..m {
            u[(r, col)] = if sigma > T::zero() {
                w[j][r] / sigma
            } else {
                T::zero()
            };
        }
        for r in 0..n {
            vm[(r, col)] = v[j][r];
        }
    }
    Ok(Svd { u, s, v: vm })
}

/// Thin SVD of any matrix.
pub fn svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    if a.rows >= a.cols {
        jacobi_tall(a)
    } else {
        let t = jacobi_tall(&a.transpose())?;
        Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

pub fn singular_values<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    Ok(svd(a)?.s)
}

/// Least-squares solution with singular values below `rcond · σ_max` discarded.
#[derive(Clone, Debug)]
pub struct LstsqSolution<T> {
    pub x: Vec<T>,
    pub rank: usize,
    pub singular_values: Vec<T>,
}

impl<T> LstsqSolution<T> {
    pub fn truncated(&self) -> bool {
        self.rank < self.singular_values.len()
    }
}

pub fn lstsq<T: Scalar>(a: &Matrix<T>, b: &[T], rcond: T) -> Result<LstsqSolution<T>> {
    if b.len() != a.rows {
        return Err(QError::InvalidSpec(
            "right-hand side length mismatch".into(),
        ));
    }
    let d = svd(a)?;
    let smax = d.s.first().copied().unwrap_or_else(T::zero);
    let cutoff = rcond * smax;
    let mut x = vec![T::zero(); a.cols];
    let mut rank = 0;
    for (k, &sk) in d.s.iter().enumerate() {
        if !(sk > cutoff) || sk == T::zero() {
            continue;
        }
        rank += 1;
        let coef = (0..a.rows).map(|r| d.u[(r, k)] * b[r]).sum::<T>() / sk;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = *xi + coef * d.v[(i, k)];
        }
    }
    Ok(LstsqSolution {
        x,
        rank,
        singular_values: d.s,
    })
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    if a.rows != a.cols {
        return Err(QError::InvalidSpec(
            "eigenvalues need a square matrix".into(),
        ));
    }
    let n = a.rows;
    let mut m = a.clone();
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        let diag: T = (0..n).map(|i| m[(i, i)] * m[(i, i)]).sum();
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            let mut ev: Vec<T> = (0..n).map(|i| m[(i, i)]).collect();
            ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
            return Ok(ev);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (lit::<T>(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    Err(QError::non_convergence(
        MAX_SWEEPS,
        "Jacobi eigenvalue sweeps",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Matrix<f64> {
        Matrix::from_rows(&[
            vec![4.0, 1.0, -2.0],
            vec![1.0, 3.0, 0.5],
            vec![-2.0, 0.5, 5.0],
            vec![0.3, 0.2, 0.1],
        ])
        .unwrap()
    }

    #[test]
    fn svd_reconstructs_tall_and_wide() {
        for a in [sample(), sample().transpose()] {
            let d = svd(&a).unwrap();
            let k = d.s.len();
            let sigma = Matrix::from_fn(k, k, |i, j| if i == j { d.s[i] } else { 0.0 });
            let back = d.u.matmul(&sigma).matmul(&d.v.transpose());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-13);
                }
            }
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = Matrix::from_fn(3, 3, |i, j| if i == j { [2.0, -5.0, 1e-3][i] } else { 0.0 });
        let s = singular_values(&a).unwrap();
        assert_eq!(s, vec![5.0, 2.0, 1e-3]);
    }

    #[test]
    fn lstsq_solves_consistent_system() {
        let a = sample();
        let x0 = [1.0, -2.0, 0.5];
        let b = a.mul_vec(&x0);
        let sol = lstsq(&a, &b, 1e-10).unwrap();
        assert_eq!(sol.rank, 3);
        for (x, y) in sol.x.iter().zip(x0) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn lstsq_cutoff_drops_duplicate_column() {
        let a =
            Matrix::<f64>::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let sol = lstsq(&a, &[1.0, 2.0, 0.0], 1e-10).unwrap();
        assert_eq!(sol.rank, 1);
        assert!(sol.truncated());
        assert!((sol.x[0] - 0.5).abs() < 1e-14 && (sol.x[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn symmetric_eigenvalues_known() {
        let a = Matrix::<f64>::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let ev = symmetric_eigenvalues(&a).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] - 3.0).abs() < 1e-15);
    }
}
