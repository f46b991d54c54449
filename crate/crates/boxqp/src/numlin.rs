//! Dense symmetric linear algebra: storage types, a cyclic Jacobi
//! eigendecomposition, semidefiniteness tests, and minimum-norm solves.
//!
//! Everything here works on small dense matrices (dozens of rows, not
//! thousands), so the kernels favor simplicity and reproducibility over
//! blocking or pivoting tricks. All tolerance checks are scaled by
//! `max(1, max-norm)` of the data they inspect, so the same defaults work
//! for tiny and moderately scaled inputs alike.

use crate::{Error, Result};

/// Default relative tolerance for semidefiniteness and rank decisions.
pub const DEFAULT_PSD_TOL: f64 = 1e-8;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense symmetric matrix, row-major, kept exactly symmetric by
/// construction: every write goes through [`SymMatrix::set`], which mirrors
/// the entry, and the constructors only consume one triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix order must be at least 1");
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = SymMatrix::zeros(n);
        for i in 0..n {
            a.data[i * n + i] = 1.0;
        }
        a
    }

    /// Builds from a callback evaluated on the upper triangle (`i <= j`);
    /// the lower triangle is mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut a = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                a.data[i * n + j] = v;
                a.data[j * n + i] = v;
            }
        }
        a
    }

    /// Builds from full row-major rows, rejecting asymmetry beyond `tol`
    /// (absolute). Entries are canonicalized to the upper triangle.
    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionInconsistency("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionInconsistency(format!(
                    "row {} has length {}, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let delta = (rows[i][j] - rows[j][i]).abs();
                if delta > tol {
                    return Err(Error::AsymmetricInput { i, j, delta });
                }
            }
        }
        Ok(SymMatrix::from_fn(n, |i, j| rows[i][j]))
    }

    /// Symmetric part `(a + a')/2` of a general square matrix.
    pub fn symmetric_part(a: &Mat) -> Self {
        assert_eq!(a.rows(), a.cols(), "symmetric part needs a square matrix");
        SymMatrix::from_fn(a.rows(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Writes both `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn max_norm(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// Frobenius inner product `<A, B> = sum_ij A_ij B_ij`.
    pub fn inner(&self, rhs: &SymMatrix) -> f64 {
        assert_eq!(self.n, rhs.n);
        dot(&self.data, &rhs.data)
    }

    /// Quadratic form `x'Ax`, accumulated entry by entry in row-major order.
    /// The fixed association order makes it bit-compatible with other
    /// row-major accumulations over the same entries.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += x[i] * self.data[i * self.n + j] * x[j];
            }
        }
        acc
    }

    /// Principal submatrix on the given (distinct) indices.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(idx.len(), |a, b| self.data[idx[a] * self.n + idx[b]])
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    pub fn add(&self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&rhs.data) {
            *v += *w;
        }
        out
    }

    pub fn sub(&self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&rhs.data) {
            *v -= *w;
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

/// Dense general matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn max_norm(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns, with `||A V - V diag(lambda)||_max` at most
/// `1e-10 * max(1, ||A||_max)`. Fails with a numerical error if the
/// off-diagonal mass has not collapsed after 100 sweeps (in practice a
/// handful suffice at these orders).
pub fn eig_sym(a: &SymMatrix) -> Result<(Vec<f64>, Mat)> {
    let n = a.n();
    let mut m = a.data.clone();
    let mut v = Mat::identity(n);
    let stop = 1e-14 * a.max_norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m[p * n + q].abs());
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[p * n + k] = m[k * n + p];
                    m[k * n + q] = s * akp + c * akq;
                    m[q * n + k] = m[k * n + q];
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi eigendecomposition did not converge in {} sweeps",
            MAX_JACOBI_SWEEPS
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap());
    let lambda: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((lambda, vectors))
}

/// Whether `lambda_min(a) >= -tol * max(1, ||a||_max)`.
pub fn is_psd(a: &SymMatrix, tol: f64) -> Result<bool> {
    let (lambda, _) = eig_sym(a)?;
    let floor = -tol * a.max_norm().max(1.0);
    Ok(lambda[0] >= floor)
}

/// Result of a minimum-norm solve of `a x = b`.
///
/// `x` is the least-squares solution of smallest Euclidean norm. The system
/// counts as consistent when `||a x - b||_max <= tol * max(1, ||b||_max)`.
/// `kernel` holds an orthonormal basis (as columns) of the numerical null
/// space, whose dimension is `nullity`.
#[derive(Clone, Debug)]
pub struct MinNormSolution {
    pub x: Vec<f64>,
    pub consistent: bool,
    pub nullity: usize,
    pub kernel: Mat,
}

/// Minimum-norm solve of the symmetric system `a x = b` through the
/// eigendecomposition pseudo-inverse. Eigenvalues with
/// `|lambda| <= tol * max(1, ||a||_max)` are treated as zero.
pub fn solve_min_norm(a: &SymMatrix, b: &[f64], tol: f64) -> Result<MinNormSolution> {
    let n = a.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let (lambda, v) = eig_sym(a)?;
    let cut = tol * a.max_norm().max(1.0);

    let mut x = vec![0.0; n];
    let mut kernel_cols = Vec::new();
    for i in 0..n {
        let vi = v.col(i);
        if lambda[i].abs() <= cut {
            kernel_cols.push(vi);
            continue;
        }
        let coef = dot(&vi, b) / lambda[i];
        for (xj, vj) in x.iter_mut().zip(&vi) {
            *xj += coef * vj;
        }
    }
    let nullity = kernel_cols.len();
    let kernel = Mat::from_fn(n, nullity, |i, j| kernel_cols[j][i]);

    let ax = a.matvec(&x);
    let residual = max_abs(
        &ax.iter().zip(b).map(|(l, r)| l - r).collect::<Vec<_>>(),
    );
    let consistent = residual <= tol * max_abs(b).max(1.0);
    Ok(MinNormSolution { x, consistent, nullity, kernel })
}
