//! Small dense linear algebra for the filter, oracle and theory code.
//!
//! Everything here targets systems of order up to a few dozen. Symmetric
//! matrices are stored as a packed upper triangle (row-major), general
//! matrices as plain row-major arrays.

use crate::error::{check_len, Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// Squared Euclidean distance between two vectors of equal length.
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Dense symmetric matrix holding only its upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

#[inline]
fn row_offset(dim: usize, i: usize) -> usize {
    // rows 0..i hold dim, dim-1, ..., dim-i+1 entries
    i * dim - i * (i.saturating_sub(1)) / 2
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "SymMatrix dimension must be positive");
        Self {
            dim,
            data: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, s: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, s);
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix by evaluating `f(i, j)` on the upper triangle `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from full rows. The rows must be square, finite and
    /// symmetric up to rounding; the upper triangle is kept.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            check_len(&format!("row {i}"), row.len(), dim)?;
        }
        for i in 0..dim {
            for j in 0..dim {
                let (a, b) = (rows[i][j], rows[j][i]);
                if !a.is_finite() {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) is not finite")));
                }
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    /// Builds a matrix from its packed upper triangle.
    pub fn from_packed(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        check_len("packed data", data.len(), dim * (dim + 1) / 2)?;
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        row_offset(self.dim, i) + (j - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j);
        self.data[k] = v;
    }

    /// Packed upper triangle, row-major.
    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    pub fn packed_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// The packed slice holding row `i` from the diagonal to the last column.
    #[inline]
    pub fn upper_row(&self, i: usize) -> &[f64] {
        let start = row_offset(self.dim, i);
        &self.data[start..start + self.dim - i]
    }

    /// Column `l` copied into `out`.
    #[inline]
    pub fn column_into(&self, l: usize, out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = self.get(k, l);
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut out);
        out
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        out.iter_mut().for_each(|o| *o = 0.0);
        for i in 0..self.dim {
            let row = self.upper_row(i);
            out[i] += row[0] * x[i];
            for (off, &a) in row.iter().enumerate().skip(1) {
                let j = i + off;
                out[i] += a * x[j];
                out[j] += a * x[i];
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn add_diagonal(&mut self, s: f64) {
        for i in 0..self.dim {
            let k = self.index(i, i);
            self.data[k] += s;
        }
    }

    /// `self += alpha * u uᵀ`
    pub fn rank_one_update(&mut self, alpha: f64, u: &[f64]) {
        for i in 0..self.dim {
            for j in i..self.dim {
                let k = self.index(i, j);
                self.data[k] += alpha * u[i] * u[j];
            }
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim);
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j);
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Symmetric part of a square dense matrix, `(A + Aᵀ) / 2`.
    pub fn symmetric_part(a: &DenseMatrix) -> SymMatrix {
        assert_eq!(a.rows(), a.cols());
        SymMatrix::from_fn(a.rows(), |i, j| 0.5 * (a.get(i, j) + a.get(j, i)))
    }
}

/// Row-major general matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_len("row-major data", data.len(), rows * cols)?;
        Ok(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }
}

/// Eigenvalues sorted by ascending magnitude with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

impl EigDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalue of smallest magnitude.
    pub fn min_abs(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `V f(Λ) Vᵀ` for a scalar function applied to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.dim();
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(n, |i, j| {
            self.eigenvectors
                .iter()
                .zip(&mapped)
                .map(|(v, &m)| m * v[i] * v[j])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.map_spectrum(|l| l)
    }
}

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm falls below `1e-12 ‖A‖_F`.
pub fn sym_eig(a: &SymMatrix) -> Result<EigDecomposition> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = a.dim();
    let mut m = a.to_dense();
    let mut v = DenseMatrix::identity(n);
    let total = a.frobenius_norm();

    let off_norm = |m: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j) * m.get(i, j);
                }
            }
        }
        s.sqrt()
    };

    let mut converged = total == 0.0 || off_norm(&m) <= JACOBI_TOL * total;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NotConverged {
                sweeps,
                off_norm: off_norm(&m),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let (apk, aqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);
                for k in 0..n {
                    let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
        converged = off_norm(&m) <= JACOBI_TOL * total;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (m.get(i, i), m.get(j, j));
        a.abs().total_cmp(&b.abs()).then(a.total_cmp(&b))
    });
    let eigenvalues = order.iter().map(|&i| m.get(i, i)).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| {
            let mut col = v.column(i);
            let nrm = norm(&col);
            col.iter_mut().for_each(|c| *c /= nrm);
            col
        })
        .collect();
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    lower: DenseMatrix,
}

impl Cholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let n = a.dim();
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d -= l.get(j, k) * l.get(j, k);
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Singular(format!(
                    "matrix is not positive definite (pivot {j} = {d:e})"
                )));
            }
            let d = d.sqrt();
            l.set(j, j, d);
            for i in j + 1..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / d);
            }
        }
        Ok(Self { lower: l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lower.rows();
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l.get(i, k) * y[k];
            }
            y[i] = s / l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l.get(k, i) * y[k];
            }
            y[i] = s / l.get(i, i);
        }
        y
    }
}

/// Solves `A x = b` for symmetric positive-definite `A` via Cholesky.
pub fn solve_spd(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_len("right-hand side", b.len(), a.dim())?;
    Ok(Cholesky::factor(a)?.solve(b))
}

/// Solves a general square system by LU factorization with partial pivoting.
pub fn solve_dense(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    check_len("right-hand side", b.len(), n)?;
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = a.as_slice().iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if !scale.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let tiny = scale * f64::EPSILON * n as f64;
    for col in 0..n {
        let (piv, pval) = (col..n)
            .map(|r| (r, m.get(r, col).abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if !(pval > tiny) {
            return Err(Error::Singular(format!("zero pivot in column {col}")));
        }
        if piv != col {
            for j in 0..n {
                let t = m.get(col, j);
                m.set(col, j, m.get(piv, j));
                m.set(piv, j, t);
            }
            x.swap(col, piv);
        }
        let d = m.get(col, col);
        for r in col + 1..n {
            let f = m.get(r, col) / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m.set(r, j, m.get(r, j) - f * m.get(col, j));
            }
            x[r] -= f * x[col];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m.get(i, j) * x[j];
        }
        x[i] = s / m.get(i, i);
    }
    Ok(x)
}

/// `tr{A⁻¹}` for positive-definite `A`, as the sum of eigenvalue reciprocals.
pub fn trace_inverse(a: &SymMatrix) -> Result<f64> {
    let eig = sym_eig(a)?;
    let largest = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let floor = largest * f64::EPSILON * a.dim() as f64;
    if eig.min() <= floor {
        return Err(Error::Singular(format!(
            "matrix is not positive definite (smallest eigenvalue {:e})",
            eig.min()
        )));
    }
    Ok(eig.eigenvalues.iter().map(|l| 1.0 / l).sum())
}
