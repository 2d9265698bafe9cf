//! Small dense symmetric matrices: Jacobi eigenvalues, Cholesky, log-det,
//! SPD inverse. Sized for m up to a few dozen.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not numerically positive definite")]
    PosDefViolation,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
}

/// Symmetric matrix stored densely; `set` writes both triangles so
/// `get(i, j) == get(j, i)` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![1.0; dim])
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut a = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            a.set(i, i, v);
        }
        a
    }

    /// Builds from full rows; rejects asymmetric input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        let mut a = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(LinalgError::DimMismatch(dim, row.len()));
            }
            for j in 0..=i {
                if row[j] != rows[j][i] {
                    return Err(LinalgError::NotSymmetric(i, j));
                }
                a.set(i, j, row[j]);
            }
        }
        Ok(a)
    }

    /// Builds from the lower triangle in row-major order
    /// `(0,0), (1,0), (1,1), (2,0), ...`.
    pub fn from_lower(dim: usize, lower: &[f64]) -> Result<Self, LinalgError> {
        if lower.len() != dim * (dim + 1) / 2 {
            return Err(LinalgError::DimMismatch(dim * (dim + 1) / 2, lower.len()));
        }
        let mut a = Self::zeros(dim);
        let mut k = 0;
        for i in 0..dim {
            for j in 0..=i {
                a.set(i, j, lower[k]);
                k += 1;
            }
        }
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Row-major view of the full matrix.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `tr(A B)` for symmetric `A`, `B`.
    pub fn trace_product(&self, other: &SymMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_scaled_identity(&self, c: f64) -> SymMatrix {
        let mut a = self.clone();
        for i in 0..self.dim {
            a.data[i * self.dim + i] += c;
        }
        a
    }

    /// Dense matrix-vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Dense product `A B` (generally not symmetric), row-major.
    pub fn mul_dense(&self, other: &SymMatrix) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }
}

/// Eigen-decomposition `A = V diag(values) V^T` with ascending values;
/// `vectors` holds eigenvectors as columns, row-major.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn eigh(a: &SymMatrix) -> Result<SymEigen, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.dim;
    let mut m = a.data.clone();
    let mut v = SymMatrix::identity(n).data;
    let scale = a.frobenius_norm();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + col] = v[row * n + src];
        }
    }
    Ok(SymEigen { values, vectors })
}

pub fn eigvals_sym(a: &SymMatrix) -> Result<Vec<f64>, LinalgError> {
    eigh(a).map(|e| e.values)
}

pub fn min_eigenvalue(a: &SymMatrix) -> Result<f64, LinalgError> {
    eigvals_sym(a).map(|v| v.first().copied().unwrap_or(0.0))
}

/// `lambda_min(A) >= -tol`. Non-finite matrices are never PSD.
pub fn is_psd(a: &SymMatrix, tol: f64) -> bool {
    match min_eigenvalue(a) {
        Ok(l) => l >= -tol,
        Err(_) => false,
    }
}

/// PSD test with the default relative tolerance `1e-9 (1 + ||A||_F)`.
pub fn is_psd_default(a: &SymMatrix) -> bool {
    is_psd(a, 1e-9 * (1.0 + a.frobenius_norm()))
}

/// Lower-triangular Cholesky factor, row-major.
#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn new(a: &SymMatrix) -> Result<Self, LinalgError> {
        let n = a.dim;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(LinalgError::PosDefViolation);
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Self { dim: n, l })
    }

    pub fn logdet(&self) -> f64 {
        2.0 * (0..self.dim).map(|i| self.l[i * self.dim + i].ln()).sum::<f64>()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.l[i * n + k] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                y[i] -= self.l[k * n + i] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }

    pub fn inverse(&self) -> SymMatrix {
        let n = self.dim;
        let mut inv = SymMatrix::zeros(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.solve(&e);
            for i in j..n {
                inv.set(i, j, col[i]);
            }
        }
        inv
    }
}

pub fn logdet_chol(a: &SymMatrix) -> Result<f64, LinalgError> {
    Cholesky::new(a).map(|c| c.logdet())
}

pub fn inverse_spd(a: &SymMatrix) -> Result<SymMatrix, LinalgError> {
    Cholesky::new(a).map(|c| c.inverse())
}
