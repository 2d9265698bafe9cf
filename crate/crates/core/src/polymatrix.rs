//! Symmetric matrices of polynomials and their characteristic polynomial.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::SymMatrix;
use crate::poly::{PolyError, Polynomial, Term};

/// Largest admissible `m * deg(P)` before `charpoly` refuses to expand.
pub const MAX_CHARPOLY_DEGREE: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyMatrixError {
    #[error("matrix dimension must be positive")]
    EmptyMatrix,
    #[error("expected {expected} lower-triangle entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("entry uses {got} variables, matrix is over {expected}")]
    EntrySpace { expected: usize, got: usize },
    #[error("characteristic polynomial degree bound {bound} exceeds {MAX_CHARPOLY_DEGREE}")]
    DegreeGuard { bound: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `m x m` symmetric matrix of polynomials in `k + l` variables (x-block
/// first, then y-block). Only the lower triangle is stored, so the two
/// mirrored entries are the same polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    dim: usize,
    x_vars: usize,
    y_vars: usize,
    lower: Vec<Polynomial>,
}

#[inline]
fn lower_index(i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

impl PolyMatrix {
    /// `lower` is row-major lower triangle: `(0,0), (1,0), (1,1), (2,0), ...`.
    pub fn new(
        dim: usize,
        x_vars: usize,
        y_vars: usize,
        lower: Vec<Polynomial>,
    ) -> Result<Self, PolyMatrixError> {
        if dim == 0 {
            return Err(PolyMatrixError::EmptyMatrix);
        }
        let expected = dim * (dim + 1) / 2;
        if lower.len() != expected {
            return Err(PolyMatrixError::EntryCount {
                expected,
                got: lower.len(),
            });
        }
        let n = x_vars + y_vars;
        if let Some(bad) = lower.iter().find(|p| p.num_vars() != n) {
            return Err(PolyMatrixError::EntrySpace {
                expected: n,
                got: bad.num_vars(),
            });
        }
        Ok(Self {
            dim,
            x_vars,
            y_vars,
            lower,
        })
    }

    /// Builds from a full matrix of entries, reading the lower triangle.
    pub fn from_fn<F>(dim: usize, x_vars: usize, y_vars: usize, mut f: F) -> Result<Self, PolyMatrixError>
    where
        F: FnMut(usize, usize) -> Polynomial,
    {
        let mut lower = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in 0..=i {
                lower.push(f(i, j));
            }
        }
        Self::new(dim, x_vars, y_vars, lower)
    }

    pub fn identity(dim: usize, x_vars: usize, y_vars: usize) -> Self {
        let n = x_vars + y_vars;
        Self::from_fn(dim, x_vars, y_vars, |i, j| {
            Polynomial::constant(n, if i == j { 1.0 } else { 0.0 })
        })
        .expect("identity is well formed")
    }

    /// Block-diagonal assembly. Scalar constraints `g_i >= 0` enter as
    /// `1 x 1` blocks.
    pub fn block_diag(blocks: &[PolyMatrix]) -> Result<Self, PolyMatrixError> {
        let first = blocks.first().ok_or(PolyMatrixError::EmptyMatrix)?;
        let (k, l) = (first.x_vars, first.y_vars);
        for b in blocks {
            if b.num_vars() != k + l {
                return Err(PolyMatrixError::EntrySpace {
                    expected: k + l,
                    got: b.num_vars(),
                });
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in blocks {
            offsets.push(dim);
            dim += b.dim;
        }
        let zero = Polynomial::zero(k + l);
        Self::from_fn(dim, k, l, |i, j| {
            for (b, &off) in blocks.iter().zip(&offsets) {
                let r = off..off + b.dim;
                if r.contains(&i) && r.contains(&j) {
                    return b.entry(i - off, j - off).clone();
                }
            }
            zero.clone()
        })
    }

    /// Appends scalar constraints `g_i(x, y) >= 0` as diagonal blocks.
    pub fn with_scalar_constraints(&self, gs: &[Polynomial]) -> Result<Self, PolyMatrixError> {
        let mut blocks = vec![self.clone()];
        for g in gs {
            blocks.push(PolyMatrix::new(1, self.x_vars, self.y_vars, vec![g.clone()])?);
        }
        Self::block_diag(&blocks)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x_vars(&self) -> usize {
        self.x_vars
    }

    pub fn y_vars(&self) -> usize {
        self.y_vars
    }

    pub fn num_vars(&self) -> usize {
        self.x_vars + self.y_vars
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.lower[lower_index(i, j)]
    }

    pub fn lower_entries(&self) -> &[Polynomial] {
        &self.lower
    }

    /// Maximum entry degree.
    pub fn degree(&self) -> u32 {
        self.lower.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn eval_matrix(&self, point: &[f64]) -> Result<SymMatrix, PolyError> {
        if point.len() != self.num_vars() {
            return Err(PolyError::DimMismatch {
                expected: self.num_vars(),
                got: point.len(),
            });
        }
        Ok(self.eval_at(point))
    }

    /// Evaluation without the length check.
    pub fn eval_at(&self, point: &[f64]) -> SymMatrix {
        let vals: Vec<f64> = self.lower.iter().map(|p| p.eval_at(point)).collect();
        SymMatrix::from_lower(self.dim, &vals).expect("lower triangle has the right length")
    }

    /// Entrywise partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> PolyMatrix {
        PolyMatrix {
            dim: self.dim,
            x_vars: self.x_vars,
            y_vars: self.y_vars,
            lower: self.lower.iter().map(|p| p.partial(var)).collect(),
        }
    }

    fn full(&self) -> Vec<Polynomial> {
        let m = self.dim;
        (0..m * m).map(|k| self.entry(k / m, k % m).clone()).collect()
    }

    /// Characteristic polynomial coefficients by Faddeev-LeVerrier over the
    /// polynomial ring.
    pub fn charpoly(&self) -> Result<CharPoly, PolyMatrixError> {
        let bound = self.dim as u32 * self.degree();
        if bound > MAX_CHARPOLY_DEGREE {
            return Err(PolyMatrixError::DegreeGuard { bound });
        }
        let m = self.dim;
        let n = self.num_vars();
        let p = self.full();
        let trace = |a: &[Polynomial]| {
            (0..m).fold(Polynomial::zero(n), |acc, i| &acc + &a[i * m + i])
        };
        // M_1 = P, c_1 = tr M_1; M_{k+1} = P (M_k - c_k I), c_{k+1} = tr M_{k+1} / (k + 1)
        let mut mk = p.clone();
        let mut c = trace(&mk);
        let mut q = Vec::with_capacity(m);
        q.push(c.clone());
        for k in 1..m {
            let mut shifted = mk;
            for i in 0..m {
                shifted[i * m + i] = &shifted[i * m + i] - &c;
            }
            mk = matmul(&p, &shifted, m, n);
            c = trace(&mk).scale(1.0 / (k as f64 + 1.0));
            // det(tI - P) = t^m - sum_k c_k t^{m-k}, so q_k = (-1)^{k+1} c_k
            q.push(if k % 2 == 1 { -&c } else { c.clone() });
        }
        Ok(CharPoly { q })
    }

    pub fn to_entry_lists(&self) -> Vec<Vec<Term>> {
        self.lower.iter().map(Polynomial::to_term_list).collect()
    }
}

fn matmul(a: &[Polynomial], b: &[Polynomial], m: usize, n: usize) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::zero(n); m * m];
    for i in 0..m {
        for j in 0..m {
            let mut s = Polynomial::zero(n);
            for k in 0..m {
                if a[i * m + k].is_zero() || b[k * m + j].is_zero() {
                    continue;
                }
                s = &s + &(&a[i * m + k] * &b[k * m + j]);
            }
            out[i * m + j] = s;
        }
    }
    out
}

/// Coefficients `q_1..q_m` with
/// `det(tI - P) = t^m + sum_j (-1)^j q_j t^{m-j}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharPoly {
    pub q: Vec<Polynomial>,
}

impl CharPoly {
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, PolyError> {
        self.q.iter().map(|p| p.eval(point)).collect()
    }

    pub fn eval_at(&self, point: &[f64]) -> Vec<f64> {
        self.q.iter().map(|p| p.eval_at(point)).collect()
    }

    /// `q_m = det P`.
    pub fn determinant(&self) -> &Polynomial {
        self.q.last().expect("charpoly of a non-empty matrix")
    }

    /// Descartes-sign PSD test: all `q_j(point) >= -tol`.
    ///
    /// Since a symmetric matrix has a real spectrum, the sign pattern of the
    /// coefficients alone decides whether every eigenvalue is non-negative.
    pub fn psd_by_descartes(&self, point: &[f64], tol: f64) -> bool {
        self.q.iter().all(|p| p.eval_at(point) >= -tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::example1;
    use crate::linalg::{eigvals_sym, is_psd};

    #[test]
    fn evaluates_example_matrix() {
        let p = example1().matrix;
        assert_eq!(p.eval_matrix(&[0.0, 0.0]).unwrap(), SymMatrix::identity(2));
        assert_eq!(
            p.eval_matrix(&[0.0, -1.0]).unwrap(),
            SymMatrix::diag(&[1.0, 0.0])
        );
        let z = PolyMatrix::from_fn(3, 1, 1, |_, _| Polynomial::zero(2)).unwrap();
        assert_eq!(z.eval_matrix(&[0.3, 0.7]).unwrap(), SymMatrix::zeros(3));
        assert!(p.eval_matrix(&[0.0]).is_err());
        let at = p.eval_matrix(&[0.1, 0.1]).unwrap();
        assert!((at.get(0, 0) - 0.84).abs() < 1e-15);
        assert!((at.get(1, 1) - 0.98).abs() < 1e-15);
        assert_eq!(at.get(0, 1), 0.1);
    }

    #[test]
    fn example_charpoly_terms() {
        let cp = example1().matrix.charpoly().unwrap();
        let names = ["x", "y"];
        assert_eq!(cp.q[0].display_with(&names), "2 - x^2 - 16*x*y - y^2");
        assert_eq!(
            cp.q[1].display_with(&names),
            "1 - 2*x^2 - 16*x*y - y^2 + 16*x^3*y + 16*x*y^3"
        );
    }

    #[test]
    fn identity_gives_binomials() {
        for m in 1..=5 {
            let cp = PolyMatrix::identity(m, 1, 0).charpoly().unwrap();
            let mut binom = 1.0;
            for j in 1..=m {
                binom = binom * (m - j + 1) as f64 / j as f64;
                let c = cp.q[j - 1].eval_at(&[0.4]);
                assert!((c - binom).abs() < 1e-12, "m={m} j={j}: {c} vs {binom}");
            }
            assert!(cp.psd_by_descartes(&[-3.0], 1e-9));
        }
    }

    #[test]
    fn descartes_on_example() {
        let prob = example1();
        let cp = prob.matrix.charpoly().unwrap();
        assert_eq!(cp.eval_at(&[0.0, -1.0]), vec![1.0, 0.0]);
        assert!(cp.psd_by_descartes(&[0.0, -1.0], 1e-9));
        assert!(is_psd(&prob.matrix.eval_at(&[0.0, -1.0]), 0.0));
        assert_eq!(cp.eval_at(&[1.0, 1.0])[0], -16.0);
        assert!(!cp.psd_by_descartes(&[1.0, 1.0], 1e-9));
        let ev = eigvals_sym(&prob.matrix.eval_at(&[1.0, 1.0])).unwrap();
        assert!(ev[0] < 0.0);
    }

    #[test]
    fn degree_guard() {
        let n = 1;
        let big = Polynomial::var(n, 0).powi(33);
        let p = PolyMatrix::from_fn(2, 1, 0, |i, j| {
            if i == j { big.clone() } else { Polynomial::zero(n) }
        })
        .unwrap();
        assert_eq!(p.charpoly(), Err(PolyMatrixError::DegreeGuard { bound: 66 }));
    }

    #[test]
    fn scalar_constraints_become_blocks() {
        let prob = example1();
        let g = &Polynomial::constant(2, 1.0) - &Polynomial::var(2, 0);
        let p = prob.matrix.with_scalar_constraints(&[g.clone()]).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.entry(2, 2), &g);
        assert!(p.entry(2, 0).is_zero());
        let a = p.eval_at(&[2.0, 0.0]);
        assert_eq!(a.get(2, 2), -1.0);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            PolyMatrix::new(0, 1, 1, vec![]),
            Err(PolyMatrixError::EmptyMatrix)
        );
        assert!(matches!(
            PolyMatrix::new(2, 1, 1, vec![Polynomial::zero(2)]),
            Err(PolyMatrixError::EntryCount { .. })
        ));
        assert!(matches!(
            PolyMatrix::new(1, 1, 1, vec![Polynomial::zero(3)]),
            Err(PolyMatrixError::EntrySpace { .. })
        ));
    }
}
