//! Low-rank factorization `X = v^T v` of the matrix variable.

use serde::Serialize;

use super::{MatrixVarProblem, Objective, RepId, ReprError};
use crate::linalg::{min_eigenvalue, SymMatrix};
use crate::poly::Polynomial;
use crate::tamecheck::Expr;

/// `Q(v^T v)` over `v ∈ R^{r x m}`, flattened row-major.
pub struct FactorizationObjective {
    prob: MatrixVarProblem,
    rank: usize,
    grad_q: Vec<Polynomial>,
}

/// `v^T v` for row-major `v` with `rank` rows.
pub fn gram(v: &[f64], rank: usize, m: usize) -> SymMatrix {
    let mut x = SymMatrix::zeros(m);
    for i in 0..m {
        for j in 0..=i {
            let s = (0..rank).map(|a| v[a * m + i] * v[a * m + j]).sum();
            x.set(i, j, s);
        }
    }
    x
}

/// `v G` for row-major `v` (`rank x m`) and symmetric `G`.
fn times_sym(v: &[f64], rank: usize, g: &SymMatrix) -> Vec<f64> {
    let m = g.dim();
    let mut out = vec![0.0; rank * m];
    for a in 0..rank {
        for j in 0..m {
            out[a * m + j] = (0..m).map(|k| v[a * m + k] * g.get(k, j)).sum();
        }
    }
    out
}

impl FactorizationObjective {
    pub fn new(prob: &MatrixVarProblem, rank: usize) -> Result<Self, ReprError> {
        if rank == 0 || rank > prob.dim {
            return Err(ReprError::RankOutOfRange {
                rank,
                dim: prob.dim,
            });
        }
        Ok(Self {
            prob: prob.clone(),
            rank,
            grad_q: prob.q.grad(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self, v: &[f64]) -> SymMatrix {
        gram(v, self.rank, self.prob.dim)
    }

    /// Symmetric gradient of `Q` at `v^T v`.
    pub fn sym_gradient(&self, v: &[f64]) -> SymMatrix {
        self.prob.symmetric_gradient(&self.grad_q, &self.gram(v))
    }
}

impl Objective for FactorizationObjective {
    fn dim(&self) -> usize {
        self.rank * self.prob.dim
    }

    /// No penalty weight; the trace constraint is enforced by projection.
    fn weight(&self) -> f64 {
        1.0
    }

    fn value(&self, v: &[f64]) -> f64 {
        self.prob.value_at(&self.gram(v))
    }

    /// `2 v G`.
    fn gradient(&self, v: &[f64]) -> Vec<f64> {
        let g = self.sym_gradient(v);
        times_sym(v, self.rank, &g).into_iter().map(|t| 2.0 * t).collect()
    }

    fn rep(&self) -> RepId {
        RepId::Factorization
    }

    /// `Q` composed with the entries of `v^T v`.
    fn recipe(&self) -> Result<Expr, ReprError> {
        let (m, r) = (self.prob.dim, self.rank);
        let n = r * m;
        let mut subs = Vec::with_capacity(self.prob.num_entries());
        for i in 0..m {
            for j in i..m {
                let mut s = Polynomial::zero(n);
                for a in 0..r {
                    s = &s + &(&Polynomial::var(n, a * m + i) * &Polynomial::var(n, a * m + j));
                }
                subs.push(s);
            }
        }
        Ok(Expr::from_polynomial(&self.prob.q.compose(&subs)?))
    }
}

/// Optimality certificate for `min Q(X), tr X = 1, X >= 0` at `X = v^T v`.
///
/// With `λ = tr(G X)` and `S = G - λ I`, the point is a global minimizer of
/// a convex `Q` when `S >= 0` and `S v^T = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationState {
    pub rank: usize,
    pub v: Vec<f64>,
    pub lambda: f64,
    pub min_eig_s: f64,
    pub residual: f64,
}

impl FactorizationState {
    pub fn certified(&self, tol: f64) -> bool {
        self.min_eig_s >= -tol && self.residual <= tol
    }

    pub fn trace(&self) -> f64 {
        self.v.iter().map(|t| t * t).sum()
    }
}

pub fn factorization_certificate(obj: &FactorizationObjective, v: &[f64]) -> FactorizationState {
    let g = obj.sym_gradient(v);
    let x = obj.gram(v);
    let lambda = g.trace_product(&x);
    let s = g.add_scaled_identity(-lambda);
    let min_eig_s = min_eigenvalue(&s).unwrap_or(f64::NEG_INFINITY);
    // ||S v^T||_F = ||v S||_F
    let residual = times_sym(v, obj.rank, &s)
        .iter()
        .map(|t| t * t)
        .sum::<f64>()
        .sqrt();
    FactorizationState {
        rank: obj.rank,
        v: v.to_vec(),
        lambda,
        min_eig_s,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(m: usize, coefs: &[f64]) -> MatrixVarProblem {
        let n = m * (m + 1) / 2;
        let terms = coefs.iter().enumerate().map(|(k, &c)| {
            let mut e = vec![0; n];
            e[k] = 1;
            (e, c)
        });
        MatrixVarProblem::new(m, Polynomial::from_terms(n, terms).unwrap(), true).unwrap()
    }

    #[test]
    fn trace_objective_is_constant_and_certified() {
        let p = linear(2, &[1.0, 0.0, 1.0]);
        let f = FactorizationObjective::new(&p, 2).unwrap();
        let v = [0.5, -0.5, 0.1, (0.5f64 - 0.01).sqrt()];
        assert!((f.value(&v) - 1.0).abs() < 1e-14);
        let c = factorization_certificate(&f, &v);
        assert!((c.lambda - 1.0).abs() < 1e-14);
        assert!(c.certified(1e-12));
    }

    #[test]
    fn corner_entry() {
        let p = linear(2, &[1.0, 0.0, 0.0]);
        let f = FactorizationObjective::new(&p, 1).unwrap();
        assert_eq!(f.value(&[1.0, 0.0]), 1.0);
        assert_eq!(f.gradient(&[1.0, 0.0]), vec![2.0, 0.0]);
        let c = factorization_certificate(&f, &[0.0, 1.0]);
        assert_eq!(c.lambda, 0.0);
        assert!(c.certified(1e-12));
        let c = factorization_certificate(&f, &[1.0, 0.0]);
        assert!((c.min_eig_s + 1.0).abs() < 1e-12);
        assert!(!c.certified(1e-7));
    }

    #[test]
    fn rank_one_determinant_vanishes() {
        // X00 X11 - X01^2
        let q = Polynomial::from_terms(3, vec![(vec![1, 0, 1], 1.0), (vec![0, 2, 0], -1.0)]).unwrap();
        let p = MatrixVarProblem::new(2, q, true).unwrap();
        let f = FactorizationObjective::new(&p, 1).unwrap();
        assert!(f.value(&[0.6, 0.8]).abs() < 1e-15);
        let f2 = FactorizationObjective::new(&p, 2).unwrap();
        let v = [0.6, 0.0, 0.0, 0.8];
        assert!((f2.value(&v) - 0.36 * 0.64).abs() < 1e-15);
        assert!(FactorizationObjective::new(&p, 3).is_err());
        assert!(FactorizationObjective::new(&p, 0).is_err());
    }
}
