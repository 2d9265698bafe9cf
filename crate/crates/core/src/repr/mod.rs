//! Unconstrained reformulations of `min b(y) s.t. P(x, y) >= 0`.
//!
//! Every representation is an [`Objective`]: a value, an exact gradient
//! where the value is finite, an optional exact Hessian, and a symbolic
//! recipe that [`crate::tamecheck`] can classify.

mod barrier;
mod bound;
mod charpoly;
mod factorization;
mod indicator;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::SymMatrix;
use crate::poly::{PolyError, Polynomial};
use crate::polymatrix::{PolyMatrix, PolyMatrixError};
use crate::tamecheck::Expr;

pub use barrier::{DetRootBarrier, LogDetBarrier};
pub use bound::BoundMerit;
pub use charpoly::CharPolyPenalty;
pub use factorization::{factorization_certificate, FactorizationObjective, FactorizationState};
pub use indicator::IndicatorLagrangian;

/// Descartes tolerance used where a representation needs a PSD decision.
pub const DESCARTES_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReprError {
    #[error("weight must be positive and finite, got {0}")]
    BadWeight(f64),
    #[error("exponent r must lie in (0, 1), got {0}")]
    BadExponent(f64),
    #[error("rank {rank} outside 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("objective depends on x-block variables")]
    ObjectiveDependsOnX,
    #[error("objective has {got} variables, matrix has {expected}")]
    ObjectiveSpace { expected: usize, got: usize },
    #[error("Q has {got} variables, expected {expected} = m(m+1)/2")]
    QSpace { expected: usize, got: usize },
    #[error("factorized solve requires the unit-trace constraint")]
    NotTraceOne,
    #[error("box has {got} coordinates, problem has {expected}")]
    BoxDim { expected: usize, got: usize },
    #[error("box coordinate {0} has lower >= upper")]
    BoxOrder(usize),
    #[error("{0} variable names for {1} variables")]
    Names(usize, usize),
    #[error(transparent)]
    PolyMatrix(#[from] PolyMatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Axis-aligned box `lo <= z <= hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SearchBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, ReprError> {
        if lo.len() != hi.len() {
            return Err(ReprError::BoxDim {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if let Some(i) = (0..lo.len()).find(|&i| !(lo[i] < hi[i])) {
            return Err(ReprError::BoxOrder(i));
        }
        Ok(Self { lo, hi })
    }

    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Self {
        Self {
            lo: vec![lo; dim],
            hi: vec![hi; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }
}

/// `min b(y) s.t. P(x, y) >= 0`, over `(x, y)` with the x-block first.
#[derive(Debug, Clone, PartialEq)]
pub struct PmiProblem {
    pub matrix: PolyMatrix,
    /// Objective over all `k + l` variables; must not involve x.
    pub objective: Polynomial,
    pub search_box: Option<SearchBox>,
    pub names: Vec<String>,
}

impl PmiProblem {
    pub fn new(
        matrix: PolyMatrix,
        objective: Polynomial,
        search_box: Option<SearchBox>,
        names: Vec<String>,
    ) -> Result<Self, ReprError> {
        let n = matrix.num_vars();
        if objective.num_vars() != n {
            return Err(ReprError::ObjectiveSpace {
                expected: n,
                got: objective.num_vars(),
            });
        }
        if objective.depends_on_any(0..matrix.x_vars()) {
            return Err(ReprError::ObjectiveDependsOnX);
        }
        if let Some(b) = &search_box {
            if b.dim() != n {
                return Err(ReprError::BoxDim {
                    expected: n,
                    got: b.dim(),
                });
            }
            SearchBox::new(b.lo.clone(), b.hi.clone())?;
        }
        if names.len() != n {
            return Err(ReprError::Names(names.len(), n));
        }
        Ok(Self {
            matrix,
            objective,
            search_box,
            names,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.matrix.num_vars()
    }

    /// The declared box, or `[-2, 2]` per coordinate.
    pub fn box_or_default(&self) -> SearchBox {
        self.search_box
            .clone()
            .unwrap_or_else(|| SearchBox::uniform(self.num_vars(), -2.0, 2.0))
    }

    pub fn b(&self, z: &[f64]) -> f64 {
        self.objective.eval_at(z)
    }

    /// `P(z) >= 0` by eigenvalues, at tolerance `tol`.
    pub fn is_feasible(&self, z: &[f64], tol: f64) -> bool {
        crate::linalg::is_psd(&self.matrix.eval_at(z), tol)
    }
}

/// `min Q(X)` over symmetric PSD `X` (optionally with `tr X = 1`). `Q` is a
/// polynomial in the upper-triangle entries `X_ij, i <= j`, ordered
/// row-major: `X_00, X_01, ..., X_0(m-1), X_11, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixVarProblem {
    pub dim: usize,
    pub q: Polynomial,
    pub trace_one: bool,
}

impl MatrixVarProblem {
    pub fn new(dim: usize, q: Polynomial, trace_one: bool) -> Result<Self, ReprError> {
        let expected = dim * (dim + 1) / 2;
        if q.num_vars() != expected {
            return Err(ReprError::QSpace {
                expected,
                got: q.num_vars(),
            });
        }
        Ok(Self { dim, q, trace_one })
    }

    pub fn num_entries(&self) -> usize {
        self.dim * (self.dim + 1) / 2
    }

    /// Position of `X_ij` among Q's variables.
    pub fn entry_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.dim - i * i.saturating_sub(1) / 2 + (j - i)
    }

    /// Upper-triangle entries of `x` in Q's variable order.
    pub fn half_vec(&self, x: &SymMatrix) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_entries());
        for i in 0..self.dim {
            for j in i..self.dim {
                out.push(x.get(i, j));
            }
        }
        out
    }

    pub fn value_at(&self, x: &SymMatrix) -> f64 {
        self.q.eval_at(&self.half_vec(x))
    }

    /// Symmetric gradient `G` of `Q` at `X`: `G_ii = dQ/dX_ii`,
    /// `G_ij = dQ/dX_ij / 2` off the diagonal, so `dQ = tr(G dX)`.
    pub fn symmetric_gradient(&self, grad_q: &[Polynomial], x: &SymMatrix) -> SymMatrix {
        let h = self.half_vec(x);
        let mut g = SymMatrix::zeros(self.dim);
        let mut k = 0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = grad_q[k].eval_at(&h);
                g.set(i, j, if i == j { d } else { 0.5 * d });
                k += 1;
            }
        }
        g
    }
}

/// Representation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepId {
    Indicator,
    Charpoly,
    Factorization,
    Logdet,
    Detr,
    Bound,
}

impl RepId {
    pub const ALL: [RepId; 6] = [
        RepId::Indicator,
        RepId::Charpoly,
        RepId::Factorization,
        RepId::Logdet,
        RepId::Detr,
        RepId::Bound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RepId::Indicator => "indicator",
            RepId::Charpoly => "charpoly",
            RepId::Factorization => "factorization",
            RepId::Logdet => "logdet",
            RepId::Detr => "detr",
            RepId::Bound => "bound",
        }
    }
}

impl fmt::Display for RepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RepId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown representation '{s}'"))
    }
}

/// An unconstrained objective `R^dim -> R ∪ {+inf}`.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    /// Penalty or barrier weight.
    fn weight(&self) -> f64;

    fn value(&self, z: &[f64]) -> f64;

    /// Exact gradient; only meaningful where `value` is finite.
    fn gradient(&self, z: &[f64]) -> Vec<f64>;

    /// Exact Hessian when the representation provides one.
    fn hessian(&self, _z: &[f64]) -> Option<SymMatrix> {
        None
    }

    fn is_smooth(&self) -> bool {
        true
    }

    fn rep(&self) -> RepId;

    /// Symbolic form of the objective for definability classification.
    fn recipe(&self) -> Result<Expr, ReprError>;
}

pub(crate) fn check_weight(w: f64) -> Result<(), ReprError> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(ReprError::BadWeight(w))
    }
}

/// Polynomial together with its gradient and Hessian polynomials.
#[derive(Debug, Clone)]
pub(crate) struct Differentiated {
    pub p: Polynomial,
    pub grad: Vec<Polynomial>,
    pub hess: Vec<Vec<Polynomial>>,
}

impl Differentiated {
    pub fn new(p: Polynomial) -> Self {
        Self {
            grad: p.grad(),
            hess: p.hessian(),
            p,
        }
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        self.p.eval_at(z)
    }

    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval_at(z)).collect()
    }

    pub fn hessian(&self, z: &[f64]) -> SymMatrix {
        let n = self.grad.len();
        let mut h = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                h.set(i, j, self.hess[i][j].eval_at(z));
            }
        }
        h
    }
}

pub(crate) fn add_into(h: &mut SymMatrix, other: &SymMatrix, c: f64) {
    let n = h.dim();
    for i in 0..n {
        for j in 0..=i {
            h.set(i, j, h.get(i, j) + c * other.get(i, j));
        }
    }
}
