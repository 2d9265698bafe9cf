//! Log-det and det^r barriers, both `+inf` outside the PD cone.

use super::{check_weight, Differentiated, Objective, PmiProblem, RepId, ReprError};
use crate::linalg::{Cholesky, SymMatrix};
use crate::polymatrix::PolyMatrix;
use crate::tamecheck::Expr;

#[derive(Debug, Clone)]
struct Derivs {
    p: PolyMatrix,
    d1: Vec<PolyMatrix>,
    // lower triangle, d2[i][j] for j <= i
    d2: Vec<Vec<PolyMatrix>>,
}

/// Barrier quantities at one point.
struct Local {
    logdet: f64,
    inv: SymMatrix,
    // W_i = P^{-1} dP/dz_i, dense row-major
    w: Vec<Vec<f64>>,
    // g_i = tr W_i
    g: Vec<f64>,
}

impl Derivs {
    fn new(p: &PolyMatrix) -> Self {
        let n = p.num_vars();
        let d1: Vec<PolyMatrix> = (0..n).map(|i| p.partial(i)).collect();
        let d2 = (0..n)
            .map(|i| (0..=i).map(|j| d1[i].partial(j)).collect())
            .collect();
        Self {
            p: p.clone(),
            d1,
            d2,
        }
    }

    fn logdet(&self, z: &[f64]) -> Option<f64> {
        Cholesky::new(&self.p.eval_at(z)).ok().map(|c| c.logdet())
    }

    fn local(&self, z: &[f64]) -> Option<Local> {
        let chol = Cholesky::new(&self.p.eval_at(z)).ok()?;
        let inv = chol.inverse();
        let w: Vec<Vec<f64>> = self.d1.iter().map(|d| inv.mul_dense(&d.eval_at(z))).collect();
        let m = inv.dim();
        let g = w.iter().map(|wi| (0..m).map(|a| wi[a * m + a]).sum()).collect();
        Some(Local {
            logdet: chol.logdet(),
            inv,
            w,
            g,
        })
    }

    /// `(tr(W_i W_j), tr(P^{-1} P_ij))` for `j <= i`.
    fn second(&self, loc: &Local, z: &[f64], i: usize, j: usize) -> (f64, f64) {
        let m = loc.inv.dim();
        let (wi, wj) = (&loc.w[i], &loc.w[j]);
        let mut tww = 0.0;
        for a in 0..m {
            for b in 0..m {
                tww += wi[a * m + b] * wj[b * m + a];
            }
        }
        (tww, loc.inv.trace_product(&self.d2[i][j].eval_at(z)))
    }
}

/// `b(y) - μ log det P(x, y)` on `P > 0`, `+inf` elsewhere.
pub struct LogDetBarrier {
    b: Differentiated,
    d: Derivs,
    mu: f64,
}

impl LogDetBarrier {
    pub fn new(prob: &PmiProblem, mu: f64) -> Result<Self, ReprError> {
        check_weight(mu)?;
        Ok(Self {
            b: Differentiated::new(prob.objective.clone()),
            d: Derivs::new(&prob.matrix),
            mu,
        })
    }
}

impl Objective for LogDetBarrier {
    fn dim(&self) -> usize {
        self.b.p.num_vars()
    }

    fn weight(&self) -> f64 {
        self.mu
    }

    fn value(&self, z: &[f64]) -> f64 {
        match self.d.logdet(z) {
            Some(ld) => self.b.value(z) - self.mu * ld,
            None => f64::INFINITY,
        }
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let Some(loc) = self.d.local(z) else {
            return vec![f64::NAN; self.dim()];
        };
        self.b
            .gradient(z)
            .into_iter()
            .zip(&loc.g)
            .map(|(db, g)| db - self.mu * g)
            .collect()
    }

    fn hessian(&self, z: &[f64]) -> Option<SymMatrix> {
        let loc = self.d.local(z)?;
        let mut h = self.b.hessian(z);
        for i in 0..self.dim() {
            for j in 0..=i {
                let (tww, tpp) = self.d.second(&loc, z, i, j);
                h.set(i, j, h.get(i, j) + self.mu * (tww - tpp));
            }
        }
        Some(h)
    }

    fn rep(&self) -> RepId {
        RepId::Logdet
    }

    /// `b - μ log(det P)`, with `det P` the last characteristic
    /// polynomial coefficient.
    fn recipe(&self) -> Result<Expr, ReprError> {
        let det = self.d.p.charpoly()?.q.pop().expect("non-empty");
        Ok(Expr::add(vec![
            Expr::from_polynomial(&self.b.p),
            Expr::mul(vec![
                Expr::constant(-self.mu),
                Expr::log(Expr::from_polynomial(&det)),
            ]),
        ]))
    }
}

/// `b(y) - μ det(P)^r` on `P > 0`, `+inf` elsewhere; the power is
/// evaluated as `exp(r log det P)`.
pub struct DetRootBarrier {
    b: Differentiated,
    d: Derivs,
    mu: f64,
    r: f64,
}

impl DetRootBarrier {
    pub fn new(prob: &PmiProblem, mu: f64, r: f64) -> Result<Self, ReprError> {
        check_weight(mu)?;
        if !(r > 0.0 && r < 1.0) {
            return Err(ReprError::BadExponent(r));
        }
        Ok(Self {
            b: Differentiated::new(prob.objective.clone()),
            d: Derivs::new(&prob.matrix),
            mu,
            r,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.r
    }
}

impl Objective for DetRootBarrier {
    fn dim(&self) -> usize {
        self.b.p.num_vars()
    }

    fn weight(&self) -> f64 {
        self.mu
    }

    fn value(&self, z: &[f64]) -> f64 {
        match self.d.logdet(z) {
            Some(ld) => self.b.value(z) - self.mu * (self.r * ld).exp(),
            None => f64::INFINITY,
        }
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let Some(loc) = self.d.local(z) else {
            return vec![f64::NAN; self.dim()];
        };
        let c = self.mu * self.r * (self.r * loc.logdet).exp();
        self.b
            .gradient(z)
            .into_iter()
            .zip(&loc.g)
            .map(|(db, g)| db - c * g)
            .collect()
    }

    fn hessian(&self, z: &[f64]) -> Option<SymMatrix> {
        let loc = self.d.local(z)?;
        let c = self.mu * self.r * (self.r * loc.logdet).exp();
        let mut h = self.b.hessian(z);
        for i in 0..self.dim() {
            for j in 0..=i {
                let (tww, tpp) = self.d.second(&loc, z, i, j);
                let inner = self.r * loc.g[i] * loc.g[j] - tww + tpp;
                h.set(i, j, h.get(i, j) - c * inner);
            }
        }
        Some(h)
    }

    fn rep(&self) -> RepId {
        RepId::Detr
    }

    /// `b - μ exp(r log(det P))`.
    fn recipe(&self) -> Result<Expr, ReprError> {
        let det = self.d.p.charpoly()?.q.pop().expect("non-empty");
        let root = Expr::exp(Expr::mul(vec![
            Expr::constant(self.r),
            Expr::log(Expr::from_polynomial(&det)),
        ]));
        Ok(Expr::add(vec![
            Expr::from_polynomial(&self.b.p),
            Expr::mul(vec![Expr::constant(-self.mu), root]),
        ]))
    }
}
