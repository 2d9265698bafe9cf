use super::{check_weight, Differentiated, Objective, PmiProblem, RepId, ReprError, DESCARTES_TOL};
use crate::linalg::SymMatrix;
use crate::polymatrix::CharPoly;
use crate::tamecheck::Expr;

/// `b(y) + λ [P(x, y) is not PSD]`.
///
/// Piecewise constant penalty: the gradient is that of `b`, which is
/// correct away from the boundary of the feasible set. Not for descent.
pub struct IndicatorLagrangian {
    b: Differentiated,
    cp: CharPoly,
    lambda: f64,
}

impl IndicatorLagrangian {
    pub fn new(prob: &PmiProblem, lambda: f64) -> Result<Self, ReprError> {
        check_weight(lambda)?;
        Ok(Self {
            b: Differentiated::new(prob.objective.clone()),
            cp: prob.matrix.charpoly()?,
            lambda,
        })
    }

    pub fn penalty(&self, z: &[f64]) -> f64 {
        if self.cp.psd_by_descartes(z, DESCARTES_TOL) { 0.0 } else { 1.0 }
    }
}

impl Objective for IndicatorLagrangian {
    fn dim(&self) -> usize {
        self.b.p.num_vars()
    }

    fn weight(&self) -> f64 {
        self.lambda
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.b.value(z) + self.lambda * self.penalty(z)
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        self.b.gradient(z)
    }

    fn hessian(&self, z: &[f64]) -> Option<SymMatrix> {
        Some(self.b.hessian(z))
    }

    fn is_smooth(&self) -> bool {
        false
    }

    fn rep(&self) -> RepId {
        RepId::Indicator
    }

    /// `b + λ (1 - prod_j step(q_j))`.
    fn recipe(&self) -> Result<Expr, ReprError> {
        let all_ok = Expr::mul(
            self.cp
                .q
                .iter()
                .map(|q| Expr::step(Expr::from_polynomial(q)))
                .collect(),
        );
        Ok(Expr::add(vec![
            Expr::from_polynomial(&self.b.p),
            Expr::mul(vec![
                Expr::constant(self.lambda),
                Expr::add(vec![Expr::constant(1.0), Expr::neg(all_ok)]),
            ]),
        ]))
    }
}
