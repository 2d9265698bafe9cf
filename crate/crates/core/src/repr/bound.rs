use super::{Differentiated, Objective, PmiProblem, RepId, ReprError};
use crate::tamecheck::Expr;

/// Feasibility merit for "is there a point with `P >= 0` and `b <= b̂`":
/// `sum_j max(0, -q_j)^2 + max(0, b - b̂)^2`. Zero exactly on that set.
pub struct BoundMerit {
    b: Differentiated,
    q: Vec<Differentiated>,
    bhat: f64,
}

impl BoundMerit {
    pub fn new(prob: &PmiProblem, bhat: f64) -> Result<Self, ReprError> {
        if !bhat.is_finite() {
            return Err(ReprError::BadWeight(bhat));
        }
        let cp = prob.matrix.charpoly()?;
        Ok(Self {
            b: Differentiated::new(prob.objective.clone()),
            q: cp.q.into_iter().map(Differentiated::new).collect(),
            bhat,
        })
    }

    /// Same merit with the bound term dropped (`b̂ = +inf`).
    pub fn feasibility_only(prob: &PmiProblem) -> Result<Self, ReprError> {
        let mut m = Self::new(prob, 0.0)?;
        m.bhat = f64::INFINITY;
        Ok(m)
    }

    pub fn bhat(&self) -> f64 {
        self.bhat
    }

    /// Hinge residuals `max(0, -q_j)` followed by `max(0, b - b̂)`.
    fn residuals(&self, z: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = self.q.iter().map(|q| (-q.value(z)).max(0.0)).collect();
        r.push((self.b.value(z) - self.bhat).max(0.0));
        r
    }
}

impl Objective for BoundMerit {
    fn dim(&self) -> usize {
        self.b.p.num_vars()
    }

    fn weight(&self) -> f64 {
        self.bhat
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.residuals(z).iter().map(|r| r * r).sum()
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let r = self.residuals(z);
        let mut g = vec![0.0; self.dim()];
        for (q, &rj) in self.q.iter().zip(&r) {
            if rj > 0.0 {
                for (gi, d) in g.iter_mut().zip(q.gradient(z)) {
                    *gi -= 2.0 * rj * d;
                }
            }
        }
        let rb = *r.last().expect("bound term");
        if rb > 0.0 {
            for (gi, d) in g.iter_mut().zip(self.b.gradient(z)) {
                *gi += 2.0 * rb * d;
            }
        }
        g
    }

    fn rep(&self) -> RepId {
        RepId::Bound
    }

    fn recipe(&self) -> Result<Expr, ReprError> {
        let mut terms: Vec<Expr> = self
            .q
            .iter()
            .map(|q| Expr::squared_hinge(Expr::neg(Expr::from_polynomial(&q.p))))
            .collect();
        if self.bhat.is_finite() {
            terms.push(Expr::squared_hinge(Expr::add(vec![
                Expr::from_polynomial(&self.b.p),
                Expr::constant(-self.bhat),
            ])));
        }
        Ok(Expr::add(terms))
    }
}
