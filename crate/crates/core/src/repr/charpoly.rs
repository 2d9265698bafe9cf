use super::{add_into, check_weight, Differentiated, Objective, PmiProblem, RepId, ReprError};
use crate::linalg::SymMatrix;
use crate::tamecheck::Expr;

/// `b(y) - λ prod_j q_j(x, y)` with `q_j` the characteristic polynomial
/// coefficients of `P`.
pub struct CharPolyPenalty {
    b: Differentiated,
    q: Vec<Differentiated>,
    lambda: f64,
}

impl CharPolyPenalty {
    pub fn new(prob: &PmiProblem, lambda: f64) -> Result<Self, ReprError> {
        check_weight(lambda)?;
        let cp = prob.matrix.charpoly()?;
        Ok(Self {
            b: Differentiated::new(prob.objective.clone()),
            q: cp.q.into_iter().map(Differentiated::new).collect(),
            lambda,
        })
    }

    /// Products of the q values with index set `skip` left out.
    fn product_except(vals: &[f64], skip: &[usize]) -> f64 {
        vals.iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, v)| v)
            .product()
    }

    fn q_values(&self, z: &[f64]) -> Vec<f64> {
        self.q.iter().map(|q| q.value(z)).collect()
    }
}

impl Objective for CharPolyPenalty {
    fn dim(&self) -> usize {
        self.b.p.num_vars()
    }

    fn weight(&self) -> f64 {
        self.lambda
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.b.value(z) - self.lambda * self.q_values(z).iter().product::<f64>()
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let vals = self.q_values(z);
        let mut g = self.b.gradient(z);
        for (j, q) in self.q.iter().enumerate() {
            let c = self.lambda * Self::product_except(&vals, &[j]);
            if c == 0.0 {
                continue;
            }
            for (gi, dq) in g.iter_mut().zip(q.gradient(z)) {
                *gi -= c * dq;
            }
        }
        g
    }

    fn hessian(&self, z: &[f64]) -> Option<SymMatrix> {
        let vals = self.q_values(z);
        let grads: Vec<Vec<f64>> = self.q.iter().map(|q| q.gradient(z)).collect();
        let n = self.dim();
        let mut h = self.b.hessian(z);
        for (j, q) in self.q.iter().enumerate() {
            let c = Self::product_except(&vals, &[j]);
            if c != 0.0 {
                add_into(&mut h, &q.hessian(z), -self.lambda * c);
            }
            for k in 0..self.q.len() {
                if k == j {
                    continue;
                }
                let c = self.lambda * Self::product_except(&vals, &[j, k]);
                if c == 0.0 {
                    continue;
                }
                for a in 0..n {
                    for b in 0..=a {
                        // symmetrized outer product grad_j grad_k^T
                        let v = 0.5 * (grads[j][a] * grads[k][b] + grads[k][a] * grads[j][b]);
                        h.set(a, b, h.get(a, b) - c * v);
                    }
                }
            }
        }
        Some(h)
    }

    fn rep(&self) -> RepId {
        RepId::Charpoly
    }

    fn recipe(&self) -> Result<Expr, ReprError> {
        let mut prod = vec![Expr::constant(-self.lambda)];
        prod.extend(self.q.iter().map(|q| Expr::from_polynomial(&q.p)));
        Ok(Expr::add(vec![Expr::from_polynomial(&self.b.p), Expr::mul(prod)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::example1;
    use crate::poly::Polynomial;
    use crate::polymatrix::PolyMatrix;

    #[test]
    fn example_values() {
        let ex = example1();
        for lam in [0.1, 1.0, 7.0] {
            let f = CharPolyPenalty::new(&ex, lam).unwrap();
            assert_eq!(f.value(&[0.0, -1.0]), -1.0);
        }
        let f = CharPolyPenalty::new(&ex, 1.0).unwrap();
        assert_eq!(f.value(&[0.0, 0.0]), -2.0);
    }

    #[test]
    fn scalar_case() {
        // P = [x], b = y
        let m = PolyMatrix::new(1, 1, 1, vec![Polynomial::var(2, 0)]).unwrap();
        let prob = PmiProblem::new(m, Polynomial::var(2, 1), None, vec!["x".into(), "y".into()]).unwrap();
        let f = CharPolyPenalty::new(&prob, 1.0).unwrap();
        for z in [[0.3, -2.0], [1.5, 0.25]] {
            assert!((f.value(&z) - (z[1] - z[0])).abs() < 1e-15);
        }
        assert_eq!(f.gradient(&[0.3, 0.1]), vec![-1.0, 1.0]);
    }

    #[test]
    fn weight_must_be_positive() {
        assert!(CharPolyPenalty::new(&example1(), 0.0).is_err());
        assert!(CharPolyPenalty::new(&example1(), f64::NAN).is_err());
    }
}
