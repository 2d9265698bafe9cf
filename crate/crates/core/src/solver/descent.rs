use serde::Serialize;

use super::{norm, SolveConfig, SolveError, TrajectoryRow};
use crate::linalg::{Cholesky, SymMatrix};
use crate::repr::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIters,
    /// The next accepted step would have left the search box.
    BoxExit,
    /// No step length satisfied the Armijo condition.
    LineSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    /// Accepted steps.
    pub iters: usize,
    pub stop: StopReason,
    /// One row per iterate, `stage` 0 and `weight` from the objective.
    pub trace: Vec<TrajectoryRow>,
}

/// Armijo-backtracking gradient descent.
pub fn minimize_gd(
    obj: &dyn Objective,
    start: &[f64],
    cfg: &SolveConfig,
) -> Result<InnerOutcome, SolveError> {
    descend(obj, start, cfg, false, &mut |_, _| {})
}

/// Damped Newton on the exact (or finite-difference) Hessian, falling back
/// to the gradient direction when the Hessian is not positive definite.
pub fn minimize_newton(
    obj: &dyn Objective,
    start: &[f64],
    cfg: &SolveConfig,
) -> Result<InnerOutcome, SolveError> {
    descend(obj, start, cfg, true, &mut |_, _| {})
}

/// Shared loop; `on_step(from, to)` is called for every accepted step.
pub(crate) fn descend(
    obj: &dyn Objective,
    start: &[f64],
    cfg: &SolveConfig,
    newton: bool,
    on_step: &mut dyn FnMut(&[f64], &[f64]),
) -> Result<InnerOutcome, SolveError> {
    let mut z = start.to_vec();
    let mut f = obj.value(&z);
    if !f.is_finite() {
        return Err(SolveError::InfeasibleStart);
    }
    let mut trace = Vec::new();
    let mut iters = 0;
    let mut stop = StopReason::MaxIters;
    let mut gn;
    loop {
        let g = obj.gradient(&z);
        gn = norm(&g);
        if cfg.record_trajectory {
            trace.push(TrajectoryRow {
                stage: 0,
                weight: obj.weight(),
                iter: iters,
                value: f,
                grad_norm: gn,
                point: z.clone(),
            });
        }
        if gn <= cfg.grad_tol {
            stop = StopReason::Converged;
            break;
        }
        if iters >= cfg.max_iters {
            break;
        }
        let d = if newton { newton_direction(obj, &z, &g) } else { g.clone() };
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..cfg.max_backtracks {
            let zn: Vec<f64> = z.iter().zip(&d).map(|(a, b)| a - t * b).collect();
            let fk = obj.value(&zn);
            if fk.is_finite() && fk <= f - cfg.armijo_c * t * slope {
                accepted = Some((zn, fk));
                break;
            }
            t *= cfg.shrink;
        }
        let Some((zn, fk)) = accepted else {
            stop = StopReason::LineSearch;
            break;
        };
        if let Some(bx) = &cfg.search_box {
            if !bx.contains(&zn) {
                stop = StopReason::BoxExit;
                break;
            }
        }
        on_step(&z, &zn);
        z = zn;
        f = fk;
        iters += 1;
    }
    Ok(InnerOutcome {
        point: z,
        value: f,
        grad_norm: gn,
        iters,
        stop,
        trace,
    })
}

fn newton_direction(obj: &dyn Objective, z: &[f64], g: &[f64]) -> Vec<f64> {
    let h = obj.hessian(z).unwrap_or_else(|| fd_hessian(obj, z));
    if let Ok(ch) = Cholesky::new(&h) {
        let d = ch.solve(g);
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        if slope > 0.0 && d.iter().all(|v| v.is_finite()) {
            return d;
        }
    }
    g.to_vec()
}

/// Central differences of the gradient, symmetrized.
pub(crate) fn fd_hessian(obj: &dyn Objective, z: &[f64]) -> SymMatrix {
    let n = z.len();
    let mut cols = Vec::with_capacity(n);
    let mut p = z.to_vec();
    for i in 0..n {
        let h = 1e-5 * (1.0 + z[i].abs());
        p[i] = z[i] + h;
        let gp = obj.gradient(&p);
        p[i] = z[i] - h;
        let gm = obj.gradient(&p);
        p[i] = z[i];
        cols.push(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<f64>>());
    }
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            out.set(i, j, 0.5 * (cols[i][j] + cols[j][i]));
        }
    }
    out
}
