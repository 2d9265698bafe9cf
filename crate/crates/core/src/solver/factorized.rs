use rand::Rng;
use rayon::prelude::*;

use super::{
    cmp_candidates, default_restarts, norm, restart_rng, SolveConfig, SolveError, SolveResult,
    TrajectoryRow,
};
use crate::repr::{
    factorization_certificate, FactorizationObjective, FactorizationState, MatrixVarProblem,
    Objective, RepId, ReprError,
};

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    v.iter_mut().for_each(|t| *t /= n);
}

/// Projected Armijo descent on the unit Frobenius sphere. Returns the final
/// point, accepted steps and trace.
fn sphere_descent(
    obj: &FactorizationObjective,
    mut v: Vec<f64>,
    cfg: &SolveConfig,
    stage: usize,
    trace: &mut Vec<TrajectoryRow>,
) -> (Vec<f64>, usize) {
    let mut f = obj.value(&v);
    let mut iters = 0;
    loop {
        let g = obj.gradient(&v);
        let radial: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
        let gr: Vec<f64> = g.iter().zip(&v).map(|(a, b)| a - radial * b).collect();
        let gn = norm(&gr);
        if cfg.record_trajectory {
            trace.push(TrajectoryRow {
                stage,
                weight: obj.rank() as f64,
                iter: iters,
                value: f,
                grad_norm: gn,
                point: v.clone(),
            });
        }
        if gn <= cfg.grad_tol || iters >= cfg.max_iters {
            break;
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..cfg.max_backtracks {
            let mut vn: Vec<f64> = v.iter().zip(&gr).map(|(a, b)| a - t * b).collect();
            normalize(&mut vn);
            let fk = obj.value(&vn);
            let ok = fk.is_finite() && fk <= f - cfg.armijo_c * t * gn * gn;
            // keep shrinking while the value still improves; a full step
            // tends to bounce across a narrow valley
            if ok && accepted.as_ref().map_or(true, |(_, b)| fk < *b) {
                accepted = Some((vn, fk));
            } else if accepted.is_some() {
                break;
            }
            t *= cfg.shrink;
        }
        let Some((vn, fk)) = accepted else { break };
        v = vn;
        f = fk;
        iters += 1;
    }
    (v, iters)
}

struct Run {
    value: f64,
    state: FactorizationState,
    iters: usize,
    trace: Vec<TrajectoryRow>,
}

/// `min Q(v^T v)` over `||v||_F = 1`, followed by the optimality
/// certificate. With `cfg.rank_escalation`, an uncertified solution of
/// rank `r < m` is padded with a small random row and solved again at rank
/// `r + 1`.
pub fn solve_factorized(
    prob: &MatrixVarProblem,
    rank: usize,
    cfg: &SolveConfig,
) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    if !prob.trace_one {
        return Err(ReprError::NotTraceOne.into());
    }
    FactorizationObjective::new(prob, rank)?;
    let m = prob.dim;
    let restarts = cfg.restarts_or(default_restarts(RepId::Factorization));
    let runs: Vec<Run> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(cfg.seed, i);
            let mut r = rank;
            let mut v: Vec<f64> = (0..r * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            normalize(&mut v);
            let mut trace = Vec::new();
            let mut iters = 0;
            let mut stage = 0;
            loop {
                let obj = FactorizationObjective::new(prob, r).expect("rank checked");
                let (vf, k) = sphere_descent(&obj, v, cfg, stage, &mut trace);
                iters += k;
                let state = factorization_certificate(&obj, &vf);
                if state.certified(cfg.cert_tol) || !cfg.rank_escalation || r >= m {
                    return Run {
                        value: obj.value(&vf),
                        state,
                        iters,
                        trace,
                    };
                }
                v = vf;
                v.extend((0..m).map(|_| 1e-3 * rng.gen_range(-1.0..1.0)));
                normalize(&mut v);
                r += 1;
                stage += 1;
            }
        })
        .collect();
    let iterations = runs.iter().map(|r| r.iters).sum();
    // prefer certified runs, then lower value
    let best = runs
        .into_iter()
        .min_by(|a, b| {
            let ca = a.state.certified(cfg.cert_tol);
            let cb = b.state.certified(cfg.cert_tol);
            cb.cmp(&ca)
                .then_with(|| cmp_candidates((a.value, &a.state.v), (b.value, &b.state.v)))
        })
        .expect("at least one restart");
    let certified = best.state.certified(cfg.cert_tol);
    let mut res = SolveResult::new(RepId::Factorization, best.state.v.clone(), best.value, true);
    res.iterations = iterations;
    res.trajectory = best.trace;
    res.certified = Some(certified);
    res.certificate = Some(best.state);
    Ok(res)
}
