use rayon::prelude::*;

use super::descent::descend;
use super::{
    bisection_solve, cmp_candidates, default_restarts, restart_rng, sample_box, Schedule,
    SolveConfig, SolveError, SolveResult, TrajectoryRow,
};
use crate::polymatrix::CharPoly;
use crate::repr::{
    CharPolyPenalty, DetRootBarrier, LogDetBarrier, Objective, PmiProblem, RepId, SearchBox,
    DESCARTES_TOL,
};

/// Runs the driver appropriate for `rep` on a PMI problem.
pub fn solve_pmi(prob: &PmiProblem, rep: RepId, cfg: &SolveConfig) -> Result<SolveResult, SolveError> {
    match rep {
        RepId::Charpoly | RepId::Logdet | RepId::Detr => continuation_solve(prob, rep, cfg),
        RepId::Bound => bisection_solve(prob, cfg),
        RepId::Indicator | RepId::Factorization => Err(SolveError::Unsupported(rep)),
    }
}

struct RestartRun {
    best: Option<(f64, Vec<f64>)>,
    trace: Vec<TrajectoryRow>,
    iters: usize,
}

fn keep_better(best: &mut Option<(f64, Vec<f64>)>, b: f64, z: &[f64]) {
    let better = match best {
        None => true,
        Some((bv, bz)) => cmp_candidates((b, z), (*bv, bz)).is_lt(),
    };
    if better {
        *best = Some((b, z.to_vec()));
    }
}

/// Last point on the segment `from -> to` that passes the Descartes test.
fn boundary_crossing(cp: &CharPoly, from: &[f64], to: &[f64]) -> Vec<f64> {
    let at = |s: f64| -> Vec<f64> { from.iter().zip(to).map(|(a, b)| a + s * (b - a)).collect() };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if cp.psd_by_descartes(&at(mid), DESCARTES_TOL) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo)
}

/// Weight continuation with multistart.
///
/// Barriers (`logdet`, `detr`) follow a decreasing barrier weight with
/// damped Newton, each restart starting from a random interior point of
/// the box. The characteristic-polynomial penalty uses gradient descent
/// along an increasing weight; since its stationary points need not be
/// feasible, each restart reports the best feasible iterate or boundary
/// crossing seen along its path.
pub fn continuation_solve(
    prob: &PmiProblem,
    rep: RepId,
    cfg: &SolveConfig,
) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    let bx = cfg.search_box.clone().unwrap_or_else(|| prob.box_or_default());
    if bx.dim() != prob.num_vars() {
        return Err(SolveError::Config("box dimension does not match the problem".into()));
    }
    let schedule = match (cfg.schedule, rep) {
        (Some(s), _) => s,
        (None, RepId::Charpoly) => Schedule::penalty_default(),
        (None, RepId::Logdet | RepId::Detr) => Schedule::barrier_default(),
        (None, other) => return Err(SolveError::Unsupported(other)),
    };
    let weights = schedule.weights();
    let stages: Vec<Box<dyn Objective>> = weights
        .iter()
        .map(|&w| -> Result<Box<dyn Objective>, SolveError> {
            Ok(match rep {
                RepId::Charpoly => Box::new(CharPolyPenalty::new(prob, w)?),
                RepId::Logdet => Box::new(LogDetBarrier::new(prob, w)?),
                RepId::Detr => Box::new(DetRootBarrier::new(prob, w, cfg.detr_exponent)?),
                other => return Err(SolveError::Unsupported(other)),
            })
        })
        .collect::<Result<_, _>>()?;
    let inner = SolveConfig {
        search_box: Some(bx.clone()),
        ..cfg.clone()
    };
    let cp = prob.matrix.charpoly().map_err(crate::repr::ReprError::from)?;
    let restarts = cfg.restarts_or(default_restarts(rep));

    let runs: Vec<RestartRun> = (0..restarts)
        .into_par_iter()
        .map(|i| run_restart(prob, rep, &stages, &weights, &cp, &bx, &inner, i))
        .collect::<Result<_, _>>()?;

    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    let mut iterations = 0;
    for (i, r) in runs.iter().enumerate() {
        iterations += r.iters;
        if let Some((b, z)) = &r.best {
            let better = match &best {
                None => true,
                Some((bv, bz, _)) => cmp_candidates((*b, z), (*bv, bz)).is_lt(),
            };
            if better {
                best = Some((*b, z.clone(), i));
            }
        }
    }
    let (value, point, idx) = best.ok_or(SolveError::NoFeasiblePoint)?;
    let mut res = SolveResult::new(rep, point.clone(), value, prob.is_feasible(&point, cfg.feas_tol));
    res.iterations = iterations;
    res.schedule = weights;
    res.trajectory = runs.into_iter().nth(idx).map(|r| r.trace).unwrap_or_default();
    Ok(res)
}

#[allow(clippy::too_many_arguments)]
fn run_restart(
    prob: &PmiProblem,
    rep: RepId,
    stages: &[Box<dyn Objective>],
    weights: &[f64],
    cp: &CharPoly,
    bx: &SearchBox,
    cfg: &SolveConfig,
    index: usize,
) -> Result<RestartRun, SolveError> {
    let mut rng = restart_rng(cfg.seed, index);
    let barrier = rep != RepId::Charpoly;
    let mut z = sample_box(&mut rng, bx);
    if barrier {
        let mut tries = 0;
        while !stages[0].value(&z).is_finite() {
            tries += 1;
            if tries > 10_000 {
                return Ok(RestartRun {
                    best: None,
                    trace: Vec::new(),
                    iters: 0,
                });
            }
            z = sample_box(&mut rng, bx);
        }
    }
    let mut best = None;
    if !barrier && cp.psd_by_descartes(&z, DESCARTES_TOL) {
        keep_better(&mut best, prob.b(&z), &z);
    }
    let mut trace = Vec::new();
    let mut iters = 0;
    for (stage, (obj, &w)) in stages.iter().zip(weights).enumerate() {
        let mut watch = |from: &[f64], to: &[f64]| {
            if barrier {
                return;
            }
            if cp.psd_by_descartes(to, DESCARTES_TOL) {
                keep_better(&mut best, prob.b(to), to);
            } else if cp.psd_by_descartes(from, DESCARTES_TOL) {
                let c = boundary_crossing(cp, from, to);
                keep_better(&mut best, prob.b(&c), &c);
            }
        };
        let out = descend(obj.as_ref(), &z, cfg, barrier, &mut watch)?;
        iters += out.iters;
        trace.extend(out.trace.into_iter().map(|mut r| {
            r.stage = stage;
            r.weight = w;
            r
        }));
        z = out.point;
    }
    if barrier && prob.is_feasible(&z, cfg.feas_tol) {
        keep_better(&mut best, prob.b(&z), &z);
    }
    Ok(RestartRun { best, trace, iters })
}
