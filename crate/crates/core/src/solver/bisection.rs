use rayon::prelude::*;
use serde::Serialize;

use super::descent::descend;
use super::{
    cmp_candidates, default_restarts, restart_rng, sample_box, SolveConfig, SolveError,
    SolveResult,
};
use crate::repr::{BoundMerit, PmiProblem, RepId, SearchBox};

/// One emptiness decision of the bisection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectionStep {
    /// Bracket after this probe.
    pub lo: f64,
    pub hi: f64,
    pub probe: f64,
    pub non_empty: bool,
    /// Smallest merit reached at this probe.
    pub merit: f64,
}

struct Probe {
    merit: f64,
    witness: Vec<f64>,
}

struct Prober<'a> {
    prob: &'a PmiProblem,
    cfg: SolveConfig,
    bx: SearchBox,
    restarts: usize,
    calls: usize,
    iterations: usize,
}

impl Prober<'_> {
    /// Multistart descent on the merit; `warm` is tried first.
    fn probe(&mut self, merit: &BoundMerit, warm: Option<&[f64]>) -> Probe {
        let call = self.calls;
        self.calls += 1;
        let run = |start: Vec<f64>| -> (f64, Vec<f64>, usize) {
            match descend(merit, &start, &self.cfg, false, &mut |_, _| {}) {
                Ok(o) => polish(merit, o.point, o.value, o.iters, &self.cfg),
                Err(_) => (f64::INFINITY, start, 0),
            }
        };
        let mut results = Vec::new();
        if let Some(w) = warm {
            results.push(run(w.to_vec()));
        }
        if results.first().is_none_or(|r| r.0 > self.cfg.merit_tol) {
            let seed = self.cfg.seed ^ ((call as u64 + 1) << 32);
            let bx = &self.bx;
            results.extend(
                (0..self.restarts)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = restart_rng(seed, i);
                        run(sample_box(&mut rng, bx))
                    })
                    .collect::<Vec<_>>(),
            );
        }
        self.iterations += results.iter().map(|r| r.2).sum::<usize>();
        let best = results
            .into_iter()
            .min_by(|a, b| cmp_candidates((a.0, &a.1), (b.0, &b.1)))
            .expect("at least one run");
        Probe {
            merit: best.0,
            witness: best.1,
        }
    }
}

/// Keep descending a merit that already reached the target, toward zero.
fn polish(
    merit: &BoundMerit,
    z: Vec<f64>,
    value: f64,
    iters: usize,
    cfg: &SolveConfig,
) -> (f64, Vec<f64>, usize) {
    if value > cfg.merit_tol || value == 0.0 {
        return (value, z, iters);
    }
    let tight = SolveConfig {
        grad_tol: 0.0,
        max_iters: 200,
        record_trajectory: false,
        ..cfg.clone()
    };
    match descend(merit, &z, &tight, false, &mut |_, _| {}) {
        Ok(o) if o.value <= value => (o.value, o.point, iters + o.iters),
        _ => (value, z, iters),
    }
}

/// Bracketed bisection on the optimal value.
///
/// The set `{P >= 0, b <= b̂}` is declared non-empty when multistart
/// descent drives [`BoundMerit`] to `cfg.merit_tol`, and empty when every
/// restart fails. The bracket `[lo, hi]` always has an empty probe at `lo`
/// and a non-empty one at `hi`. It is seeded from a feasible point, or from
/// `cfg.bracket`, which is widened until that holds.
pub fn bisection_solve(prob: &PmiProblem, cfg: &SolveConfig) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    let bx = cfg.search_box.clone().unwrap_or_else(|| prob.box_or_default());
    let inner = SolveConfig {
        search_box: Some(bx.clone()),
        record_trajectory: false,
        ..cfg.clone()
    };
    let mut pr = Prober {
        prob,
        cfg: inner,
        bx,
        restarts: cfg.restarts_or(default_restarts(RepId::Bound)),
        calls: 0,
        iterations: 0,
    };
    let mut steps = Vec::new();

    let feas = BoundMerit::feasibility_only(prob)?;
    let first = pr.probe(&feas, None);
    if first.merit > cfg.merit_tol {
        return Err(SolveError::NoFeasiblePoint);
    }
    let mut witness = first.witness;

    let test = |pr: &mut Prober, bhat: f64, warm: &[f64]| -> Result<(bool, Probe), SolveError> {
        let merit = BoundMerit::new(pr.prob, bhat)?;
        let p = pr.probe(&merit, Some(warm));
        Ok((p.merit <= cfg.merit_tol, p))
    };

    let b0 = prob.b(&witness);
    let (mut lo, mut hi) = cfg.bracket.unwrap_or((b0 - (1.0f64).max(b0.abs()), b0));
    let mut width = (hi - lo).max(1e-3);

    // upper end must be non-empty
    loop {
        let probe = hi;
        let (ok, p) = test(&mut pr, probe, &witness)?;
        if ok {
            witness = p.witness;
        } else {
            lo = hi;
            hi = hi.max(b0) + width;
            width *= 2.0;
        }
        steps.push(BisectionStep { lo, hi, probe, non_empty: ok, merit: p.merit });
        if ok {
            break;
        }
        if steps.len() > 64 {
            return Err(SolveError::Config("could not bracket the optimal value from above".into()));
        }
    }
    // lower end must be empty
    loop {
        let probe = lo;
        let (ok, p) = test(&mut pr, probe, &witness)?;
        if ok {
            hi = lo;
            witness = p.witness;
            lo -= width;
            width *= 2.0;
        }
        steps.push(BisectionStep { lo, hi, probe, non_empty: ok, merit: p.merit });
        if !ok {
            break;
        }
        if steps.len() > 128 {
            return Err(SolveError::Config("optimal value appears unbounded below".into()));
        }
    }
    while hi - lo > cfg.value_tol {
        let mid = 0.5 * (lo + hi);
        let (ok, p) = test(&mut pr, mid, &witness)?;
        if ok {
            hi = mid;
            witness = p.witness;
        } else {
            lo = mid;
        }
        steps.push(BisectionStep { lo, hi, probe: mid, non_empty: ok, merit: p.merit });
    }

    let value = prob.b(&witness);
    let mut res = SolveResult::new(RepId::Bound, witness.clone(), value, prob.is_feasible(&witness, cfg.feas_tol));
    res.iterations = pr.iterations;
    res.bisection = steps;
    res.bhat_interval = Some((lo, hi));
    Ok(res)
}
