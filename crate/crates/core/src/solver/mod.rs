//! Minimization drivers: Armijo gradient descent, damped Newton, weight
//! continuation with multistart, projected descent for the factorized
//! problem, and bracketed bisection on the bound-based merit.
//!
//! Restarts are independent and may run concurrently. Restart `i` draws
//! from a ChaCha8 stream `i` seeded by `cfg.seed`, and the reported best is
//! chosen by `(value, point)` order, so results are reproducible.

mod bisection;
mod continuation;
mod descent;
mod factorized;

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::repr::{FactorizationState, RepId, ReprError, SearchBox};

pub use bisection::{bisection_solve, BisectionStep};
pub use continuation::{continuation_solve, solve_pmi};
pub use descent::{minimize_gd, minimize_newton, InnerOutcome, StopReason};
pub use factorized::solve_factorized;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("no feasible point found")]
    NoFeasiblePoint,
    #[error("start point has non-finite objective value")]
    InfeasibleStart,
    #[error("representation '{0}' cannot be used here")]
    Unsupported(RepId),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Repr(#[from] ReprError),
}

/// Geometric weight schedule `start, start*factor, ...` ending at `end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub start: f64,
    pub factor: f64,
    pub end: f64,
}

impl Schedule {
    pub fn new(start: f64, factor: f64, end: f64) -> Result<Self, SolveError> {
        let ok = start > 0.0
            && end > 0.0
            && factor > 0.0
            && start.is_finite()
            && end.is_finite()
            && factor.is_finite()
            && (factor == 1.0 && start == end
                || factor > 1.0 && end >= start
                || factor < 1.0 && end <= start);
        if ok {
            Ok(Self { start, factor, end })
        } else {
            Err(SolveError::Config(format!(
                "schedule {start}:{factor}:{end} does not reach its end"
            )))
        }
    }

    /// Penalty path `1e-3 .. 1e-1` with factor `sqrt(10)`.
    pub fn penalty_default() -> Self {
        Self::new(1e-3, 10f64.sqrt(), 1e-1).expect("valid")
    }

    /// Barrier path `1 .. 1e-6` with factor `0.2`.
    pub fn barrier_default() -> Self {
        Self::new(1.0, 0.2, 1e-6).expect("valid")
    }

    /// All weights, ending exactly at `end`.
    pub fn weights(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut w = self.start;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
        let before_end = |w: f64| {
            if self.factor > 1.0 { w < self.end } else { w > self.end }
        };
        while before_end(w) && !close(w, self.end) && out.len() < 10_000 {
            out.push(w);
            w *= self.factor;
        }
        out.push(self.end);
        out
    }
}

impl FromStr for Schedule {
    type Err = SolveError;

    /// `start:factor:end`; `factor` may be written `sqrt(k)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || SolveError::Config(format!("schedule '{s}' is not start:factor:end"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |t: &str| -> Result<f64, SolveError> {
            let t = t.trim();
            if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                return inner.parse::<f64>().map(f64::sqrt).map_err(|_| bad());
            }
            t.parse::<f64>().map_err(|_| bad())
        };
        Schedule::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.factor, self.end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub armijo_c: f64,
    pub shrink: f64,
    pub max_backtracks: usize,
    /// `None` uses the representation's default path.
    pub schedule: Option<Schedule>,
    /// `None` uses the representation's default count.
    pub restarts: Option<usize>,
    pub seed: u64,
    /// Overrides the problem's box.
    pub search_box: Option<SearchBox>,
    pub detr_exponent: f64,
    pub rank: Option<usize>,
    pub rank_escalation: bool,
    /// Bisection stops when the bracket is this narrow.
    pub value_tol: f64,
    /// Optional starting bracket for bisection.
    pub bracket: Option<(f64, f64)>,
    /// Merit level that counts as "intersection non-empty".
    pub merit_tol: f64,
    pub feas_tol: f64,
    pub cert_tol: f64,
    pub record_trajectory: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            max_iters: 500,
            grad_tol: 1e-8,
            armijo_c: 1e-4,
            shrink: 0.5,
            max_backtracks: 60,
            schedule: None,
            restarts: None,
            seed: 0,
            search_box: None,
            detr_exponent: 0.5,
            rank: None,
            rank_escalation: true,
            value_tol: 1e-3,
            bracket: None,
            merit_tol: 1e-10,
            feas_tol: 1e-7,
            cert_tol: 1e-7,
            record_trajectory: true,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |m: &str| Err(SolveError::Config(m.to_string()));
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("Armijo constant must lie in (0, 1)");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return bad("backtracking shrink must lie in (0, 1)");
        }
        if self.restarts == Some(0) {
            return bad("restarts must be at least 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if !(self.value_tol > 0.0) {
            return bad("value_tol must be positive");
        }
        if let Some((lo, hi)) = self.bracket {
            if !(lo < hi) {
                return bad("bracket needs lo < hi");
            }
        }
        Ok(())
    }

    pub fn restarts_or(&self, default: usize) -> usize {
        self.restarts.unwrap_or(default)
    }
}

/// Default restart count per representation.
pub fn default_restarts(rep: RepId) -> usize {
    match rep {
        RepId::Charpoly => 128,
        RepId::Bound => 32,
        RepId::Logdet | RepId::Detr => 8,
        RepId::Factorization => 4,
        RepId::Indicator => 1,
    }
}

/// One row of a recorded trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub stage: usize,
    pub weight: f64,
    pub iter: usize,
    pub value: f64,
    pub grad_norm: f64,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub rep: RepId,
    pub best_point: Vec<f64>,
    /// `b` at the best point (`Q` for the factorized problem).
    pub best_value: f64,
    /// Recomputed from the problem: eigenvalue PSD test at `feas_tol`.
    pub feasible: bool,
    pub iterations: usize,
    pub schedule: Vec<f64>,
    pub trajectory: Vec<TrajectoryRow>,
    pub certificate: Option<FactorizationState>,
    pub certified: Option<bool>,
    pub bisection: Vec<BisectionStep>,
    pub bhat_interval: Option<(f64, f64)>,
}

impl SolveResult {
    pub(crate) fn new(rep: RepId, best_point: Vec<f64>, best_value: f64, feasible: bool) -> Self {
        Self {
            rep,
            best_point,
            best_value,
            feasible,
            iterations: 0,
            schedule: Vec::new(),
            trajectory: Vec::new(),
            certificate: None,
            certified: None,
            bisection: Vec::new(),
            bhat_interval: None,
        }
    }
}

/// Writes `stage,weight,iter,value,grad_norm,<names...>`.
pub fn write_trajectory_csv<W: Write>(
    mut w: W,
    rows: &[TrajectoryRow],
    names: &[String],
) -> io::Result<()> {
    write!(w, "stage,weight,iter,value,grad_norm")?;
    for n in names {
        write!(w, ",{n}")?;
    }
    writeln!(w)?;
    for r in rows {
        write!(w, "{},{:e},{},{:e},{:e}", r.stage, r.weight, r.iter, r.value, r.grad_norm)?;
        for p in &r.point {
            write!(w, ",{p:e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Deterministic generator for restart `restart` of a run seeded `seed`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

pub(crate) fn sample_box<R: Rng>(rng: &mut R, bx: &SearchBox) -> Vec<f64> {
    bx.lo
        .iter()
        .zip(&bx.hi)
        .map(|(&a, &b)| rng.gen_range(a..b))
        .collect()
}

/// Total order on `(value, point)` used for every best-of reduction.
pub(crate) fn cmp_candidates(a: (f64, &[f64]), b: (f64, &[f64])) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| {
        a.1.iter()
            .zip(b.1)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}
