//! Brute-force reference answers for small boxed problems.
//!
//! Feasibility here is always decided by eigenvalues of `P(z)`, never by
//! the characteristic polynomial, so the oracle does not share a code path
//! with the representations it checks.

use std::cmp::Ordering;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{is_psd, SymMatrix};
use crate::repr::{MatrixVarProblem, PmiProblem, SearchBox};
use crate::solver::restart_rng;

pub const DEFAULT_CAP: u64 = 100_000_000;

/// Values within this distance of the minimum count as ties.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid has {points} points, cap is {cap}")]
    CapExceeded { points: u64, cap: u64 },
    #[error("grid step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("box has {got} coordinates, problem has {expected}")]
    BoxDim { expected: usize, got: usize },
    #[error("no feasible grid point")]
    Infeasible,
    #[error("sphere grid supports matrix dimension 2 or 3, got {0}")]
    SphereDim(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub search_box: SearchBox,
    pub h: f64,
    pub tol: f64,
    pub cap: u64,
}

impl GridSpec {
    pub fn new(search_box: SearchBox, h: f64) -> Self {
        Self {
            search_box,
            h,
            tol: 1e-7,
            cap: DEFAULT_CAP,
        }
    }

    /// Points per coordinate: `lo, lo + h, ...` up to `hi`.
    pub fn axis_counts(&self) -> Vec<u64> {
        self.search_box
            .lo
            .iter()
            .zip(&self.search_box.hi)
            .map(|(a, b)| ((b - a) / self.h + 1e-9).floor() as u64 + 1)
            .collect()
    }

    pub fn point_count(&self) -> u64 {
        self.axis_counts()
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .unwrap_or(u64::MAX)
    }

    /// Grid point with flat (row-major) index `k`.
    pub fn point(&self, counts: &[u64], mut k: u64) -> Vec<f64> {
        let mut z = vec![0.0; counts.len()];
        for i in (0..counts.len()).rev() {
            z[i] = self.search_box.lo[i] + (k % counts[i]) as f64 * self.h;
            k /= counts[i];
        }
        z
    }

    fn check(&self, dim: usize) -> Result<Vec<u64>, OracleError> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(OracleError::BadStep(self.h));
        }
        if self.search_box.dim() != dim {
            return Err(OracleError::BoxDim {
                expected: dim,
                got: self.search_box.dim(),
            });
        }
        let points = self.point_count();
        if points > self.cap {
            return Err(OracleError::CapExceeded {
                points,
                cap: self.cap,
            });
        }
        Ok(self.axis_counts())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub grid_points: u64,
    pub feasible_count: u64,
    /// `None` when no grid point is feasible.
    pub best_point: Option<Vec<f64>>,
    pub best_value: Option<f64>,
    pub h: f64,
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Minimizes `value` over the grid, where `value` returns `None` at
/// excluded points. Ties within [`TIE_TOL`] go to the lexicographically
/// smallest point.
fn grid_argmin<F>(spec: &GridSpec, counts: &[u64], value: F) -> (u64, Option<(f64, Vec<f64>)>)
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    let total = spec.point_count();
    let (count, min) = (0..total)
        .into_par_iter()
        .fold(
            || (0u64, f64::INFINITY),
            |(c, m), k| match value(&spec.point(counts, k)) {
                Some(v) => (c + 1, m.min(v)),
                None => (c, m),
            },
        )
        .reduce(|| (0, f64::INFINITY), |a, b| (a.0 + b.0, a.1.min(b.1)));
    if count == 0 {
        return (0, None);
    }
    let best = (0..total)
        .into_par_iter()
        .filter_map(|k| {
            let z = spec.point(counts, k);
            match value(&z) {
                Some(v) if v <= min + TIE_TOL => Some((v, z)),
                _ => None,
            }
        })
        .min_by(|a, b| lex(&a.1, &b.1));
    (count, best)
}

/// Exhaustive scan of the box: feasible argmin of `b`.
pub fn grid_solve(prob: &PmiProblem, spec: &GridSpec) -> Result<OracleResult, OracleError> {
    let counts = spec.check(prob.num_vars())?;
    let (feasible_count, best) = grid_argmin(spec, &counts, |z| {
        is_psd(&prob.matrix.eval_at(z), spec.tol).then(|| prob.b(z))
    });
    Ok(OracleResult {
        grid_points: spec.point_count(),
        feasible_count,
        best_value: best.as_ref().map(|b| b.0),
        best_point: best.map(|b| b.1),
        h: spec.h,
    })
}

/// Unconstrained grid argmin of an arbitrary function; non-finite values
/// are excluded.
pub fn grid_minimize<F>(f: F, spec: &GridSpec) -> Result<OracleResult, OracleError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let counts = spec.check(spec.search_box.dim())?;
    let (feasible_count, best) = grid_argmin(spec, &counts, |z| {
        let v = f(z);
        v.is_finite().then_some(v)
    });
    Ok(OracleResult {
        grid_points: spec.point_count(),
        feasible_count,
        best_value: best.as_ref().map(|b| b.0),
        best_point: best.map(|b| b.1),
        h: spec.h,
    })
}

/// Outcome of an empirical representation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationReport {
    pub samples: usize,
    pub max_violation: f64,
    /// Worst sample when the check failed.
    pub witness: Option<Vec<f64>>,
    pub passed: bool,
}

/// Checks `f = g ∘ h` at `n` random points of `bx`, each to
/// `1e-9 (1 + |f(z)|)`.
pub fn verify_representation<F, G, H>(
    f: F,
    g: G,
    h: H,
    bx: &SearchBox,
    n: usize,
    seed: u64,
) -> RepresentationReport
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
    H: Fn(&[f64]) -> Vec<f64>,
{
    let mut rng = restart_rng(seed, 0);
    let mut worst = (0.0, Vec::new());
    for _ in 0..n {
        let z: Vec<f64> = bx
            .lo
            .iter()
            .zip(&bx.hi)
            .map(|(&a, &b)| rng.gen_range(a..b))
            .collect();
        let (fz, gz) = (f(&z), g(&h(&z)));
        let rel = if fz == gz {
            0.0
        } else {
            let r = (fz - gz).abs() / (1.0 + fz.abs());
            if r.is_nan() { f64::INFINITY } else { r }
        };
        if rel > worst.0 || worst.1.is_empty() {
            worst = (rel.max(worst.0), if rel >= worst.0 { z } else { worst.1 });
        }
    }
    let passed = worst.0 <= 1e-9;
    RepresentationReport {
        samples: n,
        max_violation: worst.0,
        witness: (!passed).then_some(worst.1),
        passed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizerReport {
    pub f_argmin: Vec<f64>,
    pub g_argmin: Vec<f64>,
    pub mapped: Vec<f64>,
    pub max_gap: f64,
    pub passed: bool,
}

/// Checks `argmin f = h(argmin g)` to within `tol` per coordinate, both
/// argmins taken on grids. Every tied minimizer of `g` is tried, so one
/// matching pair suffices.
pub fn verify_minimizer_representation<F, G, H>(
    f: F,
    f_spec: &GridSpec,
    g: G,
    g_spec: &GridSpec,
    h: H,
    tol: f64,
) -> Result<MinimizerReport, OracleError>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> f64 + Sync,
    H: Fn(&[f64]) -> Vec<f64>,
{
    let fr = grid_minimize(&f, f_spec)?;
    let fmin = fr.best_point.ok_or(OracleError::Infeasible)?;
    let gr = grid_minimize(&g, g_spec)?;
    let gbest = gr.best_value.ok_or(OracleError::Infeasible)?;
    let counts = g_spec.axis_counts();
    let ties: Vec<Vec<f64>> = (0..g_spec.point_count())
        .into_par_iter()
        .filter_map(|k| {
            let z = g_spec.point(&counts, k);
            let v = g(&z);
            (v.is_finite() && v <= gbest + TIE_TOL).then_some(z)
        })
        .collect();
    let gap = |z: &Vec<f64>| {
        h(z).iter()
            .zip(&fmin)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let best = ties
        .into_iter()
        .min_by(|a, b| gap(a).total_cmp(&gap(b)).then_with(|| lex(a, b)))
        .ok_or(OracleError::Infeasible)?;
    let max_gap = gap(&best);
    Ok(MinimizerReport {
        mapped: h(&best),
        f_argmin: fmin,
        g_argmin: best,
        max_gap,
        passed: max_gap <= tol,
    })
}

/// `x x^T` for a unit vector `x`.
fn outer(u: &[f64]) -> SymMatrix {
    let m = u.len();
    let mut x = SymMatrix::zeros(m);
    for i in 0..m {
        for j in 0..=i {
            x.set(i, j, u[i] * u[j]);
        }
    }
    x
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeOracleResult {
    pub best_value: f64,
    /// Upper triangle of the best `X`, row-major.
    pub best_x: Vec<f64>,
    pub samples: u64,
}

/// Minimum of `Q` over the rank-one matrices `u u^T`, `|u| = 1`, with `u`
/// on an angular grid of step `h`. For linear `Q` these are the extreme
/// points of `{X >= 0, tr X = 1}`, so this is the minimum over the whole
/// set up to the grid error.
pub fn sphere_grid_solve(prob: &MatrixVarProblem, h: f64) -> Result<ConeOracleResult, OracleError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(OracleError::BadStep(h));
    }
    use std::f64::consts::PI;
    let n_theta = (PI / h).ceil() as u64 + 1;
    let (samples, units): (u64, Box<dyn Fn(u64) -> Vec<f64> + Sync>) = match prob.dim {
        2 => (n_theta, Box::new(move |k| {
            let t = PI * k as f64 / (n_theta - 1) as f64;
            vec![t.cos(), t.sin()]
        })),
        3 => {
            let n_phi = (2.0 * PI / h).ceil() as u64;
            (n_theta * n_phi, Box::new(move |k| {
                let t = PI * (k / n_phi) as f64 / (n_theta - 1) as f64;
                let p = 2.0 * PI * (k % n_phi) as f64 / n_phi as f64;
                vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
            }))
        }
        m => return Err(OracleError::SphereDim(m)),
    };
    let best = (0..samples)
        .into_par_iter()
        .map(|k| {
            let x = prob.half_vec(&outer(&units(k)));
            (prob.q.eval_at(&x), x)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lex(&a.1, &b.1)))
        .expect("non-empty grid");
    Ok(ConeOracleResult {
        best_value: best.0,
        best_x: best.1,
        samples,
    })
}

/// Minimum of any `Q` over the full set `{X >= 0, tr X = 1}` for 2 x 2
/// matrices, `X = [[a, c], [c, 1 - a]]` with `c^2 <= a (1 - a)`, on a grid
/// of step `h` in `a` and `c`.
pub fn cone_grid_solve_2x2(prob: &MatrixVarProblem, h: f64) -> Result<ConeOracleResult, OracleError> {
    if prob.dim != 2 {
        return Err(OracleError::SphereDim(prob.dim));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(OracleError::BadStep(h));
    }
    let n = (1.0 / h).ceil() as u64 + 1;
    let step = 1.0 / (n - 1) as f64;
    let best = (0..n * n)
        .into_par_iter()
        .filter_map(|k| {
            let a = (k / n) as f64 * step;
            let c = -0.5 + (k % n) as f64 * step;
            (c * c <= a * (1.0 - a)).then(|| {
                let x = vec![a, c, 1.0 - a];
                (prob.q.eval_at(&x), x)
            })
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lex(&a.1, &b.1)))
        .expect("diagonal points are always inside");
    Ok(ConeOracleResult {
        best_value: best.0,
        best_x: best.1,
        samples: n * n,
    })
}
