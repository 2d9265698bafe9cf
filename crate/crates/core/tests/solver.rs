mod common;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tamepmi::examples::{example1, interval_problem};
use tamepmi::linalg::{is_psd, SymMatrix};
use tamepmi::oracle::{cone_grid_solve_2x2, grid_minimize, GridSpec};
use tamepmi::repr::{CharPolyPenalty, LogDetBarrier, ReprError};
use tamepmi::solver::{
    minimize_gd, minimize_newton, solve_factorized, solve_pmi, SolveError, StopReason, TrajectoryRow,
};
use tamepmi::tamecheck::Expr;
use tamepmi::{MatrixVarProblem, Objective, Polynomial, RepId, SearchBox, SolveConfig};

struct PolyObj {
    p: Polynomial,
    grad: Vec<Polynomial>,
    hess: Vec<Vec<Polynomial>>,
}

impl PolyObj {
    fn new(n: usize, terms: &[(&[u32], f64)]) -> Self {
        let p = Polynomial::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap();
        Self { grad: p.grad(), hess: p.hessian(), p }
    }
}

impl Objective for PolyObj {
    fn dim(&self) -> usize {
        self.p.num_vars()
    }
    fn weight(&self) -> f64 {
        1.0
    }
    fn value(&self, z: &[f64]) -> f64 {
        self.p.eval_at(z)
    }
    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval_at(z)).collect()
    }
    fn hessian(&self, z: &[f64]) -> Option<SymMatrix> {
        let n = self.dim();
        let mut h = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                h.set(i, j, self.hess[i][j].eval_at(z));
            }
        }
        Some(h)
    }
    fn rep(&self) -> RepId {
        RepId::Charpoly
    }
    fn recipe(&self) -> Result<Expr, ReprError> {
        Ok(Expr::from_polynomial(&self.p))
    }
}

fn monotone_within_stages(rows: &[TrajectoryRow]) -> bool {
    let mut by_stage: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in rows {
        by_stage.entry(r.stage).or_default().push(r.value);
    }
    by_stage.values().all(|v| v.windows(2).all(|w| w[1] <= w[0]))
}

#[test]
fn gradient_descent_basics() {
    let cfg = SolveConfig::default();
    let sq = PolyObj::new(1, &[(&[2], 1.0)]);
    let o = minimize_gd(&sq, &[1.0], &cfg).unwrap();
    assert!(o.point[0].abs() < 1e-6);
    assert!(o.trace.windows(2).all(|w| w[1].value <= w[0].value));
    let c = PolyObj::new(2, &[(&[0, 0], 3.0)]);
    let o = minimize_gd(&c, &[0.3, -0.2], &cfg).unwrap();
    assert_eq!(o.point, vec![0.3, -0.2]);
    assert!(o.iters <= 1);
    assert_eq!(o.stop, StopReason::Converged);
}

#[test]
fn newton_basics() {
    let cfg = SolveConfig::default();
    let q = PolyObj::new(1, &[(&[2], 1.0), (&[1], -6.0), (&[0], 9.0)]);
    let o = minimize_newton(&q, &[0.0], &cfg).unwrap();
    assert!((o.point[0] - 3.0).abs() < 1e-12);
    assert!(o.iters <= 2);
    let saddle = PolyObj::new(2, &[(&[2, 0], 1.0), (&[0, 2], -1.0)]);
    let cfg = SolveConfig {
        search_box: Some(SearchBox::uniform(2, -10.0, 10.0)),
        ..Default::default()
    };
    let o = minimize_newton(&saddle, &[1.0, 1.0], &cfg).unwrap();
    assert!(matches!(o.stop, StopReason::BoxExit | StopReason::MaxIters));
    assert!(o.value < -1.0);
}

#[test]
fn barrier_rejects_infeasible_start() {
    let b = LogDetBarrier::new(&example1(), 1.0).unwrap();
    assert_eq!(minimize_gd(&b, &[0.0, 1.5], &SolveConfig::default()), Err(SolveError::InfeasibleStart));
}

#[test]
fn logdet_analytic_center() {
    let prob = example1();
    let b = LogDetBarrier::new(&prob, 1.0).unwrap();
    let cfg = SolveConfig {
        grad_tol: 1e-8,
        ..Default::default()
    };
    let o = minimize_newton(&b, &[0.0, 0.0], &cfg).unwrap();
    assert!(o.grad_norm <= 1e-8, "{}", o.grad_norm);
    let spec = GridSpec::new(SearchBox::uniform(2, -1.2, 1.2), 2e-3);
    let g = grid_minimize(|z| b.value(z), &spec).unwrap();
    let p = g.best_point.unwrap();
    assert!((p[0] - o.point[0]).abs() < 1e-2 && (p[1] - o.point[1]).abs() < 1e-2, "{p:?} vs {:?}", o.point);
}

// y - λ (1 - y^2) has its minimum at y = -1 / (2 λ).
#[test]
fn charpoly_newton_stationary() {
    let cp = CharPolyPenalty::new(&interval_problem(), 1.0).unwrap();
    let o = minimize_newton(&cp, &[0.7], &SolveConfig::default()).unwrap();
    assert_eq!(o.stop, StopReason::Converged);
    assert!(o.grad_norm <= 1e-8);
    assert!((o.point[0] + 0.5).abs() < 1e-10);
    let fd = common::fd_gradient(&cp, &o.point, 1e-6);
    assert!(fd[0].abs() < 1e-8, "{fd:?}");
}

// On the example the penalty only has saddle points, so an unconstrained
// Newton run leaves any box.
#[test]
fn charpoly_newton_leaves_box_on_example() {
    let cp = CharPolyPenalty::new(&example1(), 1e-2).unwrap();
    let cfg = SolveConfig {
        search_box: Some(SearchBox::uniform(2, -2.0, 2.0)),
        max_iters: 2000,
        ..Default::default()
    };
    let o = minimize_newton(&cp, &[0.0, -0.5], &cfg).unwrap();
    assert_eq!(o.stop, StopReason::BoxExit);
    assert!(o.value < cp.value(&[0.0, -0.5]));
}

#[test]
fn continuation_on_example() {
    let prob = example1();
    let cfg = SolveConfig {
        restarts: Some(8),
        ..Default::default()
    };
    let r = solve_pmi(&prob, RepId::Logdet, &cfg).unwrap();
    assert!((r.best_value + 1.0).abs() < 1e-2);
    assert!(r.best_point[0].abs() < 1e-2 && (r.best_point[1] + 1.0).abs() < 1e-2);
    let cfg = SolveConfig {
        restarts: Some(16),
        ..Default::default()
    };
    let r = solve_pmi(&prob, RepId::Charpoly, &cfg).unwrap();
    assert!(r.best_value <= -0.95, "{}", r.best_value);
    assert!(r.feasible);
    assert!(prob.is_feasible(&r.best_point, 1e-7));
}

#[test]
fn interval_problem_every_rep() {
    let prob = interval_problem();
    for rep in [RepId::Charpoly, RepId::Logdet, RepId::Detr, RepId::Bound] {
        let r = solve_pmi(&prob, rep, &SolveConfig::default()).unwrap();
        assert!((r.best_value + 1.0).abs() < 2e-3, "{rep}: {}", r.best_value);
    }
}

#[test]
fn unsupported_reps() {
    let prob = example1();
    for rep in [RepId::Indicator, RepId::Factorization] {
        assert_eq!(solve_pmi(&prob, rep, &SolveConfig::default()), Err(SolveError::Unsupported(rep)));
    }
}

#[test]
fn trajectories_are_monotone_per_stage() {
    let prob = example1();
    for rep in [RepId::Charpoly, RepId::Logdet, RepId::Detr] {
        let cfg = SolveConfig {
            restarts: Some(4),
            ..Default::default()
        };
        let r = solve_pmi(&prob, rep, &cfg).unwrap();
        assert!(!r.trajectory.is_empty());
        assert!(monotone_within_stages(&r.trajectory), "{rep}");
    }
    let mv = random_quadratic_q(&mut ChaCha8Rng::seed_from_u64(9));
    let r = solve_factorized(&mv, 1, &SolveConfig::default()).unwrap();
    assert!(monotone_within_stages(&r.trajectory));
}

#[test]
fn identical_seeds_identical_results() {
    let prob = example1();
    for rep in [RepId::Charpoly, RepId::Logdet, RepId::Detr, RepId::Bound] {
        let cfg = SolveConfig {
            restarts: Some(6),
            seed: 11,
            ..Default::default()
        };
        let a = solve_pmi(&prob, rep, &cfg).unwrap();
        let b = solve_pmi(&prob, rep, &cfg).unwrap();
        assert_eq!(a, b, "{rep}");
    }
    let mv = random_quadratic_q(&mut ChaCha8Rng::seed_from_u64(10));
    let cfg = SolveConfig {
        seed: 4,
        ..Default::default()
    };
    assert_eq!(solve_factorized(&mv, 1, &cfg).unwrap(), solve_factorized(&mv, 1, &cfg).unwrap());
}

#[test]
fn feasible_flag_is_recomputed() {
    let prob = example1();
    for seed in 0..3 {
        for rep in [RepId::Charpoly, RepId::Logdet, RepId::Detr, RepId::Bound] {
            let cfg = SolveConfig {
                restarts: Some(4),
                seed,
                ..Default::default()
            };
            let r = solve_pmi(&prob, rep, &cfg).unwrap();
            assert_eq!(r.feasible, is_psd(&prob.matrix.eval_at(&r.best_point), 1e-7), "{rep}");
        }
    }
}

fn random_quadratic_q(rng: &mut ChaCha8Rng) -> MatrixVarProblem {
    let mut terms = Vec::new();
    for a in 0..3u32 {
        for b in 0..3u32 {
            for c in 0..3u32 {
                if a + b + c <= 2 {
                    terms.push((vec![a, b, c], rng.gen_range(-1.0..1.0)));
                }
            }
        }
    }
    MatrixVarProblem::new(2, Polynomial::from_terms(3, terms).unwrap(), true).unwrap()
}

#[test]
fn certified_full_rank_points_match_cone_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = SolveConfig {
        max_iters: 5000,
        ..Default::default()
    };
    let mut certified = 0;
    for _ in 0..20 {
        let mv = random_quadratic_q(&mut rng);
        let oracle = cone_grid_solve_2x2(&mv, 2e-3).unwrap();
        let r = solve_factorized(&mv, 2, &cfg).unwrap();
        if r.certified == Some(true) {
            certified += 1;
            assert!(r.best_value <= oracle.best_value + 1e-3, "{} vs {}", r.best_value, oracle.best_value);
        }
    }
    assert!(certified > 0);
}
