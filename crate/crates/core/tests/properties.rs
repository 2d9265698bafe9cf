mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tamepmi::examples::{example1, interval_problem};
use tamepmi::linalg::{is_psd, SymMatrix};
use tamepmi::oracle::{grid_solve, GridSpec};
use tamepmi::SearchBox;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn faddeev_leverrier_matches_cofactors(seed in any::<u64>(), m in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = random_polymatrix(&mut rng, m, 1, 1, 2);
        let fl = pm.charpoly().unwrap();
        let co = charpoly_cofactor(&pm);
        prop_assert_eq!(fl.q.len(), m);
        for (a, b) in fl.q.iter().zip(&co) {
            prop_assert!(max_rel_coef_diff(a, b) <= 1e-6);
        }
    }

    #[test]
    fn descartes_agrees_with_eigenvalues(seed in any::<u64>(), m in 2usize..=4, gram in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = if gram {
            random_gram_polymatrix(&mut rng, m, 1, 1, 1)
        } else {
            random_polymatrix(&mut rng, m, 1, 1, 2)
        };
        let z = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let a = pm.eval_at(&z);
        let scale = 1.0 + a.frobenius_norm().powi(m as i32);
        prop_assert_eq!(
            pm.charpoly().unwrap().psd_by_descartes(&z, 1e-9 * scale),
            is_psd(&a, 1e-7 * scale)
        );
    }

    #[test]
    fn min_eigenvalue_matches_inertia_bisection(seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lower: Vec<f64> = (0..m * (m + 1) / 2).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let a = SymMatrix::from_lower(m, &lower).unwrap();
        let got = tamepmi::linalg::min_eigenvalue(&a).unwrap();
        let want = min_eig_bisect(&a);
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + a.frobenius_norm()), "{} vs {}", got, want);
    }
}

fn grid_points(bx: &SearchBox, h: f64) -> Vec<Vec<f64>> {
    let spec = GridSpec::new(bx.clone(), h);
    let counts = spec.axis_counts();
    (0..spec.point_count()).map(|k| spec.point(&counts, k)).collect()
}

#[test]
fn oracle_feasibility_agrees_with_descartes() {
    for (prob, bx) in [
        (example1(), SearchBox::uniform(2, -1.2, 1.2)),
        (interval_problem(), SearchBox::uniform(1, -2.0, 2.0)),
    ] {
        let cp = prob.matrix.charpoly().unwrap();
        let m = prob.matrix.dim() as i32;
        for z in grid_points(&bx, 1e-2) {
            let a = prob.matrix.eval_at(&z);
            let scale = 1.0 + a.frobenius_norm().powi(m);
            assert_eq!(
                is_psd(&a, 1e-7 * scale),
                cp.psd_by_descartes(&z, 1e-9 * scale),
                "disagreement at {z:?}"
            );
        }
    }
}

#[test]
fn oracle_refinement_is_monotone() {
    // b = y, so the Lipschitz constant is 1
    let lip = 1.0;
    for (prob, bx) in [
        (example1(), SearchBox::uniform(2, -1.2, 1.2)),
        (interval_problem(), SearchBox::uniform(1, -2.0, 2.0)),
    ] {
        let mut h = 0.1;
        let mut prev = grid_solve(&prob, &GridSpec::new(bx.clone(), h)).unwrap().best_value.unwrap();
        for _ in 0..5 {
            h /= 2.0;
            let v = grid_solve(&prob, &GridSpec::new(bx.clone(), h)).unwrap().best_value.unwrap();
            assert!(v <= prev + lip * h, "h {h}: {v} after {prev}");
            prev = v;
        }
    }
}
