//! Small reference problems used by tests, docs and the CLI.

use crate::poly::Polynomial;
use crate::polymatrix::PolyMatrix;
use crate::repr::{PmiProblem, SearchBox};

fn poly(n: usize, terms: &[(&[u32], f64)]) -> Polynomial {
    Polynomial::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), *c))).expect("well formed")
}

/// `min y` s.t. `[[1 - 16xy, x], [x, 1 - x^2 - y^2]] >= 0`.
///
/// The optimum is `y = -1` at `(x, y) = (0, -1)`, where the matrix is
/// `diag(1, 0)`.
pub fn example1() -> PmiProblem {
    let p11 = poly(2, &[(&[0, 0], 1.0), (&[1, 1], -16.0)]);
    let p21 = poly(2, &[(&[1, 0], 1.0)]);
    let p22 = poly(2, &[(&[0, 0], 1.0), (&[2, 0], -1.0), (&[0, 2], -1.0)]);
    let matrix = PolyMatrix::new(2, 1, 1, vec![p11, p21, p22]).expect("2x2");
    PmiProblem::new(
        matrix,
        poly(2, &[(&[0, 1], 1.0)]),
        Some(SearchBox::uniform(2, -2.0, 2.0)),
        vec!["x".into(), "y".into()],
    )
    .expect("valid problem")
}

/// `min y` s.t. `1 - y^2 >= 0`; optimum `-1`.
pub fn interval_problem() -> PmiProblem {
    one_dim(poly(1, &[(&[0], 1.0), (&[2], -1.0)]), poly(1, &[(&[1], 1.0)]))
}

/// `min sign * y` s.t. `(y - lo)(hi - y) >= 0`. The optimum is
/// `sign * lo` for positive `sign`, else `sign * hi`.
pub fn segment_problem(lo: f64, hi: f64, sign: f64) -> PmiProblem {
    let g = poly(1, &[(&[0], -lo * hi), (&[1], lo + hi), (&[2], -1.0)]);
    one_dim(g, poly(1, &[(&[1], sign)]))
}

/// `min y` with `-1 - x^2 >= 0`, which no point satisfies.
pub fn infeasible_problem() -> PmiProblem {
    let g = poly(2, &[(&[0, 0], -1.0), (&[2, 0], -1.0)]);
    let matrix = PolyMatrix::new(1, 1, 1, vec![g]).expect("1x1");
    PmiProblem::new(
        matrix,
        poly(2, &[(&[0, 1], 1.0)]),
        Some(SearchBox::uniform(2, -2.0, 2.0)),
        vec!["x".into(), "y".into()],
    )
    .expect("valid problem")
}

fn one_dim(g: Polynomial, b: Polynomial) -> PmiProblem {
    let matrix = PolyMatrix::new(1, 0, 1, vec![g]).expect("1x1");
    PmiProblem::new(matrix, b, Some(SearchBox::uniform(1, -2.0, 2.0)), vec!["y".into()])
        .expect("valid problem")
}
