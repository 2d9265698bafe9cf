//! Independent reference implementations and generators shared by the
//! integration tests.
#![allow(dead_code)]

use rand::Rng;
use tamepmi::linalg::SymMatrix;
use tamepmi::{Monomial, Objective, PolyMatrix, Polynomial};

/// Random polynomial with integer coefficients in `[-c, c]` and total
/// degree at most `deg`.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, deg: u32, c: i32) -> Polynomial {
    let mut terms = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        if exps.iter().sum::<u32>() <= deg && rng.gen_bool(0.6) {
            let k = rng.gen_range(-c..=c);
            if k != 0 {
                terms.push((exps.clone(), k as f64));
            }
        }
        // odometer over [0, deg]^n
        let mut i = 0;
        while i < n {
            exps[i] += 1;
            if exps[i] <= deg {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Polynomial::from_terms(n, terms).unwrap()
}

pub fn random_polymatrix<R: Rng>(rng: &mut R, m: usize, k: usize, l: usize, deg: u32) -> PolyMatrix {
    let lower = (0..m * (m + 1) / 2)
        .map(|_| random_poly(rng, k + l, deg, 3))
        .collect();
    PolyMatrix::new(m, k, l, lower).unwrap()
}

/// `L L^T` for a random `L` with entries of degree `deg`: PSD everywhere.
pub fn random_gram_polymatrix<R: Rng>(rng: &mut R, m: usize, k: usize, l: usize, deg: u32) -> PolyMatrix {
    let n = k + l;
    let f: Vec<Vec<Polynomial>> = (0..m)
        .map(|_| (0..m).map(|_| random_poly(rng, n, deg, 2)).collect())
        .collect();
    PolyMatrix::from_fn(m, k, l, |i, j| {
        let mut s = Polynomial::zero(n);
        for a in 0..m {
            s = &s + &(&f[i][a] * &f[j][a]);
        }
        s
    })
    .unwrap()
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor(a: &[Vec<Polynomial>], n: usize) -> Polynomial {
    let m = a.len();
    if m == 1 {
        return a[0][0].clone();
    }
    let mut total = Polynomial::zero(n);
    for c in 0..m {
        let minor: Vec<Vec<Polynomial>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &a[0][c] * &det_cofactor(&minor, n);
        total = if c % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

/// `q_j = (-1)^j [t^(m-j)] det(t I - P)`, computed by cofactor expansion
/// in the ring with an extra variable `t`.
pub fn charpoly_cofactor(p: &PolyMatrix) -> Vec<Polynomial> {
    let (m, n) = (p.dim(), p.num_vars());
    let t = Polynomial::var(n + 1, n);
    let a: Vec<Vec<Polynomial>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let e = -&p.entry(i, j).extend_vars(n + 1);
                    if i == j { &e + &t } else { e }
                })
                .collect()
        })
        .collect();
    let det = det_cofactor(&a, n + 1);
    (1..=m)
        .map(|j| {
            let want = (m - j) as u32;
            let terms = det.terms().filter(|(mono, _)| mono.exponent(n) == want).map(|(mono, c)| {
                let mut e = mono.to_dense(n + 1);
                e.pop();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                (e, sign * c)
            });
            Polynomial::from_terms(n, terms).unwrap()
        })
        .collect()
}

/// Largest coefficient difference, relative to `max(1, |b|)`.
pub fn max_rel_coef_diff(a: &Polynomial, b: &Polynomial) -> f64 {
    let mut monos: Vec<Monomial> = a.terms().map(|(m, _)| m.clone()).collect();
    monos.extend(b.terms().map(|(m, _)| m.clone()));
    monos
        .iter()
        .map(|m| {
            let (x, y) = (a.coefficient(m), b.coefficient(m));
            (x - y).abs() / y.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Central-difference gradient.
pub fn fd_gradient(obj: &dyn Objective, z: &[f64], h: f64) -> Vec<f64> {
    (0..z.len())
        .map(|i| {
            let mut zp = z.to_vec();
            let mut zm = z.to_vec();
            zp[i] += h;
            zm[i] -= h;
            (obj.value(&zp) - obj.value(&zm)) / (2.0 * h)
        })
        .collect()
}

/// `|g - g_fd| / max(|g|, 1)`.
pub fn gradient_rel_err(obj: &dyn Objective, z: &[f64]) -> f64 {
    let g = obj.gradient(z);
    let fd = fd_gradient(obj, z, 1e-6);
    let diff = g.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let gn = g.iter().map(|a| a * a).sum::<f64>().sqrt();
    diff / gn.max(1.0)
}

/// Smallest eigenvalue by an independent route: bisection on the
/// Sylvester inertia of `A - s I` from an LDL^T sweep.
pub fn min_eig_bisect(a: &SymMatrix) -> f64 {
    let m = a.dim();
    let r = a.frobenius_norm() + 1.0;
    let neg_count = |s: f64| {
        // count of negative pivots of A - s I
        let mut w: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| a.get(i, j) - if i == j { s } else { 0.0 }).collect()).collect();
        let mut neg = 0;
        for k in 0..m {
            let mut d = w[k][k];
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                neg += 1;
            }
            for i in k + 1..m {
                let f = w[i][k] / d;
                for j in k + 1..m {
                    w[i][j] -= f * w[k][j];
                }
            }
        }
        neg
    };
    let (mut lo, mut hi) = (-r, r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if neg_count(mid) >= 1 { hi = mid } else { lo = mid }
    }
    0.5 * (lo + hi)
}
