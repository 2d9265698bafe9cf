//! Sparse multivariate polynomials with real coefficients.
//!
//! Variables are positional (`0..num_vars`); names live with the problem
//! that owns the polynomial. Terms are kept in graded order: ascending total
//! degree, and within one degree the monomial with the larger power of the
//! lowest-indexed variable comes first (`x^2, x*y, y^2`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("variable space mismatch: {left} vs {right} variables")]
    VarMismatch { left: usize, right: usize },
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    DimMismatch { expected: usize, got: usize },
    #[error("term exponent vector has length {got}, expected {expected}")]
    TermLength { expected: usize, got: usize },
    #[error("non-finite coefficient {0}")]
    NonFinite(f64),
}

/// A power product `x_{i1}^{e1} * x_{i2}^{e2} * ...`.
///
/// Stored sparsely as `(variable, exponent)` pairs sorted by variable, with
/// no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(index: usize) -> Self {
        Self {
            factors: vec![(index, 1)],
        }
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        let factors = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e))
            .collect();
        Self { factors }
    }

    pub fn to_dense(&self, num_vars: usize) -> Vec<u32> {
        let mut out = vec![0; num_vars];
        for &(v, e) in &self.factors {
            out[v] = e;
        }
        out
    }

    pub fn exponent(&self, var: usize) -> u32 {
        match self.factors.binary_search_by_key(&var, |&(v, _)| v) {
            Ok(pos) => self.factors[pos].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.factors.last().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (va, ea) = self.factors[i];
            let (vb, eb) = other.factors[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    factors.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Monomial { factors }
    }

    /// Partial derivative: `(multiplier, monomial)`, or `None` when it vanishes.
    pub fn derivative(&self, var: usize) -> Option<(u32, Monomial)> {
        let pos = self.factors.binary_search_by_key(&var, |&(v, _)| v).ok()?;
        let e = self.factors[pos].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 = e - 1;
        }
        Some((e, Monomial { factors }))
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.factors
            .iter()
            .map(|&(v, e)| point[v].powi(e as i32))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // walk variables from index 0; a larger exponent sorts first
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.factors.get(i), other.factors.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Less,
                    (None, Some(_)) => return Ordering::Greater,
                    (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                        Ordering::Less => return Ordering::Less,
                        Ordering::Greater => return Ordering::Greater,
                        Ordering::Equal => match eb.cmp(&ea) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            ord => return ord,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialized term: dense exponent vector plus coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coef: f64,
}

/// Sparse polynomial in `num_vars` real variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: f64) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable {index} out of range {num_vars}");
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::var(index), 1.0);
        p
    }

    /// Builds a polynomial from `(dense exponents, coefficient)` pairs,
    /// summing duplicates and dropping exact zeros.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(num_vars);
        for (exps, coef) in terms {
            if exps.len() != num_vars {
                return Err(PolyError::TermLength {
                    expected: num_vars,
                    got: exps.len(),
                });
            }
            if !coef.is_finite() {
                return Err(PolyError::NonFinite(coef));
            }
            p.add_term(Monomial::from_dense(&exps), coef);
        }
        Ok(p)
    }

    pub fn from_term_list(num_vars: usize, terms: &[Term]) -> Result<Self, PolyError> {
        Self::from_terms(num_vars, terms.iter().map(|t| (t.exps.clone(), t.coef)))
    }

    pub fn to_term_list(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(m, &c)| Term {
                exps: m.to_dense(self.num_vars),
                coef: c,
            })
            .collect()
    }

    fn add_term(&mut self, mono: Monomial, coef: f64) {
        if coef == 0.0 {
            return;
        }
        debug_assert!(mono.max_var().is_none_or(|v| v < self.num_vars));
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + coef;
                if s == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, mono: &Monomial) -> f64 {
        self.terms.get(mono).copied().unwrap_or(0.0)
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Whether any term involves one of `vars`.
    pub fn depends_on_any(&self, vars: std::ops::Range<usize>) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|&(v, _)| vars.contains(&v)))
    }

    /// Same polynomial viewed in a larger variable space; new variables are
    /// appended after the existing ones.
    pub fn extend_vars(&self, num_vars: usize) -> Self {
        assert!(num_vars >= self.num_vars);
        Self {
            num_vars,
            terms: self.terms.clone(),
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, PolyError> {
        if point.len() != self.num_vars {
            return Err(PolyError::DimMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        Ok(self.eval_at(point))
    }

    /// Evaluation without the length check. Panics if `point` is too short.
    pub fn eval_at(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|(m, &c)| c * m.eval(point)).sum()
    }

    pub fn partial(&self, var: usize) -> Polynomial {
        let mut p = Self::zero(self.num_vars);
        for (m, &c) in &self.terms {
            if let Some((mult, dm)) = m.derivative(var) {
                p.add_term(dm, c * mult as f64);
            }
        }
        p
    }

    pub fn grad(&self) -> Vec<Polynomial> {
        (0..self.num_vars).map(|i| self.partial(i)).collect()
    }

    /// Matrix of exact second partials; symmetric by construction.
    pub fn hessian(&self) -> Vec<Vec<Polynomial>> {
        let g = self.grad();
        let n = self.num_vars;
        let mut h = vec![vec![Polynomial::zero(n); n]; n];
        for i in 0..n {
            for j in i..n {
                let d = g[i].partial(j);
                h[j][i] = d.clone();
                h[i][j] = d;
            }
        }
        h
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        let mut p = Self::zero(self.num_vars);
        for (m, &v) in &self.terms {
            p.add_term(m.clone(), v * c);
        }
        p
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_space(other)?;
        let mut p = self.clone();
        for (m, &c) in &other.terms {
            p.add_term(m.clone(), c);
        }
        Ok(p)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_space(other)?;
        let mut p = self.clone();
        for (m, &c) in &other.terms {
            p.add_term(m.clone(), -c);
        }
        Ok(p)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_space(other)?;
        let mut p = Self::zero(self.num_vars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                p.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(p)
    }

    pub fn powi(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.num_vars, 1.0);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes must share one
    /// variable space, which becomes the space of the result.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if subs.len() != self.num_vars {
            return Err(PolyError::DimMismatch {
                expected: self.num_vars,
                got: subs.len(),
            });
        }
        let target = subs.first().map_or(0, Polynomial::num_vars);
        if let Some(bad) = subs.iter().find(|s| s.num_vars != target) {
            return Err(PolyError::VarMismatch {
                left: target,
                right: bad.num_vars,
            });
        }
        let mut out = Polynomial::zero(target);
        for (m, &c) in &self.terms {
            let mut t = Polynomial::constant(target, c);
            for &(v, e) in m.factors() {
                t = &t * &subs[v].powi(e);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    fn check_space(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars {
            Err(PolyError::VarMismatch {
                left: self.num_vars,
                right: other.num_vars,
            })
        } else {
            Ok(())
        }
    }

    /// Human-readable form like `2 - x^2 - 16*x*y - y^2`.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let neg = c < 0.0;
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            if m.is_one() || mag != 1.0 {
                parts.push(format!("{mag}"));
            }
            for &(v, e) in m.factors() {
                let name = names.get(v).map_or_else(|| format!("x{v}"), |s| s.to_string());
                if e == 1 {
                    parts.push(name);
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

// Operator forms panic on a variable-space mismatch; use the `try_*`
// methods where the spaces are not known to agree.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_term_list().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }
    fn y() -> Polynomial {
        Polynomial::var(2, 1)
    }
    fn c(v: f64) -> Polynomial {
        Polynomial::constant(2, v)
    }

    fn q1() -> Polynomial {
        // 2 - x^2 - 16xy - y^2
        &(&(&c(2.0) - &(&x() * &x())) - &(&x() * &y()).scale(16.0)) - &(&y() * &y())
    }

    fn q2() -> Polynomial {
        // 16x^3y - 2x^2 - 16xy + 16xy^3 - y^2 + 1
        Polynomial::from_terms(
            2,
            vec![
                (vec![3, 1], 16.0),
                (vec![2, 0], -2.0),
                (vec![1, 1], -16.0),
                (vec![1, 3], 16.0),
                (vec![0, 2], -1.0),
                (vec![0, 0], 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn cancellation_and_identity() {
        let p = &(&x() + &c(1.0)) + &(-&x());
        assert_eq!(p, c(1.0));
        let z = Polynomial::zero(2);
        assert_eq!(&q1() + &z, q1());
        assert_eq!(&q1() * &c(1.0), q1());
        assert_eq!(&x() * &y(), Polynomial::from_terms(2, vec![(vec![1, 1], 1.0)]).unwrap());
    }

    #[test]
    fn addition_matches_pointwise() {
        let a = q1();
        let b = &(&x() * &x()) + &(&y() * &y());
        let s = &a + &b;
        let expected =
            Polynomial::from_terms(2, vec![(vec![0, 0], 2.0), (vec![1, 1], -16.0)]).unwrap();
        assert_eq!(s, expected);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let z = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let lhs = s.eval_at(&z);
            let rhs = a.eval_at(&z) + b.eval_at(&z);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn product_of_example_coefficients() {
        let p = &q1() * &q2();
        assert_eq!(p.degree(), 6);
        assert_eq!(p.eval(&[0.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn evaluation() {
        assert_eq!(q1().eval(&[0.0, 0.0]).unwrap(), 2.0);
        assert_eq!(q2().eval(&[0.0, -1.0]).unwrap(), 0.0);
        assert_eq!(c(4.5).eval(&[7.0, -3.0]).unwrap(), 4.5);
        assert_eq!(
            q1().eval(&[1.0]),
            Err(PolyError::DimMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(3, 0);
        assert!(matches!(a.try_add(&b), Err(PolyError::VarMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(PolyError::VarMismatch { .. })));
        assert!(Polynomial::from_terms(2, vec![(vec![1], 1.0)]).is_err());
    }

    #[test]
    fn gradient_of_q1() {
        let g = q1().grad();
        let gx = &x().scale(-2.0) - &y().scale(16.0);
        let gy = &x().scale(-16.0) - &y().scale(2.0);
        assert_eq!(g[0], gx);
        assert_eq!(g[1], gy);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = q1();
        for _ in 0..10 {
            let z = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            for i in 0..2 {
                let h = 1e-6;
                let mut zp = z;
                let mut zm = z;
                zp[i] += h;
                zm[i] -= h;
                let fd = (p.eval_at(&zp) - p.eval_at(&zm)) / (2.0 * h);
                let an = g[i].eval_at(&z);
                assert!((fd - an).abs() <= 1e-7 * (1.0 + an.abs()), "{fd} vs {an}");
            }
        }
        let five = c(5.0).grad();
        assert!(five.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn hessians() {
        let h = (&(&x() * &x()) + &(&y() * &y())).hessian();
        assert_eq!(h[0][0], c(2.0));
        assert_eq!(h[1][1], c(2.0));
        assert!(h[0][1].is_zero());
        let h = (&x() * &y()).hessian();
        assert_eq!(h[0][1], c(1.0));
        assert_eq!(h[1][0], c(1.0));
        assert!(h[0][0].is_zero());

        let h = q2().hessian();
        let at: Vec<Vec<f64>> = h
            .iter()
            .map(|r| r.iter().map(|p| p.eval_at(&[0.0, 0.0])).collect())
            .collect();
        assert_eq!(at, vec![vec![-4.0, -16.0], vec![-16.0, -2.0]]);
        // central differences of the exact gradient
        let g = q2().grad();
        let step = 1e-5;
        for i in 0..2 {
            for j in 0..2 {
                let mut zp = [0.0, 0.0];
                let mut zm = [0.0, 0.0];
                zp[j] += step;
                zm[j] -= step;
                let fd = (g[i].eval_at(&zp) - g[i].eval_at(&zm)) / (2.0 * step);
                assert!((fd - at[i][j]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn canonical_order_is_graded() {
        let names = ["x", "y"];
        assert_eq!(q1().display_with(&names), "2 - x^2 - 16*x*y - y^2");
        assert_eq!(
            q2().display_with(&names),
            "1 - 2*x^2 - 16*x*y - y^2 + 16*x^3*y + 16*x*y^3"
        );
        let degs: Vec<u32> = q2().terms().map(|(m, _)| m.degree()).collect();
        let mut sorted = degs.clone();
        sorted.sort();
        assert_eq!(degs, sorted);
    }

    #[test]
    fn compose_substitutes_variables() {
        // p(u) = u^2 with u = x + y
        let p = Polynomial::from_terms(1, vec![(vec![2], 1.0)]).unwrap();
        let s = p.compose(&[&x() + &y()]).unwrap();
        let expected = &(&(&x() * &x()) + &(&x() * &y()).scale(2.0)) + &(&y() * &y());
        assert_eq!(s, expected);
    }

    #[test]
    fn term_list_roundtrip() {
        let p = q2();
        let back = Polynomial::from_term_list(2, &p.to_term_list()).unwrap();
        assert_eq!(back, p);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly_strategy(n: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(
            (prop::collection::vec(0..=max_deg, n), -3.0f64..3.0),
            0..6,
        )
        .prop_map(move |terms| {
            let terms = terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg);
            Polynomial::from_terms(n, terms).unwrap()
        })
    }

    fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.5f64..1.5, n)
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(
            (p, q, pts) in (1usize..=4).prop_flat_map(|n| (
                poly_strategy(n, 3),
                poly_strategy(n, 3),
                prop::collection::vec(point(n), 100),
            ))
        ) {
            let pq = &p * &q;
            for z in &pts {
                let expect = p.eval_at(z) * q.eval_at(z);
                prop_assert!((pq.eval_at(z) - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
            }
            if !p.is_zero() && !q.is_zero() {
                prop_assert_eq!(pq.degree(), p.degree() + q.degree());
            }
        }

        #[test]
        fn derivatives_match_central_differences(
            (p, z) in (1usize..=4).prop_flat_map(|n| (poly_strategy(n, 4), point(n)))
        ) {
            let n = p.num_vars();
            let g = p.grad();
            let h = p.hessian();
            let step = 1e-5;
            for i in 0..n {
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[i] += step;
                zm[i] -= step;
                let fd = (p.eval_at(&zp) - p.eval_at(&zm)) / (2.0 * step);
                let an = g[i].eval_at(&z);
                prop_assert!((fd - an).abs() <= 1e-5 * (1.0 + an.abs()));
                for j in 0..n {
                    let fd = (g[j].eval_at(&zp) - g[j].eval_at(&zm)) / (2.0 * step);
                    let an = h[i][j].eval_at(&z);
                    prop_assert!((fd - an).abs() <= 1e-5 * (1.0 + an.abs()));
                }
            }
        }

        #[test]
        fn adding_zero_is_bit_identical(p in poly_strategy(3, 4)) {
            let s = &p + &Polynomial::zero(3);
            prop_assert_eq!(s.to_term_list(), p.to_term_list());
        }
    }
}
