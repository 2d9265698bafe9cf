use std::fmt;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use super::interval::Interval;
use crate::poly::Polynomial;

/// Exponent of a power node, always in lowest terms.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticFn {
    Sin,
    Cos,
}

impl AnalyticFn {
    pub fn name(self) -> &'static str {
        match self {
            AnalyticFn::Sin => "sin",
            AnalyticFn::Cos => "cos",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            AnalyticFn::Sin => v.sin(),
            AnalyticFn::Cos => v.cos(),
        }
    }
}

/// Expression tree over the primitives the classifier understands.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Rational),
    Recip(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    /// Analytic function restricted to a declared bounded interval.
    Analytic {
        func: AnalyticFn,
        arg: Box<Expr>,
        domain: Interval,
    },
    /// `1` where the argument is `>= 0`, else `0`.
    Step(Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        Expr::Add(terms)
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        Expr::Mul(factors)
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn pow(e: Expr, num: i64, den: i64) -> Expr {
        Expr::Pow(Box::new(e), Rational::new(num, den))
    }

    pub fn recip(e: Expr) -> Expr {
        Expr::Recip(Box::new(e))
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::Exp(Box::new(e))
    }

    pub fn log(e: Expr) -> Expr {
        Expr::Log(Box::new(e))
    }

    pub fn step(e: Expr) -> Expr {
        Expr::Step(Box::new(e))
    }

    pub fn analytic(func: AnalyticFn, arg: Expr, domain: Interval) -> Expr {
        Expr::Analytic {
            func,
            arg: Box::new(arg),
            domain,
        }
    }

    /// `max(0, e)^2`, written as `((e + |e|) / 2)^2` with `|e| = (e^2)^(1/2)`.
    pub fn squared_hinge(e: Expr) -> Expr {
        let abs = Expr::pow(Expr::pow(e.clone(), 2, 1), 1, 2);
        Expr::pow(
            Expr::mul(vec![Expr::Const(0.5), Expr::add(vec![e, abs])]),
            2,
            1,
        )
    }

    /// Sum of monomials, each `c * x_i^e * ...`.
    pub fn from_polynomial(p: &Polynomial) -> Expr {
        let terms: Vec<Expr> = p
            .terms()
            .map(|(m, c)| {
                let mut f = vec![Expr::Const(c)];
                for &(v, e) in m.factors() {
                    f.push(if e == 1 {
                        Expr::Var(v)
                    } else {
                        Expr::pow(Expr::Var(v), e as i64, 1)
                    });
                }
                if f.len() == 1 { f.pop().unwrap() } else { Expr::Mul(f) }
            })
            .collect();
        if terms.is_empty() {
            Expr::Const(0.0)
        } else {
            Expr::Add(terms)
        }
    }

    /// Replaces every `Var(i)` with `subs[i]`; variables past the end of
    /// `subs` are left alone.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        let rec = |e: &Expr| Box::new(e.substitute(subs));
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(i) => subs.get(*i).cloned().unwrap_or_else(|| self.clone()),
            Expr::Add(v) => Expr::Add(v.iter().map(|e| e.substitute(subs)).collect()),
            Expr::Mul(v) => Expr::Mul(v.iter().map(|e| e.substitute(subs)).collect()),
            Expr::Neg(e) => Expr::Neg(rec(e)),
            Expr::Pow(e, r) => Expr::Pow(rec(e), *r),
            Expr::Recip(e) => Expr::Recip(rec(e)),
            Expr::Exp(e) => Expr::Exp(rec(e)),
            Expr::Log(e) => Expr::Log(rec(e)),
            Expr::Step(e) => Expr::Step(rec(e)),
            Expr::Analytic { func, arg, domain } => Expr::Analytic {
                func: *func,
                arg: rec(arg),
                domain: *domain,
            },
        }
    }

    /// Largest variable index plus one.
    pub fn num_vars(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |e| {
            if let Expr::Var(i) = e {
                n = n.max(i + 1);
            }
        });
        n
    }

    pub fn visit<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self {
            Expr::Const(_) | Expr::Var(_) => {}
            Expr::Add(v) | Expr::Mul(v) => v.iter().for_each(|c| c.visit(f)),
            Expr::Neg(c)
            | Expr::Pow(c, _)
            | Expr::Recip(c)
            | Expr::Exp(c)
            | Expr::Log(c)
            | Expr::Step(c) => c.visit(f),
            Expr::Analytic { arg, .. } => arg.visit(f),
        }
    }

    /// Numeric value; missing coordinates evaluate as NaN.
    pub fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => point.get(*i).copied().unwrap_or(f64::NAN),
            Expr::Add(v) => v.iter().map(|e| e.eval(point)).sum(),
            Expr::Mul(v) => v.iter().map(|e| e.eval(point)).product(),
            Expr::Neg(e) => -e.eval(point),
            Expr::Pow(e, r) => {
                let b = e.eval(point);
                if r.is_integer() {
                    b.powi(r.to_integer() as i32)
                } else {
                    b.powf(r.to_f64().unwrap_or(f64::NAN))
                }
            }
            Expr::Recip(e) => 1.0 / e.eval(point),
            Expr::Exp(e) => e.eval(point).exp(),
            Expr::Log(e) => e.eval(point).ln(),
            Expr::Analytic { func, arg, .. } => func.apply(arg.eval(point)),
            Expr::Step(e) => {
                if e.eval(point) >= 0.0 { 1.0 } else { 0.0 }
            }
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, v: &[Expr]| {
            write!(f, "({op}")?;
            for e in v {
                write!(f, " {e}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Add(v) => list(f, "+", v),
            Expr::Mul(v) => list(f, "*", v),
            Expr::Neg(e) => write!(f, "(- {e})"),
            Expr::Pow(e, r) => write!(f, "(pow {e} {})", fmt_rational(r)),
            Expr::Recip(e) => write!(f, "(recip {e})"),
            Expr::Exp(e) => write!(f, "(exp {e})"),
            Expr::Log(e) => write!(f, "(log {e})"),
            Expr::Step(e) => write!(f, "(step {e})"),
            Expr::Analytic { func, arg, domain } => {
                write!(f, "({} {arg} :domain {domain})", func.name())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_are_reduced() {
        let e = Expr::pow(Expr::var(0), 2, 4);
        match e {
            Expr::Pow(_, r) => assert_eq!((*r.numer(), *r.denom()), (1, 2)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn polynomial_conversion_evaluates_equally() {
        let p = Polynomial::from_terms(
            2,
            vec![(vec![2, 0], 1.0), (vec![1, 1], 3.0), (vec![0, 0], -2.0)],
        )
        .unwrap();
        let e = Expr::from_polynomial(&p);
        for z in [[0.5, -1.0], [2.0, 3.0]] {
            assert!((e.eval(&z) - p.eval_at(&z)).abs() < 1e-12);
        }
        assert_eq!(e.num_vars(), 2);
    }

    #[test]
    fn hinge_matches_max() {
        let h = Expr::squared_hinge(Expr::var(0));
        for v in [-2.0, -0.1, 0.0, 0.3, 4.0] {
            let m: f64 = f64::max(0.0, v);
            assert!((h.eval(&[v]) - m * m).abs() < 1e-12);
        }
    }
}
