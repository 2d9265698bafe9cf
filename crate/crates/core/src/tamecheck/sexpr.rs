//! Prefix s-expression reader for [`Expr`].
//!
//! ```text
//! expr     := number | name | "(" op expr* [":domain" interval] ")"
//! op       := + | * | - | / | recip | pow | ^ | sqrt | exp | log | step | sin | cos
//! interval := ("(" | "[") number [","] number (")" | "]")
//! number   := decimal | "inf" | "-inf" | [decimal] "pi"
//! ```
//!
//! `(- a)` negates, `(- a b c)` subtracts left to right, `(/ a b)` is
//! `a * (recip b)`. The exponent of `pow` is an integer or `p/q`. `sin` and
//! `cos` must carry `:domain`, the bounded interval they are restricted to.
//! Variable names are numbered in order of first appearance.

use std::f64::consts::PI;

use super::expr::{AnalyticFn, Expr, Rational};
use super::interval::Interval;
use super::TameError;

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedExpr {
    pub expr: Expr,
    pub var_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open(char),
    Close(char),
    Comma,
    Atom(String),
}

fn tokenize(src: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | '[' => {
                out.push((pos, Tok::Open(c)));
                chars.next();
            }
            ')' | ']' => {
                out.push((pos, Tok::Close(c)));
                chars.next();
            }
            ',' => {
                out.push((pos, Tok::Comma));
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || "()[],".contains(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((pos, Tok::Atom(s)));
            }
        }
    }
    out
}

fn parse_number(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    if let Some(head) = s.strip_suffix("pi") {
        let k = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.trim_end_matches('*').parse::<f64>().ok()?,
        };
        return Some(k * PI);
    }
    s.parse::<f64>().ok()
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.parse::<i64>().ok()?, q.parse::<i64>().ok()?);
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse::<i64>().ok().map(Rational::from_integer),
    }
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    names: Vec<String>,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TameError> {
        let pos = self.toks.get(self.pos).map_or(self.end, |t| t.0);
        Err(TameError::Parse {
            pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, TameError> {
        match self.next() {
            Some(Tok::Atom(a)) => Ok(self.atom(&a)),
            Some(Tok::Open('(')) => self.form(),
            Some(_) => {
                self.pos -= 1;
                self.err("expected an expression")
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn atom(&mut self, a: &str) -> Expr {
        if let Some(v) = parse_number(a) {
            return Expr::Const(v);
        }
        let idx = match self.names.iter().position(|n| n == a) {
            Some(i) => i,
            None => {
                self.names.push(a.to_string());
                self.names.len() - 1
            }
        };
        Expr::Var(idx)
    }

    fn interval(&mut self) -> Result<Interval, TameError> {
        let lo_open = match self.next() {
            Some(Tok::Open('(')) => true,
            Some(Tok::Open('[')) => false,
            _ => {
                self.pos -= 1;
                return self.err("expected '(' or '[' to start an interval");
            }
        };
        let lo = self.interval_end()?;
        if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
        }
        let hi = self.interval_end()?;
        let hi_open = match self.next() {
            Some(Tok::Close(')')) => true,
            Some(Tok::Close(']')) => false,
            _ => {
                self.pos -= 1;
                return self.err("expected ')' or ']' to close an interval");
            }
        };
        if lo > hi {
            return self.err("interval lower end exceeds upper end");
        }
        Ok(Interval::with_openness(lo, hi, lo_open, hi_open))
    }

    fn interval_end(&mut self) -> Result<f64, TameError> {
        match self.next() {
            Some(Tok::Atom(a)) => match parse_number(&a) {
                Some(v) => Ok(v),
                None => {
                    self.pos -= 1;
                    self.err(format!("'{a}' is not a number"))
                }
            },
            _ => {
                self.pos -= 1;
                self.err("expected an interval endpoint")
            }
        }
    }

    fn form(&mut self) -> Result<Expr, TameError> {
        let op = match self.next() {
            Some(Tok::Atom(a)) => a,
            _ => {
                self.pos -= 1;
                return self.err("expected an operator");
            }
        };
        let mut args = Vec::new();
        let mut pow_exp = None;
        let mut domain = None;
        loop {
            match self.peek() {
                Some(Tok::Close(')')) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Atom(a)) if a == ":domain" => {
                    self.pos += 1;
                    domain = Some(self.interval()?);
                }
                Some(Tok::Atom(a)) if (op == "pow" || op == "^") && args.len() == 1 => {
                    let a = a.clone();
                    match parse_rational(&a) {
                        Some(r) => pow_exp = Some(r),
                        None => return self.err(format!("exponent '{a}' must be an integer or p/q")),
                    }
                    self.pos += 1;
                }
                None => return self.err("unclosed form"),
                _ => args.push(self.expr()?),
            }
        }
        let arity = |n: usize, p: &Self| -> Result<(), TameError> {
            if args.len() == n {
                Ok(())
            } else {
                p.err(format!("'{op}' takes {n} argument(s), got {}", args.len()))
            }
        };
        if domain.is_some() && !matches!(op.as_str(), "sin" | "cos") {
            return self.err(format!("':domain' only applies to sin and cos, not '{op}'"));
        }
        let one = |args: &mut Vec<Expr>| args.pop().expect("arity checked");
        Ok(match op.as_str() {
            "+" | "*" => {
                if args.is_empty() {
                    return self.err(format!("'{op}' needs at least one argument"));
                }
                if op == "+" { Expr::Add(args) } else { Expr::Mul(args) }
            }
            "-" => match args.len() {
                0 => return self.err("'-' needs at least one argument"),
                1 => Expr::neg(one(&mut args)),
                _ => {
                    let mut it = args.into_iter();
                    let mut terms = vec![it.next().expect("non-empty")];
                    terms.extend(it.map(Expr::neg));
                    Expr::Add(terms)
                }
            },
            "/" => {
                arity(2, self)?;
                let den = one(&mut args);
                let num = one(&mut args);
                Expr::Mul(vec![num, Expr::recip(den)])
            }
            "pow" | "^" => {
                arity(1, self)?;
                let r = match pow_exp {
                    Some(r) => r,
                    None => return self.err("pow needs an exponent"),
                };
                Expr::Pow(Box::new(one(&mut args)), r)
            }
            "sqrt" => {
                arity(1, self)?;
                Expr::pow(one(&mut args), 1, 2)
            }
            "recip" => {
                arity(1, self)?;
                Expr::recip(one(&mut args))
            }
            "exp" => {
                arity(1, self)?;
                Expr::exp(one(&mut args))
            }
            "log" => {
                arity(1, self)?;
                Expr::log(one(&mut args))
            }
            "step" => {
                arity(1, self)?;
                Expr::step(one(&mut args))
            }
            "sin" | "cos" => {
                arity(1, self)?;
                let func = if op == "sin" { AnalyticFn::Sin } else { AnalyticFn::Cos };
                let domain = match domain {
                    Some(d) if d.is_bounded() => d,
                    Some(d) => return self.err(format!("declared domain {d} of '{op}' is unbounded")),
                    None => return self.err(format!("'{op}' needs ':domain <interval>'")),
                };
                Expr::analytic(func, one(&mut args), domain)
            }
            _ => return self.err(format!("unknown operator '{op}'")),
        })
    }
}

pub fn parse_sexpr(src: &str) -> Result<ParsedExpr, TameError> {
    let toks = tokenize(src);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
        names: Vec::new(),
    };
    let expr = p.expr()?;
    if p.pos < toks.len() {
        return p.err("trailing input");
    }
    Ok(ParsedExpr {
        expr,
        var_names: p.names,
    })
}

/// Reads a lone interval such as `[0, 4pi]` or `(0 inf)`.
pub fn parse_interval(src: &str) -> Result<Interval, TameError> {
    let toks = tokenize(src);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
        names: Vec::new(),
    };
    let iv = p.interval()?;
    if p.pos < toks.len() {
        return p.err("trailing input");
    }
    Ok(iv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tamecheck::{classify, StructureLabel};

    fn label(src: &str, doms: &[Interval]) -> StructureLabel {
        let p = parse_sexpr(src).unwrap();
        let mut d = doms.to_vec();
        d.resize(p.var_names.len().max(d.len()), Interval::entire());
        classify(&p.expr, &d).unwrap()
    }

    #[test]
    fn reads_basic_forms() {
        let p = parse_sexpr("(+ (* x x) 1)").unwrap();
        assert_eq!(p.var_names, vec!["x"]);
        assert_eq!(p.expr.eval(&[3.0]), 10.0);
        let p = parse_sexpr("(- a b 1)").unwrap();
        assert_eq!(p.expr.eval(&[5.0, 2.0]), 2.0);
        let p = parse_sexpr("(pow x 3/6)").unwrap();
        assert!((p.expr.eval(&[4.0]) - 2.0).abs() < 1e-15);
        let p = parse_sexpr("(/ 1 x)").unwrap();
        assert_eq!(p.expr.eval(&[4.0]), 0.25);
    }

    #[test]
    fn labels_from_text() {
        assert_eq!(label("(+ (* x x) 1)", &[]), StructureLabel::Semialg);
        assert_eq!(label("(exp x)", &[]), StructureLabel::Exp);
        assert_eq!(
            label("(sin (recip x) :domain (0,1])", &[]),
            StructureLabel::NotDefinableHere
        );
        assert_eq!(
            label(
                "(sin (recip x) :domain (0 1])",
                &[Interval::with_openness(0.0, 1.0, true, false)]
            ),
            StructureLabel::NotDefinableHere
        );
        assert_eq!(
            label("(sin x :domain [0 4pi])", &[Interval::new(0.0, 4.0 * PI)]),
            StructureLabel::An
        );
    }

    #[test]
    fn rejects_bad_input() {
        for src in [
            "",
            "(",
            "(sin x)",
            "(sin x :domain [0 inf])",
            "(exp x :domain [0 1])",
            "(frob x)",
            "(pow x 0.5)",
            "(pow x 1/0)",
            "(exp x y)",
            "x y",
            "(sin x :domain [2 1])",
        ] {
            assert!(parse_sexpr(src).is_err(), "accepted {src:?}");
        }
    }

    #[test]
    fn lone_intervals() {
        assert_eq!(parse_interval("[0, 4pi]").unwrap(), Interval::new(0.0, 4.0 * PI));
        assert!(!parse_interval("(0 inf)").unwrap().is_bounded());
        assert!(parse_interval("[1 0]").is_err());
        assert!(parse_interval("[0 1] x").is_err());
    }

    #[test]
    fn display_reparses() {
        let src = "(+ (* 2 x) (exp (pow y 1/3)) (sin x :domain [-1, 1]))";
        let p = parse_sexpr(src).unwrap();
        let shown = p.expr.to_string();
        // display names variables x0, x1, ...
        let again = parse_sexpr(&shown).unwrap();
        assert_eq!(again.expr, p.expr);
    }
}
