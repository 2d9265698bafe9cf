//! Conservative definability classifier for expression trees.
//!
//! [`classify`] reports the smallest supported o-minimal structure whose
//! definable maps include the expression: semialgebraic maps, restricted
//! analytic functions, the exponential, or both. Restricted analytic nodes
//! are only accepted when interval propagation proves their argument stays
//! inside the declared bounded domain. A rejection means "outside what this
//! tool can vouch for", not a proof of non-definability.

mod expr;
mod interval;
mod sexpr;

use std::fmt;

use thiserror::Error;

pub use expr::{AnalyticFn, Expr, Rational};
pub use interval::Interval;
pub use sexpr::{parse_interval, parse_sexpr, ParsedExpr};

use crate::repr::{Objective, ReprError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TameError {
    #[error("variable x{index} has no domain interval (domain has {len})")]
    MissingDomain { index: usize, len: usize },
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression must be univariate")]
    NotUnivariate,
    #[error(transparent)]
    Recipe(#[from] ReprError),
}

/// Supported structures, ordered `SEMIALG < AN, EXP < AN_EXP`, with
/// `NOT_DEFINABLE_HERE` above everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureLabel {
    Semialg,
    An,
    Exp,
    AnExp,
    NotDefinableHere,
}

impl StructureLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            StructureLabel::Semialg => "SEMIALG",
            StructureLabel::An => "AN",
            StructureLabel::Exp => "EXP",
            StructureLabel::AnExp => "AN_EXP",
            StructureLabel::NotDefinableHere => "NOT_DEFINABLE_HERE",
        }
    }

    fn bits(self) -> Option<(bool, bool)> {
        match self {
            StructureLabel::Semialg => Some((false, false)),
            StructureLabel::An => Some((true, false)),
            StructureLabel::Exp => Some((false, true)),
            StructureLabel::AnExp => Some((true, true)),
            StructureLabel::NotDefinableHere => None,
        }
    }

    /// Least upper bound in the lattice.
    pub fn join(self, other: StructureLabel) -> StructureLabel {
        match (self.bits(), other.bits()) {
            (Some((a1, e1)), Some((a2, e2))) => match (a1 || a2, e1 || e2) {
                (false, false) => StructureLabel::Semialg,
                (true, false) => StructureLabel::An,
                (false, true) => StructureLabel::Exp,
                (true, true) => StructureLabel::AnExp,
            },
            _ => StructureLabel::NotDefinableHere,
        }
    }

    /// Partial order of the lattice.
    pub fn le(self, other: StructureLabel) -> bool {
        self.join(other) == other
    }
}

impl fmt::Display for StructureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification outcome with the propagated range of the whole
/// expression and, on rejection, the offending subterm.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: StructureLabel,
    pub range: Interval,
    pub rejected: Option<String>,
}

pub fn classify(e: &Expr, domain: &[Interval]) -> Result<StructureLabel, TameError> {
    classify_detailed(e, domain).map(|c| c.label)
}

pub fn classify_detailed(e: &Expr, domain: &[Interval]) -> Result<Classification, TameError> {
    let mut rejected = None;
    let (range, label) = walk(e, domain, &mut rejected)?;
    Ok(Classification {
        label,
        range,
        rejected,
    })
}

fn reject(rejected: &mut Option<String>, e: &Expr) -> StructureLabel {
    if rejected.is_none() {
        *rejected = Some(e.to_string());
    }
    StructureLabel::NotDefinableHere
}

fn walk(
    e: &Expr,
    domain: &[Interval],
    rejected: &mut Option<String>,
) -> Result<(Interval, StructureLabel), TameError> {
    use StructureLabel::*;
    Ok(match e {
        Expr::Const(c) => {
            if !c.is_finite() {
                return Err(TameError::Malformed(format!("non-finite constant {c}")));
            }
            (Interval::point(*c), Semialg)
        }
        Expr::Var(i) => {
            let iv = domain.get(*i).ok_or(TameError::MissingDomain {
                index: *i,
                len: domain.len(),
            })?;
            (*iv, Semialg)
        }
        Expr::Add(v) | Expr::Mul(v) => {
            if v.is_empty() {
                return Err(TameError::Malformed("empty sum or product".into()));
            }
            let is_add = matches!(e, Expr::Add(_));
            let mut acc: Option<Interval> = None;
            let mut label = Semialg;
            for c in v {
                let (iv, l) = walk(c, domain, rejected)?;
                label = label.join(l);
                acc = Some(match acc {
                    None => iv,
                    Some(a) if is_add => a.add(&iv),
                    Some(a) => a.mul(&iv),
                });
            }
            (acc.expect("non-empty"), label)
        }
        Expr::Neg(c) => {
            let (iv, l) = walk(c, domain, rejected)?;
            (iv.neg(), l)
        }
        Expr::Pow(c, r) => {
            let (iv, l) = walk(c, domain, rejected)?;
            if r.is_integer() {
                (iv.powi(r.to_integer()), l)
            } else if iv.lo >= 0.0 {
                // y = x^(p/q), y >= 0 has a polynomial graph on x >= 0
                let rf = *r.numer() as f64 / *r.denom() as f64;
                (iv.powf_nonneg(rf), l)
            } else {
                (Interval::entire(), reject(rejected, e))
            }
        }
        Expr::Recip(c) => {
            let (iv, l) = walk(c, domain, rejected)?;
            (iv.recip(), l)
        }
        Expr::Exp(c) => {
            let (iv, l) = walk(c, domain, rejected)?;
            (iv.exp(), l.join(Exp))
        }
        Expr::Log(c) => {
            let (iv, l) = walk(c, domain, rejected)?;
            (iv.ln(), l.join(Exp))
        }
        Expr::Step(c) => {
            let (_, l) = walk(c, domain, rejected)?;
            (Interval::new(0.0, 1.0), l)
        }
        Expr::Analytic { func, arg, domain: decl } => {
            if !decl.is_bounded() || decl.lo > decl.hi {
                return Err(TameError::Malformed(format!(
                    "{} needs a bounded declared domain, got {decl}",
                    func.name()
                )));
            }
            let (iv, l) = walk(arg, domain, rejected)?;
            let label = if iv.is_bounded() && iv.is_subset_of(decl) {
                l.join(An)
            } else {
                reject(rejected, e)
            };
            let range = match func {
                AnalyticFn::Sin => iv.sin(),
                AnalyticFn::Cos => iv.cos(),
            };
            (range, label)
        }
    })
}

/// Classifies an objective's symbolic recipe over all of `R^dim`.
pub fn classify_objective(obj: &dyn Objective) -> Result<StructureLabel, TameError> {
    let recipe = obj.recipe()?;
    let domain = vec![Interval::entire(); obj.dim()];
    classify(&recipe, &domain)
}

/// Counts maximal runs of grid samples with `e(x) > level` on a uniform
/// `samples`-point grid over `[lo, hi]`.
///
/// A sampling heuristic: the result is a lower bound on the number of
/// connected components of the superlevel set, and only as good as the
/// grid resolves the function.
pub fn count_components_1d(
    e: &Expr,
    level: f64,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Result<usize, TameError> {
    if e.num_vars() > 1 {
        return Err(TameError::NotUnivariate);
    }
    if samples < 2 {
        return Err(TameError::Malformed("need at least two samples".into()));
    }
    let step = (hi - lo) / (samples - 1) as f64;
    let mut count = 0;
    let mut inside = false;
    let mut pt = [0.0];
    for i in 0..samples {
        pt[0] = if i + 1 == samples { hi } else { lo + step * i as f64 };
        let above = e.eval(&pt) > level;
        if above && !inside {
            count += 1;
        }
        inside = above;
    }
    Ok(count)
}
