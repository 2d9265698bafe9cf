//! JSON problem files.
//!
//! ```json
//! {
//!   "kind": "pmi",
//!   "vars": [{"name": "x", "block": "x"}, {"name": "y", "block": "y"}],
//!   "objective": [{"exps": [0, 1], "coef": 1.0}],
//!   "matrix": {"dim": 2, "lower": [[...], [...], [...]]},
//!   "box": {"lo": [-2, -2], "hi": [2, 2]}
//! }
//! ```
//!
//! `lower` lists the lower triangle row by row. A `matrixvar` file instead
//! carries `"dim"`, `"Q"` (a term list over `X_ij, i <= j`, row-major) and
//! `"trace_one"`. x-block variables must come before y-block ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use tamepmi::{MatrixVarProblem, PmiProblem, PolyMatrix, Polynomial, SearchBox, Term};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

impl ProblemError {
    fn invalid(msg: impl Into<String>) -> Self {
        ProblemError::Invalid(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pmi,
    Matrixvar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Var {
    pub name: String,
    pub block: Block,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub dim: usize,
    pub lower: Vec<Vec<Term>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vars: Vec<Var>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Term>>,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub search_box: Option<SearchBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_one: Option<bool>,
}

pub enum Problem {
    Pmi(PmiProblem),
    MatrixVar(MatrixVarProblem),
}

impl ProblemFile {
    pub fn parse(src: &str) -> Result<Self, ProblemError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("plain data");
        serde_json::to_string_pretty(&v).expect("plain data")
    }

    pub fn build(&self) -> Result<Problem, ProblemError> {
        match self.kind {
            Kind::Pmi => self.build_pmi().map(Problem::Pmi),
            Kind::Matrixvar => self.build_matrixvar().map(Problem::MatrixVar),
        }
    }

    fn build_pmi(&self) -> Result<PmiProblem, ProblemError> {
        if self.q.is_some() || self.dim.is_some() || self.trace_one.is_some() {
            return Err(ProblemError::invalid("'Q', 'dim' and 'trace_one' belong to matrixvar problems"));
        }
        let k = self.vars.iter().take_while(|v| v.block == Block::X).count();
        if self.vars[k..].iter().any(|v| v.block == Block::X) {
            return Err(ProblemError::invalid("x-block variables must precede y-block variables"));
        }
        let n = self.vars.len();
        let names: Vec<String> = self.vars.iter().map(|v| v.name.clone()).collect();
        if let Some(dup) = names.iter().enumerate().find(|(i, a)| names[..*i].contains(a)) {
            return Err(ProblemError::invalid(format!("variable '{}' declared twice", dup.1)));
        }
        let poly = |terms: &[Term], what: &str| {
            Polynomial::from_term_list(n, terms).map_err(|e| ProblemError::invalid(format!("{what}: {e}")))
        };
        let objective = poly(
            self.objective.as_deref().ok_or_else(|| ProblemError::invalid("missing 'objective'"))?,
            "objective",
        )?;
        if let Some(i) = (0..k).find(|&i| objective.depends_on_any(i..i + 1)) {
            return Err(ProblemError::invalid(format!(
                "objective uses x-block variable '{}'; it may only depend on y",
                names[i]
            )));
        }
        let spec = self.matrix.as_ref().ok_or_else(|| ProblemError::invalid("missing 'matrix'"))?;
        let lower = spec
            .lower
            .iter()
            .enumerate()
            .map(|(i, t)| poly(t, &format!("matrix entry {i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let matrix = PolyMatrix::new(spec.dim, k, n - k, lower).map_err(|e| ProblemError::invalid(e.to_string()))?;
        PmiProblem::new(matrix, objective, self.search_box.clone(), names)
            .map_err(|e| ProblemError::invalid(e.to_string()))
    }

    fn build_matrixvar(&self) -> Result<MatrixVarProblem, ProblemError> {
        if self.matrix.is_some() || self.objective.is_some() || !self.vars.is_empty() {
            return Err(ProblemError::invalid("'vars', 'objective' and 'matrix' belong to pmi problems"));
        }
        if self.search_box.is_some() {
            return Err(ProblemError::invalid("matrixvar problems take no 'box'"));
        }
        let terms = self.q.as_deref().ok_or_else(|| ProblemError::invalid("missing 'Q'"))?;
        let m = match self.dim {
            Some(m) => m,
            None => {
                let n = terms.first().map(|t| t.exps.len()).ok_or_else(|| {
                    ProblemError::invalid("missing 'dim' and cannot infer it from an empty 'Q'")
                })?;
                (1..=n).find(|m| m * (m + 1) / 2 == n).ok_or_else(|| {
                    ProblemError::invalid(format!("{n} entries is not the size of a triangle"))
                })?
            }
        };
        if m == 0 {
            return Err(ProblemError::invalid("'dim' must be positive"));
        }
        let q = Polynomial::from_term_list(m * (m + 1) / 2, terms)
            .map_err(|e| ProblemError::invalid(format!("Q: {e}")))?;
        MatrixVarProblem::new(m, q, self.trace_one.unwrap_or(true)).map_err(|e| ProblemError::invalid(e.to_string()))
    }

    /// Canonical file for a built problem: terms in graded order, every
    /// optional field made explicit.
    pub fn canonical(p: &Problem) -> Self {
        match p {
            Problem::Pmi(p) => {
                let k = p.matrix.x_vars();
                ProblemFile {
                    kind: Kind::Pmi,
                    vars: p
                        .names
                        .iter()
                        .enumerate()
                        .map(|(i, n)| Var {
                            name: n.clone(),
                            block: if i < k { Block::X } else { Block::Y },
                        })
                        .collect(),
                    objective: Some(p.objective.to_term_list()),
                    matrix: Some(MatrixSpec {
                        dim: p.matrix.dim(),
                        lower: p.matrix.to_entry_lists(),
                    }),
                    dim: None,
                    q: None,
                    search_box: p.search_box.clone(),
                    trace_one: None,
                }
            }
            Problem::MatrixVar(m) => ProblemFile {
                kind: Kind::Matrixvar,
                vars: Vec::new(),
                objective: None,
                matrix: None,
                dim: Some(m.dim),
                q: Some(m.q.to_term_list()),
                search_box: None,
                trace_one: Some(m.trace_one),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = r#"{
        "kind": "pmi",
        "vars": [{"name": "x", "block": "x"}, {"name": "y", "block": "y"}],
        "objective": [{"exps": [0, 1], "coef": 1}],
        "matrix": {"dim": 2, "lower": [
            [{"exps": [1, 1], "coef": -16}, {"exps": [0, 0], "coef": 1}],
            [{"exps": [1, 0], "coef": 1}],
            [{"exps": [0, 0], "coef": 1}, {"exps": [2, 0], "coef": -1}, {"exps": [0, 2], "coef": -1}]
        ]},
        "box": {"lo": [-2, -2], "hi": [2, 2]}
    }"#;

    #[test]
    fn round_trip_is_canonical() {
        let f = ProblemFile::parse(EX1).unwrap();
        let c = ProblemFile::canonical(&f.build().unwrap());
        let again = ProblemFile::parse(&c.to_json()).unwrap();
        assert_eq!(again, c);
        assert_eq!(ProblemFile::canonical(&again.build().unwrap()), c);
        match c.build().unwrap() {
            Problem::Pmi(p) => assert_eq!(p, tamepmi::examples::example1()),
            Problem::MatrixVar(_) => panic!("wrong kind"),
        }
    }

    #[test]
    fn objective_must_avoid_x() {
        let bad = EX1.replace(r#""objective": [{"exps": [0, 1], "coef": 1}]"#, r#""objective": [{"exps": [1, 0], "coef": 1}]"#);
        let err = ProblemFile::parse(&bad).unwrap().build().err().unwrap();
        assert!(err.to_string().contains("x-block"), "{err}");
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(ProblemFile::parse("{").is_err());
        assert!(ProblemFile::parse(r#"{"kind": "lmi"}"#).is_err());
        let swapped = EX1.replace(
            r#"[{"name": "x", "block": "x"}, {"name": "y", "block": "y"}]"#,
            r#"[{"name": "y", "block": "y"}, {"name": "x", "block": "x"}]"#,
        );
        assert!(ProblemFile::parse(&swapped).unwrap().build().is_err());
        let short = EX1.replace(r#""dim": 2"#, r#""dim": 3"#);
        assert!(ProblemFile::parse(&short).unwrap().build().is_err());
    }

    #[test]
    fn matrixvar_infers_dim() {
        let src = r#"{"kind": "matrixvar", "Q": [{"exps": [1, 0, 0], "coef": 1}, {"exps": [0, 0, 1], "coef": 2}], "trace_one": true}"#;
        let f = ProblemFile::parse(src).unwrap();
        let Problem::MatrixVar(m) = f.build().unwrap() else { panic!("wrong kind") };
        assert_eq!(m.dim, 2);
        let c = ProblemFile::canonical(&Problem::MatrixVar(m));
        assert_eq!(ProblemFile::parse(&c.to_json()).unwrap(), c);
    }
}
