//! Problem descriptions `find x with 0 ∈ Ax + Bx` and their JSON form.
//!
//! ```json
//! { "dim": 2,
//!   "A": {"kind": "prox_quadratic", "Q": [[1,0],[0,1]], "b": [-1,-1]},
//!   "B": {"kind": "prox_l1", "weight": 1.0},
//!   "known_solution": [0, 0],
//!   "label": "lasso-like" }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::operators::{OperatorHandle, OperatorKind};

/// Residual bound for a declared known solution.
pub const KNOWN_SOLUTION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub op_a: OperatorHandle,
    pub op_b: OperatorHandle,
    pub dim: usize,
    pub known_solution: Option<Vector>,
    pub label: String,
}

impl ProblemSpec {
    pub fn new(op_a: OperatorHandle, op_b: OperatorHandle) -> Result<Self> {
        let dim = op_a.dim();
        if op_b.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: op_b.dim() });
        }
        Ok(Self { op_a, op_b, dim, known_solution: None, label: String::new() })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Attach a known solution, checking `‖Ax* + Bx*‖ ≤ 1e-8` when both
    /// operators can be evaluated forward.
    pub fn with_known_solution(mut self, x: Vector) -> Result<Self> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        if let Some(res) = self.forward_residual(&x) {
            if !(res <= KNOWN_SOLUTION_TOLERANCE) {
                return Err(Error::InvalidProblem(format!(
                    "known_solution has residual ‖Ax+Bx‖ = {res:e} > {KNOWN_SOLUTION_TOLERANCE:e}"
                )));
            }
        }
        self.known_solution = Some(x);
        Ok(self)
    }

    /// `‖Ax + Bx‖` if both operators are forward-evaluable.
    pub fn forward_residual(&self, x: &Vector) -> Option<f64> {
        let a = self.op_a.forward_eval(x).ok()?;
        let b = self.op_b.forward_eval(x).ok()?;
        Some((a + b).norm())
    }

    pub fn alpha(&self) -> f64 {
        self.op_a.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.op_b.alpha()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ProblemDocument =
            serde_json::from_str(s).map_err(|e| Error::InvalidProblem(format!("parse error: {e}")))?;
        doc.into_spec()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ProblemDocument::from_spec(self)).expect("problem documents serialize")
    }
}

/// Serialized problem. Field names are part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub dim: usize,
    #[serde(rename = "A")]
    pub a: OperatorDocument,
    #[serde(rename = "B")]
    pub b: OperatorDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_solution: Option<Vec<f64>>,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDocument {
    #[serde(flatten)]
    pub kind: KindDocument,
    /// Overrides the computed monotonicity constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KindDocument {
    ScaledIdentity {
        alpha: f64,
    },
    LinearMatrix {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Vec<f64>>,
    },
    SkewPlusAlpha {
        skew: Vec<Vec<f64>>,
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Vec<f64>>,
    },
    ProxQuadratic {
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    ProxL1 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weight: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
    ProxBoxIndicator {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    ProxShifted {
        base: Box<OperatorDocument>,
        c: f64,
    },
}

impl ProblemDocument {
    pub fn into_spec(self) -> Result<ProblemSpec> {
        if self.dim == 0 {
            return Err(Error::InvalidProblem("dim must be positive".into()));
        }
        let a = self.a.build(self.dim)?;
        let b = self.b.build(self.dim)?;
        for (name, op) in [("A", &a), ("B", &b)] {
            if op.dim() != self.dim {
                return Err(Error::InvalidProblem(format!(
                    "operator {name} has dimension {} but dim = {}",
                    op.dim(),
                    self.dim
                )));
            }
        }
        let mut spec = ProblemSpec::new(a, b)?.with_label(self.label);
        if let Some(x) = self.known_solution {
            spec = spec.with_known_solution(Vector::from_vec(x))?;
        }
        Ok(spec)
    }

    pub fn from_spec(spec: &ProblemSpec) -> Self {
        Self {
            dim: spec.dim,
            a: OperatorDocument::from_handle(&spec.op_a),
            b: OperatorDocument::from_handle(&spec.op_b),
            known_solution: spec.known_solution.as_ref().map(|v| v.iter().copied().collect()),
            label: spec.label.clone(),
        }
    }
}

impl OperatorDocument {
    pub fn build(&self, dim: usize) -> Result<OperatorHandle> {
        let matrix = |rows: &[Vec<f64>]| {
            linalg::matrix_from_rows(rows).ok_or_else(|| Error::InvalidProblem("ragged matrix rows".into()))
        };
        let vector = |v: &Option<Vec<f64>>| v.as_ref().map(|v| Vector::from_vec(v.clone()));
        let op = match &self.kind {
            KindDocument::ScaledIdentity { alpha } => OperatorHandle::scaled_identity(dim, *alpha)?,
            KindDocument::LinearMatrix { matrix: m, offset } => {
                OperatorHandle::affine_matrix(matrix(m)?, vector(offset))?
            }
            KindDocument::SkewPlusAlpha { skew, alpha, offset } => {
                OperatorHandle::affine_skew_plus_alpha(matrix(skew)?, *alpha, vector(offset))?
            }
            KindDocument::ProxQuadratic { q, b } => {
                OperatorHandle::prox_quadratic(matrix(q)?, Vector::from_vec(b.clone()))?
            }
            KindDocument::ProxL1 { weight, weights } => match (weight, weights) {
                (Some(w), None) => OperatorHandle::prox_l1(dim, *w)?,
                (None, Some(ws)) => OperatorHandle::prox_l1_weighted(Vector::from_vec(ws.clone()))?,
                _ => return Err(Error::InvalidProblem("prox_l1 needs exactly one of `weight` or `weights`".into())),
            },
            KindDocument::ProxBoxIndicator { lower, upper } => {
                OperatorHandle::prox_box(Vector::from_vec(lower.clone()), Vector::from_vec(upper.clone()))?
            }
            KindDocument::ProxShifted { base, c } => OperatorHandle::prox_shifted(base.build(dim)?, *c)?,
        };
        Ok(match self.declared_alpha {
            Some(a) => op.with_declared_alpha(a),
            None => op,
        })
    }

    pub fn from_handle(op: &OperatorHandle) -> Self {
        let rows = linalg::matrix_to_rows;
        let vec = |v: &Vector| v.iter().copied().collect::<Vec<_>>();
        let kind = match op.kind() {
            OperatorKind::ScaledIdentity { scale } => KindDocument::ScaledIdentity { alpha: *scale },
            OperatorKind::LinearMatrix { matrix, offset } => {
                KindDocument::LinearMatrix { matrix: rows(matrix), offset: offset.as_ref().map(vec) }
            }
            OperatorKind::SkewPlusAlpha { skew, shift, offset } => {
                KindDocument::SkewPlusAlpha { skew: rows(skew), alpha: *shift, offset: offset.as_ref().map(vec) }
            }
            OperatorKind::ProxQuadratic { q, b } => KindDocument::ProxQuadratic { q: rows(q), b: vec(b) },
            OperatorKind::ProxL1 { weights } => KindDocument::ProxL1 { weight: None, weights: Some(vec(weights)) },
            OperatorKind::ProxBox { lower, upper } => {
                KindDocument::ProxBoxIndicator { lower: vec(lower), upper: vec(upper) }
            }
            OperatorKind::ProxShifted { base, c } => {
                KindDocument::ProxShifted { base: Box::new(Self::from_handle(base)), c: *c }
            }
        };
        Self { kind, declared_alpha: op.alpha_overridden().then_some(op.alpha()) }
    }
}
