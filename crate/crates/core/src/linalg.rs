//! Small dense linear-algebra helpers shared by the operator zoo and oracles.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Smallest eigenvalue of the symmetric part `(M + Mᵀ)/2`.
pub fn sym_part_min_eigenvalue(m: &Matrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().min()
}

/// Largest eigenvalue of the symmetric part `(M + Mᵀ)/2`.
pub fn sym_part_max_eigenvalue(m: &Matrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().max()
}

/// Operator 2-norm (largest singular value).
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Smallest singular value.
pub fn min_singular_value(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().min()
}

/// Max-abs entry of `M + Mᵀ`; zero exactly for skew-symmetric matrices.
pub fn skew_defect(m: &Matrix) -> f64 {
    (m + m.transpose()).amax()
}

/// Max-abs entry of `M - Mᵀ`.
pub fn symmetry_defect(m: &Matrix) -> f64 {
    (m - m.transpose()).amax()
}

/// Right-hand side of `‖σs + τt‖² = σ(σ+τ)‖s‖² + τ(σ+τ)‖t‖² − στ‖s − t‖²`.
pub fn combination_norm_sq(s: &Vector, t: &Vector, sigma: f64, tau: f64) -> f64 {
    sigma * (sigma + tau) * s.norm_squared() + tau * (sigma + tau) * t.norm_squared()
        - sigma * tau * (s - t).norm_squared()
}

/// Build a dense matrix from row-major nested rows, checking that all rows
/// have equal length.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Option<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return None;
    }
    Some(Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// Serialize a vector as a plain JSON array.
pub fn serialize_vector<S: serde::Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

pub fn serialize_vectors<S: serde::Serializer>(vs: &[Vector], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(|v| v.as_slice()))
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}
