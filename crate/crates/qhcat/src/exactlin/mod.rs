//! Exact linear algebra over the rationals and prime fields.
//!
//! Dense matrices with Gauss-Jordan elimination, a sparse variant for large
//! systems, and subspace/quotient helpers in normal form.

mod matrix;
mod scalar;
mod sparse;
mod subspace;

pub use matrix::{image_basis, kernel_basis, rref, solve, Matrix, DENSE_CUTOFF};
pub use scalar::{Field, Scalar, DEFAULT_PRIME};
pub use sparse::SparseMatrix;
pub use subspace::{QuotientSpace, Subspace};

/// Zero vector of length `n`.
pub fn zero_vec(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

/// Unit vector `e_i` of length `n`.
pub fn unit_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `a + f * b` elementwise.
pub fn axpy(a: &[Scalar], f: &Scalar, b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + &(f * y)).collect()
}
