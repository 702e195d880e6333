//! Dense complex linear algebra: Kronecker products, partial traces and
//! transposes over tensor factors, and a Hermitian eigensolver.

mod eigen;
mod matrix;
pub mod pauli;
mod tensor;

pub use eigen::{
    hermitian_eig, hermitian_eigenvalues, is_psd, operator_norm, HermitianEigen, PsdCheck,
};
pub use matrix::{ComplexMatrix, HERMITIAN_TOL};
pub use tensor::{kron, kron_all, partial_trace, partial_transpose, TensorShape};

/// Default relative tolerance for PSD certification.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// sign(A) = V sign(Λ) V†, with zero eigenvalues mapped to +1.
pub fn hermitian_sign(a: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    Ok(eig.reconstruct_with(|l| if l >= 0.0 { 1.0 } else { -1.0 }))
}
