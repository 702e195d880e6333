use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Factor dimensions of a tensor-product space, leftmost factor first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorShape {
    dims: Vec<usize>,
}

impl TensorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension(
                "tensor shape needs at least one factor".into(),
            ));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Dimension(format!(
                "tensor factor dimension {d} is below 2"
            )));
        }
        Ok(Self { dims })
    }

    pub fn bipartite(d1: usize, d2: usize) -> Result<Self> {
        Self::new(vec![d1, d2])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Shape with one factor removed.
    pub fn without(&self, factor: usize) -> Option<Self> {
        if self.dims.len() < 2 || factor >= self.dims.len() {
            return None;
        }
        let mut dims = self.dims.clone();
        dims.remove(factor);
        Some(Self { dims })
    }

    /// (product of dims left of `factor`, dim of `factor`, product right of it)
    fn split(&self, factor: usize) -> (usize, usize, usize) {
        let left = self.dims[..factor].iter().product();
        let right = self.dims[factor + 1..].iter().product();
        (left, self.dims[factor], right)
    }

    fn check(&self, m: &ComplexMatrix, factor: usize) -> Result<()> {
        if factor >= self.dims.len() {
            return Err(Error::Dimension(format!(
                "factor {factor} out of range for {} factors",
                self.dims.len()
            )));
        }
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix does not match tensor shape {:?} (total {})",
                m.rows(),
                m.cols(),
                self.dims,
                self.total()
            )));
        }
        Ok(())
    }
}

/// Kronecker product A ⊗ B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * rb, a.cols() * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut iter = factors.iter();
    let first = iter.next().expect("kron_all needs at least one factor");
    iter.fold((*first).clone(), |acc, m| kron(&acc, m))
}

/// Traces out the factor at position `factor` (0 = leftmost).
pub fn partial_trace(
    t: &ComplexMatrix,
    shape: &TensorShape,
    factor: usize,
) -> Result<ComplexMatrix> {
    shape.check(t, factor)?;
    if shape.len() < 2 {
        return Err(Error::Dimension(
            "partial trace needs at least two factors".into(),
        ));
    }
    let (left, mid, right) = shape.split(factor);
    let n = left * right;
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..left {
        for b in 0..right {
            let row = a * right + b;
            for a2 in 0..left {
                for b2 in 0..right {
                    let col = a2 * right + b2;
                    let mut acc = num_complex::Complex64::new(0.0, 0.0);
                    for m in 0..mid {
                        acc += t[((a * mid + m) * right + b, (a2 * mid + m) * right + b2)];
                    }
                    out[(row, col)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Transposes the indices of the factor at position `factor` only.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    shape: &TensorShape,
    factor: usize,
) -> Result<ComplexMatrix> {
    shape.check(rho, factor)?;
    let (left, mid, right) = shape.split(factor);
    let n = shape.total();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (a, rest) = (r / (mid * right), r % (mid * right));
        let (m, b) = (rest / right, rest % right);
        let (a2, rest2) = (c / (mid * right), c % (mid * right));
        let (m2, b2) = (rest2 / right, rest2 % right);
        debug_assert!(a < left && a2 < left);
        rho[((a * mid + m2) * right + b, (a2 * mid + m) * right + b2)]
    }))
}
