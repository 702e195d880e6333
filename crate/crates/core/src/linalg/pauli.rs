//! Pauli matrices in the computational basis {e1, e2}.

use num_complex::Complex64;

use super::ComplexMatrix;

fn m2(a: [[Complex64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| a[i][j])
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn x() -> ComplexMatrix {
    m2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn y() -> ComplexMatrix {
    m2([[ZERO, -I], [I, ZERO]])
}

pub fn z() -> ComplexMatrix {
    m2([[ONE, ZERO], [ZERO, -ONE]])
}

/// (σx, σy, σz)
pub fn all() -> [ComplexMatrix; 3] {
    [x(), y(), z()]
}

/// n·σ for a real 3-vector.
pub fn dot(n: [f64; 3]) -> ComplexMatrix {
    let [sx, sy, sz] = all();
    &(&sx.scale(n[0]) + &sy.scale(n[1])) + &sz.scale(n[2])
}
