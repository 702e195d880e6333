//! Bounded Hermitian observables, the qubit family W_{α,n} = αI + n·σ and
//! product expectations tr[ρ (W1 ⊗ W2)].

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, pauli, ComplexMatrix};
use crate::states::BipartiteState;

/// Slack allowed on ‖W‖ ≤ 1.
pub const NORM_TOL: f64 = 1e-10;

/// A Hermitian operator. The ‖W‖ ≤ 1 requirement is enforced by
/// [`Observable::require_bounded`] at the call sites that need it.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.check_hermitian()?;
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix).expect("Hermitian by construction")
    }

    pub fn require_bounded(&self) -> Result<()> {
        let norm = self.norm();
        if norm > 1.0 + NORM_TOL {
            return Err(Error::NormExceeded { norm });
        }
        Ok(())
    }

    pub fn negate(&self) -> Self {
        Self {
            matrix: self.matrix.scale(-1.0),
        }
    }

    pub fn to_file(&self) -> ObservableFile {
        ObservableFile::Matrix {
            dim: self.dim(),
            matrix: self.matrix.to_pairs(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ObservableFile = serde_json::from_str(text)?;
        file.into_observable()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Observable JSON: either `{ "dim": int, "matrix": [[re, im], ...] }` or the
/// qubit shorthand `{ "alpha": x, "n": [nx, ny, nz] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableFile {
    Matrix { dim: usize, matrix: Vec<[f64; 2]> },
    Qubit { alpha: f64, n: [f64; 3] },
}

impl ObservableFile {
    pub fn into_observable(self) -> Result<Observable> {
        match self {
            ObservableFile::Matrix { dim, matrix } => {
                if matrix.len() != dim * dim {
                    return Err(Error::Dimension(format!(
                        "observable matrix has {} entries, expected {}",
                        matrix.len(),
                        dim * dim
                    )));
                }
                Observable::new(ComplexMatrix::from_pairs(dim, dim, &matrix)?)
            }
            ObservableFile::Qubit { alpha, n } => {
                Ok(qubit_observable(QubitObservableParams { alpha, n }))
            }
        }
    }
}

/// Parameters of W_{α,n} = αI + n_x σ_x + n_y σ_y + n_z σ_z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitObservableParams {
    pub alpha: f64,
    pub n: [f64; 3],
}

impl QubitObservableParams {
    pub fn new(alpha: f64, n: [f64; 3]) -> Self {
        Self { alpha, n }
    }

    /// Spin observable n·σ along a unit direction.
    pub fn spin(direction: [f64; 3]) -> Self {
        let len = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self {
            alpha: 0.0,
            n: direction.map(|x| x / len),
        }
    }

    pub fn n_norm(&self) -> f64 {
        self.n.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// (α - |n|, α + |n|)
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.n_norm();
        (self.alpha - r, self.alpha + r)
    }

    pub fn is_bounded(&self) -> bool {
        self.alpha.abs() + self.n_norm() <= 1.0 + NORM_TOL
    }
}

pub fn qubit_observable(p: QubitObservableParams) -> Observable {
    let m = &ComplexMatrix::identity(2).scale(p.alpha) + &pauli::dot(p.n);
    Observable { matrix: m }
}

/// Gaussian Hermitian matrix rescaled to operator norm 1.
pub fn random_observable(dim: usize, rng: &mut impl Rng) -> Observable {
    assert!(dim >= 2, "random_observable needs dim >= 2");
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = g.hermitian_part();
    let norm = operator_norm(&h).expect("Hermitian by construction");
    Observable {
        matrix: h.scale(1.0 / norm),
    }
}

/// Random qubit observable with |α| + |n| ≤ 1 (not necessarily extremal).
pub fn random_qubit_params(rng: &mut impl Rng) -> QubitObservableParams {
    let dir: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r: f64 = rng.random_range(0.0..=1.0);
    let alpha: f64 = rng.random_range(-(1.0 - r)..=(1.0 - r));
    QubitObservableParams::new(alpha, dir.map(|x| r * x / len))
}

/// tr[ρ (W1 ⊗ W2)] together with the magnitude of its imaginary part.
pub fn correlation_with_residual(
    rho: &BipartiteState,
    w1: &Observable,
    w2: &Observable,
) -> Result<(f64, f64)> {
    let (d1, d2) = (rho.d1(), rho.d2());
    if w1.dim() != d1 || w2.dim() != d2 {
        return Err(Error::Dimension(format!(
            "observables act on C^{} and C^{}, state lives on C^{d1} ⊗ C^{d2}",
            w1.dim(),
            w2.dim()
        )));
    }
    let r = rho.matrix();
    let (a, b) = (w1.matrix(), w2.matrix());
    let mut acc = Complex64::new(0.0, 0.0);
    for i1 in 0..d1 {
        for i2 in 0..d2 {
            let row = i1 * d2 + i2;
            for j1 in 0..d1 {
                let aj = a[(j1, i1)];
                if aj == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j2 in 0..d2 {
                    acc += r[(row, j1 * d2 + j2)] * aj * b[(j2, i2)];
                }
            }
        }
    }
    Ok((acc.re, acc.im.abs()))
}

/// tr[ρ (W1 ⊗ W2)].
pub fn correlation(rho: &BipartiteState, w1: &Observable, w2: &Observable) -> Result<f64> {
    let (value, imag) = correlation_with_residual(rho, w1, w2)?;
    debug_assert!(imag <= 1e-10, "imaginary residual {imag:e}");
    Ok(value)
}

/// Observable from a CLI-style argument: a Pauli name (`x`, `y`, `z`, `i`,
/// optionally prefixed by `-`), inline JSON, or a path to a JSON file.
pub fn parse_observable(arg: &str) -> Result<Observable> {
    let trimmed = arg.trim();
    let (sign, name) = match trimmed.strip_prefix('-') {
        Some(rest) if rest.len() == 1 => (-1.0, rest),
        _ => (1.0, trimmed),
    };
    let pauli = match name {
        "x" | "sx" => Some(pauli::x()),
        "y" | "sy" => Some(pauli::y()),
        "z" | "sz" => Some(pauli::z()),
        "i" => Some(ComplexMatrix::identity(2)),
        _ => None,
    };
    if let Some(m) = pauli {
        return Ok(Observable {
            matrix: m.scale(sign),
        });
    }
    if trimmed.starts_with('{') {
        return Observable::from_json(trimmed);
    }
    Observable::load(trimmed)
}
