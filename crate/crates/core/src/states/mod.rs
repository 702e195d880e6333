//! Bipartite density matrices on C^d1 ⊗ C^d2: named states, white-noise
//! mixing, reduced states and the JSON state file format.

mod random;
mod registry;

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};
use crate::linalg::{self, partial_trace, ComplexMatrix, TensorShape};

pub use random::{random_state, random_unitary, swap_operator, symmetrize_marginals};
pub use registry::{named_state, resolve_state, REGISTRY_HELP};

/// Trace and Hermiticity tolerance for state validation.
pub const STATE_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue of a state.
pub const STATE_MIN_EIGENVALUE: f64 = -1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d1: usize,
    d2: usize,
    matrix: ComplexMatrix,
}

impl BipartiteState {
    /// Validates Hermiticity, unit trace and positivity; invalid input is
    /// rejected, never repaired.
    pub fn new(d1: usize, d2: usize, matrix: ComplexMatrix) -> Result<Self> {
        TensorShape::bipartite(d1, d2)?;
        let n = d1 * d2;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, expected {n}x{n} for d1={d1}, d2={d2}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let residual = matrix.hermiticity_residual();
        if residual > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: residual {residual:.3e} exceeds {STATE_TOL:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {}{:+}i differs from 1 by more than {STATE_TOL:e}",
                tr.re, tr.im
            )));
        }
        let min = linalg::hermitian_eigenvalues(&matrix)?[0];
        if min < STATE_MIN_EIGENVALUE {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite: minimum eigenvalue {min:.3e} below {STATE_MIN_EIGENVALUE:e}"
            )));
        }
        Ok(Self { d1, d2, matrix })
    }

    /// For operations that preserve the state invariants by construction.
    pub(crate) fn new_unchecked(d1: usize, d2: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), d1 * d2);
        Self { d1, d2, matrix }
    }

    /// Projector onto a normalised vector in C^d1 ⊗ C^d2.
    pub fn pure(d1: usize, d2: usize, vector: &[Complex64]) -> Result<Self> {
        if vector.len() != d1 * d2 {
            return Err(Error::Dimension(format!(
                "state vector has {} entries, expected {}",
                vector.len(),
                d1 * d2
            )));
        }
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<Complex64> = vector.iter().map(|z| z / norm).collect();
        Self::new(d1, d2, ComplexMatrix::outer(&v))
    }

    pub fn maximally_mixed(d1: usize, d2: usize) -> Result<Self> {
        TensorShape::bipartite(d1, d2)?;
        Ok(Self::new_unchecked(
            d1,
            d2,
            ComplexMatrix::identity(d1 * d2).scale(1.0 / (d1 * d2) as f64),
        ))
    }

    /// ρ_A ⊗ ρ_B from two single-party density matrices.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        Self::new(a.rows(), b.rows(), linalg::kron(a, b))
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn shape(&self) -> TensorShape {
        TensorShape::bipartite(self.d1, self.d2).expect("validated at construction")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// η_ρ(β) = β I/(d1 d2) + (1-β) ρ.
    pub fn mix_with_white_noise(&self, beta: f64) -> Result<Self> {
        check_unit_interval("beta", beta)?;
        let n = self.dim();
        let noise = beta * (1.0 / n as f64);
        let mut m = self.matrix.scale(1.0 - beta);
        for i in 0..n {
            m[(i, i)] += noise;
        }
        Ok(Self::new_unchecked(self.d1, self.d2, m))
    }

    /// (tr_2 ρ, tr_1 ρ): the reduced states on C^d1 and C^d2.
    pub fn reduced_states(&self) -> (ComplexMatrix, ComplexMatrix) {
        let shape = self.shape();
        let tau1 = partial_trace(&self.matrix, &shape, 1).expect("shape validated");
        let tau2 = partial_trace(&self.matrix, &shape, 0).expect("shape validated");
        (tau1, tau2)
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            d1: self.d1,
            d2: self.d2,
            matrix: self.matrix.to_pairs(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        file.into_state()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// JSON layout: `{ "d1": int, "d2": int, "matrix": [[re, im], ...] }`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub d1: usize,
    pub d2: usize,
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn into_state(self) -> Result<BipartiteState> {
        let n = self.d1 * self.d2;
        if self.matrix.len() != n * n {
            return Err(Error::InvalidState(format!(
                "matrix has {} entries, expected {} for d1={}, d2={}",
                self.matrix.len(),
                n * n,
                self.d1,
                self.d2
            )));
        }
        let m = ComplexMatrix::from_pairs(n, n, &self.matrix)?;
        BipartiteState::new(self.d1, self.d2, m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn vector(self) -> [Complex64; 4] {
        let s = FRAC_1_SQRT_2;
        let v = match self {
            BellKind::PhiPlus => [s, 0.0, 0.0, s],
            BellKind::PhiMinus => [s, 0.0, 0.0, -s],
            BellKind::PsiPlus => [0.0, s, s, 0.0],
            BellKind::PsiMinus => [0.0, s, -s, 0.0],
        };
        v.map(|x| Complex64::new(x, 0.0))
    }

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        }
    }
}

pub fn bell_state(kind: BellKind) -> BipartiteState {
    BipartiteState::new_unchecked(2, 2, ComplexMatrix::outer(&kind.vector()))
}

/// The singlet |ψ⁻⟩⟨ψ⁻|.
pub fn singlet() -> BipartiteState {
    bell_state(BellKind::PsiMinus)
}

/// Projector onto (1/√d) Σ_n exp(iϑ_n) e_n ⊗ e_n.
pub fn phased_max_entangled(d: usize, phases: &[f64]) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::Dimension(format!("d = {d} must be at least 2")));
    }
    if phases.len() != d {
        return Err(Error::Dimension(format!(
            "expected {d} phases, got {}",
            phases.len()
        )));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for (n, &theta) in phases.iter().enumerate() {
        v[n * d + n] = Complex64::from_polar(amp, theta);
    }
    Ok(BipartiteState::new_unchecked(
        d,
        d,
        ComplexMatrix::outer(&v),
    ))
}
