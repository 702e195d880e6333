//! Explicit source-operator dilations of noisy states, their marginal
//! identities, positivity certification, and the minimal admixture of
//! white noise that makes each construction positive.
//!
//! Each construction implements [`Dilation`] and is looked up by name in a
//! [`DilationRegistry`]:
//!
//! * `right`: on C^d1 ⊗ C^d2 ⊗ C^d2, traces over factors 1 and 2 give η_ρ(β);
//! * `left`:  on C^d1 ⊗ C^d1 ⊗ C^d2, traces over factors 0 and 1 give η_ρ(β);
//! * `bell`:  on (C^d)^⊗3 for equal reduced states, all three traces give η_ρ(β).

mod constructions;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use constructions::{BellDilation, LeftDilation, RightDilation};

use crate::error::{check_unit_interval, Error, Result};
use crate::linalg::{hermitian_eigenvalues, partial_trace, ComplexMatrix, TensorShape};
use crate::states::BipartiteState;
use crate::thresholds::DEFAULT_MARGINAL_TOL;

/// Default bisection tolerance for [`minimal_positive_beta`].
pub const DEFAULT_BETA_TOL: f64 = 1e-8;
const MAX_BISECTION_STEPS: usize = 60;
/// Largest admissible dilation dimension.
pub const MAX_DILATION_DIM: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Right,
    Left,
    Bell,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 3] = [Self::Right, Self::Left, Self::Bell];

    pub fn name(self) -> &'static str {
        match self {
            Self::Right => "right",
            Self::Left => "left",
            Self::Bell => "bell",
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "construction",
                name: s.to_string(),
            })
    }
}

/// A dilation strategy: builds T(β) with prescribed partial traces.
pub trait Dilation: Send + Sync {
    fn kind(&self) -> ConstructionKind;

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Preconditions on ρ.
    fn check(&self, rho: &BipartiteState) -> Result<()>;

    fn shape(&self, rho: &BipartiteState) -> TensorShape;

    /// Factors whose partial trace must reproduce η_ρ(β).
    fn marginal_factors(&self) -> &'static [usize];

    /// Raw operator; callers have already validated ρ and β.
    fn assemble(&self, rho: &BipartiteState, beta: f64) -> ComplexMatrix;

    /// Scalar c with T(β) ≥ c·I from the operator-norm estimate of the
    /// noise-minus-correction term.
    fn analytic_lower_bound(&self, rho: &BipartiteState, beta: f64) -> f64;

    /// Smallest β at which the analytic lower bound is nonnegative.
    fn formula_threshold(&self, rho: &BipartiteState) -> f64;

    fn build(&self, rho: &BipartiteState, beta: f64) -> Result<SourceOperator> {
        check_unit_interval("beta", beta)?;
        self.check(rho)?;
        let shape = self.shape(rho);
        if shape.total() > MAX_DILATION_DIM {
            return Err(Error::Precondition(format!(
                "dilation dimension {} exceeds the cap of {MAX_DILATION_DIM}",
                shape.total()
            )));
        }
        Ok(SourceOperator {
            construction: self.kind(),
            matrix: self.assemble(rho, beta),
            shape,
            marginal_factors: self.marginal_factors(),
            beta,
            target: rho.mix_with_white_noise(beta)?,
            analytic_lower_bound: self.analytic_lower_bound(rho, beta),
            formula_threshold: self.formula_threshold(rho),
        })
    }
}

/// Name-keyed collection of dilation strategies.
pub struct DilationRegistry {
    entries: Vec<Box<dyn Dilation>>,
}

impl DilationRegistry {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// `right`, `left` and `bell` (the latter with the given marginal tolerance).
    pub fn standard(marginal_tol: f64) -> Self {
        let mut r = Self::empty();
        r.register(Box::new(RightDilation));
        r.register(Box::new(LeftDilation));
        r.register(Box::new(BellDilation { marginal_tol }));
        r
    }

    /// Replaces any entry with the same name.
    pub fn register(&mut self, dilation: Box<dyn Dilation>) {
        self.entries.retain(|d| d.name() != dilation.name());
        self.entries.push(dilation);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Dilation> {
        self.entries
            .iter()
            .find(|d| d.name() == name)
            .map(|d| d.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "construction",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|d| d.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Dilation> {
        self.entries.iter().map(|d| d.as_ref())
    }
}

impl Default for DilationRegistry {
    fn default() -> Self {
        Self::standard(DEFAULT_MARGINAL_TOL)
    }
}

/// A dilation T(β) of η_ρ(β) on a three-factor space.
#[derive(Debug, Clone)]
pub struct SourceOperator {
    pub construction: ConstructionKind,
    pub shape: TensorShape,
    pub matrix: ComplexMatrix,
    pub marginal_factors: &'static [usize],
    pub beta: f64,
    /// η_ρ(β)
    pub target: BipartiteState,
    pub analytic_lower_bound: f64,
    pub formula_threshold: f64,
}

impl SourceOperator {
    /// Largest entrywise deviation of the designated partial traces from the target.
    pub fn marginal_residual(&self) -> f64 {
        self.marginal_factors
            .iter()
            .map(|&k| {
                partial_trace(&self.matrix, &self.shape, k)
                    .expect("shape matches by construction")
                    .max_abs_diff(self.target.matrix())
            })
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

pub fn build_right(rho: &BipartiteState, beta: f64) -> Result<SourceOperator> {
    RightDilation.build(rho, beta)
}

pub fn build_left(rho: &BipartiteState, beta: f64) -> Result<SourceOperator> {
    LeftDilation.build(rho, beta)
}

pub fn build_bell(rho: &BipartiteState, beta: f64) -> Result<SourceOperator> {
    BellDilation::default().build(rho, beta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsoCertificate {
    pub construction: ConstructionKind,
    pub beta: f64,
    pub min_eigenvalue: f64,
    pub is_dso: bool,
    pub tol: f64,
    pub analytic_lower_bound: f64,
    pub formula_threshold: f64,
    pub trace: f64,
    pub hermiticity_residual: f64,
    pub marginal_residual: f64,
}

/// Smallest eigenvalue of T, compared against `-tol`.
pub fn certify(t: &SourceOperator, tol: f64) -> Result<DsoCertificate> {
    let min_eigenvalue = hermitian_eigenvalues(&t.matrix)?[0];
    Ok(DsoCertificate {
        construction: t.construction,
        beta: t.beta,
        min_eigenvalue,
        is_dso: min_eigenvalue >= -tol,
        tol,
        analytic_lower_bound: t.analytic_lower_bound,
        formula_threshold: t.formula_threshold,
        trace: t.trace(),
        hermiticity_residual: t.matrix.hermiticity_residual(),
        marginal_residual: t.marginal_residual(),
    })
}

/// λ_min(T(β)) without building the full [`SourceOperator`].
pub fn min_eigenvalue_at(dilation: &dyn Dilation, rho: &BipartiteState, beta: f64) -> Result<f64> {
    check_unit_interval("beta", beta)?;
    Ok(hermitian_eigenvalues(&dilation.assemble(rho, beta))?[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalBeta {
    pub construction: ConstructionKind,
    pub beta: f64,
    pub formula_threshold: f64,
    pub tol: f64,
    pub iterations: usize,
}

/// Smallest β ∈ [0, 1] (to within `tol`) with λ_min(T(β)) ≥ 0.
///
/// T is affine in β, so λ_min is concave and the positive set is an
/// interval ending at β = 1 where T = I/N; bisection on that predicate is
/// exact up to the tolerance.
pub fn minimal_positive_beta(
    rho: &BipartiteState,
    dilation: &dyn Dilation,
    tol: f64,
) -> Result<MinimalBeta> {
    dilation.check(rho)?;
    if dilation.shape(rho).total() > MAX_DILATION_DIM {
        return Err(Error::Precondition(format!(
            "dilation dimension {} exceeds the cap of {MAX_DILATION_DIM}",
            dilation.shape(rho).total()
        )));
    }
    let positive =
        |beta: f64| -> Result<bool> { Ok(min_eigenvalue_at(dilation, rho, beta)? >= 0.0) };
    let mut report = MinimalBeta {
        construction: dilation.kind(),
        beta: 0.0,
        formula_threshold: dilation.formula_threshold(rho),
        tol,
        iterations: 0,
    };
    if positive(0.0)? {
        return Ok(report);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tol && report.iterations < MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if positive(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        report.iterations += 1;
    }
    report.beta = hi;
    Ok(report)
}
