//! Reduced-state parameter γ_ρ and the noise thresholds derived from it.
//!
//! The formulas are total functions of the state. They are guaranteed
//! sufficient noise amounts only for states meeting the corresponding
//! hypotheses (CHSH-violating for `beta_chsh`, equal reduced states for
//! `beta_bell`), and they are not claimed to be the least such amounts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::operator_norm;
use crate::states::BipartiteState;

/// Default operator-norm tolerance for "equal reduced states".
pub const DEFAULT_MARGINAL_TOL: f64 = 1e-10;
/// Side values closer than this are flagged as tied.
pub const TIE_TOL: f64 = 1e-12;

pub const THRESHOLD_NOTE: &str = "thresholds are sufficient noise amounts under the stated hypotheses \
(CHSH violation for beta_chsh, equal reduced states for beta_bell); they need not be the least such amounts";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gamma {
    pub value: f64,
    /// (d1 ‖τ¹‖, d2 ‖τ²‖)
    pub side_values: (f64, f64),
    pub tied: bool,
}

/// γ_ρ = min{d1 ‖τ¹‖, d2 ‖τ²‖}.
pub fn gamma(rho: &BipartiteState) -> Gamma {
    let (t1, t2) = rho.reduced_states();
    let s1 = rho.d1() as f64 * operator_norm(&t1).expect("reduced state is Hermitian");
    let s2 = rho.d2() as f64 * operator_norm(&t2).expect("reduced state is Hermitian");
    Gamma {
        value: s1.min(s2),
        side_values: (s1, s2),
        tied: (s1 - s2).abs() <= TIE_TOL,
    }
}

pub fn beta_chsh_from_gamma(gamma: f64) -> f64 {
    gamma / (1.0 + gamma)
}

pub fn beta_bell_from_gamma(gamma: f64) -> f64 {
    let g3 = 2.0 * gamma.powi(3);
    g3 / (1.0 + g3)
}

/// γ/(1+γ).
pub fn beta_chsh(rho: &BipartiteState) -> f64 {
    beta_chsh_from_gamma(gamma(rho).value)
}

/// ‖τ¹ − τ²‖ when d1 = d2.
pub fn marginal_difference(rho: &BipartiteState) -> Option<f64> {
    if rho.d1() != rho.d2() {
        return None;
    }
    let (t1, t2) = rho.reduced_states();
    Some(operator_norm(&(&t1 - &t2)).expect("difference of Hermitian matrices"))
}

/// Checks the equal-reduced-states hypothesis, naming the offending difference.
pub fn require_equal_marginals(rho: &BipartiteState, tol: f64) -> Result<()> {
    match marginal_difference(rho) {
        None => Err(Error::Precondition(format!(
            "equal reduced states need d1 = d2, got d1 = {}, d2 = {}",
            rho.d1(),
            rho.d2()
        ))),
        Some(diff) if diff > tol => Err(Error::Precondition(format!(
            "reduced states differ: ||tau1 - tau2|| = {diff:.3e} exceeds tolerance {tol:e}"
        ))),
        Some(_) => Ok(()),
    }
}

/// 2γ³/(1+2γ³), defined for states with equal reduced states.
pub fn beta_bell(rho: &BipartiteState, tol: f64) -> Result<f64> {
    require_equal_marginals(rho, tol)?;
    Ok(beta_bell_from_gamma(gamma(rho).value))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub d1: usize,
    pub d2: usize,
    pub gamma: f64,
    pub side_values: (f64, f64),
    pub sides_tied: bool,
    pub beta_chsh: f64,
    pub beta_bell: Option<f64>,
    pub reduced_equal: bool,
    pub reduced_difference: Option<f64>,
    pub note: String,
}

pub fn threshold_report(rho: &BipartiteState, marginal_tol: f64) -> ThresholdReport {
    let g = gamma(rho);
    let diff = marginal_difference(rho);
    let reduced_equal = diff.is_some_and(|d| d <= marginal_tol);
    ThresholdReport {
        d1: rho.d1(),
        d2: rho.d2(),
        gamma: g.value,
        side_values: g.side_values,
        sides_tied: g.tied,
        beta_chsh: beta_chsh_from_gamma(g.value),
        beta_bell: reduced_equal.then(|| beta_bell_from_gamma(g.value)),
        reduced_equal,
        reduced_difference: diff,
        note: THRESHOLD_NOTE.to_string(),
    }
}
