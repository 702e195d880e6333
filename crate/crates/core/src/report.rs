//! Report serialisation and the end-to-end example table.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::inequalities::MaximizerRegistry;
use crate::observables::QubitObservableParams;
use crate::singlet_lab::{
    noisy_singlet_correlation, noisy_singlet_joint_probs, JointProbabilities,
};
use crate::source_ops::{minimal_positive_beta, DilationRegistry};
use crate::states::{phased_max_entangled, singlet, BipartiteState};
use crate::thresholds::threshold_report;

/// Significant digits kept in emitted floats.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .map(round_significant)
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_value(&mut v);
    Ok(serde_json::to_string_pretty(&v)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoRow {
    pub state: String,
    pub gamma: f64,
    pub beta_chsh: f64,
    pub beta_bell: Option<f64>,
    pub min_beta_right: f64,
    pub min_beta_left: f64,
    pub min_beta_bell: Option<f64>,
    pub separability_boundary: f64,
    pub chsh_max: f64,
    pub chsh_method: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoSinglet {
    pub beta: f64,
    pub spin_correlation: f64,
    pub probabilities: JointProbabilities,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemoReport {
    pub rows: Vec<DemoRow>,
    pub singlet_at_two_thirds: DemoSinglet,
}

fn demo_row(
    label: &str,
    rho: &BipartiteState,
    dilations: &DilationRegistry,
    maximizers: &MaximizerRegistry,
    tol: f64,
) -> Result<DemoRow> {
    let t = threshold_report(rho, crate::thresholds::DEFAULT_MARGINAL_TOL);
    let min = |name: &str| -> Result<f64> {
        Ok(minimal_positive_beta(rho, dilations.get(name)?, tol)?.beta)
    };
    let max = maximizers.auto(rho)?.maximize(rho)?;
    let d = rho.d1() as f64;
    Ok(DemoRow {
        state: label.to_string(),
        gamma: t.gamma,
        beta_chsh: t.beta_chsh,
        beta_bell: t.beta_bell,
        min_beta_right: min("right")?,
        min_beta_left: min("left")?,
        min_beta_bell: if t.reduced_equal {
            Some(min("bell")?)
        } else {
            None
        },
        separability_boundary: d / (d + 1.0),
        chsh_max: max.value,
        chsh_method: max.method.to_string(),
    })
}

/// Thresholds, minimal certified β per construction, separability boundary
/// and CHSH maximum for ψ⁻ and ρ_{d,0} (d = 2, 3), plus the noisy-singlet
/// spin correlation and joint probabilities at β = 2/3.
pub fn demo(restarts: usize, seed: u64, tol: f64) -> Result<DemoReport> {
    let dilations = DilationRegistry::default();
    let maximizers = MaximizerRegistry::standard(restarts, seed);
    let mut rows = vec![demo_row(
        "bell:psi-",
        &singlet(),
        &dilations,
        &maximizers,
        tol,
    )?];
    for d in [2, 3] {
        let rho = phased_max_entangled(d, &vec![0.0; d])?;
        rows.push(demo_row(
            &format!("phased:d={d}"),
            &rho,
            &dilations,
            &maximizers,
            tol,
        )?);
    }
    let spin = QubitObservableParams::spin([0.0, 0.0, 1.0]);
    let beta = 2.0 / 3.0;
    Ok(DemoReport {
        rows,
        singlet_at_two_thirds: DemoSinglet {
            beta,
            spin_correlation: noisy_singlet_correlation(&spin, beta)?,
            probabilities: noisy_singlet_joint_probs(&spin, beta)?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_significant(2.0 / 3.0), 0.666666666667);
        assert_eq!(round_significant(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_significant(0.0), 0.0);
        assert_eq!(round_significant(1e-20 / 3.0), 3.33333333333e-21);
    }

    #[test]
    fn json_rounds_nested_values() {
        let text =
            to_json(&serde_json::json!({"a": [1.0 / 3.0], "b": {"c": 2, "d": 0.1 + 0.2}})).unwrap();
        assert!(text.contains("0.333333333333"));
        assert!(
            text.contains("0.3\n") || text.contains("0.3,") || text.contains("0.3 "),
            "{text}"
        );
    }
}
