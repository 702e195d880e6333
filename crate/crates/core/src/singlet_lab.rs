//! Closed-form quantities for the noisy singlet η_{ψ⁻}(β) and the phased
//! maximally entangled states, each paired with the generic numeric path.

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_interval, Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron, partial_transpose, pauli, ComplexMatrix};
use crate::observables::{correlation, qubit_observable, QubitObservableParams};
use crate::states::{phased_max_entangled, singlet};

/// α² − |n|²(1 − β).
pub fn noisy_singlet_correlation(p: &QubitObservableParams, beta: f64) -> Result<f64> {
    check_unit_interval("beta", beta)?;
    let n2 = p.n.iter().map(|x| x * x).sum::<f64>();
    Ok(p.alpha * p.alpha - n2 * (1.0 - beta))
}

/// tr[η_{ψ⁻}(β) (W ⊗ W)] through the generic correlation path.
pub fn noisy_singlet_correlation_numeric(p: &QubitObservableParams, beta: f64) -> Result<f64> {
    let eta = singlet().mix_with_white_noise(beta)?;
    let w = qubit_observable(*p);
    correlation(&eta, &w, &w)
}

/// Outcome-pair probabilities when both parties projectively measure W_{α,n}.
/// `plus` is the outcome α + |n|, `minus` is α − |n|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbabilities {
    pub plus_plus: f64,
    pub minus_minus: f64,
    pub plus_minus: f64,
    pub minus_plus: f64,
    /// P(Alice same as Bob | Bob's outcome)
    pub conditional_same: f64,
    pub conditional_different: f64,
}

impl JointProbabilities {
    pub fn total(&self) -> f64 {
        self.plus_plus + self.minus_minus + self.plus_minus + self.minus_plus
    }

    /// (same, same, different, different)
    pub fn as_array(&self) -> [f64; 4] {
        [
            self.plus_plus,
            self.minus_minus,
            self.plus_minus,
            self.minus_plus,
        ]
    }
}

fn check_direction(p: &QubitObservableParams) -> Result<f64> {
    let r = p.n_norm();
    if r == 0.0 {
        return Err(Error::Precondition(
            "joint probabilities need |n| != 0 (W would be a multiple of the identity)".into(),
        ));
    }
    Ok(r)
}

/// Same outcomes β/4 each, opposite outcomes 1/2 − β/4 each.
pub fn noisy_singlet_joint_probs(
    p: &QubitObservableParams,
    beta: f64,
) -> Result<JointProbabilities> {
    check_direction(p)?;
    check_unit_interval("beta", beta)?;
    let same = beta / 4.0;
    let diff = 0.5 - beta / 4.0;
    Ok(JointProbabilities {
        plus_plus: same,
        minus_minus: same,
        plus_minus: diff,
        minus_plus: diff,
        conditional_same: beta / 2.0,
        conditional_different: 1.0 - beta / 2.0,
    })
}

/// tr[η (Π_i ⊗ Π_j)] with the spectral projectors Π± = (I ± n̂·σ)/2.
pub fn noisy_singlet_joint_probs_numeric(
    p: &QubitObservableParams,
    beta: f64,
) -> Result<JointProbabilities> {
    let r = check_direction(p)?;
    let eta = singlet().mix_with_white_noise(beta)?;
    let nhat = p.n.map(|x| x / r);
    let id = ComplexMatrix::identity(2);
    let plus = (&id + &pauli::dot(nhat)).scale(0.5);
    let minus = (&id - &pauli::dot(nhat)).scale(0.5);
    let prob = |a: &ComplexMatrix, b: &ComplexMatrix| eta.matrix().trace_product(&kron(a, b)).re;
    let pp = prob(&plus, &plus);
    let mm = prob(&minus, &minus);
    let pm = prob(&plus, &minus);
    let mp = prob(&minus, &plus);
    // P(Bob = +) = pp + mp
    let bob_plus = pp + mp;
    Ok(JointProbabilities {
        plus_plus: pp,
        minus_minus: mm,
        plus_minus: pm,
        minus_plus: mp,
        conditional_same: pp / bob_plus,
        conditional_different: mp / bob_plus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeresEigenvalue {
    pub d: usize,
    pub beta: f64,
    /// (β(d+1) − d)/d²
    pub analytic: f64,
    /// λ_min of the partial transpose of η_{ρ_{d,ϑ}}(β)
    pub numeric: f64,
    /// d/(d+1)
    pub boundary: f64,
}

/// Smallest partial-transpose eigenvalue of the noisy phased state, in
/// closed form and numerically. Phases default to zero when empty.
pub fn peres_pt_min_eig(d: usize, beta: f64, phases: &[f64]) -> Result<PeresEigenvalue> {
    if d < 2 {
        return Err(Error::Dimension(format!("d = {d} must be at least 2")));
    }
    let zeros;
    let phases = if phases.is_empty() {
        zeros = vec![0.0; d];
        &zeros[..]
    } else {
        phases
    };
    let eta = phased_max_entangled(d, phases)?.mix_with_white_noise(beta)?;
    let pt = partial_transpose(eta.matrix(), &eta.shape(), 1)?;
    let numeric = hermitian_eigenvalues(&pt)?[0];
    let df = d as f64;
    Ok(PeresEigenvalue {
        d,
        beta,
        analytic: (beta * (df + 1.0) - df) / (df * df),
        numeric,
        boundary: df / (df + 1.0),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingletReport {
    pub alpha: f64,
    pub n: [f64; 3],
    pub beta: f64,
    pub correlation: f64,
    pub correlation_numeric: f64,
    pub probabilities: Option<JointProbabilities>,
    pub probabilities_numeric: Option<JointProbabilities>,
}

pub fn singlet_report(p: &QubitObservableParams, beta: f64) -> Result<SingletReport> {
    let has_direction = p.n_norm() > 0.0;
    Ok(SingletReport {
        alpha: p.alpha,
        n: p.n,
        beta,
        correlation: noisy_singlet_correlation(p, beta)?,
        correlation_numeric: noisy_singlet_correlation_numeric(p, beta)?,
        probabilities: has_direction
            .then(|| noisy_singlet_joint_probs(p, beta))
            .transpose()?,
        probabilities_numeric: has_direction
            .then(|| noisy_singlet_joint_probs_numeric(p, beta))
            .transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlation_examples() {
        let spin = QubitObservableParams::spin([0.0, 0.0, 1.0]);
        assert!((noisy_singlet_correlation(&spin, 2.0 / 3.0).unwrap() + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(noisy_singlet_correlation(&spin, 1.0).unwrap(), 0.0);
        let p = QubitObservableParams::new(0.9, [0.0, 0.0, 0.1]);
        let closed = noisy_singlet_correlation(&p, 0.0).unwrap();
        assert!((closed - 0.80).abs() < 1e-15);
        assert!((noisy_singlet_correlation_numeric(&p, 0.0).unwrap() - closed).abs() < 1e-12);
        assert!(noisy_singlet_correlation(&p, 1.5).is_err());
    }

    #[test]
    fn joint_probability_examples() {
        let p = QubitObservableParams::spin([1.0, 0.0, 0.0]);
        let j = noisy_singlet_joint_probs(&p, 2.0 / 3.0).unwrap();
        assert!((j.plus_plus - 1.0 / 6.0).abs() < 1e-15);
        assert!((j.plus_minus - 1.0 / 3.0).abs() < 1e-15);
        assert!((j.conditional_same - 1.0 / 3.0).abs() < 1e-15);
        let j = noisy_singlet_joint_probs(&p, 1.0).unwrap();
        assert_eq!(j.as_array(), [0.25; 4]);
        let j = noisy_singlet_joint_probs(&p, 0.0).unwrap();
        assert_eq!(j.as_array(), [0.0, 0.0, 0.5, 0.5]);
        assert!(
            noisy_singlet_joint_probs(&QubitObservableParams::new(0.5, [0.0; 3]), 0.5).is_err()
        );
    }

    #[test]
    fn numeric_probabilities_agree() {
        let p = QubitObservableParams::new(0.3, [0.2, -0.4, 0.1]);
        let a = noisy_singlet_joint_probs(&p, 0.37).unwrap();
        let b = noisy_singlet_joint_probs_numeric(&p, 0.37).unwrap();
        for (x, y) in a.as_array().iter().zip(b.as_array()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((a.conditional_same - b.conditional_same).abs() < 1e-12);
        assert!((b.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn peres_examples() {
        let e = peres_pt_min_eig(2, 2.0 / 3.0, &[]).unwrap();
        assert_eq!(e.analytic, 0.0);
        assert!(e.numeric.abs() < 1e-12);
        let e = peres_pt_min_eig(3, 0.0, &[]).unwrap();
        assert!((e.analytic + 1.0 / 3.0).abs() < 1e-15);
        assert!((e.numeric + 1.0 / 3.0).abs() < 1e-12);
        let e = peres_pt_min_eig(2, 1.0, &[]).unwrap();
        assert!((e.numeric - 0.25).abs() < 1e-12);
        let e = peres_pt_min_eig(3, 0.4, &[0.1, 1.7, -2.0]).unwrap();
        assert!((e.numeric - e.analytic).abs() < 1e-12);
        assert!(peres_pt_min_eig(3, 0.5, &[0.0]).is_err());
    }
}
