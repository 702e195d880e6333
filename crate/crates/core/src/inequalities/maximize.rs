//! CHSH maximisation strategies over observables with ‖W‖ ≤ 1.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functionals::{chsh_value, Settings};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, hermitian_sign, kron, partial_trace, pauli, ComplexMatrix};
use crate::observables::{qubit_observable, random_observable, Observable, QubitObservableParams};
use crate::states::BipartiteState;

const SEESAW_GAIN_TOL: f64 = 1e-9;
const SEESAW_MAX_ITERS: usize = 200;

#[derive(Debug, Clone)]
pub struct ChshMaximum {
    pub method: &'static str,
    /// Certified maximum for closed-form methods, a lower bound otherwise.
    pub value: f64,
    pub settings: Settings,
    /// chsh_value evaluated on `settings`.
    pub achieved: f64,
    pub is_lower_bound: bool,
}

/// A strategy for maximising the CHSH functional over local observables.
pub trait ChshMaximizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn supports(&self, rho: &BipartiteState) -> bool;
    fn maximize(&self, rho: &BipartiteState) -> Result<ChshMaximum>;
}

pub struct MaximizerRegistry {
    entries: Vec<Box<dyn ChshMaximizer>>,
}

impl MaximizerRegistry {
    pub fn standard(restarts: usize, seed: u64) -> Self {
        Self {
            entries: vec![
                Box::new(TwoQubitClosedForm),
                Box::new(SeeSaw { restarts, seed }),
            ],
        }
    }

    pub fn register(&mut self, m: Box<dyn ChshMaximizer>) {
        self.entries.retain(|e| e.name() != m.name());
        self.entries.push(m);
    }

    pub fn get(&self, name: &str) -> Result<&dyn ChshMaximizer> {
        self.entries
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "CHSH maximiser",
                name: name.to_string(),
            })
    }

    /// First registered strategy that supports ρ.
    pub fn auto(&self, rho: &BipartiteState) -> Result<&dyn ChshMaximizer> {
        self.entries
            .iter()
            .find(|m| m.supports(rho))
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::Precondition("no CHSH maximiser supports this state".into()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|m| m.name()).collect()
    }
}

/// t_ij = tr[ρ (σ_i ⊗ σ_j)].
pub fn correlation_matrix(rho: &BipartiteState) -> Result<[[f64; 3]; 3]> {
    if rho.d1() != 2 || rho.d2() != 2 {
        return Err(Error::Dimension(format!(
            "two-qubit correlation matrix needs d1 = d2 = 2, got {} and {}",
            rho.d1(),
            rho.d2()
        )));
    }
    let s = pauli::all();
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = rho.matrix().trace_product(&kron(&s[i], &s[j])).re;
        }
    }
    Ok(t)
}

fn mat_vec(t: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| (0..3).map(|j| t[i][j] * v[j]).sum())
}

fn normalized_or(v: [f64; 3], fallback: [f64; 3]) -> [f64; 3] {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len > 1e-300 {
        v.map(|x| x / len)
    } else {
        fallback
    }
}

fn orthogonal_to(v: [f64; 3]) -> [f64; 3] {
    let pick = if v[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let d: f64 = (0..3).map(|i| pick[i] * v[i]).sum();
    normalized_or(std::array::from_fn(|i| pick[i] - d * v[i]), [0.0, 0.0, 1.0])
}

/// 2√(s1² + s2²) from the two largest singular values of the correlation
/// matrix, with explicit spin settings attaining it.
pub fn chsh_max_two_qubit(rho: &BipartiteState) -> Result<ChshMaximum> {
    let t = correlation_matrix(rho)?;
    // right singular vectors: eigenvectors of TᵀT
    let ttt = ComplexMatrix::from_fn(3, 3, |i, j| {
        Complex64::new((0..3).map(|k| t[k][i] * t[k][j]).sum(), 0.0)
    });
    let eig = hermitian_eig(&ttt)?;
    let s1 = eig.values[2].max(0.0).sqrt();
    let s2 = eig.values[1].max(0.0).sqrt();
    let v1: [f64; 3] = std::array::from_fn(|i| eig.vectors[(i, 2)].re);
    let v2: [f64; 3] = std::array::from_fn(|i| eig.vectors[(i, 1)].re);
    let theta = s2.atan2(s1);
    let (c, s) = (theta.cos(), theta.sin());
    let b1: [f64; 3] = std::array::from_fn(|i| c * v1[i] + s * v2[i]);
    let b2: [f64; 3] = std::array::from_fn(|i| c * v1[i] - s * v2[i]);
    // Alice: directions of T(b1 ± b2)
    let a1 = normalized_or(
        mat_vec(&t, std::array::from_fn(|i| b1[i] + b2[i])),
        [0.0, 0.0, 1.0],
    );
    let a2 = normalized_or(
        mat_vec(&t, std::array::from_fn(|i| b1[i] - b2[i])),
        orthogonal_to(a1),
    );
    let spin = |n: [f64; 3]| qubit_observable(QubitObservableParams::spin(n));
    let settings = Settings {
        a1: spin(a1),
        a2: spin(a2),
        b1: spin(normalized_or(b1, [0.0, 0.0, 1.0])),
        b2: spin(normalized_or(b2, [1.0, 0.0, 0.0])),
    };
    let achieved = chsh_value(rho, &settings)?.value;
    Ok(ChshMaximum {
        method: "two-qubit",
        value: 2.0 * (s1 * s1 + s2 * s2).sqrt(),
        settings,
        achieved,
        is_lower_bound: false,
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TwoQubitClosedForm;

impl ChshMaximizer for TwoQubitClosedForm {
    fn name(&self) -> &'static str {
        "two-qubit"
    }

    fn supports(&self, rho: &BipartiteState) -> bool {
        rho.d1() == 2 && rho.d2() == 2
    }

    fn maximize(&self, rho: &BipartiteState) -> Result<ChshMaximum> {
        chsh_max_two_qubit(rho)
    }
}

/// One see-saw run from a random start.
#[derive(Debug, Clone)]
pub struct SeeSawRun {
    pub value: f64,
    pub settings: Settings,
    /// Objective after every half-step; nondecreasing up to round-off.
    pub trace: Vec<f64>,
}

/// tr_B[ρ (I ⊗ B)], Hermitian for Hermitian B.
fn alice_operator(rho: &BipartiteState, b: &ComplexMatrix) -> ComplexMatrix {
    let m = rho
        .matrix()
        .matmul(&kron(&ComplexMatrix::identity(rho.d1()), b));
    partial_trace(&m, &rho.shape(), 1)
        .expect("shape matches")
        .hermitian_part()
}

/// tr_A[ρ (A ⊗ I)].
fn bob_operator(rho: &BipartiteState, a: &ComplexMatrix) -> ComplexMatrix {
    let m = rho
        .matrix()
        .matmul(&kron(a, &ComplexMatrix::identity(rho.d2())));
    partial_trace(&m, &rho.shape(), 0)
        .expect("shape matches")
        .hermitian_part()
}

fn signed_objective(rho: &BipartiteState, s: &Settings) -> Result<f64> {
    let [e11, e12, e21, e22] = s.correlations(rho)?;
    Ok(e11 + e12 + e21 - e22)
}

fn observable(m: ComplexMatrix) -> Observable {
    Observable::new(m).expect("sign function output is Hermitian")
}

/// Alternating exact maximisation from the given Bob pair.
pub fn seesaw_from(rho: &BipartiteState, b1: Observable, b2: Observable) -> Result<SeeSawRun> {
    let sum = |x: &Observable, y: &Observable, sign: f64| x.matrix() + &y.matrix().scale(sign);
    let mut settings = Settings {
        a1: observable(ComplexMatrix::identity(rho.d1())),
        a2: observable(ComplexMatrix::identity(rho.d1())),
        b1,
        b2,
    };
    let mut trace = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for _ in 0..SEESAW_MAX_ITERS {
        // Alice: A1 = sign(tr_B[ρ(I⊗(B1+B2))]), A2 = sign(tr_B[ρ(I⊗(B1−B2))])
        settings.a1 = observable(hermitian_sign(&alice_operator(
            rho,
            &sum(&settings.b1, &settings.b2, 1.0),
        ))?);
        settings.a2 = observable(hermitian_sign(&alice_operator(
            rho,
            &sum(&settings.b1, &settings.b2, -1.0),
        ))?);
        trace.push(signed_objective(rho, &settings)?);
        // Bob: B1 = sign(tr_A[ρ((A1+A2)⊗I)]), B2 = sign(tr_A[ρ((A1−A2)⊗I)])
        settings.b1 = observable(hermitian_sign(&bob_operator(
            rho,
            &sum(&settings.a1, &settings.a2, 1.0),
        ))?);
        settings.b2 = observable(hermitian_sign(&bob_operator(
            rho,
            &sum(&settings.a1, &settings.a2, -1.0),
        ))?);
        let value = signed_objective(rho, &settings)?;
        trace.push(value);
        if value - last < SEESAW_GAIN_TOL {
            break;
        }
        last = value;
    }
    Ok(SeeSawRun {
        value: *trace.last().expect("at least one iteration"),
        settings,
        trace,
    })
}

/// Restart `index` of a see-saw search seeded by `seed`.
pub fn seesaw_restart(rho: &BipartiteState, seed: u64, index: usize) -> Result<SeeSawRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let b1 = random_observable(rho.d2(), &mut rng);
    let b2 = random_observable(rho.d2(), &mut rng);
    seesaw_from(rho, b1, b2)
}

/// Best see-saw value over independent restarts; a lower bound on the CHSH
/// maximum. Deterministic for a given seed regardless of scheduling.
pub fn chsh_max_seesaw(rho: &BipartiteState, restarts: usize, seed: u64) -> Result<ChshMaximum> {
    if restarts == 0 {
        return Err(Error::Precondition(
            "see-saw needs at least one restart".into(),
        ));
    }
    let runs: Vec<SeeSawRun> = (0..restarts)
        .into_par_iter()
        .map(|i| seesaw_restart(rho, seed, i))
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("restarts > 0");
    let achieved = chsh_value(rho, &best.settings)?.value;
    Ok(ChshMaximum {
        method: "seesaw",
        value: best.value,
        settings: best.settings,
        achieved,
        is_lower_bound: true,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SeeSaw {
    pub restarts: usize,
    pub seed: u64,
}

impl ChshMaximizer for SeeSaw {
    fn name(&self) -> &'static str {
        "seesaw"
    }

    fn supports(&self, _rho: &BipartiteState) -> bool {
        true
    }

    fn maximize(&self, rho: &BipartiteState) -> Result<ChshMaximum> {
        chsh_max_seesaw(rho, self.restarts, self.seed)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChshMaxReport {
    pub method: String,
    pub value: f64,
    pub achieved: f64,
    pub is_lower_bound: bool,
    pub bound: f64,
    pub violated: bool,
    pub settings: super::SettingsFile,
}

impl ChshMaximum {
    pub fn report(&self) -> ChshMaxReport {
        ChshMaxReport {
            method: self.method.to_string(),
            value: self.value,
            achieved: self.achieved,
            is_lower_bound: self.is_lower_bound,
            bound: 2.0,
            violated: self.value > 2.0 + super::VIOLATION_TOL,
            settings: self.settings.to_file(),
        }
    }
}
