use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{correlation, random_observable, Observable, ObservableFile};
use crate::states::BipartiteState;

/// Absolute slack on every inequality comparison.
pub const VIOLATION_TOL: f64 = 1e-10;
/// Relative tolerance on the coefficient relations.
pub const COEFFICIENT_TOL: f64 = 1e-12;

/// Coefficients γ11, γ12, γ21, γ22 of the extended CHSH functional, valid
/// when at least one of
/// γ11γ12 = −γ21γ22, γ11γ21 = −γ12γ22, γ11γ22 = −γ12γ21 holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct ExtendedChshCoefficients([f64; 4]);

const RELATION_NAMES: [&str; 3] = [
    "g11*g12 = -g21*g22",
    "g11*g21 = -g12*g22",
    "g11*g22 = -g12*g21",
];

impl ExtendedChshCoefficients {
    pub fn new(g11: f64, g12: f64, g21: f64, g22: f64) -> Result<Self> {
        let c = [g11, g12, g21, g22];
        let rel = Self::relations(c);
        if rel.iter().any(|&ok| ok) {
            return Ok(Self(c));
        }
        let [a, b, cc, d] = c;
        let failures = [(a * b, -cc * d), (a * cc, -b * d), (a * d, -b * cc)]
            .iter()
            .zip(RELATION_NAMES)
            .map(|((l, r), name)| format!("{name} ({l} vs {r})"))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::Coefficients {
            coefficients: c,
            failures,
        })
    }

    /// The plain CHSH combination (1, 1, 1, −1).
    pub fn chsh() -> Self {
        Self([1.0, 1.0, 1.0, -1.0])
    }

    fn relations(c: [f64; 4]) -> [bool; 3] {
        let [a, b, cc, d] = c;
        let scale = c
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
            .powi(2)
            .max(1.0);
        let holds = |l: f64, r: f64| (l - r).abs() <= COEFFICIENT_TOL * scale;
        [
            holds(a * b, -cc * d),
            holds(a * cc, -b * d),
            holds(a * d, -b * cc),
        ]
    }

    /// Which of the three relations hold.
    pub fn satisfied_relations(&self) -> [bool; 3] {
        Self::relations(self.0)
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// 2 max|γ_ik|.
    pub fn bound(&self) -> f64 {
        2.0 * self.max_abs()
    }

    /// Three coefficients uniform in [−3, 3] away from zero, the fourth solved
    /// from relation `branch` (0, 1 or 2).
    pub fn random(branch: usize, rng: &mut impl Rng) -> Self {
        let mut draw = || loop {
            let x: f64 = rng.random_range(-3.0..=3.0);
            if x.abs() >= 1e-3 {
                return x;
            }
        };
        let (a, b, c) = (draw(), draw(), draw());
        let coeffs = match branch % 3 {
            // g11 g12 = -g21 g22  ->  g22 = -g11 g12 / g21
            0 => [a, b, c, -a * b / c],
            // g11 g21 = -g12 g22  ->  g22 = -g11 g21 / g12
            1 => [a, b, c, -a * c / b],
            // g11 g22 = -g12 g21  ->  g22 = -g12 g21 / g11
            _ => [a, b, c, -b * c / a],
        };
        Self::new(coeffs[0], coeffs[1], coeffs[2], coeffs[3]).expect("solved relation holds")
    }
}

impl From<ExtendedChshCoefficients> for [f64; 4] {
    fn from(c: ExtendedChshCoefficients) -> Self {
        c.0
    }
}

impl TryFrom<[f64; 4]> for ExtendedChshCoefficients {
    type Error = Error;

    fn try_from(c: [f64; 4]) -> Result<Self> {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

/// Alice's pair (a1, a2) and Bob's pair (b1, b2).
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub a1: Observable,
    pub a2: Observable,
    pub b1: Observable,
    pub b2: Observable,
}

impl Settings {
    pub fn to_file(&self) -> SettingsFile {
        SettingsFile {
            a1: self.a1.to_file(),
            a2: self.a2.to_file(),
            b1: self.b1.to_file(),
            b2: self.b2.to_file(),
        }
    }

    fn check(&self, rho: &BipartiteState) -> Result<()> {
        for (w, d) in [
            (&self.a1, rho.d1()),
            (&self.a2, rho.d1()),
            (&self.b1, rho.d2()),
            (&self.b2, rho.d2()),
        ] {
            if w.dim() != d {
                return Err(Error::Dimension(format!(
                    "observable on C^{} used on a factor of dimension {d}",
                    w.dim()
                )));
            }
            w.require_bounded()?;
        }
        Ok(())
    }

    /// [E11, E12, E21, E22]
    pub fn correlations(&self, rho: &BipartiteState) -> Result<[f64; 4]> {
        Ok([
            correlation(rho, &self.a1, &self.b1)?,
            correlation(rho, &self.a1, &self.b2)?,
            correlation(rho, &self.a2, &self.b1)?,
            correlation(rho, &self.a2, &self.b2)?,
        ])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SettingsFile {
    pub a1: ObservableFile,
    pub a2: ObservableFile,
    pub b1: ObservableFile,
    pub b2: ObservableFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChshReport {
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
    pub coefficients: [f64; 4],
    pub correlations: [f64; 4],
    pub settings: SettingsFile,
}

/// |E11 + E12 + E21 − E22| against the bound 2.
pub fn chsh_value(rho: &BipartiteState, settings: &Settings) -> Result<ChshReport> {
    extended_chsh_value(rho, settings, &ExtendedChshCoefficients::chsh())
}

/// |Σ γ_ik E_ik| against the bound 2 max|γ_ik|.
pub fn extended_chsh_value(
    rho: &BipartiteState,
    settings: &Settings,
    gamma: &ExtendedChshCoefficients,
) -> Result<ChshReport> {
    settings.check(rho)?;
    let e = settings.correlations(rho)?;
    let value = gamma
        .values()
        .iter()
        .zip(&e)
        .map(|(g, x)| g * x)
        .sum::<f64>()
        .abs();
    let bound = gamma.bound();
    Ok(ChshReport {
        value,
        bound,
        violated: value > bound + VIOLATION_TOL,
        coefficients: gamma.values(),
        correlations: e,
        settings: settings.to_file(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellLine {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl BellLine {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            satisfied: lhs <= rhs + VIOLATION_TOL,
        }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellCheck {
    /// |E(W1,W2) − E(W1,W̃2)| ≤ 1 − E(W2,W̃2)
    pub first: BellLine,
    /// |E(W1,W2) − E(W̃2,W2)| ≤ 1 − E(W1,W̃2), the third observable on Alice's side
    pub second: BellLine,
}

impl BellCheck {
    pub fn satisfied(&self) -> bool {
        self.first.satisfied && self.second.satisfied
    }
}

/// Both lines of the perfect-correlation Bell inequality for three
/// observables on the common space.
pub fn bell_check(
    rho: &BipartiteState,
    w1: &Observable,
    w2: &Observable,
    w3: &Observable,
) -> Result<BellCheck> {
    if rho.d1() != rho.d2() {
        return Err(Error::Dimension(format!(
            "Bell form needs d1 = d2, got {} and {}",
            rho.d1(),
            rho.d2()
        )));
    }
    for w in [w1, w2, w3] {
        w.require_bounded()?;
    }
    let e12 = correlation(rho, w1, w2)?;
    let e13 = correlation(rho, w1, w3)?;
    let e23 = correlation(rho, w2, w3)?;
    let e32 = correlation(rho, w3, w2)?;
    Ok(BellCheck {
        first: BellLine::new((e12 - e13).abs(), 1.0 - e23),
        second: BellLine::new((e12 - e32).abs(), 1.0 - e13),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellSweep {
    pub samples: usize,
    pub seed: u64,
    pub violations: usize,
    /// Smallest rhs − lhs seen over both lines; negative means a violation.
    pub min_slack: f64,
}

/// Runs [`bell_check`] on `samples` random norm-one observable triples.
pub fn bell_check_random(rho: &BipartiteState, samples: usize, seed: u64) -> Result<BellSweep> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let d = rho.d1();
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for _ in 0..samples {
        let w1 = random_observable(d, &mut rng);
        let w2 = random_observable(d, &mut rng);
        let w3 = random_observable(d, &mut rng);
        let c = bell_check(rho, &w1, &w2, &w3)?;
        if !c.satisfied() {
            violations += 1;
        }
        min_slack = min_slack.min(c.first.slack()).min(c.second.slack());
    }
    Ok(BellSweep {
        samples,
        seed,
        violations,
        min_slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointwiseBound {
    pub corner_max: f64,
    pub sampled_max: f64,
    pub bound: f64,
    pub holds: bool,
}

impl PointwiseBound {
    pub fn max_observed(&self) -> f64 {
        self.corner_max.max(self.sampled_max)
    }
}

fn multilinear(g: [f64; 4], l1: f64, l1t: f64, l2: f64, l2t: f64) -> f64 {
    (g[0] * l1 * l2 + g[1] * l1 * l2t + g[2] * l1t * l2 + g[3] * l1t * l2t).abs()
}

/// Max of |γ11λ1λ2 + γ12λ1λ̃2 + γ21λ̃1λ2 + γ22λ̃1λ̃2| over the 16 corners of
/// [−1,1]^4 (exhaustive, the form being multilinear) and over random samples.
pub fn check_pointwise_bound(
    gamma: &ExtendedChshCoefficients,
    samples: usize,
    rng: &mut impl Rng,
) -> PointwiseBound {
    let g = gamma.values();
    let mut corner_max = 0.0_f64;
    for mask in 0..16u32 {
        let s = |bit: u32| if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
        corner_max = corner_max.max(multilinear(g, s(0), s(1), s(2), s(3)));
    }
    let mut sampled_max = 0.0_f64;
    for _ in 0..samples {
        let l: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        sampled_max = sampled_max.max(multilinear(g, l[0], l[1], l[2], l[3]));
    }
    let bound = gamma.bound();
    PointwiseBound {
        corner_max,
        sampled_max,
        bound,
        holds: corner_max.max(sampled_max) <= bound + 1e-12,
    }
}
