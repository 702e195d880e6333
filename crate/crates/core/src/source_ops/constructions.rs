use num_complex::Complex64;

use super::{ConstructionKind, Dilation};
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, ComplexMatrix, TensorShape};
use crate::states::BipartiteState;
use crate::thresholds::{require_equal_marginals, DEFAULT_MARGINAL_TOL};

/// Dense operator on a three-factor space from an entry function over
/// multi-indices.
fn assemble(dims: [usize; 3], f: impl Fn([usize; 3], [usize; 3]) -> Complex64) -> ComplexMatrix {
    let [_, d1, d2] = dims;
    let n: usize = dims.iter().product();
    let split = |i: usize| [i / (d1 * d2), (i / d2) % d1, i % d2];
    ComplexMatrix::from_fn(n, n, |r, c| f(split(r), split(c)))
}

fn norm(m: &ComplexMatrix) -> f64 {
    operator_norm(m).expect("reduced states are Hermitian")
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Extension along the second party: C^d1 ⊗ C^d2 ⊗ C^d2, with the
/// auxiliary density operator fixed to I/d2.
#[derive(Debug, Default, Clone, Copy)]
pub struct RightDilation;

impl Dilation for RightDilation {
    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Right
    }

    fn check(&self, _rho: &BipartiteState) -> Result<()> {
        Ok(())
    }

    fn shape(&self, rho: &BipartiteState) -> TensorShape {
        TensorShape::new(vec![rho.d1(), rho.d2(), rho.d2()]).expect("state dims >= 2")
    }

    fn marginal_factors(&self) -> &'static [usize] {
        &[1, 2]
    }

    fn assemble(&self, rho: &BipartiteState, beta: f64) -> ComplexMatrix {
        let (d1, d2) = (rho.d1(), rho.d2());
        let (tau1, _) = rho.reduced_states();
        let r = rho.matrix();
        let xi = 1.0 / d2 as f64;
        let w = 1.0 - beta;
        let noise = beta / (d1 * d2 * d2) as f64;
        assemble([d1, d2, d2], |[n, a, b], [n2, a2, b2]| {
            let ij = |x: usize, y: usize| x * d2 + y;
            let mut v = r[(ij(n, a), ij(n2, a2))] * (xi * delta(b, b2))
                + r[(ij(n, b), ij(n2, b2))] * (xi * delta(a, a2))
                - tau1[(n, n2)] * (xi * xi * delta(a, a2) * delta(b, b2));
            v *= w;
            if n == n2 && a == a2 && b == b2 {
                v += noise;
            }
            v
        })
    }

    fn analytic_lower_bound(&self, rho: &BipartiteState, beta: f64) -> f64 {
        let (d1, d2) = (rho.d1() as f64, rho.d2() as f64);
        let (tau1, _) = rho.reduced_states();
        (beta - d1 * norm(&tau1) * (1.0 - beta)) / (d1 * d2 * d2)
    }

    fn formula_threshold(&self, rho: &BipartiteState) -> f64 {
        let (tau1, _) = rho.reduced_states();
        let x = rho.d1() as f64 * norm(&tau1);
        x / (1.0 + x)
    }
}

/// Mirror of [`RightDilation`] along the first party: C^d1 ⊗ C^d1 ⊗ C^d2,
/// auxiliary density operator I/d1.
#[derive(Debug, Default, Clone, Copy)]
pub struct LeftDilation;

impl Dilation for LeftDilation {
    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Left
    }

    fn check(&self, _rho: &BipartiteState) -> Result<()> {
        Ok(())
    }

    fn shape(&self, rho: &BipartiteState) -> TensorShape {
        TensorShape::new(vec![rho.d1(), rho.d1(), rho.d2()]).expect("state dims >= 2")
    }

    fn marginal_factors(&self) -> &'static [usize] {
        &[0, 1]
    }

    fn assemble(&self, rho: &BipartiteState, beta: f64) -> ComplexMatrix {
        let (d1, d2) = (rho.d1(), rho.d2());
        let (_, tau2) = rho.reduced_states();
        let r = rho.matrix();
        let xi = 1.0 / d1 as f64;
        let w = 1.0 - beta;
        let noise = beta / (d1 * d1 * d2) as f64;
        assemble([d1, d1, d2], |[a, b, m], [a2, b2, m2]| {
            let ij = |x: usize, y: usize| x * d2 + y;
            let mut v = r[(ij(b, m), ij(b2, m2))] * (xi * delta(a, a2))
                + r[(ij(a, m), ij(a2, m2))] * (xi * delta(b, b2))
                - tau2[(m, m2)] * (xi * xi * delta(a, a2) * delta(b, b2));
            v *= w;
            if a == a2 && b == b2 && m == m2 {
                v += noise;
            }
            v
        })
    }

    fn analytic_lower_bound(&self, rho: &BipartiteState, beta: f64) -> f64 {
        let (d1, d2) = (rho.d1() as f64, rho.d2() as f64);
        let (_, tau2) = rho.reduced_states();
        (beta - d2 * norm(&tau2) * (1.0 - beta)) / (d1 * d1 * d2)
    }

    fn formula_threshold(&self, rho: &BipartiteState) -> f64 {
        let (_, tau2) = rho.reduced_states();
        let x = rho.d2() as f64 * norm(&tau2);
        x / (1.0 + x)
    }
}

/// Symmetric three-slot dilation on C^d ⊗ C^d ⊗ C^d for states with equal
/// reduced states; every single-factor partial trace returns η_ρ(β).
#[derive(Debug, Clone, Copy)]
pub struct BellDilation {
    pub marginal_tol: f64,
}

impl Default for BellDilation {
    fn default() -> Self {
        Self {
            marginal_tol: DEFAULT_MARGINAL_TOL,
        }
    }
}

impl BellDilation {
    /// Common reduced state; the average of the two when they agree within tolerance.
    fn tau(rho: &BipartiteState) -> ComplexMatrix {
        let (t1, t2) = rho.reduced_states();
        (&t1 + &t2).scale(0.5)
    }
}

impl Dilation for BellDilation {
    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Bell
    }

    fn check(&self, rho: &BipartiteState) -> Result<()> {
        if rho.d1() != rho.d2() {
            return Err(Error::Precondition(format!(
                "bell construction needs d1 = d2, got {} and {}",
                rho.d1(),
                rho.d2()
            )));
        }
        require_equal_marginals(rho, self.marginal_tol)
    }

    fn shape(&self, rho: &BipartiteState) -> TensorShape {
        TensorShape::new(vec![rho.d1(); 3]).expect("state dims >= 2")
    }

    fn marginal_factors(&self) -> &'static [usize] {
        &[0, 1, 2]
    }

    fn assemble(&self, rho: &BipartiteState, beta: f64) -> ComplexMatrix {
        let d = rho.d1();
        let tau = Self::tau(rho);
        let r = rho.matrix();
        let w = 1.0 - beta;
        let noise = beta / (d * d * d) as f64;
        assemble([d, d, d], |[x, y, z], [x2, y2, z2]| {
            let ij = |p: usize, q: usize| p * d + q;
            let mut v = r[(ij(x, y), ij(x2, y2))] * tau[(z, z2)]
                + r[(ij(x, z), ij(x2, z2))] * tau[(y, y2)]
                + tau[(x, x2)] * r[(ij(y, z), ij(y2, z2))]
                - tau[(x, x2)] * tau[(y, y2)] * tau[(z, z2)] * 2.0;
            v *= w;
            if x == x2 && y == y2 && z == z2 {
                v += noise;
            }
            v
        })
    }

    fn analytic_lower_bound(&self, rho: &BipartiteState, beta: f64) -> f64 {
        let d = rho.d1() as f64;
        let t = norm(&Self::tau(rho));
        (beta - 2.0 * d.powi(3) * t.powi(3) * (1.0 - beta)) / d.powi(3)
    }

    fn formula_threshold(&self, rho: &BipartiteState) -> f64 {
        let g = rho.d1() as f64 * norm(&Self::tau(rho));
        let x = 2.0 * g.powi(3);
        x / (1.0 + x)
    }
}
