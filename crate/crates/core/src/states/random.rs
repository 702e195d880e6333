use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::BipartiteState;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};

fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random density matrix G G† / tr(G G†) with G a (d1 d2) x rank Ginibre matrix.
pub fn random_state(
    d1: usize,
    d2: usize,
    rank: usize,
    rng: &mut impl Rng,
) -> Result<BipartiteState> {
    let n = d1 * d2;
    if rank == 0 || rank > n {
        return Err(Error::Dimension(format!("rank {rank} not in 1..={n}")));
    }
    let g = ginibre(n, rank, rng);
    let w = g.matmul(&g.adjoint()).hermitian_part();
    let tr = w.trace().re;
    BipartiteState::new(d1, d2, w.scale(1.0 / tr))
}

/// Haar-ish random unitary exp(iH) for a Gaussian Hermitian H.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let h = ginibre(d, d, rng).hermitian_part();
    let eig = hermitian_eig(&h).expect("Hermitian by construction");
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| Complex64::from_polar(1.0, l))
        .collect();
    ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| eig.vectors[(i, k)] * phases[k] * eig.vectors[(j, k)].conj())
            .sum()
    })
}

/// SWAP on C^d ⊗ C^d.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (a, b) = (r / d, r % d);
        if c == b * d + a {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// (ρ + SρS)/2, which has equal reduced states. Requires d1 = d2.
pub fn symmetrize_marginals(rho: &BipartiteState) -> Result<BipartiteState> {
    if rho.d1() != rho.d2() {
        return Err(Error::Dimension(format!(
            "symmetrisation needs d1 = d2, got {} and {}",
            rho.d1(),
            rho.d2()
        )));
    }
    let s = swap_operator(rho.d1());
    let swapped = s.matmul(rho.matrix()).matmul(&s);
    let m = (rho.matrix() + &swapped).scale(0.5);
    BipartiteState::new(rho.d1(), rho.d2(), m)
}
