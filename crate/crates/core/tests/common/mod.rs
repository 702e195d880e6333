//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use bellnoise::linalg::{kron, kron_all, ComplexMatrix};
use bellnoise::states::{random_state, BipartiteState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_matrix(n, n, rng);
    ComplexMatrix::from_fn(n, n, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5)
}

pub fn full_rank_state(d1: usize, d2: usize, rng: &mut impl Rng) -> BipartiteState {
    random_state(d1, d2, d1 * d2, rng).unwrap()
}

/// Reduced states by explicit index sums.
pub fn reduced(rho: &BipartiteState) -> (ComplexMatrix, ComplexMatrix) {
    let (d1, d2) = (rho.d1(), rho.d2());
    let m = rho.matrix();
    let t1 = ComplexMatrix::from_fn(d1, d1, |i, j| {
        (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
    });
    let t2 = ComplexMatrix::from_fn(d2, d2, |i, j| {
        (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
    });
    (t1, t2)
}

/// Largest eigenvalue of a positive semidefinite matrix by power iteration
/// with a Rayleigh quotient readout.
pub fn psd_top_eigenvalue(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + i as f64 * 0.37, 0.1 * i as f64))
        .collect();
    let mut rayleigh = 0.0;
    for _ in 0..5000 {
        let w = m.apply(&v);
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        rayleigh = v
            .iter()
            .zip(&w)
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>()
            / vv;
        v = w.into_iter().map(|z| z / norm).collect();
    }
    rayleigh
}

/// Permutation operator exchanging two factors of a three-factor space.
pub fn swap_factors(dims: [usize; 3], i: usize, j: usize) -> ComplexMatrix {
    assert_eq!(dims[i], dims[j]);
    let n: usize = dims.iter().product();
    let split = |r: usize| {
        [
            r / (dims[1] * dims[2]),
            (r / dims[2]) % dims[1],
            r % dims[2],
        ]
    };
    let join = |x: [usize; 3]| (x[0] * dims[1] + x[1]) * dims[2] + x[2];
    ComplexMatrix::from_fn(n, n, |r, col| {
        let mut x = split(col);
        x.swap(i, j);
        if join(x) == r {
            c(1.0)
        } else {
            c(0.0)
        }
    })
}

fn conjugate(p: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    p.matmul(m).matmul(p)
}

pub fn right_dilation(rho: &BipartiteState, beta: f64) -> ComplexMatrix {
    let (d1, d2) = (rho.d1(), rho.d2());
    let xi = ComplexMatrix::identity(d2).scale(1.0 / d2 as f64);
    let (t1, _) = reduced(rho);
    let p = swap_factors([d1, d2, d2], 1, 2);
    let a = kron(rho.matrix(), &xi);
    let sum = &(&a + &conjugate(&p, &a)) - &kron_all(&[&t1, &xi, &xi]);
    let n = d1 * d2 * d2;
    &sum.scale(1.0 - beta) + &ComplexMatrix::identity(n).scale(beta / n as f64)
}

pub fn left_dilation(rho: &BipartiteState, beta: f64) -> ComplexMatrix {
    let (d1, d2) = (rho.d1(), rho.d2());
    let xi = ComplexMatrix::identity(d1).scale(1.0 / d1 as f64);
    let (_, t2) = reduced(rho);
    let p = swap_factors([d1, d1, d2], 0, 1);
    let a = kron(&xi, rho.matrix());
    let sum = &(&a + &conjugate(&p, &a)) - &kron_all(&[&xi, &xi, &t2]);
    let n = d1 * d1 * d2;
    &sum.scale(1.0 - beta) + &ComplexMatrix::identity(n).scale(beta / n as f64)
}

pub fn bell_dilation(rho: &BipartiteState, beta: f64) -> ComplexMatrix {
    let d = rho.d1();
    let (t1, t2) = reduced(rho);
    let tau = (&t1 + &t2).scale(0.5);
    let p = swap_factors([d, d, d], 1, 2);
    let a = kron(rho.matrix(), &tau);
    let sum = &(&(&a + &conjugate(&p, &a)) + &kron(&tau, rho.matrix()))
        - &kron_all(&[&tau, &tau, &tau]).scale(2.0);
    let n = d * d * d;
    &sum.scale(1.0 - beta) + &ComplexMatrix::identity(n).scale(beta / n as f64)
}

/// tr[ρ (A ⊗ B)] by an explicit double sum.
pub fn expectation(rho: &BipartiteState, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let (d1, d2) = (rho.d1(), rho.d2());
    let m = rho.matrix();
    let mut acc = c(0.0);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    acc += m[(i * d2 + j, k * d2 + l)] * a[(k, i)] * b[(l, j)];
                }
            }
        }
    }
    acc.re
}
