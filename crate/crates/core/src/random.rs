//! Seeded sampling of states, unitaries and effects.
//!
//! Every sampler takes an explicit generator. The generator is
//! [`rand_chacha::ChaCha8Rng`] seeded through `seed_from_u64`; when work is
//! split into independent streams, stream `i` of seed `s` uses
//! [`derive_seed`]`(s, i)`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{real, CMatrix, CVector, C64};

pub type SeededRng = ChaCha8Rng;

/// Name of the pinned generator, recorded in reports.
pub const GENERATOR: &str = "rand_chacha 0.9 ChaCha8Rng::seed_from_u64";

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer applied to `seed ^ golden * (index + 1)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random unit vector in `C^n`.
pub fn haar_ket<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 1e-12 {
            return v.unscale(norm);
        }
    }
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let (q, r) = g.qr().unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            real(1.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Full-rank normalized density matrix from the Ginibre ensemble.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let rho = &g * g.adjoint();
    let tr = crate::linalg::trace(&rho).re;
    rho.unscale(tr)
}

/// Random operator with `0 <= A <= I`.
pub fn random_effect_operator<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let u = haar_unitary(n, rng);
    let d = CMatrix::from_diagonal(&CVector::from_fn(n, |_, _| real(rng.random::<f64>())));
    &u * d * u.adjoint()
}

/// Uniform point on the probability simplex of dimension `n`.
pub fn simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Random real matrix with standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}
