//! Seeded random vectors and operators. Every generator is a pure function of
//! its seed or of the caller's RNG state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::svd::svd;
use super::{FinVector, Operator, Scalar};

/// A standard complex Gaussian scalar (`E|z|² = 1`).
pub fn gaussian_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Scalar::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> FinVector {
    assert!(dim > 0, "vector dimension must be positive");
    FinVector::from_entries_unchecked((0..dim).map(|_| gaussian_scalar(rng)).collect())
}

/// Gaussian matrix with entries of variance `1 / max(out_dim, in_dim)`, so
/// that singular values spread across roughly `[0, 2]`.
pub fn random_operator<R: Rng + ?Sized>(out_dim: usize, in_dim: usize, rng: &mut R) -> Operator {
    assert!(
        out_dim > 0 && in_dim > 0,
        "operator dimensions must be positive"
    );
    let s = 1.0 / (out_dim.max(in_dim) as f64).sqrt();
    let data = (0..out_dim * in_dim)
        .map(|_| gaussian_scalar(rng) * s)
        .collect();
    Operator::from_entries_unchecked(out_dim, in_dim, data)
}

/// A random contraction: a Gaussian matrix with its singular values clipped
/// to `[0, 1]`.
pub fn random_contraction_with<R: Rng + ?Sized>(
    out_dim: usize,
    in_dim: usize,
    rng: &mut R,
) -> Operator {
    svd(&random_operator(out_dim, in_dim, rng)).recompose_with(|s| s.min(1.0))
}

/// Deterministic in `seed`; see [`random_contraction_with`].
pub fn random_contraction(out_dim: usize, in_dim: usize, seed: u64) -> Operator {
    random_contraction_with(out_dim, in_dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A Haar-ish random unitary from the polar part of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Operator {
    svd(&random_operator(n, n, rng)).recompose_with(|_| 1.0)
}

/// Derives a per-sample seed from a root seed (SplitMix64 finaliser), so that
/// samples can be drawn independently and in any order.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
