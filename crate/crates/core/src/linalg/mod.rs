//! Dense complex linear algebra on finite-dimensional stage spaces.

mod norm;
mod operator;
pub mod random;
pub(crate) mod svd;
mod vector;

pub(crate) use norm::null_space;
pub use norm::{
    classify, gap, lemma_check, lemma_check_with_tol, operator_norm, singular_values, LemmaCheck,
    OperatorClass, OperatorKind, DEFAULT_TOL, GAP_CLAMP, SVD_LIMIT,
};
pub use operator::{adjoint, kronecker, Operator};
pub use random::random_contraction;
pub(crate) use vector::{check_dims, inner_unchecked};
pub use vector::{inner, FinVector};

/// Complex scalars; serialised as `[re, im]`.
pub type Scalar = num_complex::Complex64;

pub(crate) fn zero() -> Scalar {
    Scalar::new(0.0, 0.0)
}

pub(crate) fn one() -> Scalar {
    Scalar::new(1.0, 0.0)
}

/// `z^k` by repeated squaring.
pub fn scalar_pow(z: Scalar, mut k: u64) -> Scalar {
    let mut acc = one();
    let mut base = z;
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        base *= base;
    }
    acc
}
