//! Seeded generators of random chains, cocones and morphisms with known
//! structure, for property checks and the CLI's sampling commands.

use std::f64::consts::TAU;

use rand::Rng;

use crate::chain::{ChainMorphism, FamilyTail, OmegaChain, StageFamily, TailRule};
use crate::colimit::Cocone;
use crate::error::Result;
use crate::linalg::random::{random_contraction_with, random_operator, random_unitary};
use crate::linalg::{Operator, OperatorKind, Scalar};

/// Tail kinds for generated contraction chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailChoice {
    Identity,
    ScalarGeometric,
    RepeatLast,
}

impl TailChoice {
    pub const ALL: [TailChoice; 3] = [
        TailChoice::Identity,
        TailChoice::ScalarGeometric,
        TailChoice::RepeatLast,
    ];
}

fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    Scalar::from_polar(1.0, rng.random_range(0.0..TAU))
}

/// A normal contraction `Q diag(λ) Q†` on `ℂ^d` whose first `unitary` eigenvalues
/// have modulus one and the rest modulus at most `0.9`.
pub fn random_normal_contraction<R: Rng + ?Sized>(
    d: usize,
    unitary: usize,
    rng: &mut R,
) -> (Operator, Operator, Vec<Scalar>) {
    let q = random_unitary(d, rng);
    let lambda: Vec<Scalar> = (0..d)
        .map(|k| {
            if k < unitary {
                unit_phase(rng)
            } else {
                unit_phase(rng) * rng.random_range(0.0..0.9)
            }
        })
        .collect();
    let g = q
        .compose_unchecked(&Operator::diagonal(&lambda))
        .compose_unchecked(&q.adjoint());
    (g, q, lambda)
}

fn random_dims<R: Rng + ?Sized>(len: usize, max_dim: usize, rng: &mut R) -> Vec<usize> {
    (0..len).map(|_| rng.random_range(1..=max_dim)).collect()
}

fn contraction_maps<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Vec<Operator> {
    dims.windows(2)
        .map(|w| random_contraction_with(w[1], w[0], rng))
        .collect()
}

/// A random contraction chain with up to three prefix maps.
pub fn random_contraction_chain<R: Rng + ?Sized>(
    tail: TailChoice,
    max_dim: usize,
    rng: &mut R,
) -> Result<OmegaChain> {
    let k = rng.random_range(1..=3);
    match tail {
        TailChoice::Identity => {
            let dims = random_dims(k, max_dim, rng);
            let maps = contraction_maps(&dims, rng);
            OmegaChain::new(dims, maps, TailRule::Identity, OperatorKind::Contraction)
        }
        TailChoice::ScalarGeometric => {
            let dims = vec![1; k];
            let maps = contraction_maps(&dims, rng);
            let ratio = unit_phase(rng) * rng.random_range(0.0..1.0);
            OmegaChain::new(
                dims,
                maps,
                TailRule::ScalarGeometric { ratio },
                OperatorKind::Contraction,
            )
        }
        TailChoice::RepeatLast => {
            let d = rng.random_range(1..=max_dim);
            let mut dims = random_dims(k, max_dim, rng);
            dims.push(d);
            let mut maps = contraction_maps(&dims, rng);
            dims.push(d);
            maps.push(random_contraction_with(d, d, rng));
            OmegaChain::new(dims, maps, TailRule::RepeatLast, OperatorKind::Contraction)
        }
    }
}

/// A random contraction cocone into `ℂ^t` over a random contraction chain.
///
/// Components are fixed at the tail start `T` and pulled back along the
/// chain, `α_n = α_T ∘ e_{T←n}`. Beyond `T`:
///
/// * identity tails keep `α_n = α_T`;
/// * scalar tails with `|ρ| = 1` use `α_n = α_T ρ̄^{n−T}`; with `|ρ| < 1` the
///   only contraction cocone is zero;
/// * repeat tails use a normal contraction `G = Q diag(λ) Q†` and
///   `α_n = B Π D̄^{n−T} Q†`, where `Π` keeps the unimodular eigenvalues and
///   `D̄` conjugates them.
pub fn random_contraction_cocone<R: Rng + ?Sized>(
    tail: TailChoice,
    max_dim: usize,
    rng: &mut R,
) -> Result<Cocone> {
    let t = rng.random_range(1..=max_dim);
    let k = rng.random_range(1..=3);
    let (chain, alpha_t, step) = match tail {
        TailChoice::Identity => {
            let chain = random_contraction_chain(TailChoice::Identity, max_dim, rng)?;
            let d = chain.stage_dim(chain.tail_start());
            let a = random_contraction_with(t, d, rng);
            (chain, a, Operator::identity(d))
        }
        TailChoice::ScalarGeometric => {
            let dims = vec![1; k];
            let maps = contraction_maps(&dims, rng);
            let unimodular = rng.random_bool(0.5);
            let ratio = if unimodular {
                unit_phase(rng)
            } else {
                unit_phase(rng) * rng.random_range(0.0..1.0)
            };
            let chain = OmegaChain::new(
                dims,
                maps,
                TailRule::ScalarGeometric { ratio },
                OperatorKind::Contraction,
            )?;
            let a = if unimodular {
                random_contraction_with(t, 1, rng)
            } else {
                Operator::zeros(t, 1)
            };
            (chain, a, Operator::scalar(ratio.conj()))
        }
        TailChoice::RepeatLast => {
            let d = rng.random_range(1..=max_dim);
            let unitary = rng.random_range(0..=d);
            let (g, q, lambda) = random_normal_contraction(d, unitary, rng);
            let mut dims = random_dims(k, max_dim, rng);
            dims.push(d);
            let mut maps = contraction_maps(&dims, rng);
            dims.push(d);
            maps.push(g);
            let chain =
                OmegaChain::new(dims, maps, TailRule::RepeatLast, OperatorKind::Contraction)?;
            let keep: Vec<Scalar> = (0..d)
                .map(|j| Scalar::new(if j < unitary { 1.0 } else { 0.0 }, 0.0))
                .collect();
            let back: Vec<Scalar> = lambda
                .iter()
                .zip(&keep)
                .map(|(l, k)| l.conj() * k)
                .collect();
            let qh = q.adjoint();
            let b = random_contraction_with(t, d, rng);
            let a = b
                .compose_unchecked(&Operator::diagonal(&keep))
                .compose_unchecked(&qh);
            let step = q
                .compose_unchecked(&Operator::diagonal(&back))
                .compose_unchecked(&qh);
            (chain, a, step)
        }
    };
    let tail_start = chain.tail_start();
    let mut prefix = Vec::with_capacity(tail_start + 1);
    for n in 0..=tail_start {
        prefix.push(alpha_t.compose(&chain.composite(n, tail_start)?)?);
    }
    let family = StageFamily::new(prefix, FamilyTail::Power { step })?;
    Cocone::new(chain, t, family, OperatorKind::Contraction)
}

/// A well-conditioned random invertible `d × d` operator (condition ≤ 4).
fn random_invertible<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Operator {
    let u = random_unitary(d, rng);
    let s: Vec<Scalar> = (0..d)
        .map(|_| Scalar::new(rng.random_range(0.5..2.0), 0.0))
        .collect();
    u.compose_unchecked(&Operator::diagonal(&s))
        .compose_unchecked(&random_unitary(d, rng))
}

/// A random chain of bounded maps on constant dimension `d` with a
/// `repeat_last` tail.
pub fn random_bounded_chain<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<OmegaChain> {
    let maps: usize = rng.random_range(1..=4);
    let ops = (0..maps)
        .map(|_| random_operator(d, d, rng).scale(Scalar::new(rng.random_range(0.1..4.0), 0.0)))
        .collect();
    OmegaChain::new(
        vec![d; maps + 1],
        ops,
        TailRule::RepeatLast,
        OperatorKind::Bounded,
    )
}

/// A random morphism out of `source` (constant dimension, `repeat_last` tail),
/// together with the target chain it determines.
///
/// The components `α_n` for `n < T` are random and invertible, `α_T = s·I`,
/// and beyond `T` the tail is `s ρ^{n−T} I`. The target maps are
/// `d_n = α_{n+1} c_n α_n⁻¹`, and `ρ c_T` in the tail.
pub fn random_morphism_from<R: Rng + ?Sized>(
    source: &OmegaChain,
    rng: &mut R,
) -> Result<ChainMorphism> {
    assert_eq!(
        source.tail(),
        &TailRule::RepeatLast,
        "needs a repeat_last source"
    );
    let d = source.stage_dim(0);
    let t = source.tail_start() - 1;
    let s = Scalar::new(rng.random_range(0.5..2.0), 0.0) * unit_phase(rng);
    let rho = Scalar::new(rng.random_range(0.5..2.0), 0.0) * unit_phase(rng);
    let mut prefix: Vec<Operator> = (0..t).map(|_| random_invertible(d, rng)).collect();
    prefix.push(Operator::identity(d).scale(s));
    let mut maps = Vec::with_capacity(t + 1);
    for n in 0..t {
        let inv = prefix[n]
            .inverse()
            .expect("well-conditioned by construction");
        maps.push(
            prefix[n + 1]
                .compose_unchecked(&source.chain_map(n))
                .compose_unchecked(&inv),
        );
    }
    maps.push(source.chain_map(t).scale(rho));
    let target = OmegaChain::new(
        vec![d; t + 2],
        maps,
        TailRule::RepeatLast,
        OperatorKind::Bounded,
    )?;
    let family = StageFamily::new(
        prefix,
        FamilyTail::ScaledIdentity {
            scale: s * rho,
            ratio: rho,
        },
    )?;
    ChainMorphism::new(source.clone(), target, family)
}
