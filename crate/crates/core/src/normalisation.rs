//! Normalising ω-chains of bounded maps.
//!
//! Dividing a single map by its norm is not functorial, because
//! `|b'∘b| ≤ |b'|·|b|` is in general strict. On chains it works: given any
//! `r(b) > 0` with `r(b) ≥ |b|`, the chain `c_n` is isomorphic to the
//! contraction chain `c_n / r(c_n)` through the scalar components
//! `η_n = ∏_{i<n} 1/r(c_i)`, and a morphism `α` becomes
//! `(N_r α)_n = α_n · ∏_{i<n} r(c_i)/r(d_i)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{validate_morphism, ChainMorphism, NaturalityReport, OmegaChain, TailRule};
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, random, Operator, OperatorKind, Scalar, DEFAULT_TOL};

/// Stages checked when a morphism is validated before normalising it.
const MORPHISM_CHECK_DEPTH: usize = 16;

/// The positive function `r ≥ |·|` used to normalise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RFunction {
    /// `r(0) = 1`, `r(b) = |b|` otherwise.
    UnitAtZero,
    /// `r(b) = 1` on contractions (within the classification tolerance),
    /// `r(b) = |b|` otherwise.
    ContinuousClamp,
}

pub fn r_value(r: RFunction, b: &Operator) -> f64 {
    let norm = operator_norm(b);
    match r {
        RFunction::UnitAtZero if norm == 0.0 => 1.0,
        RFunction::UnitAtZero => norm,
        RFunction::ContinuousClamp if norm <= 1.0 + DEFAULT_TOL => 1.0,
        RFunction::ContinuousClamp => norm,
    }
}

/// The normalised chain `c_n / r(c_n)` with the isomorphism `η : C ≅ N_r C`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedChain {
    chain: OmegaChain,
    r: RFunction,
    /// `log η_n` for `n ≤ tail_start`.
    log_eta_prefix: Vec<f64>,
    /// `−log r(c)` for the tail map `c`.
    log_eta_step: f64,
}

impl NormalizedChain {
    pub fn chain(&self) -> &OmegaChain {
        &self.chain
    }

    pub fn r(&self) -> RFunction {
        self.r
    }

    /// `log η_n = −Σ_{i<n} log r(c_i)`.
    pub fn log_eta(&self, n: usize) -> f64 {
        let t = self.log_eta_prefix.len() - 1;
        if n <= t {
            self.log_eta_prefix[n]
        } else {
            self.log_eta_prefix[t] + (n - t) as f64 * self.log_eta_step
        }
    }

    pub fn eta(&self, n: usize) -> f64 {
        self.log_eta(n).exp()
    }
}

fn log_r_sequence(chain: &OmegaChain, r: RFunction) -> (Vec<f64>, f64) {
    let t = chain.tail_start();
    let logs = (0..t)
        .map(|i| r_value(r, &chain.chain_map(i)).ln())
        .collect();
    (logs, r_value(r, &chain.tail_map()).ln())
}

/// `Σ_{i<n} log r(c_i)` from per-map logs and the tail log.
fn log_r_sum(prefix: &[f64], tail: f64, n: usize) -> f64 {
    let t = prefix.len();
    prefix[..n.min(t)].iter().sum::<f64>() + n.saturating_sub(t) as f64 * tail
}

pub fn normalize_chain(chain: &OmegaChain, r: RFunction) -> Result<NormalizedChain> {
    let (prefix_logs, tail_log) = log_r_sequence(chain, r);
    let maps = chain
        .prefix_maps()
        .iter()
        .zip(&prefix_logs)
        .map(|(m, lr)| m.scale(Scalar::new((-lr).exp(), 0.0)))
        .collect();
    let tail = match chain.tail() {
        TailRule::ScalarGeometric { ratio } => TailRule::ScalarGeometric {
            ratio: ratio / tail_log.exp(),
        },
        other => other.clone(),
    };
    let category = match chain.category() {
        OperatorKind::Isometry => OperatorKind::Isometry,
        _ => OperatorKind::Contraction,
    };
    let normalized = OmegaChain::new(chain.prefix_dims().to_vec(), maps, tail, category)?;
    let log_eta_prefix = (0..=chain.tail_start())
        .map(|n| -log_r_sum(&prefix_logs, tail_log, n))
        .collect();
    Ok(NormalizedChain {
        chain: normalized,
        r,
        log_eta_prefix,
        log_eta_step: -tail_log,
    })
}

/// Residuals of the squares `η_{n+1} c_n = (c_n / r(c_n)) η_n`, `n < depth`.
pub fn check_eta_squares(
    original: &OmegaChain,
    normalized: &NormalizedChain,
    depth: usize,
    tol: f64,
) -> Result<NaturalityReport> {
    NaturalityReport::from_squares(depth, tol, |n| {
        let lhs = original
            .chain_map(n)
            .scale(Scalar::new(normalized.eta(n + 1), 0.0));
        let rhs = normalized
            .chain
            .chain_map(n)
            .scale(Scalar::new(normalized.eta(n), 0.0));
        Ok((lhs, rhs))
    })
}

/// `∏_{i<n} r(c_i)/r(d_i)`, the scalar relating `α_n` and `(N_r α)_n`.
pub fn transfer_factor(source: &OmegaChain, target: &OmegaChain, r: RFunction, n: usize) -> f64 {
    let (c_logs, c_tail) = log_r_sequence(source, r);
    let (d_logs, d_tail) = log_r_sequence(target, r);
    (log_r_sum(&c_logs, c_tail, n) - log_r_sum(&d_logs, d_tail, n)).exp()
}

/// `(N_r α)_n = α_n · ∏_{i<n} r(c_i)/r(d_i)`, between the normalised chains.
pub fn normalize_morphism(alpha: &ChainMorphism, r: RFunction) -> Result<ChainMorphism> {
    let depth = alpha.family().prefix().len() + MORPHISM_CHECK_DEPTH;
    validate_morphism(alpha, depth, DEFAULT_TOL)?.into_result()?;
    let (src, dst) = (alpha.source(), alpha.target());
    let start = (src.tail_start() + 1)
        .max(dst.tail_start() + 1)
        .max(alpha.family().prefix().len());
    let family = alpha
        .family()
        .materialize(start, |n| (dst.stage_dim(n), src.stage_dim(n)))?;
    let (c_logs, c_tail) = log_r_sequence(src, r);
    let (d_logs, d_tail) = log_r_sequence(dst, r);
    let factor = |n: usize| {
        let log = log_r_sum(&c_logs, c_tail, n) - log_r_sum(&d_logs, d_tail, n);
        Scalar::new(log.exp(), 0.0)
    };
    let tail_ratio = Scalar::new((c_tail - d_tail).exp(), 0.0);
    let family = family.rescale(factor, tail_ratio);
    let src_n = normalize_chain(src, r)?;
    let dst_n = normalize_chain(dst, r)?;
    ChainMorphism::new(src_n.chain, dst_n.chain, family)
}

/// Residuals of `(N_r α)_n ∘ η^C_n = η^D_n ∘ α_n` for `n < depth`.
pub fn check_eta_naturality(
    alpha: &ChainMorphism,
    r: RFunction,
    depth: usize,
    tol: f64,
) -> Result<NaturalityReport> {
    let normalized = normalize_morphism(alpha, r)?;
    let eta_c = normalize_chain(alpha.source(), r)?;
    let eta_d = normalize_chain(alpha.target(), r)?;
    NaturalityReport::from_squares(depth, tol, |n| {
        let lhs = normalized
            .component(n)?
            .scale(Scalar::new(eta_c.eta(n), 0.0));
        let rhs = alpha.component(n)?.scale(Scalar::new(eta_d.eta(n), 0.0));
        Ok((lhs, rhs))
    })
}

/// `b ↦ b/|b|` on a single map (zero stays zero).
pub fn naive_normalize(b: &Operator) -> Operator {
    let norm = operator_norm(b);
    if norm == 0.0 {
        b.clone()
    } else {
        b.scale(Scalar::new(1.0 / norm, 0.0))
    }
}

/// A pair on which naive normalisation fails to preserve composition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaiveWitness {
    pub b: Operator,
    pub b_prime: Operator,
    /// `(b'∘b) / |b'∘b|`.
    pub of_composite: Operator,
    /// `(b'/|b'|) ∘ (b/|b|)`.
    pub composite_of: Operator,
    pub residual: f64,
}

impl NaiveWitness {
    pub fn new(b: Operator, b_prime: Operator) -> Result<Self> {
        let of_composite = naive_normalize(&b_prime.compose(&b)?);
        let composite_of = naive_normalize(&b_prime).compose(&naive_normalize(&b))?;
        let residual = of_composite.max_abs_diff(&composite_of);
        Ok(Self {
            b,
            b_prime,
            of_composite,
            composite_of,
            residual,
        })
    }
}

/// Samples random bounded `dim × dim` pairs until naive normalisation visibly
/// fails to be functorial (residual above `threshold`).
pub fn find_naive_witness(dim: usize, seed: u64, threshold: f64) -> Result<NaiveWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let b = random::random_operator(dim, dim, &mut rng).scale(Scalar::new(3.0, 0.0));
        let b_prime = random::random_operator(dim, dim, &mut rng).scale(Scalar::new(3.0, 0.0));
        let w = NaiveWitness::new(b, b_prime)?;
        if w.residual > threshold {
            return Ok(w);
        }
    }
    Err(Error::Unsupported(format!(
        "no naive-normalisation witness found in dimension {dim}"
    )))
}
