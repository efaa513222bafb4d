//! Tensoring an ω-chain with a fixed space `H = ℂ^h` commutes with the
//! colimit: the map `c : colim (H ⊗ K_i) → H ⊗ colim K_i` induced by the
//! components `1 ⊗ ι_i` is unitary and natural in `H`.
//!
//! `c` has no matrix (its domain is a colimit), so it is checked through the
//! identities it must satisfy on representable classes:
//!
//! * isometry: `⟨(A, h⊗x)|(C, h'⊗y)⟩ = ⟨h|h'⟩ · ⟨(A,x)|(C,y)⟩`;
//! * density: a finite sum `Σ hᵢ ⊗ (Aᵢ, xᵢ)` is the image of the single class
//!   `(M, Σ hᵢ ⊗ x_{i,M})`, so the image of `c` contains every representable
//!   vector and, being isometric, `c` is unitary;
//! * naturality: for `f : H → H'`, `(f ⊗ 1) ∘ c = c' ∘ colim(f ⊗ 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{OmegaChain, TailRule};
use crate::colimit::{colim_inner, push, ColimClass, LimitParams};
use crate::error::{Error, Result};
use crate::linalg::{check_dims, inner, random, FinVector, Operator, OperatorKind, Scalar};

/// The chain `H ⊗ K_i` with maps `1 ⊗ e_i`, alongside its base chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorChain {
    h_dim: usize,
    base: OmegaChain,
    derived: OmegaChain,
}

/// Builds `ℂ^h_dim ⊗ chain`. Embedding tails are supported only for
/// `h_dim = 1`, since `1 ⊗ e` is not itself a first-coordinates embedding.
pub fn tensor_chain(h_dim: usize, chain: &OmegaChain) -> Result<TensorChain> {
    if h_dim == 0 {
        return Err(Error::EmptyDimension);
    }
    if chain.category() == OperatorKind::Bounded {
        return Err(Error::BoundedChain);
    }
    let id = Operator::identity(h_dim);
    let mut dims: Vec<usize> = chain.prefix_dims().iter().map(|d| d * h_dim).collect();
    let mut maps: Vec<Operator> = chain
        .prefix_maps()
        .iter()
        .map(|m| id.kronecker(m))
        .collect();
    let tail = match chain.tail() {
        _ if h_dim == 1 => chain.tail().clone(),
        TailRule::Identity => TailRule::Identity,
        TailRule::RepeatLast => TailRule::RepeatLast,
        TailRule::ScalarGeometric { .. } => {
            maps.push(id.kronecker(&chain.tail_map()));
            dims.push(h_dim);
            TailRule::RepeatLast
        }
        TailRule::EmbedIncrement => {
            return Err(Error::Unsupported(
                "tensoring an embed_increment chain with h_dim > 1".into(),
            ))
        }
    };
    let derived = OmegaChain::new(dims, maps, tail, chain.category())?;
    Ok(TensorChain {
        h_dim,
        base: chain.clone(),
        derived,
    })
}

impl TensorChain {
    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn base(&self) -> &OmegaChain {
        &self.base
    }

    pub fn derived(&self) -> &OmegaChain {
        &self.derived
    }

    /// The derived class `(A, h ⊗ x)` for a base class `(A, x)`.
    pub fn lift(&self, h: &FinVector, class: &ColimClass) -> Result<ColimClass> {
        check_dims(self.h_dim, h.dim())?;
        ColimClass::new(&self.derived, class.index, h.kronecker(&class.rep))
    }

    /// The derived class representing the finite sum `Σ hᵢ ⊗ (Aᵢ, xᵢ)`.
    pub fn preimage(&self, terms: &[(FinVector, ColimClass)]) -> Result<ColimClass> {
        let Some(m) = terms.iter().map(|(_, c)| c.index).max() else {
            return Err(Error::Shape("empty tensor sum".into()));
        };
        let mut acc = FinVector::zeros(self.derived.stage_dim(m));
        for (h, c) in terms {
            check_dims(self.h_dim, h.dim())?;
            let x = push(&self.base, c, m)?.rep;
            acc = acc.combine(
                Scalar::new(1.0, 0.0),
                &h.kronecker(&x),
                Scalar::new(1.0, 0.0),
            )?;
        }
        ColimClass::new(&self.derived, m, acc)
    }
}

/// One sampled comparison of two routes to the same quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRecord {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub residual: f64,
    /// Combined error radii plus the fixed tolerance.
    pub allowance: f64,
    pub pass: bool,
}

impl SampleRecord {
    fn new(lhs: Scalar, rhs: Scalar, radii: f64, tol: f64) -> Self {
        let residual = (lhs - rhs).norm();
        let allowance = radii + tol;
        Self {
            lhs,
            rhs,
            residual,
            allowance,
            pass: residual <= allowance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorReport {
    pub records: Vec<SampleRecord>,
    pub max_residual: f64,
}

impl TensorReport {
    fn from_records(records: Vec<SampleRecord>) -> Self {
        let max_residual = records.iter().map(|r| r.residual).fold(0.0, f64::max);
        Self {
            records,
            max_residual,
        }
    }

    pub fn ok(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

/// Tolerance added to the combined error radii of every sampled comparison.
pub const TENSOR_TOL: f64 = 1e-9;

fn sample_stage<R: Rng>(chain: &OmegaChain, rng: &mut R) -> usize {
    rng.random_range(0..=chain.tail_start() + 3)
}

fn sample_class<R: Rng>(chain: &OmegaChain, rng: &mut R) -> ColimClass {
    let index = sample_stage(chain, rng);
    ColimClass {
        index,
        rep: random::random_vector(chain.stage_dim(index), rng),
    }
}

/// Compares `⟨(A, h⊗x)|(C, h'⊗y)⟩` on the derived chain with
/// `⟨h|h'⟩ · ⟨(A,x)|(C,y)⟩` on the base chain, for random samples.
pub fn check_isometry(
    tc: &TensorChain,
    samples: usize,
    params: &LimitParams,
    seed: u64,
) -> Result<TensorReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(samples);
    for _ in 0..samples {
        let h1 = random::random_vector(tc.h_dim, &mut rng);
        let h2 = random::random_vector(tc.h_dim, &mut rng);
        let c1 = sample_class(&tc.base, &mut rng);
        let c2 = sample_class(&tc.base, &mut rng);
        let lhs = colim_inner(
            &tc.derived,
            &tc.lift(&h1, &c1)?,
            &tc.lift(&h2, &c2)?,
            params,
        )?;
        let hh = inner(&h1, &h2)?;
        let base = colim_inner(&tc.base, &c1, &c2, params)?;
        records.push(SampleRecord::new(
            lhs.value,
            hh * base.value,
            lhs.error + hh.norm() * base.error,
            TENSOR_TOL,
        ));
    }
    Ok(TensorReport::from_records(records))
}

/// Compares the squared norm of the preimage class of `Σ hᵢ ⊗ (Aᵢ, xᵢ)` with
/// `Σᵢⱼ ⟨hᵢ|hⱼ⟩⟨(Aᵢ,xᵢ)|(Aⱼ,xⱼ)⟩` computed in `H ⊗ colim K`.
pub fn check_density(
    tc: &TensorChain,
    terms: &[(FinVector, ColimClass)],
    params: &LimitParams,
) -> Result<SampleRecord> {
    let pre = tc.preimage(terms)?;
    let lhs = colim_inner(&tc.derived, &pre, &pre, params)?;
    let mut rhs = Scalar::new(0.0, 0.0);
    let mut radii = lhs.error;
    for (hi, ci) in terms {
        for (hj, cj) in terms {
            let hh = inner(hi, hj)?;
            let b = colim_inner(&tc.base, ci, cj, params)?;
            rhs += hh * b.value;
            radii += hh.norm() * b.error;
        }
    }
    Ok(SampleRecord::new(lhs.value, rhs, radii, TENSOR_TOL))
}

/// Naturality of `c` in `H` along `f : ℂ^h → ℂ^h'`, sampled on pure tensors.
///
/// Route one applies `f ⊗ 1` to the stage representative (the induced map of
/// the cocone `ι'_n ∘ (f ⊗ 1)`), at the class stage and at a later stage, and
/// pairs the result with a test class on `H' ⊗ K`. Route two applies `f` on
/// the `H` factor after `c`, pairing `fh ⊗ (A,x)` in `H' ⊗ colim K`.
pub fn check_naturality(
    f: &Operator,
    chain: &OmegaChain,
    samples: usize,
    params: &LimitParams,
    seed: u64,
) -> Result<TensorReport> {
    let src = tensor_chain(f.in_dim(), chain)?;
    let dst = tensor_chain(f.out_dim(), chain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(2 * samples);
    for _ in 0..samples {
        let h = random::random_vector(f.in_dim(), &mut rng);
        let c = sample_class(chain, &mut rng);
        let ht = random::random_vector(f.out_dim(), &mut rng);
        let t = sample_class(chain, &mut rng);
        let test = dst.lift(&ht, &t)?;

        let fh = f.apply(&h)?;
        let route_two_base = colim_inner(chain, &c, &t, params)?;
        let ff = inner(&fh, &ht)?;
        let rhs = ff * route_two_base.value;

        let source_class = src.lift(&h, &c)?;
        for stage in [c.index, c.index + 2] {
            let pushed = push(src.derived(), &source_class, stage)?;
            let k = chain.stage_dim(stage);
            let image = f.kronecker(&Operator::identity(k)).apply(&pushed.rep)?;
            let routed = ColimClass::new(dst.derived(), stage, image)?;
            let lhs = colim_inner(dst.derived(), &routed, &test, params)?;
            records.push(SampleRecord::new(
                lhs.value,
                rhs,
                lhs.error + ff.norm() * route_two_base.error,
                TENSOR_TOL,
            ));
        }
    }
    Ok(TensorReport::from_records(records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::{embedding_chain, scaling_chain};
    use crate::linalg::{classify, random_contraction};
    use crate::sampling::{random_contraction_chain, TailChoice};

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn diag_repeat() -> OmegaChain {
        OmegaChain::new(
            vec![2, 2],
            vec![Operator::diagonal(&[c(1.0), c(0.5)])],
            TailRule::RepeatLast,
            OperatorKind::Contraction,
        )
        .unwrap()
    }

    fn identity_base() -> OmegaChain {
        OmegaChain::identity_chain(2, OperatorKind::Isometry).unwrap()
    }

    #[test]
    fn derived_chain_examples() {
        let base = scaling_chain();
        assert_eq!(tensor_chain(1, &base).unwrap().derived(), &base);
        let tc = tensor_chain(2, &base).unwrap();
        for n in 0..6 {
            assert_eq!(tc.derived().stage_dim(n), 2);
            assert_eq!(
                tc.derived().chain_map(n),
                Operator::identity(2).scale(c(0.5))
            );
        }
        let iso = tensor_chain(3, &identity_base()).unwrap();
        assert_eq!(iso.derived().category(), OperatorKind::Isometry);
        assert_eq!(
            classify(&iso.derived().chain_map(4), 1e-12).kind,
            OperatorKind::Isometry
        );
    }

    #[test]
    fn derived_maps_are_kronecker_products() {
        let base = diag_repeat();
        let tc = tensor_chain(3, &base).unwrap();
        for n in 0..5 {
            let expected = Operator::identity(3).kronecker(&base.chain_map(n));
            assert_eq!(tc.derived().chain_map(n), expected);
        }
    }

    #[test]
    fn refused_bases() {
        let bounded = OmegaChain::new(
            vec![1],
            vec![],
            TailRule::ScalarGeometric { ratio: c(2.0) },
            OperatorKind::Bounded,
        )
        .unwrap();
        assert_eq!(tensor_chain(2, &bounded), Err(Error::BoundedChain));
        assert!(matches!(
            tensor_chain(2, &embedding_chain()),
            Err(Error::Unsupported(_))
        ));
        assert!(tensor_chain(1, &embedding_chain()).is_ok());
    }

    #[test]
    fn isometry_on_three_bases() {
        let params = LimitParams::default();
        for base in [identity_base(), scaling_chain(), diag_repeat()] {
            let tc = tensor_chain(2, &base).unwrap();
            let report = check_isometry(&tc, 100, &params, 11).unwrap();
            assert!(report.ok(), "max residual {}", report.max_residual);
            assert!(report.max_residual <= 1e-9);
        }
    }

    #[test]
    fn isometry_on_halving_base_is_zero() {
        let tc = tensor_chain(2, &scaling_chain()).unwrap();
        let report = check_isometry(&tc, 10, &LimitParams::default(), 3).unwrap();
        assert!(report
            .records
            .iter()
            .all(|r| r.lhs == c(0.0) && r.rhs == c(0.0)));
    }

    #[test]
    fn norm_is_scaled_by_h() {
        let base = diag_repeat();
        let tc = tensor_chain(2, &base).unwrap();
        let h = FinVector::from_real(&[3.0, 4.0]).unwrap();
        let class = ColimClass::new(&base, 0, FinVector::from_real(&[1.0, 1.0]).unwrap()).unwrap();
        let p = LimitParams::default();
        let lifted =
            crate::colimit::colim_norm(tc.derived(), &tc.lift(&h, &class).unwrap(), &p).unwrap();
        let plain = crate::colimit::colim_norm(&base, &class, &p).unwrap();
        assert!(
            (lifted.value - 5.0 * plain.value).abs() <= lifted.error + 5.0 * plain.error + 1e-9
        );
    }

    #[test]
    fn finite_sums_have_preimages() {
        let base = diag_repeat();
        let tc = tensor_chain(2, &base).unwrap();
        let terms = vec![
            (
                FinVector::from_real(&[1.0, 0.0]).unwrap(),
                ColimClass::new(&base, 0, FinVector::from_real(&[1.0, 2.0]).unwrap()).unwrap(),
            ),
            (
                FinVector::from_real(&[1.0, -1.0]).unwrap(),
                ColimClass::new(&base, 3, FinVector::from_real(&[0.5, 1.0]).unwrap()).unwrap(),
            ),
        ];
        let record = check_density(&tc, &terms, &LimitParams::default()).unwrap();
        assert!(record.pass, "{record:?}");
        assert!(matches!(tc.preimage(&[]), Err(Error::Shape(_))));
    }

    #[test]
    fn naturality_examples() {
        let p = LimitParams::default();
        let id = check_naturality(&Operator::identity(2), &diag_repeat(), 20, &p, 1).unwrap();
        assert!(id.ok());
        let two = Operator::scalar(c(2.0));
        let report = check_naturality(&two, &identity_base(), 20, &p, 2).unwrap();
        assert!(report.ok());
        for r in &report.records {
            assert!(r.residual <= 1e-12 * r.rhs.norm().max(1.0));
        }
        let f = random_contraction(3, 2, 9);
        for (k, tail) in TailChoice::ALL.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            let chain = random_contraction_chain(*tail, 3, &mut rng).unwrap();
            let report = check_naturality(&f, &chain, 30, &p, 5).unwrap();
            assert!(report.ok() && report.max_residual <= 1e-9);
        }
    }
}
