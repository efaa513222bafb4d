//! The two obstructions to a colimit in the bounded category, and the
//! global-bound dichotomy that explains them.
//!
//! * Scaling chain: `ℂ → ℂ → …` by `½`. Every class has limit norm zero, so
//!   the colimit is `0`, yet `b_n = 2ⁿ` is a nonzero bounded cocone.
//! * Embedding chain: `ℂ¹ ⊂ ℂ² ⊂ …` with colimit `ℓ²`. The cocone scaling the
//!   `k`-th coordinate by `k` induces an unbounded map.
//!
//! The induced map is bounded exactly when `sup_n |α_n| < ∞`.
//!
//! Stage indices are 0-based: stage `n` of the embedding chain is `ℂ^{n+1}`,
//! and coordinate weights are 1-based, so `|α_n| = n + 1`.

use serde::Serialize;

use crate::chain::{FamilyTail, OmegaChain, StageFamily, TailRule};
use crate::colimit::{
    colim_norm, global_bound, induced_apply, induced_restriction_norm, limit_gram_factor, Cocone,
    ColimClass, GlobalBound, LimitParams,
};
use crate::error::Result;
use crate::linalg::{singular_values, FinVector, OperatorKind, Scalar};

pub fn scaling_chain() -> OmegaChain {
    OmegaChain::new(
        vec![1],
        vec![],
        TailRule::ScalarGeometric {
            ratio: Scalar::new(0.5, 0.0),
        },
        OperatorKind::Contraction,
    )
    .expect("scaling chain is a valid contraction chain")
}

/// `b_n = 2ⁿ : ℂ → ℂ`.
pub fn scaling_cocone() -> Cocone {
    Cocone::new(
        scaling_chain(),
        1,
        StageFamily::scaled_identity(Scalar::new(1.0, 0.0), Scalar::new(2.0, 0.0)),
        OperatorKind::Bounded,
    )
    .expect("scaling cocone has 1x1 components")
}

pub fn embedding_chain() -> OmegaChain {
    OmegaChain::new(
        vec![1],
        vec![],
        TailRule::EmbedIncrement,
        OperatorKind::Isometry,
    )
    .expect("embedding chain is a valid isometry chain")
}

/// `α_n e_k = k e_k` into `ℂ^depth`, truncating coordinates beyond `depth`.
pub fn embedding_cocone(depth: usize) -> Cocone {
    assert!(depth >= 1, "embedding cocone needs a positive depth");
    let family = StageFamily::new(
        vec![],
        FamilyTail::IndexWeighted {
            scale: Scalar::new(1.0, 0.0),
            ratio: Scalar::new(1.0, 0.0),
        },
    )
    .expect("finite weights");
    Cocone::new(embedding_chain(), depth, family, OperatorKind::Bounded)
        .expect("index-weighted components fit any target")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub depth: usize,
    pub bound: GlobalBound,
    /// `sup |α_n x| / |(n, x)|` per stage; infinite when the component does
    /// not vanish on zero classes.
    pub restriction_norms: Vec<f64>,
    /// Every restriction norm is at most the global bound (plus `tol`).
    pub induced_within_bound: bool,
    /// For contraction cocones: every restriction norm is at most `1 + tol`.
    pub contraction_ok: Option<bool>,
    /// Neither growing component norms nor an infinite restriction norm.
    pub globally_bounded: bool,
}

/// Global-bound estimate versus the norms of the induced map on each stage.
pub fn dichotomy_report(cocone: &Cocone, depth: usize, tol: f64) -> Result<DichotomyReport> {
    let bound = global_bound(cocone, depth)?;
    let restriction_norms = (0..depth)
        .map(|n| induced_restriction_norm(cocone, n))
        .collect::<Result<Vec<_>>>()?;
    let induced_within_bound = restriction_norms
        .iter()
        .all(|&r| r <= bound.sup_norm * (1.0 + tol) + tol);
    let contraction_ok = (cocone.category() == OperatorKind::Contraction)
        .then(|| restriction_norms.iter().all(|&r| r <= 1.0 + tol));
    let globally_bounded = !bound.growing && restriction_norms.iter().all(|r| r.is_finite());
    Ok(DichotomyReport {
        depth,
        bound,
        restriction_norms,
        induced_within_bound,
        contraction_ok,
        globally_bounded,
    })
}

/// A class of limit norm zero sent to a nonzero vector by the induced map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadoxRow {
    pub index: usize,
    pub colim_norm: f64,
    pub induced_norm: f64,
}

/// For the scaling chain and cocone: the class `(n, [1])` has limit norm 0
/// while `b_n` sends it to `2ⁿ`.
pub fn scaling_paradox(depth: usize, params: &LimitParams) -> Result<Vec<ParadoxRow>> {
    let chain = scaling_chain();
    let cocone = scaling_cocone();
    (0..depth)
        .map(|index| {
            let class = ColimClass::new(&chain, index, FinVector::basis(1, 0))?;
            Ok(ParadoxRow {
                index,
                colim_norm: colim_norm(&chain, &class, params)?.value,
                induced_norm: induced_apply(&cocone, &class)?.norm(),
            })
        })
        .collect()
}

/// Whether the inclusion `ι_n` sends nonzero vectors to nonzero classes.
pub fn inclusion_is_injective(chain: &OmegaChain, n: usize) -> Result<bool> {
    let r = limit_gram_factor(chain, n)?;
    if r.out_dim() < r.in_dim() {
        return Ok(false);
    }
    let sv = singular_values(&r);
    Ok(sv.last().is_some_and(|&s| s > 1e-10 * sv[0].max(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::validate_chain;
    use crate::colimit::{inclusion, is_zero_class, validate_cocone, EstimateStatus};
    use crate::linalg::{classify, Operator, DEFAULT_TOL};

    #[test]
    fn scaling_chain_shape() {
        let chain = scaling_chain();
        for n in 0..20 {
            assert_eq!(chain.stage_dim(n), 1);
            assert_eq!(chain.chain_map(n), Operator::scalar(Scalar::new(0.5, 0.0)));
        }
        assert!(validate_chain(&chain, DEFAULT_TOL).is_ok());
    }

    #[test]
    fn scaling_cocone_components() {
        let cocone = scaling_cocone();
        for n in 0..32 {
            let b = cocone.component(n).unwrap();
            assert_eq!(b.get(0, 0), Scalar::new(2f64.powi(n as i32), 0.0));
        }
        assert!(validate_cocone(&cocone, 32, 0.0).unwrap().ok());
    }

    #[test]
    fn paradox_rows() {
        let rows = scaling_paradox(10, &LimitParams::default()).unwrap();
        for row in &rows {
            assert_eq!(row.colim_norm, 0.0);
            assert_eq!(row.induced_norm, 2f64.powi(row.index as i32));
        }
        let chain = scaling_chain();
        let class = inclusion(&chain, 0, FinVector::basis(1, 0)).unwrap();
        let est = colim_norm(&chain, &class, &LimitParams::default()).unwrap();
        assert_eq!(est.status, EstimateStatus::ExactStabilized);
        assert!(is_zero_class(&chain, &class, &LimitParams::default()).unwrap());
        assert!(!inclusion_is_injective(&chain, 0).unwrap());
    }

    #[test]
    fn embedding_chain_shape() {
        let chain = embedding_chain();
        for n in 0..10 {
            assert_eq!(chain.stage_dim(n), n + 1);
            let e = chain.composite(n, n + 5).unwrap();
            assert_eq!(classify(&e, 1e-12).kind, OperatorKind::Isometry);
            assert!(inclusion_is_injective(&chain, n).unwrap());
        }
        let x = FinVector::from_real(&[3.0, 4.0]).unwrap();
        let class = ColimClass::new(&chain, 1, x).unwrap();
        let est = colim_norm(&chain, &class, &LimitParams::default()).unwrap();
        assert_eq!((est.value, est.error), (5.0, 0.0));
    }

    #[test]
    fn embedding_cocone_weights() {
        let cocone = embedding_cocone(8);
        let a = cocone.component(4).unwrap();
        assert_eq!((a.out_dim(), a.in_dim()), (8, 5));
        for k in 0..5 {
            assert_eq!(a.get(k, k), Scalar::new((k + 1) as f64, 0.0));
        }
        // Coordinates past the truncation are dropped.
        let far = cocone.component(10).unwrap();
        assert_eq!(far.get(7, 7), Scalar::new(8.0, 0.0));
        assert_eq!(far.get(7, 8), Scalar::new(0.0, 0.0));
        assert!(validate_cocone(&cocone, 7, 0.0).unwrap().ok());
        assert_eq!(global_bound(&cocone, 8).unwrap().sup_norm, 8.0);
    }

    #[test]
    fn dichotomy_flags_both_counterexamples() {
        let scaling = dichotomy_report(&scaling_cocone(), 20, 1e-9).unwrap();
        assert!(scaling.bound.growing);
        assert!(!scaling.globally_bounded);
        assert!(scaling.restriction_norms.iter().all(|r| r.is_infinite()));
        assert_eq!(scaling.contraction_ok, None);

        let embedding = dichotomy_report(&embedding_cocone(16), 16, 1e-9).unwrap();
        assert!(embedding.bound.growing);
        assert!(!embedding.globally_bounded);
        assert!(embedding.induced_within_bound);
        for (n, r) in embedding.restriction_norms.iter().enumerate() {
            assert!((r - (n + 1) as f64).abs() <= 1e-9);
        }
    }

    #[test]
    fn dichotomy_on_contraction_cocone() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let cocone = crate::sampling::random_contraction_cocone(
            crate::sampling::TailChoice::RepeatLast,
            4,
            &mut rng,
        )
        .unwrap();
        let report = dichotomy_report(&cocone, 12, 1e-9).unwrap();
        assert_eq!(report.contraction_ok, Some(true));
        assert!(report.globally_bounded);
        assert!(report.bound.sup_norm <= 1.0 + 1e-9);
    }
}
