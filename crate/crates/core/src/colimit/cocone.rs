use serde::Serialize;

use super::{limit_gram_factor, ColimClass};
use crate::chain::{NaturalityReport, OmegaChain, StageFamily};
use crate::error::{Error, Result};
use crate::linalg::svd::svd;
use crate::linalg::{check_dims, operator_norm, FinVector, Operator, OperatorKind, Scalar};

/// Stages checked before [`induced_apply`] trusts a cocone, beyond the class index.
const INDUCED_CHECK_DEPTH: usize = 8;

/// Components `α_n : H_n → ℂ^target_dim` with `α_n = α_{n+1} ∘ e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocone {
    chain: OmegaChain,
    target_dim: usize,
    family: StageFamily,
    category: OperatorKind,
}

impl Cocone {
    pub fn new(
        chain: OmegaChain,
        target_dim: usize,
        family: StageFamily,
        category: OperatorKind,
    ) -> Result<Self> {
        if target_dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let c = Self {
            chain,
            target_dim,
            family,
            category,
        };
        for n in 0..=c.family.prefix().len() {
            c.component(n)?;
        }
        Ok(c)
    }

    pub fn chain(&self) -> &OmegaChain {
        &self.chain
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn family(&self) -> &StageFamily {
        &self.family
    }

    pub fn category(&self) -> OperatorKind {
        self.category
    }

    pub fn component(&self, n: usize) -> Result<Operator> {
        self.family
            .component(n, self.target_dim, self.chain.stage_dim(n))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoconeReport {
    pub naturality: NaturalityReport,
    pub max_component_norm: f64,
    /// Whether every checked component respects the declared category.
    pub category_ok: bool,
}

impl CoconeReport {
    pub fn ok(&self) -> bool {
        self.naturality.ok() && self.category_ok
    }
}

/// Checks `α_n = α_{n+1} ∘ e_n` for `n < depth` and measures `|α_n|` there.
pub fn validate_cocone(cocone: &Cocone, depth: usize, tol: f64) -> Result<CoconeReport> {
    let naturality = NaturalityReport::from_squares(depth, tol, |n| {
        let next = cocone.component(n + 1)?;
        Ok((
            cocone.component(n)?,
            next.compose(&cocone.chain.chain_map(n))?,
        ))
    })?;
    let mut max_component_norm: f64 = 0.0;
    for n in 0..depth {
        max_component_norm = max_component_norm.max(operator_norm(&cocone.component(n)?));
    }
    let category_ok = match cocone.category {
        OperatorKind::Bounded => true,
        _ => max_component_norm <= 1.0 + tol,
    };
    Ok(CoconeReport {
        naturality,
        max_component_norm,
        category_ok,
    })
}

/// The mediating map `α(n, x) = α_n(x)`.
pub fn induced_apply(cocone: &Cocone, class: &ColimClass) -> Result<FinVector> {
    check_dims(cocone.chain.stage_dim(class.index), class.rep.dim())?;
    let depth = class.index + INDUCED_CHECK_DEPTH;
    let report = validate_cocone(cocone, depth, crate::linalg::DEFAULT_TOL)?;
    if let Some(f) = report.naturality.failures.first() {
        return Err(Error::InvalidCocone {
            index: f.index,
            residual: f.residual,
        });
    }
    Ok(cocone.component(class.index)?.apply_unchecked(&class.rep))
}

/// `sup_{n < depth} |α_n|`, with the sequence of norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalBound {
    pub sup_norm: f64,
    pub norms: Vec<f64>,
    /// Norms strictly increase across the last half of the window.
    pub growing: bool,
}

pub fn global_bound(cocone: &Cocone, depth: usize) -> Result<GlobalBound> {
    let norms = (0..depth)
        .map(|n| cocone.component(n).map(|a| operator_norm(&a)))
        .collect::<Result<Vec<_>>>()?;
    let sup_norm = norms.iter().copied().fold(0.0, f64::max);
    let tail = &norms[depth / 2..];
    let growing = tail.len() >= 2 && tail.windows(2).all(|w| w[1] > w[0]);
    Ok(GlobalBound {
        sup_norm,
        norms,
        growing,
    })
}

/// The norm of the induced map on classes at stage `n`, measured against
/// the colimit norm: `sup |α_n x| / |(n, x)|`. Infinite when `α_n` is nonzero
/// on a class of limit norm zero.
pub fn induced_restriction_norm(cocone: &Cocone, n: usize) -> Result<f64> {
    let alpha = cocone.component(n)?;
    let r = limit_gram_factor(&cocone.chain, n)?;
    let d = svd(&r);
    let sigma_max = d.s.first().copied().unwrap_or(0.0);
    let kernel_tol = 1e-10 * sigma_max.max(1.0);
    let alpha_scale = alpha.frobenius_norm().max(1.0);
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..r.in_dim() {
        let sigma = d.s.get(k).copied().unwrap_or(0.0);
        let v = FinVector::from_entries_unchecked(d.right_vector(k));
        let image = alpha.apply_unchecked(&v);
        if sigma <= kernel_tol {
            if image.norm() > 1e-9 * alpha_scale {
                return Ok(f64::INFINITY);
            }
        } else {
            columns.push(image.scale(Scalar::new(1.0 / sigma, 0.0)).into_entries());
        }
    }
    if columns.is_empty() {
        return Ok(0.0);
    }
    let rows = alpha.out_dim();
    let cols = columns.len();
    let mut data = vec![Scalar::new(0.0, 0.0); rows * cols];
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            data[i * cols + j] = *z;
        }
    }
    Ok(operator_norm(&Operator::from_entries_unchecked(
        rows, cols, data,
    )))
}
