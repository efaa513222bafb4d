//! One function per subcommand, each returning a [`Report`].

use std::str::FromStr;

use hilbert_colim::chain::validate_chain;
use hilbert_colim::colimit::{
    colim_inner, colim_norm, induced_apply, is_zero_class, push, validate_cocone, ColimClass,
    LimitParams,
};
use hilbert_colim::counterexamples::{
    dichotomy_report, embedding_chain, embedding_cocone, inclusion_is_injective, scaling_chain,
    scaling_cocone, scaling_paradox,
};
use hilbert_colim::linalg::random::{derive_seed, random_contraction_with, random_vector};
use hilbert_colim::linalg::{
    lemma_check_with_tol, random_contraction, FinVector, Operator, OperatorKind, Scalar,
};
use hilbert_colim::normalisation::{check_eta_squares, normalize_chain, RFunction};
use hilbert_colim::tensor::{check_density, check_isometry, check_naturality, tensor_chain};
use hilbert_colim::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::file::ChainFile;
use crate::report::{real, Check, Report};
use crate::CliError;

/// A class `(index, x)` written `INDEX:x0,x1,…`; entries parse as complex
/// numbers, e.g. `1`, `-0.5`, `1+2i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpec {
    pub index: usize,
    pub entries: Vec<Scalar>,
}

impl FromStr for ClassSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::BadClass(s.to_string());
        let (index, rest) = s.split_once(':').ok_or_else(bad)?;
        let index = index.trim().parse().map_err(|_| bad())?;
        let entries = rest
            .split(',')
            .map(|z| Scalar::from_str(z.trim()).map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { index, entries })
    }
}

impl ClassSpec {
    fn to_class(&self, chain: &hilbert_colim::chain::OmegaChain) -> Result<ColimClass, CliError> {
        Ok(ColimClass::new(
            chain,
            self.index,
            FinVector::new(self.entries.clone())?,
        )?)
    }

    fn label(&self) -> String {
        let entries: Vec<String> = self
            .entries
            .iter()
            .map(|z| {
                if z.im == 0.0 {
                    z.re.to_string()
                } else {
                    z.to_string()
                }
            })
            .collect();
        format!("{}:{}", self.index, entries.join(","))
    }
}

fn limit_params(report: &mut Report, depth: usize, window: usize, tol: f64) -> LimitParams {
    report
        .param("depth", depth)
        .param("window", window)
        .param("tol", tol);
    LimitParams {
        depth,
        window,
        stop_tol: tol,
        ..LimitParams::default()
    }
}

pub struct LemmaOpts {
    pub samples: usize,
    pub max_dim: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Number of samples in each equality suite (`G = 0` and `G = 1`).
const EQUALITY_SAMPLES: usize = 1000;

pub fn verify_lemma(o: &LemmaOpts) -> Result<Report, CliError> {
    if o.samples == 0 || o.max_dim == 0 {
        return Err(CliError::Usage(
            "samples and max-dim must be positive".into(),
        ));
    }
    let mut report = Report::new("verify-lemma");
    report
        .param("samples", o.samples)
        .param("max_dim", o.max_dim)
        .param("tol", o.tol);
    report.seed = Some(o.seed);

    let residuals = (0..o.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(o.seed, i));
            let out = rng.random_range(1..=o.max_dim);
            let inn = rng.random_range(1..=o.max_dim);
            let g = random_contraction_with(out, inn, &mut rng);
            let x = random_vector(inn, &mut rng);
            let y = random_vector(inn, &mut rng);
            lemma_check_with_tol(&g, &x, &y, o.tol).map(|c| c.lhs - c.rhs)
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let worst = residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let violations = residuals.iter().filter(|&&r| r > o.tol).count();
    report.push(Check::new(
        "inequality_worst_residual",
        real(worst),
        worst <= o.tol,
    ));
    report.push(Check::new(
        "inequality_violations",
        json!(violations),
        violations == 0,
    ));

    let equality = |which: u64, make: fn(usize) -> Operator| -> Result<f64, Error> {
        let gaps = (0..EQUALITY_SAMPLES.min(o.samples) as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(o.seed ^ which, i));
                let d = rng.random_range(1..=o.max_dim);
                let x = random_vector(d, &mut rng);
                // G = 0 is an equality only for parallel x and y.
                let lambda = random_vector(1, &mut rng).entries()[0];
                let y = x.scale(lambda);
                lemma_check_with_tol(&make(d), &x, &y, o.tol).map(|c| (c.lhs - c.rhs).abs())
            })
            .collect::<Result<Vec<f64>, Error>>()?;
        Ok(gaps.into_iter().fold(0.0, f64::max))
    };
    let zero = equality(0x2e60, |d| Operator::zeros(d, d))?;
    report.push(Check::new("equality_zero_map", real(zero), zero <= o.tol));
    let id = equality(0x1d, Operator::identity)?;
    report.push(Check::new("equality_identity", real(id), id <= o.tol));
    Ok(report.finish())
}

pub struct ColimitOpts {
    pub depth: usize,
    pub window: usize,
    pub tol: f64,
}

pub fn colimit(
    file: &ChainFile,
    classes: &[ClassSpec],
    o: &ColimitOpts,
) -> Result<Report, CliError> {
    let chain = file.chain()?;
    let mut report = Report::new("colimit");
    let params = limit_params(&mut report, o.depth, o.window, o.tol);
    let maps = validate_chain(&chain, hilbert_colim::linalg::DEFAULT_TOL)?;
    report.push(Check::new(
        "validate_chain",
        json!(maps.category.to_string()),
        true,
    ));
    let specs: Vec<ClassSpec> = if classes.is_empty() {
        (0..chain.stage_dim(0))
            .map(|k| ClassSpec {
                index: 0,
                entries: FinVector::basis(chain.stage_dim(0), k).into_entries(),
            })
            .collect()
    } else {
        classes.to_vec()
    };
    report.param(
        "classes",
        Value::from(specs.iter().map(ClassSpec::label).collect::<Vec<_>>()),
    );
    let built = specs
        .iter()
        .map(|s| s.to_class(&chain))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, class) in built.iter().enumerate() {
        let est = colim_norm(&chain, class, &params)?;
        report.push(Check::real_estimate(format!("norm[{i}]"), &est));
        let zero = match is_zero_class(&chain, class, &params) {
            Ok(z) => Check::new(format!("zero_class[{i}]"), json!(z), true),
            Err(Error::Indeterminate { .. }) => {
                Check::new(format!("zero_class[{i}]"), json!("indeterminate"), false)
            }
            Err(e) => return Err(e.into()),
        };
        report.push(zero);
    }
    for i in 0..built.len() {
        for j in i + 1..built.len() {
            let est = colim_inner(&chain, &built[i], &built[j], &params)?;
            report.push(Check::complex_estimate(format!("inner[{i},{j}]"), &est));
        }
    }
    Ok(report.finish())
}

pub struct TensorOpts {
    pub h_dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub depth: usize,
    pub window: usize,
    pub tol: f64,
}

/// Terms in the sampled finite sum of the density check.
const DENSITY_TERMS: usize = 3;

pub fn tensor_check(file: &ChainFile, o: &TensorOpts) -> Result<Report, CliError> {
    let chain = file.chain()?;
    let mut report = Report::new("tensor-check");
    report.param("h_dim", o.h_dim).param("samples", o.samples);
    report.seed = Some(o.seed);
    let params = limit_params(&mut report, o.depth, o.window, o.tol);
    let tc = tensor_chain(o.h_dim, &chain)?;

    let iso = check_isometry(&tc, o.samples, &params, derive_seed(o.seed, 0))?;
    report.push(Check::new("isometry", real(iso.max_residual), iso.ok()));

    let f = random_contraction(o.h_dim + 1, o.h_dim, derive_seed(o.seed, 1));
    let nat = check_naturality(&f, &chain, o.samples, &params, derive_seed(o.seed, 2))?;
    report.push(Check::new("naturality", real(nat.max_residual), nat.ok()));

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(o.seed, 3));
    let terms = (0..DENSITY_TERMS)
        .map(|_| {
            let h = random_vector(o.h_dim, &mut rng);
            let index = rng.random_range(0..=chain.tail_start() + 3);
            let x = random_vector(chain.stage_dim(index), &mut rng);
            Ok((h, ColimClass::new(&chain, index, x)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let density = check_density(&tc, &terms, &params)?;
    report.push(
        Check::new("density", real(density.residual), density.pass).with_error(density.allowance),
    );
    Ok(report.finish())
}

pub struct NormalizeOpts {
    pub r: RFunction,
    pub depth: usize,
    pub tol: f64,
}

pub fn normalize(file: &ChainFile, o: &NormalizeOpts) -> Result<(Report, ChainFile), CliError> {
    let chain = file.chain()?;
    let mut report = Report::new("normalize");
    report
        .param("r", serde_json::to_value(o.r).expect("r serializes"))
        .param("depth", o.depth)
        .param("tol", o.tol);
    let n = normalize_chain(&chain, o.r)?;
    report.push(Check::new(
        "normalized_category",
        json!(n.chain().category().to_string()),
        n.chain().category() != OperatorKind::Bounded,
    ));
    let squares = check_eta_squares(&chain, &n, o.depth, o.tol)?;
    report.push(Check::new(
        "eta_squares",
        real(squares.max_residual),
        squares.ok(),
    ));
    let eta: Vec<Value> = (0..=o.depth)
        .map(|k| json!({ "n": k, "log_eta": real(n.log_eta(k)), "eta": real(n.eta(k)) }))
        .collect();
    report.output("eta", Value::from(eta));
    let out = ChainFile::from_chain(n.chain());
    report.output(
        "normalized_chain",
        serde_json::to_value(&out).expect("chain files serialize"),
    );
    Ok((report.finish(), out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Scaling,
    Embedding,
}

pub struct CounterexampleOpts {
    pub which: Which,
    pub depth: usize,
    pub tol: f64,
}

/// Norm windows shorter than this cannot show growth.
const GROWTH_WINDOW: usize = 3;

pub fn counterexample(o: &CounterexampleOpts) -> Result<Report, CliError> {
    if o.depth == 0 {
        return Err(CliError::Usage("depth must be at least 1".into()));
    }
    let mut report = Report::new("counterexample");
    report.param("depth", o.depth).param("tol", o.tol);
    let depth = o.depth;
    match o.which {
        Which::Scaling => {
            report.param("which", "scaling");
            let chain = scaling_chain();
            let cocone = scaling_cocone();
            let params = LimitParams::default();
            let class = ColimClass::new(&chain, 0, FinVector::basis(1, 0))?;
            let est = colim_norm(&chain, &class, &params)?;
            let mut zero = Check::real_estimate("colimit_zero", &est);
            zero.pass = est.value == 0.0 && est.error == 0.0;
            report.push(zero);
            let valid = validate_cocone(&cocone, depth, o.tol)?;
            report.push(Check::new(
                "cocone_valid",
                real(valid.naturality.max_residual),
                valid.ok(),
            ));
            let d = dichotomy_report(&cocone, depth, o.tol)?;
            let expected = 2f64.powi(depth as i32 - 1);
            report.push(Check::new(
                "global_bound",
                real(d.bound.sup_norm),
                d.bound.sup_norm == expected,
            ));
            report.push(Check::new(
                "growth_flag",
                json!(d.bound.growing),
                d.bound.growing || depth < GROWTH_WINDOW,
            ));
            let least = d
                .restriction_norms
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            report.push(Check::new(
                "restriction_norms_unbounded",
                real(least),
                least >= expected,
            ));
            let rows: Vec<Value> = scaling_paradox(depth, &params)?
                .into_iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "colim_norm": real(r.colim_norm),
                        "induced_norm": real(r.induced_norm),
                    })
                })
                .collect();
            report.output("paradox", Value::from(rows));
        }
        Which::Embedding => {
            report.param("which", "embedding");
            let chain = embedding_chain();
            let cocone = embedding_cocone(depth);
            let maps = validate_chain(&chain, o.tol)?;
            report.push(Check::new(
                "base_isometry",
                json!(maps.category.to_string()),
                maps.maps
                    .iter()
                    .all(|m| m.class.kind == OperatorKind::Isometry),
            ));
            let valid = validate_cocone(&cocone, depth, o.tol)?;
            report.push(Check::new(
                "cocone_valid",
                real(valid.naturality.max_residual),
                valid.ok(),
            ));
            let d = dichotomy_report(&cocone, depth, o.tol)?;
            let worst = d
                .restriction_norms
                .iter()
                .enumerate()
                .map(|(n, r)| (r - (n + 1) as f64).abs())
                .fold(0.0, f64::max);
            report.push(
                Check::new(
                    "restriction_norms",
                    Value::from(
                        d.restriction_norms
                            .iter()
                            .map(|&r| real(r))
                            .collect::<Vec<_>>(),
                    ),
                    worst <= o.tol,
                )
                .with_error(worst),
            );
            report.push(Check::new(
                "strictly_increasing",
                json!(d.restriction_norms.windows(2).all(|w| w[1] > w[0])),
                d.restriction_norms.windows(2).all(|w| w[1] > w[0]),
            ));
            report.push(Check::new(
                "global_bound",
                real(d.bound.sup_norm),
                d.bound.sup_norm == depth as f64,
            ));
            report.push(Check::new(
                "growth_flag",
                json!(d.bound.growing),
                d.bound.growing || depth < GROWTH_WINDOW,
            ));
            let injective = (0..depth)
                .map(|n| inclusion_is_injective(&chain, n))
                .collect::<Result<Vec<_>, _>>()?;
            report.push(Check::new(
                "trivial_kernels",
                json!(injective.iter().all(|&b| b)),
                injective.iter().all(|&b| b),
            ));
        }
    }
    Ok(report.finish())
}

pub struct UniversalOpts {
    pub depth: usize,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Extra stages a sampled class is pushed to when checking well-definedness.
const PUSH_STEPS: usize = 3;

pub fn universal_map(file: &ChainFile, o: &UniversalOpts) -> Result<Report, CliError> {
    let cocone = file.cocone()?;
    let chain = cocone.chain();
    let mut report = Report::new("universal-map");
    report
        .param("depth", o.depth)
        .param("tol", o.tol)
        .param("samples", o.samples)
        .param("category", cocone.category().to_string());
    report.seed = Some(o.seed);

    let valid = validate_cocone(&cocone, o.depth, o.tol)?;
    report.push(Check::new(
        "cocone_valid",
        real(valid.naturality.max_residual),
        valid.ok(),
    ));
    report.push(Check::new(
        "max_component_norm",
        real(valid.max_component_norm),
        valid.category_ok,
    ));
    if !valid.naturality.ok() {
        return Ok(report.finish());
    }

    let params = LimitParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let mut drift: f64 = 0.0;
    let mut excess: f64 = f64::NEG_INFINITY;
    for _ in 0..o.samples {
        let index = rng.random_range(0..=chain.tail_start() + 3);
        let class = ColimClass::new(
            chain,
            index,
            random_vector(chain.stage_dim(index), &mut rng),
        )?;
        let image = induced_apply(&cocone, &class)?;
        for k in 1..=PUSH_STEPS {
            let later = induced_apply(&cocone, &push(chain, &class, index + k)?)?;
            let d = later.sub(&image)?.norm() / image.norm().max(1.0);
            drift = drift.max(d);
        }
        if cocone.category() == OperatorKind::Contraction {
            let norm = colim_norm(chain, &class, &params)?;
            excess = excess.max(image.norm() - norm.value - norm.error);
        }
    }
    report.push(Check::new("well_defined", real(drift), drift <= o.tol));
    if cocone.category() == OperatorKind::Contraction {
        report.push(Check::new(
            "contraction_on_classes",
            real(excess),
            excess <= o.tol,
        ));
    }

    let d = dichotomy_report(&cocone, o.depth, o.tol)?;
    report.push(Check::new(
        "global_bound",
        real(d.bound.sup_norm),
        !d.bound.growing,
    ));
    let worst = d.restriction_norms.iter().copied().fold(0.0, f64::max);
    report.push(Check::new(
        "induced_within_bound",
        real(worst),
        d.induced_within_bound && d.globally_bounded,
    ));
    if let Some(ok) = d.contraction_ok {
        report.push(Check::new("induced_contraction", real(worst), ok));
    }
    report.output(
        "restriction_norms",
        Value::from(
            d.restriction_norms
                .iter()
                .map(|&r| real(r))
                .collect::<Vec<_>>(),
        ),
    );
    Ok(report.finish())
}
