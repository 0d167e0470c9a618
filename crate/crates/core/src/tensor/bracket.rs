//! Certified brackets for the pl- and l-norms of `U ∈ H_d(E ⊗ F)`.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::generators::{self, underlying_base};
use super::representation::{orthogonalize_representation, LRepresentation, PLRepresentation};
use crate::certificates::{admits_l, builtin_certificates, norming_pair_certificates, Certificate};
use crate::element::{flip_factors, AmplifiedElement};
use crate::error::{Error, Result};
use crate::hilbert::PairingMap;
use crate::quant::json::{matrix_to_json, quantization_to_json};
use crate::quant::{EvalOptions, Quantization};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct BracketOptions {
    /// Restarts and refinement steps for the upper-bound search.
    pub budget: usize,
    pub seed: u64,
    pub pairing: PairingMap,
    pub tolerance: f64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            budget: 200,
            seed: 0,
            pairing: PairingMap::RowMajor,
            tolerance: 1e-9,
        }
    }
}

impl BracketOptions {
    /// Evaluation settings for factor and target norms inside the brackets.
    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            starts: (self.budget / 25).clamp(4, 40),
            iterations: 100,
            seed: derive_seed(self.seed, 0x6576),
            sign_enum_limit: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorNorm {
    Pl,
    L,
}

impl TensorNorm {
    pub fn name(self) -> &'static str {
        match self {
            TensorNorm::Pl => "pl",
            TensorNorm::L => "l",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LowerWitness {
    pub certificate_id: String,
    pub provenance: String,
    pub user_supplied: bool,
    pub target: Quantization,
    /// `R_∞(U)`, whose target norm divided by the bound is the lower bound.
    pub image: AmplifiedElement,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub enum Representation {
    Pl(PLRepresentation),
    L(LRepresentation),
}

#[derive(Debug, Clone)]
pub struct UpperWitness {
    pub generator: String,
    pub representation: Representation,
    pub value: f64,
    pub residual: f64,
    /// H-truncation the representation lives in, after any growth.
    pub h_dimension: usize,
}

#[derive(Debug, Clone)]
pub struct NormBracket {
    pub norm: TensorNorm,
    pub lower: f64,
    pub upper: f64,
    /// True when the bounds differ by more than the tolerance.
    pub gap: bool,
    /// False only if a certified lower bound exceeds a representation value,
    /// which would indicate a bug.
    pub sound: bool,
    pub lower_witness: LowerWitness,
    pub upper_witness: UpperWitness,
    /// Every certificate consulted, with its lower bound.
    pub certificate_values: Vec<(String, f64)>,
    /// Certificates excluded from the l-pool because the target is not an L-space.
    pub rejected_certificates: Vec<String>,
}

fn check_dims(e: &Quantization, f: &Quantization, u: &AmplifiedElement) -> Result<()> {
    let m = e.dim() * f.dim();
    if u.m() != m {
        return Err(Error::dims("tensor element base dimension", m, u.m()));
    }
    Ok(())
}

fn tolerance_for(opts: &BracketOptions, scale: f64) -> f64 {
    opts.tolerance * scale.max(1.0)
}

/// Evaluates every certificate and returns the best as the lower bound.
fn lower_from_pool(
    pool: &[Certificate],
    u: &AmplifiedElement,
    eopts: &EvalOptions,
) -> (LowerWitness, Vec<(String, f64)>) {
    let values: Vec<f64> = pool.par_iter().map(|c| c.lower_bound(u, eopts)).collect();
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = k;
        }
    }
    let cert = &pool[best];
    let image = AmplifiedElement::from_matrix_unchecked(u.coeffs() * cert.map.linearization());
    (
        LowerWitness {
            certificate_id: cert.id.clone(),
            provenance: cert.provenance.clone(),
            user_supplied: cert.user_supplied,
            target: cert.target().clone(),
            image,
            value: values[best],
        },
        pool.iter().map(|c| c.id.clone()).zip(values).collect(),
    )
}

/// All pl-representations produced by the generators, labeled.
fn pl_candidates(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    opts: &BracketOptions,
    eopts: &EvalOptions,
) -> Vec<(String, PLRepresentation)> {
    let (me, mf, d) = (e.dim(), f.dim(), u.d());
    let pairing = opts.pairing;
    let mut out = Vec::new();
    if u.is_zero() {
        return out;
    }
    if let Some(rep) = generators::elementary(u, me, mf, pairing) {
        out.push(("elementary".to_string(), rep));
    }
    if let Some(rep) = generators::isometry_sum_left(
        &generators::slice_decomposition(u, me, mf, false),
        d,
        pairing,
    ) {
        out.push(("isometry-sum:slices".to_string(), rep));
    }
    if let Some(rep) = generators::isometry_sum_right(
        &generators::slice_decomposition(u, me, mf, true),
        d,
        pairing,
    ) {
        out.push(("isometry-sum:slices-flipped".to_string(), rep));
    }
    let decompose = |q: Quantization, x: &AmplifiedElement| {
        q.projective_decomposition(x, eopts)
            .ok()
            .flatten()
            .map(|(_, dec)| dec)
    };
    if let Some(dec) = underlying_base(e)
        .and_then(|b| Quantization::tensor_p(b, f.clone()).ok())
        .and_then(|tp| decompose(tp, u))
    {
        if let Some(rep) = generators::isometry_sum_left(&dec, d, pairing) {
            out.push(("isometry-sum".to_string(), rep));
        }
    }
    if let Some(tp) = underlying_base(f).and_then(|b| Quantization::tensor_p(b, e.clone()).ok()) {
        let flipped = flip_factors(u, me, mf).expect("shape checked");
        if let Some(dec) = decompose(tp, &flipped) {
            if let Some(rep) = generators::isometry_sum_right(&dec, d, pairing) {
                out.push(("isometry-sum:flipped".to_string(), rep));
            }
        }
    }
    let steps = opts.budget.max(1);
    let (rep, _) = generators::refine_common_operator(u, e, f, pairing, steps, eopts);
    out.push(("common-operator".to_string(), rep));
    if generators::nonzero_columns(u) <= 64 {
        let s = generators::refine_diagonal(u, e, f, false, steps);
        if let Some(rep) = generators::diagonal(u, me, mf, &s, pairing) {
            out.push(("diagonal".to_string(), rep));
        }
    }
    out
}

fn residual_ok(res: f64, u: &AmplifiedElement) -> bool {
    res <= 1e-10 * u.frobenius().max(1.0)
}

fn zero_witness(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    pairing: PairingMap,
) -> UpperWitness {
    let rep = PLRepresentation::new(
        vec![super::representation::PlTerm {
            a: crate::hilbert::OperatorBlock::from_matrix_unchecked(nalgebra::DMatrix::zeros(
                u.d(),
                1,
            )),
            u: AmplifiedElement::zeros(1, e.dim()),
            v: AmplifiedElement::zeros(1, f.dim()),
        }],
        pairing,
    )
    .expect("shapes agree");
    UpperWitness {
        generator: "zero".into(),
        h_dimension: 1,
        residual: rep.residual(u).unwrap_or(f64::INFINITY),
        representation: Representation::Pl(rep),
        // no generator reproduced a nonzero element: the upper bound is vacuous
        value: if u.is_zero() { 0.0 } else { f64::INFINITY },
    }
}

fn finish(
    norm: TensorNorm,
    lower: LowerWitness,
    upper: UpperWitness,
    certificate_values: Vec<(String, f64)>,
    rejected: Vec<String>,
    opts: &BracketOptions,
) -> NormBracket {
    let tol = tolerance_for(opts, upper.value);
    NormBracket {
        norm,
        lower: lower.value,
        upper: upper.value,
        gap: upper.value - lower.value > tol,
        sound: lower.value <= upper.value + tol,
        lower_witness: lower,
        upper_witness: upper,
        certificate_values,
        rejected_certificates: rejected,
    }
}

/// Bracket for `‖U‖_pl` using every catalog certificate.
pub fn pl_norm_bracket(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    opts: &BracketOptions,
) -> Result<NormBracket> {
    pl_norm_bracket_with(e, f, u, opts, &[])
}

/// As [`pl_norm_bracket`], with extra user-supplied certificates.
pub fn pl_norm_bracket_with(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    opts: &BracketOptions,
    extra: &[Certificate],
) -> Result<NormBracket> {
    check_dims(e, f, u)?;
    let eopts = opts.eval_options();
    let mut pool = builtin_certificates(e, f);
    pool.extend(norming_pair_certificates(e, f, u, &eopts));
    pool.extend(extra.iter().cloned());
    let (lower, values) = lower_from_pool(&pool, u, &eopts);

    let mut best: Option<UpperWitness> = None;
    for (name, rep) in pl_candidates(e, f, u, opts, &eopts) {
        let residual = rep.residual(u)?;
        if !residual_ok(residual, u) {
            continue;
        }
        let value = rep.value(e, f, &eopts);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(UpperWitness {
                generator: name,
                h_dimension: rep.h_dimension(),
                residual,
                representation: Representation::Pl(rep),
                value,
            });
        }
    }
    let upper = best.unwrap_or_else(|| zero_witness(e, f, u, opts.pairing));
    Ok(finish(
        TensorNorm::Pl,
        lower,
        upper,
        values,
        Vec::new(),
        opts,
    ))
}

/// Bracket for `‖U‖_l`: certificates into L-spaces only, and l-representations
/// from orthogonalized pl-representations and the single-term construction.
pub fn l_norm_bracket(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    opts: &BracketOptions,
) -> Result<NormBracket> {
    l_norm_bracket_with(e, f, u, opts, &[])
}

pub fn l_norm_bracket_with(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    opts: &BracketOptions,
    extra: &[Certificate],
) -> Result<NormBracket> {
    check_dims(e, f, u)?;
    let eopts = opts.eval_options();
    let mut pool = builtin_certificates(e, f);
    pool.extend(norming_pair_certificates(e, f, u, &eopts));
    pool.extend(extra.iter().cloned());
    let mut admitted: Vec<(Quantization, bool)> = Vec::new();
    let mut rejected = Vec::new();
    let mut l_pool = Vec::new();
    for cert in pool {
        let ok = match admitted.iter().find(|(q, _)| q == cert.target()) {
            Some((_, ok)) => *ok,
            None => {
                let ok = admits_l(cert.target(), opts.seed);
                admitted.push((cert.target().clone(), ok));
                ok
            }
        };
        if ok {
            l_pool.push(cert);
        } else {
            rejected.push(cert.id);
        }
    }
    let (lower, values) = lower_from_pool(&l_pool, u, &eopts);

    let mut candidates: Vec<(String, LRepresentation)> = pl_candidates(e, f, u, opts, &eopts)
        .into_iter()
        .map(|(name, rep)| {
            (
                format!("orthogonalized:{name}"),
                orthogonalize_representation(&rep),
            )
        })
        .collect();
    if !u.is_zero() {
        let (me, mf) = (e.dim(), f.dim());
        let s = generators::refine_diagonal(u, e, f, true, opts.budget.max(1));
        if let Some(rep) = generators::diagonal(u, me, mf, &s, opts.pairing) {
            candidates.push((
                "diagonal:l-scaled".to_string(),
                orthogonalize_representation(&rep),
            ));
        }
    }
    let mut best: Option<UpperWitness> = None;
    for (name, rep) in candidates {
        let residual = rep.residual(u)?;
        if !residual_ok(residual, u) || !rep.supports_valid(1e-10) {
            continue;
        }
        let value = rep.value(e, f, &eopts);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(UpperWitness {
                generator: name,
                h_dimension: rep.h_dimension(),
                residual,
                representation: Representation::L(rep),
                value,
            });
        }
    }
    let upper = best.unwrap_or_else(|| zero_witness(e, f, u, opts.pairing));
    Ok(finish(TensorNorm::L, lower, upper, values, rejected, opts))
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub pl: NormBracket,
    pub l: NormBracket,
    /// `pl.lower / l.upper`: a certified lower bound of `‖U‖_pl / ‖U‖_l`.
    pub separation_ratio: f64,
    pub checks: Vec<(String, bool)>,
}

impl Comparison {
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Both brackets, with the comparisons that are sound given `‖·‖_pl ≥ ‖·‖_l`.
pub fn compare_pl_l(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    opts: &BracketOptions,
) -> Result<Comparison> {
    let pl = pl_norm_bracket(e, f, u, opts)?;
    let l = l_norm_bracket(e, f, u, opts)?;
    let tol = tolerance_for(opts, pl.upper);
    let mut checks = vec![
        (
            "pl.lower >= l.lower".to_string(),
            pl.lower >= l.lower - 1e-9 * l.lower.max(1.0),
        ),
        ("l.lower <= pl.upper".to_string(), l.lower <= pl.upper + tol),
        ("pl bracket sound".to_string(), pl.sound),
        ("l bracket sound".to_string(), l.sound),
    ];
    for (id, v) in &l.certificate_values {
        checks.push((
            format!("l-certificate {id} <= pl.upper"),
            *v <= pl.upper + tol,
        ));
    }
    let separation_ratio = if l.upper > 0.0 {
        pl.lower / l.upper
    } else {
        f64::NAN
    };
    Ok(Comparison {
        pl,
        l,
        separation_ratio,
        checks,
    })
}

fn element_json(u: &AmplifiedElement) -> Value {
    matrix_to_json(u.coeffs())
}

impl Representation {
    pub fn to_json(&self) -> Value {
        match self {
            Representation::Pl(rep) => json!({
                "type": "pl",
                "pairing": rep.pairing.name(),
                "terms": rep.terms.iter().map(|t| json!({
                    "a": matrix_to_json(t.a.entries()),
                    "u": element_json(&t.u),
                    "v": element_json(&t.v),
                })).collect::<Vec<_>>(),
            }),
            Representation::L(rep) => json!({
                "type": "l",
                "pairing": rep.pairing.name(),
                "a": matrix_to_json(rep.a.entries()),
                "terms": rep.terms.iter().map(|(u, v)| json!({"u": element_json(u), "v": element_json(v)})).collect::<Vec<_>>(),
                "supports": rep.supports.iter().map(matrix_to_json).collect::<Vec<_>>(),
            }),
        }
    }
}

impl NormBracket {
    pub fn to_json(&self) -> Value {
        json!({
            "norm": self.norm.name(),
            "lower": self.lower,
            "upper": self.upper,
            "gap": self.gap,
            "sound": self.sound,
            "lower_witness": {
                "certificate": self.lower_witness.certificate_id,
                "provenance": self.lower_witness.provenance,
                "user_supplied": self.lower_witness.user_supplied,
                "target": quantization_to_json(&self.lower_witness.target),
                "image": element_json(&self.lower_witness.image),
                "value": self.lower_witness.value,
            },
            "upper_witness": {
                "generator": self.upper_witness.generator,
                "value": self.upper_witness.value,
                "residual": self.upper_witness.residual,
                "h_dimension": self.upper_witness.h_dimension,
                "representation": self.upper_witness.representation.to_json(),
            },
            "certificates": self.certificate_values.iter().map(|(id, v)| json!({"id": id, "value": v})).collect::<Vec<_>>(),
            "rejected_certificates": self.rejected_certificates,
        })
    }
}
