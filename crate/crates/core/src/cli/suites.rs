//! Case execution: user-supplied cases, the fixed verification suite and the
//! randomized property sweeps.

use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{judge, num, CaseInput, CaseRecord, Command, JobSpec};
use crate::certificates::builtin_certificates;
use crate::element::{module_action, AmplifiedElement};
use crate::error::Result;
use crate::hilbert::{op_norm, OperatorBlock, PairingMap, C64, ONE, ZERO};
use crate::maps::amplify_bilinear;
use crate::quant::json::{matrix_to_json, quantization_to_json};
use crate::quant::{is_semi_ruan_witness_search, BaseNorm, EvalOptions, Field, Quantization};
use crate::rng::{
    derive_seed, gaussian_c64, index_below, random_isometry, random_matrix, random_real_matrix,
    stream, uniform, LabRng,
};
use crate::tensor::examples::v_example;
use crate::tensor::{compare_pl_l, l_norm_bracket, pl_norm_bracket, BracketOptions, TensorNorm};

type CaseFn<'a> = Box<dyn Fn() -> CaseRecord + Send + Sync + 'a>;

fn bracket_options(job: &JobSpec, pairing: PairingMap) -> BracketOptions {
    BracketOptions {
        budget: job.budget,
        seed: job.seed,
        pairing,
        tolerance: job.tolerance,
    }
}

fn eval_options(job: &JobSpec) -> EvalOptions {
    bracket_options(job, PairingMap::RowMajor).eval_options()
}

/// Runs cases concurrently; the output order is the input order.
fn execute(job: &JobSpec, cases: Vec<CaseFn<'_>>) -> Vec<CaseRecord> {
    cases
        .par_iter()
        .map(|f| {
            let start = Instant::now();
            let mut r = f();
            if job.timing {
                r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            r
        })
        .collect()
}

pub(super) fn run_case(job: &JobSpec, c: &CaseInput) -> Result<Vec<CaseRecord>> {
    let start = Instant::now();
    let mut out = Vec::new();
    match job.command {
        Command::Norm => {
            let q = c.quantization.as_ref().expect("parsed for norm");
            let nv = q.amp_norm_with(&c.element, &eval_options(job))?;
            let mut r = CaseRecord::new(&c.id, &c.raw);
            judge(
                &mut r,
                nv.lower,
                nv.value,
                true,
                c.expected.value,
                job.tolerance,
            );
            r.detail = json!({"value": nv.value, "lower": nv.lower, "exact": nv.exact, "method": nv.method});
            out.push(r);
        }
        Command::Pl | Command::L => {
            let (e, f) = c.factors.as_ref().expect("parsed for tensor commands");
            let opts = bracket_options(job, c.pairing);
            let (b, expected) = if job.command == Command::Pl {
                (
                    pl_norm_bracket(e, f, &c.element, &opts)?,
                    c.expected.value.or(c.expected.pl),
                )
            } else {
                (
                    l_norm_bracket(e, f, &c.element, &opts)?,
                    c.expected.value.or(c.expected.l),
                )
            };
            let mut r = CaseRecord::new(&c.id, &c.raw);
            judge(&mut r, b.lower, b.upper, b.sound, expected, job.tolerance);
            r.detail = b.to_json();
            out.push(r);
        }
        Command::Compare => {
            let (e, f) = c.factors.as_ref().expect("parsed for tensor commands");
            let cmp = compare_pl_l(e, f, &c.element, &bracket_options(job, c.pairing))?;
            for (b, expected) in [(&cmp.pl, c.expected.pl), (&cmp.l, c.expected.l)] {
                let mut r = CaseRecord::new(format!("{}/{}", c.id, b.norm.name()), &c.raw);
                judge(&mut r, b.lower, b.upper, b.sound, expected, job.tolerance);
                r.detail = b.to_json();
                out.push(r);
            }
            let mut r = CaseRecord::new(format!("{}/separation", c.id), &c.raw);
            r.lower = cmp.separation_ratio;
            r.upper = if cmp.l.lower > 0.0 {
                cmp.pl.upper / cmp.l.lower
            } else {
                f64::INFINITY
            };
            r.expected = match (c.expected.pl, c.expected.l) {
                (Some(pl), Some(l)) if l > 0.0 => Some(pl / l),
                _ => None,
            };
            if let Some((name, _)) = cmp.checks.iter().find(|(_, ok)| !ok) {
                r.fail(format!("comparison check failed: {name}"));
            }
            r.detail = json!({
                "checks": cmp.checks.iter().map(|(n, ok)| json!({"check": n, "ok": ok})).collect::<Vec<_>>(),
            });
            out.push(r);
        }
        Command::VerifyPaper | Command::Properties => unreachable!("suites take no input cases"),
    }
    if job.timing {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for r in &mut out {
            r.wall_time_ms = Some(ms);
        }
    }
    Ok(out)
}

fn case_rng(job: &JobSpec, family: u64, k: usize) -> LabRng {
    stream(derive_seed(job.seed, family), k as u64)
}

fn rand_dim(rng: &mut LabRng, max: usize) -> usize {
    1 + index_below(rng, max)
}

fn rand_weights(rng: &mut LabRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| uniform(rng, 0.5, 2.0)).collect()
}

fn element(m: DMatrix<C64>) -> AmplifiedElement {
    AmplifiedElement::new(m).expect("nonempty random matrix")
}

const SPOT_CHECKS: usize = 5;

/// The fixed verification suite.
pub(super) fn verify_paper(job: &JobSpec) -> Vec<CaseRecord> {
    let mut cases: Vec<CaseFn<'_>> = Vec::new();
    for n in 1..=job.n_max {
        for norm in [TensorNorm::Pl, TensorNorm::L] {
            cases.push(Box::new(move || v_example_case(job, n, norm)));
        }
    }
    for k in 0..SPOT_CHECKS {
        cases.push(Box::new(move || min_svd_case(job, k)));
        cases.push(Box::new(move || hilbert_reshape_case(job, k)));
        cases.push(Box::new(move || l1_closed_form_case(job, k)));
        cases.push(Box::new(move || lp_embedding_case(job, k)));
    }
    for (k, (label, e, f)) in certificate_pairs().into_iter().enumerate() {
        cases.push(Box::new(move || {
            certificate_sweep(job, k, label, (&e, &f), 20, "certificate-contractivity")
        }));
    }
    execute(job, cases)
}

fn v_example_case(job: &JobSpec, n: usize, norm: TensorNorm) -> CaseRecord {
    let h = Quantization::hilbert(n);
    let v = v_example(n);
    let opts = bracket_options(job, PairingMap::RowMajor);
    let (b, expected) = match norm {
        TensorNorm::Pl => (pl_norm_bracket(&h, &h, &v, &opts), n as f64),
        TensorNorm::L => (l_norm_bracket(&h, &h, &v, &opts), (n as f64).sqrt()),
    };
    let b = b.expect("consistent shapes");
    let mut r = CaseRecord::new(
        format!("v-example/{}/n={n}", norm.name()),
        &json!({"n": n, "norm": norm.name()}),
    );
    judge(
        &mut r,
        b.lower,
        b.upper,
        b.sound,
        Some(expected),
        job.tolerance,
    );
    r.detail = b.to_json();
    r
}

/// `U = Σ λ_k ξ_k ⊗ x_k` with orthonormal `ξ_k` and `x_k` over a minimal
/// Hilbert quantization has norm `max |λ_k|`.
pub(crate) fn orthonormal_combination(
    rng: &mut LabRng,
    d: usize,
    m: usize,
) -> (AmplifiedElement, Vec<C64>) {
    let r = 1 + index_below(rng, d.min(m));
    let xi = random_isometry(rng, d, r);
    let x = random_isometry(rng, m, r);
    let lambda: Vec<C64> = (0..r).map(|_| gaussian_c64(rng)).collect();
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambda.clone()));
    (element(xi * diag * x.transpose()), lambda)
}

fn min_svd_case(job: &JobSpec, k: usize) -> CaseRecord {
    let mut rng = case_rng(job, 1, k);
    let (d, m) = (rand_dim(&mut rng, 4), rand_dim(&mut rng, 4));
    let (u, lambda) = orthonormal_combination(&mut rng, d, m);
    let expected = lambda.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let q = Quantization::min(BaseNorm::euclidean(m));
    let nv = q
        .amp_norm_with(&u, &eval_options(job))
        .expect("shapes agree");
    let inputs =
        json!({"element": matrix_to_json(u.coeffs()), "quantization": quantization_to_json(&q)});
    let mut r = CaseRecord::new(format!("min-svd-law/{k}"), &inputs);
    judge(
        &mut r,
        nv.lower,
        nv.value,
        true,
        Some(expected),
        job.tolerance,
    );
    r.detail = json!({"method": nv.method, "lambda_abs": lambda.iter().map(|z| z.norm()).collect::<Vec<_>>()});
    r
}

fn hilbert_reshape_case(job: &JobSpec, k: usize) -> CaseRecord {
    let mut rng = case_rng(job, 2, k);
    let (mk, ml, d) = (
        rand_dim(&mut rng, 3),
        rand_dim(&mut rng, 3),
        rand_dim(&mut rng, 3),
    );
    let e = Quantization::min(BaseNorm::euclidean(mk));
    let f = Quantization::min(BaseNorm::euclidean(ml));
    let u = element(random_matrix(&mut rng, d, mk * ml));
    let expected = op_norm(u.coeffs());
    let b = l_norm_bracket(&e, &f, &u, &bracket_options(job, PairingMap::RowMajor))
        .expect("shapes agree");
    let inputs = json!({"e": quantization_to_json(&e), "f": quantization_to_json(&f), "element": matrix_to_json(u.coeffs())});
    let mut r = CaseRecord::new(format!("hilbert-l-reshape/{k}"), &inputs);
    judge(
        &mut r,
        b.lower,
        b.upper,
        b.sound,
        Some(expected),
        job.tolerance,
    );
    r.detail = b.to_json();
    r
}

/// `Σ_{s,t} μ_s ν_t ‖U(s,t)‖_2`, the norm of `U` in `L_1(X × Y)`.
pub(crate) fn l1_closed_form(u: &AmplifiedElement, mu: &[f64], nu: &[f64]) -> f64 {
    let mut total = 0.0;
    for (s, ms) in mu.iter().enumerate() {
        for (t, nt) in nu.iter().enumerate() {
            total += ms * nt * u.coeffs().column(s * nu.len() + t).norm();
        }
    }
    total
}

fn l1_closed_form_case(job: &JobSpec, k: usize) -> CaseRecord {
    let mut rng = case_rng(job, 3, k);
    let (s, t, d) = (
        rand_dim(&mut rng, 4),
        rand_dim(&mut rng, 4),
        rand_dim(&mut rng, 3),
    );
    let (mu, nu) = (rand_weights(&mut rng, s), rand_weights(&mut rng, t));
    let e = Quantization::lp(1.0, mu.clone(), Quantization::scalar()).expect("valid weights");
    let f = Quantization::lp(1.0, nu.clone(), Quantization::scalar()).expect("valid weights");
    let u = element(random_matrix(&mut rng, d, s * t));
    let expected = l1_closed_form(&u, &mu, &nu);
    let b = pl_norm_bracket(&e, &f, &u, &bracket_options(job, PairingMap::RowMajor))
        .expect("shapes agree");
    let inputs = json!({"e": quantization_to_json(&e), "f": quantization_to_json(&f), "element": matrix_to_json(u.coeffs())});
    let mut r = CaseRecord::new(format!("l1-closed-form/{k}"), &inputs);
    judge(
        &mut r,
        b.lower,
        b.upper,
        b.sound,
        Some(expected),
        job.tolerance,
    );
    r.detail = b.to_json();
    r
}

fn lp_embedding_case(job: &JobSpec, k: usize) -> CaseRecord {
    let mut rng = case_rng(job, 4, k);
    let p = [1.0, 2.0, 3.0][k % 3];
    let points = rand_dim(&mut rng, 3);
    let e = Quantization::lp(p, rand_weights(&mut rng, points), Quantization::scalar())
        .expect("valid weights");
    let f = Quantization::hilbert(2);
    let cert = builtin_certificates(&e, &f)
        .into_iter()
        .find(|c| c.id == "lp-embedding" || c.id == "grothendieck")
        .expect("scalar LP factor has an embedding certificate");
    let (d1, d2) = (rand_dim(&mut rng, 3), rand_dim(&mut rng, 3));
    let w = element(random_matrix(&mut rng, d1, points));
    let u = element(random_matrix(&mut rng, d2, 2));
    let opts = eval_options(job);
    let image = amplify_bilinear(&cert.map, &w, &u, PairingMap::RowMajor).expect("shapes agree");
    let lhs = cert
        .target()
        .amp_norm_with(&image, &opts)
        .expect("shapes agree");
    let expected = e.amp_norm_with(&w, &opts).expect("shapes agree").value
        * f.amp_norm_with(&u, &opts).expect("shapes agree").value;
    let inputs = json!({"p": p, "w": matrix_to_json(w.coeffs()), "u": matrix_to_json(u.coeffs())});
    let mut r = CaseRecord::new(format!("lp-embedding-isometry/{k}"), &inputs);
    judge(
        &mut r,
        lhs.lower,
        lhs.value,
        true,
        Some(expected),
        job.tolerance,
    );
    r.detail = json!({"certificate": cert.id, "p": p});
    r
}

/// Factor pairs whose certificate catalogs are swept.
pub(crate) fn certificate_pairs() -> Vec<(&'static str, Quantization, Quantization)> {
    let lp =
        |p: f64, w: Vec<f64>, inner: Quantization| Quantization::lp(p, w, inner).expect("valid");
    vec![
        (
            "hilbert-hilbert",
            Quantization::hilbert(2),
            Quantization::hilbert(2),
        ),
        (
            "l2-l2",
            lp(2.0, vec![1.0; 3], Quantization::scalar()),
            Quantization::hilbert(3),
        ),
        (
            "min-euclidean",
            Quantization::min(BaseNorm::euclidean(2)),
            Quantization::min(BaseNorm::euclidean(3)),
        ),
        (
            "max-l1-hilbert",
            Quantization::max(BaseNorm::l1(2)).expect("complex"),
            Quantization::hilbert(2),
        ),
        (
            "l1-hilbert",
            lp(1.0, vec![1.0, 2.0], Quantization::scalar()),
            Quantization::hilbert(2),
        ),
        (
            "l3-min-l1",
            lp(3.0, vec![0.5, 1.5], Quantization::scalar()),
            Quantization::min(BaseNorm::l1(2)),
        ),
        (
            "hilbert-max-euclidean",
            Quantization::hilbert(2),
            Quantization::max(BaseNorm::euclidean(2)).expect("complex"),
        ),
        (
            "min-l1-l2",
            Quantization::min(BaseNorm::l1(2)),
            lp(2.0, vec![1.0, 0.5], Quantization::scalar()),
        ),
    ]
}

/// The quantization kinds exercised by the property sweeps.
pub(crate) fn property_kinds() -> Vec<(&'static str, Quantization)> {
    let lp =
        |p: f64, w: Vec<f64>, inner: Quantization| Quantization::lp(p, w, inner).expect("valid");
    let unit = |k: usize, l: usize| {
        let mut m = DMatrix::from_element(2, 2, ZERO);
        m[(k, l)] = ONE;
        m
    };
    vec![
        ("min-l1", Quantization::min(BaseNorm::l1(3))),
        ("min-linf", Quantization::min(BaseNorm::linf(3))),
        ("min-euclidean", Quantization::min(BaseNorm::euclidean(3))),
        (
            "min-l3",
            Quantization::min(BaseNorm::lp(3.0, vec![1.0, 2.0, 0.5]).expect("valid")),
        ),
        (
            "min-real-l1",
            Quantization::min(BaseNorm::l1(3).with_field(Field::Real)),
        ),
        (
            "max-l1",
            Quantization::max(BaseNorm::l1(3)).expect("complex"),
        ),
        (
            "max-euclidean",
            Quantization::max(BaseNorm::euclidean(2)).expect("complex"),
        ),
        ("hilbert", Quantization::hilbert(3)),
        (
            "lp1-scalar",
            lp(1.0, vec![1.0, 2.0, 0.5], Quantization::scalar()),
        ),
        (
            "lp1-hilbert",
            lp(1.0, vec![1.0, 2.0], Quantization::hilbert(2)),
        ),
        (
            "lp2-scalar",
            lp(2.0, vec![1.0, 0.5, 2.0], Quantization::scalar()),
        ),
        (
            "lp3-scalar",
            lp(3.0, vec![1.0, 0.5, 2.0], Quantization::scalar()),
        ),
        (
            "lpinf-scalar",
            lp(f64::INFINITY, vec![1.0; 3], Quantization::scalar()),
        ),
        (
            "concrete",
            Quantization::concrete(2, 2, vec![unit(0, 0), unit(0, 1), unit(1, 1)])
                .expect("independent"),
        ),
        (
            "tensor-p",
            Quantization::tensor_p(BaseNorm::euclidean(2), Quantization::hilbert(2))
                .expect("complex base"),
        ),
    ]
}

/// True when semi-Ruan is expected to fail: `L_p` with `p < 2` on at least two points.
pub(crate) fn expects_semi_ruan_witness(q: &Quantization) -> Option<bool> {
    match q {
        Quantization::Lp { p, weights, .. } => Some(p.as_f64() < 2.0 && weights.len() >= 2),
        Quantization::Max { .. } | Quantization::TensorP { .. } => None,
        _ => Some(false),
    }
}

pub(crate) fn is_real(q: &Quantization) -> bool {
    matches!(q, Quantization::Min { base } if base.field() == Field::Real)
}

fn random_for(q: &Quantization, rng: &mut LabRng, d: usize) -> AmplifiedElement {
    if is_real(q) {
        element(random_real_matrix(rng, d, q.dim()))
    } else {
        element(random_matrix(rng, d, q.dim()))
    }
}

struct Sweep {
    trials: usize,
    violations: usize,
    max_excess: f64,
    first: Option<(usize, Value)>,
}

/// Runs `trials` independent trials; a trial reports `lhs − rhs` and the data
/// to record when that is positive.
fn sweep<F>(trials: usize, seed: u64, f: F) -> Sweep
where
    F: Fn(&mut LabRng) -> (f64, Box<dyn FnOnce() -> Value>) + Sync,
{
    let results: Vec<(f64, Option<Value>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, t as u64);
            let (excess, data) = f(&mut rng);
            (excess, (excess > 0.0).then(data))
        })
        .collect();
    let mut s = Sweep {
        trials,
        violations: 0,
        max_excess: f64::NEG_INFINITY,
        first: None,
    };
    for (t, (excess, data)) in results.into_iter().enumerate() {
        s.max_excess = s.max_excess.max(excess);
        if let Some(v) = data {
            s.violations += 1;
            s.first.get_or_insert((t, v));
        }
    }
    s
}

fn sweep_record(id: String, inputs: &Value, s: Sweep) -> CaseRecord {
    let mut r = CaseRecord::new(id, inputs);
    r.lower = s.violations as f64;
    r.upper = s.violations as f64;
    r.expected = Some(0.0);
    if s.violations > 0 {
        r.fail(format!(
            "{} of {} trials violate the inequality",
            s.violations, s.trials
        ));
    }
    r.detail = json!({
        "trials": s.trials,
        "violations": s.violations,
        "max_excess": num(s.max_excess),
        "first_violation": s.first.map(|(t, v)| json!({"trial": t, "data": v})),
    });
    r
}

fn certificate_sweep(
    job: &JobSpec,
    k: usize,
    label: &str,
    (e, f): (&Quantization, &Quantization),
    trials: usize,
    prefix: &str,
) -> CaseRecord {
    let certs = builtin_certificates(e, f);
    let opts = eval_options(job);
    let seed = derive_seed(job.seed, 0x400 + k as u64);
    let s = sweep(trials, seed, |rng| {
        let (d1, d2) = (rand_dim(rng, 2), rand_dim(rng, 2));
        let u = random_for(e, rng, d1);
        let v = random_for(f, rng, d2);
        let nu = e.amp_norm_with(&u, &opts).expect("shapes agree").value;
        let nv = f.amp_norm_with(&v, &opts).expect("shapes agree").value;
        let mut worst = (f64::NEG_INFINITY, String::new());
        for c in &certs {
            let image =
                amplify_bilinear(&c.map, &u, &v, PairingMap::RowMajor).expect("shapes agree");
            let lhs = c
                .target()
                .amp_norm_with(&image, &opts)
                .expect("shapes agree")
                .lower;
            let excess = lhs - c.bound * nu * nv - 1e-9;
            if excess > worst.0 {
                worst = (excess, c.id.clone());
            }
        }
        let (u, v) = (u.clone(), v.clone());
        (
            worst.0,
            Box::new(
                move || json!({"certificate": worst.1, "u": matrix_to_json(u.coeffs()), "v": matrix_to_json(v.coeffs())}),
            ),
        )
    });
    let inputs =
        json!({"e": quantization_to_json(e), "f": quantization_to_json(f), "trials": trials});
    let mut r = sweep_record(format!("{prefix}/{label}"), &inputs, s);
    if let Value::Object(m) = &mut r.detail {
        m.insert(
            "certificates".into(),
            json!(certs.iter().map(|c| c.id.clone()).collect::<Vec<_>>()),
        );
    }
    r
}

fn contractivity_case(job: &JobSpec, k: usize, label: &str, q: &Quantization) -> CaseRecord {
    let opts = eval_options(job);
    let s = sweep(job.trials, derive_seed(job.seed, 0x100 + k as u64), |rng| {
        let d = rand_dim(rng, 3);
        let u = random_for(q, rng, d);
        let rows = rand_dim(rng, 3);
        let a = if is_real(q) {
            random_real_matrix(rng, rows, d)
        } else {
            random_matrix(rng, rows, d)
        };
        let a = OperatorBlock::new(a).expect("nonempty");
        let au = module_action(&a, &u).expect("shapes agree");
        let lhs = q.amp_norm_with(&au, &opts).expect("shapes agree").lower;
        let rhs = a.op_norm() * q.amp_norm_with(&u, &opts).expect("shapes agree").value + 1e-9;
        (
            lhs - rhs,
            Box::new(
                move || json!({"a": matrix_to_json(a.entries()), "u": matrix_to_json(u.coeffs()), "lhs": lhs, "rhs": rhs}),
            ),
        )
    });
    sweep_record(
        format!("contractivity/{label}"),
        &json!({"quantization": quantization_to_json(q), "trials": job.trials}),
        s,
    )
}

fn cross_norm_case(job: &JobSpec, k: usize, label: &str, q: &Quantization) -> CaseRecord {
    let opts = eval_options(job);
    let s = sweep(job.trials, derive_seed(job.seed, 0x200 + k as u64), |rng| {
        let d = rand_dim(rng, 3);
        let (xi, x) = if is_real(q) {
            (
                random_real_matrix(rng, d, 1),
                random_real_matrix(rng, 1, q.dim()),
            )
        } else {
            (random_matrix(rng, d, 1), random_matrix(rng, 1, q.dim()))
        };
        let u = element(&xi * &x);
        let nv = q.amp_norm_with(&u, &opts).expect("shapes agree");
        let x: Vec<C64> = x.iter().copied().collect();
        let expected = xi.norm() * q.underlying_norm(&x).expect("shapes agree");
        let tol = 1e-10 * expected.max(1.0);
        let excess = (nv.value - expected).abs().max(expected - nv.lower) - tol;
        (
            excess,
            Box::new(
                move || json!({"u": matrix_to_json(u.coeffs()), "value": nv.value, "lower": nv.lower, "expected": expected}),
            ),
        )
    });
    sweep_record(
        format!("cross-norm/{label}"),
        &json!({"quantization": quantization_to_json(q), "trials": job.trials}),
        s,
    )
}

fn semi_ruan_case(
    job: &JobSpec,
    k: usize,
    label: &str,
    q: &Quantization,
    expect_witness: bool,
) -> CaseRecord {
    let found = is_semi_ruan_witness_search(q, job.trials, derive_seed(job.seed, 0x300 + k as u64));
    let mut r = CaseRecord::new(
        format!("semi-ruan/{label}"),
        &json!({"quantization": quantization_to_json(q), "trials": job.trials}),
    );
    let hits = found.is_some() as usize as f64;
    r.lower = hits;
    r.upper = hits;
    r.expected = Some(if expect_witness { 1.0 } else { 0.0 });
    match (&found, expect_witness) {
        (Some(w), false) => r.fail(format!("semi-Ruan violated at trial {}", w.trial)),
        (None, true) => r.fail(format!(
            "no semi-Ruan violation found in {} trials",
            job.trials
        )),
        _ => {}
    }
    r.detail = json!({
        "expect_witness": expect_witness,
        "witness": found.map(|w| json!({
            "trial": w.trial,
            "u": matrix_to_json(w.u.coeffs()),
            "v": matrix_to_json(w.v.coeffs()),
            "lhs": w.lhs,
            "rhs": w.rhs,
        })),
    });
    r
}

/// The randomized invariant sweeps, `job.trials` trials each.
pub(super) fn properties(job: &JobSpec) -> Vec<CaseRecord> {
    let kinds = property_kinds();
    let pairs = certificate_pairs();
    let mut cases: Vec<CaseFn<'_>> = Vec::new();
    for (k, (label, q)) in kinds.iter().enumerate() {
        cases.push(Box::new(move || contractivity_case(job, k, label, q)));
        cases.push(Box::new(move || cross_norm_case(job, k, label, q)));
        if let Some(expect) = expects_semi_ruan_witness(q) {
            cases.push(Box::new(move || semi_ruan_case(job, k, label, q, expect)));
        }
    }
    for (k, (label, e, f)) in pairs.iter().enumerate() {
        cases.push(Box::new(move || {
            certificate_sweep(job, k, label, (e, f), job.trials, "certificate-soundness")
        }));
    }
    execute(job, cases)
}
