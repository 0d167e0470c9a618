//! Projective norms `E ⊗_p HF`. An element `U ∈ H_d(E ⊗ F)` is viewed as
//! `Z = Σ_i e_i ⊗ W_i` with slices `W_i ∈ H_d F`, and normed as the infimum
//! of `Σ_k ‖x_k‖_E ‖w_k‖_{HF}` over decompositions `Z = Σ_k x_k ⊗ w_k`.

use nalgebra::{DMatrix, DVector};

use super::base::{BaseNorm, Exponent};
use super::minimal::min_amp_norm;
use super::{EvalOptions, NormValue, Quantization};
use crate::element::AmplifiedElement;
use crate::hilbert::{C64, ZERO};
use crate::rng::{derive_seed, random_unit, stream};

/// A decomposition `U = Σ_k x_k ⊗ w_k` realizing a projective upper bound.
#[derive(Debug, Clone)]
pub struct ProjectiveDecomposition {
    pub terms: Vec<(DVector<C64>, AmplifiedElement)>,
    /// `Σ_k ‖x_k‖_E · upper(‖w_k‖_{HF})`.
    pub value: f64,
}

impl ProjectiveDecomposition {
    /// Reassembles `Σ_k x_k ⊗ w_k` as an element of `H_d(E ⊗ F)`.
    pub fn reconstruct(&self, d: usize, me: usize, mf: usize) -> AmplifiedElement {
        let mut out = DMatrix::from_element(d, me * mf, ZERO);
        for (x, w) in &self.terms {
            for i in 0..me {
                if x[i] != ZERO {
                    let mut block = out.columns_mut(i * mf, mf);
                    block += w.coeffs() * x[i];
                }
            }
        }
        AmplifiedElement::from_matrix_unchecked(out)
    }
}

pub(crate) fn projective(
    base: &BaseNorm,
    u: &AmplifiedElement,
    inner: &Quantization,
    opts: &EvalOptions,
) -> (NormValue, ProjectiveDecomposition) {
    let me = base.dim();
    let mf = inner.dim();
    let d = u.d();
    let z = slices_matrix(u, me, mf);
    let tag = if matches!(inner, Quantization::Hilbert { dim: 1 }) {
        "max"
    } else {
        "tensor_p"
    };

    if base.is_l1_type() {
        let (_, s) = base.scales().expect("ℓ1");
        let mut terms = Vec::new();
        let (mut lo, mut hi, mut exact) = (0.0, 0.0, true);
        for i in 0..me {
            let w = u.column_block(i * mf, mf);
            let nv = inner.eval(&w, opts);
            exact &= nv.exact;
            lo += s[i] * nv.lower;
            hi += s[i] * nv.value;
            if !w.is_zero() {
                terms.push((unit(me, i), w));
            }
        }
        let value = if exact {
            NormValue::exact(hi, format!("{tag}:column-sum"))
        } else {
            NormValue::bracket(lo, hi, format!("{tag}:column-sum"))
        };
        return (value, ProjectiveDecomposition { terms, value: hi });
    }

    // rank one: Z = x ⊗ w and every tensor norm considered is a cross norm
    let svd = z.clone().svd(true, true);
    let top = svd.singular_values.max();
    if top == 0.0
        || svd
            .singular_values
            .iter()
            .filter(|s| **s > 1e-14 * top)
            .count()
            == 1
    {
        let terms: Vec<(DVector<C64>, AmplifiedElement)> = if top == 0.0 {
            Vec::new()
        } else {
            let k = svd.singular_values.imax();
            let x = svd.u.as_ref().expect("u").column(k).into_owned();
            let row: Vec<C64> = svd
                .v_t
                .as_ref()
                .expect("v_t")
                .row(k)
                .iter()
                .map(|c| c * top)
                .collect();
            vec![(x, row_to_element(&row, &vec![1.0; mf], d, mf))]
        };
        let (mut lo, mut hi, mut exact) = (0.0, 0.0, true);
        for (x, w) in &terms {
            let nx = base.norm(x.as_slice());
            let nv = inner.eval(w, opts);
            exact &= nv.exact;
            lo += nx * nv.lower;
            hi += nx * nv.value;
        }
        let value = if exact {
            NormValue::exact(hi, format!("{tag}:rank-one"))
        } else {
            NormValue::bracket(lo, hi, format!("{tag}:rank-one"))
        };
        return (value, ProjectiveDecomposition { terms, value: hi });
    }

    let omega = inner.hilbert_weights();
    if base.is_l2_type() {
        if let Some(om) = &omega {
            let (_, s) = base.scales().expect("ℓ2");
            return nuclear(&z, &s, om, d, mf, tag);
        }
    }

    let sq: Vec<f64> = match &omega {
        Some(om) => om.iter().map(|w| w.sqrt()).collect(),
        None => vec![1.0; mf],
    };
    let zw = weight_columns(&z, &sq, d);
    let dict = dictionary(base, &zw, opts);
    let y = irls(&dict, &zw, opts.iterations.max(20));
    let terms = finish_terms(&dict, y, &zw, &sq, d, mf);
    let mut decomposition = evaluate(base, inner, terms, opts);

    // plain slice decomposition as a fallback candidate
    let slices: Vec<(DVector<C64>, AmplifiedElement)> = (0..me)
        .map(|i| (unit(me, i), u.column_block(i * mf, mf)))
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let slice_dec = evaluate(base, inner, slices, opts);
    if slice_dec.value < decomposition.value {
        decomposition = slice_dec;
    }

    let lower =
        lower_bound(base, inner, u, &zw, d, mf, omega.is_some(), opts).min(decomposition.value);
    (
        NormValue::bracket(lower, decomposition.value, format!("{tag}:decomposition")),
        decomposition,
    )
}

fn unit(m: usize, i: usize) -> DVector<C64> {
    let mut e = DVector::from_element(m, ZERO);
    e[i] = C64::new(1.0, 0.0);
    e
}

/// Row `i` is the column-major vectorization of the slice `W_i`.
fn slices_matrix(u: &AmplifiedElement, me: usize, mf: usize) -> DMatrix<C64> {
    let d = u.d();
    DMatrix::from_fn(me, d * mf, |i, n| u.coeffs()[(n % d, i * mf + n / d)])
}

fn weight_columns(z: &DMatrix<C64>, sq: &[f64], d: usize) -> DMatrix<C64> {
    let mut out = z.clone();
    for n in 0..z.ncols() {
        out.column_mut(n).scale_mut(sq[n / d]);
    }
    out
}

fn row_to_element(row: &[C64], sq: &[f64], d: usize, mf: usize) -> AmplifiedElement {
    AmplifiedElement::from_matrix_unchecked(DMatrix::from_fn(d, mf, |r, q| row[q * d + r] / sq[q]))
}

/// Exact value for an ℓ2 base against a Hilbertian inner space: the nuclear
/// norm of `S Z Ω`, with the decomposition read off the SVD.
fn nuclear(
    z: &DMatrix<C64>,
    s: &[f64],
    omega: &[f64],
    d: usize,
    mf: usize,
    tag: &str,
) -> (NormValue, ProjectiveDecomposition) {
    let sq: Vec<f64> = omega.iter().map(|w| w.sqrt()).collect();
    let mut zp = weight_columns(z, &sq, d);
    for (i, si) in s.iter().enumerate() {
        zp.row_mut(i).scale_mut(*si);
    }
    let svd = zp.svd(true, true);
    let uu = svd.u.expect("u");
    let vt = svd.v_t.expect("v_t");
    let mut terms = Vec::new();
    let mut total = 0.0;
    for (k, sigma) in svd.singular_values.iter().enumerate() {
        total += sigma;
        if *sigma <= 0.0 {
            continue;
        }
        let x = DVector::from_fn(s.len(), |i, _| uu[(i, k)] / s[i]);
        let row: Vec<C64> = vt.row(k).iter().map(|c| c * *sigma).collect();
        terms.push((x, row_to_element(&row, &sq, d, mf)));
    }
    (
        NormValue::exact(total, format!("{tag}:nuclear")),
        ProjectiveDecomposition {
            terms,
            value: total,
        },
    )
}

/// Candidate atoms `x` with `‖x‖_E = 1`; the first `m` are the coordinate
/// vectors, so any residual can be absorbed exactly.
fn dictionary(base: &BaseNorm, zw: &DMatrix<C64>, opts: &EvalOptions) -> Vec<DVector<C64>> {
    let m = base.dim();
    let mut atoms: Vec<DVector<C64>> = (0..m).map(|i| unit(m, i)).collect();
    let svd = zw.clone().svd(true, false);
    let uu = svd.u.expect("u");
    let top = svd.singular_values.max();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-12 * top {
            atoms.push(uu.column(k).into_owned());
        }
    }
    let phases: &[C64] = if m <= 4 {
        &[
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ]
    } else if m <= 6 {
        &[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]
    } else {
        &[]
    };
    if !phases.is_empty() {
        let k = phases.len();
        for code in 0..k.pow(m as u32 - 1) {
            let mut c = code;
            let x = DVector::from_fn(m, |i, _| {
                if i == 0 {
                    return phases[0];
                }
                let p = phases[c % k];
                c /= k;
                p
            });
            atoms.push(x);
        }
    }
    let seed = derive_seed(opts.seed, 0x70726f6a);
    for i in 0..2 * opts.starts {
        let mut rng = stream(seed, i as u64);
        atoms.push(random_unit(&mut rng, m));
    }
    atoms
        .into_iter()
        .filter_map(|x| {
            let n = base.norm(x.as_slice());
            (n > 0.0).then(|| x / C64::new(n, 0.0))
        })
        .collect()
}

/// Reweighted least squares for `min Σ_k ‖y_k‖` subject to `Σ_k x_k y_kᵀ = Z`.
fn irls(dict: &[DVector<C64>], z: &DMatrix<C64>, iterations: usize) -> DMatrix<C64> {
    let kk = dict.len();
    let dm = DMatrix::from_columns(dict);
    let scale = z.norm().max(1e-300);
    let mut rho = vec![1.0; kk];
    let mut y = DMatrix::from_element(kk, z.ncols(), ZERO);
    for it in 0..iterations {
        let eps = scale * (1e-3f64).powi(it as i32 / 8 + 1).max(1e-13);
        let mut weighted = dm.clone();
        for k in 0..kk {
            weighted.column_mut(k).scale_mut(rho[k]);
        }
        let gram = &weighted * dm.adjoint();
        let Some(chol) = gram.clone().cholesky() else {
            break;
        };
        let sol = chol.solve(z);
        let next = weighted.adjoint() * sol;
        let done = (&next - &y).norm() <= 1e-14 * scale;
        y = next;
        for k in 0..kk {
            rho[k] = y.row(k).norm().max(eps);
        }
        if done {
            break;
        }
    }
    y
}

/// Folds residuals and negligible atoms into the coordinate atoms, so that
/// the returned terms reconstruct `Z` exactly up to rounding.
fn finish_terms(
    dict: &[DVector<C64>],
    mut y: DMatrix<C64>,
    zw: &DMatrix<C64>,
    sq: &[f64],
    d: usize,
    mf: usize,
) -> Vec<(DVector<C64>, AmplifiedElement)> {
    let m = zw.nrows();
    let total: f64 = (0..dict.len()).map(|k| y.row(k).norm()).sum();
    for k in m..dict.len() {
        if y.row(k).norm() <= 1e-12 * total {
            let row = y.row(k).into_owned();
            for i in 0..m {
                if dict[k][i] != ZERO {
                    let add = &row * dict[k][i];
                    let mut target = y.row_mut(i);
                    target += add;
                }
            }
            y.row_mut(k).fill(ZERO);
        }
    }
    let dm = DMatrix::from_columns(dict);
    let residual = zw - &dm * &y;
    let mut head = y.rows_mut(0, m);
    head += residual;
    (0..dict.len())
        .filter(|k| y.row(*k).iter().any(|c| *c != ZERO))
        .map(|k| {
            let row: Vec<C64> = y.row(k).iter().cloned().collect();
            (dict[k].clone(), row_to_element(&row, sq, d, mf))
        })
        .collect()
}

fn evaluate(
    base: &BaseNorm,
    inner: &Quantization,
    terms: Vec<(DVector<C64>, AmplifiedElement)>,
    opts: &EvalOptions,
) -> ProjectiveDecomposition {
    let value = terms
        .iter()
        .map(|(x, w)| base.norm(x.as_slice()) * inner.eval(w, opts).value)
        .sum();
    ProjectiveDecomposition { terms, value }
}

/// Certified lower bounds from two families of dual elements: rank-one
/// functionals `f ⊗ ψ` (the injective norm), and, for Hilbertian inner
/// spaces with an ℓp base, operators `Φ : E → HF` normed exactly or from above.
#[allow(clippy::too_many_arguments)]
fn lower_bound(
    base: &BaseNorm,
    inner: &Quantization,
    u: &AmplifiedElement,
    zw: &DMatrix<C64>,
    d: usize,
    mf: usize,
    hilbertian: bool,
    opts: &EvalOptions,
) -> f64 {
    let me = base.dim();
    let mut best: f64 = 0.0;

    // injective ascent over f ∈ Ball(E*)
    let mut starts: Vec<DVector<C64>> = Vec::new();
    let svd = zw.clone().svd(true, false);
    let uu = svd.u.expect("u");
    starts.push(uu.column(svd.singular_values.imax()).into_owned());
    for i in 0..me {
        starts.push(unit(me, i));
    }
    let seed = derive_seed(opts.seed, 0x696e6a);
    for i in 0..opts.starts {
        starts.push(random_unit(&mut stream(seed, i as u64), me));
    }
    for start in starts {
        let mut f = base.norming_functional(&start);
        let mut last = -1.0;
        for _ in 0..opts.iterations.clamp(1, 30) {
            let (_, fup) = base.dual_norm_bounds(&f);
            if fup == 0.0 {
                break;
            }
            // Σ_i f_i W_i
            let mut comb = DMatrix::from_element(d, mf, ZERO);
            for i in 0..me {
                comb += u.coeffs().columns(i * mf, mf) * f[i];
            }
            let nv = inner.eval(&AmplifiedElement::from_matrix_unchecked(comb.clone()), opts);
            let val = nv.lower / fup;
            best = best.max(val);
            if val <= last * (1.0 + 1e-12) {
                break;
            }
            last = val;
            // y_i = ⟨W_i, C⟩ then the norming functional of y
            let y = DVector::from_fn(me, |i, _| {
                let wi = u.coeffs().columns(i * mf, mf);
                comb.dotc(&wi.into_owned())
            });
            f = base.norming_functional(&y);
        }
    }

    if hilbertian {
        if let Some(dual) = dual_base(base) {
            // Φ acts as ⟨Φ, Z'⟩ = Σ Φ_{i n} Z'_{i n}; its norm is
            // sup_{‖x‖_E ≤ 1} ‖Φᵀ x‖, the minimal norm of Φᵀ over E*.
            let svd = zw.clone().svd(true, true);
            let polar = svd.u.as_ref().unwrap() * svd.v_t.as_ref().unwrap();
            let mut rows = zw.clone();
            for i in 0..me {
                let n = rows.row(i).norm();
                if n > 0.0 {
                    rows.row_mut(i).unscale_mut(n);
                }
            }
            for cand in [polar, zw.clone(), rows] {
                let phi = cand.map(|c| c.conj());
                let pairing: C64 = phi.iter().zip(zw.iter()).map(|(a, b)| a * b).sum();
                let norm = min_amp_norm(&dual, &phi.transpose(), opts).value;
                if norm > 0.0 {
                    best = best.max(pairing.norm() / norm);
                }
            }
        }
    }
    best
}

/// The dual of an ℓp-type base as a base norm, when representable.
pub(crate) fn dual_base(base: &BaseNorm) -> Option<BaseNorm> {
    let (p, s) = base.scales()?;
    let q = p.conjugate();
    match q {
        // ℓ1 bases are handled exactly before any bound is needed
        Exponent::Infinity => None,
        Exponent::Finite(qv) => {
            let w: Vec<f64> = s.iter().map(|x| x.powf(-qv)).collect();
            BaseNorm::lp(qv, w).ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::random_matrix;

    fn el(d: usize, m: usize, seed: u64) -> AmplifiedElement {
        AmplifiedElement::new(random_matrix(&mut stream(seed, 0), d, m)).unwrap()
    }

    #[test]
    fn decompositions_reconstruct() {
        let opts = EvalOptions::default();
        for (base, inner) in [
            (BaseNorm::linf(3), Quantization::hilbert(2)),
            (BaseNorm::euclidean(3), Quantization::hilbert(2)),
            (
                BaseNorm::lp(3.0, vec![1.0, 2.0, 0.5]).unwrap(),
                Quantization::scalar(),
            ),
            (BaseNorm::l1(2), Quantization::hilbert(2)),
        ] {
            let u = el(2, base.dim() * inner.dim(), 9);
            let (nv, dec) = projective(&base, &u, &inner, &opts);
            let back = dec.reconstruct(2, base.dim(), inner.dim());
            assert!(back.distance(&u).unwrap() < 1e-9 * u.frobenius(), "{nv}");
            assert!(nv.lower <= nv.value + 1e-12);
            assert!((dec.value - nv.value).abs() < 1e-12);
        }
    }

    #[test]
    fn max_dominates_min_and_is_dominated_by_l1_sum() {
        let opts = EvalOptions::default();
        let base = BaseNorm::linf(3);
        let u = el(3, 3, 2);
        let (nv, _) = projective(&base, &u, &Quantization::scalar(), &opts);
        let min = min_amp_norm(&base, u.coeffs(), &opts).value;
        let sum: f64 = (0..3).map(|j| u.coeffs().column(j).norm()).sum();
        assert!(nv.lower >= min - 1e-9);
        assert!(nv.value <= sum + 1e-9);
    }

    #[test]
    fn euclidean_max_is_trace_norm() {
        let u = el(3, 3, 4);
        let (nv, _) = projective(
            &BaseNorm::euclidean(3),
            &u,
            &Quantization::scalar(),
            &EvalOptions::default(),
        );
        let trace: f64 = u.coeffs().singular_values().iter().sum();
        assert!(nv.exact && (nv.value - trace).abs() < 1e-10);
    }
}
