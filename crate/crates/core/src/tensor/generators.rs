//! Constructions of representations for a given `U ∈ H_d(E ⊗ F)`.

use nalgebra::{DMatrix, DVector};

use super::representation::{PLRepresentation, PlTerm};
use crate::element::{flip_factors, AmplifiedElement};
use crate::hilbert::{op_norm, OperatorBlock, PairingMap, C64, ZERO};
use crate::quant::{BaseNorm, EvalOptions, ProjectiveDecomposition, Quantization};

fn base_row(m: usize, x: &[C64]) -> AmplifiedElement {
    debug_assert_eq!(x.len(), m);
    AmplifiedElement::from_base_vector(x).expect("nonempty")
}

fn unit(m: usize, i: usize) -> Vec<C64> {
    (0..m)
        .map(|j| if j == i { C64::new(1.0, 0.0) } else { ZERO })
        .collect()
}

/// One term per nonzero column: `U = Σ_{ij} ξ_ij·(e b_i ⋄ e b'_j)`, with
/// `ξ_ij` read as an operator `H_1 → H_d`.
pub fn elementary(
    u: &AmplifiedElement,
    me: usize,
    mf: usize,
    pairing: PairingMap,
) -> Option<PLRepresentation> {
    let terms: Vec<PlTerm> = (0..me * mf)
        .filter(|c| u.coeffs().column(*c).iter().any(|z| *z != ZERO))
        .map(|c| PlTerm {
            a: OperatorBlock::from_matrix_unchecked(DMatrix::from_column_slice(
                u.d(),
                1,
                u.coeffs().column(c).as_slice(),
            )),
            u: base_row(me, &unit(me, c / mf)),
            v: base_row(mf, &unit(mf, c % mf)),
        })
        .collect();
    PLRepresentation::new(terms, pairing).ok()
}

/// `U = Σ_k id·(e x_k ⋄ w_k)` from a decomposition `U = Σ_k x_k ⊗ w_k` with
/// `x_k ∈ E` and `w_k ∈ H_d F`. Since `pairing(0, b) = b`, the identity of
/// `H_d` serves as the operator.
pub fn isometry_sum_left(
    dec: &ProjectiveDecomposition,
    d: usize,
    pairing: PairingMap,
) -> Option<PLRepresentation> {
    let terms: Vec<PlTerm> = dec
        .terms
        .iter()
        .map(|(x, w)| PlTerm {
            a: OperatorBlock::identity(d),
            u: base_row(x.len(), x.as_slice()),
            v: w.clone(),
        })
        .collect();
    PLRepresentation::new(terms, pairing).ok()
}

/// The mirror image: a decomposition `U = Σ_k w_k ⊗ y_k` with `w_k ∈ H_d E`
/// and `y_k ∈ F` (computed on the flipped element).
pub fn isometry_sum_right(
    dec: &ProjectiveDecomposition,
    d: usize,
    pairing: PairingMap,
) -> Option<PLRepresentation> {
    let terms: Vec<PlTerm> = dec
        .terms
        .iter()
        .map(|(y, w)| PlTerm {
            a: OperatorBlock::identity(d),
            u: w.clone(),
            v: base_row(y.len(), y.as_slice()),
        })
        .collect();
    PLRepresentation::new(terms, pairing).ok()
}

/// The slice decomposition `U = Σ_i b_i ⊗ W_i` (and its mirror), which needs
/// no optimization.
pub fn slice_decomposition(
    u: &AmplifiedElement,
    me: usize,
    mf: usize,
    right: bool,
) -> ProjectiveDecomposition {
    let (v, outer, inner) = if right {
        (flip_factors(u, me, mf).expect("shape"), mf, me)
    } else {
        (u.clone(), me, mf)
    };
    let terms = (0..outer)
        .map(|i| {
            (
                DVector::from_vec(unit(outer, i)),
                v.column_block(i * inner, inner),
            )
        })
        .filter(|(_, w)| !w.is_zero())
        .collect();
    ProjectiveDecomposition {
        terms,
        value: f64::NAN,
    }
}

/// A base norm for the underlying space of `q`, when one is available, so the
/// projective engine can search decompositions against it.
pub fn underlying_base(q: &Quantization) -> Option<BaseNorm> {
    match q {
        Quantization::Min { base } | Quantization::Max { base } => {
            (base.field() == crate::quant::Field::Complex).then(|| base.clone())
        }
        Quantization::Hilbert { dim } => Some(BaseNorm::euclidean(*dim)),
        Quantization::Lp { p, weights, inner } if **inner == Quantization::scalar() => {
            BaseNorm::lp(p.as_f64(), weights.clone()).ok()
        }
        _ => None,
    }
}

/// Single-term representation `U = T·(u ⋄ v)` with `u = Σ_k e_k (α_k b_k)`,
/// `v = Σ_l e_l (β_l b'_l)` and `T = Σ_{kl} ξ_kl/(α_k β_l) ∘ (e_k ⋄ e_l)`.
pub fn common_operator(
    u: &AmplifiedElement,
    me: usize,
    mf: usize,
    alpha: &[f64],
    beta: &[f64],
    pairing: PairingMap,
) -> PLRepresentation {
    let d = u.d();
    let mut t = DMatrix::from_element(d, me * mf, ZERO);
    for k in 0..me {
        for l in 0..mf {
            let col = u.coeffs().column(k * mf + l) / C64::new(alpha[k] * beta[l], 0.0);
            t.column_mut(pairing.index(k, l, me, mf)).copy_from(&col);
        }
    }
    let diag = |w: &[f64]| {
        AmplifiedElement::from_matrix_unchecked(DMatrix::from_fn(w.len(), w.len(), |r, c| {
            if r == c {
                C64::new(w[r], 0.0)
            } else {
                ZERO
            }
        }))
    };
    PLRepresentation::new(
        vec![PlTerm {
            a: OperatorBlock::from_matrix_unchecked(t),
            u: diag(alpha),
            v: diag(beta),
        }],
        pairing,
    )
    .expect("shapes agree")
}

/// Searches scalings for [`common_operator`], starting from unit scalings
/// and from `α_k = 1/‖b_k‖`, `β_l = 1/‖b'_l‖`.
pub fn refine_common_operator(
    u: &AmplifiedElement,
    e: &Quantization,
    f: &Quantization,
    pairing: PairingMap,
    steps: usize,
    opts: &EvalOptions,
) -> (PLRepresentation, f64) {
    let (me, mf) = (e.dim(), f.dim());
    let inv_norms = |q: &Quantization, m: usize| -> Vec<f64> {
        (0..m)
            .map(|i| {
                let n = q.underlying_norm(&unit(m, i)).unwrap_or(1.0);
                if n > 0.0 {
                    1.0 / n
                } else {
                    1.0
                }
            })
            .collect()
    };
    let objective = |a: &[f64], b: &[f64]| -> f64 {
        let rep = common_operator(u, me, mf, a, b, pairing);
        rep.value(e, f, opts)
    };
    let starts = [
        (vec![1.0; me], vec![1.0; mf]),
        (inv_norms(e, me), inv_norms(f, mf)),
    ];
    let mut best = starts
        .iter()
        .map(|(a, b)| (objective(a, b), a.clone(), b.clone()))
        .fold(
            None,
            |acc: Option<(f64, Vec<f64>, Vec<f64>)>, c| match acc {
                Some(x) if x.0 <= c.0 => Some(x),
                _ => Some(c),
            },
        )
        .expect("two starts");
    let mut factor: f64 = 1.5;
    let mut evals = 0;
    'outer: while evals < steps && factor > 1.0 + 1e-4 {
        let mut improved = false;
        for idx in 0..me + mf {
            for mult in [factor, 1.0 / factor] {
                if evals >= steps {
                    break 'outer;
                }
                let (mut a, mut b) = (best.1.clone(), best.2.clone());
                if idx < me {
                    a[idx] *= mult;
                } else {
                    b[idx - me] *= mult;
                }
                evals += 1;
                let val = objective(&a, &b);
                if val < best.0 * (1.0 - 1e-13) {
                    best = (val, a, b);
                    improved = true;
                }
            }
        }
        if !improved {
            factor = factor.sqrt();
        }
    }
    (
        common_operator(u, me, mf, &best.1, &best.2, pairing),
        best.0,
    )
}

/// Diagonal construction: for the nonzero columns `r ↔ (i_r, j_r)`,
/// `u_r = e_r (s_r b_i)`, `v_r = e_r b'_j` and one shared operator
/// `a = Σ_r (ξ_r / s_r) ∘ (e_r ⋄ e_r)`. The `u_r` have orthogonal supports.
pub fn diagonal(
    u: &AmplifiedElement,
    me: usize,
    mf: usize,
    scale: &[f64],
    pairing: PairingMap,
) -> Option<PLRepresentation> {
    let cols: Vec<usize> = (0..me * mf)
        .filter(|c| u.coeffs().column(*c).iter().any(|z| *z != ZERO))
        .collect();
    let r = cols.len();
    if r == 0 {
        return None;
    }
    let d = u.d();
    let mut a = DMatrix::from_element(d, r * r, ZERO);
    for (k, c) in cols.iter().enumerate() {
        let col = u.coeffs().column(*c) / C64::new(scale[k], 0.0);
        a.column_mut(pairing.index(k, k, r, r)).copy_from(&col);
    }
    let a = OperatorBlock::from_matrix_unchecked(a);
    let terms = cols
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut uk = DMatrix::from_element(r, me, ZERO);
            uk[(k, c / mf)] = C64::new(scale[k], 0.0);
            let mut vk = DMatrix::from_element(r, mf, ZERO);
            vk[(k, c % mf)] = C64::new(1.0, 0.0);
            PlTerm {
                a: a.clone(),
                u: AmplifiedElement::from_matrix_unchecked(uk),
                v: AmplifiedElement::from_matrix_unchecked(vk),
            }
        })
        .collect();
    PLRepresentation::new(terms, pairing).ok()
}

/// Number of nonzero columns, the length of the diagonal scaling vector.
pub fn nonzero_columns(u: &AmplifiedElement) -> usize {
    (0..u.m())
        .filter(|c| u.coeffs().column(*c).iter().any(|z| *z != ZERO))
        .count()
}

/// Refines the diagonal scalings for either the pl value
/// `‖A S⁻¹‖ Σ s_r n_r` or the l value `‖A S⁻¹‖ (Σ s_r² n_r²)^{1/2}`.
pub fn refine_diagonal(
    u: &AmplifiedElement,
    e: &Quantization,
    f: &Quantization,
    l_value: bool,
    steps: usize,
) -> Vec<f64> {
    let (me, mf) = (e.dim(), f.dim());
    let cols: Vec<usize> = (0..me * mf)
        .filter(|c| u.coeffs().column(*c).iter().any(|z| *z != ZERO))
        .collect();
    let norms: Vec<f64> = cols
        .iter()
        .map(|c| {
            e.underlying_norm(&unit(me, c / mf)).unwrap_or(1.0)
                * f.underlying_norm(&unit(mf, c % mf)).unwrap_or(1.0)
        })
        .collect();
    let a = DMatrix::from_columns(
        &cols
            .iter()
            .map(|c| u.coeffs().column(*c).into_owned())
            .collect::<Vec<_>>(),
    );
    let objective = |s: &[f64]| -> f64 {
        let mut scaled = a.clone();
        for (k, sk) in s.iter().enumerate() {
            scaled.column_mut(k).unscale_mut(*sk);
        }
        let weights = s.iter().zip(&norms).map(|(x, n)| x * n);
        let tail = if l_value {
            weights.map(|w| w * w).sum::<f64>().sqrt()
        } else {
            weights.sum()
        };
        op_norm(&scaled) * tail
    };
    let r = cols.len();
    let col_norms: Vec<f64> = (0..r)
        .map(|k| a.column(k).norm() / norms[k].max(1e-300))
        .collect();
    let starts = [vec![1.0; r], col_norms];
    let mut best = starts
        .iter()
        .filter(|s| s.iter().all(|x| *x > 0.0 && x.is_finite()))
        .map(|s| (objective(s), s.clone()))
        .fold(None, |acc: Option<(f64, Vec<f64>)>, c| match acc {
            Some(x) if x.0 <= c.0 => Some(x),
            _ => Some(c),
        })
        .unwrap_or((f64::INFINITY, vec![1.0; r]));
    let mut factor: f64 = 1.5;
    let mut evals = 0;
    'outer: while evals < steps && factor > 1.0 + 1e-4 {
        let mut improved = false;
        for idx in 0..r {
            for mult in [factor, 1.0 / factor] {
                if evals >= steps {
                    break 'outer;
                }
                let mut s = best.1.clone();
                s[idx] *= mult;
                evals += 1;
                let val = objective(&s);
                if val < best.0 * (1.0 - 1e-13) {
                    best = (val, s);
                    improved = true;
                }
            }
        }
        if !improved {
            factor = factor.sqrt();
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_matrix, stream};

    fn el(d: usize, m: usize, seed: u64) -> AmplifiedElement {
        AmplifiedElement::new(random_matrix(&mut stream(seed, 0), d, m)).unwrap()
    }

    #[test]
    fn constructions_reconstruct() {
        let (me, mf) = (2, 3);
        let u = el(2, me * mf, 1);
        let tol = 1e-10 * u.frobenius();
        for pairing in [PairingMap::RowMajor, PairingMap::ColumnMajor] {
            let reps = vec![
                elementary(&u, me, mf, pairing).unwrap(),
                isometry_sum_left(&slice_decomposition(&u, me, mf, false), 2, pairing).unwrap(),
                isometry_sum_right(&slice_decomposition(&u, me, mf, true), 2, pairing).unwrap(),
                common_operator(&u, me, mf, &[1.0, 2.0], &[0.5, 1.0, 3.0], pairing),
                diagonal(&u, me, mf, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], pairing).unwrap(),
            ];
            for rep in reps {
                assert!(rep.residual(&u).unwrap() < tol);
            }
        }
    }

    #[test]
    fn refinement_does_not_worsen() {
        let u = el(3, 4, 2);
        let e = Quantization::min(BaseNorm::lp(3.0, vec![1.0, 2.0]).unwrap());
        let f = Quantization::hilbert(2);
        let opts = EvalOptions::default();
        let plain = common_operator(&u, 2, 2, &[1.0; 2], &[1.0; 2], PairingMap::RowMajor)
            .value(&e, &f, &opts);
        let (rep, val) = refine_common_operator(&u, &e, &f, PairingMap::RowMajor, 40, &opts);
        assert!(val <= plain + 1e-12);
        assert!((rep.value(&e, &f, &opts) - val).abs() < 1e-12);
    }
}
