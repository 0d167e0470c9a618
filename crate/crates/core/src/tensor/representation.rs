//! Representations `U = Σ_k a_k·(u_k ⋄ v_k)` (pl) and `U = a·Σ_k u_k ⋄ v_k`
//! with orthogonally supported `u_k` (l), whose values bound the tensor norms
//! from above.

use nalgebra::DMatrix;

use crate::element::{diamond, module_action, AmplifiedElement};
use crate::error::{Error, Result};
use crate::hilbert::{block_isometry, diamond_op, embedding, OperatorBlock, PairingMap, C64, ZERO};
use crate::quant::{EvalOptions, Quantization};

#[derive(Debug, Clone)]
pub struct PlTerm {
    pub a: OperatorBlock,
    pub u: AmplifiedElement,
    pub v: AmplifiedElement,
}

#[derive(Debug, Clone)]
pub struct PLRepresentation {
    pub terms: Vec<PlTerm>,
    pub pairing: PairingMap,
}

impl PLRepresentation {
    pub fn new(terms: Vec<PlTerm>, pairing: PairingMap) -> Result<Self> {
        let first = terms.first().ok_or_else(|| {
            Error::InvalidParameter("representation needs at least one term".into())
        })?;
        let (d, me, mf) = (first.a.rows(), first.u.m(), first.v.m());
        for t in &terms {
            if t.a.cols() != t.u.d() * t.v.d() {
                return Err(Error::dims(
                    "representation operator columns",
                    t.u.d() * t.v.d(),
                    t.a.cols(),
                ));
            }
            if t.a.rows() != d {
                return Err(Error::dims("representation operator rows", d, t.a.rows()));
            }
            if t.u.m() != me || t.v.m() != mf {
                return Err(Error::dims(
                    "representation factor dimension",
                    me * mf,
                    t.u.m() * t.v.m(),
                ));
            }
        }
        Ok(PLRepresentation { terms, pairing })
    }

    pub fn reconstruct(&self) -> AmplifiedElement {
        let mut acc: Option<DMatrix<C64>> = None;
        for t in &self.terms {
            let part = module_action(&t.a, &diamond(&t.u, &t.v, self.pairing))
                .expect("shapes checked at construction")
                .into_coeffs();
            acc = Some(match acc {
                Some(m) => m + part,
                None => part,
            });
        }
        AmplifiedElement::from_matrix_unchecked(acc.expect("nonempty"))
    }

    pub fn residual(&self, target: &AmplifiedElement) -> Result<f64> {
        self.reconstruct().distance(target)
    }

    /// `Σ ‖a_k‖‖u_k‖‖v_k‖` using certified upper bounds for the factor norms.
    pub fn value(&self, e: &Quantization, f: &Quantization, opts: &EvalOptions) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let na = t.a.op_norm();
                if na == 0.0 {
                    return 0.0;
                }
                na * e.eval(&t.u, opts).value * f.eval(&t.v, opts).value
            })
            .sum()
    }

    /// Largest H-truncation used by a term, `d_u·d_v`.
    pub fn h_dimension(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.u.d() * t.v.d())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct LRepresentation {
    pub a: OperatorBlock,
    pub terms: Vec<(AmplifiedElement, AmplifiedElement)>,
    /// Pairwise orthogonal projections with `P_k·u_k = u_k`.
    pub supports: Vec<DMatrix<C64>>,
    pub pairing: PairingMap,
}

impl LRepresentation {
    pub fn reconstruct(&self) -> AmplifiedElement {
        let mut sum = diamond(&self.terms[0].0, &self.terms[0].1, self.pairing).into_coeffs();
        for (u, v) in &self.terms[1..] {
            sum += diamond(u, v, self.pairing).coeffs();
        }
        AmplifiedElement::from_matrix_unchecked(self.a.entries() * sum)
    }

    pub fn residual(&self, target: &AmplifiedElement) -> Result<f64> {
        self.reconstruct().distance(target)
    }

    /// `‖a‖ (Σ ‖u_k‖²‖v_k‖²)^{1/2}` with certified upper bounds.
    pub fn value(&self, e: &Quantization, f: &Quantization, opts: &EvalOptions) -> f64 {
        let s: f64 = self
            .terms
            .iter()
            .map(|(u, v)| (e.eval(u, opts).value * f.eval(v, opts).value).powi(2))
            .sum();
        self.a.op_norm() * s.sqrt()
    }

    pub fn h_dimension(&self) -> usize {
        self.a.cols()
    }

    /// Checks that the supports are orthogonal projections, pairwise
    /// orthogonal, and fix their elements.
    pub fn supports_valid(&self, tol: f64) -> bool {
        let n = self.supports.len();
        if n != self.terms.len() {
            return false;
        }
        for (k, p) in self.supports.iter().enumerate() {
            if (p * p - p).norm() > tol || (p.adjoint() - p).norm() > tol {
                return false;
            }
            let u = self.terms[k].0.coeffs();
            if (p * u - u).norm() > tol * (1.0 + u.norm()) {
                return false;
            }
            for q in &self.supports[k + 1..] {
                if (p * q).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Orthogonal projection onto the range of the coefficient matrix.
fn range_projection(u: &DMatrix<C64>) -> DMatrix<C64> {
    let svd = u.clone().svd(true, false);
    let uu = svd.u.expect("u");
    let top = svd.singular_values.max();
    let d = u.nrows();
    let mut p = DMatrix::from_element(d, d, ZERO);
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-12 * top {
            let c = uu.column(k);
            p += c * c.adjoint();
        }
    }
    p
}

fn same_operator(a: &OperatorBlock, b: &OperatorBlock) -> bool {
    a.rows() == b.rows()
        && a.cols() == b.cols()
        && (a.entries() - b.entries()).norm() <= 1e-14 * (1.0 + a.entries().norm())
}

/// Turns a pl-representation into an l-representation of the same element.
/// When the terms already share one operator and the `u_k` have pairwise
/// orthogonal ranges, the representation is kept as is. Otherwise each `u_k`
/// is moved into its own coordinate block by an isometry `S_k` and
/// `a := Σ_k a_k (S_k* ⋄ id)`.
pub fn orthogonalize_representation(rep: &PLRepresentation) -> LRepresentation {
    let pairing = rep.pairing;
    let t0 = &rep.terms[0];
    let shared = rep
        .terms
        .iter()
        .all(|t| same_operator(&t.a, &t0.a) && t.u.d() == t0.u.d() && t.v.d() == t0.v.d());
    if shared {
        let orthogonal = rep.terms.iter().enumerate().all(|(j, tj)| {
            rep.terms[j + 1..].iter().all(|tk| {
                let cross = tj.u.coeffs().adjoint() * tk.u.coeffs();
                cross.norm() <= 1e-14 * (1.0 + tj.u.frobenius() * tk.u.frobenius())
            })
        });
        if orthogonal {
            return LRepresentation {
                a: t0.a.clone(),
                terms: rep
                    .terms
                    .iter()
                    .map(|t| (t.u.clone(), t.v.clone()))
                    .collect(),
                supports: rep
                    .terms
                    .iter()
                    .map(|t| range_projection(t.u.coeffs()))
                    .collect(),
                pairing,
            };
        }
    }

    let n = rep.terms.len();
    let du = rep.terms.iter().map(|t| t.u.d()).max().expect("nonempty");
    let dv = rep.terms.iter().map(|t| t.v.d()).max().expect("nonempty");
    let rows = t0.a.rows();
    let mut a = DMatrix::from_element(rows, n * du * dv, ZERO);
    let mut terms = Vec::with_capacity(n);
    let mut supports = Vec::with_capacity(n);
    for (k, t) in rep.terms.iter().enumerate() {
        // pad to common dimensions: a_k ← a_k (J ⋄ J')*
        let j = diamond_op(&embedding(t.u.d(), du), &embedding(t.v.d(), dv), pairing);
        let ak = t.a.entries() * j.entries().adjoint();
        let s = block_isometry(k, du, n);
        let shift = diamond_op(&s.adjoint(), &OperatorBlock::identity(dv), pairing);
        a += ak * shift.entries();
        let u =
            module_action(&s, &t.u.embed(du).expect("du is the maximum")).expect("shapes agree");
        let v = t.v.embed(dv).expect("dv is the maximum");
        supports.push(s.entries() * s.entries().adjoint());
        terms.push((u, v));
    }
    LRepresentation {
        a: OperatorBlock::from_matrix_unchecked(a),
        terms,
        supports,
        pairing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_matrix, stream};

    fn random_rep(seed: u64, pairing: PairingMap) -> PLRepresentation {
        let mut rng = stream(seed, 0);
        let terms = (0..3)
            .map(|k| {
                let (du, dv) = (1 + k % 2, 2);
                PlTerm {
                    a: OperatorBlock::new(random_matrix(&mut rng, 3, du * dv)).unwrap(),
                    u: AmplifiedElement::new(random_matrix(&mut rng, du, 2)).unwrap(),
                    v: AmplifiedElement::new(random_matrix(&mut rng, dv, 2)).unwrap(),
                }
            })
            .collect();
        PLRepresentation::new(terms, pairing).unwrap()
    }

    #[test]
    fn orthogonalization_reconstructs() {
        for pairing in [PairingMap::RowMajor, PairingMap::ColumnMajor] {
            let rep = random_rep(4, pairing);
            let target = rep.reconstruct();
            let l = orthogonalize_representation(&rep);
            assert!(l.residual(&target).unwrap() < 1e-10);
            assert!(l.supports_valid(1e-12));
        }
    }

    #[test]
    fn single_term_is_unchanged() {
        let mut rep = random_rep(5, PairingMap::RowMajor);
        rep.terms.truncate(1);
        let l = orthogonalize_representation(&rep);
        assert_eq!(l.terms.len(), 1);
        assert_eq!(l.a.entries(), rep.terms[0].a.entries());
        let h = Quantization::hilbert(2);
        let opts = EvalOptions::default();
        assert!((l.value(&h, &h, &opts) - rep.value(&h, &h, &opts)).abs() < 1e-12);
    }

    #[test]
    fn l_value_never_exceeds_pl_value_for_orthogonal_input() {
        let rep = random_rep(6, PairingMap::ColumnMajor);
        let h = Quantization::hilbert(2);
        let opts = EvalOptions::default();
        let l = orthogonalize_representation(&rep);
        // ‖Σ a_k (S_k*⋄id)‖ ≤ (Σ‖a_k‖²)^{1/2}, so the l value is at most the pl value
        assert!(l.value(&h, &h, &opts) <= rep.value(&h, &h, &opts) + 1e-9);
    }

    #[test]
    fn mismatched_terms_are_rejected() {
        let mut rng = stream(7, 0);
        let t = PlTerm {
            a: OperatorBlock::new(random_matrix(&mut rng, 2, 3)).unwrap(),
            u: AmplifiedElement::new(random_matrix(&mut rng, 2, 2)).unwrap(),
            v: AmplifiedElement::new(random_matrix(&mut rng, 2, 2)).unwrap(),
        };
        assert!(PLRepresentation::new(vec![t], PairingMap::RowMajor).is_err());
    }
}
