//! L-contractive bilinear maps into exactly evaluable quantizations. For such
//! a map `r` with linearization `R`, `‖R_∞(U)‖ / bound` is a sound lower bound
//! of the pl-norm of `U`, and of the l-norm when the target is an L-space.

use nalgebra::DMatrix;

use crate::element::AmplifiedElement;
use crate::hilbert::{C64, ZERO};
use crate::maps::BilinearMap;
use crate::quant::{is_semi_ruan_witness_search, BaseNorm, EvalOptions, NormValue, Quantization};
use crate::rng::derive_seed;

#[derive(Debug, Clone)]
pub struct Certificate {
    pub id: String,
    /// Which known fact makes the map L-contractive.
    pub provenance: String,
    pub map: BilinearMap,
    /// Certified upper bound of `‖r‖_lb`.
    pub bound: f64,
    pub user_supplied: bool,
}

impl Certificate {
    fn builtin(id: impl Into<String>, provenance: &str, map: BilinearMap) -> Self {
        Certificate {
            id: id.into(),
            provenance: provenance.into(),
            map,
            bound: 1.0,
            user_supplied: false,
        }
    }

    /// Extension point: any bilinear map with a trusted bound. These are not
    /// checked and are labeled as user supplied in every report.
    pub fn user(
        id: impl Into<String>,
        provenance: impl Into<String>,
        map: BilinearMap,
        bound: f64,
    ) -> Self {
        Certificate {
            id: id.into(),
            provenance: provenance.into(),
            map,
            bound,
            user_supplied: true,
        }
    }

    pub fn target(&self) -> &Quantization {
        &self.map.target
    }

    /// `‖R_∞(U)‖_G` for `U ∈ H(E ⊗ F)`.
    pub fn image_norm(&self, u: &AmplifiedElement, opts: &EvalOptions) -> NormValue {
        let img = AmplifiedElement::from_matrix_unchecked(u.coeffs() * self.map.linearization());
        self.target().eval(&img, opts)
    }

    /// Certified lower bound contributed to the tensor norm of `U`.
    pub fn lower_bound(&self, u: &AmplifiedElement, opts: &EvalOptions) -> f64 {
        if self.bound <= 0.0 {
            return 0.0;
        }
        self.image_norm(u, opts).lower / self.bound
    }
}

/// `n` when `q` is the Hilbert quantization of `ℓ2^n`, in either spelling.
fn hilbert_space_dim(q: &Quantization) -> Option<usize> {
    match q {
        Quantization::Hilbert { dim } => Some(*dim),
        Quantization::Lp { p, weights, inner }
            if p.is_two()
                && weights.iter().all(|w| *w == 1.0)
                && matches!(**inner, Quantization::Hilbert { dim: 1 }) =>
        {
            Some(weights.len())
        }
        _ => None,
    }
}

/// Weights `w` when `q` is the minimal quantization of a weighted ℓ2 space.
fn min_hilbert_weights(q: &Quantization) -> Option<Vec<f64>> {
    match q {
        Quantization::Min {
            base: BaseNorm::Euclidean { dim, .. },
        } => Some(vec![1.0; *dim]),
        Quantization::Min {
            base: b @ BaseNorm::Lp { weights, .. },
        } if b.is_l2_type() && b.field() == crate::quant::Field::Complex => Some(weights.clone()),
        _ => None,
    }
}

/// The base of `E = E_max` or of `E = L_1(X)` with scalar values, seen as an
/// ℓ1 space; these are the spaces whose pl-tensor products are projective.
fn max_type_base(q: &Quantization) -> Option<BaseNorm> {
    match q {
        Quantization::Max { base } => Some(base.clone()),
        Quantization::Lp { p, weights, inner }
            if p.is_one() && **inner == Quantization::scalar() =>
        {
            BaseNorm::lp(1.0, weights.clone()).ok()
        }
        _ => None,
    }
}

/// `(p, μ)` when `q` is `L_p(X, μ)` with scalar values.
fn scalar_lp(q: &Quantization) -> Option<(f64, Vec<f64>)> {
    match q {
        Quantization::Lp { p, weights, inner } if **inner == Quantization::scalar() => {
            Some((p.as_f64(), weights.clone()))
        }
        _ => None,
    }
}

fn unit(m: usize, i: usize) -> Vec<C64> {
    (0..m)
        .map(|j| if j == i { C64::new(1.0, 0.0) } else { ZERO })
        .collect()
}

/// Coordinate functional `e_i^*` scaled to dual norm at most one.
fn coordinate_functional(q: &Quantization, i: usize) -> Vec<C64> {
    let e = nalgebra::DVector::from_vec(unit(q.dim(), i));
    let (_, hi) = q.dual_norm_bounds(&e);
    e.iter().map(|z| z / hi.max(1e-300)).collect()
}

/// The fixed catalog of certificates applicable to the factor kinds.
pub fn builtin_certificates(e: &Quantization, f: &Quantization) -> Vec<Certificate> {
    let (me, mf) = (e.dim(), f.dim());
    let mut out = Vec::new();

    for i in 0..me {
        for j in 0..mf {
            let map = BilinearMap::functional_pair(
                &coordinate_functional(e, i),
                &coordinate_functional(f, j),
                e.clone(),
                f.clone(),
            )
            .expect("shapes agree");
            out.push(Certificate::builtin(
                format!("functional-pair:coord({i},{j})"),
                "products of bounded functionals are L-bounded with lb-norm the product of norms",
                map,
            ));
        }
    }

    if let (Some(n), Some(n2)) = (hilbert_space_dim(e), hilbert_space_dim(f)) {
        if n == n2 {
            let l1 = Quantization::lp_scalar(1.0, n).expect("valid");
            out.push(Certificate::builtin(
                "coordinatewise-into-l1",
                "coordinatewise multiplication ℓ2 × ℓ2 → L_1 is L-contractive",
                BilinearMap::coordinatewise(n, e.clone(), f.clone(), l1).expect("shapes agree"),
            ));
            out.push(Certificate::builtin(
                "coordinatewise-into-l2",
                "coordinatewise multiplication ℓ2 × ℓ2 → ℓ2 (Hilbert) is L-contractive",
                BilinearMap::coordinatewise(n, e.clone(), f.clone(), Quantization::hilbert(n))
                    .expect("shapes agree"),
            ));
        }
    }

    if let (Quantization::Hilbert { .. }, Quantization::Hilbert { .. }) = (e, f) {
        out.push(Certificate::builtin(
            "hilbert-tensor",
            "the Hilbert tensor product of Hilbert quantizations is a cross norm",
            BilinearMap::tensor_identity(e.clone(), f.clone(), Quantization::hilbert(me * mf))
                .expect("shapes agree"),
        ));
    }
    if let (Some(w), Some(w2)) = (min_hilbert_weights(e), min_hilbert_weights(f)) {
        let weights: Vec<f64> = w
            .iter()
            .flat_map(|a| w2.iter().map(move |b| a * b))
            .collect();
        let target = Quantization::min(BaseNorm::lp(2.0, weights).expect("positive weights"));
        out.push(Certificate::builtin(
            "hilbert-tensor-min",
            "the Hilbert tensor product of minimal Hilbert quantizations is L-contractive",
            BilinearMap::tensor_identity(e.clone(), f.clone(), target).expect("shapes agree"),
        ));
    }

    if let Some(base) = max_type_base(e) {
        if let Ok(target) = Quantization::tensor_p(base, f.clone()) {
            out.push(Certificate::builtin(
                "identity-into-tensor-p",
                "the canonical map E_max × F → E ⊗_p F is L-contractive",
                BilinearMap::tensor_identity(e.clone(), f.clone(), target).expect("shapes agree"),
            ));
        }
    }
    if let Some(base) = max_type_base(f) {
        if let Ok(target) = Quantization::tensor_p(base, e.clone()) {
            out.push(Certificate::builtin(
                "identity-into-tensor-p:flipped",
                "the canonical map E × F_max → F ⊗_p E is L-contractive",
                BilinearMap::tensor_flip(e.clone(), f.clone(), target).expect("shapes agree"),
            ));
        }
    }

    if let Some((p, mu)) = scalar_lp(e) {
        if let Ok(target) = Quantization::lp(p, mu, f.clone()) {
            let id = if p == 1.0 {
                "grothendieck"
            } else {
                "lp-embedding"
            };
            out.push(Certificate::builtin(
                id,
                "taking (z, x) to the function t ↦ z(t)x is an L-isometry L_p(X) × F → L_p(X, F)",
                BilinearMap::tensor_identity(e.clone(), f.clone(), target).expect("shapes agree"),
            ));
        }
    }
    if let Some((p, nu)) = scalar_lp(f) {
        if let Ok(target) = Quantization::lp(p, nu, e.clone()) {
            let id = if p == 1.0 {
                "grothendieck:flipped"
            } else {
                "lp-embedding:flipped"
            };
            out.push(Certificate::builtin(
                id,
                "taking (x, z) to the function t ↦ z(t)x is an L-isometry E × L_p(Y) → L_p(Y, E)",
                BilinearMap::tensor_flip(e.clone(), f.clone(), target).expect("shapes agree"),
            ));
        }
    }
    out
}

/// Functional pairs `f × g` adapted to `U` by alternating ascent: each side
/// is the norming functional of the best partial contraction.
pub fn norming_pair_certificates(
    e: &Quantization,
    f: &Quantization,
    u: &AmplifiedElement,
    opts: &EvalOptions,
) -> Vec<Certificate> {
    let (me, mf) = (e.dim(), f.dim());
    let d = u.d();
    let mut order: Vec<usize> = (0..me * mf).collect();
    order.sort_by(|a, b| {
        u.coeffs()
            .column(*b)
            .norm()
            .total_cmp(&u.coeffs().column(*a).norm())
            .then(a.cmp(b))
    });
    let mut out = Vec::new();
    for (rank, &col) in order.iter().take(3).enumerate() {
        if u.coeffs().column(col).norm() == 0.0 {
            break;
        }
        let mut g = nalgebra::DVector::from_vec(coordinate_functional(f, col % mf));
        let mut fe = nalgebra::DVector::from_vec(coordinate_functional(e, col / mf));
        for _ in 0..opts.iterations.clamp(1, 20) {
            // U(I ⊗ g): d × m_E
            let ug = DMatrix::from_fn(d, me, |r, i| {
                (0..mf).map(|j| u.coeffs()[(r, i * mf + j)] * g[j]).sum()
            });
            fe = e.norming_functional(&top_row_pairing(&ug));
            let uf = DMatrix::from_fn(d, mf, |r, j| {
                (0..me).map(|i| u.coeffs()[(r, i * mf + j)] * fe[i]).sum()
            });
            g = f.norming_functional(&top_row_pairing(&uf));
        }
        let map = BilinearMap::functional_pair(fe.as_slice(), g.as_slice(), e.clone(), f.clone())
            .expect("shapes agree");
        out.push(Certificate::builtin(
            format!("functional-pair:norming#{rank}"),
            "products of bounded functionals are L-bounded with lb-norm the product of norms",
            map,
        ));
    }
    out
}

/// `y_i = ⟨A_i, ξ⟩` for the top left singular vector `ξ` of `A`.
fn top_row_pairing(a: &DMatrix<C64>) -> nalgebra::DVector<C64> {
    let svd = a.clone().svd(true, false);
    let k = svd.singular_values.imax();
    let xi = svd.u.expect("u").column(k).into_owned();
    nalgebra::DVector::from_fn(a.ncols(), |i, _| xi.dotc(&a.column(i)))
}

/// Whether a certificate target may contribute to l-norm lower bounds: it
/// must be structurally known to be an L-space and survive a seeded search
/// for semi-Ruan violations.
pub fn admits_l(target: &Quantization, seed: u64) -> bool {
    target.is_known_l_space()
        && is_semi_ruan_witness_search(target, 32, derive_seed(seed, 0x6c)).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::PairingMap;
    use crate::maps::amplify_bilinear;
    use crate::rng::{random_matrix, stream};

    fn ids(e: &Quantization, f: &Quantization) -> Vec<String> {
        builtin_certificates(e, f)
            .into_iter()
            .map(|c| c.id)
            .collect()
    }

    #[test]
    fn catalog_selection() {
        let h = Quantization::hilbert(2);
        let ids_h = ids(&h, &h);
        assert!(ids_h.iter().any(|i| i == "coordinatewise-into-l1"));
        assert!(ids_h.iter().any(|i| i == "coordinatewise-into-l2"));
        let mx = Quantization::max(BaseNorm::linf(2)).unwrap();
        assert!(ids(&mx, &h).iter().any(|i| i == "identity-into-tensor-p"));
        let l1 = Quantization::lp_scalar(1.0, 3).unwrap();
        let got = ids(&l1, &Quantization::min(BaseNorm::euclidean(2)));
        assert!(got.iter().any(|i| i == "grothendieck"));
        assert!(!got.iter().any(|i| i == "coordinatewise-into-l1"));
    }

    #[test]
    fn catalog_is_contractive_on_samples() {
        let mut rng = stream(8, 0);
        let opts = EvalOptions::default();
        let pairs = vec![
            (Quantization::hilbert(2), Quantization::hilbert(2)),
            (
                Quantization::lp_scalar(1.0, 2).unwrap(),
                Quantization::min(BaseNorm::euclidean(2)),
            ),
            (
                Quantization::max(BaseNorm::euclidean(2)).unwrap(),
                Quantization::hilbert(2),
            ),
        ];
        for (e, f) in pairs {
            for cert in builtin_certificates(&e, &f) {
                for _ in 0..5 {
                    let u = AmplifiedElement::new(random_matrix(&mut rng, 2, e.dim())).unwrap();
                    let v = AmplifiedElement::new(random_matrix(&mut rng, 2, f.dim())).unwrap();
                    let img = amplify_bilinear(&cert.map, &u, &v, PairingMap::RowMajor).unwrap();
                    let lhs = cert.target().eval(&img, &opts).lower;
                    let rhs = e.eval(&u, &opts).value * f.eval(&v, &opts).value;
                    assert!(lhs <= cert.bound * rhs + 1e-9, "{}", cert.id);
                }
            }
        }
    }

    #[test]
    fn l_admission() {
        assert!(admits_l(&Quantization::hilbert(3), 1));
        assert!(!admits_l(&Quantization::lp_scalar(1.0, 2).unwrap(), 1));
        assert!(admits_l(&Quantization::lp_scalar(2.0, 2).unwrap(), 1));
    }
}
