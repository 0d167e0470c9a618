//! Quantizations: norms on the amplifications `H_d ⊗ E` making the left
//! module action contractive, together with exact or bracketed evaluation.

mod base;
pub mod json;
mod minimal;
mod projective;
mod semi_ruan;

use std::fmt;

use nalgebra::{DMatrix, DVector};

pub use base::{BaseNorm, Exponent, Field};
pub use projective::ProjectiveDecomposition;
pub use semi_ruan::{is_semi_ruan_witness_search, SemiRuanWitness};

use crate::element::AmplifiedElement;
use crate::error::{Error, Result};
use crate::hilbert::{op_norm, C64, ZERO};

/// Value of a norm evaluation. When `exact` is false, `value` is a certified
/// upper bound and `lower` a certified lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub lower: f64,
    pub exact: bool,
    pub method: String,
}

impl NormValue {
    pub fn exact(value: f64, method: impl Into<String>) -> Self {
        NormValue {
            value,
            lower: value,
            exact: true,
            method: method.into(),
        }
    }

    pub fn bracket(lower: f64, upper: f64, method: impl Into<String>) -> Self {
        let lower = lower.min(upper);
        NormValue {
            value: upper,
            lower,
            exact: false,
            method: method.into(),
        }
    }

    pub fn upper(&self) -> f64 {
        self.value
    }

    pub fn gap(&self) -> f64 {
        self.value - self.lower
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{} ({})", self.value, self.method)
        } else {
            write!(f, "[{}, {}] ({})", self.lower, self.value, self.method)
        }
    }
}

/// Knobs for the iterative evaluators. Results are a pure function of these
/// options and the inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Largest base dimension for which real sign vectors are enumerated.
    pub sign_enum_limit: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            starts: 8,
            iterations: 100,
            seed: 0x5eed,
            sign_enum_limit: 16,
        }
    }
}

/// A PL-quantization of a finite-dimensional base space.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantization {
    /// Injective norm of `H ⊗_i E`.
    Min { base: BaseNorm },
    /// Projective norm of `H ⊗_p E`.
    Max { base: BaseNorm },
    /// `L_p(X, F)` over a finite weighted point set `X`.
    Lp {
        p: Exponent,
        weights: Vec<f64>,
        inner: Box<Quantization>,
    },
    /// Hilbert norm after identifying `H ⊗ C^m` with `H ⊗_hil C^m`.
    Hilbert { dim: usize },
    /// Span of operators `K → L` normed through `γ(u) ∈ B(K, H ⊗ L)`.
    Concrete {
        k_dim: usize,
        l_dim: usize,
        generators: Vec<DMatrix<C64>>,
    },
    /// `E ⊗_p F` with `F` quantized, normed through `β : H(E⊗F) → E ⊗_p HF`.
    TensorP {
        base: BaseNorm,
        inner: Box<Quantization>,
    },
}

impl Quantization {
    pub fn scalar() -> Self {
        Quantization::Hilbert { dim: 1 }
    }

    pub fn hilbert(dim: usize) -> Self {
        assert!(dim > 0);
        Quantization::Hilbert { dim }
    }

    pub fn min(base: BaseNorm) -> Self {
        Quantization::Min { base }
    }

    pub fn max(base: BaseNorm) -> Result<Self> {
        let q = Quantization::Max { base };
        q.validate()?;
        Ok(q)
    }

    pub fn lp(p: f64, weights: Vec<f64>, inner: Quantization) -> Result<Self> {
        let q = Quantization::Lp {
            p: Exponent::new(p)?,
            weights,
            inner: Box::new(inner),
        };
        q.validate()?;
        Ok(q)
    }

    /// `L_p` over `points` atoms of unit mass with scalar values.
    pub fn lp_scalar(p: f64, points: usize) -> Result<Self> {
        Self::lp(p, vec![1.0; points], Quantization::scalar())
    }

    pub fn concrete(k_dim: usize, l_dim: usize, generators: Vec<DMatrix<C64>>) -> Result<Self> {
        let q = Quantization::Concrete {
            k_dim,
            l_dim,
            generators,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn tensor_p(base: BaseNorm, inner: Quantization) -> Result<Self> {
        let q = Quantization::TensorP {
            base,
            inner: Box::new(inner),
        };
        q.validate()?;
        Ok(q)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Quantization::Min { .. } => "min",
            Quantization::Max { .. } => "max",
            Quantization::Lp { .. } => "lp",
            Quantization::Hilbert { .. } => "hilbert",
            Quantization::Concrete { .. } => "concrete",
            Quantization::TensorP { .. } => "tensor_p",
        }
    }

    /// Dimension `m` of the base space.
    pub fn dim(&self) -> usize {
        match self {
            Quantization::Min { base } | Quantization::Max { base } => base.dim(),
            Quantization::Lp { weights, inner, .. } => weights.len() * inner.dim(),
            Quantization::Hilbert { dim } => *dim,
            Quantization::Concrete { generators, .. } => generators.len(),
            Quantization::TensorP { base, inner } => base.dim() * inner.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Quantization::Min { base } => validate_base(base),
            Quantization::Max { base } | Quantization::TensorP { base, .. } => {
                validate_base(base)?;
                if base.field() == Field::Real {
                    return Err(Error::InvalidParameter(
                        "the real field is supported for minimal quantizations only".into(),
                    ));
                }
                if let Quantization::TensorP { inner, .. } = self {
                    inner.validate()?;
                }
                Ok(())
            }
            Quantization::Lp { weights, inner, .. } => {
                if weights.is_empty() {
                    return Err(Error::InvalidParameter(
                        "L_p needs at least one point".into(),
                    ));
                }
                if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                    return Err(Error::InvalidParameter(format!(
                        "L_p point masses must be positive and finite, got {w}"
                    )));
                }
                inner.validate()
            }
            Quantization::Hilbert { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidParameter(
                        "Hilbert dimension must be positive".into(),
                    ));
                }
                Ok(())
            }
            Quantization::Concrete {
                k_dim,
                l_dim,
                generators,
            } => {
                if *k_dim == 0 || *l_dim == 0 || generators.is_empty() {
                    return Err(Error::InvalidParameter(
                        "concrete quantization needs positive K, L dimensions and generators"
                            .into(),
                    ));
                }
                for g in generators {
                    if g.nrows() != *l_dim || g.ncols() != *k_dim {
                        return Err(Error::InvalidParameter(format!(
                            "generator is {}×{}, expected {}×{} (L × K)",
                            g.nrows(),
                            g.ncols(),
                            l_dim,
                            k_dim
                        )));
                    }
                }
                let stacked = DMatrix::from_fn(k_dim * l_dim, generators.len(), |r, c| {
                    generators[c][(r % l_dim, r / l_dim)]
                });
                let sv = stacked.singular_values();
                let top = sv.max();
                if top == 0.0 || sv.min() < 1e-10 * top || generators.len() > k_dim * l_dim {
                    return Err(Error::InvalidParameter(
                        "concrete generators are linearly dependent".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn check_element(&self, u: &AmplifiedElement) -> Result<()> {
        if u.m() != self.dim() {
            return Err(Error::dims(
                "quantization base dimension",
                self.dim(),
                u.m(),
            ));
        }
        Ok(())
    }

    pub fn amp_norm(&self, u: &AmplifiedElement) -> Result<NormValue> {
        self.amp_norm_with(u, &EvalOptions::default())
    }

    pub fn amp_norm_with(&self, u: &AmplifiedElement, opts: &EvalOptions) -> Result<NormValue> {
        self.check_element(u)?;
        Ok(self.eval(u, opts))
    }

    pub(crate) fn eval(&self, u: &AmplifiedElement, opts: &EvalOptions) -> NormValue {
        match self {
            Quantization::Min { base } => minimal::min_amp_norm(base, u.coeffs(), opts),
            Quantization::Max { base } => {
                projective::projective(base, u, &Quantization::scalar(), opts).0
            }
            Quantization::TensorP { base, inner } => projective::projective(base, u, inner, opts).0,
            Quantization::Lp { p, weights, inner } => {
                let mf = inner.dim();
                let mut exact = true;
                let mut lows = Vec::with_capacity(weights.len());
                let mut ups = Vec::with_capacity(weights.len());
                for (t, w) in weights.iter().enumerate() {
                    let nv = inner.eval(&u.column_block(t * mf, mf), opts);
                    exact &= nv.exact;
                    let s = w.powf(p.reciprocal());
                    lows.push(s * nv.lower);
                    ups.push(s * nv.value);
                }
                if exact {
                    NormValue::exact(p.combine(ups), "lp:pointwise")
                } else {
                    NormValue::bracket(p.combine(lows), p.combine(ups), "lp:pointwise")
                }
            }
            Quantization::Hilbert { .. } => NormValue::exact(u.frobenius(), "hilbert:frobenius"),
            Quantization::Concrete {
                k_dim,
                l_dim,
                generators,
            } => NormValue::exact(
                op_norm(&gamma(u.coeffs(), *k_dim, *l_dim, generators)),
                "concrete:gamma-svd",
            ),
        }
    }

    /// Norm of the underlying space: `‖x‖ = ‖ξx‖` for a unit `ξ`.
    /// For MAX and TENSOR_P, the projective bracket of `u` together with the
    /// decomposition `u = Σ_k x_k ⊗ w_k` whose cost is its upper end.
    pub fn projective_decomposition(
        &self,
        u: &AmplifiedElement,
        opts: &EvalOptions,
    ) -> Result<Option<(NormValue, ProjectiveDecomposition)>> {
        if u.m() != self.dim() {
            return Err(Error::dims("element base dimension", self.dim(), u.m()));
        }
        Ok(match self {
            Quantization::Max { base } => Some(projective::projective(
                base,
                u,
                &Quantization::scalar(),
                opts,
            )),
            Quantization::TensorP { base, inner } => {
                Some(projective::projective(base, u, inner, opts))
            }
            _ => None,
        })
    }

    pub fn underlying_norm(&self, x: &[C64]) -> Result<f64> {
        Ok(self.underlying_norm_value(x)?.value)
    }

    pub fn underlying_norm_value(&self, x: &[C64]) -> Result<NormValue> {
        if x.len() != self.dim() {
            return Err(Error::dims("underlying norm", self.dim(), x.len()));
        }
        Ok(self.eval(
            &AmplifiedElement::from_base_vector(x)?,
            &EvalOptions::default(),
        ))
    }

    /// Weights `ω` such that `‖U‖ = ‖U diag(√ω)‖_F`, when the quantization is Hilbertian.
    pub fn hilbert_weights(&self) -> Option<Vec<f64>> {
        match self {
            Quantization::Hilbert { dim } => Some(vec![1.0; *dim]),
            Quantization::Lp { p, weights, inner } if p.is_two() => {
                let iw = inner.hilbert_weights()?;
                Some(
                    weights
                        .iter()
                        .flat_map(|mu| iw.iter().map(move |w| mu * w))
                        .collect(),
                )
            }
            q if q.dim() == 1 => {
                // every quantization of a one-dimensional space is Hilbertian
                let n = q.underlying_norm(&[C64::new(1.0, 0.0)]).ok()?;
                Some(vec![n * n])
            }
            _ => None,
        }
    }

    /// True when the norm is known to satisfy the semi-Ruan inequality.
    pub fn is_known_l_space(&self) -> bool {
        match self {
            Quantization::Hilbert { .. }
            | Quantization::Min { .. }
            | Quantization::Concrete { .. } => true,
            Quantization::Lp { p, inner, weights } => {
                (weights.len() == 1 || p.as_f64() >= 2.0) && inner.is_known_l_space()
            }
            q => q.dim() == 1,
        }
    }

    /// Certified `(lower, upper)` bounds on the dual norm of a functional on
    /// the underlying space.
    pub fn dual_norm_bounds(&self, f: &DVector<C64>) -> (f64, f64) {
        debug_assert_eq!(f.len(), self.dim());
        match self {
            Quantization::Hilbert { .. } => {
                let n = f.norm();
                (n, n)
            }
            Quantization::Min { base } | Quantization::Max { base } => base.dual_norm_bounds(f),
            Quantization::Lp { p, weights, inner } => {
                let mf = inner.dim();
                let q = p.conjugate();
                let mut lows = Vec::new();
                let mut ups = Vec::new();
                for (t, w) in weights.iter().enumerate() {
                    let block = f.rows(t * mf, mf).into_owned();
                    let (lo, hi) = inner.dual_norm_bounds(&block);
                    let s = w.powf(p.reciprocal());
                    lows.push(lo / s);
                    ups.push(hi / s);
                }
                (q.combine(lows), q.combine(ups))
            }
            Quantization::Concrete {
                k_dim,
                l_dim,
                generators,
            } => concrete_dual_bounds(self, *k_dim, *l_dim, generators, f),
            Quantization::TensorP { base, inner } => {
                let mf = inner.dim();
                let me = base.dim();
                let rows: Vec<(f64, f64)> = (0..me)
                    .map(|i| inner.dual_norm_bounds(&f.rows(i * mf, mf).into_owned()))
                    .collect();
                let mut lower: f64 = 0.0;
                let mut coord_upper = 0.0;
                for (i, (lo, hi)) in rows.iter().enumerate() {
                    let mut e = vec![ZERO; me];
                    e[i] = C64::new(1.0, 0.0);
                    lower = lower.max(lo / base.norm(&e));
                    let mut ei = DVector::from_element(me, ZERO);
                    ei[i] = C64::new(1.0, 0.0);
                    coord_upper += hi * base.dual_norm_bounds(&ei).1;
                }
                let mut upper: f64 = coord_upper;
                if let (Some(om), Some(dual)) =
                    (inner.hilbert_weights(), projective::dual_base(base))
                {
                    // sup over the unit ball of E of the Hilbertian dual norm of Σ x_i Φ_i
                    let phi_t = DMatrix::from_fn(mf, me, |q, i| f[i * mf + q] / om[q].sqrt());
                    let opts = EvalOptions::default();
                    upper = upper.min(minimal::min_amp_norm(&dual, &phi_t, &opts).value);
                }
                if let Some((p, s)) = base.scales().filter(|_| base.is_l1_type()) {
                    debug_assert!(p.is_one());
                    upper = upper.min(
                        rows.iter()
                            .zip(&s)
                            .map(|((_, hi), si)| hi / si)
                            .fold(0.0, f64::max),
                    );
                }
                (lower.min(upper), upper)
            }
        }
    }

    /// A functional of dual norm at most one that nearly norms `y`.
    pub fn norming_functional(&self, y: &DVector<C64>) -> DVector<C64> {
        let f = match self {
            Quantization::Hilbert { .. } => {
                let n = y.norm();
                if n == 0.0 {
                    unit_functional(y.len())
                } else {
                    y.map(|z| z.conj()) / C64::new(n, 0.0)
                }
            }
            Quantization::Min { base } | Quantization::Max { base } => base.norming_functional(y),
            Quantization::Lp { p, weights, inner } => {
                let mf = inner.dim();
                let blocks: Vec<DVector<C64>> = (0..weights.len())
                    .map(|t| y.rows(t * mf, mf).into_owned())
                    .collect();
                let norms: Vec<f64> = blocks
                    .iter()
                    .map(|b| inner.underlying_norm(b.as_slice()).unwrap_or(0.0))
                    .collect();
                let scaled: Vec<f64> = norms
                    .iter()
                    .zip(weights)
                    .map(|(n, w)| n * w.powf(p.reciprocal()))
                    .collect();
                let total = p.combine(scaled.iter().cloned());
                let mut f = DVector::from_element(y.len(), ZERO);
                if total > 0.0 {
                    let coef = base::lp_norming_unweighted(
                        *p,
                        &scaled.iter().map(|v| C64::new(*v, 0.0)).collect::<Vec<_>>(),
                    );
                    for (t, b) in blocks.iter().enumerate() {
                        if coef[t].norm() == 0.0 || norms[t] == 0.0 {
                            continue;
                        }
                        let g = inner.norming_functional(b);
                        let s = weights[t].powf(p.reciprocal());
                        f.rows_mut(t * mf, mf).copy_from(&(g * (coef[t] * s)));
                    }
                    f
                } else {
                    unit_functional(y.len())
                }
            }
            Quantization::Concrete { generators, .. } => {
                let a = generators.iter().zip(y.iter()).fold(
                    DMatrix::from_element(generators[0].nrows(), generators[0].ncols(), ZERO),
                    |acc, (g, c)| acc + g * *c,
                );
                let svd = a.svd(true, true);
                let (k, _) =
                    svd.singular_values
                        .iter()
                        .enumerate()
                        .fold(
                            (0, -1.0),
                            |acc, (i, s)| if *s > acc.1 { (i, *s) } else { acc },
                        );
                let left = svd.u.as_ref().expect("u").column(k).into_owned();
                let right = svd.v_t.as_ref().expect("v_t").row(k).adjoint();
                DVector::from_iterator(
                    generators.len(),
                    generators
                        .iter()
                        .map(|g| (left.adjoint() * g * &right)[(0, 0)]),
                )
            }
            Quantization::TensorP { base, inner } => tensor_norming(self, base, inner, y),
        };
        let (_, hi) = self.dual_norm_bounds(&f);
        if hi > 1.0 {
            f / C64::new(hi, 0.0)
        } else {
            f
        }
    }
}

/// Norming functionals on `E ⊗_p F`: exact slice-wise for ℓ1 bases,
/// otherwise the best of `conj(y)` and alternating rank-one functionals `g ⊗ ψ`.
fn tensor_norming(
    q: &Quantization,
    base: &BaseNorm,
    inner: &Quantization,
    y: &DVector<C64>,
) -> DVector<C64> {
    let me = base.dim();
    let mf = inner.dim();
    let slice = |i: usize| y.rows(i * mf, mf).into_owned();
    if let Some((_, s)) = base.scales().filter(|_| base.is_l1_type()) {
        let mut f = DVector::from_element(y.len(), ZERO);
        for i in 0..me {
            let g = inner.norming_functional(&slice(i)) * C64::new(s[i], 0.0);
            f.rows_mut(i * mf, mf).copy_from(&g);
        }
        return f;
    }
    let normalize = |f: DVector<C64>| {
        let (_, hi) = q.dual_norm_bounds(&f);
        if hi > 0.0 {
            Some(f / C64::new(hi, 0.0))
        } else {
            None
        }
    };
    let mut candidates: Vec<DVector<C64>> = normalize(y.map(|z| z.conj())).into_iter().collect();
    for start in 0..me {
        let mut psi = inner.norming_functional(&slice(start));
        for _ in 0..20 {
            let a = DVector::from_fn(me, |i, _| psi.dot(&slice(i)));
            let g = base.norming_functional(&a);
            let mut comb = DVector::from_element(mf, ZERO);
            for i in 0..me {
                comb += slice(i) * g[i];
            }
            psi = inner.norming_functional(&comb);
            let f = DVector::from_fn(y.len(), |k, _| g[k / mf] * psi[k % mf]);
            if let Some(f) = normalize(f) {
                candidates.push(f);
            }
        }
    }
    candidates
        .into_iter()
        .max_by(|a, b| a.dot(y).norm().total_cmp(&b.dot(y).norm()))
        .unwrap_or_else(|| unit_functional(y.len()))
}

fn unit_functional(m: usize) -> DVector<C64> {
    let mut f = DVector::from_element(m, ZERO);
    f[0] = C64::new(1.0, 0.0);
    f
}

fn validate_base(base: &BaseNorm) -> Result<()> {
    match base {
        BaseNorm::Lp { p, weights, .. } => {
            BaseNorm::lp(p.as_f64(), weights.clone())?;
        }
        BaseNorm::Euclidean { dim, .. } => {
            if *dim == 0 {
                return Err(Error::InvalidParameter(
                    "euclidean dimension must be positive".into(),
                ));
            }
        }
        BaseNorm::Polytope { vertices, .. } => {
            BaseNorm::polytope(vertices.clone())?;
        }
    }
    Ok(())
}

/// `γ(u) : K → H ⊗ L`, `x ↦ Σ_j c_j ⊗ T_j x`, as a `(d·l) × k` matrix.
pub(crate) fn gamma(
    u: &DMatrix<C64>,
    k_dim: usize,
    l_dim: usize,
    generators: &[DMatrix<C64>],
) -> DMatrix<C64> {
    let d = u.nrows();
    let mut out = DMatrix::from_element(d * l_dim, k_dim, ZERO);
    for r in 0..d {
        let mut block = out.rows_mut(r * l_dim, l_dim);
        for (j, g) in generators.iter().enumerate() {
            let c = u[(r, j)];
            if c != ZERO {
                block += g * c;
            }
        }
    }
    out
}

/// Dual-norm bounds for functionals on a span of operators with the operator
/// norm. Writing `f(x) = tr(Φ* Σ x_j T_j)` gives `|f(x)| ≤ ‖Φ‖_1 ‖x‖`.
fn concrete_dual_bounds(
    q: &Quantization,
    _k: usize,
    _l: usize,
    generators: &[DMatrix<C64>],
    f: &DVector<C64>,
) -> (f64, f64) {
    let m = generators.len();
    if f.norm() == 0.0 {
        return (0.0, 0.0);
    }
    let gram = DMatrix::from_fn(m, m, |a, b| generators[a].dotc(&generators[b]));
    // tr(Φ* T_j) = f_j with Φ = Σ α_k T_k  ⇔  Gᵀ conj(α) = f
    let Some(inv) = gram.transpose().try_inverse() else {
        return (0.0, f64::INFINITY);
    };
    let alpha_conj = inv * f;
    let phi = generators.iter().zip(alpha_conj.iter()).fold(
        DMatrix::from_element(generators[0].nrows(), generators[0].ncols(), ZERO),
        |acc, (g, a)| acc + g * a.conj(),
    );
    let upper: f64 = phi.singular_values().iter().sum();
    let mut lower: f64 = 0.0;
    let mut candidates = vec![f.map(|z| z.conj()), alpha_conj.map(|z| z.conj())];
    for j in 0..m {
        let mut e = DVector::from_element(m, ZERO);
        e[j] = C64::new(1.0, 0.0);
        candidates.push(e);
    }
    for x in candidates {
        if let Ok(n) = q.underlying_norm(x.as_slice()) {
            if n > 0.0 {
                lower = lower.max(f.dot(&x).norm() / n);
            }
        }
    }
    (lower.min(upper), upper)
}

#[cfg(test)]
mod tests;
