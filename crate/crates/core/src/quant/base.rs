//! Norms on the base space `E = C^m`: weighted ℓp, euclidean, and
//! polytope norms given by a finite symmetric vertex set of the dual ball.
//!
//! Functionals are coefficient vectors `f` acting by `f(x) = Σ f_j x_j`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hilbert::{C64, ZERO};

/// Scalar field of the dual ball. `Real` restricts functionals to real
/// coefficient vectors, which makes some dual balls finitely generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Field {
    #[default]
    Complex,
    Real,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Complex => "complex",
            Field::Real => "real",
        }
    }
}

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "exponent p = {p} is outside [1, ∞]"
            )));
        }
        Ok(if p.is_infinite() {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        })
    }

    pub fn one() -> Self {
        Exponent::Finite(1.0)
    }

    pub fn two() -> Self {
        Exponent::Finite(2.0)
    }

    pub fn is_one(self) -> bool {
        self == Exponent::Finite(1.0)
    }

    pub fn is_two(self) -> bool {
        self == Exponent::Finite(2.0)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `(Σ a_j^p)^{1/p}` of nonnegative values, rescaled to avoid overflow.
    pub fn combine<I: IntoIterator<Item = f64>>(self, values: I) -> f64 {
        let vals: Vec<f64> = values.into_iter().collect();
        let max = vals.iter().cloned().fold(0.0, f64::max);
        match self {
            Exponent::Infinity => max,
            Exponent::Finite(p) => {
                if max == 0.0 {
                    return 0.0;
                }
                if p == 1.0 {
                    return vals.iter().sum();
                }
                let s: f64 = vals.iter().map(|v| (v / max).powf(p)).sum();
                max * s.powf(1.0 / p)
            }
        }
    }
}

/// Norm on the base space.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseNorm {
    /// `‖x‖ = (Σ w_j |x_j|^p)^{1/p}`; for `p = ∞` the weights are ignored.
    Lp {
        p: Exponent,
        weights: Vec<f64>,
        field: Field,
    },
    Euclidean {
        dim: usize,
        field: Field,
    },
    /// `‖x‖ = max_i |f_i(x)|`; `vertices` are the dual-ball vertices `f_i`.
    Polytope {
        vertices: Vec<DVector<C64>>,
        field: Field,
    },
}

/// `|z|` without `hypot` unless the square could over- or underflow.
#[inline]
pub(crate) fn fast_abs(z: C64) -> f64 {
    let s = z.norm_sqr();
    if s.is_normal() && s < 1e300 {
        s.sqrt()
    } else {
        z.norm()
    }
}

fn phase(z: C64) -> C64 {
    let n = fast_abs(z);
    if n == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        z / n
    }
}

impl BaseNorm {
    pub fn lp(p: f64, weights: Vec<f64>) -> Result<Self> {
        let p = Exponent::new(p)?;
        if weights.is_empty() {
            return Err(Error::InvalidParameter(
                "ℓp base needs at least one weight".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "ℓp weights must be positive and finite, got {w}"
            )));
        }
        Ok(BaseNorm::Lp {
            p,
            weights,
            field: Field::Complex,
        })
    }

    pub fn l1(m: usize) -> Self {
        Self::lp(1.0, vec![1.0; m]).expect("unit weights are valid")
    }

    pub fn linf(m: usize) -> Self {
        Self::lp(f64::INFINITY, vec![1.0; m]).expect("unit weights are valid")
    }

    pub fn euclidean(dim: usize) -> Self {
        assert!(dim > 0);
        BaseNorm::Euclidean {
            dim,
            field: Field::Complex,
        }
    }

    pub fn polytope(vertices: Vec<DVector<C64>>) -> Result<Self> {
        let m = vertices.first().map(|v| v.len()).unwrap_or(0);
        if m == 0 {
            return Err(Error::InvalidParameter(
                "polytope needs at least one vertex".into(),
            ));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != m) {
            return Err(Error::dims("polytope vertex", m, v.len()));
        }
        for (i, v) in vertices.iter().enumerate() {
            let tol = 1e-9 * (1.0 + v.norm());
            if !vertices.iter().any(|w| (v + w).norm() <= tol) {
                return Err(Error::NonSymmetricPolytope(i));
            }
        }
        let mat = DMatrix::from_columns(&vertices);
        let sv = mat.singular_values();
        let top = sv.max();
        let rank = sv.iter().filter(|s| **s > 1e-10 * top.max(1e-300)).count();
        if rank < m {
            return Err(Error::InvalidParameter(format!(
                "polytope dual-ball vertices span rank {rank} < {m}; not a norm"
            )));
        }
        Ok(BaseNorm::Polytope {
            vertices,
            field: Field::Complex,
        })
    }

    pub fn with_field(mut self, f: Field) -> Self {
        match &mut self {
            BaseNorm::Lp { field, .. }
            | BaseNorm::Euclidean { field, .. }
            | BaseNorm::Polytope { field, .. } => *field = f,
        }
        self
    }

    pub fn dim(&self) -> usize {
        match self {
            BaseNorm::Lp { weights, .. } => weights.len(),
            BaseNorm::Euclidean { dim, .. } => *dim,
            BaseNorm::Polytope { vertices, .. } => vertices[0].len(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            BaseNorm::Lp { field, .. }
            | BaseNorm::Euclidean { field, .. }
            | BaseNorm::Polytope { field, .. } => *field,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BaseNorm::Lp { .. } => "lp",
            BaseNorm::Euclidean { .. } => "euclidean",
            BaseNorm::Polytope { .. } => "polytope",
        }
    }

    /// `(p, s)` with `‖x‖ = ‖(s_j x_j)‖_p`, for the ℓp-type bases.
    pub fn scales(&self) -> Option<(Exponent, Vec<f64>)> {
        match self {
            BaseNorm::Lp { p, weights, .. } => {
                let r = p.reciprocal();
                Some((*p, weights.iter().map(|w| w.powf(r)).collect()))
            }
            BaseNorm::Euclidean { dim, .. } => Some((Exponent::two(), vec![1.0; *dim])),
            BaseNorm::Polytope { .. } => None,
        }
    }

    pub fn is_l1_type(&self) -> bool {
        matches!(self, BaseNorm::Lp { p, .. } if p.is_one())
    }

    pub fn is_l2_type(&self) -> bool {
        match self {
            BaseNorm::Lp { p, .. } => p.is_two(),
            BaseNorm::Euclidean { .. } => true,
            BaseNorm::Polytope { .. } => false,
        }
    }

    pub fn norm(&self, x: &[C64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        match self {
            BaseNorm::Polytope { vertices, .. } => vertices
                .iter()
                .map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<C64>().norm())
                .fold(0.0, f64::max),
            _ => {
                let (p, s) = self.scales().expect("ℓp-type");
                p.combine(x.iter().zip(&s).map(|(xj, sj)| sj * xj.norm()))
            }
        }
    }

    /// Certified bounds `(lower, upper)` on the dual norm of the functional `f`.
    pub fn dual_norm_bounds(&self, f: &DVector<C64>) -> (f64, f64) {
        match self {
            BaseNorm::Polytope { vertices, .. } => polytope_dual_bounds(self, vertices, f),
            _ => {
                let (p, s) = self.scales().expect("ℓp-type");
                let v = p
                    .conjugate()
                    .combine(f.iter().zip(&s).map(|(fj, sj)| fj.norm() / sj));
                (v, v)
            }
        }
    }

    /// A functional `f` with dual norm at most one and `|f(y)|` close to `‖y‖`.
    pub fn norming_functional(&self, y: &DVector<C64>) -> DVector<C64> {
        let f =
            match (self, self.field()) {
                (BaseNorm::Polytope { vertices, .. }, field) => {
                    let (best, val) = vertices.iter().map(|f| f.dot(y)).enumerate().fold(
                        (0, ZERO),
                        |acc, (i, v)| if v.norm() > acc.1.norm() { (i, v) } else { acc },
                    );
                    match field {
                        Field::Complex => &vertices[best] * phase(val).conj(),
                        Field::Real => vertices[best].clone(),
                    }
                }
                (_, Field::Complex) => self.lp_norming(y),
                (_, Field::Real) => {
                    // best real part over a grid of global phases
                    let mut best = (f64::NEG_INFINITY, DVector::from_element(y.len(), ZERO));
                    for k in 0..32 {
                        let theta = std::f64::consts::PI * k as f64 / 32.0;
                        let rot = C64::from_polar(1.0, theta);
                        let re = y.map(|z| C64::new((z * rot).re, 0.0));
                        let val = self.norm(re.as_slice());
                        if val > best.0 {
                            best = (val, re);
                        }
                    }
                    self.lp_norming(&best.1)
                }
            };
        let (_, upper) = self.dual_norm_bounds(&f);
        if upper > 1.0 {
            f / C64::new(upper, 0.0)
        } else {
            f
        }
    }

    fn lp_norming(&self, y: &DVector<C64>) -> DVector<C64> {
        let (p, s) = self.scales().expect("ℓp-type");
        let z: Vec<C64> = y.iter().zip(&s).map(|(yj, sj)| yj * *sj).collect();
        let g = lp_norming_unweighted(p, &z);
        DVector::from_iterator(g.len(), g.iter().zip(&s).map(|(gj, sj)| gj * *sj))
    }
}

/// Norming functional of `z` for the unweighted ℓp norm: `Σ g_j z_j = ‖z‖_p`, `‖g‖_q = 1`.
pub(crate) fn lp_norming_unweighted(p: Exponent, z: &[C64]) -> Vec<C64> {
    let n = z.len();
    match p {
        Exponent::Infinity => {
            let k = (0..n)
                .max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm()))
                .unwrap_or(0);
            let mut g = vec![ZERO; n];
            g[k] = phase(z[k]).conj();
            g
        }
        Exponent::Finite(1.0) => z.iter().map(|zj| phase(*zj).conj()).collect(),
        Exponent::Finite(p) => {
            let total = Exponent::Finite(p).combine(z.iter().map(|v| v.norm()));
            if total == 0.0 {
                let mut g = vec![ZERO; n];
                g[0] = C64::new(1.0, 0.0);
                return g;
            }
            z.iter()
                .map(|zj| phase(*zj).conj() * (zj.norm() / total).powf(p - 1.0))
                .collect()
        }
    }
}

/// Dual norm of `f` for a polytope norm: the gauge of `f` in the absolutely
/// convex hull of the vertices, `min{Σ|λ_i| : Σ λ_i f_i = f}`. Any feasible
/// `λ` gives an upper bound; reweighted least squares improves it.
fn polytope_dual_bounds(
    base: &BaseNorm,
    vertices: &[DVector<C64>],
    f: &DVector<C64>,
) -> (f64, f64) {
    let fnorm = f.norm();
    if fnorm == 0.0 {
        return (0.0, 0.0);
    }
    let v = DMatrix::from_columns(vertices);
    let n = vertices.len();
    let mut weights = vec![1.0; n];
    let mut upper = f64::INFINITY;
    for _ in 0..40 {
        let w = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            weights.iter().map(|x| C64::new(*x, 0.0)),
        ));
        let gram = &v * &w * v.adjoint();
        let Some(inv) = gram.try_inverse() else { break };
        let lambda = &w * v.adjoint() * inv * f;
        let residual = (&v * &lambda - f).norm();
        if residual > 1e-11 * (1.0 + fnorm) {
            break;
        }
        // feasible up to the residual; absorb it through the coordinate expansion
        let val: f64 =
            lambda.iter().map(|l| l.norm()).sum::<f64>() + residual * coordinate_slack(&v);
        upper = upper.min(val);
        weights = lambda.iter().map(|l| l.norm() + 1e-12 * fnorm).collect();
    }
    if !upper.is_finite() {
        // pseudo-inverse fallback
        let pinv = v.clone().pseudo_inverse(1e-12).expect("pseudo-inverse");
        let lambda = pinv * f;
        upper = lambda.iter().map(|l| l.norm()).sum();
    }
    let mut lower: f64 = 0.0;
    let mut candidates: Vec<DVector<C64>> = vec![f.map(|z| z.conj())];
    for j in 0..f.len() {
        let mut e = DVector::from_element(f.len(), ZERO);
        e[j] = C64::new(1.0, 0.0);
        candidates.push(e);
    }
    for x in candidates {
        let nx = base.norm(x.as_slice());
        if nx > 0.0 {
            lower = lower.max(f.dot(&x).norm() / nx);
        }
    }
    (lower.min(upper), upper)
}

/// Upper bound on `max_j ‖e_j^*‖_*` through the pseudo-inverse, used to
/// absorb floating-point residuals in feasibility.
fn coordinate_slack(v: &DMatrix<C64>) -> f64 {
    let m = v.nrows();
    v.clone()
        .pseudo_inverse(1e-12)
        .map(|p| {
            (0..m)
                .map(|j| p.column(j).iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max)
        })
        .unwrap_or(1.0)
        * (m as f64).sqrt()
}
