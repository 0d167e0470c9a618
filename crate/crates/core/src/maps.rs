//! Linear and bilinear maps between quantized spaces, their amplifications
//! and sampled lower bounds for the L-bounded norm `‖φ‖_lb = ‖φ_∞‖`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::element::{diamond, AmplifiedElement};
use crate::error::{Error, Result};
use crate::hilbert::{op_norm, PairingMap, C64, ZERO};
use crate::quant::{EvalOptions, Quantization};
use crate::rng::{derive_seed, gaussian_c64, random_matrix, stream, LabRng};

/// `φ : E → F` given by an `m_in × m_out` matrix on base coefficients.
#[derive(Debug, Clone)]
pub struct LinearMap {
    matrix: DMatrix<C64>,
    pub source: Quantization,
    pub target: Quantization,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<C64>, source: Quantization, target: Quantization) -> Result<Self> {
        if matrix.nrows() != source.dim() {
            return Err(Error::dims(
                "linear map source",
                source.dim(),
                matrix.nrows(),
            ));
        }
        if matrix.ncols() != target.dim() {
            return Err(Error::dims(
                "linear map target",
                target.dim(),
                matrix.ncols(),
            ));
        }
        Ok(LinearMap {
            matrix,
            source,
            target,
        })
    }

    /// A functional `f(x) = Σ f_j x_j` into the scalars.
    pub fn functional(f: &[C64], source: Quantization) -> Result<Self> {
        Self::new(
            DMatrix::from_column_slice(f.len(), 1, f),
            source,
            Quantization::scalar(),
        )
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }
}

/// `φ_∞(U)`: coefficients `coeffs(U) · matrix(φ)`.
pub fn amplify_linear(phi: &LinearMap, u: &AmplifiedElement) -> Result<AmplifiedElement> {
    if u.m() != phi.matrix.nrows() {
        return Err(Error::dims(
            "linear amplification",
            phi.matrix.nrows(),
            u.m(),
        ));
    }
    Ok(AmplifiedElement::from_matrix_unchecked(
        u.coeffs() * &phi.matrix,
    ))
}

/// `r : E × F → G`, stored through its linearization: row `i·m_F + j` of
/// `rule` is `r(b_i, b'_j)` in the basis of `G`.
#[derive(Debug, Clone)]
pub struct BilinearMap {
    rule: DMatrix<C64>,
    pub left: Quantization,
    pub right: Quantization,
    pub target: Quantization,
}

impl BilinearMap {
    pub fn new(
        rule: DMatrix<C64>,
        left: Quantization,
        right: Quantization,
        target: Quantization,
    ) -> Result<Self> {
        let rows = left.dim() * right.dim();
        if rule.nrows() != rows {
            return Err(Error::dims("bilinear rule rows", rows, rule.nrows()));
        }
        if rule.ncols() != target.dim() {
            return Err(Error::dims(
                "bilinear rule columns",
                target.dim(),
                rule.ncols(),
            ));
        }
        Ok(BilinearMap {
            rule,
            left,
            right,
            target,
        })
    }

    /// `(f × g)(x, y) = f(x) g(y)`.
    pub fn functional_pair(
        f: &[C64],
        g: &[C64],
        left: Quantization,
        right: Quantization,
    ) -> Result<Self> {
        let rule = DMatrix::from_fn(f.len() * g.len(), 1, |r, _| f[r / g.len()] * g[r % g.len()]);
        Self::new(rule, left, right, Quantization::scalar())
    }

    /// `r(x, y) = (x_k y_k)_k` on a common index set of size `n`.
    pub fn coordinatewise(
        n: usize,
        left: Quantization,
        right: Quantization,
        target: Quantization,
    ) -> Result<Self> {
        let rule = DMatrix::from_fn(n * n, n, |r, k| {
            if r / n == k && r % n == k {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        Self::new(rule, left, right, target)
    }

    /// `r(x, y) = x ⊗ y` into a quantization of `E ⊗ F` with the same basis.
    pub fn tensor_identity(
        left: Quantization,
        right: Quantization,
        target: Quantization,
    ) -> Result<Self> {
        let n = left.dim() * right.dim();
        Self::new(DMatrix::identity(n, n), left, right, target)
    }

    /// `r(x, y) = y ⊗ x` into a quantization of `F ⊗ E`.
    pub fn tensor_flip(
        left: Quantization,
        right: Quantization,
        target: Quantization,
    ) -> Result<Self> {
        let (me, mf) = (left.dim(), right.dim());
        let rule = DMatrix::from_fn(me * mf, me * mf, |r, c| {
            if c == (r % mf) * me + r / mf {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        Self::new(rule, left, right, target)
    }

    /// The linearization `R` with `R_∞(U) = coeffs(U) · R`.
    pub fn linearization(&self) -> &DMatrix<C64> {
        &self.rule
    }

    pub fn evaluate(&self, x: &[C64], y: &[C64]) -> Result<DVector<C64>> {
        if x.len() != self.left.dim() || y.len() != self.right.dim() {
            return Err(Error::dims(
                "bilinear evaluation",
                self.left.dim() * self.right.dim(),
                x.len() * y.len(),
            ));
        }
        let xy = DVector::from_fn(x.len() * y.len(), |r, _| x[r / y.len()] * y[r % y.len()]);
        Ok(self.rule.transpose() * xy)
    }
}

/// `r_∞(u, v) = R_∞(u ⋄ v)`, determined by `r_∞(ξx, ηy) = (ξ ⋄ η) r(x, y)`.
pub fn amplify_bilinear(
    r: &BilinearMap,
    u: &AmplifiedElement,
    v: &AmplifiedElement,
    pairing: PairingMap,
) -> Result<AmplifiedElement> {
    if u.m() != r.left.dim() {
        return Err(Error::dims(
            "bilinear amplification (left)",
            r.left.dim(),
            u.m(),
        ));
    }
    if v.m() != r.right.dim() {
        return Err(Error::dims(
            "bilinear amplification (right)",
            r.right.dim(),
            v.m(),
        ));
    }
    Ok(AmplifiedElement::from_matrix_unchecked(
        diamond(u, v, pairing).coeffs() * &r.rule,
    ))
}

/// Either kind of map whose lb-norm can be estimated.
#[derive(Debug, Clone, Copy)]
pub enum LbTarget<'a> {
    Linear(&'a LinearMap),
    Bilinear(&'a BilinearMap),
}

impl<'a> From<&'a LinearMap> for LbTarget<'a> {
    fn from(m: &'a LinearMap) -> Self {
        LbTarget::Linear(m)
    }
}

impl<'a> From<&'a BilinearMap> for LbTarget<'a> {
    fn from(m: &'a BilinearMap) -> Self {
        LbTarget::Bilinear(m)
    }
}

#[derive(Debug, Clone)]
pub struct LbNormEstimate {
    pub lower: f64,
    pub exact: bool,
    /// Inputs achieving `lower` (one element for linear maps, two for bilinear).
    pub witness: Vec<AmplifiedElement>,
    /// Best certified ratio found at each truncation `d = 1, 2, …`.
    pub per_dimension: Vec<f64>,
}

const MAX_DIM: usize = 3;
const CLIMB_STEPS: usize = 50;

/// Lower bound for `‖φ‖_lb`. Exact for functionals into the scalars with an
/// exactly dualizable source, and for maps between Hilbert quantizations.
pub fn lb_norm_lower<'a>(map: impl Into<LbTarget<'a>>, budget: usize, seed: u64) -> LbNormEstimate {
    let map = map.into();
    if let LbTarget::Linear(phi) = map {
        if let Some(est) = closed_form(phi) {
            return est;
        }
    }
    lb_norm_sampled(map, budget, seed)
}

fn closed_form(phi: &LinearMap) -> Option<LbNormEstimate> {
    let m = phi.matrix.nrows();
    if phi.target.dim() == 1 {
        let c = phi.target.underlying_norm(&[C64::new(1.0, 0.0)]).ok()?;
        let f = phi.matrix.column(0).into_owned();
        let (lo, hi) = phi.source.dual_norm_bounds(&f);
        if hi - lo > 1e-12 * hi.max(1.0) {
            return None;
        }
        let x = best_vector(phi, candidate_vectors(&phi.matrix));
        return Some(LbNormEstimate {
            lower: c * lo,
            exact: true,
            witness: vec![x],
            per_dimension: vec![c * lo],
        });
    }
    if let (Quantization::Hilbert { .. }, Quantization::Hilbert { .. }) = (&phi.source, &phi.target)
    {
        let svd = phi.matrix.clone().svd(true, false);
        let k = svd.singular_values.imax();
        let uu = svd.u.expect("u");
        let x: Vec<C64> = (0..m).map(|j| uu[(j, k)].conj()).collect();
        let s = op_norm(&phi.matrix);
        return Some(LbNormEstimate {
            lower: s,
            exact: true,
            witness: vec![AmplifiedElement::from_base_vector(&x).ok()?],
            per_dimension: vec![s],
        });
    }
    None
}

fn candidate_vectors(m: &DMatrix<C64>) -> Vec<Vec<C64>> {
    let rows = m.nrows();
    let mut out: Vec<Vec<C64>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { C64::new(1.0, 0.0) } else { ZERO })
                .collect()
        })
        .collect();
    for k in 0..m.ncols() {
        let conj: Vec<C64> = m.column(k).iter().map(|z| z.conj()).collect();
        let phase: Vec<C64> = conj
            .iter()
            .map(|z| {
                if z.norm() > 0.0 {
                    z / z.norm()
                } else {
                    C64::new(1.0, 0.0)
                }
            })
            .collect();
        out.push(conj);
        out.push(phase);
    }
    out.retain(|x| x.iter().any(|z| *z != ZERO));
    out
}

fn best_vector(phi: &LinearMap, cands: Vec<Vec<C64>>) -> AmplifiedElement {
    let opts = EvalOptions::default();
    cands
        .into_iter()
        .filter_map(|x| AmplifiedElement::from_base_vector(&x).ok())
        .map(|u| (linear_ratio(phi, &u, &opts), u))
        .fold(
            None,
            |acc: Option<(f64, AmplifiedElement)>, (r, u)| match acc {
                Some((br, bu)) if br >= r => Some((br, bu)),
                _ => Some((r, u)),
            },
        )
        .map(|(_, u)| u)
        .expect("at least one candidate")
}

fn linear_ratio(phi: &LinearMap, u: &AmplifiedElement, opts: &EvalOptions) -> f64 {
    let den = phi.source.eval(u, opts).value;
    if den <= 0.0 {
        return 0.0;
    }
    let img = AmplifiedElement::from_matrix_unchecked(u.coeffs() * &phi.matrix);
    phi.target.eval(&img, opts).lower / den
}

fn bilinear_ratio(
    r: &BilinearMap,
    u: &AmplifiedElement,
    v: &AmplifiedElement,
    opts: &EvalOptions,
) -> f64 {
    let den = r.left.eval(u, opts).value * r.right.eval(v, opts).value;
    if den <= 0.0 {
        return 0.0;
    }
    let img = amplify_bilinear(r, u, v, PairingMap::RowMajor).expect("shapes checked");
    r.target.eval(&img, opts).lower / den
}

/// Sampled lower bound only: random and structured starts across `d = 1..3`,
/// each improved by 50 hill-climbing steps (alternating for bilinear maps).
pub fn lb_norm_sampled(map: LbTarget<'_>, budget: usize, seed: u64) -> LbNormEstimate {
    let budget = budget.max(1);
    let family = derive_seed(seed, 0x6c62);
    let per_dim = budget.div_ceil(MAX_DIM);
    let opts = EvalOptions {
        seed,
        ..EvalOptions::default()
    };
    let mut per_dimension = Vec::with_capacity(MAX_DIM);
    let mut best: Option<(f64, Vec<AmplifiedElement>)> = None;
    for d in 1..=MAX_DIM {
        let runs: Vec<(f64, Vec<AmplifiedElement>)> = (0..per_dim)
            .into_par_iter()
            .map(|s| {
                let mut rng = stream(family, (d * 1_000_000 + s) as u64);
                match map {
                    LbTarget::Linear(phi) => climb_linear(phi, d, s, &mut rng, &opts),
                    LbTarget::Bilinear(r) => climb_bilinear(r, d, s, &mut rng, &opts),
                }
            })
            .collect();
        let dim_best = runs
            .into_iter()
            .fold(
                None,
                |acc: Option<(f64, Vec<AmplifiedElement>)>, run| match acc {
                    Some(a) if a.0 >= run.0 => Some(a),
                    _ => Some(run),
                },
            )
            .expect("at least one start");
        // the sup over H contains every smaller truncation
        let carried = per_dimension
            .last()
            .copied()
            .unwrap_or(0.0f64)
            .max(dim_best.0);
        per_dimension.push(carried);
        if best.as_ref().is_none_or(|b| dim_best.0 > b.0) {
            best = Some(dim_best);
        }
    }
    let (lower, witness) = best.expect("nonempty");
    LbNormEstimate {
        lower,
        exact: false,
        witness,
        per_dimension,
    }
}

fn start_matrix(
    rng: &mut LabRng,
    d: usize,
    m: usize,
    s: usize,
    structured: &[Vec<C64>],
) -> DMatrix<C64> {
    if s < structured.len() {
        let x = &structured[s];
        let mut out = DMatrix::from_element(d, m, ZERO);
        for j in 0..m {
            out[(0, j)] = x[j];
        }
        if d > 1 {
            // a small random component on the other rows
            for r in 1..d {
                for j in 0..m {
                    out[(r, j)] = gaussian_c64(rng) * 0.1;
                }
            }
        }
        out
    } else {
        random_matrix(rng, d, m)
    }
}

/// One hill-climbing step on `x` with adaptive step size.
fn perturb(rng: &mut LabRng, x: &DMatrix<C64>, sigma: f64) -> DMatrix<C64> {
    let scale = sigma * x.norm().max(1e-12) / ((x.len() as f64).sqrt());
    x + random_matrix(rng, x.nrows(), x.ncols()) * C64::new(scale, 0.0)
}

fn climb_linear(
    phi: &LinearMap,
    d: usize,
    s: usize,
    rng: &mut LabRng,
    opts: &EvalOptions,
) -> (f64, Vec<AmplifiedElement>) {
    let structured = candidate_vectors(&phi.matrix);
    let mut x = start_matrix(rng, d, phi.matrix.nrows(), s, &structured);
    let mut best = linear_ratio(
        phi,
        &AmplifiedElement::from_matrix_unchecked(x.clone()),
        opts,
    );
    let mut sigma = 0.3;
    for _ in 0..CLIMB_STEPS {
        let cand = perturb(rng, &x, sigma);
        let r = linear_ratio(
            phi,
            &AmplifiedElement::from_matrix_unchecked(cand.clone()),
            opts,
        );
        if r > best {
            best = r;
            x = cand;
            sigma *= 1.5;
        } else {
            sigma *= 0.7;
        }
    }
    (best, vec![AmplifiedElement::from_matrix_unchecked(x)])
}

fn climb_bilinear(
    r: &BilinearMap,
    d: usize,
    s: usize,
    rng: &mut LabRng,
    opts: &EvalOptions,
) -> (f64, Vec<AmplifiedElement>) {
    let (me, mf) = (r.left.dim(), r.right.dim());
    let unit = |m: usize, k: usize| -> Vec<C64> {
        (0..m)
            .map(|j| if j == k % m { C64::new(1.0, 0.0) } else { ZERO })
            .collect()
    };
    let left_starts: Vec<Vec<C64>> = (0..me).map(|k| unit(me, k)).collect();
    let right_starts: Vec<Vec<C64>> = (0..mf).map(|k| unit(mf, k)).collect();
    let mut u = start_matrix(rng, d, me, s, &left_starts);
    let mut v = start_matrix(rng, d, mf, s, &right_starts);
    let el = |m: &DMatrix<C64>| AmplifiedElement::from_matrix_unchecked(m.clone());
    let mut best = bilinear_ratio(r, &el(&u), &el(&v), opts);
    let (mut su, mut sv) = (0.3, 0.3);
    let hilbertian = r.left.hilbert_weights().is_some()
        && r.right.hilbert_weights().is_some()
        && r.target.hilbert_weights().is_some();
    for step in 0..CLIMB_STEPS {
        let left_turn = step % 2 == 0;
        if hilbertian {
            // exact subproblem: top singular vector of the partial linear map
            let cand = if left_turn {
                (el(&hilbert_step(r, &v, d, true)), el(&v))
            } else {
                (el(&u), el(&hilbert_step(r, &u, d, false)))
            };
            let val = bilinear_ratio(r, &cand.0, &cand.1, opts);
            if val > best {
                best = val;
                u = cand.0.into_coeffs();
                v = cand.1.into_coeffs();
            }
            continue;
        }
        if left_turn {
            let cand = perturb(rng, &u, su);
            let val = bilinear_ratio(r, &el(&cand), &el(&v), opts);
            if val > best {
                best = val;
                u = cand;
                su *= 1.5;
            } else {
                su *= 0.7;
            }
        } else {
            let cand = perturb(rng, &v, sv);
            let val = bilinear_ratio(r, &el(&u), &el(&cand), opts);
            if val > best {
                best = val;
                v = cand;
                sv *= 1.5;
            } else {
                sv *= 0.7;
            }
        }
    }
    (best, vec![el(&u), el(&v)])
}

/// With one argument fixed, `w ↦ r_∞(w, fixed)` is linear; for Hilbertian
/// norms the best `w` is a top right singular vector in weighted coordinates.
fn hilbert_step(r: &BilinearMap, fixed: &DMatrix<C64>, d: usize, solve_left: bool) -> DMatrix<C64> {
    let (m_free, w_free) = if solve_left {
        (r.left.dim(), r.left.hilbert_weights().expect("hilbertian"))
    } else {
        (
            r.right.dim(),
            r.right.hilbert_weights().expect("hilbertian"),
        )
    };
    let wg = r.target.hilbert_weights().expect("hilbertian");
    let n_in = d * m_free;
    let fixed_el = AmplifiedElement::from_matrix_unchecked(fixed.clone());
    let mut cols = Vec::with_capacity(n_in);
    for idx in 0..n_in {
        let (row, j) = (idx % d, idx / d);
        let mut e = DMatrix::from_element(d, m_free, ZERO);
        e[(row, j)] = C64::new(1.0 / w_free[j].sqrt(), 0.0);
        let e = AmplifiedElement::from_matrix_unchecked(e);
        let img = if solve_left {
            amplify_bilinear(r, &e, &fixed_el, PairingMap::RowMajor)
        } else {
            amplify_bilinear(r, &fixed_el, &e, PairingMap::RowMajor)
        }
        .expect("shapes checked");
        let dd = img.d();
        cols.push(DVector::from_fn(img.coeffs().len(), |k, _| {
            img.coeffs()[(k % dd, k / dd)] * wg[k / dd].sqrt()
        }));
    }
    let mat = DMatrix::from_columns(&cols);
    let svd = mat.svd(false, true);
    let k = svd.singular_values.imax();
    let vt = svd.v_t.expect("v_t");
    DMatrix::from_fn(d, m_free, |row, j| {
        vt[(k, j * d + row)].conj() / w_free[j].sqrt()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::module_action;
    use crate::hilbert::{diamond_vec, GradedVector, OperatorBlock};
    use crate::quant::BaseNorm;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn identity_amplification_is_trivial() {
        let u = AmplifiedElement::new(random_matrix(&mut stream(1, 0), 2, 3)).unwrap();
        let id = LinearMap::new(
            DMatrix::identity(3, 3),
            Quantization::hilbert(3),
            Quantization::hilbert(3),
        )
        .unwrap();
        assert_eq!(amplify_linear(&id, &u).unwrap(), u);
    }

    #[test]
    fn amplification_commutes_with_module_action() {
        let mut rng = stream(2, 0);
        let phi = LinearMap::new(
            random_matrix(&mut rng, 3, 2),
            Quantization::hilbert(3),
            Quantization::hilbert(2),
        )
        .unwrap();
        let u = AmplifiedElement::new(random_matrix(&mut rng, 2, 3)).unwrap();
        let a = OperatorBlock::new(random_matrix(&mut rng, 4, 2)).unwrap();
        let lhs = amplify_linear(&phi, &module_action(&a, &u).unwrap()).unwrap();
        let rhs = module_action(&a, &amplify_linear(&phi, &u).unwrap()).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn scalar_multiplication_amplifies_to_diamond() {
        let xi = GradedVector::from_real(&[1.0, 2.0]).unwrap();
        let eta = GradedVector::new(vec![c(0.5), C64::new(0.0, 1.0), c(-1.0)]).unwrap();
        let r = BilinearMap::tensor_identity(
            Quantization::scalar(),
            Quantization::scalar(),
            Quantization::scalar(),
        )
        .unwrap();
        let u = AmplifiedElement::elementary(&xi, &[c(1.0)]).unwrap();
        let v = AmplifiedElement::elementary(&eta, &[c(1.0)]).unwrap();
        let got = amplify_bilinear(&r, &u, &v, PairingMap::ColumnMajor).unwrap();
        let want = diamond_vec(&xi, &eta, PairingMap::ColumnMajor);
        assert!((got.column(0).coeffs() - want.coeffs()).norm() < 1e-14);
    }

    #[test]
    fn functional_pair_amplifies_to_diamond_of_images() {
        let mut rng = stream(3, 0);
        let f = [c(1.0), c(-2.0)];
        let g = [C64::new(0.0, 1.0), c(0.5), c(1.0)];
        let e = Quantization::min(BaseNorm::l1(2));
        let fq = Quantization::hilbert(3);
        let r = BilinearMap::functional_pair(&f, &g, e.clone(), fq.clone()).unwrap();
        let u = AmplifiedElement::new(random_matrix(&mut rng, 2, 2)).unwrap();
        let v = AmplifiedElement::new(random_matrix(&mut rng, 2, 3)).unwrap();
        let fu = amplify_linear(&LinearMap::functional(&f, e).unwrap(), &u).unwrap();
        let gv = amplify_linear(&LinearMap::functional(&g, fq).unwrap(), &v).unwrap();
        let want = diamond(&fu, &gv, PairingMap::RowMajor);
        let got = amplify_bilinear(&r, &u, &v, PairingMap::RowMajor).unwrap();
        assert!(got.distance(&want).unwrap() < 1e-12);
    }

    #[test]
    fn functional_lb_norm_is_dual_norm() {
        let f =
            LinearMap::functional(&[c(1.0), c(-2.0)], Quantization::min(BaseNorm::l1(2))).unwrap();
        let est = lb_norm_lower(&f, 10, 0);
        assert!(est.exact && (est.lower - 2.0).abs() < 1e-12);
        let sampled = lb_norm_sampled((&f).into(), 60, 0);
        assert!(sampled.lower <= 2.0 + 1e-12 && sampled.lower >= 1.98);
    }

    #[test]
    fn functional_pair_lb_norm_approaches_product() {
        let f = [c(1.0), c(-2.0)];
        let g = [c(3.0), c(4.0)];
        let r = BilinearMap::functional_pair(
            &f,
            &g,
            Quantization::min(BaseNorm::l1(2)),
            Quantization::min(BaseNorm::euclidean(2)),
        )
        .unwrap();
        let est = lb_norm_lower(&r, 300, 1);
        assert!(
            est.lower <= 10.0 + 1e-9 && est.lower >= 9.9,
            "{}",
            est.lower
        );
        assert!(est.per_dimension[0] <= est.lower + 1e-15);
    }

    #[test]
    fn coordinatewise_rule_multiplies() {
        let m = BilinearMap::coordinatewise(
            2,
            Quantization::hilbert(2),
            Quantization::hilbert(2),
            Quantization::hilbert(2),
        )
        .unwrap();
        let out = m.evaluate(&[c(2.0), c(3.0)], &[c(5.0), c(7.0)]).unwrap();
        assert_eq!(out.as_slice(), &[c(10.0), c(21.0)]);
        let flip = BilinearMap::tensor_flip(
            Quantization::hilbert(2),
            Quantization::hilbert(3),
            Quantization::hilbert(6),
        )
        .unwrap();
        let out = flip
            .evaluate(&[c(1.0), c(2.0)], &[c(1.0), c(10.0), c(100.0)])
            .unwrap();
        assert_eq!(out[1], c(2.0));
        assert_eq!(out[2], c(10.0));
    }
}
