//! The injective norm `‖U‖_min = sup{‖U f‖ : f ∈ Ball(E*)}`.

use nalgebra::{DMatrix, DVector, Dyn, SVD};

use super::base::{fast_abs, lp_norming_unweighted, BaseNorm, Exponent, Field};
use super::{EvalOptions, NormValue};
use crate::hilbert::{op_norm, C64, ZERO};
use crate::rng::{derive_seed, random_unit, stream};

pub(crate) fn min_amp_norm(base: &BaseNorm, u: &DMatrix<C64>, opts: &EvalOptions) -> NormValue {
    let real = base.field() == Field::Real;
    if let BaseNorm::Polytope { vertices, .. } = base {
        // the dual ball is the absolutely convex hull of the vertices
        let v = vertices.iter().map(|f| (u * f).norm()).fold(0.0, f64::max);
        return NormValue::exact(v, "min:vertex-max");
    }
    if u.nrows() == 1 && !real {
        // a single row is a vector of E itself
        let x: Vec<C64> = u.iter().copied().collect();
        return NormValue::exact(base.norm(&x), "min:row");
    }
    let (p, s) = base.scales().expect("ℓp-type base");
    let mut a = u.clone();
    for (j, sj) in s.iter().enumerate() {
        a.column_mut(j).scale_mut(*sj);
    }
    if real {
        a = realify(&a);
    }
    match p {
        Exponent::Infinity => {
            let v = (0..a.ncols())
                .map(|j| a.column(j).norm())
                .fold(0.0, f64::max);
            NormValue::exact(v, "min:column-max")
        }
        p if p.is_two() => NormValue::exact(op_norm(&a), "min:svd"),
        p if p.is_one() && real && a.ncols() <= opts.sign_enum_limit => {
            NormValue::exact(sign_enumeration(&a), "min:sign-enumeration")
        }
        p => {
            let svd = a.clone().svd(true, false);
            let lower = ascent(&a, &svd, p, real, opts);
            let m = a.ncols() as f64;
            let cols = p.combine((0..a.ncols()).map(|j| a.column(j).norm()));
            let factor = m.powf((p.reciprocal() - 0.5).max(0.0));
            let top = svd.singular_values.max();
            let upper = cols.min(factor * top).max(lower);
            NormValue::bracket(lower, upper, "min:phase-ascent")
        }
    }
}

fn dual_norm(q: Exponent, g: &[C64]) -> f64 {
    match q {
        Exponent::Infinity => g.iter().map(|z| fast_abs(*z)).fold(0.0, f64::max),
        Exponent::Finite(1.0) => g.iter().map(|z| fast_abs(*z)).sum(),
        Exponent::Finite(q) => g
            .iter()
            .map(|z| fast_abs(*z).powf(q))
            .sum::<f64>()
            .powf(1.0 / q),
    }
}

/// `[Re A; Im A]`: over the real field, `‖A g‖ = ‖[Re A; Im A] g‖` for real `g`.
fn realify(a: &DMatrix<C64>) -> DMatrix<C64> {
    let d = a.nrows();
    DMatrix::from_fn(2 * d, a.ncols(), |r, c| {
        if r < d {
            C64::new(a[(r, c)].re, 0.0)
        } else {
            C64::new(a[(r - d, c)].im, 0.0)
        }
    })
}

/// `max ‖A g‖` over sign vectors `g`, i.e. the vertices of the real ℓ∞ ball.
fn sign_enumeration(a: &DMatrix<C64>) -> f64 {
    let m = a.ncols();
    let mut w: DVector<C64> = a.column_sum();
    let mut signs = vec![1.0; m];
    let mut best = w.norm();
    // Gray code over the last m-1 signs; g and -g give the same norm
    for k in 1u64..(1u64 << (m - 1)) {
        let j = k.trailing_zeros() as usize + 1;
        signs[j] = -signs[j];
        w += a.column(j) * C64::new(2.0 * signs[j], 0.0);
        best = best.max(w.norm());
    }
    best
}

/// Alternating ascent for `sup{‖A g‖ : ‖g‖_q ≤ 1}`: a lower bound.
fn ascent(
    a: &DMatrix<C64>,
    svd: &SVD<C64, Dyn, Dyn>,
    p: Exponent,
    real: bool,
    opts: &EvalOptions,
) -> f64 {
    let (d, m) = a.shape();
    let q = p.conjugate();
    let mut starts: Vec<DVector<C64>> = Vec::new();
    if let Some(uu) = svd.u.as_ref() {
        let k = svd.singular_values.imax();
        starts.push(uu.column(k).into_owned());
    }
    for j in 0..m {
        let c = a.column(j).into_owned();
        let n = c.norm();
        if n > 0.0 {
            starts.push(c / C64::new(n, 0.0));
        }
    }
    let seed = derive_seed(opts.seed, 0x6d696e);
    for i in 0..opts.starts {
        let mut rng = stream(seed, i as u64);
        let mut x = random_unit(&mut rng, d);
        if real {
            x = x.map(|z| C64::new(z.re, 0.0));
            let n = x.norm();
            if n == 0.0 {
                continue;
            }
            x /= C64::new(n, 0.0);
        }
        starts.push(x);
    }
    // column-major storage; buffers reused across iterations
    let cols = a.as_slice();
    let mut y = vec![ZERO; m];
    let mut w = vec![ZERO; d];
    let mut best: f64 = 0.0;
    for xi in starts {
        let mut xi: Vec<C64> = xi.iter().copied().collect();
        let mut last = -1.0;
        for _ in 0..opts.iterations.max(1) {
            // y_j = ⟨a_j, ξ⟩ then g norms y for ℓp
            for (j, yj) in y.iter_mut().enumerate() {
                let col = &cols[j * d..(j + 1) * d];
                *yj = col.iter().zip(&xi).map(|(c, x)| x.conj() * c).sum();
            }
            let mut g = lp_norming_unweighted(p, &y);
            if real {
                g.iter_mut().for_each(|z| *z = C64::new(z.re, 0.0));
            }
            let gq = dual_norm(q, &g);
            if gq == 0.0 {
                break;
            }
            w.iter_mut().for_each(|z| *z = ZERO);
            for (j, gj) in g.iter().enumerate() {
                for (wr, c) in w.iter_mut().zip(&cols[j * d..(j + 1) * d]) {
                    *wr += c * gj;
                }
            }
            let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let val = n / gq;
            best = best.max(val);
            if n == 0.0 || val <= last * (1.0 + 1e-15) {
                break;
            }
            last = val;
            xi.iter_mut().zip(&w).for_each(|(x, wr)| *x = wr / n);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ZERO;
    use crate::rng::random_matrix;

    #[test]
    fn sign_enumeration_matches_brute_force() {
        let mut rng = stream(3, 0);
        let a = realify(&random_matrix(&mut rng, 2, 4));
        let mut brute: f64 = 0.0;
        for mask in 0..16u32 {
            let g = DVector::from_fn(4, |j, _| {
                C64::new(if mask >> j & 1 == 1 { -1.0 } else { 1.0 }, 0.0)
            });
            brute = brute.max((&a * g).norm());
        }
        assert!((sign_enumeration(&a) - brute).abs() < 1e-12);
    }

    #[test]
    fn ascent_stays_below_enumeration() {
        let mut rng = stream(5, 0);
        let a = realify(&random_matrix(&mut rng, 3, 5));
        let exact = sign_enumeration(&a);
        let low = ascent(
            &a,
            &a.clone().svd(true, false),
            Exponent::one(),
            true,
            &EvalOptions::default(),
        );
        assert!(low <= exact + 1e-12);
        assert!(low >= 0.95 * exact);
    }

    #[test]
    fn euclidean_and_linf_cases() {
        let u =
            DMatrix::from_row_slice(2, 2, &[C64::new(3.0, 0.0), ZERO, ZERO, C64::new(4.0, 0.0)]);
        let l2 = min_amp_norm(&BaseNorm::euclidean(2), &u, &EvalOptions::default());
        assert!(l2.exact && (l2.value - 4.0).abs() < 1e-12);
        let linf = min_amp_norm(&BaseNorm::linf(2), &u, &EvalOptions::default());
        assert!((linf.value - 4.0).abs() < 1e-12);
        // ‖U‖_min over ℓ1 is sup over ‖g‖_∞ ≤ 1 of ‖Ug‖ = 5
        let l1 = min_amp_norm(&BaseNorm::l1(2), &u, &EvalOptions::default());
        assert!(l1.lower <= 5.0 + 1e-12 && l1.value >= 5.0 - 1e-12);
        assert!((l1.lower - 5.0).abs() < 1e-9);
    }
}
