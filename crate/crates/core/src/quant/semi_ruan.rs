//! Randomized search for violations of the semi-Ruan inequality
//! `‖U + V‖² ≤ ‖U‖² + ‖V‖²` when `U`, `V` have orthogonal `H`-supports.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{EvalOptions, Quantization};
use crate::element::AmplifiedElement;
use crate::hilbert::{C64, ZERO};
use crate::rng::{derive_seed, index_below, random_matrix, stream};

#[derive(Debug, Clone)]
pub struct SemiRuanWitness {
    pub trial: usize,
    pub u: AmplifiedElement,
    pub v: AmplifiedElement,
    /// Certified lower bound of `‖U + V‖²`.
    pub lhs: f64,
    /// Certified upper bound of `‖U‖² + ‖V‖²`.
    pub rhs: f64,
}

/// Runs `trials` seeded trials and returns the first certified violation, if
/// any. The result does not depend on the thread count.
pub fn is_semi_ruan_witness_search(
    q: &Quantization,
    trials: usize,
    seed: u64,
) -> Option<SemiRuanWitness> {
    let m = q.dim();
    let family = derive_seed(seed, 0x7275616e);
    let opts = EvalOptions {
        seed,
        ..EvalOptions::default()
    };
    (0..trials)
        .into_par_iter()
        .filter_map(|trial| {
            let mut rng = stream(family, trial as u64);
            let d = 2 + index_below(&mut rng, 3);
            // random split of the coordinates into two nonempty blocks
            let mut in_a: Vec<bool> = (0..d).map(|_| index_below(&mut rng, 2) == 0).collect();
            in_a[0] = true;
            in_a[d - 1] = false;
            let u0 = random_matrix(&mut rng, d, m);
            let v0 = random_matrix(&mut rng, d, m);
            let project = |mat: DMatrix<C64>, keep: bool| {
                let mut out = mat;
                for (r, a) in in_a.iter().enumerate() {
                    if *a != keep {
                        out.row_mut(r).fill(ZERO);
                    }
                }
                AmplifiedElement::from_matrix_unchecked(out)
            };
            let u = project(u0, true);
            let v = project(v0, false);
            let sum = u.add(&v).ok()?;
            let lhs = q.eval(&sum, &opts).lower.powi(2);
            let rhs = q.eval(&u, &opts).value.powi(2) + q.eval(&v, &opts).value.powi(2);
            (lhs > rhs + 1e-9).then_some(SemiRuanWitness {
                trial,
                u,
                v,
                lhs,
                rhs,
            })
        })
        .find_first(|_| true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quant::BaseNorm;

    #[test]
    fn hilbert_has_no_witness() {
        assert!(is_semi_ruan_witness_search(&Quantization::hilbert(3), 200, 1).is_none());
        assert!(is_semi_ruan_witness_search(&Quantization::min(BaseNorm::l1(3)), 200, 1).is_none());
    }

    #[test]
    fn l1_function_space_has_witness() {
        let q = Quantization::lp_scalar(1.0, 2).unwrap();
        let w = is_semi_ruan_witness_search(&q, 50, 7).expect("witness");
        assert!(w.lhs > w.rhs);
        assert!((w.u.coeffs().adjoint() * w.v.coeffs()).norm() < 1e-12);
    }
}
