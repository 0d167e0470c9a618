//! The diagonal element `V = Σ_k e_k ⊗ (p^k ⊗ p^k)` over `HILBERT(n) ⊗ HILBERT(n)`,
//! whose pl- and l-norms are `n` and `√n`.

use nalgebra::DMatrix;

use super::representation::{PLRepresentation, PlTerm};
use crate::element::AmplifiedElement;
use crate::hilbert::{OperatorBlock, PairingMap, C64, ONE, ZERO};

/// `V ∈ H_n(ℓ2^n ⊗ ℓ2^n)`: row `k` is the coordinate vector of `p^k ⊗ p^k`.
pub fn v_example(n: usize) -> AmplifiedElement {
    let mut c = DMatrix::from_element(n, n * n, ZERO);
    for k in 0..n {
        c[(k, k * n + k)] = ONE;
    }
    AmplifiedElement::from_matrix_unchecked(c)
}

/// The presentation `V = S·Σ_k u_k ⋄ u_k` with `u_k = e_k ⊗ p^k` and
/// `S = Σ_k e_k (e_k ⋄ e_k)*`, as a pl-representation with a shared operator.
pub fn pres_v(n: usize, pairing: PairingMap) -> PLRepresentation {
    let mut s = DMatrix::<C64>::from_element(n, n * n, ZERO);
    for k in 0..n {
        s[(k, pairing.index(k, k, n, n))] = ONE;
    }
    let a = OperatorBlock::from_matrix_unchecked(s);
    let terms = (0..n)
        .map(|k| {
            let mut u = DMatrix::from_element(n, n, ZERO);
            u[(k, k)] = ONE;
            let u = AmplifiedElement::from_matrix_unchecked(u);
            PlTerm {
                a: a.clone(),
                u: u.clone(),
                v: u,
            }
        })
        .collect();
    PLRepresentation::new(terms, pairing).expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quant::{EvalOptions, Quantization};
    use crate::tensor::orthogonalize_representation;

    #[test]
    fn presentation_reconstructs_v() {
        for pairing in [PairingMap::RowMajor, PairingMap::ColumnMajor] {
            for n in 1..=4 {
                let rep = pres_v(n, pairing);
                assert!(rep.residual(&v_example(n)).unwrap() < 1e-14);
                let h = Quantization::hilbert(n);
                let opts = EvalOptions::default();
                assert!((rep.value(&h, &h, &opts) - n as f64).abs() < 1e-12);
                let l = orthogonalize_representation(&rep);
                assert!(l.supports_valid(1e-12));
                assert!((l.value(&h, &h, &opts) - (n as f64).sqrt()).abs() < 1e-12);
            }
        }
    }
}
