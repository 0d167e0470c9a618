use super::*;
use crate::element::module_action;
use crate::hilbert::OperatorBlock;
use crate::rng::{random_matrix, stream};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn hilbert_is_frobenius() {
    let u = AmplifiedElement::new(DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0), c(2.0), c(2.0), c(4.0)],
    ))
    .unwrap();
    let v = Quantization::hilbert(2).amp_norm(&u).unwrap();
    assert!(v.exact && (v.value - 5.0).abs() < 1e-12);
    assert!(Quantization::hilbert(3).amp_norm(&u).is_err());
}

#[test]
fn lp_combines_pointwise_norms() {
    // two points of mass 1 and 4, p = 2, scalar values 3 and 1: sqrt(9 + 4)
    let q = Quantization::lp(2.0, vec![1.0, 4.0], Quantization::scalar()).unwrap();
    let u = AmplifiedElement::from_base_vector(&[c(3.0), c(1.0)]).unwrap();
    assert!((q.amp_norm(&u).unwrap().value - 13f64.sqrt()).abs() < 1e-12);
    assert_eq!(q.hilbert_weights(), Some(vec![1.0, 4.0]));
}

#[test]
fn concrete_of_matrix_units_is_operator_norm() {
    // M_2 spanned by matrix units: the underlying norm is the operator norm
    let units: Vec<DMatrix<C64>> = (0..4)
        .map(|k| DMatrix::from_fn(2, 2, |r, s| if r * 2 + s == k { c(1.0) } else { ZERO }))
        .collect();
    let q = Quantization::concrete(2, 2, units).unwrap();
    let x = [c(1.0), c(1.0), c(1.0), c(1.0)];
    assert!((q.underlying_norm(&x).unwrap() - 2.0).abs() < 1e-12);
    let f = DVector::from_vec(vec![c(1.0), ZERO, ZERO, c(1.0)]);
    let (lo, hi) = q.dual_norm_bounds(&f);
    // the trace is norm 2 against the operator norm
    assert!((hi - 2.0).abs() < 1e-10 && lo <= hi + 1e-12 && lo >= 1.0 - 1e-12);
}

#[test]
fn concrete_rejects_dependent_generators() {
    let g = DMatrix::from_element(1, 1, c(1.0));
    assert!(Quantization::concrete(1, 1, vec![g.clone(), g * c(2.0)]).is_err());
}

#[test]
fn module_action_is_contractive() {
    let mut rng = stream(11, 0);
    let qs = vec![
        Quantization::min(BaseNorm::l1(3)),
        Quantization::max(BaseNorm::linf(3)).unwrap(),
        Quantization::lp(3.0, vec![1.0, 2.0, 0.5], Quantization::scalar()).unwrap(),
        Quantization::tensor_p(BaseNorm::linf(2), Quantization::hilbert(2)).unwrap(),
    ];
    for q in qs {
        for _ in 0..5 {
            let u = AmplifiedElement::new(random_matrix(&mut rng, 2, q.dim())).unwrap();
            let a = OperatorBlock::new(random_matrix(&mut rng, 3, 2)).unwrap();
            let lhs = q.amp_norm(&module_action(&a, &u).unwrap()).unwrap();
            let rhs = q.amp_norm(&u).unwrap();
            assert!(
                lhs.lower <= a.op_norm() * rhs.value + 1e-9,
                "{}",
                q.kind_name()
            );
        }
    }
}

#[test]
fn norming_functionals_are_certified() {
    let mut rng = stream(12, 0);
    let qs = vec![
        Quantization::hilbert(3),
        Quantization::min(BaseNorm::lp(3.0, vec![1.0, 2.0, 3.0]).unwrap()),
        Quantization::lp(1.0, vec![1.0, 2.0, 0.5], Quantization::scalar()).unwrap(),
        Quantization::tensor_p(BaseNorm::l1(3), Quantization::scalar()).unwrap(),
    ];
    for q in qs {
        let y = crate::rng::random_dvector(&mut rng, q.dim());
        let f = q.norming_functional(&y);
        let (_, hi) = q.dual_norm_bounds(&f);
        assert!(hi <= 1.0 + 1e-9);
        let n = q.underlying_norm(y.as_slice()).unwrap();
        assert!(f.dot(&y).norm() <= n + 1e-9);
        assert!(f.dot(&y).norm() >= 0.99 * n, "{}", q.kind_name());
    }
}
