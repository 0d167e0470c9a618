//! Elements of the amplification `H_d ⊗ E`, stored as `d × m` coefficient
//! matrices against a fixed basis `b_0, …, b_{m-1}` of `E`: column `j` holds
//! the `H`-coefficients of `b_j`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{GradedVector, OperatorBlock, PairingMap, C64, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedElement {
    coeffs: DMatrix<C64>,
}

impl AmplifiedElement {
    pub fn new(coeffs: DMatrix<C64>) -> Result<Self> {
        if coeffs.nrows() == 0 || coeffs.ncols() == 0 {
            return Err(Error::InvalidParameter(
                "amplified element needs positive H-dimension and base dimension".into(),
            ));
        }
        Ok(AmplifiedElement { coeffs })
    }

    pub fn zeros(d: usize, m: usize) -> Self {
        assert!(d > 0 && m > 0);
        AmplifiedElement {
            coeffs: DMatrix::from_element(d, m, ZERO),
        }
    }

    /// The elementary tensor `ξx`.
    pub fn elementary(xi: &GradedVector, x: &[C64]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidParameter("empty base vector".into()));
        }
        let row = DMatrix::from_row_slice(1, x.len(), x);
        Ok(AmplifiedElement {
            coeffs: xi.coeffs() * row,
        })
    }

    /// `e_0 ⊗ x` in `H_1 ⊗ E`.
    pub fn from_base_vector(x: &[C64]) -> Result<Self> {
        Self::elementary(&GradedVector::basis(1, 0), x)
    }

    pub(crate) fn from_matrix_unchecked(coeffs: DMatrix<C64>) -> Self {
        debug_assert!(coeffs.nrows() > 0 && coeffs.ncols() > 0);
        AmplifiedElement { coeffs }
    }

    /// H-truncation dimension.
    pub fn d(&self) -> usize {
        self.coeffs.nrows()
    }

    /// Base-space dimension.
    pub fn m(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn coeffs(&self) -> &DMatrix<C64> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> DMatrix<C64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| *z == ZERO)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|z| z.im == 0.0)
    }

    pub fn scale(&self, c: C64) -> Self {
        AmplifiedElement {
            coeffs: &self.coeffs * c,
        }
    }

    pub fn add(&self, other: &AmplifiedElement) -> Result<Self> {
        self.check_same_shape(other, "element addition")?;
        Ok(AmplifiedElement {
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub(crate) fn check_same_shape(
        &self,
        other: &AmplifiedElement,
        ctx: &'static str,
    ) -> Result<()> {
        if self.d() != other.d() {
            return Err(Error::dims(ctx, self.d(), other.d()));
        }
        if self.m() != other.m() {
            return Err(Error::dims(ctx, self.m(), other.m()));
        }
        Ok(())
    }

    /// Zero-pads the H-side into `H_d`.
    pub fn embed(&self, d: usize) -> Result<Self> {
        if d < self.d() {
            return Err(Error::dims("element embedding", self.d(), d));
        }
        let mut coeffs = DMatrix::from_element(d, self.m(), ZERO);
        coeffs.rows_mut(0, self.d()).copy_from(&self.coeffs);
        Ok(AmplifiedElement { coeffs })
    }

    /// Columns `start .. start+len` as an element of `H_d ⊗ C^len`.
    pub fn column_block(&self, start: usize, len: usize) -> AmplifiedElement {
        AmplifiedElement {
            coeffs: self.coeffs.columns(start, len).into_owned(),
        }
    }

    /// The `H`-coefficient column of basis vector `b_j`.
    pub fn column(&self, j: usize) -> GradedVector {
        GradedVector::from_dvector(self.coeffs.column(j).into_owned())
    }

    /// Frobenius distance, used for reconstruction residuals.
    pub fn distance(&self, other: &AmplifiedElement) -> Result<f64> {
        self.check_same_shape(other, "element distance")?;
        Ok((&self.coeffs - &other.coeffs).norm())
    }

    pub fn frobenius(&self) -> f64 {
        self.coeffs.norm()
    }
}

/// The outer multiplication `a·u`, defined on elementary tensors by `a·(ξx) = a(ξ)x`.
pub fn module_action(a: &OperatorBlock, u: &AmplifiedElement) -> Result<AmplifiedElement> {
    if a.cols() != u.d() {
        return Err(Error::dims("module action", a.cols(), u.d()));
    }
    Ok(AmplifiedElement {
        coeffs: a.entries() * u.coeffs(),
    })
}

/// `u ⋄ v ∈ H_{d_u·d_v} ⊗ (E ⊗ F)`, defined by `ξx ⋄ ηy = (ξ ⋄ η)(x ⊗ y)`.
/// The basis of `E ⊗ F` is `b_i ⊗ b'_j` at index `i·m_F + j`.
pub fn diamond(
    u: &AmplifiedElement,
    v: &AmplifiedElement,
    pairing: PairingMap,
) -> AmplifiedElement {
    let (du, dv, me, mf) = (u.d(), v.d(), u.m(), v.m());
    let mut coeffs = DMatrix::from_element(du * dv, me * mf, ZERO);
    for a in 0..du {
        for b in 0..dv {
            let row = pairing.index(a, b, du, dv);
            for i in 0..me {
                let ua = u.coeffs[(a, i)];
                if ua == ZERO {
                    continue;
                }
                for j in 0..mf {
                    coeffs[(row, i * mf + j)] = ua * v.coeffs[(b, j)];
                }
            }
        }
    }
    AmplifiedElement { coeffs }
}

/// Swaps the tensor factors: `H(E⊗F) → H(F⊗E)`, reindexing the base only.
pub fn flip_factors(u: &AmplifiedElement, me: usize, mf: usize) -> Result<AmplifiedElement> {
    if u.m() != me * mf {
        return Err(Error::dims("factor flip", me * mf, u.m()));
    }
    let mut coeffs = DMatrix::from_element(u.d(), u.m(), ZERO);
    for i in 0..me {
        for j in 0..mf {
            coeffs
                .column_mut(j * me + i)
                .copy_from(&u.coeffs.column(i * mf + j));
        }
    }
    Ok(AmplifiedElement { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{diamond_op, rank_one, ONE};
    use crate::rng::{random_matrix, stream};

    #[test]
    fn elementary_tensor_has_rank_one() {
        let xi = GradedVector::from_real(&[1.0, 2.0, 0.0]).unwrap();
        let u = AmplifiedElement::elementary(&xi, &[ONE, C64::new(0.0, -1.0)]).unwrap();
        let sv = u.coeffs().clone().singular_values();
        assert!(sv[1].abs() < 1e-12);
        assert!(!u.is_zero());
        assert!(AmplifiedElement::zeros(2, 2).is_zero());
    }

    #[test]
    fn identity_action_is_trivial() {
        let mut rng = stream(1, 0);
        let u = AmplifiedElement::new(random_matrix(&mut rng, 3, 2)).unwrap();
        assert_eq!(module_action(&OperatorBlock::identity(3), &u).unwrap(), u);
        assert!(module_action(&OperatorBlock::identity(2), &u).is_err());
    }

    #[test]
    fn rank_one_action_extracts_component() {
        // u = e_0 x_0 + e_1 x_1; (ξ∘e_0)·u = ξ x_0
        let x0 = [ONE, ZERO];
        let x1 = [ZERO, C64::new(3.0, 0.0)];
        let u = AmplifiedElement::elementary(&GradedVector::basis(2, 0), &x0)
            .unwrap()
            .add(&AmplifiedElement::elementary(&GradedVector::basis(2, 1), &x1).unwrap())
            .unwrap();
        let xi = GradedVector::from_real(&[0.5, 0.5, 0.5]).unwrap();
        let got = module_action(&rank_one(&xi, &GradedVector::basis(2, 0)), &u).unwrap();
        let want = AmplifiedElement::elementary(&xi, &x0).unwrap();
        assert!(got.distance(&want).unwrap() < 1e-15);
    }

    #[test]
    fn diamond_intertwines_module_action() {
        // (a·u) ⋄ (b·v) = (a ⋄ b)·(u ⋄ v)
        let mut rng = stream(2, 0);
        for pairing in [PairingMap::RowMajor, PairingMap::ColumnMajor] {
            let u = AmplifiedElement::new(random_matrix(&mut rng, 2, 3)).unwrap();
            let v = AmplifiedElement::new(random_matrix(&mut rng, 3, 2)).unwrap();
            let a = OperatorBlock::new(random_matrix(&mut rng, 4, 2)).unwrap();
            let b = OperatorBlock::new(random_matrix(&mut rng, 2, 3)).unwrap();
            let lhs = diamond(
                &module_action(&a, &u).unwrap(),
                &module_action(&b, &v).unwrap(),
                pairing,
            );
            let rhs =
                module_action(&diamond_op(&a, &b, pairing), &diamond(&u, &v, pairing)).unwrap();
            assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        }
    }

    #[test]
    fn flip_is_involutive() {
        let mut rng = stream(4, 0);
        let u = AmplifiedElement::new(random_matrix(&mut rng, 2, 6)).unwrap();
        let back = flip_factors(&flip_factors(&u, 2, 3).unwrap(), 3, 2).unwrap();
        assert_eq!(back, u);
    }
}
