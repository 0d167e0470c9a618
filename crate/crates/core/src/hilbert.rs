//! Finite truncations of the fixed separable Hilbert space `H`.
//!
//! Vectors of `H` are represented in `H_d = C^d` for an explicit `d`, and
//! operators on `H` as rectangular complex blocks. The fixed unitary
//! `H ⊗ H → H` is realized by a [`PairingMap`] that sends a basis pair
//! `(i, j)` to a single basis index, so the diamond product becomes a
//! reindexed Kronecker product and stays exactly unitary on truncations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Bijection `{0..d1} × {0..d2} → {0..d1·d2}` identifying `H_{d1} ⊗ H_{d2}`
/// with `H_{d1·d2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PairingMap {
    /// `(i, j) ↦ i·d2 + j`
    #[default]
    RowMajor,
    /// `(i, j) ↦ j·d1 + i`
    ColumnMajor,
}

impl PairingMap {
    #[inline]
    pub fn index(self, i: usize, j: usize, d1: usize, d2: usize) -> usize {
        debug_assert!(i < d1 && j < d2);
        match self {
            PairingMap::RowMajor => i * d2 + j,
            PairingMap::ColumnMajor => j * d1 + i,
        }
    }

    #[inline]
    pub fn inverse(self, k: usize, d1: usize, d2: usize) -> (usize, usize) {
        debug_assert!(k < d1 * d2);
        match self {
            PairingMap::RowMajor => (k / d2, k % d2),
            PairingMap::ColumnMajor => (k % d1, k / d1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairingMap::RowMajor => "row-major",
            PairingMap::ColumnMajor => "column-major",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "row-major" | "row_major" | "rowmajor" => Some(PairingMap::RowMajor),
            "column-major" | "column_major" | "colmajor" => Some(PairingMap::ColumnMajor),
            _ => None,
        }
    }
}

/// An element of `H_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    coeffs: DVector<C64>,
}

impl GradedVector {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "graded vector needs a positive dimension".into(),
            ));
        }
        Ok(GradedVector {
            coeffs: DVector::from_vec(coeffs),
        })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The basis vector `e_k` of `H_dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} outside dimension {dim}");
        let mut coeffs = DVector::from_element(dim, ZERO);
        coeffs[k] = ONE;
        GradedVector { coeffs }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        GradedVector {
            coeffs: DVector::from_element(dim, ZERO),
        }
    }

    pub(crate) fn from_dvector(coeffs: DVector<C64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        GradedVector { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &DVector<C64> {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// `⟨self, other⟩`, linear in the first slot and conjugate-linear in the second.
    pub fn inner(&self, other: &GradedVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::dims("inner product", self.dim(), other.dim()));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// Zero-padding into `H_dim`; norm-preserving.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::dims("embedding", self.dim(), dim));
        }
        let mut coeffs = DVector::from_element(dim, ZERO);
        coeffs.rows_mut(0, self.dim()).copy_from(&self.coeffs);
        Ok(GradedVector { coeffs })
    }

    pub fn scale(&self, c: C64) -> Self {
        GradedVector {
            coeffs: &self.coeffs * c,
        }
    }
}

/// A rectangular complex block: a finite truncation of an operator in `B(H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBlock {
    entries: DMatrix<C64>,
}

impl OperatorBlock {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return Err(Error::InvalidParameter(
                "operator block needs positive rows and columns".into(),
            ));
        }
        Ok(OperatorBlock { entries })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParameter("ragged operator rows".into()));
        }
        Self::new(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0);
        OperatorBlock {
            entries: DMatrix::identity(n, n),
        }
    }

    pub(crate) fn from_matrix_unchecked(entries: DMatrix<C64>) -> Self {
        debug_assert!(entries.nrows() > 0 && entries.ncols() > 0);
        OperatorBlock { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn op_norm(&self) -> f64 {
        op_norm(&self.entries)
    }

    pub fn apply(&self, v: &GradedVector) -> Result<GradedVector> {
        if v.dim() != self.cols() {
            return Err(Error::dims("operator application", self.cols(), v.dim()));
        }
        Ok(GradedVector::from_dvector(&self.entries * v.coeffs()))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &OperatorBlock) -> Result<OperatorBlock> {
        if self.cols() != other.rows() {
            return Err(Error::dims(
                "operator composition",
                self.cols(),
                other.rows(),
            ));
        }
        Ok(OperatorBlock {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn adjoint(&self) -> OperatorBlock {
        OperatorBlock {
            entries: self.entries.adjoint(),
        }
    }
}

/// Largest singular value; the `B(H)` norm of the block.
pub fn op_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max().max(0.0)
}

/// Builds the pairing permutation as a dense matrix on `H_{d1·d2}`, sending the
/// Kronecker (row-major) index to the pairing index.
fn reindex_rows(m: &DMatrix<C64>, d1: usize, d2: usize, pairing: PairingMap) -> DMatrix<C64> {
    if pairing == PairingMap::RowMajor {
        return m.clone();
    }
    let mut out = DMatrix::from_element(m.nrows(), m.ncols(), ZERO);
    for i in 0..d1 {
        for j in 0..d2 {
            out.row_mut(pairing.index(i, j, d1, d2))
                .copy_from(&m.row(i * d2 + j));
        }
    }
    out
}

fn reindex_cols(m: &DMatrix<C64>, d1: usize, d2: usize, pairing: PairingMap) -> DMatrix<C64> {
    if pairing == PairingMap::RowMajor {
        return m.clone();
    }
    let mut out = DMatrix::from_element(m.nrows(), m.ncols(), ZERO);
    for i in 0..d1 {
        for j in 0..d2 {
            out.column_mut(pairing.index(i, j, d1, d2))
                .copy_from(&m.column(i * d2 + j));
        }
    }
    out
}

/// `ξ ⋄ η ∈ H_{d1·d2}`: the coefficient at `pairing(i, j)` is `ξ_i η_j`.
pub fn diamond_vec(xi: &GradedVector, eta: &GradedVector, pairing: PairingMap) -> GradedVector {
    let (d1, d2) = (xi.dim(), eta.dim());
    let mut coeffs = DVector::from_element(d1 * d2, ZERO);
    for i in 0..d1 {
        for j in 0..d2 {
            coeffs[pairing.index(i, j, d1, d2)] = xi.coeffs[i] * eta.coeffs[j];
        }
    }
    GradedVector { coeffs }
}

/// `a ⋄ b`, determined by `(a ⋄ b)(ξ ⋄ η) = a(ξ) ⋄ b(η)`.
pub fn diamond_op(a: &OperatorBlock, b: &OperatorBlock, pairing: PairingMap) -> OperatorBlock {
    let kron = a.entries.kronecker(&b.entries);
    let rows = reindex_rows(&kron, a.rows(), b.rows(), pairing);
    OperatorBlock {
        entries: reindex_cols(&rows, a.cols(), b.cols(), pairing),
    }
}

/// The rank-one operator `x ∘ y : z ↦ ⟨z, y⟩ x`.
pub fn rank_one(x: &GradedVector, y: &GradedVector) -> OperatorBlock {
    OperatorBlock {
        entries: x.coeffs() * y.coeffs().adjoint(),
    }
}

/// Isometry `H_d → H_{blocks·d}` placing a vector into coordinate block `k`.
/// Distinct `k` give isometries with pairwise orthogonal final projections.
pub fn block_isometry(k: usize, d: usize, blocks: usize) -> OperatorBlock {
    assert!(k < blocks);
    let mut m = DMatrix::from_element(blocks * d, d, ZERO);
    for i in 0..d {
        m[(k * d + i, i)] = ONE;
    }
    OperatorBlock { entries: m }
}

/// Zero-padding isometry `H_small → H_large`.
pub fn embedding(small: usize, large: usize) -> OperatorBlock {
    assert!(small <= large && small > 0);
    let mut m = DMatrix::from_element(large, small, ZERO);
    for i in 0..small {
        m[(i, i)] = ONE;
    }
    OperatorBlock { entries: m }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_matrix, random_vector, stream};

    #[test]
    fn pairing_is_bijective() {
        for pairing in [PairingMap::RowMajor, PairingMap::ColumnMajor] {
            for d1 in 1..5 {
                for d2 in 1..5 {
                    let mut seen = vec![false; d1 * d2];
                    for i in 0..d1 {
                        for j in 0..d2 {
                            let k = pairing.index(i, j, d1, d2);
                            assert!(!seen[k]);
                            seen[k] = true;
                            assert_eq!(pairing.inverse(k, d1, d2), (i, j));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basis_diamond_is_basis() {
        let e0 = GradedVector::basis(2, 0);
        let out = diamond_vec(&e0, &e0, PairingMap::RowMajor);
        assert_eq!(
            out,
            GradedVector::basis(4, PairingMap::RowMajor.index(0, 0, 2, 2))
        );
    }

    #[test]
    fn diamond_vec_cross_norm() {
        let xi = GradedVector::from_real(&[0.6, 0.8]).unwrap();
        let eta = GradedVector::from_real(&[1.0, 0.0]).unwrap();
        let out = diamond_vec(&xi, &eta, PairingMap::RowMajor);
        assert!((out.norm() - 1.0).abs() < 1e-15);

        let mut rng = stream(3, 0);
        let xi = random_vector(&mut rng, 3);
        let eta = random_vector(&mut rng, 4);
        let xi = xi.scale(C64::new(2.0 / xi.norm(), 0.0));
        let eta = eta.scale(C64::new(0.5 / eta.norm(), 0.0));
        for pairing in [PairingMap::RowMajor, PairingMap::ColumnMajor] {
            assert!((diamond_vec(&xi, &eta, pairing).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diamond_op_identity_and_norm() {
        let id = diamond_op(
            &OperatorBlock::identity(2),
            &OperatorBlock::identity(3),
            PairingMap::ColumnMajor,
        );
        assert_eq!(id, OperatorBlock::identity(6));
        let a = OperatorBlock::from_real_diag(&[2.0, 1.0]).unwrap();
        let b = OperatorBlock::from_real_diag(&[3.0]).unwrap();
        assert!((diamond_op(&a, &b, PairingMap::RowMajor).op_norm() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn diamond_op_acts_on_diamond_vectors() {
        let mut rng = stream(11, 0);
        for pairing in [PairingMap::RowMajor, PairingMap::ColumnMajor] {
            let a = OperatorBlock::new(random_matrix(&mut rng, 3, 2)).unwrap();
            let b = OperatorBlock::new(random_matrix(&mut rng, 2, 4)).unwrap();
            let xi = random_vector(&mut rng, 2);
            let eta = random_vector(&mut rng, 4);
            let lhs = diamond_op(&a, &b, pairing)
                .apply(&diamond_vec(&xi, &eta, pairing))
                .unwrap();
            let rhs = diamond_vec(&a.apply(&xi).unwrap(), &b.apply(&eta).unwrap(), pairing);
            assert!((lhs.coeffs() - rhs.coeffs()).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_one_behaviour() {
        let e0 = GradedVector::basis(2, 0);
        let unit = rank_one(&e0, &e0);
        assert_eq!(unit.entries()[(0, 0)], ONE);
        assert_eq!(unit.entries().iter().filter(|z| z.norm() > 0.0).count(), 1);

        let x = GradedVector::from_real(&[2.0, 0.0]).unwrap();
        let y = GradedVector::from_real(&[0.0, 0.0, 3.0]).unwrap();
        assert!((rank_one(&x, &y).op_norm() - 6.0).abs() < 1e-12);

        let z = GradedVector::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert!(rank_one(&x, &y).apply(&z).unwrap().norm() < 1e-15);

        // (x∘y)z = ⟨z,y⟩x with complex entries
        let mut rng = stream(5, 1);
        let (x, y, z) = (
            random_vector(&mut rng, 3),
            random_vector(&mut rng, 2),
            random_vector(&mut rng, 2),
        );
        let lhs = rank_one(&x, &y).apply(&z).unwrap();
        let rhs = x.scale(z.inner(&y).unwrap());
        assert!((lhs.coeffs() - rhs.coeffs()).norm() < 1e-12);
    }

    #[test]
    fn op_norm_examples() {
        let d = OperatorBlock::from_real_diag(&[1.0, -2.0, 0.5]).unwrap();
        assert!((d.op_norm() - 2.0).abs() < 1e-12);
        let nil = OperatorBlock::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!((nil.op_norm() - 1.0).abs() < 1e-12);
        assert_eq!(
            OperatorBlock::new(DMatrix::from_element(2, 2, ZERO))
                .unwrap()
                .op_norm(),
            0.0
        );
    }

    #[test]
    fn block_isometries_have_orthogonal_ranges() {
        let s0 = block_isometry(0, 2, 3);
        let s2 = block_isometry(2, 2, 3);
        assert!(
            (s0.adjoint().compose(&s0).unwrap().entries() - DMatrix::<C64>::identity(2, 2)).norm()
                < 1e-15
        );
        assert!(s0.adjoint().compose(&s2).unwrap().entries().norm() < 1e-15);
    }

    #[test]
    fn embedding_preserves_norm() {
        let v = GradedVector::from_real(&[3.0, 4.0]).unwrap();
        assert_eq!(v.embed(5).unwrap().norm(), 5.0);
        assert!(v.embed(1).is_err());
    }
}
