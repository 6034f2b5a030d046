//! Linear algebra over the binary field.
//!
//! [`BinaryMatrix`] is the sparse interchange form used for every boundary
//! map and parity-check matrix. Elimination runs on bit-packed [`BitVec`]
//! rows, with pivots chosen deterministically (lowest column, then lowest
//! row) so that returned bases are reproducible.

mod bitvec;
mod echelon;
mod matrix;

pub use bitvec::BitVec;
pub use echelon::Echelon;
pub use matrix::BinaryMatrix;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A list of linearly independent F₂ vectors, each stored as its support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSet {
    dim: usize,
    vectors: Vec<Vec<usize>>,
}

impl BasisSet {
    /// Validates bounds and linear independence.
    pub fn new(dim: usize, vectors: Vec<Vec<usize>>) -> Result<Self> {
        let mut ech = Echelon::new(dim);
        for v in &vectors {
            if let Some(&bad) = v.iter().find(|&&i| i >= dim) {
                return Err(Error::DimensionMismatch(format!(
                    "index {bad} in a basis of ambient dimension {dim}"
                )));
            }
            if !ech.insert(BitVec::from_indices(dim, v)) {
                return Err(Error::DependentVectors);
            }
        }
        Ok(BasisSet { dim, vectors })
    }

    pub(crate) fn new_unchecked(dim: usize, vectors: Vec<Vec<usize>>) -> Self {
        BasisSet { dim, vectors }
    }

    pub fn from_bitvecs(dim: usize, vectors: &[BitVec]) -> Result<Self> {
        Self::new(dim, vectors.iter().map(BitVec::to_indices).collect())
    }

    pub fn empty(dim: usize) -> Self {
        BasisSet {
            dim,
            vectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<usize>] {
        &self.vectors
    }

    pub fn to_bitvecs(&self) -> Vec<BitVec> {
        self.vectors
            .iter()
            .map(|v| BitVec::from_indices(self.dim, v))
            .collect()
    }

    pub fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.dim);
        for v in self.to_bitvecs() {
            ech.insert(v);
        }
        ech
    }
}

/// Whether `v` is an F₂ combination of the vectors in `basis`.
pub fn in_span(v: &BitVec, basis: &BasisSet) -> Result<bool> {
    if v.len() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against a basis of dimension {}",
            v.len(),
            basis.dim()
        )));
    }
    Ok(basis.echelon().contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_is_always_in_span() {
        let b = BasisSet::new(3, vec![vec![1]]).unwrap();
        assert!(in_span(&BitVec::zeros(3), &b).unwrap());
        assert!(in_span(&BitVec::zeros(3), &BasisSet::empty(3)).unwrap());
    }

    #[test]
    fn span_membership() {
        let b = BasisSet::new(3, vec![vec![0, 1], vec![1]]).unwrap();
        assert!(in_span(&BitVec::from_indices(3, &[0]), &b).unwrap());
        let b = BasisSet::new(3, vec![vec![0], vec![1]]).unwrap();
        assert!(!in_span(&BitVec::from_indices(3, &[2]), &b).unwrap());
    }

    #[test]
    fn span_dimension_mismatch() {
        let b = BasisSet::new(3, vec![vec![0]]).unwrap();
        assert!(in_span(&BitVec::zeros(4), &b).is_err());
    }

    #[test]
    fn dependent_vectors_rejected() {
        assert!(matches!(
            BasisSet::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]),
            Err(Error::DependentVectors)
        ));
    }
}
