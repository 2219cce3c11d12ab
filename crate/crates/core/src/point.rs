//! Points of projective space with a canonical representative.

use crate::error::{Error, Result};
use crate::field::Field;

/// A point of `P^n` stored by the representative whose first nonzero
/// coordinate is 1.  Canonicalizing makes equality a plain coordinate
/// comparison and fixes the trivialization used whenever forms are
/// evaluated at the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivePoint<K: Field> {
    field: K,
    coords: Vec<K::Elem>,
}

impl<K: Field> ProjectivePoint<K> {
    pub fn new(field: K, coords: Vec<K::Elem>) -> Result<Self> {
        let pivot = coords.iter().position(|c| !field.is_zero(c));
        let Some(pivot) = pivot else {
            return Err(Error::BadInput("projective point with all coordinates zero".into()));
        };
        let inv = field.inv(&coords[pivot])?;
        let coords = coords.iter().map(|c| field.mul(c, &inv)).collect();
        Ok(ProjectivePoint { field, coords })
    }

    pub fn from_i64(field: K, coords: &[i64]) -> Result<Self> {
        Self::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn coords(&self) -> &[K::Elem] {
        &self.coords
    }

    /// Ambient projective dimension `n` (one less than the coordinate count).
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the canonical pivot coordinate (the first equal to 1).
    pub fn pivot(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !self.field.is_zero(c))
            .expect("canonical point has a nonzero coordinate")
    }
}
