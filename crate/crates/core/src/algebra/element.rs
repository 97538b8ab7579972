use std::ops::{Add, Mul, Neg, Sub};

use crate::linalg::{self, real, CMat};

use super::space::SpaceSpec;

/// A square complex matrix certified to lie in the real Lie algebra of `space`.
///
/// Obtain one through [`SymmetricSpace::element`](super::SymmetricSpace::element),
/// which checks membership and snaps the matrix exactly onto the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    space: SpaceSpec,
    mat: CMat,
}

impl LieElement {
    /// Wraps a matrix already known to lie in the algebra.
    pub(crate) fn from_raw(space: SpaceSpec, mat: CMat) -> Self {
        Self { space, mat }
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn zero(space: SpaceSpec) -> Self {
        Self {
            space,
            mat: linalg::zeros(space.matrix_size()),
        }
    }

    /// `<self, other> = Re tr(self * other)`.
    pub fn pairing(&self, other: &LieElement) -> f64 {
        linalg::pairing(&self.mat, &other.mat)
    }

    pub fn bracket(&self, other: &LieElement) -> LieElement {
        debug_assert_eq!(self.space, other.space);
        Self {
            space: self.space,
            mat: linalg::commutator(&self.mat, &other.mat),
        }
    }

    pub fn norm(&self) -> f64 {
        linalg::frobenius(&self.mat)
    }

    pub fn scale(&self, c: f64) -> LieElement {
        Self {
            space: self.space,
            mat: &self.mat * real(c),
        }
    }
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        debug_assert_eq!(self.space, rhs.space);
        LieElement {
            space: self.space,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        debug_assert_eq!(self.space, rhs.space);
        LieElement {
            space: self.space,
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        LieElement {
            space: self.space,
            mat: -self.mat.clone(),
        }
    }
}

impl Mul<f64> for &LieElement {
    type Output = LieElement;
    fn mul(self, rhs: f64) -> LieElement {
        self.scale(rhs)
    }
}
