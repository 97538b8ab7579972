use crate::error::{Error, Result};

use super::space::{CartanPoint, SpaceSpec};

/// Signed permutation acting on Cartan coordinates: `q'_i = sign_i * q_{perm_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        if perm.len() != signs.len() {
            return Err(Error::DimensionMismatch {
                expected: perm.len(),
                got: signs.len(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        Ok(Self { perm, signs })
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let signs = vec![1; perm.len()];
        Self::new(perm, signs)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn has_sign_flips(&self) -> bool {
        self.signs.iter().any(|s| *s < 0)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| f64::from(s) * v[p])
            .collect()
    }
}

/// Weyl group action on a Cartan point of the given family.
pub fn weyl_act(space: SpaceSpec, w: &SignedPermutation, q: &CartanPoint) -> Result<CartanPoint> {
    if w.len() != q.coords().len() {
        return Err(Error::DimensionMismatch {
            expected: q.coords().len(),
            got: w.len(),
        });
    }
    if w.has_sign_flips() && !space.allows_sign_flips() {
        return Err(Error::InvalidArgument(format!(
            "sign flips are not Weyl group elements of {space}"
        )));
    }
    Ok(CartanPoint::new(w.apply(q.coords())))
}
