//! Functional calculus of `ad_q` for `q` in the Cartan subspace.
//!
//! Since `[q, E^{+,i}] = alpha(q) E^{-,i}` and `[q, E^{-,i}] = alpha(q) E^{+,i}`,
//! an odd function swaps the two ladders and an even one preserves them.

use crate::error::{Error, Result};
use crate::linalg::{real, CMat};

use super::element::LieElement;
use super::space::{CartanPoint, Decomposition, SymmetricSpace, EPS_MEMBERSHIP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// A scalar real-analytic function with definite parity.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticFn {
    pub name: &'static str,
    pub eval: fn(f64) -> f64,
    pub parity: Parity,
    /// `phi(0)`, or `None` for a pole at the origin.
    pub at_zero: Option<f64>,
}

impl AnalyticFn {
    pub fn has_pole(&self) -> bool {
        self.at_zero.is_none()
    }
}

fn coth(z: f64) -> f64 {
    1.0 / z.tanh()
}

fn inv_sinh(z: f64) -> f64 {
    1.0 / z.sinh()
}

fn inv_sinh_sq(z: f64) -> f64 {
    let s = z.sinh();
    1.0 / (s * s)
}

fn inv_sinh_deriv(z: f64) -> f64 {
    let s = z.sinh();
    -z.cosh() / (s * s)
}

pub const TANH: AnalyticFn = AnalyticFn {
    name: "tanh",
    eval: f64::tanh,
    parity: Parity::Odd,
    at_zero: Some(0.0),
};
pub const COTH: AnalyticFn = AnalyticFn {
    name: "coth",
    eval: coth,
    parity: Parity::Odd,
    at_zero: None,
};
pub const SINH: AnalyticFn = AnalyticFn {
    name: "sinh",
    eval: f64::sinh,
    parity: Parity::Odd,
    at_zero: Some(0.0),
};
pub const COSH: AnalyticFn = AnalyticFn {
    name: "cosh",
    eval: f64::cosh,
    parity: Parity::Even,
    at_zero: Some(1.0),
};
/// `w(z) = 1/sinh z`
pub const W: AnalyticFn = AnalyticFn {
    name: "w",
    eval: inv_sinh,
    parity: Parity::Odd,
    at_zero: None,
};
/// `w(z)^2 = 1/sinh^2 z`
pub const W_SQ: AnalyticFn = AnalyticFn {
    name: "w^2",
    eval: inv_sinh_sq,
    parity: Parity::Even,
    at_zero: None,
};
/// `w'(z) = -cosh z / sinh^2 z`
pub const W_PRIME: AnalyticFn = AnalyticFn {
    name: "w'",
    eval: inv_sinh_deriv,
    parity: Parity::Even,
    at_zero: None,
};

impl SymmetricSpace {
    /// Applies `phi(ad_q)` to decomposition coordinates.
    pub fn ad_fn_decomposed(
        &self,
        phi: &AnalyticFn,
        q: &[f64],
        d: &Decomposition,
    ) -> Result<Decomposition> {
        let min_root = self.min_abs_root(q);
        if phi.has_pole() && min_root == 0.0 {
            return Err(Error::NotRegular { min_root });
        }
        let alphas = self.root_vector_values(q);
        let fa: Vec<f64> = alphas.iter().map(|&a| (phi.eval)(a)).collect();
        let (plus, minus) = match phi.parity {
            Parity::Odd => (
                d.minus.iter().zip(&fa).map(|(c, f)| c * f).collect(),
                d.plus.iter().zip(&fa).map(|(c, f)| c * f).collect(),
            ),
            Parity::Even => (
                d.plus.iter().zip(&fa).map(|(c, f)| c * f).collect(),
                d.minus.iter().zip(&fa).map(|(c, f)| c * f).collect(),
            ),
        };
        let (a, m) = match phi.at_zero {
            Some(z) => (
                d.a.iter().map(|x| x * z).collect(),
                d.m.iter().map(|x| x * z).collect(),
            ),
            None => {
                let na = d.a.iter().map(|x| x * x).sum::<f64>().sqrt();
                if na > EPS_MEMBERSHIP {
                    return Err(Error::PoleAtZero {
                        subspace: "A",
                        norm: na,
                    });
                }
                let nm = d.m.iter().map(|x| x * x).sum::<f64>().sqrt();
                if nm > EPS_MEMBERSHIP {
                    return Err(Error::PoleAtZero {
                        subspace: "M",
                        norm: nm,
                    });
                }
                (vec![0.0; d.a.len()], vec![0.0; d.m.len()])
            }
        };
        Ok(Decomposition { a, m, plus, minus })
    }

    pub fn ad_fn_raw(&self, phi: &AnalyticFn, q: &[f64], x: &CMat) -> Result<CMat> {
        let d = self.decompose(x);
        Ok(self.compose(&self.ad_fn_decomposed(phi, q, &d)?))
    }

    /// `phi(ad_q) X` computed componentwise in the root basis.
    pub fn ad_fn(&self, phi: &AnalyticFn, q: &CartanPoint, x: &LieElement) -> Result<LieElement> {
        self.check_coords(q.coords())?;
        self.check_member(x.matrix())?;
        let out = self.ad_fn_raw(phi, q.coords(), x.matrix())?;
        Ok(LieElement::from_raw(self.spec(), out))
    }

    /// `phi(ad_q)` applied to an M^perp element given by its `E^{+}` coefficients;
    /// returns the resulting matrix.
    pub fn ad_fn_on_plus(&self, phi: &AnalyticFn, q: &[f64], coeffs: &[f64]) -> CMat {
        let alphas = self.root_vector_values(q);
        let scaled: Vec<f64> = coeffs
            .iter()
            .zip(&alphas)
            .map(|(c, a)| c * (phi.eval)(*a))
            .collect();
        match phi.parity {
            Parity::Odd => self.compose_minus(&scaled),
            Parity::Even => self.compose_plus(&scaled),
        }
    }
}

/// Dense evaluation of `phi(ad_H) X` by a truncated power series, for entire `phi`
/// given through its Taylor coefficients. Used as an independent oracle.
pub fn ad_series(h: &CMat, x: &CMat, taylor: &[f64]) -> CMat {
    let mut term = x.clone();
    let mut out = x * real(taylor[0]);
    for c in &taylor[1..] {
        term = crate::linalg::commutator(h, &term);
        out += &term * real(*c);
    }
    out
}
