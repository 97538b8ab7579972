use crate::algebra::functions::{COTH, W, W_SQ};
use rand::Rng;

use crate::algebra::{CartanPoint, LieElement, SpaceSpec, Subspace, SymmetricSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::orbits::{random_slice_spin, SpinPoint};

/// Minimum admissible `min_alpha |alpha(q)|` for evaluating the reduced system.
pub const EPS_WALL: f64 = 1e-6;

/// A point `(q, p, xi)` of the reduced phase space on the gauge slice.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    q: CartanPoint,
    p: CartanPoint,
    xi: SpinPoint,
}

impl PhasePoint {
    pub fn new(
        space: &SymmetricSpace,
        q: CartanPoint,
        p: CartanPoint,
        xi: SpinPoint,
    ) -> Result<Self> {
        space.check_chamber(q.coords(), 0.0)?;
        space.check_coords(p.coords())?;
        xi.require_on_slice(space)?;
        if xi.xi().space() != space.spec() {
            return Err(Error::InvalidArgument(format!(
                "spin point does not belong to {}",
                space.spec()
            )));
        }
        Ok(Self { q, p, xi })
    }

    /// Builds a point from `E^+` coefficients of the spin.
    pub fn from_parts(
        space: &SymmetricSpace,
        q: Vec<f64>,
        p: Vec<f64>,
        xi: Vec<f64>,
    ) -> Result<Self> {
        let xi = SpinPoint::from_coefficients(space, xi)?;
        Self::new(space, q.into(), p.into(), xi)
    }

    pub fn q(&self) -> &CartanPoint {
        &self.q
    }

    pub fn p(&self) -> &CartanPoint {
        &self.p
    }

    pub fn xi(&self) -> &SpinPoint {
        &self.xi
    }

    pub fn xi_coeffs(&self) -> &[f64] {
        self.xi
            .coefficients()
            .expect("phase points are on the slice")
    }
}

/// `L(x) = p - coth(ad_q) xi - x xi` together with its spectral parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxMatrix {
    pub x: f64,
    pub value: LieElement,
}

impl LaxMatrix {
    pub fn matrix(&self) -> &CMat {
        self.value.matrix()
    }

    pub fn spectrum(&self) -> Vec<num_complex::Complex64> {
        linalg::sort_spectrum(linalg::eigenvalues(self.matrix()))
    }
}

fn check_wall(space: &SymmetricSpace, q: &[f64]) -> Result<()> {
    let min_root = space.min_abs_root(q);
    if min_root < EPS_WALL || !min_root.is_finite() {
        return Err(Error::NotRegular { min_root });
    }
    Ok(())
}

/// `H = 1/2 sum_k p_k^2 + sum_j (xi_j)^2 / (2 s sinh^2 alpha_j(q))`, where `s` is
/// the trace-form scale of the Cartan basis.
pub fn hamiltonian(space: &SymmetricSpace, pt: &PhasePoint) -> Result<f64> {
    let q = pt.q.coords();
    check_wall(space, q)?;
    let kinetic = 0.5 * pt.p.coords().iter().map(|x| x * x).sum::<f64>();
    let alphas = space.root_vector_values(q);
    let potential: f64 = pt
        .xi_coeffs()
        .iter()
        .zip(&alphas)
        .map(|(c, a)| {
            let s = a.sinh();
            c * c / (s * s)
        })
        .sum();
    Ok(kinetic + 0.5 * potential / space.form_scale())
}

/// The same energy through the Lax matrix: `<L(1), L(1)> / (2 s)`.
pub fn hamiltonian_trace(space: &SymmetricSpace, pt: &PhasePoint) -> Result<f64> {
    let l = lax(space, pt, 1.0)?;
    Ok(0.5 * linalg::pairing(l.matrix(), l.matrix()) / space.form_scale())
}

fn coth_xi(space: &SymmetricSpace, pt: &PhasePoint) -> Result<CMat> {
    check_wall(space, pt.q.coords())?;
    Ok(space.ad_fn_on_plus(&COTH, pt.q.coords(), pt.xi_coeffs()))
}

pub fn lax(space: &SymmetricSpace, pt: &PhasePoint, x: f64) -> Result<LaxMatrix> {
    let value =
        space.embed_coords(pt.p.coords()) - coth_xi(space, pt)? - pt.xi.matrix() * linalg::real(x);
    Ok(LaxMatrix {
        x,
        value: space.element(value)?,
    })
}

/// `L(0) = L_-`, an element of `g_-`.
pub fn lax_minus(space: &SymmetricSpace, pt: &PhasePoint) -> Result<LaxMatrix> {
    lax(space, pt, 0.0)
}

/// `e^{-ad_q} L(1) = p - w(ad_q) xi`.
pub fn lax_cal(space: &SymmetricSpace, pt: &PhasePoint) -> Result<LieElement> {
    check_wall(space, pt.q.coords())?;
    let w_xi = space.ad_fn_on_plus(&W, pt.q.coords(), pt.xi_coeffs());
    space.element(space.embed_coords(pt.p.coords()) - w_xi)
}

/// Tangent vector of the reduced flow at a phase point.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
    pub dxi: CMat,
    /// `|dxi_M|`; nonzero values mean the vector field leaves the slice.
    pub dxi_m_norm: f64,
}

impl Tangent {
    /// `E^+` coefficients of the spin velocity.
    pub fn dxi_coeffs(&self, space: &SymmetricSpace) -> Vec<f64> {
        space.plus_coeffs(&self.dxi)
    }
}

/// Right-hand side of the reduced equations of motion with gauge term `y_M`
/// (`None` is the thick-slice choice `y_M = 0`).
pub fn eom_rhs_with_gauge(
    space: &SymmetricSpace,
    pt: &PhasePoint,
    y_m: Option<&CMat>,
) -> Result<Tangent> {
    let q = pt.q.coords();
    check_wall(space, q)?;
    let xi = pt.xi.matrix();
    let w2 = space.ad_fn_on_plus(&W_SQ, q, pt.xi_coeffs());
    let coth = space.ad_fn_on_plus(&COTH, q, pt.xi_coeffs());
    let force = linalg::commutator(&w2, &coth);
    let dp = space.cartan_coords(&space.project_raw(&force, Subspace::A));
    let y = match y_m {
        Some(y) => y - &w2,
        None => -w2,
    };
    let dxi = linalg::commutator(&y, xi);
    let dxi_m_norm = linalg::frobenius(&space.project_raw(&dxi, Subspace::M));
    Ok(Tangent {
        dq: pt.p.coords().to_vec(),
        dp,
        dxi,
        dxi_m_norm,
    })
}

pub fn eom_rhs(space: &SymmetricSpace, pt: &PhasePoint) -> Result<Tangent> {
    eom_rhs_with_gauge(space, pt, None)
}

/// Random chamber point with consecutive root gaps of at least 0.2, uniform
/// momenta in `[-1, 1)` and a generic spin with coefficients of size `spin_scale`.
pub fn random_phase_point<R: Rng + ?Sized>(
    space: &SymmetricSpace,
    spin_scale: f64,
    rng: &mut R,
) -> PhasePoint {
    let r = space.coord_len();
    let mut q: Vec<f64> = match space.spec() {
        SpaceSpec::SuMn { n, .. } => (0..n)
            .map(|j| 0.6 * (n - j) as f64 + rng.random_range(0.0..0.4))
            .collect(),
        SpaceSpec::SlKc { k } => (0..k)
            .map(|j| 0.7 * (k - j) as f64 + rng.random_range(0.0..0.4))
            .collect(),
    };
    let mut p: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
    if let SpaceSpec::SlKc { k } = space.spec() {
        let mq = q.iter().sum::<f64>() / k as f64;
        q.iter_mut().for_each(|x| *x -= mq);
        let mp = p.iter().sum::<f64>() / k as f64;
        p.iter_mut().for_each(|x| *x -= mp);
    }
    let xi = random_slice_spin(space, spin_scale, rng);
    PhasePoint::new(space, q.into(), p.into(), xi).expect("sampled point lies in the chamber")
}
