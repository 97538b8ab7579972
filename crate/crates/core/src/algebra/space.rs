//! Concrete symmetric-space data: the ambient matrix algebra, its Cartan
//! involution, the restricted roots and an orthonormal root basis.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, cplx, real, CMat, I};

use super::element::LieElement;

/// Absolute, entrywise membership tolerance applied after construction.
pub const EPS_MEMBERSHIP: f64 = 1e-10;

/// The two families of negative-curvature symmetric spaces realized here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceSpec {
    /// `SU(m,n)/S(U(m) x U(n))` with `m >= n >= 1`.
    SuMn { m: usize, n: usize },
    /// `SL(k,C)/SU(k)` with `k >= 2`.
    SlKc { k: usize },
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpaceSpec::SuMn { m, n } if n >= 1 && m >= n => Ok(()),
            SpaceSpec::SuMn { m, n } => Err(Error::InvalidSpace(format!(
                "su({m},{n}) requires m >= n >= 1"
            ))),
            SpaceSpec::SlKc { k } if k >= 2 => Ok(()),
            SpaceSpec::SlKc { k } => Err(Error::InvalidSpace(format!("sl({k},C) requires k >= 2"))),
        }
    }

    /// Size of the defining matrices.
    pub fn matrix_size(&self) -> usize {
        match *self {
            SpaceSpec::SuMn { m, n } => m + n,
            SpaceSpec::SlKc { k } => k,
        }
    }

    /// Number of Cartan coordinates: `n` for `su(m,n)`, `k` (summing to zero) for `sl(k,C)`.
    pub fn coord_len(&self) -> usize {
        match *self {
            SpaceSpec::SuMn { n, .. } => n,
            SpaceSpec::SlKc { k } => k,
        }
    }

    /// Whether the Weyl group contains sign flips (`BC_n`/`C_n`) or only permutations (`A_{k-1}`).
    pub fn allows_sign_flips(&self) -> bool {
        matches!(self, SpaceSpec::SuMn { .. })
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::SuMn { m, n } => write!(f, "su({m},{n})"),
            SpaceSpec::SlKc { k } => write!(f, "sl({k},C)"),
        }
    }
}

/// Shape of a restricted root in terms of the coordinate functionals `e_k`.
/// Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    /// `e_k - e_l`, `k < l`
    Diff(usize, usize),
    /// `e_k + e_l`, `k < l`
    Sum(usize, usize),
    /// `2 e_k`
    Twice(usize),
    /// `e_k`
    Single(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RestrictedRoot {
    pub kind: RootKind,
    pub sign: i8,
    pub multiplicity: usize,
}

impl RestrictedRoot {
    pub fn eval(&self, q: &[f64]) -> f64 {
        let v = match self.kind {
            RootKind::Diff(k, l) => q[k] - q[l],
            RootKind::Sum(k, l) => q[k] + q[l],
            RootKind::Twice(k) => 2.0 * q[k],
            RootKind::Single(k) => q[k],
        };
        f64::from(self.sign) * v
    }

    pub fn negated(&self) -> Self {
        Self {
            sign: -self.sign,
            ..*self
        }
    }
}

impl fmt::Display for RestrictedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        match self.kind {
            RootKind::Diff(k, l) => write!(f, "{s}(e{}-e{})", k + 1, l + 1),
            RootKind::Sum(k, l) => write!(f, "{s}(e{}+e{})", k + 1, l + 1),
            RootKind::Twice(k) => write!(f, "{s}2e{}", k + 1),
            RootKind::Single(k) => write!(f, "{s}e{}", k + 1),
        }
    }
}

/// One pair `(E_alpha^{+,i}, E_alpha^{-,i})` of the root basis.
#[derive(Debug, Clone)]
pub struct RootVector {
    /// Index into [`SymmetricSpace::positive_roots`].
    pub root: usize,
    pub label: String,
    /// Element of `M^perp` (theta-fixed).
    pub plus: CMat,
    /// Element of `A^perp` (theta-odd).
    pub minus: CMat,
}

/// The four pieces of the refined Cartan decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    A,
    APerp,
    M,
    MPerp,
}

/// Coordinates of an algebra element in `A + M + M^perp + A^perp`.
///
/// `a` holds Cartan coordinates (so the A-part equals `embed(a)`), `m` holds
/// coefficients on the orthonormal M basis, and `plus`/`minus` hold
/// coefficients on `E^{+,i}`/`E^{-,i}` indexed like `root_vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub a: Vec<f64>,
    pub m: Vec<f64>,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

/// A point of the Cartan subspace in coordinates `(q^1, ..., q^r)`.
///
/// For `sl(k,C)` the `k` diagonal coordinates must sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanPoint {
    coords: Vec<f64>,
}

impl CartanPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl From<Vec<f64>> for CartanPoint {
    fn from(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// Fully constructed symmetric-space realization. Immutable once built.
#[derive(Debug, Clone)]
pub struct SymmetricSpace {
    spec: SpaceSpec,
    roots: Vec<RestrictedRoot>,
    root_vectors: Vec<RootVector>,
    a_basis: Vec<CMat>,
    m_basis: Vec<CMat>,
    /// `I_{m,n}` for su(m,n); unused for sl(k,C).
    signature: Option<CMat>,
}

impl SymmetricSpace {
    pub fn build(spec: SpaceSpec) -> Result<Self> {
        spec.validate()?;
        let space = match spec {
            SpaceSpec::SuMn { m, n } => build_su(m, n),
            SpaceSpec::SlKc { k } => build_sl(k),
        };
        Ok(space)
    }

    pub fn spec(&self) -> SpaceSpec {
        self.spec
    }

    pub fn matrix_size(&self) -> usize {
        self.spec.matrix_size()
    }

    pub fn coord_len(&self) -> usize {
        self.spec.coord_len()
    }

    /// `dim A`.
    pub fn rank(&self) -> usize {
        self.a_basis.len()
    }

    pub fn positive_roots(&self) -> &[RestrictedRoot] {
        &self.roots
    }

    pub fn root_vectors(&self) -> &[RootVector] {
        &self.root_vectors
    }

    pub fn a_basis(&self) -> &[CMat] {
        &self.a_basis
    }

    pub fn m_basis(&self) -> &[CMat] {
        &self.m_basis
    }

    /// Real dimension of the ambient Lie algebra.
    pub fn dim(&self) -> usize {
        match self.spec {
            SpaceSpec::SuMn { m, n } => (m + n) * (m + n) - 1,
            SpaceSpec::SlKc { k } => 2 * (k * k - 1),
        }
    }

    /// `sum over positive roots of nu_alpha`, i.e. `dim M^perp`.
    pub fn spin_dim(&self) -> usize {
        self.root_vectors.len()
    }

    /// Ratio `<embed(u), embed(v)> / (u . v)` of the trace form on `A`.
    pub fn form_scale(&self) -> f64 {
        match self.spec {
            SpaceSpec::SuMn { .. } => 2.0,
            SpaceSpec::SlKc { .. } => 1.0,
        }
    }

    /// Value of positive root `idx` at `q`.
    pub fn root_value(&self, idx: usize, q: &[f64]) -> f64 {
        self.roots[idx].eval(q)
    }

    /// `alpha(q)` for each root vector, in `root_vectors` order.
    pub fn root_vector_values(&self, q: &[f64]) -> Vec<f64> {
        self.root_vectors
            .iter()
            .map(|rv| self.roots[rv.root].eval(q))
            .collect()
    }

    /// Smallest positive-root value `min alpha(q)` (signed).
    pub fn min_root(&self, q: &[f64]) -> f64 {
        self.roots
            .iter()
            .map(|r| r.eval(q))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest `|alpha(q)|` over all roots.
    pub fn min_abs_root(&self, q: &[f64]) -> f64 {
        self.roots
            .iter()
            .map(|r| r.eval(q).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_regular(&self, q: &CartanPoint) -> bool {
        self.min_abs_root(q.coords()) > 0.0
    }

    pub fn is_in_chamber(&self, q: &CartanPoint) -> bool {
        self.min_root(q.coords()) > 0.0
    }

    pub fn check_coords(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.coord_len() {
            return Err(Error::DimensionMismatch {
                expected: self.coord_len(),
                got: q.len(),
            });
        }
        if let SpaceSpec::SlKc { .. } = self.spec {
            let s: f64 = q.iter().sum();
            if s.abs() > EPS_MEMBERSHIP * (1.0 + q.iter().map(|x| x.abs()).sum::<f64>()) {
                return Err(Error::InvalidArgument(format!(
                    "sl(k,C) Cartan coordinates must sum to zero (sum = {s:.3e})"
                )));
            }
        }
        Ok(())
    }

    /// Errors unless every root is at least `eps` away from zero.
    pub fn check_regular(&self, q: &[f64], eps: f64) -> Result<()> {
        self.check_coords(q)?;
        let min_root = self.min_abs_root(q);
        if min_root < eps || !min_root.is_finite() {
            return Err(Error::NotRegular { min_root });
        }
        Ok(())
    }

    /// Errors unless `q` lies in the open Weyl chamber at distance `eps` from its walls.
    pub fn check_chamber(&self, q: &[f64], eps: f64) -> Result<()> {
        self.check_coords(q)?;
        let min_root = self.min_root(q);
        if min_root <= eps || !min_root.is_finite() {
            return Err(Error::OutsideChamber { min_root });
        }
        Ok(())
    }

    /// Matrix realization of a Cartan vector.
    pub fn embed_coords(&self, q: &[f64]) -> CMat {
        let size = self.matrix_size();
        let mut out = linalg::zeros(size);
        match self.spec {
            SpaceSpec::SuMn { m, n } => {
                for k in 0..n {
                    out[(k, m + k)] = real(q[k]);
                    out[(m + k, k)] = real(q[k]);
                }
            }
            SpaceSpec::SlKc { k } => {
                for j in 0..k {
                    out[(j, j)] = real(q[j]);
                }
            }
        }
        out
    }

    pub fn embed(&self, q: &CartanPoint) -> LieElement {
        LieElement::from_raw(self.spec, self.embed_coords(q.coords()))
    }

    /// Reads Cartan coordinates off a matrix already lying in `A`.
    fn cartan_coords_of(&self, h: &CMat) -> Vec<f64> {
        match self.spec {
            SpaceSpec::SuMn { m, n } => (0..n).map(|k| h[(k, m + k)].re).collect(),
            SpaceSpec::SlKc { k } => (0..k).map(|j| h[(j, j)].re).collect(),
        }
    }

    /// Cartan coordinates of the A-component of `x`.
    pub fn cartan_coords(&self, x: &CMat) -> Vec<f64> {
        let mut h = linalg::zeros(self.matrix_size());
        for b in &self.a_basis {
            h += b * real(linalg::pairing(x, b));
        }
        self.cartan_coords_of(&h)
    }

    /// The Cartan involution on the algebra.
    pub fn theta_raw(&self, x: &CMat) -> CMat {
        match &self.signature {
            Some(s) => s * x * s,
            None => -x.adjoint(),
        }
    }

    pub fn theta(&self, x: &LieElement) -> Result<LieElement> {
        self.check_member(x.matrix())?;
        Ok(LieElement::from_raw(self.spec, self.theta_raw(x.matrix())))
    }

    /// `(X_+, X_-)` with `X_+ = (X + theta X)/2`.
    pub fn split_raw(&self, x: &CMat) -> (CMat, CMat) {
        let t = self.theta_raw(x);
        ((x + &t) * real(0.5), (x - &t) * real(0.5))
    }

    pub fn split(&self, x: &LieElement) -> Result<(LieElement, LieElement)> {
        self.check_member(x.matrix())?;
        let (p, m) = self.split_raw(x.matrix());
        Ok((
            LieElement::from_raw(self.spec, p),
            LieElement::from_raw(self.spec, m),
        ))
    }

    /// Coordinates in the refined decomposition, by trace pairings.
    pub fn decompose(&self, x: &CMat) -> Decomposition {
        let mut a_part = linalg::zeros(self.matrix_size());
        for b in &self.a_basis {
            a_part += b * real(linalg::pairing(x, b));
        }
        Decomposition {
            a: self.cartan_coords_of(&a_part),
            m: self
                .m_basis
                .iter()
                .map(|b| -linalg::pairing(x, b))
                .collect(),
            plus: self
                .root_vectors
                .iter()
                .map(|rv| -linalg::pairing(x, &rv.plus))
                .collect(),
            minus: self
                .root_vectors
                .iter()
                .map(|rv| linalg::pairing(x, &rv.minus))
                .collect(),
        }
    }

    pub fn compose(&self, d: &Decomposition) -> CMat {
        let mut out = self.embed_coords(&d.a);
        for (c, b) in d.m.iter().zip(&self.m_basis) {
            out += b * real(*c);
        }
        for (rv, (cp, cm)) in self.root_vectors.iter().zip(d.plus.iter().zip(&d.minus)) {
            if *cp != 0.0 {
                out += &rv.plus * real(*cp);
            }
            if *cm != 0.0 {
                out += &rv.minus * real(*cm);
            }
        }
        out
    }

    /// `sum_j c_j E^{+,j}`.
    pub fn compose_plus(&self, coeffs: &[f64]) -> CMat {
        let mut out = linalg::zeros(self.matrix_size());
        for (rv, c) in self.root_vectors.iter().zip(coeffs) {
            out += &rv.plus * real(*c);
        }
        out
    }

    /// `sum_j c_j E^{-,j}`.
    pub fn compose_minus(&self, coeffs: &[f64]) -> CMat {
        let mut out = linalg::zeros(self.matrix_size());
        for (rv, c) in self.root_vectors.iter().zip(coeffs) {
            out += &rv.minus * real(*c);
        }
        out
    }

    /// Coefficients of the M^perp component on the `E^{+,j}`.
    pub fn plus_coeffs(&self, x: &CMat) -> Vec<f64> {
        self.root_vectors
            .iter()
            .map(|rv| -linalg::pairing(x, &rv.plus))
            .collect()
    }

    pub fn m_coeffs(&self, x: &CMat) -> Vec<f64> {
        self.m_basis
            .iter()
            .map(|b| -linalg::pairing(x, b))
            .collect()
    }

    pub fn project_raw(&self, x: &CMat, sub: Subspace) -> CMat {
        let size = self.matrix_size();
        let mut out = linalg::zeros(size);
        match sub {
            Subspace::A => {
                for b in &self.a_basis {
                    out += b * real(linalg::pairing(x, b));
                }
            }
            Subspace::M => {
                for b in &self.m_basis {
                    out -= b * real(linalg::pairing(x, b));
                }
            }
            Subspace::MPerp => {
                for rv in &self.root_vectors {
                    out -= &rv.plus * real(linalg::pairing(x, &rv.plus));
                }
            }
            Subspace::APerp => {
                for rv in &self.root_vectors {
                    out += &rv.minus * real(linalg::pairing(x, &rv.minus));
                }
            }
        }
        out
    }

    pub fn project(&self, x: &LieElement, sub: Subspace) -> Result<LieElement> {
        self.check_member(x.matrix())?;
        Ok(LieElement::from_raw(
            self.spec,
            self.project_raw(x.matrix(), sub),
        ))
    }

    /// Orthogonal projection of an arbitrary complex matrix onto the algebra
    /// with respect to `Re tr(XY)`.
    pub fn project_to_algebra(&self, z: &CMat) -> CMat {
        let size = self.matrix_size();
        let tr = linalg::trace(z) / real(size as f64);
        let z0 = z - linalg::identity(size) * tr;
        match &self.signature {
            Some(s) => {
                // tau(Z) = -I Z^* I fixes su(m,n) and negates i su(m,n).
                let tau = -(s * z0.adjoint() * s);
                (z0 + tau) * real(0.5)
            }
            None => z0,
        }
    }

    /// Entrywise distance from the algebra.
    pub fn membership_residual(&self, z: &CMat) -> f64 {
        linalg::max_abs(&(z - self.project_to_algebra(z)))
    }

    pub fn check_member(&self, z: &CMat) -> Result<()> {
        let size = self.matrix_size();
        if z.nrows() != size || z.ncols() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                got: z.nrows(),
            });
        }
        let residual = self.membership_residual(z);
        if residual > EPS_MEMBERSHIP {
            return Err(Error::NotMember { residual });
        }
        Ok(())
    }

    /// Certifies `z` as an algebra element, snapping it exactly onto the algebra.
    pub fn element(&self, z: CMat) -> Result<LieElement> {
        self.check_member(&z)?;
        Ok(LieElement::from_raw(self.spec, self.project_to_algebra(&z)))
    }

    /// Membership test for the compact subalgebra `g_+`.
    pub fn is_in_plus(&self, z: &CMat, tol: f64) -> bool {
        linalg::max_abs(&(self.theta_raw(z) - z)) <= tol
    }

    /// `I_{m,n}` for su(m,n).
    pub fn signature(&self) -> Option<&CMat> {
        self.signature.as_ref()
    }

    /// Residuals of the defining properties of the basis.
    pub fn basis_check(&self) -> BasisCheck {
        let rv = &self.root_vectors;
        let mut orthonormality: f64 = 0.0;
        let mut involution: f64 = 0.0;
        let mut membership: f64 = 0.0;
        for (i, x) in rv.iter().enumerate() {
            membership = membership
                .max(self.membership_residual(&x.plus))
                .max(self.membership_residual(&x.minus));
            involution = involution
                .max(linalg::max_abs(&(self.theta_raw(&x.plus) - &x.plus)))
                .max(linalg::max_abs(&(self.theta_raw(&x.minus) + &x.minus)));
            for (j, y) in rv.iter().enumerate() {
                let d = if i == j { 1.0 } else { 0.0 };
                orthonormality = orthonormality
                    .max((linalg::pairing(&x.plus, &y.plus) + d).abs())
                    .max((linalg::pairing(&x.minus, &y.minus) - d).abs())
                    .max(linalg::pairing(&x.plus, &y.minus).abs());
            }
            for b in self.a_basis.iter().chain(&self.m_basis) {
                orthonormality = orthonormality
                    .max(linalg::pairing(&x.plus, b).abs())
                    .max(linalg::pairing(&x.minus, b).abs());
            }
        }
        for b in self.a_basis.iter().chain(&self.m_basis) {
            membership = membership.max(self.membership_residual(b));
        }
        let mut q: Vec<f64> = (0..self.coord_len())
            .map(|j| 0.9 - 0.37 * j as f64)
            .collect();
        if let SpaceSpec::SlKc { k } = self.spec {
            let mean = q.iter().sum::<f64>() / k as f64;
            q.iter_mut().for_each(|x| *x -= mean);
        }
        let h = self.embed_coords(&q);
        let mut ladder: f64 = 0.0;
        for v in rv {
            let alpha = self.root_value(v.root, &q);
            ladder = ladder
                .max(linalg::max_abs(
                    &(linalg::commutator(&h, &v.plus) - &v.minus * real(alpha)),
                ))
                .max(linalg::max_abs(
                    &(linalg::commutator(&h, &v.minus) - &v.plus * real(alpha)),
                ));
        }
        let multiplicities = self.roots.iter().all(|r| {
            r.multiplicity
                == match (self.spec, r.kind) {
                    (SpaceSpec::SlKc { .. }, _) => 2,
                    (_, RootKind::Diff(..) | RootKind::Sum(..)) => 2,
                    (_, RootKind::Twice(_)) => 1,
                    (SpaceSpec::SuMn { m, n }, RootKind::Single(_)) => 2 * (m - n),
                }
        });
        let dimensions = self.rank() + self.m_basis.len() + 2 * self.spin_dim() == self.dim();
        BasisCheck {
            orthonormality,
            ladder,
            involution,
            membership,
            multiplicities,
            dimensions,
        }
    }
}

/// Output of [`SymmetricSpace::basis_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisCheck {
    pub orthonormality: f64,
    pub ladder: f64,
    pub involution: f64,
    pub membership: f64,
    pub multiplicities: bool,
    pub dimensions: bool,
}

impl BasisCheck {
    pub fn max_residual(&self) -> f64 {
        self.orthonormality
            .max(self.ladder)
            .max(self.involution)
            .max(self.membership)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.multiplicities && self.dimensions && self.max_residual() < tol
    }
}

/// Gram-Schmidt under the definite form `sign * Re tr(XY)`.
fn orthonormalize(candidates: Vec<CMat>, sign: f64) -> Vec<CMat> {
    let mut out: Vec<CMat> = Vec::new();
    for mut c in candidates {
        for b in &out {
            let coef = sign * linalg::pairing(&c, b);
            c -= b * real(coef);
        }
        let norm2 = sign * linalg::pairing(&c, &c);
        if norm2 > 1e-20 {
            out.push(c * real(1.0 / norm2.sqrt()));
        }
    }
    out
}

fn build_su(m: usize, n: usize) -> SymmetricSpace {
    let size = m + n;
    let spec = SpaceSpec::SuMn { m, n };
    let mut signature = linalg::identity(size);
    for j in m..size {
        signature[(j, j)] = real(-1.0);
    }
    // Block offsets for the partition n + (m-n) + n.
    let a = |k: usize| k;
    let e = |d: usize| n + d;
    let dd = |k: usize| m + k;
    let half = real(0.5);
    let ihalf = cplx(0.0, 0.5);
    let r2 = real(FRAC_1_SQRT_2);
    let ir2 = cplx(0.0, FRAC_1_SQRT_2);

    let mut roots = Vec::new();
    let mut root_vectors = Vec::new();
    let mut push_root = |kind: RootKind, vectors: Vec<(String, CMat, CMat)>| {
        let idx = roots.len();
        roots.push(RestrictedRoot {
            kind,
            sign: 1,
            multiplicity: vectors.len(),
        });
        for (label, plus, minus) in vectors {
            root_vectors.push(RootVector {
                root: idx,
                label,
                plus,
                minus,
            });
        }
    };

    for upper in [true, false] {
        // upper == true: e_k - e_l (lower sign of the +/- pairs); false: e_k + e_l
        let s = if upper { 1.0 } else { -1.0 };
        for k in 0..n {
            for l in (k + 1)..n {
                let mut pr = linalg::zeros(size);
                pr[(a(k), a(l))] = half;
                pr[(a(l), a(k))] = -half;
                pr[(dd(k), dd(l))] = half * s;
                pr[(dd(l), dd(k))] = -half * s;

                let mut pi = linalg::zeros(size);
                pi[(a(k), a(l))] = ihalf;
                pi[(a(l), a(k))] = ihalf;
                pi[(dd(k), dd(l))] = ihalf * s;
                pi[(dd(l), dd(k))] = ihalf * s;

                // b block (rows a, cols d): E_lk -+ E_kl ; b^dagger block: E_kl -+ E_lk
                let mut mr = linalg::zeros(size);
                mr[(a(l), dd(k))] += half;
                mr[(a(k), dd(l))] += half * s;
                mr[(dd(k), a(l))] += half;
                mr[(dd(l), a(k))] += half * s;

                // b block: -(E_lk +- E_kl) ; b^dagger block: E_kl +- E_lk
                let mut mi = linalg::zeros(size);
                mi[(a(l), dd(k))] += -ihalf;
                mi[(a(k), dd(l))] += ihalf * s;
                mi[(dd(k), a(l))] += ihalf;
                mi[(dd(l), a(k))] += -ihalf * s;

                let kind = if upper {
                    RootKind::Diff(k, l)
                } else {
                    RootKind::Sum(k, l)
                };
                push_root(kind, vec![("r".into(), pr, mr), ("i".into(), pi, mi)]);
            }
        }
    }

    for k in 0..n {
        let mut p = linalg::zeros(size);
        p[(a(k), a(k))] = ir2;
        p[(dd(k), dd(k))] = -ir2;
        let mut mm = linalg::zeros(size);
        mm[(a(k), dd(k))] = -ir2;
        mm[(dd(k), a(k))] = ir2;
        push_root(RootKind::Twice(k), vec![("i".into(), p, mm)]);
    }

    if m > n {
        for k in 0..n {
            let mut vecs = Vec::new();
            for d in 0..(m - n) {
                let mut pr = linalg::zeros(size);
                pr[(a(k), e(d))] = r2;
                pr[(e(d), a(k))] = -r2;
                let mut mr = linalg::zeros(size);
                mr[(e(d), dd(k))] = r2;
                mr[(dd(k), e(d))] = r2;
                vecs.push((format!("r,{}", d + 1), pr, mr));
            }
            for d in 0..(m - n) {
                let mut pi = linalg::zeros(size);
                pi[(a(k), e(d))] = ir2;
                pi[(e(d), a(k))] = ir2;
                let mut mi = linalg::zeros(size);
                mi[(e(d), dd(k))] = -ir2;
                mi[(dd(k), e(d))] = ir2;
                vecs.push((format!("i,{}", d + 1), pi, mi));
            }
            push_root(RootKind::Single(k), vecs);
        }
    }

    let a_basis: Vec<CMat> = (0..n)
        .map(|k| {
            let mut h = linalg::zeros(size);
            h[(a(k), dd(k))] = r2;
            h[(dd(k), a(k))] = r2;
            h
        })
        .collect();

    // Spanning set for M = {diag(i chi, gamma, i chi)} made traceless.
    let mut cands = Vec::new();
    for k in 0..n {
        let mut c = linalg::zeros(size);
        c[(a(k), a(k))] = I;
        c[(dd(k), dd(k))] = I;
        cands.push(c);
    }
    for d1 in 0..(m - n) {
        for d2 in 0..(m - n) {
            let mut c = linalg::zeros(size);
            match d1.cmp(&d2) {
                std::cmp::Ordering::Equal => c[(e(d1), e(d1))] = I,
                std::cmp::Ordering::Less => {
                    c[(e(d1), e(d2))] = real(1.0);
                    c[(e(d2), e(d1))] = real(-1.0);
                }
                std::cmp::Ordering::Greater => {
                    c[(e(d1), e(d2))] = I;
                    c[(e(d2), e(d1))] = I;
                }
            }
            cands.push(c);
        }
    }
    let cands = cands
        .into_iter()
        .map(|c| {
            let tr = linalg::trace(&c) / real(size as f64);
            c - linalg::identity(size) * tr
        })
        .collect();
    let m_basis = orthonormalize(cands, -1.0);

    SymmetricSpace {
        spec,
        roots,
        root_vectors,
        a_basis,
        m_basis,
        signature: Some(signature),
    }
}

fn build_sl(k: usize) -> SymmetricSpace {
    let spec = SpaceSpec::SlKc { k };
    let r2 = real(FRAC_1_SQRT_2);
    let ir2 = cplx(0.0, FRAC_1_SQRT_2);
    let mut roots = Vec::new();
    let mut root_vectors = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let idx = roots.len();
            roots.push(RestrictedRoot {
                kind: RootKind::Diff(i, j),
                sign: 1,
                multiplicity: 2,
            });
            let mut pr = linalg::zeros(k);
            pr[(i, j)] = r2;
            pr[(j, i)] = -r2;
            let mut mr = linalg::zeros(k);
            mr[(i, j)] = r2;
            mr[(j, i)] = r2;
            let mut pi = linalg::zeros(k);
            pi[(i, j)] = ir2;
            pi[(j, i)] = ir2;
            let mut mi = linalg::zeros(k);
            mi[(i, j)] = ir2;
            mi[(j, i)] = -ir2;
            root_vectors.push(RootVector {
                root: idx,
                label: "r".into(),
                plus: pr,
                minus: mr,
            });
            root_vectors.push(RootVector {
                root: idx,
                label: "i".into(),
                plus: pi,
                minus: mi,
            });
        }
    }
    let diffs: Vec<CMat> = (0..k - 1)
        .map(|j| linalg::unit(k, j, j) - linalg::unit(k, j + 1, j + 1))
        .collect();
    let a_basis = orthonormalize(diffs.clone(), 1.0);
    let m_basis = orthonormalize(diffs.into_iter().map(|d| d * I).collect(), -1.0);
    SymmetricSpace {
        spec,
        roots,
        root_vectors,
        a_basis,
        m_basis,
        signature: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, max_abs, pairing};

    fn spaces_up_to_seven() -> Vec<SpaceSpec> {
        let mut v = Vec::new();
        for total in 2..=7 {
            for n in 1..=total / 2 {
                v.push(SpaceSpec::SuMn { m: total - n, n });
            }
        }
        v.extend((2..=4).map(|k| SpaceSpec::SlKc { k }));
        v
    }

    #[test]
    fn basis_check_passes_everywhere() {
        for spec in spaces_up_to_seven() {
            let c = SymmetricSpace::build(spec).unwrap().basis_check();
            assert!(c.passed(1e-12), "{spec} {c:?}");
        }
    }

    #[test]
    fn invalid_dimensions_are_rejected() {
        assert!(SymmetricSpace::build(SpaceSpec::SuMn { m: 1, n: 2 }).is_err());
        assert!(SymmetricSpace::build(SpaceSpec::SuMn { m: 2, n: 0 }).is_err());
        assert!(SymmetricSpace::build(SpaceSpec::SlKc { k: 1 }).is_err());
    }

    #[test]
    fn su32_roots_and_multiplicities() {
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 2 }).unwrap();
        let names: Vec<String> = s.positive_roots().iter().map(|r| r.to_string()).collect();
        assert_eq!(names, ["(e1-e2)", "(e1+e2)", "2e1", "2e2", "e1", "e2"]);
        let mult: Vec<usize> = s.positive_roots().iter().map(|r| r.multiplicity).collect();
        assert_eq!(mult, [2, 2, 1, 1, 2, 2]);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.m_basis().len(), 2);
        assert_eq!(s.rank() + s.m_basis().len() + 2 * s.spin_dim(), 24);
        assert_eq!(s.dim(), 24);
    }

    #[test]
    fn sl2_has_single_root_of_multiplicity_two() {
        let s = SymmetricSpace::build(SpaceSpec::SlKc { k: 2 }).unwrap();
        assert_eq!(s.positive_roots().len(), 1);
        assert_eq!(s.positive_roots()[0].multiplicity, 2);
        // dim g_- = dim A + dim A^perp
        assert_eq!(s.rank() + s.spin_dim(), 3);
    }

    #[test]
    fn su_nn_has_no_single_roots() {
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 2, n: 2 }).unwrap();
        assert!(s
            .positive_roots()
            .iter()
            .all(|r| !matches!(r.kind, RootKind::Single(_))));
        assert_eq!(s.positive_roots().len(), 4);
    }

    #[test]
    fn dimension_counts_for_all_small_spaces() {
        for spec in spaces_up_to_seven() {
            let s = SymmetricSpace::build(spec).unwrap();
            let total = s.rank() + s.m_basis().len() + 2 * s.spin_dim();
            assert_eq!(total, s.dim(), "{spec}");
            if let SpaceSpec::SuMn { m, n } = spec {
                let expected_m = if m > n {
                    n + (m - n) * (m - n) - 1
                } else {
                    n - 1
                };
                assert_eq!(s.m_basis().len(), expected_m, "{spec}");
                for r in s.positive_roots() {
                    let nu = match r.kind {
                        RootKind::Diff(..) | RootKind::Sum(..) => 2,
                        RootKind::Twice(_) => 1,
                        RootKind::Single(_) => 2 * (m - n),
                    };
                    assert_eq!(r.multiplicity, nu);
                }
            }
        }
    }

    #[test]
    fn basis_is_orthonormal_and_in_algebra() {
        for spec in spaces_up_to_seven() {
            let s = SymmetricSpace::build(spec).unwrap();
            let rv = s.root_vectors();
            for (i, x) in rv.iter().enumerate() {
                assert!(s.membership_residual(&x.plus) < 1e-14);
                assert!(s.membership_residual(&x.minus) < 1e-14);
                assert!(max_abs(&(s.theta_raw(&x.plus) - &x.plus)) < 1e-14);
                assert!(max_abs(&(s.theta_raw(&x.minus) + &x.minus)) < 1e-14);
                for (j, y) in rv.iter().enumerate() {
                    let d = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (pairing(&x.plus, &y.plus) + d).abs() < 1e-13,
                        "{spec} {i} {j}"
                    );
                    assert!(
                        (pairing(&x.minus, &y.minus) - d).abs() < 1e-13,
                        "{spec} {i} {j}"
                    );
                    assert!(pairing(&x.plus, &y.minus).abs() < 1e-13, "{spec} {i} {j}");
                }
                for b in s.a_basis().iter().chain(s.m_basis()) {
                    assert!(pairing(&x.plus, b).abs() < 1e-13);
                    assert!(pairing(&x.minus, b).abs() < 1e-13);
                }
            }
            for b in s.m_basis() {
                assert!(s.membership_residual(b) < 1e-14);
                for h in s.a_basis() {
                    assert!(
                        max_abs(&commutator(b, h)) < 1e-14,
                        "M centralizes A in {spec}"
                    );
                }
            }
        }
    }

    #[test]
    fn ladder_relation_holds() {
        for spec in spaces_up_to_seven() {
            let s = SymmetricSpace::build(spec).unwrap();
            let mut q: Vec<f64> = (0..s.coord_len()).map(|j| 0.9 - 0.37 * j as f64).collect();
            if let SpaceSpec::SlKc { k } = spec {
                let mean = q.iter().sum::<f64>() / k as f64;
                q.iter_mut().for_each(|x| *x -= mean);
            }
            let h = s.embed_coords(&q);
            for rv in s.root_vectors() {
                let alpha = s.root_value(rv.root, &q);
                let lp = commutator(&h, &rv.plus) - &rv.minus * real(alpha);
                let lm = commutator(&h, &rv.minus) - &rv.plus * real(alpha);
                assert!(max_abs(&lp) < 1e-13, "{spec} {}", rv.label);
                assert!(max_abs(&lm) < 1e-13, "{spec} {}", rv.label);
            }
        }
    }

    #[test]
    fn embed_pairing_scale() {
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 2 }).unwrap();
        let h = s.embed_coords(&[1.5, -0.5]);
        assert!((pairing(&h, &h) - 2.0 * (2.25 + 0.25)).abs() < 1e-14);
        let c = s.cartan_coords(&h);
        assert!((c[0] - 1.5).abs() < 1e-14 && (c[1] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn central_element_splits_between_m_and_twice_roots() {
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 2 }).unwrap();
        let mut c = linalg::zeros(5);
        for j in 0..3 {
            c[(j, j)] = cplx(0.0, 2.0);
        }
        for j in 3..5 {
            c[(j, j)] = cplx(0.0, -3.0);
        }
        // C_{m,n} is central in g_+ but does not commute with A.
        assert!(s.is_in_plus(&c, 1e-14));
        assert!(max_abs(&commutator(&c, &s.embed_coords(&[1.0, 0.5]))) > 1.0);
        let pm = s.project_raw(&c, Subspace::M);
        let pp = s.project_raw(&c, Subspace::MPerp);
        assert!(max_abs(&(&pm + &pp - &c)) < 1e-13);
        assert!(max_abs(&(pm - &c)) > 1.0);
        let coeffs = s.plus_coeffs(&c);
        for (rv, x) in s.root_vectors().iter().zip(&coeffs) {
            let twice = matches!(s.positive_roots()[rv.root].kind, RootKind::Twice(_));
            assert_eq!(twice, x.abs() > 1e-12);
        }
    }
}
