//! Coadjoint orbits of `G_+`, the momentum map of the extended system, the
//! gauge slice, and the single-point reduced orbits that give spinless models.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{
    functions, CartanPoint, LieElement, SpaceSpec, Subspace, SymmetricSpace, EPS_MEMBERSHIP,
};
use crate::error::{Error, Result};
use crate::linalg::{self, cplx, real, CMat, I};

/// Norm tolerance for `u^* u = k kappa`.
const EPS_NORM: f64 = 1e-10;

/// A coadjoint orbit of `G_+` built from minimal constituent orbits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitSpec {
    /// `O^{m,kappa_m}` in the `su(m)` factor, `O^{n,kappa_n}` in the `su(n)`
    /// factor, plus `central_x * C_{m,n}`.
    SuMn {
        upper_kappa: Option<f64>,
        lower_kappa: Option<f64>,
        central_x: f64,
    },
    /// Minimal orbit `O^{k,kappa}` of `SU(k)` for the `SL(k,C)` family.
    Kks { kappa: f64 },
}

impl OrbitSpec {
    pub fn validate(&self, space: SpaceSpec) -> Result<()> {
        match (*self, space) {
            (
                OrbitSpec::SuMn {
                    upper_kappa,
                    lower_kappa,
                    central_x,
                },
                SpaceSpec::SuMn { .. },
            ) => {
                for k in [upper_kappa, lower_kappa].into_iter().flatten() {
                    if !(k > 0.0) {
                        return Err(Error::Inadmissible(format!(
                            "constituent kappa must be > 0, got {k}"
                        )));
                    }
                }
                if upper_kappa.is_none() && lower_kappa.is_none() && central_x == 0.0 {
                    return Err(Error::Inadmissible("orbit is zero".into()));
                }
                Ok(())
            }
            (OrbitSpec::Kks { kappa }, SpaceSpec::SlKc { .. }) => {
                if kappa > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Inadmissible(format!(
                        "kappa must be > 0, got {kappa}"
                    )))
                }
            }
            _ => Err(Error::InvalidArgument(format!(
                "orbit {self:?} does not fit {space}"
            ))),
        }
    }
}

/// An element of a coadjoint orbit of `G_+`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPoint {
    xi: LieElement,
    coefficients: Option<Vec<f64>>,
}

impl SpinPoint {
    /// Wraps an element of `g_+`.
    pub fn new(space: &SymmetricSpace, xi: CMat) -> Result<Self> {
        let xi = space.element(xi)?;
        if !space.is_in_plus(xi.matrix(), EPS_MEMBERSHIP) {
            return Err(Error::InvalidArgument(
                "spin element must lie in g_+".into(),
            ));
        }
        let m_norm = linalg::frobenius(&space.project_raw(xi.matrix(), Subspace::M));
        let coefficients = (m_norm <= EPS_MEMBERSHIP).then(|| space.plus_coeffs(xi.matrix()));
        Ok(Self { xi, coefficients })
    }

    /// On-slice spin point `sum_j c_j E^{+,j}`.
    pub fn from_coefficients(space: &SymmetricSpace, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.spin_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.spin_dim(),
                got: coeffs.len(),
            });
        }
        let xi = LieElement::from_raw(space.spec(), space.compose_plus(&coeffs));
        Ok(Self {
            xi,
            coefficients: Some(coeffs),
        })
    }

    pub fn zero(space: &SymmetricSpace) -> Self {
        Self::from_coefficients(space, vec![0.0; space.spin_dim()]).expect("dimension matches")
    }

    pub fn xi(&self) -> &LieElement {
        &self.xi
    }

    pub fn matrix(&self) -> &CMat {
        self.xi.matrix()
    }

    pub fn is_on_slice(&self) -> bool {
        self.coefficients.is_some()
    }

    /// Coefficients `xi_i^alpha` on the `E^{+,i}`; present when the M-part vanishes.
    pub fn coefficients(&self) -> Option<&[f64]> {
        self.coefficients.as_deref()
    }

    pub fn require_on_slice(&self, space: &SymmetricSpace) -> Result<&[f64]> {
        self.coefficients.as_deref().ok_or_else(|| Error::OffSlice {
            norm: linalg::frobenius(&space.project_raw(self.matrix(), Subspace::M)),
        })
    }
}

/// Point `(Lambda, J_-, xi)` of the extended phase space.
#[derive(Debug, Clone)]
pub struct UnreducedPoint {
    pub lambda: CMat,
    pub j_minus: LieElement,
    pub xi: SpinPoint,
}

/// `eta(u) = i (u u^* - (u^* u / k) 1_k)`, requiring `u^* u = k kappa`.
pub fn eta_of_u(u: &[Complex64], kappa: f64) -> Result<CMat> {
    let k = u.len();
    let norm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let expected = k as f64 * kappa;
    if (norm2 - expected).abs() > EPS_NORM * expected.max(1.0) {
        return Err(Error::NormConstraint {
            expected,
            got: norm2,
        });
    }
    Ok(eta_unchecked(u))
}

fn eta_unchecked(u: &[Complex64]) -> CMat {
    let k = u.len();
    let norm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let mut out = CMat::from_fn(k, k, |a, b| I * u[a] * u[b].conj());
    for a in 0..k {
        out[(a, a)] -= I * (norm2 / k as f64);
    }
    out
}

/// Representative of the constrained minimal orbit, with entries `i kappa (1 - delta_ab)`.
pub fn mu_kks(k: usize, kappa: f64) -> CMat {
    CMat::from_fn(
        k,
        k,
        |a, b| if a == b { real(0.0) } else { cplx(0.0, kappa) },
    )
}

/// `C_{m,n} = diag(i n 1_m, -i m 1_n)`.
pub fn central_element(m: usize, n: usize) -> CMat {
    let mut c = linalg::zeros(m + n);
    for j in 0..m {
        c[(j, j)] = cplx(0.0, n as f64);
    }
    for j in m..m + n {
        c[(j, j)] = cplx(0.0, -(m as f64));
    }
    c
}

/// Places an `su(m)` matrix in the upper-left block of an `(m+n)`-matrix.
pub fn embed_upper(eta: &CMat, m: usize, n: usize) -> CMat {
    let mut out = linalg::zeros(m + n);
    out.view_mut((0, 0), (m, m)).copy_from(eta);
    out
}

/// Places an `su(n)` matrix in the lower-right block of an `(m+n)`-matrix.
pub fn embed_lower(eta: &CMat, m: usize, n: usize) -> CMat {
    let mut out = linalg::zeros(m + n);
    out.view_mut((m, m), (n, n)).copy_from(eta);
    out
}

/// `sqrt(k kappa) e_1`, the simplest vector generating `O^{k,kappa}`.
fn base_vector(k: usize, kappa: f64) -> Vec<Complex64> {
    let mut u = vec![real(0.0); k];
    u[0] = real((k as f64 * kappa).sqrt());
    u
}

/// A base point of the orbit described by `spec`.
pub fn orbit_base_point(space: &SymmetricSpace, spec: &OrbitSpec) -> Result<CMat> {
    spec.validate(space.spec())?;
    match (*spec, space.spec()) {
        (
            OrbitSpec::SuMn {
                upper_kappa,
                lower_kappa,
                central_x,
            },
            SpaceSpec::SuMn { m, n },
        ) => {
            let mut xi = central_element(m, n) * real(central_x);
            if let Some(k) = upper_kappa {
                xi += embed_upper(&eta_unchecked(&base_vector(m, k)), m, n);
            }
            if let Some(k) = lower_kappa {
                xi += embed_lower(&eta_unchecked(&base_vector(n, k)), m, n);
            }
            Ok(xi)
        }
        (OrbitSpec::Kks { kappa }, SpaceSpec::SlKc { k }) => {
            Ok(eta_unchecked(&base_vector(k, kappa)))
        }
        _ => unreachable!("validated above"),
    }
}

/// Random element of `G_+`: `S(U(m) x U(n))` or `SU(k)`.
pub fn random_g_plus<R: Rng + ?Sized>(space: &SymmetricSpace, rng: &mut R) -> CMat {
    match space.spec() {
        SpaceSpec::SuMn { m, n } => {
            let u = linalg::random_unitary(m, rng);
            let v = linalg::random_unitary(n, rng);
            let mut g = linalg::zeros(m + n);
            g.view_mut((0, 0), (m, m)).copy_from(&u);
            g.view_mut((m, m), (n, n)).copy_from(&v);
            let det = g.determinant();
            // rotate the first block so that det = 1
            let phase = Complex64::from_polar(1.0, -det.arg() / m as f64);
            for i in 0..m {
                for j in 0..m {
                    g[(i, j)] *= phase;
                }
            }
            g
        }
        SpaceSpec::SlKc { k } => {
            let mut u = linalg::random_unitary(k, rng);
            let det = u.determinant();
            u *= Complex64::from_polar(1.0, -det.arg() / k as f64);
            u
        }
    }
}

/// Conjugates the orbit base point by a seeded random element of `G_+`.
pub fn random_orbit_point(
    space: &SymmetricSpace,
    spec: &OrbitSpec,
    seed: u64,
) -> Result<SpinPoint> {
    let base = orbit_base_point(space, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_g_plus(space, &mut rng);
    let xi = &g * base * g.adjoint();
    SpinPoint::new(space, xi)
}

/// Random on-slice spin data with independent standard normal coefficients
/// scaled by `scale`; defines a generic orbit through itself.
pub fn random_slice_spin<R: Rng + ?Sized>(
    space: &SymmetricSpace,
    scale: f64,
    rng: &mut R,
) -> SpinPoint {
    let coeffs = (0..space.spin_dim())
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    SpinPoint::from_coefficients(space, coeffs).expect("dimension matches")
}

/// Moves an orbit point into `M^perp` by `G_+` conjugation, minimizing
/// `|xi_M|^2` with the double-bracket descent direction `[xi_M, xi]`.
pub fn conjugate_onto_slice(space: &SymmetricSpace, xi: &SpinPoint, tol: f64) -> Result<SpinPoint> {
    let mut cur = xi.matrix().clone();
    let f = |x: &CMat| -> f64 {
        let pm = space.project_raw(x, Subspace::M);
        -0.5 * linalg::pairing(&pm, &pm)
    };
    let mut val = f(&cur);
    let mut step = 1.0;
    for _ in 0..20_000 {
        if (2.0 * val).sqrt() < tol {
            break;
        }
        let pm = space.project_raw(&cur, Subspace::M);
        let z = linalg::commutator(&pm, &cur);
        let gnorm2 = -linalg::pairing(&z, &z);
        if gnorm2 < 1e-300 {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let g = linalg::expm(&(&z * real(step)));
            let cand = &g * &cur * g.adjoint();
            let cval = f(&cand);
            if cval <= val - 1e-4 * step * gnorm2 {
                cur = cand;
                val = cval;
                accepted = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let residual = (2.0 * val).sqrt();
    if residual > tol {
        return Err(Error::OffSlice { norm: residual });
    }
    let coeffs = space.plus_coeffs(&cur);
    SpinPoint::from_coefficients(space, coeffs)
}

/// `J_+(Lambda, J_-) = tanh(ad_Q) J_-` with `Q = log(Lambda)/2`, evaluated in the
/// eigenbasis of `Q`.
pub fn j_plus(lambda: &CMat, j_minus: &CMat) -> CMat {
    let q = linalg::hermitian_function(lambda, |x| 0.5 * x.ln());
    linalg::hermitian_ad_function(&q, j_minus, f64::tanh)
}

impl UnreducedPoint {
    pub fn validate(&self, space: &SymmetricSpace) -> Result<()> {
        validate_lambda(space, &self.lambda)
    }
}

/// Checks that `Lambda` is Hermitian, positive definite, of unit determinant
/// and in `G`, so that `Theta(Lambda) = Lambda^{-1}`.
pub fn validate_lambda(space: &SymmetricSpace, lambda: &CMat) -> Result<()> {
    let size = space.matrix_size();
    if lambda.nrows() != size || lambda.ncols() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            got: lambda.nrows(),
        });
    }
    let scale = linalg::max_abs(lambda).max(1.0);
    let herm = linalg::max_abs(&(lambda - lambda.adjoint()));
    if herm > 1e-10 * scale {
        return Err(Error::InvalidLambda(format!("not Hermitian ({herm:.3e})")));
    }
    let ev = linalg::hermitian_eigenvalues(lambda);
    if ev[0] <= 0.0 {
        return Err(Error::InvalidLambda(format!(
            "not positive definite (min eigenvalue {:.3e})",
            ev[0]
        )));
    }
    let logdet: f64 = ev.iter().map(|x| x.ln()).sum();
    if logdet.abs() > 1e-8 * size as f64 {
        return Err(Error::InvalidLambda(format!("log det = {logdet:.3e}")));
    }
    if let Some(s) = space.signature() {
        let res = linalg::max_abs(&(lambda * s * lambda - s));
        if res > 1e-8 * scale * scale {
            return Err(Error::InvalidLambda(format!("not in SU(m,n) ({res:.3e})")));
        }
    }
    Ok(())
}

/// `Psi(Lambda, J_-, xi) = J_+(Lambda, J_-) + xi`.
pub fn moment_map(space: &SymmetricSpace, point: &UnreducedPoint) -> Result<LieElement> {
    validate_lambda(space, &point.lambda)?;
    let jp = j_plus(&point.lambda, point.j_minus.matrix());
    space.element(jp + point.xi.matrix())
}

/// The slice map `(q, p, xi) -> (e^{2q}, p - coth(ad_q) xi, xi)`.
pub fn build_slice_point(
    space: &SymmetricSpace,
    q: &CartanPoint,
    p: &CartanPoint,
    xi: &SpinPoint,
) -> Result<UnreducedPoint> {
    space.check_chamber(q.coords(), 0.0)?;
    space.check_coords(p.coords())?;
    let coeffs = xi.require_on_slice(space)?;
    let h = space.embed_coords(q.coords());
    let lambda = linalg::hermitian_function(&h, |x| (2.0 * x).exp());
    let coth_xi = space.ad_fn_on_plus(&functions::COTH, q.coords(), coeffs);
    let j_minus = space.embed_coords(p.coords()) - coth_xi;
    Ok(UnreducedPoint {
        lambda,
        j_minus: LieElement::from_raw(space.spec(), j_minus),
        xi: xi.clone(),
    })
}

/// Cases of single-point reduced orbits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedOrbitCase {
    /// `O^{n,kappa}` in the `su(n)` factor, any `m >= n`.
    D { kappa: f64 },
    /// `O^{n,kappa} + x C_{n,n}` on `su(n,n)`.
    C { kappa: f64, x: f64 },
    /// `O^{n+1,kappa} + x C_{n+1,n}` on `su(n+1,n)`.
    BC { kappa: f64, x: f64 },
    /// `O^{k,kappa}` on `sl(k,C)`.
    Kks { kappa: f64 },
}

/// Couplings `(g, g_1, g_2)` of the `BC_n` model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcCouplings {
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
}

impl BcCouplings {
    /// `g_1^2 - 2 g^2 + sqrt(2) g g_2`.
    pub fn relation_residual(&self) -> f64 {
        self.g1 * self.g1 - 2.0 * self.g * self.g + std::f64::consts::SQRT_2 * self.g * self.g2
    }
}

/// Admissibility of a reduced-orbit case for rank `n` (or `k` for KKS).
pub fn check_admissible(case: ReducedOrbitCase, n: usize) -> Result<()> {
    match case {
        ReducedOrbitCase::D { kappa } | ReducedOrbitCase::Kks { kappa } => {
            if !(kappa > 0.0) {
                return Err(Error::Inadmissible(format!(
                    "nonzero orbit requires kappa > 0, got kappa = {kappa}"
                )));
            }
        }
        ReducedOrbitCase::C { kappa, x } => {
            if !(kappa >= 0.0) {
                return Err(Error::Inadmissible(format!(
                    "kappa must be >= 0, got {kappa}"
                )));
            }
            if kappa == 0.0 && x == 0.0 {
                return Err(Error::Inadmissible("orbit is zero: kappa = x = 0".into()));
            }
        }
        ReducedOrbitCase::BC { kappa, x } => {
            if !(kappa > 0.0) {
                return Err(Error::Inadmissible(format!(
                    "kappa must be > 0, got {kappa}"
                )));
            }
            let a = kappa - n as f64 * x;
            if a < 0.0 {
                return Err(Error::Inadmissible(format!("kappa - n x = {a} < 0")));
            }
            let b = kappa + x;
            if b < 0.0 {
                return Err(Error::Inadmissible(format!("kappa + x = {b} < 0")));
            }
        }
    }
    Ok(())
}

pub fn bc_couplings(n: usize, kappa: f64, x: f64) -> Result<BcCouplings> {
    check_admissible(ReducedOrbitCase::BC { kappa, x }, n)?;
    let nf = n as f64;
    Ok(BcCouplings {
        g: (kappa + x) / 2.0,
        g1: ((kappa + x) * (kappa - nf * x) / 2.0).sqrt(),
        g2: (nf + 1.0) * x / std::f64::consts::SQRT_2,
    })
}

/// Normal-form vector `u_hat` of the `BC` case (with `alpha = 0`).
fn bc_normal_vector(n: usize, kappa: f64, x: f64) -> Vec<Complex64> {
    let mut u = vec![real((kappa + x).sqrt()); n + 1];
    u[n] = real((kappa - n as f64 * x).sqrt());
    u
}

/// The representative of a single-point reduced orbit, lying in `M^perp`.
pub fn xi_red(space: &SymmetricSpace, case: ReducedOrbitCase) -> Result<SpinPoint> {
    let xi = match (case, space.spec()) {
        (ReducedOrbitCase::D { kappa }, SpaceSpec::SuMn { m, n }) => {
            check_admissible(case, n)?;
            embed_lower(&mu_kks(n, kappa), m, n)
        }
        (ReducedOrbitCase::C { kappa, x }, SpaceSpec::SuMn { m, n }) if m == n => {
            check_admissible(case, n)?;
            embed_lower(&mu_kks(n, kappa), m, n) + central_element(m, n) * real(x)
        }
        (ReducedOrbitCase::BC { kappa, x }, SpaceSpec::SuMn { m, n }) if m == n + 1 => {
            check_admissible(case, n)?;
            let eta = eta_of_u(&bc_normal_vector(n, kappa, x), kappa)?;
            embed_upper(&eta, m, n) + central_element(m, n) * real(x)
        }
        (ReducedOrbitCase::Kks { kappa }, SpaceSpec::SlKc { k }) => {
            check_admissible(case, k)?;
            mu_kks(k, kappa)
        }
        (case, spec) => {
            return Err(Error::InvalidArgument(format!(
                "reduced orbit {case:?} is not defined on {spec}"
            )))
        }
    };
    let point = SpinPoint::new(space, xi)?;
    if !point.is_on_slice() {
        return Err(Error::OffSlice {
            norm: linalg::frobenius(&space.project_raw(point.matrix(), Subspace::M)),
        });
    }
    Ok(point)
}

/// Result of the torus-reduction check for the `BC` orbit of `SU(n+1,n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub samples: usize,
    /// Largest deviation of `eta(u)_diag` from `diag(i x 1_n, -i x n)`.
    pub max_diag_residual: f64,
    /// Largest `|xi_M|` over the sampled constrained orbit points.
    pub max_slice_residual: f64,
    /// Largest distance between the torus-transformed point and `xi_red`.
    pub max_normal_form_residual: f64,
    /// Largest `|[m, q]|` of the gauge elements used (they must lie in `M`).
    pub max_gauge_residual: f64,
    pub passed: bool,
}

/// Samples constrained orbit points of `O^{n+1,kappa} + x C_{n+1,n}`, checks the
/// diagonal constraint, and brings each to `xi_red` with an element of `M`.
pub fn reduce_orbit_check(
    n: usize,
    kappa: f64,
    x: f64,
    samples: usize,
    seed: u64,
) -> Result<ReductionReport> {
    check_admissible(ReducedOrbitCase::BC { kappa, x }, n)?;
    let (m, nn) = (n + 1, n);
    let space = SymmetricSpace::build(SpaceSpec::SuMn { m, n: nn })?;
    let target = xi_red(&space, ReducedOrbitCase::BC { kappa, x })?;
    let c = central_element(m, nn) * real(x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ReductionReport {
        samples,
        max_diag_residual: 0.0,
        max_slice_residual: 0.0,
        max_normal_form_residual: 0.0,
        max_gauge_residual: 0.0,
        passed: false,
    };
    let q_probe = space.embed_coords(
        &(0..n)
            .map(|j| 1.0 + 0.5 * (n - j) as f64)
            .collect::<Vec<_>>(),
    );
    for _ in 0..samples {
        let moduli = bc_normal_vector(n, kappa, x);
        let phases: Vec<f64> = (0..=n)
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let u: Vec<Complex64> = moduli
            .iter()
            .zip(&phases)
            .map(|(r, b)| r * Complex64::from_polar(1.0, *b))
            .collect();
        let eta = eta_of_u(&u, kappa)?;
        let nf = n as f64;
        for j in 0..=n {
            let want = if j < n {
                cplx(0.0, x)
            } else {
                cplx(0.0, -nf * x)
            };
            report.max_diag_residual = report.max_diag_residual.max((eta[(j, j)] - want).norm());
        }
        let xi = embed_upper(&eta, m, nn) + &c;
        report.max_slice_residual = report
            .max_slice_residual
            .max(linalg::frobenius(&space.project_raw(&xi, Subspace::M)));

        // Torus phases: t_j u_j = e^{i alpha} |u_j| with sum of phases zero.
        let args: Vec<f64> = u
            .iter()
            .map(|z| if z.norm() > 0.0 { z.arg() } else { 0.0 })
            .collect();
        let alpha = args.iter().sum::<f64>() / (n + 1) as f64;
        let chi: Vec<f64> = args.iter().map(|a| alpha - a).collect();
        // Gauge element diag(e^{i chi_1..n}, e^{i chi_{n+1}}, e^{i chi_1..n}) of M,
        // rescaled by a central phase to unit determinant.
        let mut g = linalg::zeros(m + nn);
        for j in 0..n {
            g[(j, j)] = Complex64::from_polar(1.0, chi[j]);
            g[(m + j, m + j)] = Complex64::from_polar(1.0, chi[j]);
        }
        g[(n, n)] = Complex64::from_polar(1.0, chi[n]);
        let det = g.determinant();
        g *= Complex64::from_polar(1.0, -det.arg() / (m + nn) as f64);
        report.max_gauge_residual = report
            .max_gauge_residual
            .max(linalg::max_abs(&(&g * &q_probe - &q_probe * &g)));
        let moved = &g * &xi * g.adjoint();
        report.max_normal_form_residual = report
            .max_normal_form_residual
            .max(linalg::max_abs(&(moved - target.matrix())));
    }
    report.passed = report.max_diag_residual < 1e-10
        && report.max_slice_residual < 1e-10
        && report.max_normal_form_residual < 1e-10
        && report.max_gauge_residual < 1e-12;
    Ok(report)
}

/// Minimum of `|xi_M|` over random points of `O~^{n,kappa} + x C_{n+1,n}` on `su(n+1,n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmptinessReport {
    pub samples: usize,
    pub min_residual: f64,
}

pub fn emptiness_probe(
    n: usize,
    kappa: f64,
    x: f64,
    samples: usize,
    seed: u64,
) -> Result<EmptinessReport> {
    if !(kappa >= 0.0) {
        return Err(Error::Inadmissible(format!(
            "kappa must be >= 0, got {kappa}"
        )));
    }
    let (m, nn) = (n + 1, n);
    let space = SymmetricSpace::build(SpaceSpec::SuMn { m, n: nn })?;
    let c = central_element(m, nn) * real(x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_residual = f64::INFINITY;
    for _ in 0..samples {
        let raw = linalg::random_complex_matrix(nn, 1, &mut rng);
        let norm = linalg::frobenius(&raw);
        let target = (nn as f64 * kappa).sqrt();
        let u: Vec<Complex64> = raw.iter().map(|z| z * (target / norm)).collect();
        let eta = eta_of_u(&u, kappa)?;
        let xi = embed_lower(&eta, m, nn) + &c;
        let r = linalg::frobenius(&space.project_raw(&xi, Subspace::M));
        min_residual = min_residual.min(r);
    }
    Ok(EmptinessReport {
        samples,
        min_residual,
    })
}

/// Spectrum of `i xi` (real, ascending), a conjugation invariant of the orbit.
pub fn orbit_spectrum(xi: &CMat) -> Vec<f64> {
    linalg::hermitian_eigenvalues(&(xi * I))
}
