//! Closed-form spinless Calogero-Sutherland Hamiltonians obtained from
//! single-point reduced orbits, and checks against the reduction machinery.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{SpaceSpec, SymmetricSpace};
use crate::dynamics::{hamiltonian, PhasePoint, EPS_WALL};
use crate::error::{Error, Result};
use crate::orbits::{self, check_admissible, xi_red, ReducedOrbitCase, SpinPoint};

/// `g^2 / kappa^2` of the `A_{k-1}` Sutherland model obtained from the minimal
/// orbit `O^{k,kappa}` of `SU(k)`. Fixed by fitting the reduced Hamiltonian.
pub const SUTHERLAND_COUPLING_RATIO: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelFamily {
    BCn { n: usize, kappa: f64, x: f64 },
    Cn { n: usize, kappa: f64, x: f64 },
    Dn { n: usize, kappa: f64 },
    SutherlandA { k: usize, kappa: f64 },
}

impl ModelFamily {
    /// Number of particles.
    pub fn rank(&self) -> usize {
        match *self {
            ModelFamily::BCn { n, .. } | ModelFamily::Cn { n, .. } | ModelFamily::Dn { n, .. } => n,
            ModelFamily::SutherlandA { k, .. } => k,
        }
    }

    fn case(&self) -> ReducedOrbitCase {
        match *self {
            ModelFamily::BCn { kappa, x, .. } => ReducedOrbitCase::BC { kappa, x },
            ModelFamily::Cn { kappa, x, .. } => ReducedOrbitCase::C { kappa, x },
            ModelFamily::Dn { kappa, .. } => ReducedOrbitCase::D { kappa },
            ModelFamily::SutherlandA { kappa, .. } => ReducedOrbitCase::Kks { kappa },
        }
    }

    /// The smallest symmetric space carrying the model.
    pub fn default_space(&self) -> SpaceSpec {
        match *self {
            ModelFamily::BCn { n, .. } => SpaceSpec::SuMn { m: n + 1, n },
            ModelFamily::Cn { n, .. } | ModelFamily::Dn { n, .. } => SpaceSpec::SuMn { m: n, n },
            ModelFamily::SutherlandA { k, .. } => SpaceSpec::SlKc { k },
        }
    }

    pub fn allows_sign_flips(&self) -> bool {
        !matches!(self, ModelFamily::SutherlandA { .. })
    }
}

/// Admissibility of the orbit parameters for a nonempty single-point reduction.
pub fn validate_params(family: &ModelFamily) -> Result<()> {
    let r = family.rank();
    let min = if matches!(family, ModelFamily::SutherlandA { .. }) {
        2
    } else {
        1
    };
    if r < min {
        return Err(Error::Inadmissible(format!(
            "rank must be >= {min}, got {r}"
        )));
    }
    for v in match *family {
        ModelFamily::BCn { kappa, x, .. } | ModelFamily::Cn { kappa, x, .. } => vec![kappa, x],
        ModelFamily::Dn { kappa, .. } | ModelFamily::SutherlandA { kappa, .. } => vec![kappa],
    } {
        if !v.is_finite() {
            return Err(Error::Inadmissible(format!(
                "parameters must be finite, got {v}"
            )));
        }
    }
    check_admissible(family.case(), r)
}

/// Squared couplings of the potential terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    /// Coefficient of `1/sinh^2(q_k - q_l)` and of `1/sinh^2(q_k + q_l)`.
    pub pair: f64,
    /// Coefficient of `1/sinh^2(q_k)`.
    pub single: f64,
    /// Coefficient of `1/sinh^2(2 q_k)`.
    pub double: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinlessModel {
    family: ModelFamily,
    couplings: Couplings,
    bc: Option<orbits::BcCouplings>,
}

impl SpinlessModel {
    pub fn new(family: ModelFamily) -> Result<Self> {
        validate_params(&family)?;
        let (couplings, bc) = match family {
            ModelFamily::BCn { n, kappa, x } => {
                let c = orbits::bc_couplings(n, kappa, x)?;
                (
                    Couplings {
                        pair: c.g * c.g,
                        single: c.g1 * c.g1,
                        double: c.g2 * c.g2,
                    },
                    Some(c),
                )
            }
            ModelFamily::Cn { n, kappa, x } => {
                let nf = n as f64;
                (
                    Couplings {
                        pair: kappa * kappa / 4.0,
                        single: 0.0,
                        double: nf * nf * x * x / 2.0,
                    },
                    None,
                )
            }
            ModelFamily::Dn { kappa, .. } => (
                Couplings {
                    pair: kappa * kappa / 4.0,
                    single: 0.0,
                    double: 0.0,
                },
                None,
            ),
            ModelFamily::SutherlandA { kappa, .. } => (
                Couplings {
                    pair: SUTHERLAND_COUPLING_RATIO * kappa * kappa,
                    single: 0.0,
                    double: 0.0,
                },
                None,
            ),
        };
        Ok(Self {
            family,
            couplings,
            bc,
        })
    }

    pub fn family(&self) -> &ModelFamily {
        &self.family
    }

    pub fn couplings(&self) -> &Couplings {
        &self.couplings
    }

    /// `(g, g_1, g_2)` for the `BC_n` family.
    pub fn bc_couplings(&self) -> Option<orbits::BcCouplings> {
        self.bc
    }

    /// The reduced-orbit representative on `space`.
    pub fn xi_red(&self, space: &SymmetricSpace) -> Result<SpinPoint> {
        xi_red(space, self.family.case())
    }
}

fn inv_sinh_sq(z: f64) -> Result<f64> {
    if z.abs() < EPS_WALL {
        return Err(Error::NotRegular { min_root: z.abs() });
    }
    let s = z.sinh();
    Ok(1.0 / (s * s))
}

/// Closed-form Hamiltonian. Valid for any regular `q`, not only the chamber,
/// so that its Weyl invariance can be tested.
pub fn closed_form_h(model: &SpinlessModel, q: &[f64], p: &[f64]) -> Result<f64> {
    let r = model.family.rank();
    if q.len() != r || p.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: q.len().min(p.len()),
        });
    }
    let c = model.couplings;
    let mut h = 0.5 * p.iter().map(|x| x * x).sum::<f64>();
    for k in 0..r {
        for l in k + 1..r {
            h += c.pair * inv_sinh_sq(q[k] - q[l])?;
            if model.family.allows_sign_flips() {
                h += c.pair * inv_sinh_sq(q[k] + q[l])?;
            }
        }
        if c.single != 0.0 {
            h += c.single * inv_sinh_sq(q[k])?;
        }
        if c.double != 0.0 {
            h += c.double * inv_sinh_sq(2.0 * q[k])?;
        }
    }
    Ok(h)
}

fn random_chamber_point(spec: SpaceSpec, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let r = match spec {
        SpaceSpec::SuMn { n, .. } => n,
        SpaceSpec::SlKc { k } => k,
    };
    let mut q = vec![0.0; r];
    let mut acc = 0.0;
    for j in (0..r).rev() {
        acc += rng.random_range(0.15..1.2);
        q[j] = acc;
    }
    let mut p: Vec<f64> = (0..r).map(|_| rng.random_range(-1.5..1.5)).collect();
    if let SpaceSpec::SlKc { .. } = spec {
        let mq = q.iter().sum::<f64>() / r as f64;
        q.iter_mut().for_each(|x| *x -= mq);
        let mp = p.iter().sum::<f64>() / r as f64;
        p.iter_mut().for_each(|x| *x -= mp);
    }
    (q, p)
}

/// Largest `|H_machinery - H_closed|` over `samples` random chamber points on `spec`.
pub fn machinery_residual_on(
    model: &SpinlessModel,
    spec: SpaceSpec,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let space = SymmetricSpace::build(spec)?;
    let xi = model.xi_red(&space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (q, p) = random_chamber_point(spec, &mut rng);
        let pt = PhasePoint::new(&space, q.clone().into(), p.clone().into(), xi.clone())?;
        let a = hamiltonian(&space, &pt)?;
        let b = closed_form_h(model, &q, &p)?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Compares the reduced Hamiltonian with the closed form at 100 random points
/// of the model's default space.
pub fn machinery_equals_closed_form(model: &SpinlessModel) -> Result<f64> {
    machinery_residual_on(model, model.family.default_space(), 100, 0x5eed)
}

/// Least-squares fit of `g^2` in `H = 1/2 |p|^2 + g^2 sum_{i<j} 1/sinh^2(q_i - q_j)`
/// against the reduced Hamiltonian of the minimal `SU(k)` orbit.
pub fn fit_sutherland_coupling(k: usize, kappa: f64, samples: usize, seed: u64) -> Result<f64> {
    validate_params(&ModelFamily::SutherlandA { k, kappa })?;
    let spec = SpaceSpec::SlKc { k };
    let space = SymmetricSpace::build(spec)?;
    let xi = SpinPoint::new(&space, orbits::mu_kks(k, kappa))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut num, mut den) = (0.0, 0.0);
    for _ in 0..samples {
        let (q, _) = random_chamber_point(spec, &mut rng);
        let pt = PhasePoint::new(&space, q.clone().into(), vec![0.0; k].into(), xi.clone())?;
        let v = hamiltonian(&space, &pt)?;
        let mut basis = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                basis += inv_sinh_sq(q[i] - q[j])?;
            }
        }
        num += v * basis;
        den += basis * basis;
    }
    Ok(num / den)
}
