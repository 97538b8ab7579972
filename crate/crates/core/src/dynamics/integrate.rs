use num_complex::Complex64;

use crate::algebra::SymmetricSpace;
use crate::error::{Error, Result};
use crate::linalg::{self, real, I};

use super::freezing::solve_y_m;
use super::invariants::{invariant_value, InvariantSpec};
use super::phase::{eom_rhs_with_gauge, hamiltonian, lax, PhasePoint, EPS_WALL};

/// Choice of the `M`-valued gauge term in the spin equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GaugeChoice {
    /// `y_M = 0`.
    #[default]
    ThickSlice,
    /// `y_M` re-solved from the freezing equation at every evaluation.
    Frozen,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Relative and absolute local error tolerance.
    pub tol: f64,
    /// Number of equal output intervals on `[0, t_end]`.
    pub samples: usize,
    pub gauge: GaugeChoice,
    /// Reset the spectrum of the spin after each accepted step.
    pub orbit_correction: bool,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            samples: 100,
            gauge: GaugeChoice::ThickSlice,
            orbit_correction: true,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub point: PhasePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Largest coefficient change made by the orbit correction in one step.
    pub max_orbit_correction: f64,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories are non-empty")
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Layout {
    r: usize,
}

impl Layout {
    fn pack(&self, pt: &PhasePoint) -> Vec<f64> {
        let mut y = pt.q().coords().to_vec();
        y.extend_from_slice(pt.p().coords());
        y.extend_from_slice(pt.xi_coeffs());
        y
    }

    fn unpack(&self, space: &SymmetricSpace, y: &[f64]) -> Result<PhasePoint> {
        let r = self.r;
        PhasePoint::from_parts(
            space,
            y[..r].to_vec(),
            y[r..2 * r].to_vec(),
            y[2 * r..].to_vec(),
        )
    }
}

fn rhs(space: &SymmetricSpace, layout: &Layout, gauge: GaugeChoice, y: &[f64]) -> Result<Vec<f64>> {
    let pt = layout.unpack(space, y)?;
    let y_m = match gauge {
        GaugeChoice::ThickSlice => None,
        GaugeChoice::Frozen => Some(solve_y_m(space, pt.q().coords(), pt.xi_coeffs())?.0),
    };
    let t = eom_rhs_with_gauge(space, &pt, y_m.as_ref())?;
    let mut out = t.dq;
    out.extend(t.dp);
    out.extend(space.plus_coeffs(&t.dxi));
    if out.iter().all(|x| x.is_finite()) {
        Ok(out)
    } else {
        Err(Error::NotRegular {
            min_root: space.min_abs_root(pt.q().coords()),
        })
    }
}

/// Spectrum of `i xi`, sorted ascending.
fn spin_spectrum(space: &SymmetricSpace, coeffs: &[f64]) -> Vec<f64> {
    linalg::hermitian_eigenvalues(&(space.compose_plus(coeffs) * I))
}

/// Replaces the spectrum of `i xi` by `target` (ascending) and projects back
/// onto `M^perp`. Returns the change in coefficients.
fn correct_orbit(space: &SymmetricSpace, coeffs: &mut [f64], target: &[f64]) -> f64 {
    let h = space.compose_plus(coeffs) * I;
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..target.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut lam = vec![0.0; target.len()];
    for (rank, &idx) in order.iter().enumerate() {
        lam[idx] = target[rank];
    }
    let d = linalg::CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        lam.len(),
        lam.iter().map(|x| real(*x)),
    ));
    let v = &eig.eigenvectors;
    let xi = v * d * v.adjoint() * (-I);
    let new = space.plus_coeffs(&xi);
    let mut change: f64 = 0.0;
    for (c, n) in coeffs.iter_mut().zip(new) {
        change = change.max((*c - n).abs());
        *c = n;
    }
    change
}

/// Integrates the reduced equations of motion with the Dormand-Prince 5(4) pair.
pub fn integrate_direct(
    space: &SymmetricSpace,
    pt0: &PhasePoint,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory> {
    integrate_direct_with(
        space,
        pt0,
        t_end,
        &IntegratorOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn integrate_direct_with(
    space: &SymmetricSpace,
    pt0: &PhasePoint,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be > 0, got {}",
            opts.tol
        )));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_end must be finite and >= 0, got {t_end}"
        )));
    }
    if opts.samples == 0 {
        return Err(Error::InvalidArgument(
            "at least one output interval is required".into(),
        ));
    }
    let min_root = space.min_root(pt0.q().coords());
    if min_root < EPS_WALL {
        return Err(Error::WallCollision {
            time: 0.0,
            min_root,
        });
    }
    let layout = Layout {
        r: space.coord_len(),
    };
    let spin_dim = space.spin_dim();
    let target = spin_spectrum(space, pt0.xi_coeffs());
    let mut traj = Trajectory {
        samples: vec![Sample {
            t: 0.0,
            point: pt0.clone(),
        }],
        accepted_steps: 0,
        rejected_steps: 0,
        max_orbit_correction: 0.0,
    };
    if t_end == 0.0 {
        return Ok(traj);
    }
    let n = 2 * layout.r + spin_dim;
    let mut y = layout.pack(pt0);
    let mut t = 0.0;
    let mut h = (t_end / opts.samples as f64).min(1e-2);
    let mut next = 1;
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    while next <= opts.samples {
        let t_next = t_end * next as f64 / opts.samples as f64;
        let remaining = t_next - t;
        let hitting = h >= remaining;
        let step = if hitting { remaining } else { h };
        if step < 1e-13 * t.abs().max(1.0) && !hitting {
            return Err(Error::StepUnderflow { time: t, step });
        }
        if traj.accepted_steps + traj.rejected_steps >= opts.max_steps {
            return Err(Error::StepUnderflow { time: t, step });
        }

        let mut ok = true;
        for s in 0..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += step * A[s][j] * kj[i];
                }
                stage[i] = acc;
            }
            match rhs(space, &layout, opts.gauge, &stage) {
                Ok(v) => k[s] = v,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        // stage 7 is evaluated at the fifth-order solution
        let y_new = if ok { stage.clone() } else { y.clone() };
        let err = if ok {
            let mut e: f64 = 0.0;
            for i in 0..n {
                let mut d = 0.0;
                for (s, ks) in k.iter().enumerate() {
                    d += E[s] * ks[i];
                }
                let sc = opts.tol * (1.0 + y[i].abs().max(y_new[i].abs()));
                e = e.max((step * d).abs() / sc);
            }
            e
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            let mut y_acc = y_new;
            if opts.orbit_correction && spin_dim > 0 {
                let change = correct_orbit(space, &mut y_acc[2 * layout.r..], &target);
                traj.max_orbit_correction = traj.max_orbit_correction.max(change);
            }
            let min_root = space.min_root(&y_acc[..layout.r]);
            if min_root < EPS_WALL || !min_root.is_finite() {
                return Err(Error::WallCollision { time: t, min_root });
            }
            t = if hitting { t_next } else { t + step };
            y = y_acc;
            traj.accepted_steps += 1;
            if hitting {
                traj.samples.push(Sample {
                    t,
                    point: layout.unpack(space, &y)?,
                });
                next += 1;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // a step shortened to hit an output time does not shrink the next one
            h = if hitting {
                h.max(step * fac)
            } else {
                step * fac
            };
        } else {
            traj.rejected_steps += 1;
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            h = step * fac;
            if h < 1e-13 * t.abs().max(1.0) {
                if !ok {
                    let min_root = space.min_root(&y[..layout.r]);
                    return Err(Error::WallCollision { time: t, min_root });
                }
                return Err(Error::StepUnderflow { time: t, step: h });
            }
        }
    }
    Ok(traj)
}

/// Monitored quantities at one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorRecord {
    pub t: f64,
    pub energy: f64,
    pub invariants: Vec<f64>,
    pub spectra: Vec<Vec<Complex64>>,
}

pub fn monitor_record(
    space: &SymmetricSpace,
    t: f64,
    pt: &PhasePoint,
    specs: &[InvariantSpec],
    lax_xs: &[f64],
) -> Result<MonitorRecord> {
    let energy = hamiltonian(space, pt)?;
    let invariants = specs
        .iter()
        .map(|s| invariant_value(space, s, pt))
        .collect::<Result<Vec<_>>>()?;
    let spectra = lax_xs
        .iter()
        .map(|&x| lax(space, pt, x).map(|l| l.spectrum()))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonitorRecord {
        t,
        energy,
        invariants,
        spectra,
    })
}

/// Maximum drifts over a trajectory, relative to the initial values.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    /// `max |H(t) - H(0)| / |H(0)|` (absolute when `H(0) = 0`).
    pub energy: f64,
    /// `max |v(t) - v(0)| / max(|v(0)|, 1)` per invariant.
    pub invariants: Vec<(InvariantSpec, f64)>,
    /// Matched spectral distance over `max(|lambda(0)|_inf, 1)` per spectral parameter.
    pub lax_spectra: Vec<(f64, f64)>,
}

impl DriftReport {
    pub fn max_invariant(&self) -> f64 {
        self.invariants.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }

    pub fn max_spectral(&self) -> f64 {
        self.lax_spectra.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }
}

pub fn drift(
    records: &[MonitorRecord],
    specs: &[InvariantSpec],
    lax_xs: &[f64],
) -> Result<DriftReport> {
    let first = records
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty trajectory".into()))?;
    let h0 = first.energy;
    let mut energy: f64 = 0.0;
    let mut inv = vec![0.0f64; specs.len()];
    let mut spec_drift = vec![0.0f64; lax_xs.len()];
    for r in records {
        let de = (r.energy - h0).abs();
        energy = energy.max(if h0 != 0.0 { de / h0.abs() } else { de });
        for (j, v) in r.invariants.iter().enumerate() {
            let v0 = first.invariants[j];
            inv[j] = inv[j].max((v - v0).abs() / v0.abs().max(1.0));
        }
        for (j, s) in r.spectra.iter().enumerate() {
            let s0 = &first.spectra[j];
            let scale = s0.iter().map(|z| z.norm()).fold(1.0, f64::max);
            spec_drift[j] = spec_drift[j].max(linalg::spectrum_distance(s0, s) / scale);
        }
    }
    Ok(DriftReport {
        energy,
        invariants: specs.iter().copied().zip(inv).collect(),
        lax_spectra: lax_xs.iter().copied().zip(spec_drift).collect(),
    })
}

/// Per-spec drift of the monitored quantities along a trajectory.
pub fn monitor(
    space: &SymmetricSpace,
    traj: &Trajectory,
    specs: &[InvariantSpec],
    lax_xs: &[f64],
) -> Result<DriftReport> {
    let records = traj
        .samples
        .iter()
        .map(|s| monitor_record(space, s.t, &s.point, specs, lax_xs))
        .collect::<Result<Vec<_>>>()?;
    drift(&records, specs, lax_xs)
}
