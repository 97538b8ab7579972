//! The `verify` command: structural checks on a list of spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spin_calogero::algebra::{SpaceSpec, SymmetricSpace};
use spin_calogero::dynamics::{
    bracket_formula, freezing_solve, identity_413, identity_416, random_phase_point, InvariantClass,
};
use spin_calogero::models::{machinery_residual_on, ModelFamily, SpinlessModel};
use spin_calogero::orbits::{
    self, bc_couplings, build_slice_point, check_admissible, moment_map, ReducedOrbitCase,
};

use crate::config::VerifyConfig;
use crate::output::Provenance;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub space: Option<String>,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn residual(
        name: impl Into<String>,
        space: Option<SpaceSpec>,
        residual: f64,
        tol: f64,
    ) -> Self {
        Check {
            name: name.into(),
            space: space.map(|s| s.to_string()),
            residual: Some(residual),
            tolerance: Some(tol),
            passed: residual < tol,
            detail: None,
        }
    }

    fn failed(name: impl Into<String>, space: Option<SpaceSpec>, detail: String) -> Self {
        Check {
            name: name.into(),
            space: space.map(|s| s.to_string()),
            residual: None,
            tolerance: None,
            passed: false,
            detail: Some(detail),
        }
    }

    fn from_result(
        name: &str,
        space: Option<SpaceSpec>,
        r: spin_calogero::Result<f64>,
        tol: f64,
    ) -> Self {
        match r {
            Ok(v) => Check::residual(name, space, v, tol),
            Err(e) => Check::failed(name, space, e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub command: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn max_over<F>(samples: usize, mut f: F) -> spin_calogero::Result<f64>
where
    F: FnMut() -> spin_calogero::Result<f64>,
{
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        worst = worst.max(f()?.abs());
    }
    Ok(worst)
}

/// Catalog models whose reduced orbit lives on `spec`.
pub fn catalog_for(spec: SpaceSpec) -> Vec<ModelFamily> {
    match spec {
        SpaceSpec::SuMn { m, n } => {
            let mut v = vec![ModelFamily::Dn { n, kappa: 1.3 }];
            if m == n + 1 {
                v.push(ModelFamily::BCn {
                    n,
                    kappa: 2.0,
                    x: 0.5,
                });
                v.push(ModelFamily::BCn {
                    n,
                    kappa: 1.0,
                    x: 0.0,
                });
            }
            if m == n {
                v.push(ModelFamily::Cn {
                    n,
                    kappa: 1.0,
                    x: 0.3,
                });
                v.push(ModelFamily::Cn {
                    n,
                    kappa: 0.0,
                    x: 0.7,
                });
            }
            v
        }
        SpaceSpec::SlKc { k } => vec![ModelFamily::SutherlandA { k, kappa: 1.0 }],
    }
}

// Draw ranges for the bracket identities. The residuals are absolute, and
// degree-3 block invariants at |x| = 2 already reach 1e-9 from round-off alone.
const SPIN_SCALE: f64 = 0.7;
const X_RANGE: f64 = 1.5;

fn space_checks(space: &SymmetricSpace, samples: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let spec = space.spec();
    let s = Some(spec);
    let mut out = Vec::new();
    let basis = space.basis_check();
    let mut c = Check::residual("basis", s, basis.max_residual(), 1e-12);
    c.passed = basis.passed(1e-12);
    if !basis.multiplicities || !basis.dimensions {
        c.detail = Some(format!(
            "multiplicities {}, dimensions {}",
            basis.multiplicities, basis.dimensions
        ));
    }
    out.push(c);

    let r = max_over(samples, || {
        let pt = random_phase_point(space, 1.0, rng);
        let up = build_slice_point(space, pt.q(), pt.p(), pt.xi())?;
        Ok(moment_map(space, &up)?.norm())
    });
    out.push(Check::from_result("slice_momentum", s, r, 1e-10));

    let r = max_over(samples, || {
        let pt = random_phase_point(space, SPIN_SCALE, rng);
        let (a, b) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let (x, y) = (
            rng.random_range(-X_RANGE..X_RANGE),
            rng.random_range(-X_RANGE..X_RANGE),
        );
        bracket_formula(
            space,
            InvariantClass::TracePower(a),
            x,
            InvariantClass::TracePower(b),
            y,
            &pt,
        )
    });
    out.push(Check::from_result("bracket_g_invariant", s, r, 1e-10));

    let plus_class = |k: u32| match spec {
        SpaceSpec::SuMn { .. } => InvariantClass::BlockInvariant(k),
        SpaceSpec::SlKc { .. } => InvariantClass::TracePower(k),
    };
    let r = max_over(samples, || {
        let pt = random_phase_point(space, SPIN_SCALE, rng);
        let f = plus_class(rng.random_range(1..=2));
        let h = InvariantClass::TracePower(rng.random_range(1..=3));
        let x = rng.random_range(-X_RANGE..X_RANGE);
        let y = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        bracket_formula(space, f, x, h, y, &pt)
    });
    out.push(Check::from_result("bracket_mixed", s, r, 1e-10));

    let r = max_over(samples, || {
        let pt = random_phase_point(space, SPIN_SCALE, rng);
        let f = plus_class(rng.random_range(1..=2));
        let h = InvariantClass::TracePower(rng.random_range(1..=3));
        identity_413(
            space,
            f,
            rng.random_range(-X_RANGE..X_RANGE),
            h,
            rng.random_range(-X_RANGE..X_RANGE),
            &pt,
        )
    });
    out.push(Check::from_result("identity_413", s, r, 1e-10));

    let r = max_over(samples, || {
        let pt = random_phase_point(space, SPIN_SCALE, rng);
        let f = InvariantClass::TracePower(rng.random_range(1..=3));
        let h = InvariantClass::TracePower(rng.random_range(1..=3));
        identity_416(
            space,
            f,
            rng.random_range(-X_RANGE..X_RANGE),
            h,
            rng.random_range(-X_RANGE..X_RANGE),
            &pt,
        )
    });
    out.push(Check::from_result("identity_416", s, r, 1e-10));

    for family in catalog_for(spec) {
        let label = format!("{family:?}");
        match SpinlessModel::new(family) {
            Ok(model) => {
                let r = machinery_residual_on(&model, spec, samples, rng.random());
                let mut c = Check::from_result("machinery_vs_closed_form", s, r, 1e-12);
                c.detail.get_or_insert(label.clone());
                out.push(c);
                let r = model.xi_red(space).and_then(|mu| {
                    max_over(samples, || {
                        let pt = random_phase_point(space, 0.0, rng);
                        Ok(freezing_solve(space, pt.q(), &mu)?.frozen_residual)
                    })
                });
                let mut c = Check::from_result("freezing", s, r, 1e-8);
                c.detail.get_or_insert(label);
                out.push(c);
            }
            Err(e) => out.push(Check::failed(
                "machinery_vs_closed_form",
                s,
                format!("{label}: {e}"),
            )),
        }
    }
    out
}

fn coupling_relation(draws: usize, rng: &mut ChaCha8Rng) -> Check {
    let r = max_over(draws, || {
        let n = rng.random_range(1..=6);
        let kappa = rng.random_range(0.01..10.0);
        let x = rng.random_range(-kappa..=kappa / n as f64);
        Ok(bc_couplings(n, kappa, x)?.relation_residual())
    });
    Check::from_result("coupling_relation", None, r, 1e-13)
}

fn reduction_check(n: usize, kappa: f64, x: f64, samples: usize, seed: u64) -> Check {
    let name = format!("reduction_bc(n={n}, kappa={kappa}, x={x})");
    if let Err(e) = check_admissible(ReducedOrbitCase::BC { kappa, x }, n) {
        return Check::failed(name, None, e.to_string());
    }
    match orbits::reduce_orbit_check(n, kappa, x, samples, seed) {
        Ok(r) => {
            let residual = r
                .max_diag_residual
                .max(r.max_slice_residual)
                .max(r.max_normal_form_residual)
                .max(r.max_gauge_residual);
            let mut c = Check::residual(name, None, residual, 1e-10);
            c.passed = r.passed && c.passed;
            c
        }
        Err(e) => Check::failed(name, None, e.to_string()),
    }
}

/// Runs every check; spaces run on up to `jobs` threads.
pub fn verify(cfg: &VerifyConfig, seed: u64, jobs: usize, config: &[u8]) -> VerifyReport {
    let seed = cfg.seed.unwrap_or(seed);
    let specs: Vec<(usize, SpaceSpec)> = cfg.spaces.iter().map(|s| s.spec()).enumerate().collect();
    let per_space = crate::commands::run_parallel(&specs, jobs, |(i, spec)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(*i as u64));
        match SymmetricSpace::build(*spec) {
            Ok(space) => space_checks(&space, cfg.samples, &mut rng),
            Err(e) => vec![Check::failed("build", Some(*spec), e.to_string())],
        }
    });
    let mut checks: Vec<Check> = per_space.into_iter().flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    checks.push(coupling_relation(1000, &mut rng));
    for p in &cfg.bc_params {
        checks.push(reduction_check(p.n, p.kappa, p.x, cfg.samples, seed));
    }
    VerifyReport {
        provenance: Provenance::new(config),
        command: "verify",
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
