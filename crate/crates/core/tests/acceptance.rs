//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spin_calogero::algebra::{SpaceSpec, SymmetricSpace};
use spin_calogero::dynamics::{
    bracket_formula, flow_projection, freezing_solve, hamiltonian, identity_413, identity_416,
    integrate_direct, integrate_direct_with, invariant_value, monitor, random_phase_point,
    GaugeChoice, IntegratorOptions, InvariantClass, InvariantSpec, PhasePoint,
};
use spin_calogero::linalg;
use spin_calogero::models::{machinery_residual_on, ModelFamily, SpinlessModel};
use spin_calogero::orbits::{
    bc_couplings, build_slice_point, emptiness_probe, moment_map, reduce_orbit_check, SpinPoint,
};

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: String) -> Outcome {
    Outcome { passed, summary }
}

fn su(m: usize, n: usize) -> SymmetricSpace {
    SymmetricSpace::build(SpaceSpec::SuMn { m, n }).unwrap()
}

fn sl(k: usize) -> SymmetricSpace {
    SymmetricSpace::build(SpaceSpec::SlKc { k }).unwrap()
}

fn all_small_spaces() -> Vec<SymmetricSpace> {
    let mut v = Vec::new();
    for total in 2..=7 {
        for n in 1..=total / 2 {
            v.push(su(total - n, n));
        }
    }
    v.extend((2..=4).map(sl));
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn basis_correctness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let spaces = all_small_spaces();
    for s in &spaces {
        let c = s.basis_check();
        worst = worst.max(c.max_residual());
        ok &= c.passed(1e-12);
    }
    outcome(
        ok,
        format!("{} spaces, max residual {worst:.2e}", spaces.len()),
    )
}

fn slice_momentum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let spaces = all_small_spaces();
    for s in &spaces {
        for _ in 0..100 {
            let pt = random_phase_point(s, 1.0, &mut rng);
            let up = build_slice_point(s, pt.q(), pt.p(), pt.xi()).unwrap();
            worst = worst.max(moment_map(s, &up).unwrap().norm());
        }
    }
    outcome(
        worst < 1e-10,
        format!("{} spaces x 100 draws, max |Psi| {worst:.2e}", spaces.len()),
    )
}

const LAX_X: [f64; 6] = [0.0, 0.5, -0.5, 1.0, -1.0, 2.0];

fn isospectrality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for s in [su(2, 1), su(2, 2), su(3, 1)] {
        for _ in 0..2 {
            let pt = random_phase_point(&s, 0.7, &mut rng);
            let tr = integrate_direct(&s, &pt, 10.0, 1e-10).unwrap();
            worst = worst.max(monitor(&s, &tr, &[], &LAX_X).unwrap().max_spectral());
        }
    }
    outcome(
        worst < 1e-7,
        format!("su(2,1), su(2,2), su(3,1) generic spin, max relative drift {worst:.2e}"),
    )
}

fn m_invariant_monitors(s: &SymmetricSpace) -> Vec<InvariantSpec> {
    let mut v = vec![
        InvariantSpec::new(InvariantClass::TracePower(2), 0.5),
        InvariantSpec::new(InvariantClass::TracePower(3), 1.0),
        InvariantSpec::new(InvariantClass::TracePower(4), -0.5),
    ];
    if let SpaceSpec::SuMn { .. } = s.spec() {
        v.push(InvariantSpec::new(InvariantClass::BlockInvariant(1), 1.0));
        v.push(InvariantSpec::new(InvariantClass::BlockInvariant(2), 0.5));
    }
    v
}

fn cross_case(s: &SymmetricSpace, pt: &PhasePoint) -> (f64, f64) {
    let opts = IntegratorOptions {
        samples: 10,
        ..Default::default()
    };
    let tr = integrate_direct_with(s, pt, 5.0, &opts).unwrap();
    let specs = m_invariant_monitors(s);
    let (mut dq, mut dm): (f64, f64) = (0.0, 0.0);
    for smp in &tr.samples {
        let proj = flow_projection(s, pt, InvariantClass::TracePower(2), smp.t).unwrap();
        dq = dq.max(max_diff(proj.q().coords(), smp.point.q().coords()));
        for spec in &specs {
            let a = invariant_value(s, spec, &proj).unwrap();
            let b = invariant_value(s, spec, &smp.point).unwrap();
            dm = dm.max((a - b).abs() / b.abs().max(1.0));
        }
        let (a, b) = (
            hamiltonian(s, &proj).unwrap(),
            hamiltonian(s, &smp.point).unwrap(),
        );
        dm = dm.max((a - b).abs() / b.abs().max(1.0));
    }
    (dq, dm)
}

// Spread out and moving apart, so walls without a repulsive term are never reached.
fn outward(s: &SymmetricSpace, shift: f64) -> (Vec<f64>, Vec<f64>) {
    let (r, centre) = match s.spec() {
        SpaceSpec::SuMn { n, .. } => (n, -1.0),
        SpaceSpec::SlKc { k } => (k, (k as f64 - 1.0) / 2.0),
    };
    let shift = if centre > 0.0 { 0.0 } else { shift };
    let q = (0..r)
        .map(|j| 1.5 * (r as f64 - 1.0 - j as f64 - centre) + shift)
        .collect();
    let p = (0..r)
        .map(|j| 0.8 * (r as f64 - 1.0 - j as f64 - centre))
        .collect();
    (q, p)
}

fn spinless_point(s: &SymmetricSpace, family: ModelFamily, shift: f64) -> PhasePoint {
    let (q, p) = outward(s, shift);
    let xi = SpinlessModel::new(family).unwrap().xi_red(s).unwrap();
    PhasePoint::new(s, q.into(), p.into(), xi).unwrap()
}

fn cross_integrator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut dq, mut dm): (f64, f64) = (0.0, 0.0);
    let mut cases = Vec::new();
    let s21 = su(2, 1);
    let s22 = su(2, 2);
    let s31 = su(3, 1);
    cases.push((
        &s21,
        spinless_point(
            &s21,
            ModelFamily::BCn {
                n: 1,
                kappa: 1.0,
                x: 0.3,
            },
            0.0,
        ),
    ));
    cases.push((
        &s22,
        spinless_point(
            &s22,
            ModelFamily::Cn {
                n: 2,
                kappa: 1.0,
                x: 0.3,
            },
            0.0,
        ),
    ));
    cases.push((
        &s22,
        spinless_point(&s22, ModelFamily::Dn { n: 2, kappa: 1.3 }, 0.2),
    ));
    cases.push((
        &s31,
        spinless_point(&s31, ModelFamily::Dn { n: 1, kappa: 1.3 }, 0.0),
    ));
    for s in [&s21, &s22, &s31] {
        for _ in 0..2 {
            cases.push((s, random_phase_point(s, 0.7, &mut rng)));
        }
    }
    for (s, pt) in &cases {
        let (a, b) = cross_case(s, pt);
        dq = dq.max(a);
        dm = dm.max(b);
    }
    outcome(
        dq < 1e-6 && dm < 1e-6,
        format!(
            "{} runs on [0,5], max |dq| {dq:.2e}, max monitor diff {dm:.2e}",
            cases.len()
        ),
    )
}

fn plus_class(s: &SymmetricSpace, k: u32) -> InvariantClass {
    match s.spec() {
        SpaceSpec::SuMn { .. } => InvariantClass::BlockInvariant(k),
        SpaceSpec::SlKc { .. } => InvariantClass::TracePower(k),
    }
}

fn bracket_involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut g, mut mixed, mut i413, mut i416): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let spaces = [su(2, 1), su(2, 2), su(3, 1), su(3, 2), sl(3)];
    for s in &spaces {
        for _ in 0..200 {
            let pt = random_phase_point(s, 0.7, &mut rng);
            let a = InvariantClass::TracePower(rng.random_range(1..=3));
            let b = InvariantClass::TracePower(rng.random_range(1..=3));
            let f = plus_class(s, rng.random_range(1..=2));
            let x = rng.random_range(-1.5..1.5);
            let y = rng.random_range(-1.5..1.5);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            g = g.max(bracket_formula(s, a, x, b, y, &pt).unwrap().abs());
            mixed = mixed.max(bracket_formula(s, f, x, b, sign, &pt).unwrap().abs());
            i413 = i413.max(identity_413(s, f, x, b, y, &pt).unwrap());
            i416 = i416.max(identity_416(s, a, x, b, y, &pt).unwrap());
        }
    }
    let worst = g.max(mixed).max(i413).max(i416);
    outcome(
        worst < 1e-10,
        format!(
            "{} spaces x 200 draws: G-inv {g:.2e}, mixed {mixed:.2e}, identity_413 {i413:.2e}, identity_416 {i416:.2e}",
            spaces.len()
        ),
    )
}

fn non_involution() -> Outcome {
    let s = su(2, 2);
    let seed = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = InvariantClass::BlockInvariant(1);
    let h = InvariantClass::BlockInvariant(2);
    for draw in 0..1000 {
        let pt = random_phase_point(&s, 1.0, &mut rng);
        let x = rng.random_range(-2.0..2.0);
        let y = rng.random_range(-2.0..2.0);
        let v = bracket_formula(&s, f, x, h, y, &pt).unwrap();
        if v.abs() > 1e-4 {
            return outcome(
                true,
                format!(
                    "witness on su(2,2): seed {seed}, draw {draw}, x {x:.6}, y {y:.6}, q {:?}, p {:?}, bracket {v:.3e}",
                    pt.q().coords(),
                    pt.p().coords()
                ),
            );
        }
    }
    outcome(false, "no witness in 1000 draws".into())
}

fn bc_reduction() -> Outcome {
    let mut reduction: f64 = 0.0;
    let mut reduction_ok = true;
    for (n, kappa, x) in [
        (1, 1.0, 0.0),
        (1, 2.0, -0.7),
        (2, 3.0, 1.0),
        (2, 1.0, -0.4),
        (3, 4.0, 0.5),
        (3, 2.0, -1.0),
    ] {
        let r = reduce_orbit_check(n, kappa, x, 50, n as u64).unwrap();
        reduction_ok &= r.passed;
        reduction = reduction
            .max(r.max_diag_residual)
            .max(r.max_slice_residual)
            .max(r.max_normal_form_residual)
            .max(r.max_gauge_residual);
    }
    let empty = emptiness_probe(2, 1.0, 0.5, 10_000, 7)
        .unwrap()
        .min_residual;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut relation: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let kappa = rng.random_range(0.01..10.0);
        let x = rng.random_range(-kappa..=kappa / n as f64);
        relation = relation.max(bc_couplings(n, kappa, x).unwrap().relation_residual().abs());
    }

    let mut machinery: f64 = 0.0;
    let mut entries = 0;
    for n in 1..=3 {
        let mut fams = vec![
            (
                ModelFamily::BCn {
                    n,
                    kappa: 2.0 * n as f64,
                    x: 0.7,
                },
                SpaceSpec::SuMn { m: n + 1, n },
            ),
            (
                ModelFamily::BCn {
                    n,
                    kappa: 1.0,
                    x: -0.5,
                },
                SpaceSpec::SuMn { m: n + 1, n },
            ),
            (
                ModelFamily::Cn {
                    n,
                    kappa: 1.0,
                    x: 0.3,
                },
                SpaceSpec::SuMn { m: n, n },
            ),
            (
                ModelFamily::Cn {
                    n,
                    kappa: 0.0,
                    x: 0.8,
                },
                SpaceSpec::SuMn { m: n, n },
            ),
        ];
        for m in n..=7 - n {
            fams.push((ModelFamily::Dn { n, kappa: 1.3 }, SpaceSpec::SuMn { m, n }));
        }
        fams.push((
            ModelFamily::SutherlandA {
                k: n + 1,
                kappa: 0.9,
            },
            SpaceSpec::SlKc { k: n + 1 },
        ));
        for (fam, spec) in fams {
            let model = SpinlessModel::new(fam).unwrap();
            machinery = machinery.max(machinery_residual_on(&model, spec, 100, entries).unwrap());
            entries += 1;
        }
    }
    let ok =
        reduction_ok && reduction < 1e-10 && empty > 1e-3 && relation < 1e-13 && machinery < 1e-12;
    outcome(
        ok,
        format!(
            "(a) reduction {reduction:.2e} (b) emptiness min {empty:.3e} (c) relation {relation:.2e} (d) machinery {machinery:.2e} over {entries} entries"
        ),
    )
}

fn catalog() -> Vec<(ModelFamily, SymmetricSpace)> {
    let mut v = Vec::new();
    for n in 1..=3 {
        v.push((
            ModelFamily::BCn {
                n,
                kappa: 2.0,
                x: 0.4,
            },
            su(n + 1, n),
        ));
        v.push((
            ModelFamily::Cn {
                n,
                kappa: 1.0,
                x: 0.3,
            },
            su(n, n),
        ));
        v.push((ModelFamily::Dn { n, kappa: 1.3 }, su(n, n)));
        v.push((ModelFamily::Dn { n, kappa: 1.3 }, su(n + 1, n)));
        v.push((
            ModelFamily::SutherlandA {
                k: n + 1,
                kappa: 0.9,
            },
            sl(n + 1),
        ));
    }
    v
}

fn freezing_gauge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut frozen, mut drift): (f64, f64) = (0.0, 0.0);
    let mut ok = true;
    let entries = catalog();
    for (fam, s) in &entries {
        let mu = SpinlessModel::new(*fam).unwrap().xi_red(s).unwrap();
        for _ in 0..20 {
            let q = random_phase_point(s, 0.0, &mut rng).q().clone();
            match freezing_solve(s, &q, &mu) {
                Ok(sol) => frozen = frozen.max(sol.frozen_residual),
                Err(_) => ok = false,
            }
        }
        let pt = spinless_point(s, *fam, 0.1);
        let opts = IntegratorOptions {
            samples: 20,
            gauge: GaugeChoice::Frozen,
            ..Default::default()
        };
        let tr = integrate_direct_with(s, &pt, 5.0, &opts).unwrap();
        for smp in &tr.samples {
            drift = drift.max(linalg::frobenius(&(smp.point.xi().matrix() - mu.matrix())));
        }
    }
    outcome(
        ok && frozen < 1e-8 && drift < 1e-7,
        format!("{} entries: all solved {ok}, max frozen residual {frozen:.2e}, max |xi(t) - mu| {drift:.2e}", entries.len()),
    )
}

fn energy_and_free_motion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut energy: f64 = 0.0;
    for s in [su(2, 1), su(2, 2), su(3, 1), su(3, 2), sl(3)] {
        let pt = random_phase_point(&s, 0.7, &mut rng);
        let tr = integrate_direct(&s, &pt, 10.0, 1e-10).unwrap();
        energy = energy.max(monitor(&s, &tr, &[], &[]).unwrap().energy);
    }
    for (fam, s) in catalog().iter().step_by(2) {
        let pt = spinless_point(s, *fam, 0.3);
        let tr = integrate_direct(s, &pt, 10.0, 1e-10).unwrap();
        energy = energy.max(monitor(s, &tr, &[], &[]).unwrap().energy);
    }
    let mut linear: f64 = 0.0;
    for s in [su(2, 1), su(3, 2), sl(4)] {
        let (q, p) = outward(&s, rng.random_range(0.0..0.5));
        let start = PhasePoint::new(&s, q.into(), p.into(), SpinPoint::zero(&s)).unwrap();
        let tr = integrate_direct(&s, &start, 10.0, 1e-10).unwrap();
        for smp in &tr.samples {
            let want: Vec<f64> = start
                .q()
                .coords()
                .iter()
                .zip(start.p().coords())
                .map(|(q, p)| q + p * smp.t)
                .collect();
            let scale = want.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            linear = linear.max(max_diff(smp.point.q().coords(), &want) / scale);
        }
    }
    outcome(
        energy < 1e-8 && linear < 1e-10,
        format!("max relative energy drift {energy:.2e}, xi = 0 deviation from linear {linear:.2e} (tol 1e-10)"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        (
            "basis correctness",
            basis_correctness,
            Duration::from_secs(10),
        ),
        (
            "slice/momentum consistency",
            slice_momentum,
            Duration::from_secs(10),
        ),
        ("isospectrality", isospectrality, Duration::from_secs(120)),
        (
            "cross-integrator oracle",
            cross_integrator,
            Duration::from_secs(120),
        ),
        (
            "bracket involution",
            bracket_involution,
            Duration::from_secs(30),
        ),
        (
            "non-involution witness",
            non_involution,
            Duration::from_secs(30),
        ),
        ("BC reduction", bc_reduction, Duration::from_secs(60)),
        ("freezing gauge", freezing_gauge, Duration::from_secs(60)),
        (
            "energy and free motion",
            energy_and_free_motion,
            Duration::from_secs(30),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let passed = out.passed && in_time;
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {} [{:.1} s of {} s]",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            out.summary,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
