use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use spin_calogero::dynamics::{
    flow_projection, hamiltonian, integrate_direct_with, lax, monitor, DriftReport,
    IntegratorOptions, InvariantClass, Sample, Trajectory,
};
use spin_calogero::linalg::sort_spectrum;
use spin_calogero::models::{ModelFamily, SpinlessModel};
use spin_calogero::Error;

use crate::config::{parse_configs, Method, Prepared};
use crate::error::CliError;
use crate::output::{self, Provenance};

/// Settings shared by all commands of one invocation.
#[derive(Debug, Clone)]
pub struct Context {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub jobs: usize,
    pub method: Option<Method>,
}

impl Default for Context {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("."),
            seed: 0,
            jobs: 1,
            method: None,
        }
    }
}

/// Runs `f` on every item with up to `jobs` worker threads, keeping input order.
pub fn run_parallel<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                results.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every item ran"))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantDrift {
    pub class: String,
    pub x: f64,
    pub drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralDrift {
    pub x: f64,
    pub drift: f64,
    /// Largest `|Im lambda|` seen along the run.
    pub max_abs_imag: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub command: &'static str,
    pub name: String,
    pub method: Method,
    pub space: String,
    pub t_end: f64,
    pub tol: f64,
    pub samples: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub max_orbit_correction: f64,
    pub initial_energy: f64,
    pub energy_drift: f64,
    pub invariant_drift: Vec<InvariantDrift>,
    pub lax_spectrum_drift: Vec<SpectralDrift>,
}

/// Files produced by one run, not yet written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub files: Vec<(PathBuf, String)>,
}

fn wall_error(e: Error, last_safe_time: f64) -> CliError {
    match e {
        Error::WallCollision { time, min_root } => CliError::Wall {
            last_safe_time: time,
            min_root,
        },
        Error::OutsideChamber { min_root } | Error::NotRegular { min_root } => CliError::Wall {
            last_safe_time,
            min_root,
        },
        Error::Degenerate { gap } => CliError::Wall {
            last_safe_time,
            min_root: gap,
        },
        other => CliError::Run(other.to_string()),
    }
}

/// Integrates one prepared run by the selected method.
pub fn trajectory(run: &Prepared) -> Result<Trajectory, CliError> {
    match run.method {
        Method::Direct => {
            let opts = IntegratorOptions {
                tol: run.tol,
                samples: run.samples,
                gauge: run.gauge,
                ..Default::default()
            };
            integrate_direct_with(&run.space, &run.point, run.t_end, &opts)
                .map_err(|e| wall_error(e, 0.0))
        }
        Method::Projection => {
            let mut samples = Vec::with_capacity(run.samples + 1);
            let mut last = 0.0;
            for j in 0..=run.samples {
                let t = run.t_end * j as f64 / run.samples as f64;
                let point =
                    flow_projection(&run.space, &run.point, InvariantClass::TracePower(2), t)
                        .map_err(|e| wall_error(e, last))?;
                samples.push(Sample { t, point });
                last = t;
            }
            Ok(Trajectory {
                samples,
                accepted_steps: 0,
                rejected_steps: 0,
                max_orbit_correction: 0.0,
            })
        }
    }
}

fn report(
    run: &Prepared,
    traj: &Trajectory,
    drift: &DriftReport,
    max_imag: &[f64],
    provenance: &Provenance,
    command: &'static str,
) -> Result<RunReport, CliError> {
    let h0 = hamiltonian(&run.space, &traj.samples[0].point)
        .map_err(|e| CliError::Run(e.to_string()))?;
    Ok(RunReport {
        provenance: provenance.clone(),
        command,
        name: run.name.clone(),
        method: run.method,
        space: run.space.spec().to_string(),
        t_end: run.t_end,
        tol: run.tol,
        samples: run.samples,
        accepted_steps: traj.accepted_steps,
        rejected_steps: traj.rejected_steps,
        max_orbit_correction: traj.max_orbit_correction,
        initial_energy: h0,
        energy_drift: drift.energy,
        invariant_drift: drift
            .invariants
            .iter()
            .map(|(s, d)| InvariantDrift {
                class: s.class.to_string(),
                x: s.x,
                drift: *d,
            })
            .collect(),
        lax_spectrum_drift: drift
            .lax_spectra
            .iter()
            .zip(max_imag)
            .map(|((x, d), im)| SpectralDrift {
                x: *x,
                drift: *d,
                max_abs_imag: *im,
            })
            .collect(),
    })
}

fn run_err(e: Error) -> CliError {
    CliError::Run(e.to_string())
}

/// Computes the trajectory CSV and drift report of one run.
pub fn simulate_one(
    run: &Prepared,
    out_dir: &Path,
    provenance: &Provenance,
) -> Result<RunOutput, CliError> {
    let traj = trajectory(run)?;
    let drift = monitor(&run.space, &traj, &run.monitors, &run.lax_x).map_err(run_err)?;
    let r = run.space.coord_len();
    let mut header = vec!["t".to_string()];
    header.extend((1..=r).map(|j| format!("q{j}")));
    header.extend((1..=r).map(|j| format!("p{j}")));
    header.push("H".into());
    let mut rows = Vec::with_capacity(traj.samples.len());
    for s in &traj.samples {
        let mut row = vec![s.t];
        row.extend_from_slice(s.point.q().coords());
        row.extend_from_slice(s.point.p().coords());
        row.push(hamiltonian(&run.space, &s.point).map_err(run_err)?);
        rows.push(row);
    }
    let max_imag = max_imag_parts(run, &traj)?;
    let rep = report(run, &traj, &drift, &max_imag, provenance, "simulate")?;
    let csv = output::csv(&header, rows.iter().map(Vec::as_slice));
    let traj_path = out_dir.join(
        run.output
            .trajectory
            .clone()
            .unwrap_or(format!("{}_trajectory.csv", run.name)),
    );
    let rep_path = out_dir.join(
        run.output
            .report
            .clone()
            .unwrap_or(format!("{}_report.json", run.name)),
    );
    let json = output::json(&rep);
    Ok(RunOutput {
        report: rep,
        files: vec![(traj_path, csv), (rep_path, json)],
    })
}

fn sorted_spectra(run: &Prepared, traj: &Trajectory) -> Result<Vec<Vec<Vec<f64>>>, CliError> {
    traj.samples
        .iter()
        .map(|s| {
            run.lax_x
                .iter()
                .map(|&x| {
                    let spec =
                        sort_spectrum(lax(&run.space, &s.point, x).map_err(run_err)?.spectrum());
                    Ok(spec.iter().flat_map(|z| [z.re, z.im]).collect())
                })
                .collect()
        })
        .collect()
}

fn max_imag_parts(run: &Prepared, traj: &Trajectory) -> Result<Vec<f64>, CliError> {
    let mut out = vec![0.0f64; run.lax_x.len()];
    for per_t in sorted_spectra(run, traj)? {
        for (j, v) in per_t.iter().enumerate() {
            let im = v
                .iter()
                .skip(1)
                .step_by(2)
                .fold(0.0f64, |a, b| a.max(b.abs()));
            out[j] = out[j].max(im);
        }
    }
    Ok(out)
}

/// Sorted Lax eigenvalues at every sample, one row per `(t, x)`.
pub fn spectrum_one(
    run: &Prepared,
    out_dir: &Path,
    provenance: &Provenance,
) -> Result<RunOutput, CliError> {
    let traj = trajectory(run)?;
    let drift = monitor(&run.space, &traj, &run.monitors, &run.lax_x).map_err(run_err)?;
    let size = run.space.matrix_size();
    let mut header = vec!["t".to_string(), "x".to_string()];
    for j in 1..=size {
        header.push(format!("re{j}"));
        header.push(format!("im{j}"));
    }
    let spectra = sorted_spectra(run, &traj)?;
    let mut rows = Vec::new();
    for (s, per_t) in traj.samples.iter().zip(&spectra) {
        for (x, vals) in run.lax_x.iter().zip(per_t) {
            let mut row = vec![s.t, *x];
            row.extend_from_slice(vals);
            rows.push(row);
        }
    }
    let max_imag = max_imag_parts(run, &traj)?;
    let rep = report(run, &traj, &drift, &max_imag, provenance, "spectrum")?;
    let csv = output::csv(&header, rows.iter().map(Vec::as_slice));
    let spec_path = out_dir.join(
        run.output
            .spectrum
            .clone()
            .unwrap_or(format!("{}_spectrum.csv", run.name)),
    );
    let rep_path = out_dir.join(
        run.output
            .report
            .clone()
            .unwrap_or(format!("{}_spectrum_report.json", run.name)),
    );
    let json = output::json(&rep);
    Ok(RunOutput {
        report: rep,
        files: vec![(spec_path, csv), (rep_path, json)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Simulate,
    Spectrum,
}

/// Parses and validates every entry, runs them, and writes the outputs of the
/// runs that succeeded. Returns the first failure in order of severity.
pub fn run_config(ctx: &Context, config: &[u8], kind: RunKind) -> Result<Vec<RunReport>, CliError> {
    let text =
        std::str::from_utf8(config).map_err(|_| CliError::Config("config is not UTF-8".into()))?;
    let configs = parse_configs(text)?;
    let mut prepared = configs
        .iter()
        .enumerate()
        .map(|(i, c)| c.prepare(i, ctx.seed, ctx.method))
        .collect::<Result<Vec<_>, _>>()?;
    if kind == RunKind::Spectrum {
        for p in &mut prepared {
            if p.lax_x.is_empty() {
                p.lax_x = vec![0.0, 1.0];
            }
        }
    }
    let mut names = HashSet::new();
    for p in &prepared {
        if !names.insert(p.name.clone()) {
            return Err(CliError::Config(format!("duplicate run name {:?}", p.name)));
        }
    }
    if !ctx.out_dir.is_dir() {
        return Err(CliError::Config(format!(
            "output directory {} does not exist",
            ctx.out_dir.display()
        )));
    }
    let provenance = Provenance::new(config);
    let results = run_parallel(&prepared, ctx.jobs, |p| match kind {
        RunKind::Simulate => simulate_one(p, &ctx.out_dir, &provenance),
        RunKind::Spectrum => spectrum_one(p, &ctx.out_dir, &provenance),
    });
    let mut paths = HashSet::new();
    for out in results.iter().flatten() {
        for (path, _) in &out.files {
            if !paths.insert(path.clone()) {
                return Err(CliError::Config(format!(
                    "two outputs share the path {}",
                    path.display()
                )));
            }
        }
    }
    let mut reports = Vec::new();
    let mut failure: Option<CliError> = None;
    for r in results {
        match r {
            Ok(out) => {
                for (path, contents) in &out.files {
                    output::write_atomic(path, contents.as_bytes())?;
                }
                reports.push(out.report);
            }
            Err(e) => {
                if failure
                    .as_ref()
                    .is_none_or(|f| e.exit_code() > f.exit_code())
                {
                    failure = Some(e);
                }
            }
        }
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(reports),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CouplingsReport {
    pub n: usize,
    pub kappa: f64,
    pub x: f64,
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
    /// `g_1^2 - 2 g^2 + sqrt(2) g g_2`.
    pub relation_residual: f64,
}

pub fn couplings(n: usize, kappa: f64, x: f64) -> Result<CouplingsReport, CliError> {
    let model = SpinlessModel::new(ModelFamily::BCn { n, kappa, x })
        .map_err(|e| CliError::Config(e.to_string()))?;
    let c = model.bc_couplings().expect("BC family carries couplings");
    Ok(CouplingsReport {
        n,
        kappa,
        x,
        g: c.g,
        g1: c.g1,
        g2: c.g2,
        relation_residual: c.relation_residual(),
    })
}
