//! JSON run configuration. Unknown keys are rejected everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use spin_calogero::algebra::{SpaceSpec, SymmetricSpace};
use spin_calogero::dynamics::{GaugeChoice, InvariantClass, InvariantSpec, PhasePoint};
use spin_calogero::models::{ModelFamily, SpinlessModel};
use spin_calogero::orbits::{self, OrbitSpec, SpinPoint};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    Su { m: usize, n: usize },
    Sl { k: usize },
}

/// Largest matrix size accepted from a config file.
pub const MAX_MATRIX_DIM: usize = 24;

impl SpaceConfig {
    pub fn spec(&self) -> SpaceSpec {
        match *self {
            SpaceConfig::Su { m, n } => SpaceSpec::SuMn { m, n },
            SpaceConfig::Sl { k } => SpaceSpec::SlKc { k },
        }
    }

    /// `spec()` after validation and the size limit.
    pub fn checked_spec(&self) -> Result<SpaceSpec, CliError> {
        let spec = self.spec();
        spec.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let dim = match spec {
            SpaceSpec::SuMn { m, n } => m.saturating_add(n),
            SpaceSpec::SlKc { k } => k,
        };
        if dim > MAX_MATRIX_DIM {
            return Err(CliError::Config(format!(
                "{spec} needs {dim}x{dim} matrices, limit is {MAX_MATRIX_DIM}"
            )));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinlessFamily {
    BCn,
    Cn,
    Dn,
    SutherlandA,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OrbitConfig {
    SuMn {
        #[serde(default)]
        upper_kappa: Option<f64>,
        #[serde(default)]
        lower_kappa: Option<f64>,
        #[serde(default)]
        central_x: f64,
    },
    Kks {
        kappa: f64,
    },
}

impl OrbitConfig {
    pub fn spec(&self) -> OrbitSpec {
        match *self {
            OrbitConfig::SuMn {
                upper_kappa,
                lower_kappa,
                central_x,
            } => OrbitSpec::SuMn {
                upper_kappa,
                lower_kappa,
                central_x,
            },
            OrbitConfig::Kks { kappa } => OrbitSpec::Kks { kappa },
        }
    }
}

/// Where the spin variable comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    /// Single-point reduced orbit of a catalog model; the rank is the space rank.
    Spinless {
        family: SpinlessFamily,
        kappa: f64,
        #[serde(default)]
        x: f64,
    },
    /// Random point of a coadjoint orbit, conjugated onto the slice.
    Orbit {
        orbit: OrbitConfig,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Generic spin with normal slice coefficients.
    RandomSpin {
        scale: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Explicit slice coefficients.
    Spin { xi: Vec<f64> },
    /// `xi = 0`.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeConfig {
    #[default]
    ThickSlice,
    Frozen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    TracePower,
    BlockInvariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    pub class: InvariantKind,
    pub k: u32,
    pub x: f64,
}

impl MonitorConfig {
    pub fn spec(&self) -> InvariantSpec {
        let class = match self.class {
            InvariantKind::TracePower => InvariantClass::TracePower(self.k),
            InvariantKind::BlockInvariant => InvariantClass::BlockInvariant(self.k),
        };
        InvariantSpec::new(class, self.x)
    }
}

/// Output file names, relative to the output directory.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub trajectory: Option<String>,
    pub report: Option<String>,
    pub spectrum: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Direct,
    Projection,
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub space: SpaceConfig,
    pub model: ModelConfig,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub t_end: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    pub sample_dt: f64,
    #[serde(default)]
    pub method: Option<Method>,
    #[serde(default)]
    pub gauge: GaugeConfig,
    #[serde(default)]
    pub monitors: Vec<MonitorConfig>,
    /// Spectral parameters of the Lax matrices to monitor.
    #[serde(default)]
    pub lax_x: Vec<f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// A validated run: everything needed to integrate.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub name: String,
    pub space: SymmetricSpace,
    pub point: PhasePoint,
    pub t_end: f64,
    pub tol: f64,
    pub samples: usize,
    pub gauge: GaugeChoice,
    pub monitors: Vec<InvariantSpec>,
    pub lax_x: Vec<f64>,
    pub method: Method,
    pub output: OutputConfig,
}

/// Parses either one configuration object or an array of them.
pub fn parse_configs(text: &str) -> Result<Vec<RunConfig>, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
    let entries = match value {
        serde_json::Value::Array(v) => v,
        v @ serde_json::Value::Object(_) => vec![v],
        _ => {
            return Err(CliError::Config(
                "config must be an object or an array of objects".into(),
            ))
        }
    };
    if entries.is_empty() {
        return Err(CliError::Config("config array is empty".into()));
    }
    entries
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            serde_json::from_value(v).map_err(|e| CliError::Config(format!("entry {i}: {e}")))
        })
        .collect()
}

fn model_family(family: SpinlessFamily, rank: usize, kappa: f64, x: f64) -> ModelFamily {
    match family {
        SpinlessFamily::BCn => ModelFamily::BCn { n: rank, kappa, x },
        SpinlessFamily::Cn => ModelFamily::Cn { n: rank, kappa, x },
        SpinlessFamily::Dn => ModelFamily::Dn { n: rank, kappa },
        SpinlessFamily::SutherlandA => ModelFamily::SutherlandA { k: rank, kappa },
    }
}

fn spin_point(
    space: &SymmetricSpace,
    model: &ModelConfig,
    seed: u64,
) -> spin_calogero::Result<SpinPoint> {
    match model {
        ModelConfig::Spinless { family, kappa, x } => {
            let rank = match space.spec() {
                SpaceSpec::SuMn { n, .. } => n,
                SpaceSpec::SlKc { k } => k,
            };
            SpinlessModel::new(model_family(*family, rank, *kappa, *x))?.xi_red(space)
        }
        ModelConfig::Orbit { orbit, seed: s } => {
            let spec = orbit.spec();
            spec.validate(space.spec())?;
            let xi = orbits::random_orbit_point(space, &spec, s.unwrap_or(seed))?;
            orbits::conjugate_onto_slice(space, &xi, 1e-12)
        }
        ModelConfig::RandomSpin { scale, seed: s } => {
            if !scale.is_finite() {
                return Err(spin_calogero::Error::InvalidArgument(format!(
                    "spin scale must be finite, got {scale}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(s.unwrap_or(seed));
            Ok(orbits::random_slice_spin(space, *scale, &mut rng))
        }
        ModelConfig::Spin { xi } => SpinPoint::from_coefficients(space, xi.clone()),
        ModelConfig::Free => Ok(SpinPoint::zero(space)),
    }
}

impl RunConfig {
    /// Checks the configuration and builds the initial phase point. `seed` is
    /// used for models that do not carry their own.
    pub fn prepare(
        &self,
        index: usize,
        seed: u64,
        method: Option<Method>,
    ) -> Result<Prepared, CliError> {
        let cfg = |e: spin_calogero::Error| CliError::Config(e.to_string());
        let spec = self.space.checked_spec()?;
        let space = SymmetricSpace::build(spec).map_err(cfg)?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(CliError::Config(format!(
                "t_end must be > 0, got {}",
                self.t_end
            )));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-4) {
            return Err(CliError::Config(format!(
                "tol must lie in (0, 1e-4], got {}",
                self.tol
            )));
        }
        if !(self.sample_dt > 0.0 && self.sample_dt <= self.t_end) {
            return Err(CliError::Config(format!(
                "sample_dt must lie in (0, t_end], got {}",
                self.sample_dt
            )));
        }
        let samples = (self.t_end / self.sample_dt - 1e-9).ceil().max(1.0) as usize;
        if samples > 1_000_000 {
            return Err(CliError::Config(format!("too many samples: {samples}")));
        }
        let xi = spin_point(&space, &self.model, seed).map_err(cfg)?;
        let point = PhasePoint::new(&space, self.q.clone().into(), self.p.clone().into(), xi)
            .map_err(cfg)?;
        let monitors: Vec<InvariantSpec> = self.monitors.iter().map(MonitorConfig::spec).collect();
        for m in &monitors {
            m.class.validate(spec).map_err(cfg)?;
            if !m.x.is_finite() {
                return Err(CliError::Config(format!(
                    "monitor x must be finite, got {}",
                    m.x
                )));
            }
        }
        if let Some(x) = self.lax_x.iter().find(|x| !x.is_finite()) {
            return Err(CliError::Config(format!("lax_x must be finite, got {x}")));
        }
        let name = self.name.clone().unwrap_or_else(|| format!("run{index}"));
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            return Err(CliError::Config(format!("invalid run name {name:?}")));
        }
        let gauge = match self.gauge {
            GaugeConfig::ThickSlice => GaugeChoice::ThickSlice,
            GaugeConfig::Frozen => GaugeChoice::Frozen,
        };
        Ok(Prepared {
            name,
            space,
            point,
            t_end: self.t_end,
            tol: self.tol,
            samples,
            gauge,
            monitors,
            lax_x: self.lax_x.clone(),
            method: method.or(self.method).unwrap_or_default(),
            output: self.output.clone(),
        })
    }
}

/// Input of the `verify` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub spaces: Vec<SpaceConfig>,
    /// `BC_n` orbit parameters to run the reduction check on.
    #[serde(default)]
    pub bc_params: Vec<BcParams>,
    #[serde(default = "default_verify_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_verify_samples() -> usize {
    20
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcParams {
    pub n: usize,
    pub kappa: f64,
    pub x: f64,
}

pub fn parse_verify(text: &str) -> Result<VerifyConfig, CliError> {
    let v: VerifyConfig =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    if v.spaces.is_empty() {
        return Err(CliError::Config("space list is empty".into()));
    }
    if v.samples == 0 || v.samples > 100_000 {
        return Err(CliError::Config(format!(
            "samples must lie in [1, 100000], got {}",
            v.samples
        )));
    }
    for s in &v.spaces {
        s.checked_spec()?;
    }
    if let Some(p) = v
        .bc_params
        .iter()
        .find(|p| p.n == 0 || p.n >= MAX_MATRIX_DIM / 2)
    {
        return Err(CliError::Config(format!(
            "bc_params n must lie in [1, {}], got {}",
            MAX_MATRIX_DIM / 2 - 1,
            p.n
        )));
    }
    Ok(v)
}
