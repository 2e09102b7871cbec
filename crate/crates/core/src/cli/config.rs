//! Scenario configuration: a flat set of namespaced `key = value` entries.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::integrator::IntegratorConfig;
use crate::model::{CouplingSpec, ModelParams, NetworkState};
use crate::scan::{Grid, ScanPlane};
use crate::stability::SeedGrid;
use crate::synchrony::DetectionConfig;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value {value:?} for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// Initial condition of a simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Every burster starts at `z = r0`, `u = u0`.
    Uniform { r0: f64, u0: f64 },
    /// `z_j = r0·exp(2πij/n)`, `u = u0`.
    Splay { r0: f64, u0: f64 },
    Explicit {
        z_re: Vec<f64>,
        z_im: Vec<f64>,
        u: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    /// Fast-subsystem equilibria against `u`.
    Branch,
    /// Stability boundaries in a `(λ, u)` plane.
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub kind: ScanKind,
    pub plane: ScanPlane,
    pub u_start: f64,
    pub u_end: f64,
    pub u_n: usize,
    pub lambda_start: f64,
    pub lambda_end: f64,
    pub lambda_n: usize,
    pub seeds: SeedGrid,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            kind: ScanKind::Branch,
            plane: ScanPlane::Sigma,
            u_start: -0.99,
            u_end: -0.01,
            u_n: 99,
            lambda_start: 2.0,
            lambda_end: 6.0,
            lambda_n: 21,
            seeds: SeedGrid::default(),
        }
    }
}

impl ScanOptions {
    pub fn u_grid(&self) -> Result<Grid, ConfigError> {
        Grid::new(self.u_start, self.u_end, self.u_n)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn lambda_grid(&self) -> Result<Grid, ConfigError> {
        Grid::new(self.lambda_start, self.lambda_end, self.lambda_n)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn u_window(&self) -> (f64, f64) {
        (self.u_start.min(self.u_end), self.u_start.max(self.u_end))
    }
}

/// Everything a run needs. The coupling is all-to-all with `coupling.n` bursters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Preset this scenario started from, if any.
    pub preset: Option<String>,
    pub model: ModelParams,
    pub n: usize,
    pub kappa1: f64,
    pub kappa2: f64,
    pub integrator: IntegratorConfig,
    pub init: InitialCondition,
    pub analysis: DetectionConfig,
    pub scan: ScanOptions,
    /// Number of consecutive seeds for stochastic reproduction runs.
    pub seeds: u64,
    pub out_dir: PathBuf,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            preset: None,
            model: ModelParams {
                omega: 0.01,
                a: 0.8,
                eta: 0.05,
                sigma: 3.0,
                r_m: 1.35,
            },
            n: 2,
            kappa1: 0.001,
            kappa2: 0.2,
            integrator: IntegratorConfig {
                t_end: 3000.0,
                sample_dt: 0.05,
                ..IntegratorConfig::default()
            },
            init: InitialCondition::Uniform { r0: 1e-3, u0: -0.5 },
            analysis: DetectionConfig::default(),
            scan: ScanOptions::default(),
            seeds: 10,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse::<f64>(key, s))
        .collect()
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    if v.len() >= 2 && v.starts_with('"') && v.ends_with('"') {
        &v[1..v.len() - 1]
    } else {
        v
    }
}

/// Splits config text into `(line number, key, value)` triples. Blank lines and
/// `#` comments are skipped; a `#` after a value starts a trailing comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            text: raw.to_string(),
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            });
        }
        out.push((i + 1, k.to_string(), unquote(v).to_string()));
    }
    Ok(out)
}

/// Splits a `--set key=value` override.
pub fn parse_override(s: &str) -> Result<(String, String), ConfigError> {
    let (k, v) = s.split_once('=').ok_or_else(|| ConfigError::Syntax {
        line: 0,
        text: s.to_string(),
    })?;
    Ok((k.trim().to_string(), unquote(v).to_string()))
}

impl ScenarioConfig {
    /// Applies one `key = value` entry.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "preset" => self.preset = Some(v.to_string()),
            "model.omega" => self.model.omega = parse(key, v)?,
            "model.a" => self.model.a = parse(key, v)?,
            "model.eta" => self.model.eta = parse(key, v)?,
            "model.sigma" => self.model.sigma = parse(key, v)?,
            "model.r_m" => self.model.r_m = parse(key, v)?,
            "coupling.n" => self.n = parse(key, v)?,
            "coupling.kappa1" => self.kappa1 = parse(key, v)?,
            "coupling.kappa2" => self.kappa2 = parse(key, v)?,
            "integrator.rel_tol" => self.integrator.rel_tol = parse(key, v)?,
            "integrator.abs_tol" => self.integrator.abs_tol = parse(key, v)?,
            "integrator.dt" => self.integrator.dt = parse(key, v)?,
            "integrator.t_end" => self.integrator.t_end = parse(key, v)?,
            "integrator.sample_dt" => self.integrator.sample_dt = parse(key, v)?,
            "integrator.noise_amplitude" => self.integrator.noise_amplitude = parse(key, v)?,
            "integrator.rng_seed" => self.integrator.rng_seed = parse(key, v)?,
            "integrator.max_steps" => self.integrator.max_steps = parse(key, v)?,
            "init.kind" => {
                let (r0, u0) = self.init_r0_u0();
                self.init = match v {
                    "uniform" => InitialCondition::Uniform { r0, u0 },
                    "splay" => InitialCondition::Splay { r0, u0 },
                    "explicit" => InitialCondition::Explicit {
                        z_re: vec![r0; self.n],
                        z_im: vec![0.0; self.n],
                        u: vec![u0; self.n],
                    },
                    _ => {
                        return Err(ConfigError::InvalidValue {
                            key: key.into(),
                            value: v.into(),
                            reason: "expected uniform, splay or explicit".into(),
                        })
                    }
                }
            }
            "init.r0" | "init.u0" => {
                let x: f64 = parse(key, v)?;
                match &mut self.init {
                    InitialCondition::Uniform { r0, u0 } | InitialCondition::Splay { r0, u0 } => {
                        if key == "init.r0" {
                            *r0 = x
                        } else {
                            *u0 = x
                        }
                    }
                    InitialCondition::Explicit { .. } => {
                        return Err(ConfigError::Invalid(format!(
                            "`{key}` needs init.kind = uniform or splay"
                        )))
                    }
                }
            }
            "init.z_re" | "init.z_im" | "init.u" => {
                let xs = parse_list(key, v)?;
                let InitialCondition::Explicit { z_re, z_im, u } = &mut self.init else {
                    return Err(ConfigError::Invalid(format!(
                        "`{key}` needs init.kind = explicit"
                    )));
                };
                match key {
                    "init.z_re" => *z_re = xs,
                    "init.z_im" => *z_im = xs,
                    _ => *u = xs,
                }
            }
            "analysis.r_hi" => self.analysis.r_hi = parse(key, v)?,
            "analysis.r_lo" => self.analysis.r_lo = parse(key, v)?,
            "analysis.transient_fraction" => self.analysis.transient_fraction = parse(key, v)?,
            "analysis.window_periods" => self.analysis.window_periods = parse(key, v)?,
            "analysis.hop_periods" => self.analysis.hop_periods = parse(key, v)?,
            "analysis.persistence" => self.analysis.persistence = parse(key, v)?,
            "analysis.radius_floor" => self.analysis.radius_floor = parse(key, v)?,
            "analysis.mixed_is_state" => self.analysis.mixed_is_state = parse(key, v)?,
            "scan.kind" => {
                self.scan.kind = match v {
                    "branch" => ScanKind::Branch,
                    "boundary" => ScanKind::Boundary,
                    _ => {
                        return Err(ConfigError::InvalidValue {
                            key: key.into(),
                            value: v.into(),
                            reason: "expected branch or boundary".into(),
                        })
                    }
                }
            }
            "scan.plane" => self.scan.plane = parse(key, v)?,
            "scan.u_start" => self.scan.u_start = parse(key, v)?,
            "scan.u_end" => self.scan.u_end = parse(key, v)?,
            "scan.u_n" => self.scan.u_n = parse(key, v)?,
            "scan.lambda_start" => self.scan.lambda_start = parse(key, v)?,
            "scan.lambda_end" => self.scan.lambda_end = parse(key, v)?,
            "scan.lambda_n" => self.scan.lambda_n = parse(key, v)?,
            "scan.seed_n_rl" => self.scan.seeds.n_rl = parse(key, v)?,
            "scan.seed_n_rt" => self.scan.seeds.n_rt = parse(key, v)?,
            "scan.seed_n_phi" => self.scan.seeds.n_phi = parse(key, v)?,
            "run.seeds" => self.seeds = parse(key, v)?,
            "output.dir" => self.out_dir = PathBuf::from(v),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    fn init_r0_u0(&self) -> (f64, f64) {
        match &self.init {
            InitialCondition::Uniform { r0, u0 } | InitialCondition::Splay { r0, u0 } => (*r0, *u0),
            InitialCondition::Explicit { .. } => (1e-3, -0.5),
        }
    }

    /// Applies every entry of a config text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (line, k, v) in parse_pairs(text)? {
            self.set(&k, &v).map_err(|e| match e {
                ConfigError::UnknownKey(k) => ConfigError::UnknownKey(format!("{k} (line {line})")),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Every key with its resolved value, in a fixed order. Feeding the result
    /// back through [`ScenarioConfig::apply_text`] reproduces `self`.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut v: Vec<(&str, String)> = Vec::new();
        if let Some(p) = &self.preset {
            v.push(("preset", p.clone()));
        }
        let m = &self.model;
        v.extend([
            ("model.omega", num(m.omega)),
            ("model.a", num(m.a)),
            ("model.eta", num(m.eta)),
            ("model.sigma", num(m.sigma)),
            ("model.r_m", num(m.r_m)),
            ("coupling.n", self.n.to_string()),
            ("coupling.kappa1", num(self.kappa1)),
            ("coupling.kappa2", num(self.kappa2)),
        ]);
        let ic = &self.integrator;
        v.extend([
            ("integrator.rel_tol", num(ic.rel_tol)),
            ("integrator.abs_tol", num(ic.abs_tol)),
            ("integrator.dt", num(ic.dt)),
            ("integrator.t_end", num(ic.t_end)),
            ("integrator.sample_dt", num(ic.sample_dt)),
            ("integrator.noise_amplitude", num(ic.noise_amplitude)),
            ("integrator.rng_seed", ic.rng_seed.to_string()),
            ("integrator.max_steps", ic.max_steps.to_string()),
        ]);
        match &self.init {
            InitialCondition::Uniform { r0, u0 } | InitialCondition::Splay { r0, u0 } => {
                let kind = if matches!(self.init, InitialCondition::Splay { .. }) {
                    "splay"
                } else {
                    "uniform"
                };
                v.push(("init.kind", kind.into()));
                v.push(("init.r0", num(*r0)));
                v.push(("init.u0", num(*u0)));
            }
            InitialCondition::Explicit { z_re, z_im, u } => {
                v.push(("init.kind", "explicit".into()));
                v.push(("init.z_re", join(z_re)));
                v.push(("init.z_im", join(z_im)));
                v.push(("init.u", join(u)));
            }
        }
        let a = &self.analysis;
        v.extend([
            ("analysis.r_hi", num(a.r_hi)),
            ("analysis.r_lo", num(a.r_lo)),
            ("analysis.transient_fraction", num(a.transient_fraction)),
            ("analysis.window_periods", num(a.window_periods)),
            ("analysis.hop_periods", num(a.hop_periods)),
            ("analysis.persistence", a.persistence.to_string()),
            ("analysis.radius_floor", num(a.radius_floor)),
            ("analysis.mixed_is_state", a.mixed_is_state.to_string()),
        ]);
        let s = &self.scan;
        v.extend([
            (
                "scan.kind",
                match s.kind {
                    ScanKind::Branch => "branch",
                    ScanKind::Boundary => "boundary",
                }
                .to_string(),
            ),
            ("scan.plane", s.plane.name().to_string()),
            ("scan.u_start", num(s.u_start)),
            ("scan.u_end", num(s.u_end)),
            ("scan.u_n", s.u_n.to_string()),
            ("scan.lambda_start", num(s.lambda_start)),
            ("scan.lambda_end", num(s.lambda_end)),
            ("scan.lambda_n", s.lambda_n.to_string()),
            ("scan.seed_n_rl", s.seeds.n_rl.to_string()),
            ("scan.seed_n_rt", s.seeds.n_rt.to_string()),
            ("scan.seed_n_phi", s.seeds.n_phi.to_string()),
            ("run.seeds", self.seeds.to_string()),
            ("output.dir", self.out_dir.display().to_string()),
        ]);
        v.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Canonical config text: one `key = value` line per entry.
    pub fn to_text(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn coupling(&self) -> CouplingSpec {
        CouplingSpec::all_to_all(self.n, self.kappa1, self.kappa2)
    }

    /// Checks everything that can be checked without running anything.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: &dyn fmt::Display| ConfigError::Invalid(e.to_string());
        self.model.validate().map_err(|e| invalid(&e))?;
        if self.n == 0 {
            return Err(ConfigError::Invalid("coupling.n must be at least 1".into()));
        }
        self.integrator.validate().map_err(|e| invalid(&e))?;
        self.analysis.validate().map_err(|e| invalid(&e))?;
        if let InitialCondition::Explicit { z_re, z_im, u } = &self.init {
            if z_re.len() != self.n || z_im.len() != self.n || u.len() != self.n {
                return Err(ConfigError::Invalid(format!(
                    "explicit initial condition needs {} values per list",
                    self.n
                )));
            }
        }
        if self.seeds == 0 {
            return Err(ConfigError::Invalid("run.seeds must be at least 1".into()));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<NetworkState, ConfigError> {
        let n = self.n;
        let (z, u): (Vec<Complex64>, Vec<f64>) = match &self.init {
            InitialCondition::Uniform { r0, u0 } => {
                (vec![Complex64::new(*r0, 0.0); n], vec![*u0; n])
            }
            InitialCondition::Splay { r0, u0 } => (
                (0..n)
                    .map(|j| Complex64::from_polar(*r0, 2.0 * PI * j as f64 / n as f64))
                    .collect(),
                vec![*u0; n],
            ),
            InitialCondition::Explicit { z_re, z_im, u } => (
                z_re.iter()
                    .zip(z_im)
                    .map(|(&re, &im)| Complex64::new(re, im))
                    .collect(),
                u.clone(),
            ),
        };
        NetworkState::from_parts(&z, &u).map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}
