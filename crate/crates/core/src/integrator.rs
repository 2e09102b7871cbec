//! Time integration with uniformly resampled output.
//!
//! Noise-free runs use the Dormand–Prince 5(4) embedded pair with step-size
//! control and its 4th-order continuous extension for dense output. Runs with
//! additive noise use fixed-step Euler–Maruyama: every component the field marks
//! as diffusive receives an independent increment `ε √dt ξ`, `ξ ~ N(0, 1)`, drawn
//! from a ChaCha8 stream seeded with `rng_seed`. The ChaCha8 stream depends only
//! on the seed, so noisy runs reproduce bit-for-bit across platforms.

use crate::model::{CouplingSpec, ModelParams, NetworkState};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("step size underflow at t = {t} (h = {h})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("maximum number of steps ({0}) exceeded")]
    TooManySteps(usize),
    #[error("requested time {t} outside solution range [{start}, {end}]")]
    RangeOverrun { t: f64, start: f64, end: f64 },
    #[error("initial state has {got} components, field expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Right-hand side `y' = f(t, y)`.
pub trait VectorField {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]);
    /// Whether component `index` receives additive noise in stochastic runs.
    fn is_diffusive(&self, _index: usize) -> bool {
        true
    }
}

impl<F: VectorField + ?Sized> VectorField for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (**self).eval(t, y, dy)
    }
    fn is_diffusive(&self, index: usize) -> bool {
        (**self).is_diffusive(index)
    }
}

/// Adapter turning a closure into a [`VectorField`]; every component is diffusive.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> VectorField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.f)(t, y, dy)
    }
}

/// The coupled burster network as an integrable field. Noise acts on `x_j`, `y_j`
/// only; the slow variables are never perturbed.
#[derive(Debug, Clone)]
pub struct NetworkField {
    pub params: ModelParams,
    pub coupling: CouplingSpec,
}

impl NetworkField {
    pub fn new(params: ModelParams, coupling: CouplingSpec) -> Self {
        Self { params, coupling }
    }
}

impl VectorField for NetworkField {
    fn dim(&self) -> usize {
        3 * self.coupling.n()
    }
    fn eval(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        crate::model::field_into(&self.params, &self.coupling, y, dy);
    }
    fn is_diffusive(&self, index: usize) -> bool {
        index % 3 != 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Fixed step for stochastic runs.
    pub dt: f64,
    pub t_end: f64,
    pub sample_dt: f64,
    /// Noise amplitude ε; zero selects the adaptive deterministic integrator.
    pub noise_amplitude: f64,
    pub rng_seed: u64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            dt: 1e-3,
            t_end: 100.0,
            sample_dt: 0.01,
            noise_amplitude: 0.0,
            rng_seed: 0,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), IntegrateError> {
        let bad = |m: &str| Err(IntegrateError::InvalidConfig(m.to_string()));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be positive and finite");
        }
        if !(self.sample_dt > 0.0) {
            return bad("sample_dt must be positive");
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.noise_amplitude >= 0.0 && self.noise_amplitude.is_finite()) {
            return bad("noise_amplitude must be non-negative");
        }
        Ok(())
    }

    pub fn is_noisy(&self) -> bool {
        self.noise_amplitude > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub config: IntegratorConfig,
    pub seed: Option<u64>,
    pub params: Option<ModelParams>,
    pub coupling: Option<CouplingSpec>,
}

/// Uniformly sampled solution. Row `i` holds the state at `times[i] = t0 + i·sample_dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    dim: usize,
    data: Vec<f64>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn from_rows(
        times: Vec<f64>,
        dim: usize,
        data: Vec<f64>,
        meta: TrajectoryMeta,
    ) -> Result<Self, IntegrateError> {
        if data.len() != times.len() * dim {
            return Err(IntegrateError::DimensionMismatch {
                expected: times.len() * dim,
                got: data.len(),
            });
        }
        Ok(Self {
            times,
            dim,
            data,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of bursters, assuming the `(x, y, u)` network layout.
    pub fn n_bursters(&self) -> usize {
        self.dim / 3
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn state(&self, i: usize) -> NetworkState {
        NetworkState::from_vec(self.row(i).to_vec()).expect("network layout")
    }

    pub fn z(&self, i: usize, j: usize) -> Complex64 {
        let r = self.row(i);
        Complex64::new(r[3 * j], r[3 * j + 1])
    }

    pub fn u(&self, i: usize, j: usize) -> f64 {
        self.row(i)[3 * j + 2]
    }

    pub fn sample_dt(&self) -> f64 {
        self.meta.config.sample_dt
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Applies `f` to every row in place; used to build transformed copies.
    pub fn map_rows(&self, mut f: impl FnMut(&mut [f64])) -> Self {
        let mut out = self.clone();
        for row in out.data.chunks_mut(self.dim) {
            f(row);
        }
        out
    }
}

/// Anything that can be evaluated at arbitrary times in its range.
pub trait DenseOutput {
    fn dim(&self) -> usize;
    fn t_start(&self) -> f64;
    fn t_end(&self) -> f64;
    fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<(), IntegrateError>;
}

// Dormand–Prince 5(4) coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its continuous extension.
#[derive(Debug, Clone)]
struct DenseStep {
    t0: f64,
    h: f64,
    /// Five coefficient blocks of length `dim`.
    rcont: Vec<f64>,
    y1: Vec<f64>,
}

impl DenseStep {
    fn eval_into(&self, t: f64, out: &mut [f64]) {
        let dim = out.len();
        if t == self.t0 + self.h {
            out.copy_from_slice(&self.y1);
            return;
        }
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        for i in 0..dim {
            out[i] = r[i]
                + th * (r[dim + i]
                    + th1 * (r[2 * dim + i] + th * (r[3 * dim + i] + th1 * r[4 * dim + i])));
        }
    }
}

/// The full dense solution of an adaptive run.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    dim: usize,
    y0: Vec<f64>,
    t0: f64,
    steps: Vec<DenseStep>,
}

impl DenseSolution {
    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// End points of the accepted steps, starting with the initial time.
    pub fn step_times(&self) -> Vec<f64> {
        std::iter::once(self.t0)
            .chain(self.steps.iter().map(|s| s.t0 + s.h))
            .collect()
    }
}

impl DenseOutput for DenseSolution {
    fn dim(&self) -> usize {
        self.dim
    }
    fn t_start(&self) -> f64 {
        self.t0
    }
    fn t_end(&self) -> f64 {
        self.steps.last().map_or(self.t0, |s| s.t0 + s.h)
    }
    fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<(), IntegrateError> {
        let (start, end) = (self.t_start(), self.t_end());
        if !(t >= start && t <= end) {
            return Err(IntegrateError::RangeOverrun { t, start, end });
        }
        if t == start {
            out.copy_from_slice(&self.y0);
            return Ok(());
        }
        let idx = self
            .steps
            .partition_point(|s| s.t0 + s.h < t)
            .min(self.steps.len() - 1);
        self.steps[idx].eval_into(t, out);
        Ok(())
    }
}

/// Raw fixed-step solution, linearly interpolated between steps.
#[derive(Debug, Clone)]
pub struct FixedStepSolution {
    pub dim: usize,
    pub times: Vec<f64>,
    pub states: Vec<f64>,
}

impl DenseOutput for FixedStepSolution {
    fn dim(&self) -> usize {
        self.dim
    }
    fn t_start(&self) -> f64 {
        self.times[0]
    }
    fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }
    fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<(), IntegrateError> {
        let (start, end) = (self.t_start(), self.t_end());
        if !(t >= start && t <= end) {
            return Err(IntegrateError::RangeOverrun { t, start, end });
        }
        let i = self.times.partition_point(|&s| s < t);
        let d = self.dim;
        if self.times[i] == t {
            out.copy_from_slice(&self.states[i * d..(i + 1) * d]);
            return Ok(());
        }
        let (ta, tb) = (self.times[i - 1], self.times[i]);
        let w = (t - ta) / (tb - ta);
        for k in 0..d {
            let a = self.states[(i - 1) * d + k];
            let b = self.states[i * d + k];
            out[k] = a + w * (b - a);
        }
        Ok(())
    }
}

fn sample_count(t0: f64, t_end: f64, sample_dt: f64) -> usize {
    ((t_end - t0) / sample_dt * (1.0 + 1e-12)).floor() as usize + 1
}

/// Samples a dense solution on the grid `t_start + k·sample_dt`.
pub fn resample<D: DenseOutput>(
    dense: &D,
    sample_dt: f64,
    meta: TrajectoryMeta,
) -> Result<Trajectory, IntegrateError> {
    if !(sample_dt > 0.0) {
        return Err(IntegrateError::InvalidConfig(
            "sample_dt must be positive".into(),
        ));
    }
    let dim = dense.dim();
    let t0 = dense.t_start();
    let n = sample_count(t0, dense.t_end(), sample_dt);
    let mut times = Vec::with_capacity(n);
    let mut data = vec![0.0; n * dim];
    for k in 0..n {
        let t = (t0 + k as f64 * sample_dt).min(dense.t_end());
        dense.eval_into(t, &mut data[k * dim..(k + 1) * dim])?;
        times.push(t0 + k as f64 * sample_dt);
    }
    let mut meta = meta;
    meta.config.sample_dt = sample_dt;
    Trajectory::from_rows(times, dim, data, meta)
}

struct Dopri<'a, F: VectorField> {
    field: &'a F,
    cfg: &'a IntegratorConfig,
}

impl<F: VectorField> Dopri<'_, F> {
    fn err_scale(&self, a: f64, b: f64) -> f64 {
        self.cfg.abs_tol + self.cfg.rel_tol * a.abs().max(b.abs())
    }

    fn initial_step(&self, t: f64, y: &[f64], f0: &[f64]) -> f64 {
        let dim = y.len();
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..dim {
            let sk = self.err_scale(y[i], y[i]);
            dnf += (f0[i] / sk).powi(2);
            dny += (y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            0.01 * (dny / dnf).sqrt()
        };
        h = h.min(self.cfg.t_end - t);
        let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h * b).collect();
        let mut f1 = vec![0.0; dim];
        self.field.eval(t + h, &y1, &mut f1);
        let mut der2 = 0.0;
        for i in 0..dim {
            let sk = self.err_scale(y[i], y[i]);
            der2 += ((f1[i] - f0[i]) / sk).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(0.2)
        };
        (100.0 * h).min(h1).min(self.cfg.t_end - t)
    }

    /// Integrates over `[0, t_end]`, handing every accepted step to `sink`.
    fn run(&self, y0: &[f64], mut sink: impl FnMut(DenseStep)) -> Result<(), IntegrateError> {
        let dim = y0.len();
        let t_end = self.cfg.t_end;
        let mut t = 0.0;
        let mut y = y0.to_vec();
        let mut k1 = vec![0.0; dim];
        self.field.eval(t, &y, &mut k1);
        let mut h = self.initial_step(t, &y, &k1);
        let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
        );
        let mut ys = vec![0.0; dim];
        let mut y1 = vec![0.0; dim];
        let mut rejected_last = false;
        let mut n_steps = 0usize;
        while t < t_end {
            if n_steps >= self.cfg.max_steps {
                return Err(IntegrateError::TooManySteps(self.cfg.max_steps));
            }
            n_steps += 1;
            let last = t + 1.01 * h >= t_end;
            if last {
                h = t_end - t;
            }
            if h < 1e-13 * t.abs().max(1.0) {
                return Err(IntegrateError::StepSizeUnderflow { t, h });
            }
            for i in 0..dim {
                ys[i] = y[i] + h * A21 * k1[i];
            }
            self.field.eval(t + C2 * h, &ys, &mut k2);
            for i in 0..dim {
                ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            self.field.eval(t + C3 * h, &ys, &mut k3);
            for i in 0..dim {
                ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            self.field.eval(t + C4 * h, &ys, &mut k4);
            for i in 0..dim {
                ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            self.field.eval(t + C5 * h, &ys, &mut k5);
            for i in 0..dim {
                ys[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            let t_new = if last { t_end } else { t + h };
            self.field.eval(t_new, &ys, &mut k6);
            for i in 0..dim {
                y1[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            self.field.eval(t_new, &y1, &mut k7);

            let mut err = 0.0;
            for i in 0..dim {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                err += (e / self.err_scale(y[i], y1[i])).powi(2);
            }
            let err = (err / dim as f64).sqrt();
            if !err.is_finite() {
                if y1.iter().all(|v| v.is_finite()) {
                    return Err(IntegrateError::NonFinite { t });
                }
                h *= 0.1;
                rejected_last = true;
                continue;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                let mut rcont = vec![0.0; 5 * dim];
                for i in 0..dim {
                    let ydiff = y1[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rcont[i] = y[i];
                    rcont[dim + i] = ydiff;
                    rcont[2 * dim + i] = bspl;
                    rcont[3 * dim + i] = ydiff - h * k7[i] - bspl;
                    rcont[4 * dim + i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i]);
                }
                sink(DenseStep {
                    t0: t,
                    h: t_new - t,
                    rcont,
                    y1: y1.clone(),
                });
                t = t_new;
                std::mem::swap(&mut y, &mut y1);
                std::mem::swap(&mut k1, &mut k7);
                h *= if rejected_last { fac.min(1.0) } else { fac };
                rejected_last = false;
            } else {
                h *= fac.min(1.0);
                rejected_last = true;
            }
        }
        Ok(())
    }
}

fn check_dim<F: VectorField>(field: &F, y0: &[f64]) -> Result<(), IntegrateError> {
    if y0.len() != field.dim() {
        return Err(IntegrateError::DimensionMismatch {
            expected: field.dim(),
            got: y0.len(),
        });
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(IntegrateError::NonFinite { t: 0.0 });
    }
    Ok(())
}

fn base_meta(config: &IntegratorConfig) -> TrajectoryMeta {
    TrajectoryMeta {
        config: *config,
        seed: None,
        params: None,
        coupling: None,
    }
}

/// Adaptive run keeping every step's interpolant.
pub fn integrate_dense<F: VectorField>(
    field: &F,
    y0: &[f64],
    config: &IntegratorConfig,
) -> Result<DenseSolution, IntegrateError> {
    config.validate()?;
    check_dim(field, y0)?;
    let mut steps = Vec::new();
    Dopri { field, cfg: config }.run(y0, |s| steps.push(s))?;
    Ok(DenseSolution {
        dim: y0.len(),
        y0: y0.to_vec(),
        t0: 0.0,
        steps,
    })
}

/// Adaptive Dormand–Prince run resampled on the fly at `config.sample_dt`.
pub fn integrate_deterministic<F: VectorField>(
    field: &F,
    y0: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory, IntegrateError> {
    config.validate()?;
    if config.is_noisy() {
        return Err(IntegrateError::InvalidConfig(
            "adaptive integration requires noise_amplitude = 0".into(),
        ));
    }
    check_dim(field, y0)?;
    let dim = y0.len();
    let n = sample_count(0.0, config.t_end, config.sample_dt);
    let mut times = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * dim);
    times.push(0.0);
    data.extend_from_slice(y0);
    let mut buf = vec![0.0; dim];
    let mut next = 1usize;
    let mut bad = None;
    Dopri { field, cfg: config }.run(y0, |step| {
        let t1 = step.t0 + step.h;
        while next < n {
            let ts = next as f64 * config.sample_dt;
            let ts_clamped = ts.min(config.t_end);
            if ts_clamped > t1 {
                break;
            }
            step.eval_into(ts_clamped, &mut buf);
            if bad.is_none() && buf.iter().any(|v| !v.is_finite()) {
                bad = Some(ts);
            }
            times.push(ts);
            data.extend_from_slice(&buf);
            next += 1;
        }
    })?;
    if let Some(t) = bad {
        return Err(IntegrateError::NonFinite { t });
    }
    Trajectory::from_rows(times, dim, data, base_meta(config))
}

fn em_schedule(config: &IntegratorConfig) -> (usize, f64) {
    let n = (config.t_end / config.dt * (1.0 - 1e-12)).ceil() as usize;
    let last = config.t_end - (n - 1) as f64 * config.dt;
    (n, last)
}

/// Fixed-step Euler–Maruyama with additive noise on diffusive components.
/// `noise_amplitude = 0` reduces to the explicit Euler method.
pub fn integrate_noisy<F: VectorField>(
    field: &F,
    y0: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory, IntegrateError> {
    config.validate()?;
    check_dim(field, y0)?;
    if config.sample_dt < config.dt * (1.0 - 1e-12) {
        return Err(IntegrateError::InvalidConfig(
            "sample_dt must be at least dt in fixed-step mode".into(),
        ));
    }
    let dim = y0.len();
    let diffusive: Vec<usize> = (0..dim).filter(|&i| field.is_diffusive(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let eps = config.noise_amplitude;
    let (n_steps, last_h) = em_schedule(config);
    let n_samples = sample_count(0.0, config.t_end, config.sample_dt);

    let ratio = config.sample_dt / config.dt;
    let stride = ratio.round() as usize;
    let aligned = stride >= 1 && (ratio - stride as f64).abs() < 1e-9 * ratio;

    let mut times = Vec::with_capacity(n_samples);
    let mut data = Vec::with_capacity(n_samples * dim);
    times.push(0.0);
    data.extend_from_slice(y0);
    let mut y = y0.to_vec();
    let mut y_prev = y0.to_vec();
    let mut f = vec![0.0; dim];
    let mut next = 1usize;
    let mut t = 0.0;
    for step in 1..=n_steps {
        let h = if step == n_steps { last_h } else { config.dt };
        field.eval(t, &y, &mut f);
        y_prev.copy_from_slice(&y);
        for i in 0..dim {
            y[i] += h * f[i];
        }
        if eps > 0.0 {
            let amp = eps * h.sqrt();
            for &i in &diffusive {
                let xi: f64 = StandardNormal.sample(&mut rng);
                y[i] += amp * xi;
            }
        }
        let t_new = if step == n_steps {
            config.t_end
        } else {
            step as f64 * config.dt
        };
        if y.iter().any(|v| !v.is_finite()) {
            return Err(IntegrateError::NonFinite { t: t_new });
        }
        if aligned {
            if step % stride == 0 && next < n_samples {
                times.push(next as f64 * config.sample_dt);
                data.extend_from_slice(&y);
                next += 1;
            }
        } else {
            while next < n_samples {
                let ts = next as f64 * config.sample_dt;
                if ts > t_new * (1.0 + 1e-12) {
                    break;
                }
                let w = ((ts - t) / (t_new - t)).clamp(0.0, 1.0);
                for i in 0..dim {
                    data.push(y_prev[i] + w * (y[i] - y_prev[i]));
                }
                times.push(ts);
                next += 1;
            }
        }
        t = t_new;
    }
    // The final partial step may leave the last grid point unsampled.
    while next < n_samples {
        times.push(next as f64 * config.sample_dt);
        data.extend_from_slice(&y);
        next += 1;
    }
    let mut meta = base_meta(config);
    meta.seed = Some(config.rng_seed);
    Trajectory::from_rows(times, dim, data, meta)
}

/// Dispatches on the noise amplitude.
pub fn integrate<F: VectorField>(
    field: &F,
    y0: &[f64],
    config: &IntegratorConfig,
) -> Result<Trajectory, IntegrateError> {
    if config.is_noisy() {
        integrate_noisy(field, y0, config)
    } else {
        integrate_deterministic(field, y0, config)
    }
}

/// Integrates the burster network and attaches the model to the trajectory metadata.
pub fn simulate_network(
    params: &ModelParams,
    coupling: &CouplingSpec,
    s0: &NetworkState,
    config: &IntegratorConfig,
) -> Result<Trajectory, IntegrateError> {
    let field = NetworkField::new(*params, coupling.clone());
    let mut traj = integrate(&field, s0.as_slice(), config)?;
    traj.meta.params = Some(*params);
    traj.meta.coupling = Some(coupling.clone());
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rotation(omega: f64) -> FnField<impl Fn(f64, &[f64], &mut [f64])> {
        FnField::new(2, move |_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = -omega * y[1];
            dy[1] = omega * y[0];
        })
    }

    #[test]
    fn pure_rotation_returns_after_one_period() {
        let omega = 3.0;
        let cfg = IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            t_end: 2.0 * PI / omega,
            sample_dt: 2.0 * PI / omega / 16.0,
            ..Default::default()
        };
        let traj = integrate_deterministic(&rotation(omega), &[1.0, 0.0], &cfg).unwrap();
        let last = traj.row(traj.len() - 1);
        let err = ((last[0] - 1.0).powi(2) + last[1].powi(2)).sqrt();
        assert!(err < 1e-8, "error {err}");
        assert_eq!(traj.len(), 17);
    }

    #[test]
    fn uniform_sample_grid() {
        let cfg = IntegratorConfig {
            t_end: 1.0,
            sample_dt: 0.1,
            ..Default::default()
        };
        let traj = integrate_deterministic(&rotation(1.0), &[1.0, 0.0], &cfg).unwrap();
        assert_eq!(traj.len(), 11);
        for (k, t) in traj.times.iter().enumerate() {
            assert_eq!(*t, k as f64 * 0.1);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let f = rotation(1.0);
        let zero = IntegratorConfig {
            t_end: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            integrate_deterministic(&f, &[1.0, 0.0], &zero),
            Err(IntegrateError::InvalidConfig(_))
        ));
        let noisy = IntegratorConfig {
            noise_amplitude: 1e-3,
            ..Default::default()
        };
        assert!(integrate_deterministic(&f, &[1.0, 0.0], &noisy).is_err());
        let coarse = IntegratorConfig {
            dt: 0.1,
            sample_dt: 0.01,
            ..Default::default()
        };
        assert!(integrate_noisy(&f, &[1.0, 0.0], &coarse).is_err());
        assert!(matches!(
            integrate_deterministic(&f, &[1.0], &IntegratorConfig::default()),
            Err(IntegrateError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn blow_up_is_reported() {
        let f = FnField::new(1, |_t, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0]);
        let cfg = IntegratorConfig {
            t_end: 2.0,
            ..Default::default()
        };
        let err = integrate_deterministic(&f, &[1.0], &cfg).unwrap_err();
        assert!(matches!(
            err,
            IntegrateError::StepSizeUnderflow { .. }
                | IntegrateError::NonFinite { .. }
                | IntegrateError::TooManySteps(_)
        ));
    }

    #[test]
    fn dense_output_range_is_checked() {
        let cfg = IntegratorConfig {
            t_end: 1.0,
            ..Default::default()
        };
        let dense = integrate_dense(&rotation(1.0), &[1.0, 0.0], &cfg).unwrap();
        let mut out = [0.0; 2];
        assert!(dense.eval_into(0.5, &mut out).is_ok());
        assert!(matches!(
            dense.eval_into(1.5, &mut out),
            Err(IntegrateError::RangeOverrun { .. })
        ));
    }

    #[test]
    fn constant_solution_resamples_to_constant() {
        let f = FnField::new(3, |_t, _y: &[f64], dy: &mut [f64]| dy.fill(0.0));
        let cfg = IntegratorConfig {
            t_end: 3.0,
            ..Default::default()
        };
        let dense = integrate_dense(&f, &[1.5, -2.0, 0.25], &cfg).unwrap();
        let traj = resample(&dense, 0.37, base_meta(&cfg)).unwrap();
        for i in 0..traj.len() {
            assert_eq!(traj.row(i), &[1.5, -2.0, 0.25]);
        }
    }

    #[test]
    fn resample_at_native_steps_is_identity() {
        let cfg = IntegratorConfig {
            t_end: 1.0,
            dt: 0.01,
            sample_dt: 0.01,
            ..Default::default()
        };
        let f = rotation(2.0);
        let raw = integrate_noisy(&f, &[1.0, 0.0], &cfg).unwrap();
        let fixed = FixedStepSolution {
            dim: 2,
            times: raw.times.clone(),
            states: raw.data().to_vec(),
        };
        let again = resample(&fixed, 0.01, raw.meta.clone()).unwrap();
        assert_eq!(again.data(), raw.data());
    }
}
