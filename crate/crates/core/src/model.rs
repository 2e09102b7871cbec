//! Parameters, state containers and vector fields of the coupled Bautin burster network.
//!
//! Each burster carries a complex fast variable `z_j = x_j + i y_j` and a real slow
//! variable `u_j`:
//!
//! ```text
//! z_j' = (u_j + iω) z_j + B z_j |z_j|² + C z_j |z_j|⁴ + (κ₁ + iκ₂) Σ_k c_jk z_k
//! u_j' = η (a − |z_j|²)
//! ```
//!
//! with `B = 2 + iζ`, `C = −1 + iγ`, `ζ = σ r_m² / 2` and `γ = −σ / 4`. The
//! non-isochronous spike frequency `Ω(r) = ω + ζ r² + γ r⁴` has its turning point
//! at `r = r_m`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("connectivity matrix must be square, got {rows}x{cols}")]
    NonSquareConnectivity { rows: usize, cols: usize },
    #[error("connectivity diagonal entry c[{index}][{index}] = {value} must be zero")]
    NonZeroDiagonal { index: usize, value: f64 },
    #[error("phase of burster {index} is undefined at zero radius")]
    UndefinedPhase { index: usize },
    #[error("radius must be positive, got {value}")]
    NonPositiveRadius { value: f64 },
}

/// Single-burster constants. `ζ`, `γ`, `B` and `C` are always derived from
/// `sigma` and `r_m`, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Base angular frequency ω.
    pub omega: f64,
    /// Slow nullcline level `a`; bursting for `0 < a < 1`, tonic spiking for `a > 1`.
    pub a: f64,
    /// Slow/fast timescale ratio η.
    pub eta: f64,
    /// Magnitude of non-isochronicity σ.
    pub sigma: f64,
    /// Radius at which `Ω(r)` turns.
    pub r_m: f64,
}

/// Derived normal-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub zeta: f64,
    pub gamma: f64,
    pub b: Complex64,
    pub c: Complex64,
}

impl ModelParams {
    pub fn new(omega: f64, a: f64, eta: f64, sigma: f64, r_m: f64) -> Result<Self, ModelError> {
        let p = Self {
            omega,
            a,
            eta,
            sigma,
            r_m,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite = [
            ("omega", self.omega),
            ("a", self.a),
            ("eta", self.eta),
            ("sigma", self.sigma),
            ("r_m", self.r_m),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(ModelError::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        if self.eta < 0.0 {
            return Err(ModelError::InvalidParameter {
                name: "eta",
                value: self.eta,
                reason: "must be non-negative",
            });
        }
        if self.r_m <= 0.0 {
            return Err(ModelError::InvalidParameter {
                name: "r_m",
                value: self.r_m,
                reason: "must be positive",
            });
        }
        Ok(())
    }

    pub fn zeta(&self) -> f64 {
        0.5 * self.sigma * self.r_m * self.r_m
    }

    pub fn gamma(&self) -> f64 {
        -0.25 * self.sigma
    }

    pub fn b(&self) -> Complex64 {
        Complex64::new(2.0, self.zeta())
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(-1.0, self.gamma())
    }

    pub fn coefficients(&self) -> Coefficients {
        Coefficients {
            zeta: self.zeta(),
            gamma: self.gamma(),
            b: self.b(),
            c: self.c(),
        }
    }

    /// Spike frequency `Ω(r) = ω + ζ r² + γ r⁴`.
    pub fn omega_of_r(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.omega + self.zeta() * r2 + self.gamma() * r2 * r2
    }

    /// `dΩ/dr = σ r (r_m² − r²)`.
    pub fn domega_dr(&self, r: f64) -> f64 {
        self.sigma * r * (self.r_m * self.r_m - r * r)
    }
}

/// Free-function form of [`ModelParams::coefficients`].
pub fn derive_coefficients(p: &ModelParams) -> Coefficients {
    p.coefficients()
}

/// Coupling gains and a dense real connectivity matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    pub kappa1: f64,
    pub kappa2: f64,
    c: DMatrix<f64>,
}

impl CouplingSpec {
    /// All-to-all coupling: `c_jk = 1` for `j ≠ k`.
    pub fn all_to_all(n: usize, kappa1: f64, kappa2: f64) -> Self {
        let c = DMatrix::from_fn(n, n, |j, k| if j == k { 0.0 } else { 1.0 });
        Self { kappa1, kappa2, c }
    }

    /// Uncoupled network of `n` bursters.
    pub fn uncoupled(n: usize) -> Self {
        Self {
            kappa1: 0.0,
            kappa2: 0.0,
            c: DMatrix::zeros(n, n),
        }
    }

    pub fn with_matrix(kappa1: f64, kappa2: f64, c: DMatrix<f64>) -> Result<Self, ModelError> {
        if c.nrows() != c.ncols() {
            return Err(ModelError::NonSquareConnectivity {
                rows: c.nrows(),
                cols: c.ncols(),
            });
        }
        for j in 0..c.nrows() {
            if c[(j, j)] != 0.0 {
                return Err(ModelError::NonZeroDiagonal {
                    index: j,
                    value: c[(j, j)],
                });
            }
        }
        Ok(Self { kappa1, kappa2, c })
    }

    pub fn n(&self) -> usize {
        self.c.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn gain(&self) -> Complex64 {
        Complex64::new(self.kappa1, self.kappa2)
    }

    /// True when every off-diagonal entry equals one.
    pub fn is_all_to_all(&self) -> bool {
        let n = self.n();
        (0..n).all(|j| (0..n).all(|k| j == k || self.c[(j, k)] == 1.0))
    }
}

/// Cartesian state of `n` bursters laid out as `[x_0, y_0, u_0, x_1, y_1, u_1, ...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    data: Vec<f64>,
}

impl NetworkState {
    pub fn zeros(n: usize) -> Self {
        Self {
            data: vec![0.0; 3 * n],
        }
    }

    pub fn from_vec(data: Vec<f64>) -> Result<Self, ModelError> {
        if data.len() % 3 != 0 {
            return Err(ModelError::DimensionMismatch {
                expected: 3 * (data.len() / 3 + 1),
                got: data.len(),
            });
        }
        Ok(Self { data })
    }

    pub fn from_parts(z: &[Complex64], u: &[f64]) -> Result<Self, ModelError> {
        if z.len() != u.len() {
            return Err(ModelError::DimensionMismatch {
                expected: z.len(),
                got: u.len(),
            });
        }
        let data = z
            .iter()
            .zip(u)
            .flat_map(|(z, &u)| [z.re, z.im, u])
            .collect();
        Ok(Self { data })
    }

    pub fn n(&self) -> usize {
        self.data.len() / 3
    }

    pub fn z(&self, j: usize) -> Complex64 {
        Complex64::new(self.data[3 * j], self.data[3 * j + 1])
    }

    pub fn u(&self, j: usize) -> f64 {
        self.data[3 * j + 2]
    }

    pub fn set_z(&mut self, j: usize, z: Complex64) {
        self.data[3 * j] = z.re;
        self.data[3 * j + 1] = z.im;
    }

    pub fn set_u(&mut self, j: usize, u: f64) {
        self.data[3 * j + 2] = u;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Polar coordinates of one burster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarCoords {
    pub r: f64,
    pub theta: f64,
    pub u: f64,
}

/// Polar view of a two-burster network. Also used to carry the rates returned by
/// [`eval_field_polar_pair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPairState {
    pub r1: f64,
    pub theta1: f64,
    pub u1: f64,
    pub r2: f64,
    pub theta2: f64,
    pub u2: f64,
}

impl PolarPairState {
    pub fn from_network(s: &NetworkState) -> Result<Self, ModelError> {
        if s.n() != 2 {
            return Err(ModelError::DimensionMismatch {
                expected: 6,
                got: s.as_slice().len(),
            });
        }
        let p = to_polar(s)?;
        Ok(Self {
            r1: p[0].r,
            theta1: p[0].theta,
            u1: p[0].u,
            r2: p[1].r,
            theta2: p[1].theta,
            u2: p[1].u,
        })
    }

    pub fn to_network(&self) -> NetworkState {
        to_cartesian(&[
            PolarCoords {
                r: self.r1,
                theta: self.theta1,
                u: self.u1,
            },
            PolarCoords {
                r: self.r2,
                theta: self.theta2,
                u: self.u2,
            },
        ])
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut w = x.rem_euclid(two_pi);
    if w > PI {
        w -= two_pi;
    }
    // rem_euclid maps −π to π already; guard the rounding edge at exactly −π.
    if w <= -PI {
        w += two_pi;
    }
    w
}

pub fn to_polar(s: &NetworkState) -> Result<Vec<PolarCoords>, ModelError> {
    (0..s.n())
        .map(|j| {
            let z = s.z(j);
            let r = z.norm();
            if r == 0.0 {
                return Err(ModelError::UndefinedPhase { index: j });
            }
            let mut theta = z.arg();
            if theta == -PI {
                theta = PI;
            }
            Ok(PolarCoords {
                r,
                theta,
                u: s.u(j),
            })
        })
        .collect()
}

pub fn to_cartesian(p: &[PolarCoords]) -> NetworkState {
    let data = p
        .iter()
        .flat_map(|c| {
            let (s, co) = c.theta.sin_cos();
            [c.r * co, c.r * s, c.u]
        })
        .collect();
    NetworkState { data }
}

/// Evaluates the full network field in place on flat slices. No validation; this
/// is the integrator hot path.
pub fn field_into(p: &ModelParams, k: &CouplingSpec, y: &[f64], dy: &mut [f64]) {
    let n = k.n();
    let b = p.b();
    let c = p.c();
    let gain = k.gain();
    let omega_i = Complex64::new(0.0, p.omega);
    for j in 0..n {
        let zj = Complex64::new(y[3 * j], y[3 * j + 1]);
        let uj = y[3 * j + 2];
        let r2 = zj.norm_sqr();
        let mut sum = Complex64::new(0.0, 0.0);
        for kk in 0..n {
            let w = k.c[(j, kk)];
            if w != 0.0 {
                sum += w * Complex64::new(y[3 * kk], y[3 * kk + 1]);
            }
        }
        let dz = (uj + omega_i) * zj + b * zj * r2 + c * zj * (r2 * r2) + gain * sum;
        dy[3 * j] = dz.re;
        dy[3 * j + 1] = dz.im;
        dy[3 * j + 2] = p.eta * (p.a - r2);
    }
}

/// Cartesian vector field of the coupled network.
pub fn eval_field_cartesian(
    s: &NetworkState,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<NetworkState, ModelError> {
    if s.n() != k.n() {
        return Err(ModelError::DimensionMismatch {
            expected: 3 * k.n(),
            got: s.as_slice().len(),
        });
    }
    let mut out = NetworkState::zeros(s.n());
    field_into(p, k, s.as_slice(), out.as_mut_slice());
    Ok(out)
}

/// Polar form of the two-burster field. The returned struct holds the rates
/// `(ṙ₁, θ̇₁, u̇₁, ṙ₂, θ̇₂, u̇₂)`.
pub fn eval_field_polar_pair(
    s: &PolarPairState,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<PolarPairState, ModelError> {
    if k.n() != 2 {
        return Err(ModelError::DimensionMismatch {
            expected: 2,
            got: k.n(),
        });
    }
    for r in [s.r1, s.r2] {
        if r <= 0.0 {
            return Err(ModelError::NonPositiveRadius { value: r });
        }
    }
    let (k1, k2) = (k.kappa1, k.kappa2);
    let c12 = k.matrix()[(0, 1)];
    let c21 = k.matrix()[(1, 0)];
    let (s21, c21phase) = (s.theta2 - s.theta1).sin_cos();
    let (s12, c12phase) = (s.theta1 - s.theta2).sin_cos();
    let amp = |u: f64, r: f64| u * r + 2.0 * r.powi(3) - r.powi(5);
    Ok(PolarPairState {
        r1: amp(s.u1, s.r1) + c12 * s.r2 * (k1 * c21phase - k2 * s21),
        theta1: p.omega_of_r(s.r1) + c12 * (s.r2 / s.r1) * (k1 * s21 + k2 * c21phase),
        u1: p.eta * (p.a - s.r1 * s.r1),
        r2: amp(s.u2, s.r2) + c21 * s.r1 * (k1 * c12phase - k2 * s12),
        theta2: p.omega_of_r(s.r2) + c21 * (s.r1 / s.r2) * (k1 * s12 + k2 * c12phase),
        u2: p.eta * (p.a - s.r2 * s.r2),
    })
}

/// Single-burster periodic orbit of the fast subsystem at `η = 0` without coupling:
/// `(r, u) = (√a, a² − 2a)`.
pub fn slow_nullcline_orbit(p: &ModelParams) -> (f64, f64) {
    (p.a.sqrt(), p.a * p.a - 2.0 * p.a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> ModelParams {
        ModelParams::new(3.0, 0.8, 0.1, 4.0, 1.35).unwrap()
    }

    #[test]
    fn coefficients_from_sigma_and_rm() {
        let c = fig2().coefficients();
        assert!((c.zeta - 3.645).abs() < 1e-12);
        assert_eq!(c.gamma, -1.0);
        assert_eq!(c.b, Complex64::new(2.0, c.zeta));
        assert_eq!(c.c, Complex64::new(-1.0, -1.0));

        let iso = ModelParams::new(1.0, 0.8, 0.1, 0.0, 1.0).unwrap().coefficients();
        assert_eq!((iso.zeta, iso.gamma), (0.0, 0.0));

        let p = ModelParams::new(3.0, 0.8, 0.1, 3.0, 1.35).unwrap();
        assert!((p.zeta() - 2.73375).abs() < 1e-12);
        assert_eq!(p.gamma(), -0.75);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ModelParams::new(1.0, 0.8, -0.1, 3.0, 1.35).is_err());
        assert!(ModelParams::new(1.0, 0.8, 0.1, 3.0, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 0.8, 0.1, 3.0, 1.0).is_err());
    }

    #[test]
    fn frequency_turning_point() {
        let p = ModelParams::new(3.0, 0.8, 0.1, 3.0, 1.35).unwrap();
        assert_eq!(p.domega_dr(p.r_m), 0.0);
        assert!((p.omega_of_r(1.0) - 4.98375).abs() < 1e-12);
        let h = 1e-6;
        let fd = (p.omega_of_r(0.7 + h) - p.omega_of_r(0.7 - h)) / (2.0 * h);
        assert!((fd - p.domega_dr(0.7)).abs() < 1e-7);
    }

    #[test]
    fn origin_only_drives_slow_variable() {
        let p = fig2();
        let k = CouplingSpec::all_to_all(3, 0.3, -0.2);
        let mut s = NetworkState::zeros(3);
        for j in 0..3 {
            s.set_u(j, -0.3 * j as f64);
        }
        let d = eval_field_cartesian(&s, &p, &k).unwrap();
        for j in 0..3 {
            assert_eq!(d.z(j), Complex64::new(0.0, 0.0));
            assert_eq!(d.u(j), p.eta * p.a);
        }
    }

    #[test]
    fn single_burster_matches_polar_form() {
        let p = fig2();
        let k = CouplingSpec::uncoupled(1);
        let (r, theta, u) = (1.2_f64, 0.4_f64, -0.3_f64);
        let z = Complex64::from_polar(r, theta);
        let s = NetworkState::from_parts(&[z], &[u]).unwrap();
        let d = eval_field_cartesian(&s, &p, &k).unwrap();
        let rdot = u * r + 2.0 * r.powi(3) - r.powi(5);
        let thetadot = p.omega_of_r(r);
        // z' = (ṙ + i r θ̇) e^{iθ}
        let expected = Complex64::new(rdot, r * thetadot) * Complex64::from_polar(1.0, theta);
        assert!((d.z(0) - expected).norm() < 1e-13);
        assert!((d.u(0) - p.eta * (p.a - r * r)).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let s = NetworkState::zeros(3);
        let k = CouplingSpec::all_to_all(2, 0.0, 0.0);
        assert!(matches!(
            eval_field_cartesian(&s, &fig2(), &k),
            Err(ModelError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn connectivity_validation() {
        let mut m = DMatrix::from_element(2, 2, 1.0);
        assert!(matches!(
            CouplingSpec::with_matrix(0.1, 0.1, m.clone()),
            Err(ModelError::NonZeroDiagonal { index: 0, .. })
        ));
        m[(0, 0)] = 0.0;
        m[(1, 1)] = 0.0;
        let k = CouplingSpec::with_matrix(0.1, 0.1, m).unwrap();
        assert!(k.is_all_to_all());
        assert!(CouplingSpec::with_matrix(0.0, 0.0, DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn polar_conversions() {
        let s = NetworkState::from_parts(
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -2.0)],
            &[0.1, 0.2],
        )
        .unwrap();
        let p = to_polar(&s).unwrap();
        assert_eq!((p[0].r, p[0].theta), (1.0, 0.0));
        assert_eq!(p[1].r, 2.0);
        assert!((p[1].theta + PI / 2.0).abs() < 1e-15);

        let neg = NetworkState::from_parts(&[Complex64::new(-1.0, 0.0)], &[0.0]).unwrap();
        assert_eq!(to_polar(&neg).unwrap()[0].theta, PI);

        let zero = NetworkState::zeros(1);
        assert_eq!(
            to_polar(&zero),
            Err(ModelError::UndefinedPhase { index: 0 })
        );
    }

    #[test]
    fn wrap_phase_convention() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-0.5) + 0.5).abs() < 1e-15);
        assert!((wrap_phase(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn slow_nullcline_for_a_08() {
        let p = fig2();
        let (r0, u0) = slow_nullcline_orbit(&p);
        assert!((r0 - 0.894_427_190_999_916).abs() < 1e-12);
        assert!((u0 + 0.96).abs() < 1e-12);
        // ṙ and u̇ vanish there for an uncoupled burster at η = 0.
        let rdot = u0 * r0 + 2.0 * r0.powi(3) - r0.powi(5);
        assert!(rdot.abs() < 1e-12);
        assert!((p.a - r0 * r0).abs() < 1e-12);
    }

    #[test]
    fn polar_pair_slow_nullcline_and_symmetry() {
        let p = fig2();
        let k0 = CouplingSpec::all_to_all(2, 0.0, 0.0);
        let r = p.a.sqrt();
        let s = PolarPairState {
            r1: r,
            theta1: 0.3,
            u1: -0.2,
            r2: r,
            theta2: 1.1,
            u2: 0.4,
        };
        let d = eval_field_polar_pair(&s, &p, &k0).unwrap();
        assert!(d.u1.abs() < 1e-15 && d.u2.abs() < 1e-15);

        let k = CouplingSpec::all_to_all(2, 0.05, 0.2);
        let sym = PolarPairState {
            r1: 1.3,
            theta1: 0.7,
            u1: -0.4,
            r2: 1.3,
            theta2: 0.7,
            u2: -0.4,
        };
        let d = eval_field_polar_pair(&sym, &p, &k).unwrap();
        assert_eq!(d.r1, d.r2);
        assert_eq!(d.theta1, d.theta2);
        assert_eq!(d.u1, d.u2);

        let bad = PolarPairState { r1: 0.0, ..sym };
        assert!(eval_field_polar_pair(&bad, &p, &k).is_err());
    }
}
