//! Burst-synchronized reductions of the two-burster network.
//!
//! With a shared slow variable `u = u₁ = u₂` and the phase difference
//! `φ = θ₁ − θ₂` the pair reduces to four equations in `(r₁, r₂, φ, u)`, or
//! equivalently in longitudinal/transverse radii `r_l = (r₁ + r₂)/2`,
//! `r_t = (r₁ − r₂)/2`. Only `κ₁`, `κ₂` of the coupling are used; the reduction
//! assumes the symmetric unit coupling of a pair.

use crate::model::{wrap_phase, CouplingSpec, ModelParams};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstrainedError {
    #[error("radius must be positive, got r1 = {r1}, r2 = {r2}")]
    NonPositiveRadius { r1: f64, r2: f64 },
    #[error("singular state: r_l² − r_t² = {gap} (requires r_l > |r_t|)")]
    Singular { gap: f64 },
    #[error("phase {phi} is not a symmetric subspace phase (0 or π)")]
    NotSymmetricPhase { phi: f64 },
    #[error("negative longitudinal radius {r_l}")]
    NegativeRadius { r_l: f64 },
}

/// State of the constrained system in `(r₁, r₂, φ, u)`; `phi` is kept in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub r1: f64,
    pub r2: f64,
    pub phi: f64,
    pub u: f64,
}

impl ReducedState {
    pub fn new(r1: f64, r2: f64, phi: f64, u: f64) -> Result<Self, ConstrainedError> {
        if r1 <= 0.0 || r2 <= 0.0 {
            return Err(ConstrainedError::NonPositiveRadius { r1, r2 });
        }
        Ok(Self {
            r1,
            r2,
            phi: wrap_phase(phi),
            u,
        })
    }
}

/// State in longitudinal/transverse coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtState {
    pub r_l: f64,
    pub r_t: f64,
    pub phi: f64,
    pub u: f64,
}

impl LtState {
    pub fn new(r_l: f64, r_t: f64, phi: f64, u: f64) -> Result<Self, ConstrainedError> {
        if r_l <= r_t.abs() {
            return Err(ConstrainedError::Singular {
                gap: r_l * r_l - r_t * r_t,
            });
        }
        Ok(Self {
            r_l,
            r_t,
            phi: wrap_phase(phi),
            u,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedRates {
    pub r1: f64,
    pub r2: f64,
    pub phi: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtRates {
    pub r_l: f64,
    pub r_t: f64,
    pub phi: f64,
    pub u: f64,
}

/// Shared slow rate `η (a − (r₁² + r₂²)/2)`.
pub fn constrained_u_rate(p: &ModelParams, r1: f64, r2: f64) -> f64 {
    p.eta * (p.a - 0.5 * (r1 * r1 + r2 * r2))
}

pub fn eval_reduced_field(
    s: &ReducedState,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<ReducedRates, ConstrainedError> {
    let (r1, r2) = (s.r1, s.r2);
    if r1 <= 0.0 || r2 <= 0.0 {
        return Err(ConstrainedError::NonPositiveRadius { r1, r2 });
    }
    let (k1, k2) = (k.kappa1, k.kappa2);
    let (sp, cp) = s.phi.sin_cos();
    let u = s.u;
    let sig = p.sigma;
    let rm2 = p.r_m * p.r_m;
    let (q1, q2) = (r1 * r1, r2 * r2);
    Ok(ReducedRates {
        r1: u * r1 + 2.0 * r1.powi(3) - r1.powi(5) + k1 * r2 * cp + k2 * r2 * sp,
        r2: u * r2 + 2.0 * r2.powi(3) - r2.powi(5) + k1 * r1 * cp - k2 * r1 * sp,
        phi: 0.5 * sig * rm2 * (q1 - q2) - 0.25 * sig * (q1 * q1 - q2 * q2)
            - k1 * ((q1 + q2) / (r1 * r2)) * sp
            - k2 * ((q1 - q2) / (r1 * r2)) * cp,
        u: constrained_u_rate(p, r1, r2),
    })
}

/// The three fast components of the longitudinal/transverse field with `u` frozen.
/// No domain checks.
pub fn lt_fast_field(u: f64, x: [f64; 3], p: &ModelParams, k: &CouplingSpec) -> [f64; 3] {
    let [rl, rt, phi] = x;
    let (k1, k2) = (k.kappa1, k.kappa2);
    let (sp, cp) = phi.sin_cos();
    let sig = p.sigma;
    let rm2 = p.r_m * p.r_m;
    let (rl2, rt2) = (rl * rl, rt * rt);
    let gap = rl2 - rt2;
    let drl = u * rl + 2.0 * rl * rl2 + 6.0 * rl * rt2 - rl * rl2 * rl2 - 10.0 * rl * rl2 * rt2
        - 5.0 * rl * rt2 * rt2
        + k1 * rl * cp
        - k2 * rt * sp;
    let drt = u * rt + 6.0 * rl2 * rt + 2.0 * rt * rt2 - 5.0 * rl2 * rl2 * rt - 10.0 * rl2 * rt * rt2
        - rt * rt2 * rt2
        - k1 * rt * cp
        + k2 * rl * sp;
    let dphi = 2.0 * sig * rm2 * rl * rt - 2.0 * sig * rl * rt * (rl2 + rt2)
        - 2.0 * k1 * (rl2 + rt2) / gap * sp
        - 4.0 * k2 * rl * rt / gap * cp;
    [drl, drt, dphi]
}

pub fn eval_lt_field(
    s: &LtState,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<LtRates, ConstrainedError> {
    let gap = s.r_l * s.r_l - s.r_t * s.r_t;
    if gap <= 0.0 || s.r_l <= 0.0 {
        return Err(ConstrainedError::Singular { gap });
    }
    let [r_l, r_t, phi] = lt_fast_field(s.u, [s.r_l, s.r_t, s.phi], p, k);
    Ok(LtRates {
        r_l,
        r_t,
        phi,
        u: p.eta * (p.a - (s.r_l * s.r_l + s.r_t * s.r_t)),
    })
}

pub fn r1r2_to_lt(s: &ReducedState) -> Result<LtState, ConstrainedError> {
    LtState::new(0.5 * (s.r1 + s.r2), 0.5 * (s.r1 - s.r2), s.phi, s.u)
}

pub fn lt_to_r1r2(s: &LtState) -> Result<ReducedState, ConstrainedError> {
    ReducedState::new(s.r_l + s.r_t, s.r_l - s.r_t, s.phi, s.u)
}

/// Longitudinal rate on the symmetric subspace `r_t = 0`, `φ ∈ {0, π}`:
/// `ṙ_l = (u + 2κ₁ cos φ) r_l + 2 r_l³ − r_l⁵`.
pub fn eval_subspace_field(
    r_l: f64,
    u: f64,
    phi: f64,
    k: &CouplingSpec,
) -> Result<f64, ConstrainedError> {
    if r_l < 0.0 {
        return Err(ConstrainedError::NegativeRadius { r_l });
    }
    let cos_phi = symmetric_cos(phi)?;
    Ok((u + 2.0 * k.kappa1 * cos_phi) * r_l + 2.0 * r_l.powi(3) - r_l.powi(5))
}

fn symmetric_cos(phi: f64) -> Result<f64, ConstrainedError> {
    let w = wrap_phase(phi);
    if w.abs() < 1e-12 {
        Ok(1.0)
    } else if (w - PI).abs() < 1e-12 {
        Ok(-1.0)
    } else {
        Err(ConstrainedError::NotSymmetricPhase { phi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(3.0, 0.8, 0.05, 3.0, 1.35).unwrap()
    }

    #[test]
    fn symmetric_points_freeze_phase() {
        let k = CouplingSpec::all_to_all(2, 0.02, 0.2);
        for phi in [0.0, PI] {
            let s = ReducedState::new(1.3, 1.3, phi, -0.4).unwrap();
            let d = eval_reduced_field(&s, &params(), &k).unwrap();
            assert!(d.phi.abs() < 1e-15);
            assert!((d.r1 - d.r2).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_subspaces_are_invariant() {
        let k = CouplingSpec::all_to_all(2, -0.03, 0.2);
        for phi in [0.0, PI] {
            let s = LtState::new(1.25, 0.0, phi, -0.3).unwrap();
            let d = eval_lt_field(&s, &params(), &k).unwrap();
            assert!(d.r_t.abs() < 1e-15, "r_t rate {}", d.r_t);
            assert!(d.phi.abs() < 1e-15, "phi rate {}", d.phi);
        }
    }

    #[test]
    fn coordinate_maps() {
        let lt = r1r2_to_lt(&ReducedState::new(1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((lt.r_l, lt.r_t), (1.0, 0.0));
        let lt = r1r2_to_lt(&ReducedState::new(1.4, 1.0, 0.0, 0.0).unwrap()).unwrap();
        assert!((lt.r_l - 1.2).abs() < 1e-15 && (lt.r_t - 0.2).abs() < 1e-15);
        assert!(LtState::new(0.5, 0.5, 0.0, 0.0).is_err());
        assert!(ReducedState::new(0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn singular_lt_state_is_rejected() {
        let s = LtState {
            r_l: 1.0,
            r_t: -1.0,
            phi: 0.0,
            u: 0.0,
        };
        assert!(matches!(
            eval_lt_field(&s, &params(), &CouplingSpec::all_to_all(2, 0.0, 0.1)),
            Err(ConstrainedError::Singular { .. })
        ));
    }

    #[test]
    fn subspace_field_roots() {
        let k0 = CouplingSpec::all_to_all(2, 0.0, 0.3);
        assert_eq!(eval_subspace_field(0.0, 0.7, 0.0, &k0).unwrap(), 0.0);
        assert_eq!(eval_subspace_field(1.0, -1.0, PI, &k0).unwrap(), 0.0);
        let v = eval_subspace_field(2f64.sqrt(), 0.0, 0.0, &k0).unwrap();
        assert!(v.abs() < 1e-14);
        assert!(matches!(
            eval_subspace_field(1.0, 0.0, 1.0, &k0),
            Err(ConstrainedError::NotSymmetricPhase { .. })
        ));
        assert!(eval_subspace_field(-0.1, 0.0, 0.0, &k0).is_err());
    }

    #[test]
    fn constrained_slow_rate_is_average() {
        let p = params();
        let (r1, r2) = (1.1, 1.4);
        let avg = 0.5 * (p.eta * (p.a - r1 * r1) + p.eta * (p.a - r2 * r2));
        assert!((constrained_u_rate(&p, r1, r2) - avg).abs() < 1e-16);
    }
}
