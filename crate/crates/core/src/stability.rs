//! Stability of the fast subsystem of the burster pair, with `u` frozen.
//!
//! The symmetric spiking states sit on the invariant subspace `r_t = 0` with
//! `φ = 0` (inphase) or `φ = π` (antiphase). There the linearisation splits into
//! a longitudinal scalar and a transverse 2×2 block in `(r_t, φ)`; the block's
//! trace and determinant decide whether spike synchrony survives. The
//! [`find_fast_equilibria`] search recovers the remaining, non-symmetric
//! equilibria numerically.

use crate::constrained::lt_fast_field;
use crate::model::{wrap_phase, CouplingSpec, ModelParams};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilityError {
    #[error("no real branch radius at u = {u} (below the fold at u = {fold})")]
    BelowFold { u: f64, fold: f64 },
    #[error("this computation requires kappa1 = 0, got {0}")]
    NonZeroKappa1(f64),
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("no real determinant zero for kappa2 = {kappa2} (needs r_m^4 >= 4|c|/sigma)")]
    NoRealRoot { kappa2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchTag {
    Inphase,
    Antiphase,
    General,
}

impl BranchTag {
    /// Phase difference of a symmetric branch.
    pub fn phi(self) -> Option<f64> {
        match self {
            BranchTag::Inphase => Some(0.0),
            BranchTag::Antiphase => Some(PI),
            BranchTag::General => None,
        }
    }

    fn cos_phi(self) -> f64 {
        match self {
            BranchTag::Inphase => 1.0,
            BranchTag::Antiphase => -1.0,
            BranchTag::General => panic!("general equilibria have no fixed phase"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BranchTag::Inphase => "inphase",
            BranchTag::Antiphase => "antiphase",
            BranchTag::General => "general",
        }
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    StableNode,
    StableFocus,
    Saddle,
    UnstableNode,
    UnstableFocus,
    Nonhyperbolic,
}

impl Classification {
    pub fn is_stable(self) -> bool {
        matches!(self, Classification::StableNode | Classification::StableFocus)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::StableNode => "stable-node",
            Classification::StableFocus => "stable-focus",
            Classification::Saddle => "saddle",
            Classification::UnstableNode => "unstable-node",
            Classification::UnstableFocus => "unstable-focus",
            Classification::Nonhyperbolic => "nonhyperbolic",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upper root of the branch balance `u = r⁴ − 2r² − 2κ₁ cos φ`, i.e. the
/// stable spiking amplitude `r² = 1 + √(1 + u + 2κ₁ cos φ)`.
pub fn solve_branch_r(u: f64, branch: BranchTag, k: &CouplingSpec) -> Result<f64, StabilityError> {
    let shift = 2.0 * k.kappa1 * branch.cos_phi();
    let disc = 1.0 + u + shift;
    if !(disc >= 0.0) {
        return Err(StabilityError::BelowFold {
            u,
            fold: -1.0 - shift,
        });
    }
    let mut r = (1.0 + disc.sqrt()).sqrt();
    for _ in 0..3 {
        let g = r.powi(4) - 2.0 * r * r - shift - u;
        let dg = 4.0 * r * (r * r - 1.0);
        if g == 0.0 || dg.abs() < 1e-8 {
            break;
        }
        r -= g / dg;
    }
    Ok(r)
}

/// Residual of the branch balance at `(u, r)`.
pub fn branch_residual(u: f64, r: f64, branch: BranchTag, k: &CouplingSpec) -> f64 {
    u - (r.powi(4) - 2.0 * r * r - 2.0 * k.kappa1 * branch.cos_phi())
}

/// A 2×2 matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block2(pub [[f64; 2]; 2]);

impl Block2 {
    pub fn identity() -> Self {
        Block2([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let (tr, det) = trace_det(self);
        let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
        [0.5 * (tr + disc), 0.5 * (tr - disc)]
    }
}

fn transverse_block(u: f64, r: f64, p: &ModelParams, k: &CouplingSpec, s: f64) -> Block2 {
    let (k1, k2) = (k.kappa1, k.kappa2);
    let rm2 = p.r_m * p.r_m;
    let a = u + 6.0 * r * r - 5.0 * r.powi(4);
    Block2([
        [a - s * k1, s * k2 * r],
        [
            2.0 * p.sigma * rm2 * r - 2.0 * p.sigma * r.powi(3) - s * 4.0 * k2 / r,
            -s * 2.0 * k1,
        ],
    ])
}

/// Transverse Jacobian in `(r_t, φ)` at the inphase point `(r_l, r_t, φ) = (r, 0, 0)`.
pub fn jacobian_inphase(u: f64, r: f64, p: &ModelParams, k: &CouplingSpec) -> Block2 {
    transverse_block(u, r, p, k, 1.0)
}

/// Transverse Jacobian in `(r_t, φ)` at the antiphase point `(r, 0, π)`.
pub fn jacobian_antiphase(u: f64, r: f64, p: &ModelParams, k: &CouplingSpec) -> Block2 {
    transverse_block(u, r, p, k, -1.0)
}

pub fn jacobian_block(
    branch: BranchTag,
    u: f64,
    r: f64,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Block2 {
    match branch {
        BranchTag::Inphase => jacobian_inphase(u, r, p, k),
        BranchTag::Antiphase => jacobian_antiphase(u, r, p, k),
        BranchTag::General => panic!("no analytic block for general equilibria"),
    }
}

pub fn trace_det(b: &Block2) -> (f64, f64) {
    let m = b.0;
    (m[0][0] + m[1][1], m[0][0] * m[1][1] - m[0][1] * m[1][0])
}

/// Planar classification by trace and determinant; anything within `1e-12` of
/// `det = 0` or `tr = 0` is reported nonhyperbolic.
pub fn classify(tr: f64, det: f64) -> Classification {
    const EDGE: f64 = 1e-12;
    if det.abs() <= EDGE {
        return Classification::Nonhyperbolic;
    }
    if det < 0.0 {
        return Classification::Saddle;
    }
    if tr.abs() <= EDGE {
        return Classification::Nonhyperbolic;
    }
    let node = tr * tr >= 4.0 * det;
    match (tr < 0.0, node) {
        (true, true) => Classification::StableNode,
        (true, false) => Classification::StableFocus,
        (false, true) => Classification::UnstableNode,
        (false, false) => Classification::UnstableFocus,
    }
}

/// Classification of the transverse block of a symmetric branch at `u`.
pub fn classify_branch(
    branch: BranchTag,
    u: f64,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<Classification, StabilityError> {
    let r = solve_branch_r(u, branch, k)?;
    let (tr, det) = trace_det(&jacobian_block(branch, u, r, p, k));
    Ok(classify(tr, det))
}

/// First-order-in-`κ₂` predictions of where the symmetric states change stability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPoints {
    pub r_in: f64,
    pub r_anti: f64,
    pub u_in: f64,
    pub u_anti: f64,
}

pub fn asymptotic_points(
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<AsymptoticPoints, StabilityError> {
    if k.kappa1 != 0.0 {
        return Err(StabilityError::NonZeroKappa1(k.kappa1));
    }
    if !(p.sigma > 0.0) {
        return Err(StabilityError::NonPositiveSigma(p.sigma));
    }
    let (rm, s, k2) = (p.r_m, p.sigma, k.kappa2);
    let rm2 = rm * rm;
    let dr = k2 / (s * rm2 * rm2);
    let u0 = rm2 * (rm2 - 2.0);
    let du = 4.0 * k2 / (s * rm2) * (1.0 - rm2);
    Ok(AsymptoticPoints {
        r_in: rm * (1.0 - dr),
        r_anti: rm * (1.0 + dr),
        u_in: u0 + du,
        u_anti: u0 - du,
    })
}

/// A located change of transverse stability on a symmetric branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationPoint {
    pub u: f64,
    pub r: f64,
    pub branch: BranchTag,
}

/// Exact zero of the transverse determinant for `κ₁ = 0`: solves
/// `σ s (r_m² − s) = ±2κ₂` for `s = r²` (plus sign inphase) and takes the root
/// nearest `r_m²`.
pub fn exact_det_zero(
    p: &ModelParams,
    k: &CouplingSpec,
    branch: BranchTag,
) -> Result<BifurcationPoint, StabilityError> {
    if k.kappa1 != 0.0 {
        return Err(StabilityError::NonZeroKappa1(k.kappa1));
    }
    if !(p.sigma > 0.0) {
        return Err(StabilityError::NonPositiveSigma(p.sigma));
    }
    let c = 2.0 * k.kappa2 * branch.cos_phi();
    let rm2 = p.r_m * p.r_m;
    let disc = rm2 * rm2 - 4.0 * c / p.sigma;
    if disc < 0.0 {
        return Err(StabilityError::NoRealRoot { kappa2: k.kappa2 });
    }
    let s = 0.5 * (rm2 + disc.sqrt());
    Ok(BifurcationPoint {
        u: s * s - 2.0 * s,
        r: s.sqrt(),
        branch,
    })
}

/// Equilibrium of the fast `(r_l, r_t, φ)` field at frozen `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct FastEquilibrium {
    pub u: f64,
    pub r_l: f64,
    pub r_t: f64,
    pub phi: f64,
    pub branch: BranchTag,
    pub jacobian: Matrix3<f64>,
    pub eigenvalues: [Complex64; 3],
    pub classification: Classification,
    pub residual: f64,
}

impl FastEquilibrium {
    pub fn is_stable(&self) -> bool {
        self.classification.is_stable()
    }
}

/// Seed grid for the equilibrium search: `r_l` uniform on `[r_l_min, r_l_max]`,
/// `r_t = f·r_l` with `f` uniform on `[−0.9, 0.9]`, `φ = −π + 2πk/n_phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedGrid {
    pub n_rl: usize,
    pub n_rt: usize,
    pub n_phi: usize,
    pub r_l_min: f64,
    pub r_l_max: f64,
}

impl Default for SeedGrid {
    fn default() -> Self {
        Self {
            n_rl: 20,
            n_rt: 11,
            n_phi: 24,
            r_l_min: 0.1,
            r_l_max: 1.7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSearch {
    pub equilibria: Vec<FastEquilibrium>,
    pub dropped_seeds: usize,
}

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
const RESIDUAL_ACCEPT: f64 = 1e-10;
const DEDUP_DIST: f64 = 1e-6;
/// Points where either radius `r_l ± r_t` is this small sit on the polar
/// singularity (phase undefined) and are discarded.
const ORIGIN_FLOOR: f64 = 1e-6;
/// Real parts this close to zero count as neutral in the numeric 3×3 classification.
const EIG_ZERO: f64 = 1e-8;

fn in_domain(x: &Vector3<f64>) -> bool {
    x[0] > 0.0 && x[0] > x[1].abs() && x.iter().all(|v| v.is_finite())
}

fn fast_residual(u: f64, x: &Vector3<f64>, p: &ModelParams, k: &CouplingSpec) -> Vector3<f64> {
    Vector3::from(lt_fast_field(u, [x[0], x[1], x[2]], p, k))
}

/// Central finite-difference Jacobian of the fast `(r_l, r_t, φ)` field.
pub fn lt_fast_jacobian_fd(
    u: f64,
    x: [f64; 3],
    p: &ModelParams,
    k: &CouplingSpec,
    h: f64,
) -> Matrix3<f64> {
    let mut jac = Matrix3::zeros();
    for c in 0..3 {
        let step = h * x[c].abs().max(1.0);
        let (mut xp, mut xm) = (x, x);
        xp[c] += step;
        xm[c] -= step;
        let fp = lt_fast_field(u, xp, p, k);
        let fm = lt_fast_field(u, xm, p, k);
        for r in 0..3 {
            jac[(r, c)] = (fp[r] - fm[r]) / (2.0 * step);
        }
    }
    jac
}

fn newton(
    u: f64,
    x0: Vector3<f64>,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Option<(Vector3<f64>, f64)> {
    let mut x = x0;
    if !in_domain(&x) {
        return None;
    }
    let mut f = fast_residual(u, &x, p, k);
    for _ in 0..NEWTON_MAX_ITER {
        let fnorm = f.amax();
        if fnorm < NEWTON_TOL {
            return Some((x, fnorm));
        }
        let jac = lt_fast_jacobian_fd(u, [x[0], x[1], x[2]], p, k, 1e-7);
        let dx = jac.lu().solve(&(-f))?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial = x + lambda * dx;
            if in_domain(&trial) {
                let ft = fast_residual(u, &trial, p, k);
                if ft.iter().all(|v| v.is_finite()) {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let (xn, fnew) = accepted?;
        let step = (xn - x).amax();
        x = xn;
        x[2] = wrap_phase(x[2]);
        f = fnew;
        if step < NEWTON_TOL && f.amax() < RESIDUAL_ACCEPT {
            return Some((x, f.amax()));
        }
    }
    let fnorm = f.amax();
    (fnorm < NEWTON_TOL).then_some((x, fnorm))
}

fn classify_eigenvalues(ev: &[Complex64]) -> Classification {
    if ev.iter().any(|l| l.re.abs() <= EIG_ZERO) {
        return Classification::Nonhyperbolic;
    }
    let n_pos = ev.iter().filter(|l| l.re > 0.0).count();
    let focus = ev.iter().any(|l| l.im.abs() > EIG_ZERO);
    match (n_pos, focus) {
        (0, false) => Classification::StableNode,
        (0, true) => Classification::StableFocus,
        (n, false) if n == ev.len() => Classification::UnstableNode,
        (n, true) if n == ev.len() => Classification::UnstableFocus,
        _ => Classification::Saddle,
    }
}

fn tag_of(r_t: f64, phi: f64) -> BranchTag {
    if r_t.abs() < 1e-8 {
        if phi.abs() < 1e-8 {
            return BranchTag::Inphase;
        }
        if PI - phi.abs() < 1e-8 {
            return BranchTag::Antiphase;
        }
    }
    BranchTag::General
}

fn build_equilibrium(
    u: f64,
    x: Vector3<f64>,
    residual: f64,
    p: &ModelParams,
    k: &CouplingSpec,
) -> FastEquilibrium {
    let mut phi = wrap_phase(x[2]);
    let mut r_t = x[1];
    let branch = tag_of(r_t, phi);
    match branch {
        BranchTag::Inphase => {
            r_t = 0.0;
            phi = 0.0;
        }
        BranchTag::Antiphase => {
            r_t = 0.0;
            phi = PI;
        }
        BranchTag::General => {}
    }
    let residual = residual.max(
        lt_fast_field(u, [x[0], r_t, phi], p, k)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs())),
    );
    let jacobian = lt_fast_jacobian_fd(u, [x[0], r_t, phi], p, k, 1e-6);
    let ev = jacobian.complex_eigenvalues();
    let eigenvalues = [ev[0], ev[1], ev[2]];
    FastEquilibrium {
        u,
        r_l: x[0],
        r_t,
        phi,
        branch,
        jacobian,
        eigenvalues,
        classification: classify_eigenvalues(&eigenvalues),
        residual,
    }
}

fn distance(a: &FastEquilibrium, b: &FastEquilibrium) -> f64 {
    let dphi = wrap_phase(a.phi - b.phi);
    ((a.r_l - b.r_l).powi(2) + (a.r_t - b.r_t).powi(2) + dphi * dphi).sqrt()
}

/// Symmetric equilibria of the fast field: roots of `u + κ₁ cos φ + 2r² − r⁴ = 0`.
fn symmetric_seeds(u: f64, k: &CouplingSpec) -> Vec<Vector3<f64>> {
    let mut seeds = Vec::new();
    for (phi, c) in [(0.0, 1.0), (PI, -1.0)] {
        let d = 1.0 + u + k.kappa1 * c;
        if d < 0.0 {
            continue;
        }
        for s in [1.0 + d.sqrt(), 1.0 - d.sqrt()] {
            if s > 0.0 {
                seeds.push(Vector3::new(s.sqrt(), 0.0, phi));
            }
        }
    }
    seeds
}

/// Newton search from every seed of `grid` plus the symmetric candidates.
/// Converged points are de-duplicated; seeds that fail or land on a cell at the
/// origin are counted, not reported.
pub fn find_fast_equilibria(
    u: f64,
    p: &ModelParams,
    k: &CouplingSpec,
    grid: &SeedGrid,
) -> EquilibriumSearch {
    let mut seeds = symmetric_seeds(u, k);
    let n_sym = seeds.len();
    for i in 0..grid.n_rl {
        let rl = if grid.n_rl == 1 {
            grid.r_l_min
        } else {
            grid.r_l_min + (grid.r_l_max - grid.r_l_min) * i as f64 / (grid.n_rl - 1) as f64
        };
        for j in 0..grid.n_rt {
            let frac = if grid.n_rt == 1 {
                0.0
            } else {
                -0.9 + 1.8 * j as f64 / (grid.n_rt - 1) as f64
            };
            for m in 0..grid.n_phi {
                let phi = -PI + 2.0 * PI * m as f64 / grid.n_phi as f64;
                seeds.push(Vector3::new(rl, frac * rl, phi));
            }
        }
    }
    let mut found: Vec<FastEquilibrium> = Vec::new();
    let mut dropped = 0;
    for (idx, seed) in seeds.into_iter().enumerate() {
        match newton(u, seed, p, k) {
            Some((x, res)) if res < RESIDUAL_ACCEPT && x[0] < 10.0 && x[0] - x[1].abs() > ORIGIN_FLOOR => {
                let eq = build_equilibrium(u, x, res, p, k);
                if eq.residual >= RESIDUAL_ACCEPT {
                    dropped += 1;
                    continue;
                }
                if !found.iter().any(|e| distance(e, &eq) < DEDUP_DIST) {
                    found.push(eq);
                }
            }
            _ => {
                if idx >= n_sym {
                    dropped += 1;
                }
            }
        }
    }
    found.sort_by(|a, b| {
        a.phi
            .total_cmp(&b.phi)
            .then(a.r_l.total_cmp(&b.r_l))
            .then(a.r_t.total_cmp(&b.r_t))
    });
    EquilibriumSearch {
        equilibria: found,
        dropped_seeds: dropped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig5a() -> (ModelParams, CouplingSpec) {
        (
            ModelParams::new(3.0, 0.8, 0.0, 3.0, 1.35).unwrap(),
            CouplingSpec::all_to_all(2, 0.001, 0.2),
        )
    }

    #[test]
    fn branch_radius_examples() {
        let k0 = CouplingSpec::all_to_all(2, 0.0, 0.2);
        assert_eq!(solve_branch_r(-1.0, BranchTag::Inphase, &k0).unwrap(), 1.0);
        let r = solve_branch_r(0.0, BranchTag::Antiphase, &k0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        let k = CouplingSpec::all_to_all(2, 0.001, 0.2);
        let r = solve_branch_r(-0.4413 - 0.002, BranchTag::Inphase, &k).unwrap();
        assert!((r - 1.321916).abs() < 5e-7, "r = {r}");
        assert!(matches!(
            solve_branch_r(-1.1, BranchTag::Inphase, &k0),
            Err(StabilityError::BelowFold { .. })
        ));
    }

    #[test]
    fn uncoupled_blocks_are_triangular() {
        let p = fig5a().0;
        let k = CouplingSpec::all_to_all(2, 0.0, 0.0);
        let (u, r) = (-0.3, 1.3);
        for b in [jacobian_inphase(u, r, &p, &k), jacobian_antiphase(u, r, &p, &k)] {
            assert_eq!(b.0[0][1], 0.0);
            assert_eq!(b.0[1][1], 0.0);
            assert_eq!(b.0[0][0], u + 6.0 * r * r - 5.0 * r.powi(4));
        }
    }

    #[test]
    fn trace_and_det_at_turning_radius() {
        let p = fig5a().0;
        let k = CouplingSpec::all_to_all(2, 0.0, 0.2);
        let r = p.r_m;
        let u = r.powi(4) - 2.0 * r * r;
        let (tr, det) = trace_det(&jacobian_inphase(u, r, &p, &k));
        assert!((det - 0.16).abs() < 1e-12);
        assert!((tr - (-5.99602)).abs() < 1e-5, "tr = {tr}");
    }

    #[test]
    fn classification_examples() {
        let (tr, det) = trace_det(&Block2::identity());
        assert_eq!((tr, det), (2.0, 1.0));
        assert_eq!(classify(tr, det), Classification::UnstableNode);
        assert_eq!(classify(-6.0, 0.16), Classification::StableNode);
        assert_eq!(classify(-1.0, 1.0), Classification::StableFocus);
        assert_eq!(classify(1.0, -1.0), Classification::Saddle);
        assert_eq!(classify(-1.0, 1e-13), Classification::Nonhyperbolic);
        assert_eq!(classify(0.0, 1.0), Classification::Nonhyperbolic);
    }

    #[test]
    fn kappa_flip_maps_inphase_to_antiphase() {
        let p = fig5a().0;
        let k = CouplingSpec::all_to_all(2, 0.013, -0.17);
        let kf = CouplingSpec::all_to_all(2, -0.013, 0.17);
        let a = jacobian_inphase(-0.4, 1.29, &p, &k);
        let b = jacobian_antiphase(-0.4, 1.29, &p, &kf);
        assert_eq!(a, b);
    }

    #[test]
    fn asymptotic_points_reject_kappa1() {
        let (p, k) = fig5a();
        assert!(matches!(
            asymptotic_points(&p, &k),
            Err(StabilityError::NonZeroKappa1(_))
        ));
        assert!(exact_det_zero(&p, &k, BranchTag::Inphase).is_err());
    }

    #[test]
    fn vanishing_kappa2_degenerates_to_turning_point() {
        let p = fig5a().0;
        let k = CouplingSpec::all_to_all(2, 0.0, 0.0);
        let a = asymptotic_points(&p, &k).unwrap();
        assert_eq!(a.r_in, p.r_m);
        assert_eq!(a.r_anti, p.r_m);
        assert_eq!(a.u_in, a.u_anti);
        let e = exact_det_zero(&p, &k, BranchTag::Inphase).unwrap();
        assert_eq!(e.r, p.r_m);
    }

    #[test]
    fn large_kappa2_has_no_det_zero() {
        let p = fig5a().0;
        let k = CouplingSpec::all_to_all(2, 0.0, 5.0);
        assert!(matches!(
            exact_det_zero(&p, &k, BranchTag::Inphase),
            Err(StabilityError::NoRealRoot { .. })
        ));
    }

    #[test]
    fn uncoupled_search_contains_both_symmetric_states() {
        let p = fig5a().0;
        let k = CouplingSpec::all_to_all(2, 0.0, 0.0);
        let u = -0.5;
        let r = solve_branch_r(u, BranchTag::Inphase, &k).unwrap();
        let found = find_fast_equilibria(u, &p, &k, &SeedGrid::default());
        for tag in [BranchTag::Inphase, BranchTag::Antiphase] {
            let eq = found
                .equilibria
                .iter()
                .find(|e| e.branch == tag && (e.r_l - r).abs() < 1e-9)
                .expect("symmetric equilibrium present");
            assert_eq!(eq.classification, Classification::Nonhyperbolic);
        }
    }

    #[test]
    fn equilibria_have_small_residuals() {
        let (p, k) = fig5a();
        let found = find_fast_equilibria(-0.32, &p, &k, &SeedGrid::default());
        assert!(!found.equilibria.is_empty());
        for e in &found.equilibria {
            let f = lt_fast_field(-0.32, [e.r_l, e.r_t, e.phi], &p, &k);
            assert!(f.iter().all(|v| v.abs() < 1e-10), "{f:?}");
        }
    }
}
