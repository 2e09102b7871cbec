//! Bifurcation diagrams as data.
//!
//! [`branch_diagram`] collects all fast equilibria over a grid in `u` and links
//! them into branches. [`boundary_scan`] follows the transverse stability
//! changes of the two symmetric branches as a second parameter varies, and
//! labels the regions between them.

use crate::model::{wrap_phase, CouplingSpec, ModelParams};
use crate::stability::{
    classify, find_fast_equilibria, jacobian_block, solve_branch_r, trace_det, BifurcationPoint,
    BranchTag, FastEquilibrium, SeedGrid, StabilityError,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("no sign change of the transverse determinant on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error("unknown scan plane '{0}' (expected sigma, r_m, kappa1 or kappa2)")]
    UnknownPlane(String),
    #[error("parameter value {value} is invalid for plane {plane}")]
    InvalidParameter { plane: ScanPlane, value: f64 },
}

/// Uniform grid `start, start + step, …` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, n: usize) -> Result<Self, ScanError> {
        if n == 0 || !start.is_finite() || !end.is_finite() || (n > 1 && end == start) {
            return Err(ScanError::InvalidGrid(format!(
                "{n} points on [{start}, {end}]"
            )));
        }
        Ok(Self { start, end, n })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n == 1 {
            self.start
        } else {
            self.start + (self.end - self.start) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchDiagram {
    pub u: Vec<f64>,
    /// Equilibria found at each `u[i]`.
    pub points: Vec<Vec<FastEquilibrium>>,
    /// Each branch is a list of `(grid index, point index)` pairs with increasing grid index.
    pub branches: Vec<Vec<(usize, usize)>>,
    pub dropped_seeds: usize,
}

impl BranchDiagram {
    pub fn all_points(&self) -> impl Iterator<Item = &FastEquilibrium> {
        self.points.iter().flatten()
    }

    /// `u` values at which the symmetric state `tag` is present and stable.
    pub fn stable_u(&self, tag: BranchTag) -> Vec<f64> {
        self.all_points()
            .filter(|e| e.branch == tag && e.is_stable())
            .map(|e| e.u)
            .collect()
    }
}

/// Largest distance in `(r_l, r_t, φ)` at which points on adjacent grid values are linked.
const LINK_DISTANCE: f64 = 0.25;

fn link_distance(a: &FastEquilibrium, b: &FastEquilibrium) -> f64 {
    let dphi = wrap_phase(a.phi - b.phi);
    ((a.r_l - b.r_l).powi(2) + (a.r_t - b.r_t).powi(2) + dphi * dphi).sqrt()
}

pub fn branch_diagram(
    u_grid: &Grid,
    p: &ModelParams,
    k: &CouplingSpec,
    seeds: &SeedGrid,
) -> BranchDiagram {
    let u = u_grid.values();
    let searches: Vec<_> = u
        .par_iter()
        .map(|&ui| find_fast_equilibria(ui, p, k, seeds))
        .collect();
    let dropped_seeds = searches.iter().map(|s| s.dropped_seeds).sum();
    let points: Vec<Vec<FastEquilibrium>> = searches.into_iter().map(|s| s.equilibria).collect();

    let mut branches: Vec<Vec<(usize, usize)>> = Vec::new();
    // Branches whose last point sits on the previous grid value.
    let mut open: Vec<usize> = Vec::new();
    for (gi, pts) in points.iter().enumerate() {
        let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
        for &b in &open {
            let (pg, pp) = *branches[b].last().unwrap();
            let prev = &points[pg][pp];
            for (pi, e) in pts.iter().enumerate() {
                let d = link_distance(prev, e);
                if d < LINK_DISTANCE {
                    candidates.push((d, b, pi));
                }
            }
        }
        candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let mut used_branch = vec![false; branches.len()];
        let mut used_point = vec![false; pts.len()];
        let mut next_open = Vec::new();
        for (_, b, pi) in candidates {
            if used_branch[b] || used_point[pi] {
                continue;
            }
            used_branch[b] = true;
            used_point[pi] = true;
            branches[b].push((gi, pi));
            next_open.push(b);
        }
        for (pi, used) in used_point.iter().enumerate() {
            if !used {
                branches.push(vec![(gi, pi)]);
                next_open.push(branches.len() - 1);
            }
        }
        next_open.sort_unstable();
        open = next_open;
    }
    BranchDiagram {
        u,
        points,
        branches,
        dropped_seeds,
    }
}

/// Second parameter of a two-parameter scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanPlane {
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "r_m")]
    RM,
    #[serde(rename = "kappa1")]
    Kappa1,
    #[serde(rename = "kappa2")]
    Kappa2,
}

impl ScanPlane {
    pub fn name(self) -> &'static str {
        match self {
            ScanPlane::Sigma => "sigma",
            ScanPlane::RM => "r_m",
            ScanPlane::Kappa1 => "kappa1",
            ScanPlane::Kappa2 => "kappa2",
        }
    }

    /// Parameters with the scanned value substituted.
    pub fn apply(
        self,
        lambda: f64,
        p: &ModelParams,
        k: &CouplingSpec,
    ) -> Result<(ModelParams, CouplingSpec), ScanError> {
        let mut p = *p;
        let mut k = k.clone();
        match self {
            ScanPlane::Sigma => p.sigma = lambda,
            ScanPlane::RM => p.r_m = lambda,
            ScanPlane::Kappa1 => k.kappa1 = lambda,
            ScanPlane::Kappa2 => k.kappa2 = lambda,
        }
        p.validate().map_err(|_| ScanError::InvalidParameter {
            plane: self,
            value: lambda,
        })?;
        Ok((p, k))
    }
}

impl fmt::Display for ScanPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanPlane {
    type Err = ScanError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sigma" => Ok(ScanPlane::Sigma),
            "r_m" | "rm" => Ok(ScanPlane::RM),
            "kappa1" => Ok(ScanPlane::Kappa1),
            "kappa2" => Ok(ScanPlane::Kappa2),
            other => Err(ScanError::UnknownPlane(other.to_string())),
        }
    }
}

/// Which symmetric spiking states are stable at a point of the `(λ, u)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Antiphase only.
    #[serde(rename = "a")]
    A,
    /// Both (bistable).
    #[serde(rename = "b")]
    B,
    /// Inphase only.
    #[serde(rename = "c")]
    C,
    #[serde(rename = "none")]
    Neither,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::A => "a",
            RegionLabel::B => "b",
            RegionLabel::C => "c",
            RegionLabel::Neither => "none",
        }
    }

    fn from_flags(inphase: bool, antiphase: bool) -> Self {
        match (inphase, antiphase) {
            (true, true) => RegionLabel::B,
            (true, false) => RegionLabel::C,
            (false, true) => RegionLabel::A,
            (false, false) => RegionLabel::Neither,
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn branch_stable(tag: BranchTag, u: f64, p: &ModelParams, k: &CouplingSpec) -> Option<bool> {
    let r = solve_branch_r(u, tag, k).ok()?;
    let (tr, det) = trace_det(&jacobian_block(tag, u, r, p, k));
    Some(classify(tr, det).is_stable())
}

/// Region label at `(u, p, k)` from the two transverse blocks.
pub fn probe_label(u: f64, p: &ModelParams, k: &CouplingSpec) -> RegionLabel {
    let i = branch_stable(BranchTag::Inphase, u, p, k).unwrap_or(false);
    let a = branch_stable(BranchTag::Antiphase, u, p, k).unwrap_or(false);
    RegionLabel::from_flags(i, a)
}

/// One row of a two-parameter scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub lambda: f64,
    /// Stability changes of the inphase block, by decreasing `u`.
    pub u_in: Vec<f64>,
    /// Stability changes of the antiphase block, by decreasing `u`.
    pub u_anti: Vec<f64>,
    /// `(u_lo, u_hi, label)` intervals between consecutive crossings, labelled at their midpoints.
    pub regions: Vec<(f64, f64, RegionLabel)>,
}

impl BoundaryRow {
    pub fn first_u_in(&self) -> Option<f64> {
        self.u_in.first().copied()
    }

    pub fn first_u_anti(&self) -> Option<f64> {
        self.u_anti.first().copied()
    }

    pub fn label_at(&self, u: f64) -> Option<RegionLabel> {
        self.regions
            .iter()
            .find(|(lo, hi, _)| u >= *lo && u <= *hi)
            .map(|r| r.2)
    }

    /// Width of the bistable band (sum over `b` intervals).
    pub fn bistable_width(&self) -> f64 {
        self.regions
            .iter()
            .filter(|r| r.2 == RegionLabel::B)
            .map(|r| r.1 - r.0)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub plane: ScanPlane,
    pub u_window: (f64, f64),
    pub rows: Vec<BoundaryRow>,
}

/// Bisection tolerance in `u` for stability changes.
const BISECT_TOL: f64 = 1e-12;
/// Determinants this small at both window ends mean a degenerate (uncoupled) block.
const DET_FLOOR: f64 = 1e-12;

fn det_along(tag: BranchTag, u: f64, p: &ModelParams, k: &CouplingSpec) -> Option<(f64, f64)> {
    let r = solve_branch_r(u, tag, k).ok()?;
    Some(trace_det(&jacobian_block(tag, u, r, p, k)))
}

/// Locates a zero of the transverse determinant of `branch` inside `u_window`
/// by bisection along the branch radius from [`solve_branch_r`].
pub fn det_zero_bisect(
    branch: BranchTag,
    u_window: (f64, f64),
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<BifurcationPoint, ScanError> {
    let (mut lo, mut hi) = (u_window.0.min(u_window.1), u_window.0.max(u_window.1));
    let (_, mut d_lo) = det_along(branch, lo, p, k).ok_or(StabilityError::BelowFold {
        u: lo,
        fold: f64::NAN,
    })?;
    let (_, d_hi) = det_along(branch, hi, p, k).ok_or(StabilityError::BelowFold {
        u: hi,
        fold: f64::NAN,
    })?;
    let no_change = ScanError::NoSignChange { lo, hi };
    if d_lo.abs() <= DET_FLOOR && d_hi.abs() <= DET_FLOOR {
        return Err(no_change);
    }
    if d_lo == 0.0 {
        return point(branch, lo, k);
    }
    if d_hi == 0.0 {
        return point(branch, hi, k);
    }
    if d_lo.signum() == d_hi.signum() {
        return Err(no_change);
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let (_, d) = det_along(branch, mid, p, k).expect("branch exists inside window");
        if d == 0.0 {
            return point(branch, mid, k);
        }
        if d.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d;
        } else {
            hi = mid;
        }
    }
    point(branch, 0.5 * (lo + hi), k)
}

fn point(branch: BranchTag, u: f64, k: &CouplingSpec) -> Result<BifurcationPoint, ScanError> {
    Ok(BifurcationPoint {
        u,
        r: solve_branch_r(u, branch, k)?,
        branch,
    })
}

fn bisect_stability(tag: BranchTag, lo: f64, hi: f64, p: &ModelParams, k: &CouplingSpec) -> f64 {
    let (_, d_lo) = det_along(tag, lo, p, k).unwrap();
    let (_, d_hi) = det_along(tag, hi, p, k).unwrap();
    if d_lo.signum() != d_hi.signum() {
        if let Ok(bp) = det_zero_bisect(tag, (lo, hi), p, k) {
            return bp.u;
        }
    }
    // Stability changed through the trace instead.
    let s_lo = branch_stable(tag, lo, p, k).unwrap();
    let (mut a, mut b) = (lo, hi);
    while b - a > BISECT_TOL {
        let m = 0.5 * (a + b);
        if branch_stable(tag, m, p, k).unwrap() == s_lo {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn crossings(tag: BranchTag, us: &[f64], p: &ModelParams, k: &CouplingSpec) -> Vec<f64> {
    let flags: Vec<Option<bool>> = us.iter().map(|&u| branch_stable(tag, u, p, k)).collect();
    let mut out = Vec::new();
    for i in (1..us.len()).rev() {
        if let (Some(a), Some(b)) = (flags[i - 1], flags[i]) {
            if a != b {
                out.push(bisect_stability(tag, us[i - 1], us[i], p, k));
            }
        }
    }
    out
}

fn scan_row(
    plane: ScanPlane,
    lambda: f64,
    us: &[f64],
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<BoundaryRow, ScanError> {
    let (p, k) = plane.apply(lambda, p, k)?;
    let u_in = crossings(BranchTag::Inphase, us, &p, &k);
    let u_anti = crossings(BranchTag::Antiphase, us, &p, &k);
    let (u_lo, u_hi) = (us[0], us[us.len() - 1]);
    let mut cuts: Vec<f64> = u_in
        .iter()
        .chain(&u_anti)
        .copied()
        .chain([u_lo, u_hi])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let regions = cuts
        .windows(2)
        .map(|w| (w[0], w[1], probe_label(0.5 * (w[0] + w[1]), &p, &k)))
        .collect();
    Ok(BoundaryRow {
        lambda,
        u_in,
        u_anti,
        regions,
    })
}

/// Two-parameter scan in the `(λ, u)` plane. Each `λ` is independent; rows come
/// back sorted by `λ`. A branch missing from the window yields empty crossing
/// lists rather than an error.
pub fn boundary_scan(
    plane: ScanPlane,
    lambda_grid: &Grid,
    u_grid: &Grid,
    p: &ModelParams,
    k: &CouplingSpec,
) -> Result<RegionBoundary, ScanError> {
    if u_grid.n < 2 {
        return Err(ScanError::InvalidGrid("u grid needs at least two points".into()));
    }
    let mut us = u_grid.values();
    us.sort_by(f64::total_cmp);
    let mut rows = lambda_grid
        .values()
        .par_iter()
        .map(|&lambda| scan_row(plane, lambda, &us, p, k))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(RegionBoundary {
        plane,
        u_window: (us[0], us[us.len() - 1]),
        rows,
    })
}
