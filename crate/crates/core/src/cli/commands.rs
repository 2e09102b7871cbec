//! `simulate`, `scan` and `analytic-points`.

use std::io;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use super::config::{ConfigError, ScanKind, ScenarioConfig};
use super::output::{Cell, OutputDir};
use crate::integrator::{simulate_network, IntegrateError, Trajectory};
use crate::scan::{boundary_scan, branch_diagram, det_zero_bisect, BranchDiagram, RegionBoundary, ScanError};
use crate::stability::{asymptotic_points, exact_det_zero, BranchTag, StabilityError};
use crate::synchrony::{
    burst_shapes, detect_transitions, pairwise_distance, segment_bursts_from, SyncError,
    SynchronyReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ACCEPTANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<IntegrateError> for CliError {
    fn from(e: IntegrateError) -> Self {
        match e {
            IntegrateError::InvalidConfig(m) => CliError::Config(ConfigError::Invalid(m)),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::InvalidGrid(_) | ScanError::UnknownPlane(_) | ScanError::InvalidParameter { .. } => {
                CliError::Config(ConfigError::Invalid(e.to_string()))
            }
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<SyncError> for CliError {
    fn from(e: SyncError) -> Self {
        match e {
            SyncError::InvalidThresholds { .. } | SyncError::InvalidConfig(_) => {
                CliError::Config(ConfigError::Invalid(e.to_string()))
            }
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Integrates the configured network with the configured seed.
pub fn run_trajectory(cfg: &ScenarioConfig) -> Result<Trajectory, CliError> {
    cfg.validate()?;
    let s0 = cfg.initial_state()?;
    Ok(simulate_network(&cfg.model, &cfg.coupling(), &s0, &cfg.integrator)?)
}

/// Synchrony report of a trajectory; a record without complete bursts gives an empty report.
pub fn synchrony_of(traj: &Trajectory, cfg: &ScenarioConfig) -> Result<SynchronyReport, CliError> {
    match detect_transitions(traj, &cfg.analysis) {
        Ok(r) => Ok(r),
        Err(SyncError::NoCompleteBurst) => Ok(SynchronyReport {
            n_bursters: traj.n_bursters(),
            bursts: Vec::new(),
            distances: Vec::new(),
        }),
        Err(e) => Err(e.into()),
    }
}

/// Runs `cfg.seeds` consecutive seeds starting at `integrator.rng_seed`, in parallel.
/// Results come back in seed order.
pub fn run_seeds(cfg: &ScenarioConfig) -> Result<Vec<(u64, SynchronyReport)>, CliError> {
    cfg.validate()?;
    let base = cfg.integrator.rng_seed;
    (0..cfg.seeds)
        .into_par_iter()
        .map(|i| {
            let mut c = cfg.clone();
            c.integrator.rng_seed = base + i;
            let traj = run_trajectory(&c)?;
            Ok((c.integrator.rng_seed, synchrony_of(&traj, &c)?))
        })
        .collect()
}

fn pair_name(i: usize, j: usize, n: usize) -> String {
    if n <= 9 {
        format!("d_{}{}", i + 1, j + 1)
    } else {
        format!("d_{}_{}", i + 1, j + 1)
    }
}

/// Writes `trajectory.csv`: `t`, then `x_j, y_j, u_j` per burster, then `d_ij` per pair.
pub fn write_trajectory(out: &mut OutputDir, traj: &Trajectory) -> Result<(), CliError> {
    let n = traj.n_bursters();
    let mut header = vec!["t".to_string()];
    for j in 1..=n {
        header.extend([format!("x_{j}"), format!("y_{j}"), format!("u_{j}")]);
    }
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            header.push(pair_name(i, j, n));
            pairs.push(pairwise_distance(traj, i, j)?);
        }
    }
    let header_ref: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..traj.len()).map(|s| {
        let mut row: Vec<Cell> = Vec::with_capacity(header.len());
        row.push(traj.times[s].into());
        row.extend(traj.row(s).iter().map(|&v| Cell::F(v)));
        row.extend(pairs.iter().map(|d| Cell::F(d[s])));
        row
    });
    out.write_csv("trajectory.csv", &header_ref, rows)?;
    Ok(())
}

fn label_runs(labels: &[crate::synchrony::SyncLabel]) -> Vec<Value> {
    let mut runs: Vec<(crate::synchrony::SyncLabel, usize)> = Vec::new();
    for &l in labels {
        match runs.last_mut() {
            Some((last, c)) if *last == l => *c += 1,
            _ => runs.push((l, 1)),
        }
    }
    runs.into_iter()
        .map(|(l, c)| json!({"label": l, "windows": c}))
        .collect()
}

pub fn synchrony_json(report: &SynchronyReport) -> Value {
    let bursts: Vec<Value> = report
        .bursts
        .iter()
        .map(|b| {
            json!({
                "index": b.index,
                "t_start": b.t_start,
                "t_end": b.t_end,
                "u_start": b.u_start,
                "u_end": b.u_end,
                "spike_period": b.spike_period,
                "label_runs": label_runs(&b.labels()),
                "transitions": b.transitions,
            })
        })
        .collect();
    json!({
        "burst_count": report.bursts.len(),
        "transition_count": report.transitions().count(),
        "bursts": bursts,
        "distances": report.distances,
    })
}

/// `simulate`: trajectory CSV plus a JSON summary of bursts and, for two or
/// more bursters, their synchrony.
pub fn cmd_simulate(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<Value, CliError> {
    let traj = run_trajectory(cfg)?;
    if traj.is_empty() {
        return Err(CliError::Config(ConfigError::Invalid("empty trajectory".into())));
    }
    write_trajectory(out, &traj)?;
    let from = (cfg.analysis.transient_fraction * traj.len() as f64).floor() as usize;
    let segments = segment_bursts_from(&traj, from, cfg.analysis.r_hi, cfg.analysis.r_lo)?;
    let bursts: Vec<Value> = segments
        .iter()
        .map(|s| {
            json!({
                "t_start": traj.times[s.start],
                "t_end": traj.times[s.end - 1],
                "u_start": s.u_start,
                "u_end": s.u_end,
            })
        })
        .collect();
    let mut summary = json!({
        "command": "simulate",
        "n_bursters": traj.n_bursters(),
        "samples": traj.len(),
        "t_end": traj.times.last().copied().unwrap_or(0.0),
        "burst_count": segments.len(),
        "bursts": bursts,
    });
    if traj.n_bursters() == 1 {
        summary["burst_shapes"] = json!(burst_shapes(&traj, 0, &cfg.analysis, 0.5, -1.0)?);
    } else {
        summary["synchrony"] = synchrony_json(&synchrony_of(&traj, cfg)?);
    }
    out.write_json("summary.json", summary.clone())?;
    Ok(summary)
}

fn stable_range(us: &[f64]) -> Option<(f64, f64)> {
    let lo = us.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = us.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo <= hi).then_some((lo, hi))
}

type Range = Option<(f64, f64)>;

/// Inphase and antiphase stable `u` ranges and their overlap.
pub fn stable_ranges(d: &BranchDiagram) -> (Range, Range, Range) {
    let i = stable_range(&d.stable_u(BranchTag::Inphase));
    let a = stable_range(&d.stable_u(BranchTag::Antiphase));
    let overlap = match (i, a) {
        (Some(i), Some(a)) if i.0.max(a.0) <= i.1.min(a.1) => Some((i.0.max(a.0), i.1.min(a.1))),
        _ => None,
    };
    (i, a, overlap)
}

pub fn write_branches(out: &mut OutputDir, d: &BranchDiagram) -> Result<(), CliError> {
    let rows = d.branches.iter().enumerate().flat_map(|(bi, br)| {
        br.iter().map(move |&(gi, pi)| {
            let e = &d.points[gi][pi];
            let re_max = e.eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
            vec![
                Cell::from(bi),
                e.u.into(),
                e.r_l.into(),
                e.r_t.into(),
                e.phi.into(),
                e.branch.as_str().into(),
                e.classification.as_str().into(),
                re_max.into(),
            ]
        })
    });
    out.write_csv(
        "branches.csv",
        &["branch_id", "u", "r_l", "r_t", "phi", "tag", "stability", "max_re_eigenvalue"],
        rows,
    )?;
    Ok(())
}

pub fn write_boundary(out: &mut OutputDir, b: &RegionBoundary) -> Result<(), CliError> {
    out.write_csv(
        "boundary.csv",
        &["lambda", "u_in", "u_anti", "n_u_in", "n_u_anti", "bistable_width"],
        b.rows.iter().map(|r| {
            vec![
                r.lambda.into(),
                r.first_u_in().into(),
                r.first_u_anti().into(),
                r.u_in.len().into(),
                r.u_anti.len().into(),
                r.bistable_width().into(),
            ]
        }),
    )?;
    out.write_csv(
        "regions.csv",
        &["lambda", "u_lo", "u_hi", "label"],
        b.rows.iter().flat_map(|r| {
            r.regions
                .iter()
                .map(move |&(lo, hi, l)| vec![r.lambda.into(), lo.into(), hi.into(), l.as_str().into()])
        }),
    )?;
    Ok(())
}

pub fn compute_branch_diagram(cfg: &ScenarioConfig) -> Result<BranchDiagram, CliError> {
    cfg.model.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(branch_diagram(&cfg.scan.u_grid()?, &cfg.model, &cfg.coupling(), &cfg.scan.seeds))
}

pub fn compute_boundary(cfg: &ScenarioConfig) -> Result<RegionBoundary, CliError> {
    cfg.model.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(boundary_scan(
        cfg.scan.plane,
        &cfg.scan.lambda_grid()?,
        &cfg.scan.u_grid()?,
        &cfg.model,
        &cfg.coupling(),
    )?)
}

/// `scan`: branch points against `u`, or stability boundaries in a `(λ, u)` plane.
pub fn cmd_scan(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<Value, CliError> {
    let summary = match cfg.scan.kind {
        ScanKind::Branch => {
            let d = compute_branch_diagram(cfg)?;
            write_branches(out, &d)?;
            let (i, a, overlap) = stable_ranges(&d);
            json!({
                "command": "scan",
                "kind": "branch",
                "grid_points": d.u.len(),
                "branches": d.branches.len(),
                "equilibria": d.all_points().count(),
                "dropped_seeds": d.dropped_seeds,
                "stable_inphase_u": i,
                "stable_antiphase_u": a,
                "bistable_u": overlap,
            })
        }
        ScanKind::Boundary => {
            let b = compute_boundary(cfg)?;
            write_boundary(out, &b)?;
            json!({
                "command": "scan",
                "kind": "boundary",
                "plane": b.plane,
                "u_window": b.u_window,
                "rows": b.rows.len(),
                "bistable_width": b.rows.iter().map(|r| json!({"lambda": r.lambda, "width": r.bistable_width()})).collect::<Vec<_>>(),
            })
        }
    };
    out.write_json("summary.json", summary.clone())?;
    Ok(summary)
}

/// One located stability change, as reported by `analytic-points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRow {
    pub method: &'static str,
    pub branch: BranchTag,
    pub r: f64,
    pub u: f64,
}

/// Asymptotic, exact (both need `κ₁ = 0`) and bisected stability-change points.
pub fn analytic_points(cfg: &ScenarioConfig) -> Result<(Vec<PointRow>, Vec<String>), CliError> {
    cfg.model.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let (p, k) = (cfg.model, cfg.coupling());
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    match asymptotic_points(&p, &k) {
        Ok(a) => rows.extend([
            PointRow { method: "asymptotic", branch: BranchTag::Inphase, r: a.r_in, u: a.u_in },
            PointRow { method: "asymptotic", branch: BranchTag::Antiphase, r: a.r_anti, u: a.u_anti },
        ]),
        Err(e) => notes.push(format!("asymptotic: {e}")),
    }
    for tag in [BranchTag::Inphase, BranchTag::Antiphase] {
        match exact_det_zero(&p, &k, tag) {
            Ok(b) => rows.push(PointRow { method: "exact", branch: tag, r: b.r, u: b.u }),
            Err(e) => notes.push(format!("exact {}: {e}", tag.as_str())),
        }
    }
    for tag in [BranchTag::Inphase, BranchTag::Antiphase] {
        match det_zero_bisect(tag, cfg.scan.u_window(), &p, &k) {
            Ok(b) => rows.push(PointRow { method: "bisection", branch: tag, r: b.r, u: b.u }),
            Err(e) => notes.push(format!("bisection {}: {e}", tag.as_str())),
        }
    }
    Ok((rows, notes))
}

pub fn cmd_analytic_points(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<Value, CliError> {
    let (rows, notes) = analytic_points(cfg)?;
    out.write_csv(
        "analytic_points.csv",
        &["method", "branch", "r", "u"],
        rows.iter()
            .map(|r| vec![r.method.into(), r.branch.as_str().into(), r.r.into(), r.u.into()]),
    )?;
    let summary = json!({
        "command": "analytic-points",
        "points": rows.iter().map(|r| json!({"method": r.method, "branch": r.branch, "r": r.r, "u": r.u})).collect::<Vec<_>>(),
        "notes": notes,
    });
    out.write_json("summary.json", summary.clone())?;
    Ok(summary)
}
