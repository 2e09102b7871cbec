//! `reproduce`: runs the pipeline behind a table or figure and compares the
//! computed quantities with embedded expected values.

use serde::Serialize;
use serde_json::{json, Value};

use super::commands::{
    analytic_points, compute_boundary, compute_branch_diagram, run_seeds, run_trajectory,
    stable_ranges, synchrony_json, write_boundary, write_branches, CliError,
};
use super::config::{ConfigError, ScenarioConfig};
use super::output::{Cell, OutputDir};
use super::presets;
use crate::scan::{boundary_scan, det_zero_bisect, Grid, RegionBoundary, RegionLabel};
use crate::stability::{find_fast_equilibria, BranchTag};
use crate::synchrony::{burst_shapes, min_radius_after, SyncLabel, SynchronyReport};

/// Targets accepted by `reproduce`.
pub const TARGETS: &[&str] = &[
    "table1", "table2", "fig2", "fig3", "fig4", "fig5a", "fig5b", "fig5c", "fig5d", "fig6", "fig7",
    "fig8", "fig9", "fig10", "fig11", "fig12", "slowpassage",
];

/// Share of bursts that must show the expected transition in stochastic targets.
pub const BURST_SHARE: f64 = 0.9;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    /// `abs_diff`, `>=`, `<=`, `<`, `>` or `holds`.
    pub relation: &'static str,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
    /// Reported for context only; does not affect the verdict.
    pub informational: bool,
}

impl Check {
    pub fn close(name: impl Into<String>, computed: f64, expected: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            computed,
            relation: "abs_diff",
            expected: Some(expected),
            tolerance: Some(tol),
            passed: (computed - expected).abs() <= tol,
            informational: false,
        }
    }

    pub fn at_least(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        Self::compare(name, computed, ">=", bound, computed >= bound)
    }

    pub fn at_most(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        Self::compare(name, computed, "<=", bound, computed <= bound)
    }

    pub fn below(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        Self::compare(name, computed, "<", bound, computed < bound)
    }

    pub fn above(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        Self::compare(name, computed, ">", bound, computed > bound)
    }

    fn compare(name: impl Into<String>, computed: f64, rel: &'static str, bound: f64, ok: bool) -> Self {
        Self {
            name: name.into(),
            computed,
            relation: rel,
            expected: Some(bound),
            tolerance: None,
            passed: ok,
            informational: false,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            computed: if ok { 1.0 } else { 0.0 },
            relation: "holds",
            expected: None,
            tolerance: None,
            passed: ok,
            informational: false,
        }
    }

    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            computed: value,
            relation: "info",
            expected: None,
            tolerance: None,
            passed: true,
            informational: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub target: String,
    pub checks: Vec<Check>,
    /// Extra structured results written alongside the checks.
    pub details: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }
}

/// Preset configuration of a reproduction target.
pub fn target_config(target: &str) -> Result<ScenarioConfig, ConfigError> {
    if !TARGETS.contains(&target) {
        return Err(ConfigError::Invalid(format!(
            "unknown target `{target}` (expected one of {})",
            TARGETS.join(", ")
        )));
    }
    presets::preset(target)
}

/// Runs `target` under `cfg`, writing data files and the report into `out`.
pub fn run_target(target: &str, cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<Report, CliError> {
    let (checks, details) = match target {
        "table1" => table(cfg, false)?,
        "table2" => table(cfg, true)?,
        "fig2" => single_burster(cfg)?,
        "fig3" => pair_transition(cfg, out, SyncLabel::Inphase, SyncLabel::Antiphase)?,
        "fig4" => pair_transition(cfg, out, SyncLabel::Antiphase, SyncLabel::Inphase)?,
        "fig5a" | "fig5b" | "fig5c" | "fig5d" => branch_panel(cfg, out)?,
        "fig6" => boundary_monotone(cfg, out, Monotone::WidthDecreasing)?,
        "fig7" => boundary_monotone(cfg, out, Monotone::CentreIncreasing)?,
        "fig8" => kappa1_plane(cfg, out, false)?,
        "fig9" => kappa1_plane(cfg, out, true)?,
        "fig10" => kappa2_plane(cfg, out, RegionLabel::C, (-0.004, 0.0))?,
        "fig11" => kappa2_plane(cfg, out, RegionLabel::A, (0.0, 0.006))?,
        "fig12" => three_bursters(cfg, out)?,
        "slowpassage" => slow_passage(cfg, out)?,
        other => {
            return Err(CliError::Config(ConfigError::Invalid(format!("unknown target `{other}`"))))
        }
    };
    let report = Report {
        target: target.to_string(),
        checks,
        details,
    };
    out.write_csv(
        "report.csv",
        &["check", "computed", "relation", "expected", "tolerance", "passed", "informational"],
        report.checks.iter().map(|c| {
            vec![
                Cell::from(c.name.as_str()),
                c.computed.into(),
                c.relation.into(),
                c.expected.into(),
                c.tolerance.into(),
                c.passed.into(),
                c.informational.into(),
            ]
        }),
    )?;
    out.write_json(
        "report.json",
        json!({
            "target": report.target,
            "passed": report.passed(),
            "checks": report.checks,
            "details": report.details,
        }),
    )?;
    Ok(report)
}

type Outcome = (Vec<Check>, Value);

/// Table rows: `(r_in, r_anti, u_in, u_anti)` asymptotic and the numeric row.
const TABLE_ASYMPTOTIC: [f64; 4] = [1.3229, 1.3771, -0.4438, -0.2032];
const TABLE_NUMERIC: [f64; 4] = [1.3210, 1.376, -0.4433, -0.2027];
const TABLE_ASYMPTOTIC_TOL: f64 = 1e-4;
const TABLE_NUMERIC_TOL: f64 = 2e-3;

fn table(cfg: &ScenarioConfig, swapped: bool) -> Result<Outcome, CliError> {
    let (rows, notes) = analytic_points(cfg)?;
    let get = |method: &str, tag: BranchTag| {
        rows.iter()
            .find(|r| r.method == method && r.branch == tag)
            .map(|r| (r.r, r.u))
            .ok_or_else(|| CliError::Numeric(format!("{method} {} point missing: {notes:?}", tag.as_str())))
    };
    // With κ₂ < 0 the table lists the same numbers with the inphase and antiphase columns exchanged.
    let ei = if swapped { [1, 0, 3, 2] } else { [0, 1, 2, 3] };
    let pick = |row: &[f64; 4]| [row[ei[0]], row[ei[1]], row[ei[2]], row[ei[3]]];
    let (asy, num) = (pick(&TABLE_ASYMPTOTIC), pick(&TABLE_NUMERIC));
    let mut checks = Vec::new();
    let (ai, aa) = (get("asymptotic", BranchTag::Inphase)?, get("asymptotic", BranchTag::Antiphase)?);
    checks.push(Check::close("asymptotic r_in", ai.0, asy[0], TABLE_ASYMPTOTIC_TOL));
    checks.push(Check::close("asymptotic r_anti", aa.0, asy[1], TABLE_ASYMPTOTIC_TOL));
    checks.push(Check::close("asymptotic u_in", ai.1, asy[2], TABLE_ASYMPTOTIC_TOL));
    checks.push(Check::close("asymptotic u_anti", aa.1, asy[3], TABLE_ASYMPTOTIC_TOL));
    let (bi, ba) = (get("bisection", BranchTag::Inphase)?, get("bisection", BranchTag::Antiphase)?);
    checks.push(Check::close("numeric r_in", bi.0, num[0], TABLE_NUMERIC_TOL));
    checks.push(Check::close("numeric r_anti", ba.0, num[1], TABLE_NUMERIC_TOL));
    checks.push(Check::close("numeric u_in", bi.1, num[2], TABLE_NUMERIC_TOL));
    checks.push(Check::close("numeric u_anti", ba.1, num[3], TABLE_NUMERIC_TOL));
    let (xi, xa) = (get("exact", BranchTag::Inphase)?, get("exact", BranchTag::Antiphase)?);
    checks.push(Check::close("bisection vs closed form u_in", bi.1, xi.1, 1e-9));
    checks.push(Check::close("bisection vs closed form u_anti", ba.1, xa.1, 1e-9));
    let details = json!({
        "points": rows.iter().map(|r| json!({"method": r.method, "branch": r.branch, "r": r.r, "u": r.u})).collect::<Vec<_>>(),
    });
    Ok((checks, details))
}

fn single_burster(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let traj = run_trajectory(cfg)?;
    let shapes = burst_shapes(&traj, 0, &cfg.analysis, 0.5, -1.0)?;
    let mut checks = vec![Check::at_least("complete bursts", shapes.len() as f64, 2.0)];
    let min_onset = shapes.iter().map(|s| s.onset_u).fold(f64::INFINITY, f64::min);
    checks.push(Check::above("smallest onset u (delayed Hopf)", min_onset, 0.0));
    let min_last = shapes
        .iter()
        .map(|s| s.last_spike_r.unwrap_or(f64::NAN))
        .fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NEG_INFINITY } else { a.min(b) });
    checks.push(Check::at_least("smallest radius at the last spike before the fold", min_last, 0.95));
    let worst_end = shapes.iter().map(|s| (s.end_u + 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("largest |u_end + 1|", worst_end, 0.15));

    let mut tonic = cfg.clone();
    tonic.model.a = 1.2;
    let t2 = run_trajectory(&tonic)?;
    let r_min = min_radius_after(&t2, cfg.analysis.transient_fraction);
    checks.push(Check::above("tonic (a = 1.2) minimum radius after transient", r_min, cfg.analysis.r_lo));
    Ok((checks, json!({ "burst_shapes": shapes, "tonic_min_radius": r_min })))
}

/// Bursts that show exactly one persistent `from → to` transition at `u ≤ u_max`.
pub fn count_single_transitions(
    reports: &[(u64, SynchronyReport)],
    from: SyncLabel,
    to: SyncLabel,
    u_max: f64,
) -> (usize, usize) {
    let mut good = 0;
    let mut total = 0;
    for (_, r) in reports {
        for b in &r.bursts {
            total += 1;
            if let [t] = b.transitions.as_slice() {
                if t.from == from && t.to == to && t.u_mean <= u_max {
                    good += 1;
                }
            }
        }
    }
    (good, total)
}

fn write_burst_table(out: &mut OutputDir, reports: &[(u64, SynchronyReport)]) -> Result<(), CliError> {
    let rows = reports.iter().flat_map(|(seed, r)| {
        r.bursts.iter().map(move |b| {
            let first = b.transitions.first();
            vec![
                Cell::from(*seed),
                b.index.into(),
                b.t_start.into(),
                b.t_end.into(),
                b.u_start.into(),
                b.u_end.into(),
                b.transitions.len().into(),
                first.map(|t| t.from.as_str()).into(),
                first.map(|t| t.to.as_str()).into(),
                first.map(|t| t.u_mean).into(),
            ]
        })
    });
    out.write_csv(
        "bursts.csv",
        &[
            "seed", "burst", "t_start", "t_end", "u_start", "u_end", "transitions", "first_from",
            "first_to", "first_u",
        ],
        rows,
    )?;
    Ok(())
}

fn seeds_json(reports: &[(u64, SynchronyReport)]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|(s, r)| json!({"seed": s, "synchrony": synchrony_json(r)}))
            .collect(),
    )
}

/// Where the starting state of a pair loses stability under frozen `u`.
fn loss_point(cfg: &ScenarioConfig, start: SyncLabel) -> Result<f64, CliError> {
    let tag = match start {
        SyncLabel::Antiphase => BranchTag::Antiphase,
        _ => BranchTag::Inphase,
    };
    Ok(det_zero_bisect(tag, cfg.scan.u_window(), &cfg.model, &cfg.coupling())?.u)
}

fn pair_transition(cfg: &ScenarioConfig, out: &mut OutputDir, from: SyncLabel, to: SyncLabel) -> Result<Outcome, CliError> {
    let u_loss = loss_point(cfg, from)?;
    let reports = run_seeds(cfg)?;
    write_burst_table(out, &reports)?;
    let (good, total) = count_single_transitions(&reports, from, to, u_loss);
    let share = if total == 0 { 0.0 } else { good as f64 / total as f64 };
    let checks = vec![
        Check::at_least("seeds", reports.len() as f64, 10.0),
        Check::info("complete bursts", total as f64),
        Check::info("frozen-u loss of stability of the starting state", u_loss),
        Check::at_least(
            format!("share of bursts with one {from}->{to} transition at u <= loss point"),
            share,
            BURST_SHARE,
        ),
    ];
    Ok((checks, json!({ "u_loss": u_loss, "good": good, "total": total, "seeds": seeds_json(&reports) })))
}

fn symmetric_stability(cfg: &ScenarioConfig, u: f64) -> (bool, bool) {
    let k = cfg.coupling();
    let s = find_fast_equilibria(u, &cfg.model, &k, &cfg.scan.seeds);
    let stable = |tag| s.equilibria.iter().any(|e| e.branch == tag && e.is_stable());
    (stable(BranchTag::Inphase), stable(BranchTag::Antiphase))
}

fn branch_panel(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let d = compute_branch_diagram(cfg)?;
    write_branches(out, &d)?;
    let (ri, ra, overlap) = stable_ranges(&d);
    // Starting state at the top of the burst: inphase for κ₂ > 0, antiphase otherwise.
    let early_inphase = cfg.kappa2 > 0.0;
    let mut checks = Vec::new();
    for (u, expect) in [
        (-0.1, (early_inphase, !early_inphase)),
        (-0.32, (true, true)),
        (-0.6, (!early_inphase, early_inphase)),
    ] {
        let got = symmetric_stability(cfg, u);
        checks.push(Check::holds(
            format!("u = {u}: inphase stable = {}, antiphase stable = {}", expect.0, expect.1),
            got == expect,
        ));
    }
    checks.push(Check::holds(
        "stable inphase and antiphase u-ranges overlap around u = -0.32",
        overlap.is_some_and(|(lo, hi)| lo <= -0.32 && -0.32 <= hi),
    ));
    Ok((
        checks,
        json!({ "stable_inphase_u": ri, "stable_antiphase_u": ra, "bistable_u": overlap }),
    ))
}

enum Monotone {
    WidthDecreasing,
    CentreIncreasing,
}

fn band_centre(b: &RegionBoundary, i: usize) -> Option<f64> {
    let (lo, hi): (Vec<f64>, Vec<f64>) = b.rows[i]
        .regions
        .iter()
        .filter(|r| r.2 == RegionLabel::B)
        .map(|r| (r.0, r.1))
        .unzip();
    let lo = lo.into_iter().reduce(f64::min)?;
    let hi = hi.into_iter().reduce(f64::max)?;
    Some(0.5 * (lo + hi))
}

fn boundary_monotone(cfg: &ScenarioConfig, out: &mut OutputDir, kind: Monotone) -> Result<Outcome, CliError> {
    let b = compute_boundary(cfg)?;
    write_boundary(out, &b)?;
    let n = b.rows.len();
    let mut checks = Vec::new();
    match kind {
        Monotone::WidthDecreasing => {
            let w: Vec<f64> = b.rows.iter().map(|r| r.bistable_width()).collect();
            let worst_rise = w.windows(2).map(|p| p[1] - p[0]).fold(f64::NEG_INFINITY, f64::max);
            checks.push(Check::at_most("largest increase of bistable width between neighbours", worst_rise, 1e-12));
            checks.push(Check::above("width at smallest minus width at largest lambda", w[0] - w[n - 1], 0.0));
        }
        Monotone::CentreIncreasing => {
            let c: Vec<Option<f64>> = (0..n).map(|i| band_centre(&b, i)).collect();
            checks.push(Check::holds("every row has a bistable band", c.iter().all(Option::is_some)));
            let c: Vec<f64> = c.into_iter().flatten().collect();
            let worst = c.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
            checks.push(Check::above("smallest increase of band centre between neighbours", worst, 0.0));
        }
    }
    Ok((checks, json!({ "rows": b.rows.len() })))
}

fn all_labelled(b: &RegionBoundary, i: usize, l: RegionLabel) -> bool {
    b.rows[i].regions.iter().all(|r| r.2 == l)
}

fn kappa1_plane(cfg: &ScenarioConfig, out: &mut OutputDir, excitatory: bool) -> Result<Outcome, CliError> {
    let b = compute_boundary(cfg)?;
    write_boundary(out, &b)?;
    let n = b.rows.len();
    let has_b = |i: usize| b.rows[i].regions.iter().any(|r| r.2 == RegionLabel::B);
    let checks = if excitatory {
        vec![
            Check::holds(
                "a bistable band exists for some kappa1 > 0",
                (0..n).any(|i| b.rows[i].lambda > 0.0 && has_b(i)),
            ),
            Check::holds("strongest excitatory kappa1: inphase only", all_labelled(&b, n - 1, RegionLabel::C)),
        ]
    } else {
        vec![
            Check::holds(
                "a bistable band exists for some kappa1 < 0",
                (0..n).any(|i| b.rows[i].lambda < 0.0 && has_b(i)),
            ),
            Check::holds("strongest inhibitory kappa1: antiphase only", all_labelled(&b, 0, RegionLabel::A)),
        ]
    };
    Ok((checks, json!({ "rows": n })))
}

fn kappa2_plane(
    cfg: &ScenarioConfig,
    out: &mut OutputDir,
    weak_label: RegionLabel,
    weak: (f64, f64),
) -> Result<Outcome, CliError> {
    let b = compute_boundary(cfg)?;
    write_boundary(out, &b)?;
    let weak_rows = boundary_scan(
        cfg.scan.plane,
        &Grid::new(weak.0, weak.1, 3)?,
        &cfg.scan.u_grid()?,
        &cfg.model,
        &cfg.coupling(),
    )?;
    let strong = b
        .rows
        .iter()
        .min_by(|x, y| (x.lambda - 0.2).abs().total_cmp(&(y.lambda - 0.2).abs()))
        .ok_or_else(|| CliError::Numeric("empty scan".into()))?;
    let checks = vec![
        Check::holds(
            format!(
                "weak kappa2 in [{}, {}]: {} only across the burst",
                weak.0,
                weak.1,
                if weak_label == RegionLabel::C { "inphase" } else { "antiphase" }
            ),
            (0..weak_rows.rows.len()).all(|i| all_labelled(&weak_rows, i, weak_label)),
        ),
        Check::holds(
            format!("bistable band at kappa2 = {}", strong.lambda),
            strong.regions.iter().any(|r| r.2 == RegionLabel::B),
        ),
    ];
    Ok((checks, json!({ "rows": b.rows.len(), "weak_rows": weak_rows.rows })))
}

fn three_bursters(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let reports = run_seeds(cfg)?;
    write_burst_table(out, &reports)?;
    let mut good = 0;
    let mut total = 0;
    for (_, r) in &reports {
        for b in &r.bursts {
            total += 1;
            let hit = b.transitions.iter().find(|t| t.from == SyncLabel::Splay && t.to == SyncLabel::Inphase);
            if let Some(t) = hit {
                let before = b.windows.iter().any(|w| w.t < t.t && w.order < 0.2);
                let after = b.windows.iter().any(|w| w.t >= t.t && w.order > 0.9);
                if before && after {
                    good += 1;
                }
            }
        }
    }
    let share = if total == 0 { 0.0 } else { good as f64 / total as f64 };
    let checks = vec![
        Check::at_least("seeds", reports.len() as f64, 5.0),
        Check::info("complete bursts", total as f64),
        Check::at_least("share of bursts with splay->inphase (R < 0.2 then R > 0.9)", share, BURST_SHARE),
    ];
    Ok((checks, json!({ "good": good, "total": total, "seeds": seeds_json(&reports) })))
}

fn slow_passage(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let u_in = loss_point(cfg, SyncLabel::Inphase)?;
    let reports = run_seeds(cfg)?;
    write_burst_table(out, &reports)?;
    let firsts: Vec<f64> = reports
        .iter()
        .flat_map(|(_, r)| r.bursts.iter())
        .filter_map(|b| {
            b.transitions
                .iter()
                .find(|t| t.from == SyncLabel::Inphase && t.to == SyncLabel::Antiphase)
                .map(|t| t.u_mean)
        })
        .collect();
    let (good, total) = count_single_transitions(&reports, SyncLabel::Inphase, SyncLabel::Antiphase, u_in);
    let offset = if firsts.is_empty() {
        f64::NAN
    } else {
        firsts.iter().sum::<f64>() / firsts.len() as f64 - u_in
    };
    let checks = vec![
        Check::info("frozen-u inphase loss of stability", u_in),
        Check::info("bursts with an inphase->antiphase transition", firsts.len() as f64),
        Check::info(
            "share of bursts with one inphase->antiphase transition at u <= loss point",
            if total == 0 { 0.0 } else { good as f64 / total as f64 },
        ),
        Check::below("mean offset u(transition) - u_in", offset, 0.0),
    ];
    Ok((checks, json!({ "u_in": u_in, "offset": offset, "seeds": seeds_json(&reports) })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_target_has_a_preset() {
        for t in TARGETS {
            target_config(t).unwrap();
        }
        assert!(target_config("fig1").is_err());
    }

    #[test]
    fn check_relations() {
        assert!(Check::close("x", 1.0, 1.05, 0.1).passed);
        assert!(!Check::close("x", 1.0, 1.2, 0.1).passed);
        assert!(Check::at_least("x", 0.9, 0.9).passed);
        assert!(!Check::below("x", 0.0, 0.0).passed);
        let r = Report {
            target: "t".into(),
            checks: vec![Check::info("i", f64::NAN), Check::holds("h", true)],
            details: Value::Null,
        };
        assert!(r.passed());
    }
}
