//! Acceptance suite. Runs every criterion, prints one `PASS`/`FAIL` line each,
//! and exits non-zero if any fails. Tolerances are the constants below.
//!
//! cargo test --release --test acceptance

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use elliptic_sync::cli::commands::{analytic_points, run_seeds, run_trajectory};
use elliptic_sync::cli::presets::preset;
use elliptic_sync::cli::reproduce::count_single_transitions;
use elliptic_sync::constrained::{eval_lt_field, eval_reduced_field, r1r2_to_lt, ReducedState};
use elliptic_sync::model::{
    eval_field_cartesian, eval_field_polar_pair, CouplingSpec, ModelParams, NetworkState,
    PolarPairState,
};
use elliptic_sync::scan::det_zero_bisect;
use elliptic_sync::stability::{
    asymptotic_points, exact_det_zero, find_fast_equilibria, jacobian_block,
    lt_fast_jacobian_fd, solve_branch_r, BranchTag,
};
use elliptic_sync::synchrony::{
    burst_shapes, min_radius_after, pairwise_distance, segment_bursts, SyncLabel,
};

const TABLE_DECIMALS_TOL: f64 = 1e-4;
const TABLE_NUMERIC_TOL: f64 = 2e-3;
const BISECT_QUOTED_TOL: f64 = 1e-6;
const BURST_SHARE: f64 = 0.9;
const JACOBIAN_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const INVARIANT_TOL: f64 = 1e-12;
const RANDOM_STATES: usize = 1000;
const SYMMETRIC_DISTANCE_TOL: f64 = 1e-9;
const ORDER_RATIO: (f64, f64) = (3.5, 4.5);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < limit_s, format!("{s:.2} s (limit {limit_s} s)"))
}

fn analysis_params() -> ModelParams {
    ModelParams::new(3.0, 0.8, 0.05, 3.0, 1.35).unwrap()
}

/// Criteria 1 and 2. `swap` exchanges the inphase and antiphase columns.
fn table(kappa2: f64, swap: bool) -> Outcome {
    let started = Instant::now();
    let cfg = preset(if swap { "table2" } else { "table1" }).unwrap();
    assert_eq!((cfg.kappa1, cfg.kappa2), (0.0, kappa2));
    let (rows, _) = match analytic_points(&cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("analytic points failed: {e}")),
    };
    let get = |method: &str, tag: BranchTag| {
        rows.iter()
            .find(|r| r.method == method && r.branch == tag)
            .map(|r| (r.r, r.u))
    };
    let (fi, fa) = if swap {
        (BranchTag::Antiphase, BranchTag::Inphase)
    } else {
        (BranchTag::Inphase, BranchTag::Antiphase)
    };
    let (Some(ai), Some(aa), Some(bi), Some(ba)) = (
        get("asymptotic", fi),
        get("asymptotic", fa),
        get("bisection", fi),
        get("bisection", fa),
    ) else {
        return outcome(false, "missing rows");
    };
    let asy = [(ai.0, 1.3229), (aa.0, 1.3771), (ai.1, -0.4438), (aa.1, -0.2032)];
    let bis_quoted = [(bi.0, 1.321416), (bi.1, -0.443274), (ba.0, 1.375841), (ba.1, -0.202663)];
    let numeric = [(bi.0, 1.3210), (bi.1, -0.4433), (ba.0, 1.376), (ba.1, -0.2027)];
    let worst = |xs: &[(f64, f64)]| xs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (e_asy, e_bis, e_num) = (worst(&asy), worst(&bis_quoted), worst(&numeric));
    let (fast, t) = within(started.elapsed(), 1.0);
    outcome(
        e_asy <= TABLE_DECIMALS_TOL && e_bis <= BISECT_QUOTED_TOL && e_num <= TABLE_NUMERIC_TOL && fast,
        format!(
            "asymptotic max err {e_asy:.2e} (tol {TABLE_DECIMALS_TOL:e}), bisection vs quoted {e_bis:.2e} \
             (tol {BISECT_QUOTED_TOL:e}), vs numeric row {e_num:.2e} (tol {TABLE_NUMERIC_TOL:e}), {t}"
        ),
    )
}

fn bistability() -> Outcome {
    let started = Instant::now();
    let cfg = preset("fig5a").unwrap();
    let k = cfg.coupling();
    let mut ok = true;
    let mut parts = Vec::new();
    for (u, expect) in [(-0.32, (true, true)), (-0.1, (true, false)), (-0.6, (false, true))] {
        let s = find_fast_equilibria(u, &cfg.model, &k, &cfg.scan.seeds);
        let stable = |tag| s.equilibria.iter().any(|e| e.branch == tag && e.is_stable());
        let got = (stable(BranchTag::Inphase), stable(BranchTag::Antiphase));
        ok &= got == expect;
        parts.push(format!("u={u}: in={} anti={}", got.0, got.1));
    }
    let (fast, t) = within(started.elapsed(), 1.0);
    outcome(ok && fast, format!("{}, {t}", parts.join("; ")))
}

/// Criteria 4 and 5.
fn pair_transition(name: &str, from: SyncLabel, to: SyncLabel) -> Outcome {
    let cfg = preset(name).unwrap();
    let tag = if from == SyncLabel::Inphase { BranchTag::Inphase } else { BranchTag::Antiphase };
    let u_loss = match det_zero_bisect(tag, cfg.scan.u_window(), &cfg.model, &cfg.coupling()) {
        Ok(p) => p.u,
        Err(e) => return outcome(false, format!("loss point: {e}")),
    };
    let started = Instant::now();
    let reports = match run_seeds(&cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("simulation failed: {e}")),
    };
    let per_seed = started.elapsed() / cfg.seeds as u32;
    let (good, total) = count_single_transitions(&reports, from, to, u_loss);
    let share = if total == 0 { 0.0 } else { good as f64 / total as f64 };
    let (fast, t) = within(per_seed, 120.0);
    outcome(
        reports.len() >= 10 && share >= BURST_SHARE && fast,
        format!(
            "{good}/{total} bursts ({:.1}%, need {:.0}%) over {} seeds show one persistent {from}->{to} \
             transition at u <= {u_loss:.5}; per seed {t}",
            100.0 * share,
            100.0 * BURST_SHARE,
            reports.len()
        ),
    )
}

fn three_bursters() -> Outcome {
    let cfg = preset("fig12").unwrap();
    let reports = match run_seeds(&cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("simulation failed: {e}")),
    };
    let mut good = 0;
    let mut total = 0;
    for (_, r) in &reports {
        for b in &r.bursts {
            total += 1;
            let hit = b
                .transitions
                .iter()
                .find(|t| t.from == SyncLabel::Splay && t.to == SyncLabel::Inphase);
            if let Some(t) = hit {
                let before = b.windows.iter().any(|w| w.t < t.t && w.order < 0.2);
                let after = b.windows.iter().any(|w| w.t >= t.t && w.order > 0.9);
                good += usize::from(before && after);
            }
        }
    }
    let share = if total == 0 { 0.0 } else { good as f64 / total as f64 };
    outcome(
        reports.len() >= 5 && share >= BURST_SHARE,
        format!(
            "{good}/{total} bursts ({:.1}%) over {} seeds go splay->inphase with R < 0.2 before and R > 0.9 after",
            100.0 * share,
            reports.len()
        ),
    )
}

fn single_burster() -> Outcome {
    let started = Instant::now();
    let cfg = preset("fig2").unwrap();
    let traj = match run_trajectory(&cfg) {
        Ok(t) => t,
        Err(e) => return outcome(false, format!("simulation failed: {e}")),
    };
    let shapes = match burst_shapes(&traj, 0, &cfg.analysis, 0.5, -1.0) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("burst analysis failed: {e}")),
    };
    let min_onset = shapes.iter().map(|s| s.onset_u).fold(f64::INFINITY, f64::min);
    let min_last = shapes
        .iter()
        .map(|s| s.last_spike_r.unwrap_or(f64::NEG_INFINITY))
        .fold(f64::INFINITY, f64::min);
    let mut tonic = cfg.clone();
    tonic.model.a = 1.2;
    let r_min = match run_trajectory(&tonic) {
        Ok(t) => min_radius_after(&t, cfg.analysis.transient_fraction),
        Err(e) => return outcome(false, format!("tonic simulation failed: {e}")),
    };
    let (fast, t) = within(started.elapsed(), 30.0);
    outcome(
        shapes.len() >= 2 && min_onset > 0.0 && min_last >= 0.95 && r_min > cfg.analysis.r_lo && fast,
        format!(
            "{} bursts, min onset u {min_onset:.4} (> 0), min last-spike r {min_last:.4} (>= 0.95), \
             a = 1.2 min r after transient {r_min:.4} (> {}), {t}",
            shapes.len(),
            cfg.analysis.r_lo
        ),
    )
}

fn jacobian_fidelity() -> Outcome {
    let started = Instant::now();
    let p = analysis_params();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let u = -0.95 + 0.1 * i as f64;
        for j in 0..10 {
            let kappa2 = -0.4 + 0.8 * j as f64 / 9.0;
            let k = CouplingSpec::all_to_all(2, 0.001, kappa2);
            for (tag, phi) in [(BranchTag::Inphase, 0.0), (BranchTag::Antiphase, PI)] {
                let r = match solve_branch_r(u, tag, &k) {
                    Ok(r) => r,
                    Err(e) => return outcome(false, format!("branch at u={u}: {e}")),
                };
                let fd = lt_fast_jacobian_fd(u, [r, 0.0, phi], &p, &k, FD_STEP);
                let b = jacobian_block(tag, u, r, &p, &k).0;
                for (a, row) in b.iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        worst = worst.max((v - fd[(a + 1, c + 1)]).abs());
                    }
                }
            }
        }
    }
    let (fast, t) = within(started.elapsed(), 1.0);
    outcome(
        worst < JACOBIAN_TOL && fast,
        format!("max |J - J_fd| = {worst:.2e} over 10x10 (u, kappa2) x 2 branches (tol {JACOBIAN_TOL:e}), {t}"),
    )
}

fn random_pair(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64, f64, f64) {
    (
        rng.gen_range(0.2..1.6),
        rng.gen_range(-PI..PI),
        rng.gen_range(-1.0..0.2),
        rng.gen_range(0.2..1.6),
        rng.gen_range(-PI..PI),
        rng.gen_range(-1.0..0.2),
    )
}

fn max_diff(a: &NetworkState, b: &NetworkState) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn rotate(s: &NetworkState, alpha: f64) -> NetworkState {
    let rot = Complex64::from_polar(1.0, alpha);
    let z: Vec<Complex64> = (0..s.n()).map(|j| rot * s.z(j)).collect();
    let u: Vec<f64> = (0..s.n()).map(|j| s.u(j)).collect();
    NetworkState::from_parts(&z, &u).unwrap()
}

fn invariants() -> Outcome {
    let p = ModelParams::new(0.01, 0.8, 0.05, 3.0, 1.35).unwrap();
    let k = CouplingSpec::all_to_all(2, 0.001, 0.2);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut rot_err, mut diag_err, mut polar_err, mut lt_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..RANDOM_STATES {
        let (r1, t1, u1, r2, t2, u2) = random_pair(&mut rng);
        let s = NetworkState::from_parts(
            &[Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2)],
            &[u1, u2],
        )
        .unwrap();
        let f = eval_field_cartesian(&s, &p, &k).unwrap();

        let alpha = rng.gen_range(-PI..PI);
        let g = eval_field_cartesian(&rotate(&s, alpha), &p, &k).unwrap();
        rot_err = rot_err.max(max_diff(&g, &rotate(&f, alpha)));

        let d = NetworkState::from_parts(&[s.z(0), s.z(0)], &[u1, u1]).unwrap();
        let fd = eval_field_cartesian(&d, &p, &k).unwrap();
        diag_err = diag_err.max((fd.z(0) - fd.z(1)).norm()).max((fd.u(0) - fd.u(1)).abs());

        let pp = PolarPairState::from_network(&s).unwrap();
        let pr = eval_field_polar_pair(&pp, &p, &k).unwrap();
        for (z, dr, dth, du, fz, fu) in [
            (s.z(0), pr.r1, pr.theta1, pr.u1, f.z(0), f.u(0)),
            (s.z(1), pr.r2, pr.theta2, pr.u2, f.z(1), f.u(1)),
        ] {
            // ż = (ṙ + i r θ̇) e^{iθ}
            let from_polar = Complex64::new(dr, z.norm() * dth) * (z / z.norm());
            polar_err = polar_err.max((from_polar - fz).norm()).max((du - fu).abs());
        }

        let phi = rng.gen_range(-PI..PI);
        let (ra, rb) = if r1 == r2 { (r1, r2 + 0.1) } else { (r1, r2) };
        let rs = ReducedState::new(ra, rb, phi, u1).unwrap();
        let rr = eval_reduced_field(&rs, &p, &k).unwrap();
        let lt = r1r2_to_lt(&rs).unwrap();
        let lr = eval_lt_field(&lt, &p, &k).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        lt_err = lt_err
            .max(rel(lr.r_l, 0.5 * (rr.r1 + rr.r2)))
            .max(rel(lr.r_t, 0.5 * (rr.r1 - rr.r2)))
            .max(rel(lr.phi, rr.phi))
            .max(rel(lr.u, rr.u));
    }

    let mut cfg = preset("fig3").unwrap();
    cfg.integrator.noise_amplitude = 0.0;
    cfg.integrator.t_end = 600.0;
    let (d_max, bursts) = match run_trajectory(&cfg) {
        Ok(traj) => (
            pairwise_distance(&traj, 0, 1).unwrap().into_iter().fold(0.0, f64::max),
            segment_bursts(&traj, cfg.analysis.r_hi, cfg.analysis.r_lo).unwrap().len(),
        ),
        Err(e) => return outcome(false, format!("symmetric run failed: {e}")),
    };
    let worst = rot_err.max(diag_err).max(polar_err).max(lt_err);
    outcome(
        worst < INVARIANT_TOL && d_max < SYMMETRIC_DISTANCE_TOL && bursts >= 1,
        format!(
            "{RANDOM_STATES} states: rotation {rot_err:.1e}, diagonal {diag_err:.1e}, polar {polar_err:.1e}, \
             (r1,r2)/(r_l,r_t) {lt_err:.1e} (tol {INVARIANT_TOL:e}); symmetric pair max d12 {d_max:.1e} \
             over {bursts} burst(s) (tol {SYMMETRIC_DISTANCE_TOL:e})"
        ),
    )
}

fn asymptotic_order() -> Outcome {
    let p = analysis_params();
    let mut errs = Vec::new();
    for kappa2 in [0.2, 0.1, 0.05] {
        let k = CouplingSpec::all_to_all(2, 0.0, kappa2);
        let (Ok(a), Ok(x)) = (asymptotic_points(&p, &k), exact_det_zero(&p, &k, BranchTag::Inphase)) else {
            return outcome(false, format!("no points at kappa2 = {kappa2}"));
        };
        errs.push((a.r_in - x.r).abs());
    }
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    let ok = ratios.iter().all(|q| (ORDER_RATIO.0..=ORDER_RATIO.1).contains(q));
    outcome(
        ok,
        format!(
            "|r_in asymptotic - exact| = {:.3e}, {:.3e}, {:.3e}; ratios {:.3}, {:.3} (need [{}, {}])",
            errs[0], errs[1], errs[2], ratios[0], ratios[1], ORDER_RATIO.0, ORDER_RATIO.1
        ),
    )
}

fn main() {
    type Criterion = Box<dyn Fn() -> Outcome>;
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 table, kappa2 = 0.2", Box::new(|| table(0.2, false))),
        ("2 table, kappa2 = -0.2 (columns swapped)", Box::new(|| table(-0.2, true))),
        ("3 bistability at u = -0.32", Box::new(bistability)),
        (
            "4 inphase->antiphase within bursts",
            Box::new(|| pair_transition("fig3", SyncLabel::Inphase, SyncLabel::Antiphase)),
        ),
        (
            "5 antiphase->inphase within bursts",
            Box::new(|| pair_transition("fig4", SyncLabel::Antiphase, SyncLabel::Inphase)),
        ),
        ("6 three bursters splay->inphase", Box::new(three_bursters)),
        ("7 single burster", Box::new(single_burster)),
        ("8 Jacobian fidelity", Box::new(jacobian_fidelity)),
        ("9 structural invariants", Box::new(invariants)),
        ("10 asymptotic order", Box::new(asymptotic_order)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
