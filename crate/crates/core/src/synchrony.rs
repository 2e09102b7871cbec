//! Synchrony analysis of simulated trajectories.
//!
//! Bursts are found with a hysteresis detector on the radius, each burst is cut
//! into overlapping windows a few spike periods long, every window gets a
//! spike-synchrony label, and label changes that persist become transition
//! events.

use crate::integrator::Trajectory;
use crate::model::wrap_phase;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SyncError {
    #[error("burster index {index} out of range for {n} bursters")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pairwise quantities need two distinct bursters, got {0} twice")]
    SameIndex(usize),
    #[error("hysteresis thresholds must satisfy r_hi > r_lo > 0 (got {r_hi}, {r_lo})")]
    InvalidThresholds { r_hi: f64, r_lo: f64 },
    #[error("no complete burst in the analysed part of the record")]
    NoCompleteBurst,
    #[error("no synchrony transition found")]
    NoTransition,
    #[error("invalid detection setting: {0}")]
    InvalidConfig(String),
}

fn check_index(traj: &Trajectory, i: usize) -> Result<(), SyncError> {
    let n = traj.n_bursters();
    if i >= n {
        return Err(SyncError::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

fn check_pair(traj: &Trajectory, i: usize, j: usize) -> Result<(), SyncError> {
    check_index(traj, i)?;
    check_index(traj, j)?;
    if i == j {
        return Err(SyncError::SameIndex(i));
    }
    Ok(())
}

/// Euclidean distance between bursters `i` and `j` in `(x, y, u)` at every sample.
pub fn pairwise_distance(traj: &Trajectory, i: usize, j: usize) -> Result<Vec<f64>, SyncError> {
    check_pair(traj, i, j)?;
    Ok((0..traj.len())
        .map(|s| {
            let row = traj.row(s);
            let (a, b) = (&row[3 * i..3 * i + 3], &row[3 * j..3 * j + 3]);
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceStats {
    pub i: usize,
    pub j: usize,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
}

pub fn distance_stats(traj: &Trajectory, i: usize, j: usize) -> Result<DistanceStats, SyncError> {
    let d = pairwise_distance(traj, i, j)?;
    let n = d.len().max(1) as f64;
    Ok(DistanceStats {
        i,
        j,
        mean: d.iter().sum::<f64>() / n,
        max: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min: d.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// Samples `[start, end)` of one active phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstSegment {
    pub start: usize,
    pub end: usize,
    /// Mean radius over bursters for each sample of the segment.
    pub mean_radius: Vec<f64>,
    /// Mean of `u_j` at the first and last sample.
    pub u_start: f64,
    pub u_end: f64,
}

impl BurstSegment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

pub fn mean_u(traj: &Trajectory, s: usize) -> f64 {
    let n = traj.n_bursters();
    (0..n).map(|j| traj.u(s, j)).sum::<f64>() / n as f64
}

fn radii(traj: &Trajectory, s: usize) -> impl Iterator<Item = f64> + '_ {
    (0..traj.n_bursters()).map(move |j| traj.z(s, j).norm())
}

/// Hysteresis burst detector on the smallest radius over bursters: a burst
/// starts when it rises through `r_hi` and ends when it drops below `r_lo`.
/// Bursts cut by either edge of `[from, len)` are discarded.
pub fn segment_bursts_from(
    traj: &Trajectory,
    from: usize,
    r_hi: f64,
    r_lo: f64,
) -> Result<Vec<BurstSegment>, SyncError> {
    if !(r_hi > r_lo && r_lo > 0.0) {
        return Err(SyncError::InvalidThresholds { r_hi, r_lo });
    }
    let mut out = Vec::new();
    // The detector arms only after seeing a quiescent sample, so a burst in
    // progress at `from` is never reported.
    let mut armed = false;
    let mut start: Option<usize> = None;
    for s in from..traj.len() {
        let r = radii(traj, s).fold(f64::INFINITY, f64::min);
        match start {
            None => {
                if r < r_lo {
                    armed = true;
                } else if armed && r >= r_hi {
                    start = Some(s);
                }
            }
            Some(s0) => {
                if r < r_lo {
                    let n = traj.n_bursters() as f64;
                    out.push(BurstSegment {
                        start: s0,
                        end: s,
                        mean_radius: (s0..s).map(|q| radii(traj, q).sum::<f64>() / n).collect(),
                        u_start: mean_u(traj, s0),
                        u_end: mean_u(traj, s - 1),
                    });
                    start = None;
                }
            }
        }
    }
    Ok(out)
}

pub fn segment_bursts(
    traj: &Trajectory,
    r_hi: f64,
    r_lo: f64,
) -> Result<Vec<BurstSegment>, SyncError> {
    segment_bursts_from(traj, 0, r_hi, r_lo)
}

/// Default radius below which a phase is considered undefined.
pub const RADIUS_FLOOR: f64 = 0.1;

/// `wrap(arg z_i − arg z_j)` per sample; `None` where either radius is below `floor`.
pub fn phase_difference_series(
    traj: &Trajectory,
    i: usize,
    j: usize,
    floor: f64,
) -> Result<Vec<Option<f64>>, SyncError> {
    check_pair(traj, i, j)?;
    Ok((0..traj.len())
        .map(|s| {
            let (zi, zj) = (traj.z(s, i), traj.z(s, j));
            (zi.norm() > floor && zj.norm() > floor)
                .then(|| wrap_phase(zi.arg() - zj.arg()))
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyncLabel {
    Inphase,
    Antiphase,
    Splay,
    Mixed,
}

impl SyncLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SyncLabel::Inphase => "inphase",
            SyncLabel::Antiphase => "antiphase",
            SyncLabel::Splay => "splay",
            SyncLabel::Mixed => "mixed",
        }
    }
}

impl fmt::Display for SyncLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Two-burster label from a window of phase differences.
pub fn classify_pair(phis: &[f64]) -> SyncLabel {
    if phis.is_empty() {
        return SyncLabel::Mixed;
    }
    let mut near0: Vec<f64> = phis.iter().map(|p| wrap_phase(*p).abs()).collect();
    if median(&mut near0) < PI / 4.0 {
        return SyncLabel::Inphase;
    }
    let mut near_pi: Vec<f64> = phis.iter().map(|p| wrap_phase(p - PI).abs()).collect();
    if median(&mut near_pi) < PI / 4.0 {
        return SyncLabel::Antiphase;
    }
    SyncLabel::Mixed
}

/// Kuramoto order parameter `|Σ e^{iθ_k}| / n`.
pub fn order_parameter(thetas: &[f64]) -> f64 {
    let s: Complex64 = thetas.iter().map(|t| Complex64::from_polar(1.0, *t)).sum();
    s.norm() / thetas.len() as f64
}

/// Label of a window of phase samples; each sample holds the phases of all `n` bursters.
///
/// Pairs are classified from the median phase difference. For three or more
/// bursters the median order parameter decides: above 0.9 is inphase; below 0.2
/// with every circular-mean pairwise difference within π/6 of ±2π/3 is splay.
pub fn classify_synchrony(window: &[Vec<f64>]) -> SyncLabel {
    let Some(first) = window.first() else {
        return SyncLabel::Mixed;
    };
    let n = first.len();
    if n == 2 {
        let phis: Vec<f64> = window.iter().map(|th| th[0] - th[1]).collect();
        return classify_pair(&phis);
    }
    if n < 2 {
        return SyncLabel::Inphase;
    }
    let mut rs: Vec<f64> = window.iter().map(|th| order_parameter(th)).collect();
    let r = median(&mut rs);
    if r > 0.9 {
        return SyncLabel::Inphase;
    }
    if r < 0.2 && n == 3 {
        let splay = (0..3).all(|a| {
            (a + 1..3).all(|b| {
                let mean: Complex64 = window
                    .iter()
                    .map(|th| Complex64::from_polar(1.0, th[a] - th[b]))
                    .sum();
                let d = mean.arg().abs();
                (d - 2.0 * PI / 3.0).abs() < PI / 6.0
            })
        });
        if splay {
            return SyncLabel::Splay;
        }
    }
    SyncLabel::Mixed
}

/// Settings of [`detect_transitions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub r_hi: f64,
    pub r_lo: f64,
    /// Leading fraction of the record ignored as transient.
    pub transient_fraction: f64,
    /// Window length in spike periods.
    pub window_periods: f64,
    /// Hop between consecutive windows in spike periods.
    pub hop_periods: f64,
    /// Consecutive windows a new label must hold to count as a transition.
    pub persistence: usize,
    pub radius_floor: f64,
    /// Whether `mixed` counts as a state of its own for transitions.
    pub mixed_is_state: bool,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            r_hi: 0.8,
            r_lo: 0.3,
            transient_fraction: 0.2,
            window_periods: 5.0,
            hop_periods: 1.0,
            persistence: 2,
            radius_floor: RADIUS_FLOOR,
            mixed_is_state: false,
        }
    }
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<(), SyncError> {
        if !(self.r_hi > self.r_lo && self.r_lo > 0.0) {
            return Err(SyncError::InvalidThresholds {
                r_hi: self.r_hi,
                r_lo: self.r_lo,
            });
        }
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(SyncError::InvalidConfig(
                "transient_fraction must lie in [0, 1)".into(),
            ));
        }
        if !(self.window_periods > 0.0 && self.hop_periods > 0.0) || self.persistence == 0 {
            return Err(SyncError::InvalidConfig(
                "window, hop and persistence must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowLabel {
    /// Time and mean `u` at the window centre.
    pub t: f64,
    pub u_mean: f64,
    pub label: SyncLabel,
    /// Median order parameter over the window.
    pub order: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEvent {
    pub t: f64,
    pub u_mean: f64,
    pub from: SyncLabel,
    pub to: SyncLabel,
    pub burst: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstReport {
    pub index: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub u_start: f64,
    pub u_end: f64,
    pub spike_period: f64,
    pub windows: Vec<WindowLabel>,
    pub transitions: Vec<TransitionEvent>,
}

impl BurstReport {
    pub fn labels(&self) -> Vec<SyncLabel> {
        self.windows.iter().map(|w| w.label).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynchronyReport {
    pub n_bursters: usize,
    pub bursts: Vec<BurstReport>,
    pub distances: Vec<DistanceStats>,
}

impl SynchronyReport {
    pub fn transitions(&self) -> impl Iterator<Item = &TransitionEvent> {
        self.bursts.iter().flat_map(|b| b.transitions.iter())
    }
}

fn spike_period(traj: &Trajectory, seg: &BurstSegment) -> f64 {
    if let Some(p) = traj.meta.params.as_ref() {
        let r = seg.mean_radius.iter().sum::<f64>() / seg.mean_radius.len() as f64;
        let w = p.omega_of_r(r).abs();
        if w > 1e-9 {
            return 2.0 * PI / w;
        }
    }
    // Without model parameters, use the mean angular velocity of burster 0.
    let mut total = 0.0;
    for s in seg.start + 1..seg.end {
        total += wrap_phase(traj.z(s, 0).arg() - traj.z(s - 1, 0).arg());
    }
    let dt = traj.times[seg.end - 1] - traj.times[seg.start];
    let w = (total / dt).abs();
    if w > 1e-9 && dt > 0.0 {
        2.0 * PI / w
    } else {
        dt
    }
}

fn window_label(
    traj: &Trajectory,
    from: usize,
    to: usize,
    floor: f64,
) -> (SyncLabel, f64) {
    let n = traj.n_bursters();
    let mut window: Vec<Vec<f64>> = Vec::with_capacity(to - from);
    for s in from..to {
        let zs: Vec<Complex64> = (0..n).map(|j| traj.z(s, j)).collect();
        if zs.iter().all(|z| z.norm() > floor) {
            window.push(zs.iter().map(|z| z.arg()).collect());
        }
    }
    let mut rs: Vec<f64> = window.iter().map(|th| order_parameter(th)).collect();
    let order = if rs.is_empty() { f64::NAN } else { median(&mut rs) };
    (classify_synchrony(&window), order)
}

/// Turns a window label sequence into persistent transitions.
fn persistent_transitions(
    windows: &[WindowLabel],
    persistence: usize,
    mixed_is_state: bool,
    burst: usize,
) -> Vec<TransitionEvent> {
    let counts = |l: SyncLabel| mixed_is_state || l != SyncLabel::Mixed;
    let runs_from = |i: usize| {
        let l = windows[i].label;
        windows[i..].iter().take_while(|w| w.label == l).count()
    };
    let mut out = Vec::new();
    let mut current: Option<SyncLabel> = None;
    let mut i = 0;
    while i < windows.len() {
        let l = windows[i].label;
        let run = runs_from(i);
        if counts(l) && run >= persistence {
            match current {
                None => current = Some(l),
                Some(c) if c != l => {
                    out.push(TransitionEvent {
                        t: windows[i].t,
                        u_mean: windows[i].u_mean,
                        from: c,
                        to: l,
                        burst,
                    });
                    current = Some(l);
                }
                _ => {}
            }
        }
        i += run;
    }
    out
}

/// Per-burst window labels and persistent transitions, after discarding the
/// leading transient.
pub fn detect_transitions(
    traj: &Trajectory,
    cfg: &DetectionConfig,
) -> Result<SynchronyReport, SyncError> {
    cfg.validate()?;
    let n = traj.n_bursters();
    let from = (cfg.transient_fraction * traj.len() as f64).floor() as usize;
    let segments = segment_bursts_from(traj, from, cfg.r_hi, cfg.r_lo)?;
    if segments.is_empty() {
        return Err(SyncError::NoCompleteBurst);
    }
    let dt = traj.sample_dt();
    let mut bursts = Vec::with_capacity(segments.len());
    for (bi, seg) in segments.iter().enumerate() {
        let period = spike_period(traj, seg);
        let w = ((cfg.window_periods * period / dt).round() as usize).clamp(1, seg.len());
        let hop = ((cfg.hop_periods * period / dt).round() as usize).max(1);
        let mut windows = Vec::new();
        let mut s = seg.start;
        while s + w <= seg.end {
            let (label, order) = window_label(traj, s, s + w, cfg.radius_floor);
            let c = s + w / 2;
            windows.push(WindowLabel {
                t: traj.times[c],
                u_mean: mean_u(traj, c),
                label,
                order,
            });
            s += hop;
        }
        let transitions = persistent_transitions(&windows, cfg.persistence, cfg.mixed_is_state, bi);
        bursts.push(BurstReport {
            index: bi,
            t_start: traj.times[seg.start],
            t_end: traj.times[seg.end - 1],
            u_start: seg.u_start,
            u_end: seg.u_end,
            spike_period: period,
            windows,
            transitions,
        });
    }
    let mut distances = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            distances.push(distance_stats(traj, i, j)?);
        }
    }
    Ok(SynchronyReport {
        n_bursters: n,
        bursts,
        distances,
    })
}

/// Mean over bursts of `u` at the first transition minus the predicted value.
pub fn offset_from_report(report: &SynchronyReport, u_predicted: f64) -> Result<f64, SyncError> {
    let firsts: Vec<f64> = report
        .bursts
        .iter()
        .filter_map(|b| b.transitions.first().map(|t| t.u_mean - u_predicted))
        .collect();
    if firsts.is_empty() {
        return Err(SyncError::NoTransition);
    }
    Ok(firsts.iter().sum::<f64>() / firsts.len() as f64)
}

/// Signed delay `Δu = u(transition) − u_predicted`, averaged over bursts.
/// Negative values mean the transition happened later in the burst than the
/// frozen-`u` analysis predicts.
pub fn slow_passage_offset(
    traj: &Trajectory,
    cfg: &DetectionConfig,
    u_predicted: f64,
) -> Result<f64, SyncError> {
    offset_from_report(&detect_transitions(traj, cfg)?, u_predicted)
}

/// Onset and offset features of one burst of a single burster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstShape {
    pub t_start: f64,
    /// `u` where the radius last rose through `onset_radius` before the burst.
    pub onset_u: f64,
    /// Radius at the last peak of `x` before `u` first drops below `fold_u`.
    pub last_spike_r: Option<f64>,
    /// `u` when the radius drops below `r_lo`.
    pub end_u: f64,
}

/// Burst shapes of burster `j` over the non-transient part of the record.
/// Bursts whose upward crossing of `onset_radius` falls inside the transient
/// are skipped.
pub fn burst_shapes(
    traj: &Trajectory,
    j: usize,
    cfg: &DetectionConfig,
    onset_radius: f64,
    fold_u: f64,
) -> Result<Vec<BurstShape>, SyncError> {
    check_index(traj, j)?;
    cfg.validate()?;
    let from = (cfg.transient_fraction * traj.len() as f64).floor() as usize;
    let r = |s: usize| traj.z(s, j).norm();
    let x = |s: usize| traj.z(s, j).re;
    let mut out = Vec::new();
    for seg in segment_bursts_from(traj, from, cfg.r_hi, cfg.r_lo)? {
        let Some(cross) = (from..=seg.start).rev().find(|&s| s > 0 && r(s - 1) < onset_radius && r(s) >= onset_radius) else {
            continue;
        };
        let stop = (seg.start..seg.end)
            .find(|&s| traj.u(s, j) < fold_u)
            .unwrap_or(seg.end)
            .min(traj.len() - 1);
        let last_spike = (seg.start.max(1)..stop)
            .rev()
            .find(|&s| x(s) > x(s - 1) && x(s) >= x(s + 1));
        out.push(BurstShape {
            t_start: traj.times[seg.start],
            onset_u: traj.u(cross, j),
            last_spike_r: last_spike.map(r),
            end_u: traj.u(seg.end, j),
        });
    }
    Ok(out)
}

/// Smallest radius over all bursters after the leading `transient_fraction`.
pub fn min_radius_after(traj: &Trajectory, transient_fraction: f64) -> f64 {
    let from = (transient_fraction * traj.len() as f64).floor() as usize;
    (from..traj.len())
        .flat_map(|s| radii(traj, s).collect::<Vec<_>>())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{IntegratorConfig, TrajectoryMeta};

    fn traj_from(rows: Vec<Vec<f64>>, dt: f64) -> Trajectory {
        let dim = rows[0].len();
        let times = (0..rows.len()).map(|k| k as f64 * dt).collect();
        let meta = TrajectoryMeta {
            config: IntegratorConfig {
                sample_dt: dt,
                ..Default::default()
            },
            seed: None,
            params: None,
            coupling: None,
        };
        Trajectory::from_rows(times, dim, rows.concat(), meta).unwrap()
    }

    #[test]
    fn distance_examples() {
        let t = traj_from(vec![vec![1.0, 0.5, -0.2, 1.0, 0.5, 0.1]; 3], 0.1);
        let d = pairwise_distance(&t, 0, 1).unwrap();
        assert!(d.iter().all(|v| (v - 0.3).abs() < 1e-15));
        let t = traj_from(vec![vec![0.6, 0.8, 0.0, -0.6, -0.8, 0.0]], 0.1);
        assert!((pairwise_distance(&t, 0, 1).unwrap()[0] - 2.0).abs() < 1e-15);
        assert!(pairwise_distance(&t, 0, 2).is_err());
        assert!(pairwise_distance(&t, 1, 1).is_err());
    }

    #[test]
    fn square_wave_bursts() {
        let mut rows = Vec::new();
        for cycle in 0..5 {
            let _ = cycle;
            for k in 0..40 {
                let r = if k < 20 { 0.1 } else { 1.2 };
                rows.push(vec![r, 0.0, 0.0]);
            }
        }
        rows.push(vec![0.1, 0.0, 0.0]);
        let t = traj_from(rows, 0.1);
        let segs = segment_bursts(&t, 0.8, 0.3).unwrap();
        assert_eq!(segs.len(), 5);
        for s in &segs {
            assert_eq!(s.len(), 20);
        }
        let flat = traj_from(vec![vec![0.05, 0.0, 0.0]; 50], 0.1);
        assert!(segment_bursts(&flat, 0.8, 0.3).unwrap().is_empty());
        assert!(segment_bursts(&flat, 0.3, 0.8).is_err());
    }

    #[test]
    fn edge_bursts_are_discarded() {
        let mut rows = vec![vec![1.2, 0.0, 0.0]; 10];
        rows.extend(vec![vec![0.1, 0.0, 0.0]; 10]);
        rows.extend(vec![vec![1.2, 0.0, 0.0]; 10]);
        rows.extend(vec![vec![0.1, 0.0, 0.0]; 10]);
        rows.extend(vec![vec![1.2, 0.0, 0.0]; 10]);
        let segs = segment_bursts(&traj_from(rows, 0.1), 0.8, 0.3).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!((segs[0].start, segs[0].end), (20, 30));
    }

    #[test]
    fn phase_difference_examples() {
        let t = traj_from(
            vec![
                vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, -1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0, -1.0, 0.0],
                vec![0.01, 0.0, 0.0, 1.0, 0.0, 0.0],
            ],
            0.1,
        );
        let phi = phase_difference_series(&t, 0, 1, RADIUS_FLOOR).unwrap();
        assert_eq!(phi[0], Some(0.0));
        assert_eq!(phi[1], Some(PI));
        assert_eq!(phi[2], Some(PI));
        assert_eq!(phi[3], None);
    }

    #[test]
    fn splay_triple_differences() {
        let zs: Vec<f64> = (0..3)
            .flat_map(|k| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
                [z.re, z.im, 0.0]
            })
            .collect();
        let t = traj_from(vec![zs], 0.1);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let d = phase_difference_series(&t, i, j, RADIUS_FLOOR).unwrap()[0].unwrap();
            assert!((d.abs() - 2.0 * PI / 3.0).abs() < 1e-12, "{d}");
        }
    }

    #[test]
    fn window_classification() {
        assert_eq!(classify_pair(&[0.01; 10]), SyncLabel::Inphase);
        assert_eq!(classify_pair(&[PI - 0.02; 10]), SyncLabel::Antiphase);
        assert_eq!(classify_pair(&[-PI + 0.02; 10]), SyncLabel::Antiphase);
        assert_eq!(classify_pair(&[PI / 2.0; 10]), SyncLabel::Mixed);
        let splay = vec![vec![0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]; 5];
        assert!(order_parameter(&splay[0]) < 1e-15);
        assert_eq!(classify_synchrony(&splay), SyncLabel::Splay);
        let sync = vec![vec![0.3, 0.31, 0.29]; 5];
        assert_eq!(classify_synchrony(&sync), SyncLabel::Inphase);
        let two_one = vec![vec![0.0, 0.0, PI]; 5];
        assert_eq!(classify_synchrony(&two_one), SyncLabel::Mixed);
    }

    fn wl(label: SyncLabel, t: f64) -> WindowLabel {
        WindowLabel {
            t,
            u_mean: -t,
            label,
            order: f64::NAN,
        }
    }

    #[test]
    fn persistence_rule() {
        use SyncLabel::*;
        let seq = [Inphase, Inphase, Antiphase, Inphase, Inphase, Mixed, Antiphase, Antiphase];
        let w: Vec<_> = seq.iter().enumerate().map(|(i, l)| wl(*l, i as f64)).collect();
        let tr = persistent_transitions(&w, 2, false, 0);
        assert_eq!(tr.len(), 1);
        assert_eq!((tr[0].from, tr[0].to, tr[0].t), (Inphase, Antiphase, 6.0));
        let tr = persistent_transitions(&w, 1, true, 0);
        assert_eq!(tr.len(), 4);
    }

    #[test]
    fn planted_transition_offset() {
        let report = SynchronyReport {
            n_bursters: 2,
            bursts: vec![BurstReport {
                index: 0,
                t_start: 0.0,
                t_end: 1.0,
                u_start: 0.0,
                u_end: -1.0,
                spike_period: 0.1,
                windows: vec![],
                transitions: vec![TransitionEvent {
                    t: 0.5,
                    u_mean: -0.4438,
                    from: SyncLabel::Inphase,
                    to: SyncLabel::Antiphase,
                    burst: 0,
                }],
            }],
            distances: vec![],
        };
        assert_eq!(offset_from_report(&report, -0.4438).unwrap(), 0.0);
    }
}
