//! Extremal complete trajectories as pullback limits.
//!
//! The upper branch starts at the discrete equilibrium `v⁺(b₁, ω₁)` at time
//! `s = t_min - T` and follows the upper selection. Because `v⁺(b₁, ω₁)` is
//! a super-trajectory, the values on the window decrease as `T` grows; the
//! limit is the maximal bounded complete trajectory. The lower branch is the
//! mirror image, started at `-v⁺(b₁, ω₁)` with the lower selection.

use crate::coefficients::CoefficientProfile;
use crate::equilibria::{discrete_equilibrium, EquilibriumParams};
use crate::error::{usage, LabError, Result};
use crate::exec::Execution;
use crate::grid::{GridFunction, GridSpec};
use crate::lab::horizon::{depth_steps, HorizonSchedule};
use crate::solver::{SelectionPolicy, Stepper};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub dt: f64,
    /// Sup-norm Cauchy tolerance between successive depths.
    pub tol: f64,
    pub horizon: HorizonSchedule,
    /// Store every `save_every`-th state of the window (the last one always).
    pub save_every: usize,
}

impl ExtremalConfig {
    pub fn new(t_min: f64, t_max: f64, dt: f64) -> Self {
        Self {
            t_min,
            t_max,
            dt,
            tol: 1e-8,
            horizon: HorizonSchedule::default(),
            save_every: 1,
        }
    }

    fn window_steps(&self) -> Result<usize> {
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_max < self.t_min {
            return Err(usage(format!("bad window [{}, {}]", self.t_min, self.t_max)));
        }
        if !(self.tol > 0.0) {
            return Err(usage("tolerance must be positive"));
        }
        if self.save_every == 0 {
            return Err(usage("save_every must be at least 1"));
        }
        let ratio = (self.t_max - self.t_min) / self.dt;
        let w = ratio.round();
        if (ratio - w).abs() > 1e-6 {
            return Err(usage(format!(
                "window length {} is not a whole number of steps of {}",
                self.t_max - self.t_min,
                self.dt
            )));
        }
        Ok(w as usize)
    }
}

/// Approximations of the minimal and maximal complete trajectories on a window.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalPair {
    pub window: (f64, f64),
    pub dt: f64,
    /// Times of the stored states (accumulated exactly as the stepper does).
    pub times: Vec<f64>,
    pub gamma_lo: Vec<GridFunction>,
    pub gamma_hi: Vec<GridFunction>,
    /// Start time of the deepest pullback run.
    pub horizon_used: f64,
    pub depth_used: f64,
    /// Sup gap between the last two depths, both branches.
    pub cauchy_gap: f64,
    pub gap_history: Vec<(f64, f64)>,
    pub spec: GridSpec,
    pub profile: CoefficientProfile,
}

impl ExtremalPair {
    /// Index of the stored time within half a step of `t`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))?
            .0;
        ((self.times[k] - t).abs() <= 0.5 * self.dt).then_some(k)
    }

    pub fn hi_at(&self, t: f64) -> Option<&GridFunction> {
        self.index_of(t).map(|k| &self.gamma_hi[k])
    }

    pub fn lo_at(&self, t: f64) -> Option<&GridFunction> {
        self.index_of(t).map(|k| &self.gamma_lo[k])
    }

    /// `sup_t sup_x |γ_lo + γ_hi|`.
    pub fn symmetry_defect(&self) -> f64 {
        self.gamma_lo
            .iter()
            .zip(&self.gamma_hi)
            .map(|(lo, hi)| lo.sup_distance_unchecked(&hi.neg()))
            .fold(0.0, f64::max)
    }
}

/// Upper bound used for both pullback starts: `v⁺(b₁, ω₁)` on the grid.
pub fn upper_barrier(profile: &CoefficientProfile, spec: GridSpec) -> Result<GridFunction> {
    let b = profile.bounds();
    discrete_equilibrium(EquilibriumParams::new(b.b1, b.omega1)?, spec)
}

struct Branch {
    times: Vec<f64>,
    states: Vec<GridFunction>,
}

#[allow(clippy::too_many_arguments)]
fn run_branch(
    profile: &CoefficientProfile,
    spec: GridSpec,
    start: &GridFunction,
    policy: SelectionPolicy,
    s: f64,
    depth: usize,
    window: usize,
    cfg: &ExtremalConfig,
) -> Result<Branch> {
    let mut stepper = Stepper::new(profile, spec, cfg.dt)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    stepper.run(start, s, depth + window, &policy, |k, t, u| {
        if k >= depth && ((k - depth).is_multiple_of(cfg.save_every) || k == depth + window) {
            times.push(t);
            states.push(GridFunction::from_raw(spec, u.to_vec()));
        }
    })?;
    Ok(Branch { times, states })
}

fn branch_gap(a: &Branch, b: &Branch) -> f64 {
    a.states
        .iter()
        .zip(&b.states)
        .map(|(u, v)| u.sup_distance_unchecked(v))
        .fold(0.0, f64::max)
}

/// Pullback limits of the upper/lower branches over the configured window.
///
/// Fails with [`LabError::Convergence`] when the schedule is exhausted before
/// two successive depths agree to `tol` in sup norm.
pub fn extremal_trajectories(
    profile: &CoefficientProfile,
    spec: GridSpec,
    cfg: &ExtremalConfig,
    exec: Execution,
) -> Result<ExtremalPair> {
    let window = cfg.window_steps()?;
    Stepper::new(profile, spec, cfg.dt)?;
    let top = upper_barrier(profile, spec)?;
    let bottom = top.neg();

    let mut previous: Option<(Branch, Branch)> = None;
    let mut gaps = Vec::new();
    for &depth in cfg.horizon.depths() {
        let d = depth_steps(depth, cfg.dt);
        let s = cfg.t_min - d as f64 * cfg.dt;
        let (hi, lo) = exec.join(
            || run_branch(profile, spec, &top, SelectionPolicy::Upper, s, d, window, cfg),
            || run_branch(profile, spec, &bottom, SelectionPolicy::Lower, s, d, window, cfg),
        );
        let (hi, lo) = (hi?, lo?);
        if let Some((prev_hi, prev_lo)) = &previous {
            let gap = branch_gap(&hi, prev_hi).max(branch_gap(&lo, prev_lo));
            gaps.push((depth, gap));
            if gap < cfg.tol {
                return Ok(ExtremalPair {
                    window: (cfg.t_min, cfg.t_max),
                    dt: cfg.dt,
                    times: hi.times,
                    gamma_lo: lo.states,
                    gamma_hi: hi.states,
                    horizon_used: s,
                    depth_used: d as f64 * cfg.dt,
                    cauchy_gap: gap,
                    gap_history: gaps,
                    spec,
                    profile: profile.clone(),
                });
            }
        }
        previous = Some((hi, lo));
    }
    let (depth, gap) = gaps.last().copied().unwrap_or((cfg.horizon.deepest(), f64::INFINITY));
    Err(LabError::Convergence {
        depth,
        gap,
        tol: cfg.tol,
        gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Schedule;

    fn oscillating() -> CoefficientProfile {
        let pts: Vec<(f64, f64)> = (0..=80)
            .map(|k| {
                let t = -40.0 + k as f64;
                (t, 1.5 + 0.5 * (0.7 * t).sin())
            })
            .collect();
        let w: Vec<(f64, f64)> = (0..=80)
            .map(|k| {
                let t = -40.0 + k as f64;
                (t, 2.0 + 2.0 * (0.3 * t).cos())
            })
            .collect();
        CoefficientProfile::with_tight_bounds(Schedule::Table { points: pts }, Schedule::Table { points: w }, false)
            .unwrap()
    }

    #[test]
    fn autonomous_case_is_the_equilibrium() {
        let spec = GridSpec::new(15).unwrap();
        let p = CoefficientProfile::constant(1.2, 3.0).unwrap();
        let mut cfg = ExtremalConfig::new(0.0, 1.0, 1e-2);
        cfg.horizon = HorizonSchedule::doubling(0.5, 4).unwrap();
        let pair = extremal_trajectories(&p, spec, &cfg, Execution::Sequential).unwrap();
        let eq = discrete_equilibrium(EquilibriumParams::new(1.2, 3.0).unwrap(), spec).unwrap();
        for g in &pair.gamma_hi {
            assert!(g.sup_distance(&eq).unwrap() < 1e-10);
        }
        assert_eq!(pair.times.len(), 101);
        assert_eq!(pair.symmetry_defect(), 0.0);
    }

    #[test]
    fn oscillating_profile_converges_and_stays_ordered() {
        let spec = GridSpec::new(15).unwrap();
        let p = oscillating();
        let mut cfg = ExtremalConfig::new(0.0, 2.0, 1e-2);
        cfg.save_every = 10;
        cfg.horizon = HorizonSchedule::doubling(1.0, 7).unwrap();
        let pair = extremal_trajectories(&p, spec, &cfg, Execution::Parallel).unwrap();
        assert!(pair.cauchy_gap < cfg.tol);
        assert_eq!(pair.times.len(), 21);
        assert!(pair.gap_history.windows(2).all(|w| w[1].1 <= w[0].1));
        for (lo, hi) in pair.gamma_lo.iter().zip(&pair.gamma_hi) {
            assert!(lo.leq(hi).unwrap());
            assert!(hi.is_nondegenerate());
        }
        assert_eq!(pair.symmetry_defect(), 0.0);
        let seq = extremal_trajectories(&p, spec, &cfg, Execution::Sequential).unwrap();
        assert_eq!(seq, pair);
    }

    #[test]
    fn exhausted_schedule_reports_gaps() {
        let spec = GridSpec::new(15).unwrap();
        let mut cfg = ExtremalConfig::new(0.0, 1.0, 1e-2);
        cfg.horizon = HorizonSchedule::new(vec![0.01, 0.02, 0.03]).unwrap();
        let e = extremal_trajectories(&oscillating(), spec, &cfg, Execution::Sequential).unwrap_err();
        match e {
            LabError::Convergence { gaps, .. } => assert_eq!(gaps.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_windows_are_rejected() {
        let spec = GridSpec::new(7).unwrap();
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        let cfg = ExtremalConfig::new(1.0, 0.0, 1e-2);
        assert!(extremal_trajectories(&p, spec, &cfg, Execution::Sequential).is_err());
        let cfg = ExtremalConfig::new(0.0, 1.005, 1e-2);
        assert!(extremal_trajectories(&p, spec, &cfg, Execution::Sequential).is_err());
    }

    #[test]
    fn lookup_by_time() {
        let spec = GridSpec::new(7).unwrap();
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        let mut cfg = ExtremalConfig::new(-1.0, 1.0, 0.1);
        cfg.horizon = HorizonSchedule::doubling(1.0, 3).unwrap();
        let pair = extremal_trajectories(&p, spec, &cfg, Execution::Sequential).unwrap();
        assert_eq!(pair.index_of(-1.0), Some(0));
        assert_eq!(pair.index_of(0.5), Some(15));
        assert_eq!(pair.index_of(1.0), Some(20));
        assert_eq!(pair.index_of(3.0), None);
        assert!(pair.hi_at(0.0).is_some());
    }
}
