//! Trajectories produced by one selection policy, and their concatenation.

use crate::coefficients::CoefficientProfile;
use crate::error::{usage, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::solver::selection::SelectionPolicy;
use crate::solver::stepper::Stepper;

/// Time-stamped states of one discrete solution.
///
/// `states[k]` sits at `times[k]`, where `times[k + 1] = times[k] + dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    spec: GridSpec,
    dt: f64,
    requested_dt: f64,
    times: Vec<f64>,
    states: Vec<GridFunction>,
    /// `(first state index, policy)` for each stretch driven by one policy.
    segments: Vec<(usize, SelectionPolicy)>,
    profile: CoefficientProfile,
}

impl Trajectory {
    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    /// Step actually used.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Step asked for, before adjusting it to divide the interval.
    pub fn requested_dt(&self) -> f64 {
        self.requested_dt
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectories are never empty")
    }

    pub fn final_state(&self) -> &GridFunction {
        self.states.last().expect("trajectories are never empty")
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[GridFunction] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn profile(&self) -> &CoefficientProfile {
        &self.profile
    }

    pub fn segments(&self) -> &[(usize, SelectionPolicy)] {
        &self.segments
    }

    /// The policy, when a single one drove the whole trajectory.
    pub fn policy(&self) -> Option<SelectionPolicy> {
        match self.segments.as_slice() {
            [(_, p)] => Some(*p),
            _ => None,
        }
    }
}

/// Number of steps covering `[s, t_end]` and the step used. `dt` is kept as
/// given when it divides the interval (up to 1e-9 relative); otherwise the
/// step count is rounded up and `dt` shrunk to fit.
pub fn step_count(s: f64, t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(s.is_finite() && t_end.is_finite()) {
        return Err(usage("non-finite time interval"));
    }
    if t_end < s {
        return Err(usage(format!("end time {t_end} precedes start time {s}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(usage(format!("time step must be positive, got {dt}")));
    }
    let span = t_end - s;
    if span == 0.0 {
        return Ok((0, dt));
    }
    let ratio = span / dt;
    let nearest = ratio.round();
    if nearest >= 1.0 && (ratio - nearest).abs() <= 1e-9 * nearest {
        return Ok((nearest as usize, dt));
    }
    let n = ratio.ceil().max(1.0);
    Ok((n as usize, span / n))
}

/// Integrates from `x` at time `s` to `t_end` under one policy.
pub fn integrate(
    x: &GridFunction,
    s: f64,
    t_end: f64,
    dt: f64,
    profile: &CoefficientProfile,
    policy: &SelectionPolicy,
) -> Result<Trajectory> {
    let (n_steps, dt_used) = step_count(s, t_end, dt)?;
    let mut t = integrate_steps(x, s, n_steps, dt_used, profile, policy)?;
    t.requested_dt = dt;
    Ok(t)
}

/// Integrates exactly `n_steps` steps of size `dt`.
pub fn integrate_steps(
    x: &GridFunction,
    s: f64,
    n_steps: usize,
    dt: f64,
    profile: &CoefficientProfile,
    policy: &SelectionPolicy,
) -> Result<Trajectory> {
    let spec = x.spec();
    let mut stepper = Stepper::new(profile, spec, dt)?;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    stepper.run(x, s, n_steps, policy, |_, t, u| {
        times.push(t);
        states.push(GridFunction::from_raw(spec, u.to_vec()));
    })?;
    Ok(Trajectory {
        spec,
        dt,
        requested_dt: dt,
        times,
        states,
        segments: vec![(0, *policy)],
        profile: profile.clone(),
    })
}

/// Joins `phi` and `psi` at `phi`'s final state, which must be `psi`'s first.
///
/// When both halves use the same policy the result is bit-identical to one
/// [`integrate`] call over the union interval.
pub fn concatenate(phi: &Trajectory, psi: &Trajectory) -> Result<Trajectory> {
    if phi.spec != psi.spec {
        return Err(usage("cannot join trajectories on different grids"));
    }
    if phi.dt != psi.dt {
        return Err(usage(format!("cannot join steps {} and {}", phi.dt, psi.dt)));
    }
    if phi.profile != psi.profile {
        return Err(usage("cannot join trajectories with different coefficient profiles"));
    }
    let (t_phi, t_psi) = (phi.final_time(), psi.t_start());
    if (t_phi - t_psi).abs() > 1e-9 * phi.dt {
        return Err(usage(format!("junction time mismatch: {t_phi} vs {t_psi}")));
    }
    if phi.final_state() != &psi.states[0] {
        return Err(usage("junction state mismatch"));
    }
    let offset = phi.states.len() - 1;
    let mut segments = phi.segments.clone();
    for &(k, p) in &psi.segments {
        match segments.last() {
            Some(&(_, last)) if last == p => {}
            _ => segments.push((k + offset, p)),
        }
    }
    let mut times = phi.times.clone();
    times.extend_from_slice(&psi.times[1..]);
    let mut states = phi.states.clone();
    states.extend_from_slice(&psi.states[1..]);
    Ok(Trajectory {
        spec: phi.spec,
        dt: phi.dt,
        requested_dt: phi.requested_dt,
        times,
        states,
        segments,
        profile: phi.profile.clone(),
    })
}
