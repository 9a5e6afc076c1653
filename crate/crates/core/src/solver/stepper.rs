//! Semi-implicit time stepping of `u' = L_h u + b(t) f + ω(t) u`, `f ∈ H₀(u)`.
//!
//! One step solves
//!
//! ```text
//! (I - dt L_h - dt ω(t+dt) I) u' = u + dt b(t+dt) f(u)
//! ```
//!
//! with the selection `f` taken at the current state. The matrix has diagonal
//! `1 + 2dt/h² - dt ω`, off-diagonals `-dt/h²` and row sums `1 - dt ω > 0`, so
//! it is an M-matrix and its inverse is entrywise nonnegative. That is the
//! whole discrete comparison principle.

use crate::coefficients::{validate, CoefficientProfile, Diagnostics};
use crate::error::{usage, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::linalg::SymTridiagonal;
use crate::solver::selection::SelectionPolicy;

/// A validated (profile, grid, dt) triple with scratch buffers.
#[derive(Debug, Clone)]
pub struct Stepper<'p> {
    profile: &'p CoefficientProfile,
    spec: GridSpec,
    dt: f64,
    diagnostics: Diagnostics,
    select: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'p> Stepper<'p> {
    /// Validates the profile against the grid and step before any stepping.
    pub fn new(profile: &'p CoefficientProfile, spec: GridSpec, dt: f64) -> Result<Self> {
        let diagnostics = validate(profile, spec, dt)?;
        let n = spec.n_interior();
        Ok(Self {
            profile,
            spec,
            dt,
            diagnostics,
            select: vec![0.0; n],
            scratch: Vec::with_capacity(n),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn profile(&self) -> &'p CoefficientProfile {
        self.profile
    }

    pub fn diagnostics(&self) -> Diagnostics {
        self.diagnostics
    }

    /// System matrix for the implicit part at reaction rate `omega`.
    pub fn matrix(&self, omega: f64) -> SymTridiagonal {
        let h = self.spec.h();
        let r = self.dt / (h * h);
        SymTridiagonal {
            n: self.spec.n_interior(),
            diag: 1.0 + 2.0 * r - self.dt * omega,
            off: -r,
        }
    }

    /// Advances `u` (interior values at time `t`) by one step in place and
    /// returns the new time `t + dt`.
    pub fn advance(&mut self, u: &mut [f64], t: f64, policy: &SelectionPolicy) -> f64 {
        debug_assert_eq!(u.len(), self.spec.n_interior());
        let t_next = t + self.dt;
        let (b, omega) = self.profile.eval(t_next);
        policy.select_into(u, t, &mut self.select);
        let kick = self.dt * b;
        for (x, f) in u.iter_mut().zip(&self.select) {
            *x += kick * f;
        }
        let a = self.matrix(omega);
        debug_assert!(a.is_m_matrix(), "validated step lost the M-matrix property");
        a.solve_in_place(u, &mut self.scratch)
            .expect("tridiagonal solve of an M-matrix cannot break down");
        t_next
    }

    /// One step from `u` at time `t`.
    pub fn step(&mut self, u: &GridFunction, t: f64, policy: &SelectionPolicy) -> Result<GridFunction> {
        if u.spec() != self.spec {
            return Err(usage("state and stepper live on different grids"));
        }
        let mut v = u.values().to_vec();
        self.advance(&mut v, t, policy);
        Ok(GridFunction::from_raw(self.spec, v))
    }

    /// Runs `n_steps` from `x` at time `s`, calling `visit(k, t_k, u_k)` for
    /// every state including the initial one. Times accumulate as
    /// `t_{k+1} = t_k + dt`, so restarting from `(t_k, u_k)` reproduces the
    /// tail bit for bit. Returns the final time and state.
    pub fn run<F>(
        &mut self,
        x: &GridFunction,
        s: f64,
        n_steps: usize,
        policy: &SelectionPolicy,
        mut visit: F,
    ) -> Result<(f64, GridFunction)>
    where
        F: FnMut(usize, f64, &[f64]),
    {
        if x.spec() != self.spec {
            return Err(usage("initial datum and stepper live on different grids"));
        }
        let mut u = x.values().to_vec();
        let mut t = s;
        visit(0, t, &u);
        for k in 1..=n_steps {
            t = self.advance(&mut u, t, policy);
            visit(k, t, &u);
        }
        Ok((t, GridFunction::from_raw(self.spec, u)))
    }

    /// Final state after `n_steps`, nothing stored.
    pub fn evolve(
        &mut self,
        x: &GridFunction,
        s: f64,
        n_steps: usize,
        policy: &SelectionPolicy,
    ) -> Result<GridFunction> {
        Ok(self.run(x, s, n_steps, policy, |_, _, _| {})?.1)
    }
}

/// Single validated step; see [`Stepper`].
pub fn step(
    u: &GridFunction,
    t: f64,
    dt: f64,
    profile: &CoefficientProfile,
    policy: &SelectionPolicy,
) -> Result<GridFunction> {
    Stepper::new(profile, u.spec(), dt)?.step(u, t, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Schedule;
    use crate::error::LabError;

    fn one(v: f64) -> GridFunction {
        GridFunction::new(GridSpec::new(1).unwrap(), vec![v]).unwrap()
    }

    #[test]
    fn zero_stays_zero_under_zero_policy() {
        let p = CoefficientProfile::constant(3.0, 2.0).unwrap();
        let u = GridFunction::zeros(GridSpec::new(9).unwrap());
        let v = step(&u, 0.0, 0.01, &p, &SelectionPolicy::Zero).unwrap();
        assert!(v.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn pure_diffusion_single_node() {
        // L_h = -8 on one node, so the diffusion part is u' = 1 / (1 + 0.8).
        // Profiles need b > 0; the forcing contribution is removed by
        // linearity of the solve (it is the step taken from zero).
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        let w = step(&one(1.0), 0.0, 0.1, &p, &SelectionPolicy::Upper).unwrap();
        assert!((w.values()[0] - 1.1 / 1.8).abs() < 1e-15);
        let forcing = step(&one(0.0), 0.0, 0.1, &p, &SelectionPolicy::Upper).unwrap();
        let diffusion_only = w.values()[0] - forcing.values()[0];
        assert!((diffusion_only - 1.0 / 1.8).abs() < 1e-15);
    }

    #[test]
    fn forcing_from_zero_single_node() {
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        let up = step(&one(0.0), 0.0, 0.1, &p, &SelectionPolicy::Upper).unwrap();
        let lo = step(&one(0.0), 0.0, 0.1, &p, &SelectionPolicy::Lower).unwrap();
        let z = step(&one(0.0), 0.0, 0.1, &p, &SelectionPolicy::Zero).unwrap();
        assert!((up.values()[0] - 0.1 / 1.8).abs() < 1e-16);
        assert!((lo.values()[0] + 0.1 / 1.8).abs() < 1e-16);
        assert_eq!(z.values()[0], 0.0);
    }

    #[test]
    fn coefficients_are_taken_at_the_new_time() {
        // b(t) jumps from 1 to 2 across t = 0.05
        let b = Schedule::Table {
            points: vec![(0.0, 1.0), (0.05, 1.0), (0.050001, 2.0)],
        };
        let p = CoefficientProfile::with_tight_bounds(b, Schedule::constant(0.0), false).unwrap();
        let v = step(&one(0.0), 0.0, 0.1, &p, &SelectionPolicy::Upper).unwrap();
        assert!((v.values()[0] - 0.2 / 1.8).abs() < 1e-15);
    }

    #[test]
    fn invalid_step_is_refused() {
        let p = CoefficientProfile::constant(1.0, 4.0).unwrap();
        let u = GridFunction::zeros(GridSpec::new(63).unwrap());
        let e = step(&u, 0.0, 0.5, &p, &SelectionPolicy::Upper).unwrap_err();
        assert!(matches!(e, LabError::Validation(_)));
        let e = step(
            &one(0.0),
            0.0,
            0.1,
            &CoefficientProfile::constant(1.0, 9.0).unwrap(),
            &SelectionPolicy::Upper,
        );
        assert!(e.is_err());
    }

    #[test]
    fn matrix_is_m_matrix_when_valid() {
        let p = CoefficientProfile::constant(1.0, 9.0).unwrap();
        let s = Stepper::new(&p, GridSpec::new(31).unwrap(), 0.1).unwrap();
        let a = s.matrix(9.0);
        assert!(a.is_m_matrix());
        assert!((a.diag + 2.0 * a.off - (1.0 - 0.9)).abs() < 1e-12);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        let mut s = Stepper::new(&p, GridSpec::new(3).unwrap(), 0.1).unwrap();
        assert!(s.step(&one(0.0), 0.0, &SelectionPolicy::Upper).is_err());
    }
}
