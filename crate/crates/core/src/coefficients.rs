//! Time-dependent coefficients `b(t)` and `ω(t)` with their admissibility bounds.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::grid::GridSpec;

pub const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

/// One scalar coefficient as a function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    Constant {
        value: f64,
    },
    /// `limit + amplitude · exp(-rate · max(t - t_ref, 0))`.
    ///
    /// Saturates at `limit + amplitude` for `t ≤ t_ref` so the coefficient
    /// stays bounded as `t → -∞`.
    ExpApproach {
        limit: f64,
        amplitude: f64,
        rate: f64,
        #[serde(default)]
        t_ref: f64,
    },
    /// Piecewise linear through sorted `(t, value)` knots, constant outside.
    Table {
        points: Vec<(f64, f64)>,
    },
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Schedule::Constant { value }
    }

    pub fn exp_approach(limit: f64, amplitude: f64, rate: f64, t_ref: f64) -> Self {
        Schedule::ExpApproach {
            limit,
            amplitude,
            rate,
            t_ref,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Schedule::Constant { value } => *value,
            Schedule::ExpApproach {
                limit,
                amplitude,
                rate,
                t_ref,
            } => limit + amplitude * (-rate * (t - t_ref).max(0.0)).exp(),
            Schedule::Table { points } => interpolate(points, t),
        }
    }

    /// Closed range of values the schedule can take over all of ℝ.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Schedule::Constant { value } => (*value, *value),
            Schedule::ExpApproach { limit, amplitude, .. } => {
                let far = limit + amplitude;
                (limit.min(far), limit.max(far))
            }
            Schedule::Table { points } => points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
                    (lo.min(v), hi.max(v))
                }),
        }
    }

    /// Value approached as `t → +∞`.
    pub fn limit(&self) -> f64 {
        match self {
            Schedule::Constant { value } => *value,
            Schedule::ExpApproach { limit, .. } => *limit,
            Schedule::Table { points } => points.last().map_or(f64::NAN, |p| p.1),
        }
    }

    fn check(&self, name: &str) -> Result<()> {
        let bad = |msg: String| Err(LabError::Validation(format!("{name}: {msg}")));
        match self {
            Schedule::Constant { value } if !value.is_finite() => bad("non-finite constant".into()),
            Schedule::ExpApproach {
                limit,
                amplitude,
                rate,
                t_ref,
            } => {
                if ![limit, amplitude, rate, t_ref].iter().all(|v| v.is_finite()) {
                    bad("non-finite exp_approach parameter".into())
                } else if *rate <= 0.0 {
                    bad(format!("exp_approach rate must be positive, got {rate}"))
                } else {
                    Ok(())
                }
            }
            Schedule::Table { points } => {
                if points.is_empty() {
                    return bad("empty table".into());
                }
                if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                    return bad("non-finite table entry".into());
                }
                if points.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("table times must be strictly increasing".into());
                }
                Ok(())
            }
            Schedule::Constant { .. } => Ok(()),
        }
    }
}

fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = (points[0], points[points.len() - 1]);
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    // first knot strictly greater than t; exists and is > 0 by the guards above
    let k = points.partition_point(|p| p.0 <= t);
    let (t0, v0) = points[k - 1];
    let (t1, v1) = points[k];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Declared bounds `0 < b0 ≤ b(t) ≤ b1`, `0 ≤ ω0 ≤ ω(t) ≤ ω1 < π²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBounds {
    pub b0: f64,
    pub b1: f64,
    pub omega0: f64,
    pub omega1: f64,
}

/// The pair `(b(t), ω(t))` with bounds and optional asymptotic limits.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProfile {
    b: Schedule,
    omega: Schedule,
    bounds: CoefficientBounds,
    limits: Option<(f64, f64)>,
}

impl CoefficientProfile {
    /// Builds a profile, checking that both schedules stay inside the
    /// declared bounds for all `t` and that declared limits match the
    /// schedules' behaviour as `t → +∞`.
    pub fn new(b: Schedule, omega: Schedule, bounds: CoefficientBounds, limits: Option<(f64, f64)>) -> Result<Self> {
        b.check("b")?;
        omega.check("omega")?;
        let CoefficientBounds { b0, b1, omega0, omega1 } = bounds;
        if !(b0 > 0.0 && b0 <= b1 && b1.is_finite()) {
            return Err(LabError::Validation(format!("need 0 < b0 <= b1, got b0={b0}, b1={b1}")));
        }
        if !(omega0 >= 0.0 && omega0 <= omega1 && omega1 < PI2) {
            return Err(LabError::Validation(format!(
                "need 0 <= omega0 <= omega1 < pi^2, got omega0={omega0}, omega1={omega1}"
            )));
        }
        let (blo, bhi) = b.range();
        if blo < b0 || bhi > b1 {
            return Err(LabError::Validation(format!(
                "b ranges over [{blo}, {bhi}], outside declared [{b0}, {b1}]"
            )));
        }
        let (wlo, whi) = omega.range();
        if wlo < omega0 || whi > omega1 {
            return Err(LabError::Validation(format!(
                "omega ranges over [{wlo}, {whi}], outside declared [{omega0}, {omega1}]"
            )));
        }
        if let Some((b_inf, w_inf)) = limits {
            let tol = |x: f64| 1e-12 * x.abs().max(1.0);
            if (b.limit() - b_inf).abs() > tol(b_inf) || (omega.limit() - w_inf).abs() > tol(w_inf) {
                return Err(LabError::Validation(format!(
                    "declared limits ({b_inf}, {w_inf}) differ from schedule limits ({}, {})",
                    b.limit(),
                    omega.limit()
                )));
            }
        }
        Ok(Self {
            b,
            omega,
            bounds,
            limits,
        })
    }

    /// Constant coefficients; bounds are tight and the limits are the constants.
    pub fn constant(b: f64, omega: f64) -> Result<Self> {
        Self::new(
            Schedule::constant(b),
            Schedule::constant(omega),
            CoefficientBounds {
                b0: b,
                b1: b,
                omega0: omega,
                omega1: omega,
            },
            Some((b, omega)),
        )
    }

    /// Bounds taken as the tight ranges of the schedules; limits declared when
    /// `asymptotic` is set.
    pub fn with_tight_bounds(b: Schedule, omega: Schedule, asymptotic: bool) -> Result<Self> {
        let (b0, b1) = b.range();
        let (omega0, omega1) = omega.range();
        let limits = asymptotic.then(|| (b.limit(), omega.limit()));
        Self::new(b, omega, CoefficientBounds { b0, b1, omega0, omega1 }, limits)
    }

    pub fn eval(&self, t: f64) -> (f64, f64) {
        (self.b.eval(t), self.omega.eval(t))
    }

    pub fn b(&self) -> &Schedule {
        &self.b
    }

    pub fn omega(&self) -> &Schedule {
        &self.omega
    }

    pub fn bounds(&self) -> CoefficientBounds {
        self.bounds
    }

    pub fn limits(&self) -> Option<(f64, f64)> {
        self.limits
    }

    pub fn is_autonomous(&self) -> bool {
        matches!(
            (&self.b, &self.omega),
            (Schedule::Constant { .. }, Schedule::Constant { .. })
        )
    }
}

/// Margins reported by a passing [`validate`] call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub omega1: f64,
    /// Discrete first Dirichlet eigenvalue `λ₁ʰ`.
    pub lambda1_h: f64,
    /// `π² - ω1`
    pub continuous_margin: f64,
    /// `λ₁ʰ - ω1`
    pub discrete_margin: f64,
    /// `1 - dt · ω1`
    pub step_margin: f64,
}

/// Checks that a profile can be integrated on `spec` with step `dt`:
/// (a) `ω1 < π²`, (b) `ω1 < λ₁ʰ`, (c) `dt · ω1 < 1`.
pub fn validate(profile: &CoefficientProfile, spec: GridSpec, dt: f64) -> Result<Diagnostics> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(LabError::Validation(format!("time step must be positive, got {dt}")));
    }
    let omega1 = profile.bounds.omega1;
    let lambda1_h = spec.first_eigenvalue();
    let d = Diagnostics {
        omega1,
        lambda1_h,
        continuous_margin: PI2 - omega1,
        discrete_margin: lambda1_h - omega1,
        step_margin: 1.0 - dt * omega1,
    };
    if d.continuous_margin <= 0.0 {
        return Err(LabError::Validation(format!(
            "(a) omega1 = {omega1} is not below pi^2 = {PI2}"
        )));
    }
    if d.discrete_margin <= 0.0 {
        return Err(LabError::Validation(format!(
            "(b) omega1 = {omega1} is not below the discrete first eigenvalue {lambda1_h:.6} \
             of a grid with {} interior nodes; refine the grid",
            spec.n_interior()
        )));
    }
    if d.step_margin <= 0.0 {
        return Err(LabError::Validation(format!(
            "(c) dt * omega1 = {} must be below 1; reduce dt",
            dt * omega1
        )));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_eval() {
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        assert_eq!(p.eval(-3.0), (1.0, 0.0));
        assert_eq!(p.eval(1e6), (1.0, 0.0));
        assert!(p.is_autonomous());
    }

    #[test]
    fn exp_approach_eval() {
        let s = Schedule::exp_approach(1.0, 1.0, 1.0, 0.0);
        assert_eq!(s.eval(0.0), 2.0);
        assert!((s.eval(1.0) - (1.0 + (-1.0f64).exp())).abs() < 1e-15);
        assert!((s.eval(50.0) - 1.0).abs() < 1e-20 + 1e-15);
        // saturated before t_ref
        assert_eq!(s.eval(-10.0), 2.0);
    }

    #[test]
    fn table_interpolation() {
        let s = Schedule::Table {
            points: vec![(0.0, 1.0), (2.0, 3.0)],
        };
        assert_eq!(s.eval(1.0), 2.0);
        assert_eq!(s.eval(-5.0), 1.0);
        assert_eq!(s.eval(7.0), 3.0);
        let s = Schedule::Table {
            points: vec![(0.0, 1.0), (1.0, 3.0), (4.0, 0.0)],
        };
        assert_eq!(s.eval(1.0), 3.0);
        assert_eq!(s.eval(2.5), 1.5);
        assert_eq!(s.range(), (0.0, 3.0));
    }

    #[test]
    fn profile_rejects_out_of_bounds_schedules() {
        let bounds = CoefficientBounds {
            b0: 1.0,
            b1: 2.0,
            omega0: 0.0,
            omega1: 1.0,
        };
        let ok = CoefficientProfile::new(
            Schedule::exp_approach(1.0, 1.0, 1.0, 0.0),
            Schedule::constant(0.5),
            bounds,
            Some((1.0, 0.5)),
        );
        assert!(ok.is_ok());
        let too_big = CoefficientProfile::new(
            Schedule::exp_approach(1.0, 1.5, 1.0, 0.0),
            Schedule::constant(0.5),
            bounds,
            None,
        );
        assert!(matches!(too_big, Err(LabError::Validation(_))));
        let table = CoefficientProfile::new(
            Schedule::constant(1.5),
            Schedule::Table {
                points: vec![(0.0, 0.0), (1.0, 1.2)],
            },
            bounds,
            None,
        );
        assert!(table.is_err());
        let wrong_limit = CoefficientProfile::new(
            Schedule::exp_approach(1.0, 1.0, 1.0, 0.0),
            Schedule::constant(0.5),
            bounds,
            Some((2.0, 0.5)),
        );
        assert!(wrong_limit.is_err());
    }

    #[test]
    fn profile_rejects_bad_bounds() {
        assert!(CoefficientProfile::constant(0.0, 0.0).is_err());
        assert!(CoefficientProfile::constant(1.0, -0.1).is_err());
        assert!(CoefficientProfile::constant(1.0, PI2).is_err());
        let unsorted = Schedule::Table {
            points: vec![(1.0, 1.0), (0.0, 1.0)],
        };
        assert!(CoefficientProfile::with_tight_bounds(unsorted, Schedule::constant(0.0), false).is_err());
        let bad_rate = Schedule::exp_approach(1.0, 1.0, 0.0, 0.0);
        assert!(CoefficientProfile::with_tight_bounds(bad_rate, Schedule::constant(0.0), false).is_err());
    }

    #[test]
    fn validate_examples() {
        let spec = GridSpec::new(1).unwrap();
        let p = CoefficientProfile::constant(1.0, 0.0).unwrap();
        assert!(validate(&p, spec, 1e6).is_ok());

        // single node: λ₁ʰ = 16 sin²(π/4) = 8 < 9
        let p = CoefficientProfile::constant(1.0, 9.0).unwrap();
        let e = validate(&p, spec, 0.01).unwrap_err();
        assert!(e.to_string().contains("(b)"), "{e}");

        let p = CoefficientProfile::constant(1.0, 4.0).unwrap();
        let e = validate(&p, GridSpec::new(63).unwrap(), 0.5).unwrap_err();
        assert!(e.to_string().contains("(c)"), "{e}");

        let d = validate(&p, GridSpec::new(63).unwrap(), 0.1).unwrap();
        assert!(d.discrete_margin > 0.0 && d.step_margin > 0.0);
        assert!(validate(&p, spec, 0.0).is_err());
    }

    #[test]
    fn discrete_eigenvalue_increases_to_pi_squared() {
        let ls: Vec<f64> = [1, 3, 7, 15, 31]
            .iter()
            .map(|&n| GridSpec::new(n).unwrap().first_eigenvalue())
            .collect();
        assert!(ls.windows(2).all(|w| w[0] < w[1]));
        assert!(ls.iter().all(|&l| l < PI2));
        let fine = GridSpec::new(1023).unwrap().first_eigenvalue();
        assert!(PI2 - fine < 1e-5);
    }
}
