//! Finite samples of the attainable set `U(t, s, x)`.
//!
//! Each listed policy contributes one terminal state. The true attainable set
//! is uncountable (selections may switch arbitrarily in time and space), so a
//! sample is always an under-approximation.

use crate::coefficients::CoefficientProfile;
use crate::error::{usage, Result};
use crate::exec::Execution;
use crate::grid::GridFunction;
use crate::solver::selection::SelectionPolicy;
use crate::solver::stepper::Stepper;
use crate::solver::trajectory::step_count;

#[derive(Debug, Clone, PartialEq)]
pub struct AttainabilitySample {
    pub t: f64,
    pub s: f64,
    pub x: GridFunction,
    /// Distinct terminal states (bitwise distinct).
    pub endpoints: Vec<GridFunction>,
    pub policies_used: Vec<SelectionPolicy>,
    /// `endpoints[endpoint_of[k]]` is the terminal state under `policies_used[k]`.
    pub endpoint_of: Vec<usize>,
    pub dt: f64,
}

/// Terminal states at `t` of the trajectories from `(s, x)` under each policy.
pub fn attainability_set(
    x: &GridFunction,
    s: f64,
    t: f64,
    dt: f64,
    profile: &CoefficientProfile,
    policies: &[SelectionPolicy],
    exec: Execution,
) -> Result<AttainabilitySample> {
    if policies.is_empty() {
        return Err(usage("attainability sample needs at least one policy"));
    }
    let (n_steps, dt_used) = step_count(s, t, dt)?;
    // validate once up front so workers cannot fail on the profile
    Stepper::new(profile, x.spec(), dt_used)?;
    let terminal = exec.map(policies, |p| {
        Stepper::new(profile, x.spec(), dt_used).and_then(|mut st| st.evolve(x, s, n_steps, p))
    });
    let mut endpoints: Vec<GridFunction> = Vec::new();
    let mut endpoint_of = Vec::with_capacity(policies.len());
    for u in terminal {
        let u = u?;
        let k = match endpoints.iter().position(|e| e == &u) {
            Some(k) => k,
            None => {
                endpoints.push(u);
                endpoints.len() - 1
            }
        };
        endpoint_of.push(k);
    }
    Ok(AttainabilitySample {
        t,
        s,
        x: x.clone(),
        endpoints,
        policies_used: policies.to_vec(),
        endpoint_of,
        dt: dt_used,
    })
}
