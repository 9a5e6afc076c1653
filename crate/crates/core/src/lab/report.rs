//! Defect measurements for the order structure of the attractor.

use crate::equilibria::{discrete_equilibrium, EquilibriumParams};
use crate::error::{usage, Result};
use crate::grid::{GridFunction, OrderInterval};
use crate::lab::extremal::{upper_barrier, ExtremalPair};
use crate::lab::horizon::depth_steps;
use crate::lab::sampling::AttractorSample;
use crate::solver::{SelectionPolicy, Stepper};

/// Datum whose pullback runs measure attraction towards `γ_hi`.
#[derive(Debug, Clone, PartialEq)]
pub enum Probe {
    /// The same function at every start time.
    Fixed(GridFunction),
    /// `γ_hi(s)` itself; only depths that start inside the stored window are used.
    UpperBranch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractionSetup {
    pub probe: Probe,
    pub depths: Vec<f64>,
}

impl AttractionSetup {
    /// Half of `γ_hi` at the window start, which lies between the branches.
    pub fn half_upper(pair: &ExtremalPair, depths: Vec<f64>) -> Result<Self> {
        Ok(Self {
            probe: Probe::Fixed(pair.gamma_hi[0].scale(0.5)?),
            depths,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    /// Largest distance of a sample member to `[γ_lo(t), γ_hi(t)]`.
    pub sandwich_violation: f64,
    /// Largest distance of a sample member to `[v⁻(b₁,ω₁), v⁺(b₁,ω₁)]`.
    pub equilibrium_interval_violation: f64,
    /// `sup |γ_lo + γ_hi|` over the window.
    pub symmetry_defect: f64,
    /// Largest excess of `v⁺(params_low)` over `γ_hi`.
    pub bound_defect_lower: f64,
    /// Largest excess of `γ_hi` over `v⁺(params_high)`.
    pub bound_defect_upper: f64,
    pub reference_time: f64,
    /// `(start time, metric distance to γ_hi(reference_time))`, deepest last.
    pub attraction_curve: Vec<(f64, f64)>,
}

/// Measures the sandwich, symmetry and bound defects of `pair` and the
/// attraction of the probe towards `γ_hi` at the window's last time.
/// Defects are reported, not judged.
pub fn structure_report(
    pair: &ExtremalPair,
    samples: &[AttractorSample],
    params_low: EquilibriumParams,
    params_high: EquilibriumParams,
    attraction: &AttractionSetup,
) -> Result<StructureReport> {
    let spec = pair.spec;
    let barrier = OrderInterval::symmetric(upper_barrier(&pair.profile, spec)?)?;

    let mut sandwich = 0.0f64;
    let mut interval = 0.0f64;
    for sample in samples {
        let k = pair
            .index_of(sample.t)
            .ok_or_else(|| usage(format!("sample time {} is not stored in the extremal window", sample.t)))?;
        let band = OrderInterval::new(pair.gamma_lo[k].clone(), pair.gamma_hi[k].clone())?;
        for m in &sample.members {
            sandwich = sandwich.max(band.distance(m)?);
            interval = interval.max(barrier.distance(m)?);
        }
    }

    let v_low = discrete_equilibrium(params_low, spec)?;
    let v_high = discrete_equilibrium(params_high, spec)?;
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    for hi in &pair.gamma_hi {
        lower = lower.max(v_low.excess_over(hi)?);
        upper = upper.max(hi.excess_over(&v_high)?);
    }

    let k_ref = pair.times.len() - 1;
    let t_ref = pair.times[k_ref];
    let target = &pair.gamma_hi[k_ref];
    let mut stepper = Stepper::new(&pair.profile, spec, pair.dt)?;
    let mut curve = Vec::with_capacity(attraction.depths.len());
    for &depth in &attraction.depths {
        let n = depth_steps(depth, pair.dt);
        let (start, s) = match &attraction.probe {
            Probe::Fixed(v) => (v, t_ref - n as f64 * pair.dt),
            Probe::UpperBranch => {
                // stored states are every few steps; walk back whole strides
                let stride = stride_of(pair);
                if !n.is_multiple_of(stride) || n / stride > k_ref {
                    continue;
                }
                let j = k_ref - n / stride;
                (&pair.gamma_hi[j], pair.times[j])
            }
        };
        let end = stepper.evolve(start, s, n, &SelectionPolicy::Upper)?;
        curve.push((s, end.metric(target)?));
    }

    Ok(StructureReport {
        sandwich_violation: sandwich,
        equilibrium_interval_violation: interval,
        symmetry_defect: pair.symmetry_defect(),
        bound_defect_lower: lower,
        bound_defect_upper: upper,
        reference_time: t_ref,
        attraction_curve: curve,
    })
}

fn stride_of(pair: &ExtremalPair) -> usize {
    match pair.times.as_slice() {
        [a, b, ..] => (((b - a) / pair.dt).round() as usize).max(1),
        _ => 1,
    }
}
