//! Forward behaviour of an asymptotically autonomous problem.
//!
//! At each checkpoint `t` the pullback sample `Â(t)` of the nonautonomous
//! problem is compared with a sample `Â` of the limit problem's attractor, and
//! `γ_hi(t)` with the limit equilibrium. Both samples start from the same
//! materialized seed family so that they are comparable.

use crate::coefficients::CoefficientProfile;
use crate::equilibria::{discrete_equilibrium, EquilibriumParams};
use crate::error::{usage, Result};
use crate::exec::Execution;
use crate::grid::{hausdorff_semidist, GridSpec};
use crate::lab::extremal::{extremal_trajectories, ExtremalConfig};
use crate::lab::sampling::{pullback_attractor_sample, PullbackConfig, SeedFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRow {
    pub t: f64,
    /// `dist(Â(t), Â)`, Hausdorff semidistance in the grid metric.
    pub dist_attractor: f64,
    /// `sup |γ_hi(t) - v⁺(limit)|`.
    pub dist_gamma: f64,
    /// `sup |γ_lo(t) + γ_hi(t)|`.
    pub symmetry_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticTable {
    pub rows: Vec<AsymptoticRow>,
    /// Distinct members of the limit sample `Â`.
    pub limit_members: usize,
    /// Deepest pullback start used across all checkpoints.
    pub horizon_used: f64,
}

impl AsymptoticTable {
    pub fn dist_attractor(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.dist_attractor).collect()
    }

    pub fn dist_gamma(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.dist_gamma).collect()
    }
}

/// `true` when no entry exceeds its predecessor by more than `slack`.
pub fn is_non_increasing(column: &[f64], slack: f64) -> bool {
    column.windows(2).all(|w| w[1] <= w[0] + slack)
}

/// Runs the experiment at every checkpoint (in the given order).
///
/// The extremal runs reuse the sampling tolerance and horizon schedule.
pub fn asymptotic_experiment(
    profile: &CoefficientProfile,
    limit: EquilibriumParams,
    spec: GridSpec,
    checkpoints: &[f64],
    sampling: &PullbackConfig,
    exec: Execution,
) -> Result<AsymptoticTable> {
    match profile.limits() {
        Some((b, w)) if (b - limit.b()).abs() <= 1e-12 && (w - limit.omega()).abs() <= 1e-12 => {}
        Some((b, w)) => {
            return Err(usage(format!(
                "profile limits (b = {b}, omega = {w}) differ from the requested limit (b = {}, omega = {})",
                limit.b(),
                limit.omega()
            )))
        }
        None => return Err(usage("profile declares no asymptotic limits")),
    }
    if checkpoints.is_empty() {
        return Err(usage("no checkpoints"));
    }

    let seeds = SeedFamily::Explicit(sampling.seeds.materialize(profile, spec)?);
    let cfg = PullbackConfig {
        seeds,
        ..sampling.clone()
    };
    let limit_profile = CoefficientProfile::constant(limit.b(), limit.omega())?;
    let limit_sample = pullback_attractor_sample(0.0, &limit_profile, spec, &cfg, exec)?;
    let v_limit = discrete_equilibrium(limit, spec)?;

    let mut rows = Vec::with_capacity(checkpoints.len());
    let mut horizon_used = f64::INFINITY;
    for &t in checkpoints {
        let sample = pullback_attractor_sample(t, profile, spec, &cfg, exec)?;
        let mut ecfg = ExtremalConfig::new(t, t, cfg.dt);
        ecfg.tol = cfg.tol;
        ecfg.horizon = cfg.horizon.clone();
        let pair = extremal_trajectories(profile, spec, &ecfg, exec)?;
        horizon_used = horizon_used.min(sample.horizon_used).min(pair.horizon_used);
        rows.push(AsymptoticRow {
            t,
            dist_attractor: hausdorff_semidist(&sample.members, &limit_sample.members)?,
            dist_gamma: pair.gamma_hi[0].sup_distance(&v_limit)?,
            symmetry_defect: pair.symmetry_defect(),
        });
    }
    Ok(AsymptoticTable {
        rows,
        limit_members: limit_sample.members.len(),
        horizon_used,
    })
}
