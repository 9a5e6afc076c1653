//! Finite samples of the pullback attractor `𝒜(t)`.
//!
//! A family of initial data is integrated from `t - T` to `t` under every
//! policy, for increasing depths `T`. The endpoint set is returned at the
//! first depth where it agrees with the previous one in symmetric Hausdorff
//! distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coefficients::CoefficientProfile;
use crate::error::{usage, LabError, Result};
use crate::exec::Execution;
use crate::grid::{hausdorff_distance, GridFunction, GridSpec};
use crate::lab::extremal::upper_barrier;
use crate::lab::horizon::{depth_steps, HorizonSchedule};
use crate::solver::{SelectionPolicy, Stepper};

/// Where pullback runs start from.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedFamily {
    /// `n_seeds` data drawn uniformly, node by node, from
    /// `[v⁻(b₁,ω₁) - margin, v⁺(b₁,ω₁) + margin]`.
    Random {
        n_seeds: usize,
        seed: u64,
        margin: f64,
    },
    Explicit(Vec<GridFunction>),
}

impl SeedFamily {
    pub fn random(n_seeds: usize, seed: u64) -> Self {
        SeedFamily::Random {
            n_seeds,
            seed,
            margin: 1.0,
        }
    }

    pub fn materialize(&self, profile: &CoefficientProfile, spec: GridSpec) -> Result<Vec<GridFunction>> {
        match self {
            SeedFamily::Explicit(data) => {
                if data.is_empty() {
                    return Err(usage("seed family is empty"));
                }
                if data.iter().any(|u| u.spec() != spec) {
                    return Err(usage("seed family lives on a different grid"));
                }
                Ok(data.clone())
            }
            SeedFamily::Random { n_seeds, seed, margin } => {
                if *n_seeds == 0 {
                    return Err(usage("need at least one seed"));
                }
                let top = upper_barrier(profile, spec)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*n_seeds)
                    .map(|_| {
                        let v = top
                            .values()
                            .iter()
                            .map(|&hi| {
                                let (lo, hi) = (-hi - margin, hi + margin);
                                lo + (hi - lo) * rng.random::<f64>()
                            })
                            .collect();
                        GridFunction::new(spec, v)
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackConfig {
    pub dt: f64,
    pub seeds: SeedFamily,
    pub policies: Vec<SelectionPolicy>,
    pub horizon: HorizonSchedule,
    /// Symmetric Hausdorff tolerance between successive depths.
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractorSample {
    pub t: f64,
    /// Bitwise-distinct endpoints.
    pub members: Vec<GridFunction>,
    pub horizon_used: f64,
    pub depth_used: f64,
    pub seed_count: usize,
    pub cauchy_gap: f64,
    pub gap_history: Vec<(f64, f64)>,
}

fn dedup(all: Vec<GridFunction>) -> Vec<GridFunction> {
    let mut out: Vec<GridFunction> = Vec::with_capacity(all.len());
    for u in all {
        if !out.contains(&u) {
            out.push(u);
        }
    }
    out
}

/// Distinct endpoints at `t` of every (datum, policy) run started at `t - depth`.
pub fn pullback_endpoints(
    data: &[GridFunction],
    policies: &[SelectionPolicy],
    t: f64,
    depth: f64,
    dt: f64,
    profile: &CoefficientProfile,
    exec: Execution,
) -> Result<Vec<GridFunction>> {
    let Some(first) = data.first() else {
        return Err(usage("no initial data"));
    };
    if policies.is_empty() {
        return Err(usage("no selection policies"));
    }
    let spec = first.spec();
    Stepper::new(profile, spec, dt)?;
    let n = depth_steps(depth, dt);
    let s = t - n as f64 * dt;
    let jobs: Vec<(&GridFunction, &SelectionPolicy)> =
        data.iter().flat_map(|x| policies.iter().map(move |p| (x, p))).collect();
    let ends = exec.map(&jobs, |(x, p)| {
        Stepper::new(profile, spec, dt).and_then(|mut st| st.evolve(x, s, n, p))
    });
    Ok(dedup(ends.into_iter().collect::<Result<Vec<_>>>()?))
}

/// Endpoint set at time `t` once successive pullback depths agree to `tol`.
pub fn pullback_attractor_sample(
    t: f64,
    profile: &CoefficientProfile,
    spec: GridSpec,
    cfg: &PullbackConfig,
    exec: Execution,
) -> Result<AttractorSample> {
    if !(cfg.tol > 0.0) {
        return Err(usage("tolerance must be positive"));
    }
    let data = cfg.seeds.materialize(profile, spec)?;
    let mut previous: Option<Vec<GridFunction>> = None;
    let mut gaps = Vec::new();
    for &depth in cfg.horizon.depths() {
        let members = pullback_endpoints(&data, &cfg.policies, t, depth, cfg.dt, profile, exec)?;
        if let Some(prev) = &previous {
            let gap = hausdorff_distance(&members, prev)?;
            gaps.push((depth, gap));
            if gap < cfg.tol {
                let n = depth_steps(depth, cfg.dt);
                return Ok(AttractorSample {
                    t,
                    members,
                    horizon_used: t - n as f64 * cfg.dt,
                    depth_used: n as f64 * cfg.dt,
                    seed_count: data.len(),
                    cauchy_gap: gap,
                    gap_history: gaps,
                });
            }
        }
        previous = Some(members);
    }
    let (depth, gap) = gaps.last().copied().unwrap_or((cfg.horizon.deepest(), f64::INFINITY));
    Err(LabError::Convergence {
        depth,
        gap,
        tol: cfg.tol,
        gaps,
    })
}
