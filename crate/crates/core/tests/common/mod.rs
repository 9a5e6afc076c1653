#![allow(dead_code)]

use proptest::prelude::*;
use pullback_lab::{CoefficientProfile, GridFunction, GridSpec, Schedule, SelectionPolicy};

pub fn spec_strategy(max_n: usize) -> impl Strategy<Value = GridSpec> {
    (1..=max_n).prop_map(|n| GridSpec::new(n).unwrap())
}

/// Values in `[-r, r]`, with exact zeros mixed in.
pub fn datum(spec: GridSpec, r: f64) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => -r..=r], spec.n_interior())
        .prop_map(move |v| GridFunction::new(spec, v).unwrap())
}

/// Nonnegative values in `[0, r]`, with exact zeros mixed in.
pub fn gap(spec: GridSpec, r: f64) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 2 => 0.0..=r], spec.n_interior())
        .prop_map(move |v| GridFunction::new(spec, v).unwrap())
}

pub fn policy() -> impl Strategy<Value = SelectionPolicy> {
    prop_oneof![
        Just(SelectionPolicy::Upper),
        Just(SelectionPolicy::Lower),
        Just(SelectionPolicy::Zero),
        (any::<u64>(), any::<bool>()).prop_map(|(seed, mirrored)| SelectionPolicy::RandomSwitch { seed, mirrored }),
    ]
}

/// Piecewise-linear coefficients on `[t0, t0 + 1]` with `b ∈ [0.2, 3]` and
/// `ω` below `0.9 min(π², λ₁ʰ)`.
pub fn profile(spec: GridSpec, t0: f64) -> impl Strategy<Value = CoefficientProfile> {
    let cap = 0.9 * spec.first_eigenvalue().min(std::f64::consts::PI.powi(2));
    (
        prop::collection::vec(0.2..3.0f64, 2..8),
        prop::collection::vec(0.0..cap, 2..8),
    )
        .prop_map(move |(bs, ws)| {
            let knots = |v: Vec<f64>| {
                let m = (v.len() - 1).max(1) as f64;
                v.into_iter().enumerate().map(|(k, y)| (t0 + k as f64 / m, y)).collect()
            };
            CoefficientProfile::with_tight_bounds(
                Schedule::Table { points: knots(bs) },
                Schedule::Table { points: knots(ws) },
                false,
            )
            .unwrap()
        })
}

pub fn shifted(u: &GridFunction, by: &GridFunction) -> GridFunction {
    u.add(by).unwrap()
}
