//! Deterministic selections of the Heaviside graph.
//!
//! `H₀(u)` is `{-1}` for `u < 0`, `{1}` for `u > 0` and the whole segment
//! `[-1, 1]` at `u = 0`. Policies only differ in what they pick at zero.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelectionPolicy {
    /// Picks `1` at zero (maximal element).
    Upper,
    /// Picks `-1` at zero (minimal element).
    Lower,
    /// Picks `0` at zero.
    Zero,
    /// Uniform draw from `{-1, 0, 1}` at zero, reproducible from `seed` and
    /// the step time. `mirrored` negates every draw.
    RandomSwitch {
        seed: u64,
        #[serde(default)]
        mirrored: bool,
    },
}

impl SelectionPolicy {
    pub fn random_switch(seed: u64) -> Self {
        SelectionPolicy::RandomSwitch { seed, mirrored: false }
    }

    /// The four standard policies, with the random one seeded by `seed`.
    pub fn standard_family(seed: u64) -> Vec<SelectionPolicy> {
        vec![
            SelectionPolicy::Upper,
            SelectionPolicy::Lower,
            SelectionPolicy::Zero,
            SelectionPolicy::random_switch(seed),
        ]
    }

    /// Policy `q` with `q(-u) = -p(u)` for every `u`.
    pub fn flipped(self) -> Self {
        match self {
            SelectionPolicy::Upper => SelectionPolicy::Lower,
            SelectionPolicy::Lower => SelectionPolicy::Upper,
            SelectionPolicy::Zero => SelectionPolicy::Zero,
            SelectionPolicy::RandomSwitch { seed, mirrored } => SelectionPolicy::RandomSwitch {
                seed,
                mirrored: !mirrored,
            },
        }
    }

    /// Writes the selection of `u` into `out`. `t` keys the random stream.
    pub(crate) fn select_into(&self, u: &[f64], t: f64, out: &mut [f64]) {
        debug_assert_eq!(u.len(), out.len());
        let at_zero = match *self {
            SelectionPolicy::Upper => 1.0,
            SelectionPolicy::Lower => -1.0,
            SelectionPolicy::Zero => 0.0,
            SelectionPolicy::RandomSwitch { seed, mirrored } => {
                let sign = if mirrored { -1.0 } else { 1.0 };
                let mut rng: Option<ChaCha8Rng> = None;
                for (f, &x) in out.iter_mut().zip(u) {
                    *f = if x > 0.0 {
                        1.0
                    } else if x < 0.0 {
                        -1.0
                    } else {
                        let rng = rng.get_or_insert_with(|| stream(seed, t));
                        sign * (rng.random_range(0..3u8) as f64 - 1.0)
                    };
                }
                return;
            }
        };
        for (f, &x) in out.iter_mut().zip(u) {
            *f = if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                at_zero
            };
        }
    }
}

fn stream(seed: u64, t: f64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // -0.0 and 0.0 are the same instant
    let key = if t == 0.0 { 0 } else { t.to_bits() };
    rng.set_stream(key);
    rng
}

/// Componentwise selection `f_i ∈ H₀(u_i)` at time zero.
pub fn heaviside_select(u: &GridFunction, policy: &SelectionPolicy) -> GridFunction {
    heaviside_select_at(u, policy, 0.0)
}

/// Selection at time `t`; only `RandomSwitch` depends on `t`.
pub fn heaviside_select_at(u: &GridFunction, policy: &SelectionPolicy, t: f64) -> GridFunction {
    let mut out = vec![0.0; u.len()];
    policy.select_into(u.values(), t, &mut out);
    GridFunction::from_raw(u.spec(), out)
}

/// Membership `f ∈ H₀(u)`.
pub fn in_heaviside_graph(u: f64, f: f64) -> bool {
    if u > 0.0 {
        f == 1.0
    } else if u < 0.0 {
        f == -1.0
    } else {
        (-1.0..=1.0).contains(&f)
    }
}

impl fmt::Display for SelectionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionPolicy::Upper => f.write_str("upper"),
            SelectionPolicy::Lower => f.write_str("lower"),
            SelectionPolicy::Zero => f.write_str("zero"),
            SelectionPolicy::RandomSwitch { seed, mirrored: false } => {
                write!(f, "random_switch:{seed}")
            }
            SelectionPolicy::RandomSwitch { seed, mirrored: true } => {
                write!(f, "random_switch_mirrored:{seed}")
            }
        }
    }
}

/// Parses the [`Display`](fmt::Display) form; a bare `random_switch` has seed 0.
impl FromStr for SelectionPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, seed) = match s.split_once(':') {
            Some((n, v)) => (
                n,
                Some(v.parse::<u64>().map_err(|e| format!("bad seed in {s:?}: {e}"))?),
            ),
            None => (s, None),
        };
        match (name, seed) {
            ("upper", None) => Ok(SelectionPolicy::Upper),
            ("lower", None) => Ok(SelectionPolicy::Lower),
            ("zero", None) => Ok(SelectionPolicy::Zero),
            ("random_switch", seed) => Ok(SelectionPolicy::RandomSwitch {
                seed: seed.unwrap_or(0),
                mirrored: false,
            }),
            ("random_switch_mirrored", seed) => Ok(SelectionPolicy::RandomSwitch {
                seed: seed.unwrap_or(0),
                mirrored: true,
            }),
            _ => Err(format!("unknown selection policy {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn gf(v: &[f64]) -> GridFunction {
        GridFunction::new(GridSpec::new(v.len()).unwrap(), v.to_vec()).unwrap()
    }

    #[test]
    fn forced_values_off_zero() {
        let u = gf(&[0.3, -0.2]);
        for p in SelectionPolicy::standard_family(7) {
            assert_eq!(heaviside_select(&u, &p).values(), &[1.0, -1.0]);
        }
    }

    #[test]
    fn tie_breaking_at_zero() {
        let u = gf(&[0.0]);
        assert_eq!(heaviside_select(&u, &SelectionPolicy::Upper).values(), &[1.0]);
        assert_eq!(heaviside_select(&u, &SelectionPolicy::Lower).values(), &[-1.0]);
        assert_eq!(heaviside_select(&u, &SelectionPolicy::Zero).values(), &[0.0]);
    }

    #[test]
    fn negative_zero_is_zero() {
        let u = gf(&[-0.0]);
        assert_eq!(heaviside_select(&u, &SelectionPolicy::Upper).values(), &[1.0]);
        assert_eq!(heaviside_select(&u, &SelectionPolicy::Lower).values(), &[-1.0]);
    }

    #[test]
    fn random_switch_is_reproducible() {
        let u = gf(&[0.0, 0.5]);
        let p = SelectionPolicy::random_switch(42);
        let first = heaviside_select(&u, &p);
        for _ in 0..10 {
            let again = heaviside_select(&u, &p);
            assert_eq!(again, first);
            assert_eq!(again.values()[1], 1.0);
        }
        assert!(in_heaviside_graph(0.0, first.values()[0]));
    }

    #[test]
    fn random_switch_hits_every_admissible_value() {
        let u = gf(&[0.0; 64]);
        let p = SelectionPolicy::random_switch(3);
        let f = heaviside_select_at(&u, &p, 0.25);
        for target in [-1.0, 0.0, 1.0] {
            assert!(f.values().contains(&target));
        }
        // different instants draw different streams
        assert_ne!(f, heaviside_select_at(&u, &p, 0.5));
    }

    #[test]
    fn flipped_policy_is_odd() {
        let u = gf(&[0.0, 1.5, -2.0, 0.0, 0.0, 3.0, 0.0, 0.0]);
        for p in SelectionPolicy::standard_family(11) {
            let f = heaviside_select_at(&u, &p, 1.75);
            let g = heaviside_select_at(&u.neg(), &p.flipped(), 1.75);
            assert_eq!(g, f.neg(), "{p}");
            assert_eq!(p.flipped().flipped(), p);
        }
    }

    #[test]
    fn parse_round_trip() {
        for p in [
            SelectionPolicy::Upper,
            SelectionPolicy::Lower,
            SelectionPolicy::Zero,
            SelectionPolicy::random_switch(99),
            SelectionPolicy::random_switch(5).flipped(),
        ] {
            assert_eq!(p.to_string().parse::<SelectionPolicy>().unwrap(), p);
        }
        assert_eq!(
            "random_switch".parse::<SelectionPolicy>().unwrap(),
            SelectionPolicy::random_switch(0)
        );
        assert!("sideways".parse::<SelectionPolicy>().is_err());
        assert!("upper:3".parse::<SelectionPolicy>().is_err());
    }
}
