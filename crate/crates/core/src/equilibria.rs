//! The positive stationary state `v⁺` of the autonomous problem with
//! constant coefficients `(b, ω)`, and its mirror `v⁻ = -v⁺`.
//!
//! On positive states the selection is forced to `1`, so `v⁺` solves the
//! linear boundary value problem `-u'' = b + ω u`, `u(0) = u(1) = 0`:
//!
//! ```text
//! ω = 0:  u(x) = (b/2) x (1 - x)
//! ω > 0:  u(x) = (b/ω) (cos(√ω (x - 1/2)) / cos(√ω / 2) - 1)
//!              = (2b/ω) sin(√ω x / 2) sin(√ω (1 - x) / 2) / cos(√ω / 2)
//! ```
//!
//! The product form is used because it has no cancellation as `ω → 0`.

use crate::coefficients::PI2;
use crate::error::{usage, LabError, Result};
use crate::grid::{GridFunction, GridSpec};
use crate::linalg::SymTridiagonal;

/// Constant coefficients `b > 0`, `0 ≤ ω < π²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumParams {
    b: f64,
    omega: f64,
}

impl EquilibriumParams {
    pub fn new(b: f64, omega: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(usage(format!("equilibrium needs b > 0, got {b}")));
        }
        if !(omega >= 0.0) {
            return Err(usage(format!("equilibrium needs omega >= 0, got {omega}")));
        }
        if omega >= PI2 {
            return Err(LabError::Domain(format!(
                "omega = {omega} >= pi^2: no positive equilibrium"
            )));
        }
        Ok(Self { b, omega })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// `v⁺(x)` for a single point `x ∈ [0, 1]`.
pub fn closed_form_value(params: EquilibriumParams, x: f64) -> f64 {
    let EquilibriumParams { b, omega } = params;
    if omega == 0.0 {
        return 0.5 * b * x * (1.0 - x);
    }
    let a = omega.sqrt();
    2.0 * b / omega * (0.5 * a * x).sin() * (0.5 * a * (1.0 - x)).sin() / (0.5 * a).cos()
}

/// `v⁺` sampled at the interior nodes.
pub fn positive_equilibrium_closed_form(params: EquilibriumParams, spec: GridSpec) -> Result<GridFunction> {
    GridFunction::from_fn(spec, |x| closed_form_value(params, x))
}

/// `v⁻ = -v⁺` sampled at the interior nodes.
pub fn negative_equilibrium_closed_form(params: EquilibriumParams, spec: GridSpec) -> Result<GridFunction> {
    Ok(positive_equilibrium_closed_form(params, spec)?.neg())
}

/// Solves `(-L_h - ω I) u = b 𝟙`, the exact fixed point of the stepper under
/// the upper policy with constant coefficients.
pub fn discrete_equilibrium(params: EquilibriumParams, spec: GridSpec) -> Result<GridFunction> {
    let lambda = spec.first_eigenvalue();
    if params.omega >= lambda {
        return Err(LabError::Domain(format!(
            "omega = {} is not below the discrete first eigenvalue {lambda:.6}",
            params.omega
        )));
    }
    let h = spec.h();
    let a = SymTridiagonal {
        n: spec.n_interior(),
        diag: 2.0 / (h * h) - params.omega,
        off: -1.0 / (h * h),
    };
    let u = a
        .solve(&vec![params.b; spec.n_interior()])
        .ok_or_else(|| LabError::Domain("singular equilibrium system".into()))?;
    GridFunction::new(spec, u)
}

/// Sup norm of `-L_h u - ω u - b` for a strictly positive `u`.
pub fn stationarity_residual(u: &GridFunction, params: EquilibriumParams) -> Result<f64> {
    if !u.is_nondegenerate() {
        return Err(usage(
            "stationarity residual needs a strictly positive state (selection is ambiguous at zero)",
        ));
    }
    let h2 = u.spec().h().powi(2);
    let v = u.values();
    let n = v.len();
    let at = |i: isize| if i < 0 || i as usize >= n { 0.0 } else { v[i as usize] };
    Ok((0..n as isize)
        .map(|i| {
            let lap = (at(i - 1) - 2.0 * at(i) + at(i + 1)) / h2;
            (-lap - params.omega * at(i) - params.b).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(b: f64, w: f64) -> EquilibriumParams {
        EquilibriumParams::new(b, w).unwrap()
    }

    /// Shooting on `u'' = -(b + ω u)` with RK4; the problem is linear so the
    /// slope follows from two shots.
    fn shooting_oracle(b: f64, omega: f64, x_eval: f64) -> f64 {
        let shoot = |slope: f64, until: f64| -> f64 {
            let m = 20_000;
            let dx = until / m as f64;
            let (mut u, mut p) = (0.0f64, slope);
            let f = |u: f64, p: f64| (p, -(b + omega * u));
            for _ in 0..m {
                let k1 = f(u, p);
                let k2 = f(u + 0.5 * dx * k1.0, p + 0.5 * dx * k1.1);
                let k3 = f(u + 0.5 * dx * k2.0, p + 0.5 * dx * k2.1);
                let k4 = f(u + dx * k3.0, p + dx * k3.1);
                u += dx / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                p += dx / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            }
            u
        };
        let e0 = shoot(0.0, 1.0);
        let e1 = shoot(1.0, 1.0);
        let slope = -e0 / (e1 - e0);
        shoot(slope, x_eval)
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_value(params(1.0, 0.0), 0.5), 0.125);
        let v = closed_form_value(params(1.0, 1.0), 0.5);
        assert!((v - (1.0 / 0.5f64.cos() - 1.0)).abs() < 1e-15);
        assert!((v - 0.139494).abs() < 1e-6);
    }

    #[test]
    fn closed_form_matches_shooting() {
        for &(b, w) in &[(1.0, 1.0), (2.0, 4.0), (0.5, 9.0), (1.0, 1e-9)] {
            for &x in &[0.1, 0.3, 0.5, 0.77] {
                let cf = closed_form_value(params(b, w), x);
                let sh = shooting_oracle(b, w, x);
                assert!(
                    (cf - sh).abs() < 1e-9 * cf.abs().max(1.0),
                    "b={b} w={w} x={x}: {cf} vs {sh}"
                );
            }
        }
    }

    #[test]
    fn closed_form_satisfies_the_ode() {
        // central differences of the continuous formula with a tiny step
        for &(b, w) in &[(1.0, 2.5), (3.0, 7.0)] {
            let p = params(b, w);
            let d = 1e-4;
            for &x in &[0.2, 0.5, 0.9] {
                let u = |y| closed_form_value(p, y);
                let upp = (u(x - d) - 2.0 * u(x) + u(x + d)) / (d * d);
                assert!((-upp - w * u(x) - b).abs() < 1e-5 * b.max(1.0));
            }
            assert!(closed_form_value(p, 0.0).abs() < 1e-15);
            assert!(closed_form_value(p, 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn small_omega_has_no_cancellation() {
        let base = closed_form_value(params(1.0, 0.0), 0.3);
        let tiny = closed_form_value(params(1.0, 1e-12), 0.3);
        assert!((tiny - base).abs() < 1e-13);
        // first order term: (5/384 - y²/16 + y⁴/24) ω, y = x - 1/2
        let y: f64 = -0.2;
        let w = 1e-6;
        let series = base + w * (5.0 / 384.0 - y * y / 16.0 + y.powi(4) / 24.0);
        // O(ω²) remainder is ~1e-13ω; the rest is rounding
        assert!((closed_form_value(params(1.0, w), 0.3) - series).abs() < 1e-14);
    }

    #[test]
    fn mirror_equilibrium() {
        let spec = GridSpec::new(9).unwrap();
        let p = params(1.3, 2.0);
        let plus = positive_equilibrium_closed_form(p, spec).unwrap();
        let minus = negative_equilibrium_closed_form(p, spec).unwrap();
        assert_eq!(minus, plus.neg());
        assert!(minus.leq(&plus).unwrap());
        assert!(plus.is_nondegenerate());
    }

    #[test]
    fn parameter_domain() {
        assert!(EquilibriumParams::new(0.0, 1.0).is_err());
        assert!(EquilibriumParams::new(1.0, -1.0).is_err());
        assert!(matches!(EquilibriumParams::new(1.0, PI2), Err(LabError::Domain(_))));
        // λ₁ʰ = 8 on one node
        let p = params(1.0, 8.5);
        assert!(matches!(
            discrete_equilibrium(p, GridSpec::new(1).unwrap()),
            Err(LabError::Domain(_))
        ));
    }

    #[test]
    fn discrete_single_node() {
        let u = discrete_equilibrium(params(1.0, 0.0), GridSpec::new(1).unwrap()).unwrap();
        assert_eq!(u.values(), &[0.125]);
    }

    #[test]
    fn discrete_equals_closed_form_for_quadratics() {
        for n in [1, 2, 5, 31, 100, 127] {
            let spec = GridSpec::new(n).unwrap();
            let d = discrete_equilibrium(params(1.0, 0.0), spec).unwrap();
            let c = positive_equilibrium_closed_form(params(1.0, 0.0), spec).unwrap();
            assert!(d.sup_distance(&c).unwrap() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn residuals() {
        let spec = GridSpec::new(63).unwrap();
        let p = params(1.0, 4.0);
        let d = discrete_equilibrium(p, spec).unwrap();
        assert!(stationarity_residual(&d, p).unwrap() <= 1e-12);
        let c = positive_equilibrium_closed_form(params(1.0, 0.0), spec).unwrap();
        assert!(stationarity_residual(&c, params(1.0, 0.0)).unwrap() <= 1e-12);
        assert!(stationarity_residual(&GridFunction::zeros(spec), p).is_err());
    }

    #[test]
    fn residual_is_second_order() {
        let p = params(1.0, 4.0);
        let r = |n| {
            let spec = GridSpec::new(n).unwrap();
            stationarity_residual(&positive_equilibrium_closed_form(p, spec).unwrap(), p).unwrap()
        };
        let ratio = r(63) / r(127);
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn monotone_in_parameters() {
        let spec = GridSpec::new(31).unwrap();
        let bs = [0.5, 1.0, 2.0];
        let ws = [0.0, 1.0, 4.0, 9.0];
        for &b in &bs {
            for pair in ws.windows(2) {
                let lo = positive_equilibrium_closed_form(params(b, pair[0]), spec).unwrap();
                let hi = positive_equilibrium_closed_form(params(b, pair[1]), spec).unwrap();
                assert!(lo.leq(&hi).unwrap());
                let lo = discrete_equilibrium(params(b, pair[0]), spec).unwrap();
                let hi = discrete_equilibrium(params(b, pair[1]), spec).unwrap();
                assert!(lo.leq(&hi).unwrap());
            }
        }
        for &w in &ws {
            for pair in bs.windows(2) {
                let lo = positive_equilibrium_closed_form(params(pair[0], w), spec).unwrap();
                let hi = positive_equilibrium_closed_form(params(pair[1], w), spec).unwrap();
                assert!(lo.leq(&hi).unwrap());
                assert!(lo.is_nondegenerate());
            }
        }
    }

    #[test]
    fn discrete_converges_at_second_order() {
        let p = params(1.0, 4.0);
        let gap = |n| {
            let spec = GridSpec::new(n).unwrap();
            discrete_equilibrium(p, spec)
                .unwrap()
                .sup_distance(&positive_equilibrium_closed_form(p, spec).unwrap())
                .unwrap()
        };
        let (g31, g63, g127) = (gap(31), gap(63), gap(127));
        for ratio in [g31 / g63, g63 / g127] {
            assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
        }
    }
}
