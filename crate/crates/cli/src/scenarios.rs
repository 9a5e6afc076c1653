use std::path::Path;

use pullback_lab::equilibria::{discrete_equilibrium, positive_equilibrium_closed_form, stationarity_residual};
use pullback_lab::lab::{
    asymptotic_experiment, extremal_trajectories, pullback_attractor_sample, structure_report, upper_barrier,
    AttractionSetup, ExtremalConfig,
};
use pullback_lab::solver::integrate;
use pullback_lab::verify::{Verifier, VerifySettings};
use pullback_lab::{validate, EquilibriumParams, Execution, GridFunction, Schedule};
use serde_json::{json, Value};

use crate::config::{InitialKind, Kind, ScenarioConfig};
use crate::error::CliError;
use crate::output::{sample_csv, states_json, table_csv, trajectory_csv, Emitter};

pub struct Run<'a> {
    pub kind: Kind,
    pub config: &'a ScenarioConfig,
    pub exec: Execution,
}

impl Run<'_> {
    fn provenance(&self, run: Value) -> Result<Value, CliError> {
        let c = self.config;
        let spec = c.spec()?;
        let policies: Vec<String> = c.policies()?.iter().map(|p| p.to_string()).collect();
        // where the files go does not affect what is in them
        let mut echo = serde_json::to_value(c).expect("config is serializable");
        if let Some(out) = echo.get_mut("output").and_then(Value::as_object_mut) {
            out.remove("dir");
        }
        Ok(json!({
            "scenario": self.kind.to_string(),
            "version": env!("CARGO_PKG_VERSION"),
            "config": echo,
            "grid": { "n_interior": spec.n_interior(), "h": spec.h() },
            "requested_dt": c.time.dt,
            "seeds": { "seed": c.sampling.seed, "n_seeds": c.sampling.n_seeds, "policies": policies },
            "tolerances": { "tol": c.tolerances.tol, "horizon": self.config.horizon()?.depths() },
            "run": run,
        }))
    }

    fn emitter(&self, run: Value) -> Result<Emitter, CliError> {
        let c = self.config;
        Emitter::new(Path::new(&c.output.dir), c.output.format, self.provenance(run)?)
    }

    pub fn execute(&self) -> Result<Emitter, CliError> {
        let c = self.config;
        if let Some(k) = c.scenario.kind {
            if k != self.kind {
                return Err(CliError::Config(format!(
                    "config declares scenario {k} but the {} subcommand was run",
                    self.kind
                )));
            }
        }
        // fail on bad coefficients before doing any work
        let spec = c.spec()?;
        let profile = c.profile()?;
        validate(&profile, spec, c.time.dt)?;
        c.policies()?;
        match self.kind {
            Kind::Equilibria => self.equilibria(),
            Kind::Simulate => self.simulate(),
            Kind::Extremal => self.extremal(),
            Kind::Pullback => self.pullback(),
            Kind::Asymptotic => self.asymptotic(),
            Kind::Verify => self.verify(),
        }
    }

    fn equilibria(&self) -> Result<Emitter, CliError> {
        let c = self.config;
        let profile = c.profile()?;
        let (Schedule::Constant { value: b }, Schedule::Constant { value: omega }) = (profile.b(), profile.omega())
        else {
            return Err(CliError::Config("equilibria needs constant b and omega".into()));
        };
        let spec = c.spec()?;
        let params = EquilibriumParams::new(*b, *omega)?;
        let closed = positive_equilibrium_closed_form(params, spec)?;
        let discrete = discrete_equilibrium(params, spec)?;
        let xs: Vec<f64> = spec.nodes().collect();
        let rows: Vec<Vec<f64>> = xs
            .iter()
            .zip(closed.values().iter().zip(discrete.values()))
            .map(|(x, (v, d))| vec![*x, *v, *d])
            .collect();
        let residuals = json!({
            "closed_form": stationarity_residual(&closed, params)?,
            "discrete": stationarity_residual(&discrete, params)?,
        });
        let mut out = self.emitter(json!({ "b": b, "omega": omega, "residuals": residuals }))?;
        out.csv("equilibria", &table_csv(&["x", "v_plus", "v_plus_discrete"], &rows))?;
        out.json(
            "equilibria",
            json!({ "x": xs, "v_plus": closed.values(), "v_plus_discrete": discrete.values(), "residuals": residuals }),
        )?;
        Ok(out)
    }

    fn initial_datum(&self) -> Result<GridFunction, CliError> {
        let c = self.config;
        let spec = c.spec()?;
        let a = c.initial.amplitude;
        Ok(match c.initial.datum {
            InitialKind::Zero => GridFunction::zeros(spec),
            InitialKind::Constant => GridFunction::constant(spec, a)?,
            InitialKind::Sine => GridFunction::from_fn(spec, |x| a * (std::f64::consts::PI * x).sin())?,
            InitialKind::Equilibrium => upper_barrier(&c.profile()?, spec)?,
            InitialKind::Values => {
                let v = c
                    .initial
                    .values
                    .clone()
                    .ok_or_else(|| CliError::Config("initial.datum = \"values\" needs initial.values".into()))?;
                GridFunction::new(spec, v)?
            }
        })
    }

    fn simulate(&self) -> Result<Emitter, CliError> {
        let c = self.config;
        let profile = c.profile()?;
        let x = self.initial_datum()?;
        let policies = c.policies()?;
        let every = c.time.save_every.max(1);
        let runs = self.exec.map(&policies, |p| {
            integrate(&x, c.time.t_start, c.time.t_end, c.time.dt, &profile, p)
        });
        let mut kept = Vec::with_capacity(runs.len());
        for (p, traj) in policies.iter().zip(runs) {
            let traj = traj?;
            let last = traj.len() - 1;
            let idx: Vec<usize> = (0..=last).filter(|k| k % every == 0 || *k == last).collect();
            let times: Vec<f64> = idx.iter().map(|&k| traj.times()[k]).collect();
            let states: Vec<GridFunction> = idx.iter().map(|&k| traj.states()[k].clone()).collect();
            kept.push((*p, traj.dt(), times, states));
        }
        let dt_used = kept[0].1;
        let mut out = self.emitter(json!({ "dt": dt_used, "t_start": c.time.t_start, "t_end": c.time.t_end }))?;
        let single = kept.len() == 1;
        for (p, _, times, states) in &kept {
            let stem = if single {
                "trajectory".to_string()
            } else {
                format!("trajectory_{}", p.to_string().replace(':', "_"))
            };
            out.csv(&stem, &trajectory_csv(times, states))?;
        }
        let data: Vec<Value> = kept
            .iter()
            .map(|(p, dt, times, states)| json!({ "policy": p.to_string(), "dt": dt, "t": times, "states": states_json(states) }))
            .collect();
        out.json("trajectories", Value::Array(data))?;
        Ok(out)
    }

    fn extremal(&self) -> Result<Emitter, CliError> {
        let c = self.config;
        let profile = c.profile()?;
        let spec = c.spec()?;
        let mut cfg = ExtremalConfig::new(c.time.t_min, c.time.t_max, c.time.dt);
        cfg.tol = c.tolerances.tol;
        cfg.horizon = c.horizon()?;
        cfg.save_every = c.time.save_every.max(1);
        let pair = extremal_trajectories(&profile, spec, &cfg, self.exec)?;
        let bounds = profile.bounds();
        let setup = AttractionSetup::half_upper(&pair, cfg.horizon.depths().to_vec())?;
        let report = structure_report(
            &pair,
            &[],
            EquilibriumParams::new(bounds.b0, bounds.omega0)?,
            EquilibriumParams::new(bounds.b1, bounds.omega1)?,
            &setup,
        )?;
        let curve: Vec<[f64; 2]> = report.attraction_curve.iter().map(|(s, d)| [*s, *d]).collect();
        let gaps: Vec<[f64; 2]> = pair.gap_history.iter().map(|(d, g)| [*d, *g]).collect();
        let mut out = self.emitter(json!({
            "dt": pair.dt,
            "window": [pair.window.0, pair.window.1],
            "horizon_used": pair.horizon_used,
            "depth_used": pair.depth_used,
            "cauchy_gap": pair.cauchy_gap,
        }))?;
        out.csv("gamma_hi", &trajectory_csv(&pair.times, &pair.gamma_hi))?;
        out.csv("gamma_lo", &trajectory_csv(&pair.times, &pair.gamma_lo))?;
        out.json(
            "extremal",
            json!({
                "t": pair.times,
                "gamma_lo": states_json(&pair.gamma_lo),
                "gamma_hi": states_json(&pair.gamma_hi),
                "gap_history": gaps,
                "symmetry_defect": report.symmetry_defect,
                "bound_defect_lower": report.bound_defect_lower,
                "bound_defect_upper": report.bound_defect_upper,
                "reference_time": report.reference_time,
                "attraction_curve": curve,
            }),
        )?;
        Ok(out)
    }

    fn pullback(&self) -> Result<Emitter, CliError> {
        let c = self.config;
        let profile = c.profile()?;
        let spec = c.spec()?;
        let s = pullback_attractor_sample(c.time.t, &profile, spec, &c.pullback_config()?, self.exec)?;
        let gaps: Vec<[f64; 2]> = s.gap_history.iter().map(|(d, g)| [*d, *g]).collect();
        let mut out = self.emitter(json!({
            "dt": c.time.dt,
            "t": s.t,
            "horizon_used": s.horizon_used,
            "depth_used": s.depth_used,
            "cauchy_gap": s.cauchy_gap,
            "seed_count": s.seed_count,
        }))?;
        out.csv("attractor", &sample_csv(s.t, &s.members))?;
        out.json(
            "attractor",
            json!({ "t": s.t, "members": states_json(&s.members), "gap_history": gaps }),
        )?;
        Ok(out)
    }

    fn asymptotic(&self) -> Result<Emitter, CliError> {
        let c = self.config;
        let profile = c.profile()?;
        let (b, omega) = profile
            .limits()
            .ok_or_else(|| CliError::Config("asymptotic needs coefficients.asymptotic = true".into()))?;
        let table = asymptotic_experiment(
            &profile,
            EquilibriumParams::new(b, omega)?,
            c.spec()?,
            &c.checkpoints()?,
            &c.pullback_config()?,
            self.exec,
        )?;
        let rows: Vec<Vec<f64>> = table
            .rows
            .iter()
            .map(|r| vec![r.t, r.dist_attractor, r.dist_gamma])
            .collect();
        let mut out = self.emitter(json!({
            "dt": c.time.dt,
            "limit": [b, omega],
            "horizon_used": table.horizon_used,
            "limit_members": table.limit_members,
        }))?;
        out.csv("asymptotic", &table_csv(&["t", "dist_attractor", "dist_gamma"], &rows))?;
        let data: Vec<Value> = table
            .rows
            .iter()
            .map(|r| json!({ "t": r.t, "dist_attractor": r.dist_attractor, "dist_gamma": r.dist_gamma, "symmetry_defect": r.symmetry_defect }))
            .collect();
        out.json("asymptotic", Value::Array(data))?;
        Ok(out)
    }

    fn verify(&self) -> Result<Emitter, CliError> {
        let c = self.config;
        let settings = VerifySettings {
            n_interior: c.grid.n_interior,
            dt: c.time.dt,
            seed: c.sampling.seed,
            exec: self.exec,
        };
        let outcomes = Verifier::new(settings)?.run_all();
        for o in &outcomes {
            println!("{o}");
        }
        let mut csv = String::from("id,name,passed,measured,threshold\n");
        for o in &outcomes {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                o.id,
                o.name.replace(' ', "_"),
                o.passed,
                crate::output::num(o.measured),
                crate::output::num(o.threshold)
            ));
        }
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        let mut out = self.emitter(json!({ "dt": c.time.dt, "failed": failed }))?;
        out.csv("verify", &csv)?;
        let data: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.id, "name": o.name, "passed": o.passed,
                    // non-finite measurements (errors) are recorded as null
                    "measured": if o.measured.is_finite() { json!(o.measured) } else { Value::Null },
                    "threshold": o.threshold, "detail": o.detail,
                })
            })
            .collect();
        out.json("verify", Value::Array(data))?;
        if failed > 0 {
            return Err(CliError::Verify {
                failed,
                total: outcomes.len(),
            });
        }
        Ok(out)
    }
}
