//! Scenario configuration: a TOML file with one table per section, where any
//! key can be overridden from the command line by a flag of the same name.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use pullback_lab::lab::{HorizonSchedule, PullbackConfig, SeedFamily};
use pullback_lab::{CoefficientBounds, CoefficientProfile, GridSpec, Schedule, SelectionPolicy};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Equilibria,
    Simulate,
    Extremal,
    Pullback,
    Asymptotic,
    Verify,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Equilibria => "equilibria",
            Kind::Simulate => "simulate",
            Kind::Extremal => "extremal",
            Kind::Pullback => "pullback",
            Kind::Asymptotic => "asymptotic",
            Kind::Verify => "verify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "both" => Ok(Format::Both),
            other => Err(format!("unknown format {other:?} (expected csv, json or both)")),
        }
    }
}

/// A list given either as an array or as one comma-separated string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ListOrText<T> {
    List(Vec<T>),
    Text(String),
}

impl<T: FromStr> ListOrText<T>
where
    T::Err: fmt::Display,
{
    fn items(&self, key: &str) -> Result<Vec<T>, CliError>
    where
        T: Clone,
    {
        match self {
            ListOrText::List(v) => Ok(v.clone()),
            ListOrText::Text(s) => s
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().map_err(|e| CliError::Config(format!("{key}: {p:?}: {e}"))))
                .collect(),
        }
    }
}

/// A bare number means a constant schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Value(f64),
    Full(Schedule),
}

impl ScheduleSpec {
    fn schedule(&self) -> Schedule {
        match self {
            ScheduleSpec::Value(v) => Schedule::constant(*v),
            ScheduleSpec::Full(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub kind: Option<Kind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n_interior: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n_interior: 63 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    pub dt: f64,
    /// `simulate`: integration interval.
    pub t_start: f64,
    pub t_end: f64,
    /// `extremal`: window.
    pub t_min: f64,
    pub t_max: f64,
    /// `pullback`: sample time.
    pub t: f64,
    /// `asymptotic`: checkpoints.
    pub checkpoints: ListOrText<f64>,
    /// Keep every k-th state of stored trajectories.
    pub save_every: usize,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_start: 0.0,
            t_end: 1.0,
            t_min: 0.0,
            t_max: 1.0,
            t: 0.0,
            checkpoints: ListOrText::List(vec![0.0, 5.0, 10.0, 20.0]),
            save_every: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoefficientsSection {
    pub b: ScheduleSpec,
    pub omega: ScheduleSpec,
    /// Explicit bounds; all four or none (then the schedule ranges are used).
    pub b0: Option<f64>,
    pub b1: Option<f64>,
    pub omega0: Option<f64>,
    pub omega1: Option<f64>,
    /// Declare the schedules' `t → ∞` values as asymptotic limits.
    pub asymptotic: bool,
}

impl Default for CoefficientsSection {
    fn default() -> Self {
        Self {
            b: ScheduleSpec::Value(1.0),
            omega: ScheduleSpec::Value(0.0),
            b0: None,
            b1: None,
            omega0: None,
            omega1: None,
            asymptotic: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelectionSection {
    /// `upper`, `lower`, `zero`, `random_switch[:seed]`; a bare
    /// `random_switch` takes the sampling seed.
    pub policies: ListOrText<String>,
}

impl Default for SelectionSection {
    fn default() -> Self {
        let names = ["upper", "lower", "zero", "random_switch"];
        Self {
            policies: ListOrText::List(names.iter().map(|s| s.to_string()).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub n_seeds: usize,
    pub seed: u64,
    pub margin: f64,
}

impl Default for SamplingSection {
    fn default() -> Self {
        Self {
            n_seeds: 20,
            seed: pullback_lab::verify::DEFAULT_SEED,
            margin: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TolerancesSection {
    pub tol: f64,
    /// Doubling horizon: `horizon_initial · 2^k`, `k < horizon_levels`.
    pub horizon_initial: f64,
    pub horizon_levels: usize,
}

impl Default for TolerancesSection {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            horizon_initial: 1.0,
            horizon_levels: 9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Zero,
    /// `amplitude` at every node.
    Constant,
    /// `amplitude · sin(π x)`.
    Sine,
    /// The discrete equilibrium for the upper coefficient bounds.
    Equilibrium,
    /// Explicit `values`.
    Values,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    pub datum: InitialKind,
    pub amplitude: f64,
    pub values: Option<Vec<f64>>,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self {
            datum: InitialKind::Sine,
            amplitude: 1.0,
            values: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario: ScenarioSection,
    pub grid: GridSection,
    pub time: TimeSection,
    pub coefficients: CoefficientsSection,
    pub selection: SelectionSection,
    pub sampling: SamplingSection,
    pub tolerances: TolerancesSection,
    pub initial: InitialSection,
    pub output: OutputSection,
}

/// `(section, key)` for every configurable field; keys are unique, so a
/// flag `--key` names exactly one of them.
pub const KEYS: &[(&str, &str)] = &[
    ("scenario", "kind"),
    ("grid", "n_interior"),
    ("time", "dt"),
    ("time", "t_start"),
    ("time", "t_end"),
    ("time", "t_min"),
    ("time", "t_max"),
    ("time", "t"),
    ("time", "checkpoints"),
    ("time", "save_every"),
    ("coefficients", "b"),
    ("coefficients", "omega"),
    ("coefficients", "b0"),
    ("coefficients", "b1"),
    ("coefficients", "omega0"),
    ("coefficients", "omega1"),
    ("coefficients", "asymptotic"),
    ("selection", "policies"),
    ("sampling", "n_seeds"),
    ("sampling", "seed"),
    ("sampling", "margin"),
    ("tolerances", "tol"),
    ("tolerances", "horizon_initial"),
    ("tolerances", "horizon_levels"),
    ("initial", "datum"),
    ("initial", "amplitude"),
    ("initial", "values"),
    ("output", "dir"),
    ("output", "format"),
];

fn section_of(key: &str) -> Result<(&'static str, &'static str), CliError> {
    let (section, key) = match key.split_once('.') {
        Some((s, k)) => (Some(s), k),
        None => (None, key),
    };
    KEYS.iter()
        .copied()
        .find(|(s, k)| *k == key && section.is_none_or(|want| want == *s))
        .ok_or_else(|| CliError::Config(format!("unknown configuration key {key:?}")))
}

/// Reads a raw value as TOML (numbers, booleans, arrays, inline tables);
/// anything else is taken as a string.
fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

pub fn set(table: &mut toml::Table, key: &str, raw: &str) -> Result<(), CliError> {
    let (section, key) = section_of(key)?;
    let entry = table
        .entry(section)
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let toml::Value::Table(sec) = entry else {
        return Err(CliError::Config(format!("[{section}] is not a table")));
    };
    sec.insert(key.to_string(), parse_value(raw));
    Ok(())
}

/// Splits trailing `--key value` / `--key=value` pairs.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(flag) = arg.strip_prefix("--") else {
            return Err(CliError::Config(format!(
                "unexpected argument {arg:?}; overrides look like --key value"
            )));
        };
        match flag.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| CliError::Config(format!("--{flag} needs a value")))?;
                out.push((flag.to_string(), v.clone()));
            }
        }
    }
    Ok(out)
}

/// Loads `path` (or the defaults), applies overrides in order and checks the
/// result against the schema. Errors name the file, line or key at fault.
pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<ScenarioConfig, CliError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            toml::from_str::<toml::Table>(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for (k, v) in overrides {
        set(&mut table, k, v)?;
    }
    let origin = path.map_or_else(|| "configuration".to_string(), |p| p.display().to_string());
    ScenarioConfig::deserialize(toml::Value::Table(table))
        .map_err(|e| CliError::Config(format!("{origin}: {}", e.to_string().trim_end())))
}

impl ScenarioConfig {
    pub fn spec(&self) -> Result<GridSpec, CliError> {
        Ok(GridSpec::new(self.grid.n_interior)?)
    }

    pub fn profile(&self) -> Result<CoefficientProfile, CliError> {
        let c = &self.coefficients;
        let (b, omega) = (c.b.schedule(), c.omega.schedule());
        let explicit = [c.b0, c.b1, c.omega0, c.omega1];
        let profile = match explicit {
            [None, None, None, None] => CoefficientProfile::with_tight_bounds(b, omega, c.asymptotic)?,
            [Some(b0), Some(b1), Some(omega0), Some(omega1)] => {
                let limits = c.asymptotic.then(|| (b.limit(), omega.limit()));
                CoefficientProfile::new(b, omega, CoefficientBounds { b0, b1, omega0, omega1 }, limits)?
            }
            _ => {
                return Err(CliError::Config(
                    "give all of b0, b1, omega0, omega1 or none of them".into(),
                ))
            }
        };
        Ok(profile)
    }

    pub fn policies(&self) -> Result<Vec<SelectionPolicy>, CliError> {
        let names = self.selection.policies.items("policies")?;
        if names.is_empty() {
            return Err(CliError::Config("policies: at least one policy is required".into()));
        }
        names
            .iter()
            .map(|n| match n.trim() {
                "random_switch" => Ok(SelectionPolicy::random_switch(self.sampling.seed)),
                "random_switch_mirrored" => Ok(SelectionPolicy::RandomSwitch {
                    seed: self.sampling.seed,
                    mirrored: true,
                }),
                other => other.parse().map_err(|e| CliError::Config(format!("policies: {e}"))),
            })
            .collect()
    }

    pub fn checkpoints(&self) -> Result<Vec<f64>, CliError> {
        self.time.checkpoints.items("checkpoints")
    }

    pub fn horizon(&self) -> Result<HorizonSchedule, CliError> {
        let t = &self.tolerances;
        Ok(HorizonSchedule::doubling(t.horizon_initial, t.horizon_levels)?)
    }

    pub fn pullback_config(&self) -> Result<PullbackConfig, CliError> {
        let s = &self.sampling;
        Ok(PullbackConfig {
            dt: self.time.dt,
            seeds: SeedFamily::Random {
                n_seeds: s.n_seeds,
                seed: s.seed,
                margin: s.margin,
            },
            policies: self.policies()?,
            horizon: self.horizon()?,
            tol: self.tolerances.tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(overrides: &[(&str, &str)]) -> Result<ScenarioConfig, CliError> {
        let o: Vec<(String, String)> = overrides.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        load(None, &o)
    }

    #[test]
    fn keys_are_unique() {
        for (i, (_, k)) in KEYS.iter().enumerate() {
            assert!(KEYS[i + 1..].iter().all(|(_, other)| other != k), "{k}");
        }
    }

    #[test]
    fn overrides_reach_their_section() {
        let c = with(&[
            ("n_interior", "7"),
            ("b", "2.5"),
            ("grid.n_interior", "9"),
            ("format", "both"),
        ])
        .unwrap();
        assert_eq!(c.grid.n_interior, 9);
        assert_eq!(c.coefficients.b, ScheduleSpec::Value(2.5));
        assert_eq!(c.output.format, Format::Both);
    }

    #[test]
    fn schedules_as_inline_tables() {
        let c = with(&[("b", "{ kind = \"exp_approach\", limit = 1, amplitude = 1, rate = 1 }")]).unwrap();
        let p = c.profile().unwrap();
        assert_eq!(p.bounds().b1, 2.0);
    }

    #[test]
    fn lists_from_text() {
        let c = with(&[
            ("policies", "upper, random_switch"),
            ("checkpoints", "0,1.5"),
            ("seed", "4"),
        ])
        .unwrap();
        assert_eq!(
            c.policies().unwrap(),
            vec![SelectionPolicy::Upper, SelectionPolicy::random_switch(4)]
        );
        assert_eq!(c.checkpoints().unwrap(), vec![0.0, 1.5]);
    }

    #[test]
    fn errors_name_the_culprit() {
        let e = with(&[("n_interor", "3")]).unwrap_err().to_string();
        assert!(e.contains("n_interor"), "{e}");
        let e = with(&[("dt", "\"fast\"")]).unwrap_err().to_string();
        assert!(e.contains("dt"), "{e}");
        let e = with(&[("b0", "1")]).unwrap().profile().unwrap_err().to_string();
        assert!(e.contains("b0"), "{e}");
        assert!(parse_overrides(&["--dt".into()]).is_err());
        assert!(parse_overrides(&["dt".into(), "1".into()]).is_err());
    }

    #[test]
    fn override_syntax() {
        let args: Vec<String> = ["--dt", "0.01", "--b=2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            parse_overrides(&args).unwrap(),
            vec![("dt".into(), "0.01".into()), ("b".into(), "2".into())]
        );
    }
}
