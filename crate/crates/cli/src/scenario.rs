//! Experiment configuration: a TOML file with `[system]`, `[charger]`,
//! `[reservoir]`, `[schedule]` and `[run]` sections, overridable by flags.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

/// Parses an angle such as `1.2`, `pi`, `-pi/2`, `2pi/3`, `0.46*pi`.
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("cannot parse angle '{text}'"));
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s.as_str(), None),
    };
    let numerator = match num.strip_suffix("pi").or_else(|| num.strip_suffix("π")) {
        Some(coef) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let value = match den {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            numerator / d
        }
        None => numerator,
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Theta,
    Delta,
    R,
    /// `N_C = N_B = N`.
    Size,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Theta => "theta",
            SweepAxis::Delta => "delta",
            SweepAxis::R => "r",
            SweepAxis::Size => "n",
        }
    }
}

/// Closed interval sampled at `count` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Sweep {
    /// `axis:start:stop:count`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let [axis, start, stop, count] = parts[..] else {
            return Err(CliError::Config(format!(
                "sweep '{text}' is not axis:start:stop:count"
            )));
        };
        let axis = match axis.trim().to_lowercase().as_str() {
            "theta" => SweepAxis::Theta,
            "delta" => SweepAxis::Delta,
            "r" => SweepAxis::R,
            "n" | "size" => SweepAxis::Size,
            other => return Err(CliError::Config(format!("unknown sweep axis '{other}'"))),
        };
        let count: usize = count.trim().parse().map_err(|_| {
            CliError::Config(format!("sweep count '{count}' is not a positive integer"))
        })?;
        let sweep = Sweep {
            axis,
            start: parse_angle(start)?,
            stop: parse_angle(stop)?,
            count,
        };
        sweep.validate()?;
        Ok(sweep)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::Config("sweep needs at least one point".into()));
        }
        if self.count == 1 && self.start != self.stop {
            return Err(CliError::Config(
                "a one-point sweep needs start = stop".into(),
            ));
        }
        if self.axis == SweepAxis::Size {
            let ok = |x: f64| x >= 1.0 && x.fract() == 0.0;
            let step = if self.count > 1 {
                (self.stop - self.start) / (self.count - 1) as f64
            } else {
                0.0
            };
            if !ok(self.start) || !ok(self.stop) || step.fract() != 0.0 {
                return Err(CliError::Config(
                    "size sweep must visit positive integers only".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + h * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(CliError::Config(format!("unknown output format '{other}'"))),
        }
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n_c: usize,
    pub n_b: usize,
    pub theta: f64,
    pub phi: f64,
    pub r: f64,
    pub varphi: f64,
    pub gamma: f64,
    /// Quench time; infinite for continuous squeezing.
    pub t_q: f64,
    pub t_end: f64,
    pub grid: usize,
    pub sweep: Option<Sweep>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            n_c: 4,
            n_b: 4,
            theta: 0.0,
            phi: 0.0,
            r: 0.0,
            varphi: 0.0,
            gamma: 1.0,
            t_q: f64::INFINITY,
            t_end: 10.0,
            grid: 400,
            sweep: None,
        }
    }
}

impl Scenario {
    /// Relative phase `varphi − 2φ`.
    pub fn delta(&self) -> f64 {
        self.varphi - 2.0 * self.phi
    }

    /// Fixes the relative phase directly; the charger phase is set to zero.
    pub fn set_delta(&mut self, delta: f64) {
        self.phi = 0.0;
        self.varphi = delta;
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Config(m));
        if self.n_c == 0 || self.n_b == 0 {
            return fail("spin counts must be positive".into());
        }
        for (name, v) in [
            ("theta", self.theta),
            ("phi", self.phi),
            ("varphi", self.varphi),
        ] {
            if !v.is_finite() {
                return fail(format!("{name} must be finite"));
            }
        }
        if !(0.0..=PI + 1e-12).contains(&self.theta) {
            return fail(format!("theta {} outside [0, pi]", self.theta));
        }
        if !(self.r >= 0.0) || !self.r.is_finite() {
            return fail(format!("r must be finite and non-negative, got {}", self.r));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.t_q >= 0.0) {
            return fail(format!(
                "quench time must be non-negative, got {}",
                self.t_q
            ));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return fail(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.grid < 3 {
            return fail(format!("grid needs at least 3 points, got {}", self.grid));
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
            let values = s.values();
            match s.axis {
                SweepAxis::Theta if values.iter().any(|t| !(0.0..=PI + 1e-12).contains(t)) => {
                    return fail("theta sweep leaves [0, pi]".into())
                }
                SweepAxis::R if values.iter().any(|r| *r < 0.0) => {
                    return fail("r sweep goes negative".into())
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Copy of the scenario with the sweep axis set to `value`.
    pub fn at(&self, axis: SweepAxis, value: f64) -> Scenario {
        let mut s = self.clone();
        s.sweep = None;
        match axis {
            SweepAxis::Theta => s.theta = value.clamp(0.0, PI),
            SweepAxis::Delta => s.set_delta(value),
            SweepAxis::R => s.r = value,
            SweepAxis::Size => {
                s.n_c = value.round() as usize;
                s.n_b = s.n_c;
            }
        }
        s
    }
}

/// Number or angle expression in a config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl Value {
    fn angle(&self) -> Result<f64, CliError> {
        match self {
            Value::Number(x) => Ok(*x),
            Value::Text(t) => parse_angle(t),
        }
    }

    fn time(&self) -> Result<f64, CliError> {
        match self {
            Value::Text(t)
                if matches!(
                    t.trim().to_lowercase().as_str(),
                    "inf" | "infinity" | "none"
                ) =>
            {
                Ok(f64::INFINITY)
            }
            Value::Text(t) => t
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("cannot parse time '{t}'"))),
            Value::Number(x) => Ok(*x),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Subcommand to run; used by the golden-data suite.
    pub command: Option<String>,
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub charger: ChargerSection,
    #[serde(default)]
    pub reservoir: ReservoirSection,
    #[serde(default)]
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub nc: Option<usize>,
    pub nb: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargerSection {
    pub theta: Option<Value>,
    pub phi: Option<Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirSection {
    pub r: Option<f64>,
    pub varphi: Option<Value>,
    pub delta: Option<Value>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub tq: Option<Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_end: Option<f64>,
    pub grid: Option<usize>,
    pub sweep: Option<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Raw overrides, as given on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub nc: Option<usize>,
    pub nb: Option<usize>,
    pub theta: Option<String>,
    pub phi: Option<String>,
    pub delta: Option<String>,
    pub r: Option<f64>,
    pub varphi: Option<String>,
    pub gamma: Option<f64>,
    pub tq: Option<String>,
    pub t_end: Option<f64>,
    pub grid: Option<usize>,
    pub sweep: Option<String>,
}

/// Defaults, then the config file, then flags. A relative phase from either
/// source wins over `phi`/`varphi` and zeroes `phi`.
pub fn resolve(file: Option<&ConfigFile>, flags: &Overrides) -> Result<Scenario, CliError> {
    let mut s = Scenario::default();
    let mut delta = None;
    if let Some(f) = file {
        s.n_c = f.system.nc.unwrap_or(s.n_c);
        s.n_b = f.system.nb.unwrap_or(s.n_b);
        if let Some(v) = &f.charger.theta {
            s.theta = v.angle()?;
        }
        if let Some(v) = &f.charger.phi {
            s.phi = v.angle()?;
        }
        s.r = f.reservoir.r.unwrap_or(s.r);
        if let Some(v) = &f.reservoir.varphi {
            s.varphi = v.angle()?;
        }
        if let Some(v) = &f.reservoir.delta {
            delta = Some(v.angle()?);
        }
        s.gamma = f.reservoir.gamma.unwrap_or(s.gamma);
        if let Some(v) = &f.schedule.tq {
            s.t_q = v.time()?;
        }
        s.t_end = f.run.t_end.unwrap_or(s.t_end);
        s.grid = f.run.grid.unwrap_or(s.grid);
        if let Some(text) = &f.run.sweep {
            s.sweep = Some(Sweep::parse(text)?);
        }
    }
    s.n_c = flags.nc.unwrap_or(s.n_c);
    s.n_b = flags.nb.unwrap_or(s.n_b);
    if let Some(t) = &flags.theta {
        s.theta = parse_angle(t)?;
    }
    if let Some(t) = &flags.phi {
        s.phi = parse_angle(t)?;
    }
    if let Some(t) = &flags.varphi {
        s.varphi = parse_angle(t)?;
    }
    if let Some(t) = &flags.delta {
        delta = Some(parse_angle(t)?);
    }
    s.r = flags.r.unwrap_or(s.r);
    s.gamma = flags.gamma.unwrap_or(s.gamma);
    if let Some(t) = &flags.tq {
        s.t_q = Value::Text(t.clone()).time()?;
    }
    s.t_end = flags.t_end.unwrap_or(s.t_end);
    s.grid = flags.grid.unwrap_or(s.grid);
    if let Some(text) = &flags.sweep {
        s.sweep = Some(Sweep::parse(text)?);
    }
    if let Some(d) = delta {
        s.set_delta(d);
    }
    s.validate()?;
    Ok(s)
}
