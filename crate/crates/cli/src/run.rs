//! Experiment runners. Sweep points are evaluated in parallel and gathered
//! in sweep order; the first failing point (in that order) is reported.

use battery_core::dynamics::{
    charging_power, evolve, observables_along, uniform_grid, QuenchSchedule,
};
use battery_core::metrics::{report, BatteryHamiltonian};
use battery_core::{initial_state, squeezing_params, steady_state, ChargerPrep, SystemGeometry};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::scenario::{Scenario, Sweep, SweepAxis};
use crate::table::{Table, DYNAMICS_COLUMNS, POWER_COLUMNS, STEADY_COLUMNS};

fn describe(s: &Scenario) -> String {
    format!(
        "N_C={} N_B={} theta={} phi={} r={} varphi={} t_q={}",
        s.n_c, s.n_b, s.theta, s.phi, s.r, s.varphi, s.t_q
    )
}

/// Steady-state metrics `[E_B, W_B, W_B_P, W_B_C, C_B, S_B]`.
pub fn steady_point(s: &Scenario) -> battery_core::Result<[f64; 6]> {
    let g = SystemGeometry::new(s.n_c, s.n_b)?;
    let p = squeezing_params(s.r, s.varphi, s.gamma)?;
    let rho0 = initial_state(&g, &ChargerPrep::new(s.theta, s.phi)?)?;
    let ss = steady_state(&rho0, &g, &p)?;
    let rep = report(&ss, &g, &BatteryHamiltonian::battery(s.n_b))?;
    Ok([
        rep.energy_per_spin(),
        rep.ergotropy_per_spin(),
        rep.incoherent_per_spin(),
        rep.coherent_per_spin(),
        rep.coherence,
        rep.log_negativity,
    ])
}

/// Runs `f` at every sweep point (or once, at the scenario itself).
fn fan_out<T: Send>(
    s: &Scenario,
    f: impl Fn(&Scenario) -> battery_core::Result<T> + Sync,
) -> Result<Vec<(f64, T)>, CliError> {
    let points: Vec<(f64, Scenario)> = match s.sweep {
        Some(sweep) => sweep
            .values()
            .into_iter()
            .map(|v| (v, s.at(sweep.axis, v)))
            .collect(),
        None => vec![(s.theta, s.clone())],
    };
    let results: Vec<_> = points.par_iter().map(|(_, p)| f(p)).collect();
    points
        .into_iter()
        .zip(results)
        .map(|((v, p), r)| {
            r.map(|x| (v, x))
                .map_err(|e| CliError::numerical(describe(&p), e))
        })
        .collect()
}

/// One row per sweep point. Without a sweep the single row carries `theta`
/// as its sweep value.
pub fn run_steady_sweep(s: &Scenario) -> Result<Table, CliError> {
    let mut table = Table::new(&STEADY_COLUMNS);
    for (v, m) in fan_out(s, steady_point)? {
        let mut row = vec![v];
        row.extend(m);
        table.push(row);
    }
    Ok(table)
}

/// Peak charging powers of one run; the JSON sidecar of a dynamics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub n_c: usize,
    pub n_b: usize,
    pub theta: f64,
    pub delta: f64,
    pub r: f64,
    /// `None` for continuous squeezing.
    pub t_q: Option<f64>,
    pub max_ergotropy_power: f64,
    pub t_max_ergotropy_power: f64,
    pub max_energy_power: f64,
    pub t_max_energy_power: f64,
}

#[derive(Debug, Clone)]
pub struct DynamicsRun {
    pub table: Table,
    pub power: PowerReport,
}

fn dynamics(s: &Scenario) -> battery_core::Result<DynamicsRun> {
    let g = SystemGeometry::new(s.n_c, s.n_b)?;
    let p = squeezing_params(s.r, s.varphi, s.gamma)?;
    let rho0 = initial_state(&g, &ChargerPrep::new(s.theta, s.phi)?)?;
    let grid = uniform_grid(s.t_end, s.grid)?;
    let schedule = QuenchSchedule::new(s.r, s.t_q)?;
    let traj = evolve(&rho0, &g, &p, &schedule, s.t_end, &grid)?;
    let obs = observables_along(&traj, &BatteryHamiltonian::battery(s.n_b))?;
    let power = charging_power(&obs)?;
    let mut table = Table::new(&DYNAMICS_COLUMNS);
    for i in 0..obs.len() {
        table.push(vec![
            obs.times[i],
            obs.energy[i],
            obs.ergotropy[i],
            obs.incoherent[i],
            obs.coherent[i],
            obs.coherence[i],
            obs.log_negativity[i],
        ]);
    }
    Ok(DynamicsRun {
        table,
        power: PowerReport {
            n_c: s.n_c,
            n_b: s.n_b,
            theta: s.theta,
            delta: s.delta(),
            r: s.r,
            t_q: s.t_q.is_finite().then_some(s.t_q),
            max_ergotropy_power: power.max_ergotropy_power,
            t_max_ergotropy_power: power.t_max_ergotropy_power,
            max_energy_power: power.max_energy_power,
            t_max_energy_power: power.t_max_energy_power,
        },
    })
}

/// Time series of a single scenario; a sweep is not allowed here.
pub fn run_dynamics(s: &Scenario) -> Result<DynamicsRun, CliError> {
    if s.sweep.is_some() {
        return Err(CliError::Config(
            "evolve runs a single scenario; use power-scaling to sweep".into(),
        ));
    }
    dynamics(s).map_err(|e| CliError::numerical(describe(s), e))
}

/// Peak charging powers along a sweep (by default over system size).
pub fn run_power_sweep(s: &Scenario) -> Result<Table, CliError> {
    let mut s = s.clone();
    if s.sweep.is_none() {
        s.sweep = Some(Sweep {
            axis: SweepAxis::Size,
            start: 1.0,
            stop: 6.0,
            count: 6,
        });
    }
    let mut table = Table::new(&POWER_COLUMNS);
    for (v, run) in fan_out(&s, |p| dynamics(p).map(|d| d.power))? {
        table.push(vec![
            v,
            run.max_ergotropy_power,
            run.t_max_ergotropy_power,
            run.max_energy_power,
            run.t_max_energy_power,
        ]);
    }
    Ok(table)
}

pub const PROTOCOLS: [&str; 3] = ["continuous", "quench", "vacuum"];

/// Continuous squeezing, squeezing switched off at `t_q`, and the vacuum
/// reservoir, in that order.
pub fn run_quench(s: &Scenario) -> Result<Vec<(&'static str, DynamicsRun)>, CliError> {
    if s.sweep.is_some() {
        return Err(CliError::Config("quench runs a single scenario".into()));
    }
    if !s.t_q.is_finite() {
        return Err(CliError::Config(
            "quench needs a finite quench time (--tq)".into(),
        ));
    }
    let mut continuous = s.clone();
    continuous.t_q = f64::INFINITY;
    let mut vacuum = continuous.clone();
    vacuum.r = 0.0;
    let cases = [continuous, s.clone(), vacuum];
    let runs: Vec<_> = cases.par_iter().map(dynamics).collect();
    PROTOCOLS
        .iter()
        .zip(cases.iter().zip(runs))
        .map(|(&name, (c, r))| {
            r.map(|d| (name, d))
                .map_err(|e| CliError::numerical(describe(c), e))
        })
        .collect()
}
