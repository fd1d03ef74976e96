//! Time evolution under the squeezed-reservoir generator, observable series
//! and charging power.

pub mod integrator;

use rayon::prelude::*;

use crate::density::{Basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::geometry::SystemGeometry;
use crate::linalg::CMatrix;
use crate::metrics::{report, BatteryHamiltonian, ErgotropyReport};
use crate::reservoir::{jump_operator, CompactGenerator, ReservoirParams};
use integrator::{Dopri5, Tolerances};

pub const DEFAULT_T_END: f64 = 10.0;
pub const DEFAULT_GRID: usize = 400;
/// Open-ended runs stop once `‖dρ/dt‖_F` stays below this for one time unit.
pub const STEADY_DERIVATIVE_TOL: f64 = 1e-10;

/// Squeezing `r_initial` for `t < t_q`, vacuum afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSchedule {
    pub r_initial: f64,
    pub t_q: f64,
}

impl QuenchSchedule {
    pub fn new(r_initial: f64, t_q: f64) -> Result<Self> {
        if !(t_q >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quench time must be non-negative, got {t_q}"
            )));
        }
        if !(r_initial >= 0.0) || !r_initial.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squeezing strength must be finite and non-negative, got {r_initial}"
            )));
        }
        Ok(Self { r_initial, t_q })
    }

    /// Squeezing kept on for the whole run.
    pub fn continuous(r: f64) -> Result<Self> {
        Self::new(r, f64::INFINITY)
    }

    pub fn r_at(&self, t: f64) -> f64 {
        if t < self.t_q {
            self.r_initial
        } else {
            0.0
        }
    }
}

/// `n` equally spaced times covering `[0, t_end]`, both ends included.
pub fn uniform_grid(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "output grid needs at least 2 points, got {n}"
        )));
    }
    Ok((0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect())
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Product-basis states at `times`.
    pub states: Vec<DensityMatrix>,
    pub geometry: SystemGeometry,
}

fn generator(
    geometry: &SystemGeometry,
    params: &ReservoirParams,
    r: f64,
) -> Result<CompactGenerator> {
    let (jp, jm) = geometry.collective_product();
    let p = params.with_r(r)?;
    Ok(CompactGenerator::new(jump_operator(&p, &jp, &jm)?, p.gamma))
}

/// Largest step kept well inside the real-axis stability interval of the
/// Dormand–Prince pair (about 3.3).
const STABILITY_FRACTION: f64 = 2.5;

fn stepper<'a>(
    gen: &'a CompactGenerator,
    t0: f64,
    y0: CMatrix,
) -> Result<Dopri5<impl Fn(&CMatrix) -> CMatrix + 'a>> {
    let bound = gen.spectral_bound()?;
    let s = Dopri5::new(
        move |m: &CMatrix| gen.apply(m),
        t0,
        y0,
        Tolerances::default(),
    );
    Ok(if bound > 0.0 {
        s.with_max_step(STABILITY_FRACTION / bound)
    } else {
        s
    })
}

fn check_grid(grid: &[f64], t_end: f64) -> Result<()> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("output grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "output times must be strictly increasing".into(),
        ));
    }
    if grid[0] < 0.0 || grid[grid.len() - 1] > t_end {
        return Err(Error::InvalidParameter(
            "output times must lie within [0, t_end]".into(),
        ));
    }
    Ok(())
}

/// Integrates from `t = 0` and records the state at every `grid` time. The
/// generator switches from `schedule.r_initial` to vacuum exactly at `t_q`.
pub fn evolve(
    rho0: &DensityMatrix,
    geometry: &SystemGeometry,
    params: &ReservoirParams,
    schedule: &QuenchSchedule,
    t_end: f64,
    grid: &[f64],
) -> Result<Trajectory> {
    check_grid(grid, t_end)?;
    if (schedule.r_initial - params.r).abs() > 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "schedule squeezing {} differs from reservoir squeezing {}",
            schedule.r_initial, params.r
        )));
    }
    let start = geometry.in_basis(rho0, Basis::Product)?;
    let dims = Some(geometry.dims());

    let mut segments = vec![(0.0, schedule.t_q.min(t_end), schedule.r_initial)];
    if schedule.t_q < t_end {
        segments.push((schedule.t_q, t_end, 0.0));
    }

    let mut states = Vec::with_capacity(grid.len());
    let mut y = start.into_data();
    let mut next = 0;
    for (seg_start, seg_end, r) in segments {
        let gen = generator(geometry, params, r)?;
        let mut stepper = stepper(&gen, seg_start, y)?;
        while next < grid.len() && grid[next] <= seg_end {
            stepper.advance_to(grid[next])?;
            states.push(DensityMatrix::from_parts(
                stepper.state().clone(),
                Basis::Product,
                dims,
            )?);
            next += 1;
        }
        stepper.advance_to(seg_end)?;
        y = stepper.state().clone();
    }
    debug_assert_eq!(states.len(), grid.len());
    Ok(Trajectory {
        times: grid.to_vec(),
        states,
        geometry: geometry.clone(),
    })
}

/// Runs with continuous squeezing until `‖dρ/dt‖_F < 1e-10` has held for one
/// time unit. Returns the product-basis state and the stopping time.
pub fn evolve_to_steady(
    rho0: &DensityMatrix,
    geometry: &SystemGeometry,
    params: &ReservoirParams,
    t_max: f64,
) -> Result<(DensityMatrix, f64)> {
    let start = geometry.in_basis(rho0, Basis::Product)?;
    let gen = generator(geometry, params, params.r)?;
    let mut stepper = stepper(&gen, 0.0, start.into_data())?;
    let mut quiet_since: Option<f64> = None;
    while stepper.t() < t_max {
        stepper.step_toward(t_max)?;
        if stepper.derivative().norm() < STEADY_DERIVATIVE_TOL {
            let since = *quiet_since.get_or_insert(stepper.t());
            if stepper.t() - since >= 1.0 {
                let rho = DensityMatrix::from_parts(
                    stepper.state().clone(),
                    Basis::Product,
                    Some(geometry.dims()),
                )?;
                return Ok((rho, stepper.t()));
            }
        } else {
            quiet_since = None;
        }
    }
    Err(Error::NotConverged(t_max))
}

/// Per-time battery metrics. Energy and ergotropies are per battery spin.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub ergotropy: Vec<f64>,
    pub incoherent: Vec<f64>,
    pub coherent: Vec<f64>,
    pub coherence: Vec<f64>,
    pub log_negativity: Vec<f64>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn from_reports(times: Vec<f64>, reports: &[ErgotropyReport]) -> Self {
        Self {
            times,
            energy: reports.iter().map(|r| r.energy_per_spin()).collect(),
            ergotropy: reports.iter().map(|r| r.ergotropy_per_spin()).collect(),
            incoherent: reports.iter().map(|r| r.incoherent_per_spin()).collect(),
            coherent: reports.iter().map(|r| r.coherent_per_spin()).collect(),
            coherence: reports.iter().map(|r| r.coherence).collect(),
            log_negativity: reports.iter().map(|r| r.log_negativity).collect(),
        }
    }
}

/// Metrics at every trajectory point, evaluated in parallel.
pub fn observables_along(
    trajectory: &Trajectory,
    hamiltonian: &BatteryHamiltonian,
) -> Result<ObservableSeries> {
    let reports = trajectory
        .states
        .par_iter()
        .map(|rho| report(rho, &trajectory.geometry, hamiltonian))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableSeries::from_reports(
        trajectory.times.clone(),
        &reports,
    ))
}

/// Second-order finite-difference derivative on a possibly non-uniform
/// grid: centered in the interior, one-sided three-point at the ends.
pub fn derivative(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let n = times.len();
    if n < 3 || values.len() != n {
        return Err(Error::SeriesTooShort(n.min(values.len())));
    }
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let (h1, h2) = (times[i] - times[i - 1], times[i + 1] - times[i]);
        out[i] = (h1 * h1 * values[i + 1] - h2 * h2 * values[i - 1]
            + (h2 * h2 - h1 * h1) * values[i])
            / (h1 * h2 * (h1 + h2));
    }
    let one_sided = |t: [f64; 3], v: [f64; 3]| {
        // derivative at t[0] of the parabola through the three points
        let (h1, h2) = (t[1] - t[0], t[2] - t[0]);
        (-(h1 + h2) / (h1 * h2)) * v[0] + (h2 / (h1 * (h2 - h1))) * v[1]
            - (h1 / (h2 * (h2 - h1))) * v[2]
    };
    out[0] = one_sided(
        [times[0], times[1], times[2]],
        [values[0], values[1], values[2]],
    );
    out[n - 1] = one_sided(
        [times[n - 1], times[n - 2], times[n - 3]],
        [values[n - 1], values[n - 2], values[n - 3]],
    );
    Ok(out)
}

/// Maximum over grid points with `t > 0`, refined by the parabola through
/// the neighbouring points when the maximum is interior.
pub fn refined_maximum(times: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    let n = times.len();
    if n < 3 || values.len() != n {
        return Err(Error::SeriesTooShort(n.min(values.len())));
    }
    let first = times.iter().position(|&t| t > 0.0).unwrap_or(0);
    let mut k = first;
    for i in first..n {
        if values[i] > values[k] {
            k = i;
        }
    }
    if k == 0 || k + 1 >= n {
        return Ok((times[k], values[k]));
    }
    let (t0, t1, t2) = (times[k - 1], times[k], times[k + 1]);
    let (v0, v1, v2) = (values[k - 1], values[k], values[k + 1]);
    let d1 = (v1 - v0) / (t1 - t0);
    let d2 = (v2 - v1) / (t2 - t1);
    let curvature = (d2 - d1) / (t2 - t0);
    if !(curvature < 0.0) {
        return Ok((t1, v1));
    }
    // v(t) = v1 + b (t − t1) + curvature (t − t1)²
    let b = d1 + curvature * (t1 - t0);
    // never refine back onto t ≤ 0
    let lo = if k - 1 < first { t1 } else { t0 };
    let t_star = (t1 - b / (2.0 * curvature)).clamp(lo, t2);
    let v_star = v1 + b * (t_star - t1) + curvature * (t_star - t1).powi(2);
    Ok((t_star, v_star.max(v1)))
}

/// Charging powers `dW_B/dt`, `dE_B/dt` (per battery spin) and their maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSummary {
    pub ergotropy_power: Vec<f64>,
    pub energy_power: Vec<f64>,
    pub max_ergotropy_power: f64,
    pub t_max_ergotropy_power: f64,
    pub max_energy_power: f64,
    pub t_max_energy_power: f64,
}

pub fn charging_power(series: &ObservableSeries) -> Result<PowerSummary> {
    let pw = derivative(&series.times, &series.ergotropy)?;
    let pe = derivative(&series.times, &series.energy)?;
    let (tw, w) = refined_maximum(&series.times, &pw)?;
    let (te, e) = refined_maximum(&series.times, &pe)?;
    Ok(PowerSummary {
        ergotropy_power: pw,
        energy_power: pe,
        max_ergotropy_power: w,
        t_max_ergotropy_power: tw,
        max_energy_power: e,
        t_max_energy_power: te,
    })
}
