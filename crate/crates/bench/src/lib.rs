//! Fixtures shared by the benchmarks.

use battery_core::{
    initial_state, squeezing_params, ChargerPrep, DensityMatrix, ReservoirParams, SystemGeometry,
};

/// Symmetric `N_C = N_B = n` system with a spin-coherent charger at
/// `θ = π/3` and squeezing `r = 0.5`.
pub struct Fixture {
    pub geometry: SystemGeometry,
    pub params: ReservoirParams,
    pub rho0: DensityMatrix,
}

impl Fixture {
    pub fn symmetric(n: usize) -> Self {
        let geometry = SystemGeometry::new(n, n).expect("positive size");
        let params = squeezing_params(0.5, 0.0, 1.0).expect("valid squeezing");
        let prep = ChargerPrep::new(std::f64::consts::FRAC_PI_3, 0.0).expect("valid angles");
        let rho0 = initial_state(&geometry, &prep).expect("valid initial state");
        Self {
            geometry,
            params,
            rho0,
        }
    }
}
