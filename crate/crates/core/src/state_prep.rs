//! Charger spin-coherent state and the initial joint state.

use std::f64::consts::PI;

use crate::density::{Basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::geometry::SystemGeometry;
use crate::linalg::{real, CVector, C64};
use crate::spin::ln_binomial;

/// Maps an angle into `[−π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2π
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Bloch angles of every charger spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargerPrep {
    theta: f64,
    phi: f64,
}

impl ChargerPrep {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter(
                "charger angles must be finite".into(),
            ));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "polar angle {theta} outside [0, π]"
            )));
        }
        Ok(Self {
            theta,
            phi: wrap_angle(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `|θ,φ⟩` for `n` spins in the Dicke basis `|N/2, M⟩`, `M` descending.
///
/// Amplitudes are `√C(2J, J+M) cos^{J+M}(θ/2) sin^{J−M}(θ/2) e^{−iMφ}`.
pub fn spin_coherent(n: usize, prep: &ChargerPrep) -> Result<CVector> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "spin count must be at least 1".into(),
        ));
    }
    let (s, c) = (0.5 * prep.theta).sin_cos();
    let j = n as f64 / 2.0;
    Ok(CVector::from_fn(n + 1, |i, _| {
        // i = J − M
        let up = (n - i) as i32;
        let down = i as i32;
        let m = j - i as f64;
        let mag = (0.5 * ln_binomial(n as u32, up as u32)).exp() * c.powi(up) * s.powi(down);
        C64::from_polar(mag, -m * prep.phi)
    }))
}

/// `|θ,φ⟩_C ⊗ |↓…↓⟩_B` as a product-basis density matrix.
pub fn initial_state(geometry: &SystemGeometry, prep: &ChargerPrep) -> Result<DensityMatrix> {
    let charger = spin_coherent(geometry.n_c, prep)?;
    let mut battery = CVector::zeros(geometry.n_b + 1);
    battery[geometry.n_b] = real(1.0);
    let ket = geometry.product_ket(&charger, &battery)?;
    DensityMatrix::from_ket(&ket.amplitudes, Basis::Product, Some(geometry.dims()))
}
