//! Dormand–Prince 5(4) stepper for linear matrix ODEs `ρ' = f(ρ)` whose
//! right-hand side maps Hermitian matrices to Hermitian matrices.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-11,
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub struct Dopri5<F> {
    f: F,
    t: f64,
    y: CMatrix,
    k1: CMatrix,
    h: f64,
    h_max: f64,
    tol: Tolerances,
    steps: usize,
}

fn axpy(acc: &mut CMatrix, a: f64, x: &CMatrix) {
    acc.zip_apply(x, |s, v| *s += v * a);
}

impl<F: Fn(&CMatrix) -> CMatrix> Dopri5<F> {
    pub fn new(f: F, t0: f64, y0: CMatrix, tol: Tolerances) -> Self {
        let y0 = hermitian_part(&y0);
        let k1 = f(&y0);
        let mut s = Self {
            f,
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            h_max: f64::INFINITY,
            tol,
            steps: 0,
        };
        s.h = s.initial_step();
        s
    }

    fn scaled_norm(&self, m: &CMatrix, reference: &CMatrix) -> f64 {
        let n = m.len() as f64;
        let sum: f64 = m
            .iter()
            .zip(reference.iter())
            .map(|(e, y)| {
                let sc = self.tol.atol + self.tol.rtol * y.norm();
                (e.norm() / sc).powi(2)
            })
            .sum();
        (sum / n).sqrt()
    }

    fn initial_step(&self) -> f64 {
        let d0 = self.scaled_norm(&self.y, &self.y);
        let d1 = self.scaled_norm(&self.k1, &self.y);
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            (0.01 * d0 / d1).min(1.0)
        }
    }

    /// Caps every step; used to keep stiff decaying modes inside the
    /// stability region once the solution itself becomes stationary.
    pub fn with_max_step(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self.h = self.h.min(h_max);
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &CMatrix {
        &self.y
    }

    /// `f(ρ)` at the current state.
    pub fn derivative(&self) -> &CMatrix {
        &self.k1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Takes one accepted step without passing `t_stop`; lands exactly on
    /// `t_stop` when it is within reach.
    pub fn step_toward(&mut self, t_stop: f64) -> Result<()> {
        let f = &self.f;
        loop {
            let remaining = t_stop - self.t;
            if remaining <= 0.0 {
                return Ok(());
            }
            let hit = self.h >= remaining;
            let h = if hit { remaining } else { self.h };
            let h_min = 1e-14 * self.t.abs().max(1.0);
            if h < h_min && !hit {
                return Err(Error::StepSizeUnderflow { t: self.t, h });
            }
            let y = &self.y;
            let k1 = &self.k1;
            let stage = |terms: &[(f64, &CMatrix)]| {
                let mut acc = y.clone();
                for (a, k) in terms {
                    axpy(&mut acc, h * a, k);
                }
                acc
            };
            let k2 = f(&stage(&[(A21, k1)]));
            let k3 = f(&stage(&[(A31, k1), (A32, &k2)]));
            let k4 = f(&stage(&[(A41, k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&stage(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(&stage(&[
                (A61, k1),
                (A62, &k2),
                (A63, &k3),
                (A64, &k4),
                (A65, &k5),
            ]));
            let y_new = stage(&[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(&y_new);
            let mut err = CMatrix::zeros(y.nrows(), y.ncols());
            for (a, k) in [
                (E1, k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ] {
                axpy(&mut err, h * a, k);
            }
            let reference = y.zip_map(&y_new, |a, b| if a.norm() > b.norm() { a } else { b });
            let err_norm = self.scaled_norm(&err, &reference);
            if !err_norm.is_finite() {
                self.h = h * 0.2;
                continue;
            }
            let factor = if err_norm == 0.0 {
                5.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err_norm <= 1.0 {
                self.t = if hit { t_stop } else { self.t + h };
                self.y = hermitian_part(&y_new);
                // the generator commutes with taking the Hermitian part
                self.k1 = hermitian_part(&k7);
                self.steps += 1;
                if !hit || factor > 1.0 {
                    self.h = (h * factor).min(self.h_max);
                }
                return Ok(());
            }
            self.h = h * factor.min(1.0);
        }
    }

    /// Integrates up to `t_stop` exactly.
    pub fn advance_to(&mut self, t_stop: f64) -> Result<()> {
        while self.t < t_stop {
            self.step_toward(t_stop)?;
        }
        Ok(())
    }
}
