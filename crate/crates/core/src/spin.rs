//! Angular-momentum primitives: half-integers, ladder operators of a single
//! Dicke ladder, and Clebsch–Gordan coefficients.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{real, CMatrix, C64, I};

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    /// Accepts values within 1e-9 of a multiple of 1/2.
    pub fn from_f64(x: f64) -> Result<Self> {
        let twice = (2.0 * x).round();
        if !x.is_finite() || (2.0 * x - twice).abs() > 1e-9 || twice.abs() > i32::MAX as f64 {
            return Err(Error::InvalidSpin(x));
        }
        Ok(HalfInt(twice as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

const LN_FACTORIAL_TABLE: usize = 1024;

/// `ln(n!)`, tabulated for small `n`.
pub fn ln_factorial(n: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    match table.get(n as usize) {
        Some(&v) => v,
        None => {
            table[LN_FACTORIAL_TABLE - 1]
                + (LN_FACTORIAL_TABLE as u32..=n)
                    .map(|k| (k as f64).ln())
                    .sum::<f64>()
        }
    }
}

/// `ln C(n, k)`
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// One Dicke ladder of total spin `J` with its collective operators in the
/// `|J, M⟩` basis, `M` descending from `J` to `−J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSector {
    pub j: HalfInt,
    pub dim: usize,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
    pub jz: CMatrix,
}

impl SpinSector {
    /// Magnetic quantum number of basis index `i`.
    pub fn m_at(&self, i: usize) -> HalfInt {
        HalfInt::from_twice(self.j.twice() - 2 * i as i32)
    }

    /// Basis index of magnetic quantum number `m`, if it lies on the ladder.
    pub fn index_of(&self, m: HalfInt) -> Option<usize> {
        let offset = self.j.twice() - m.twice();
        (offset >= 0 && offset % 2 == 0 && (offset / 2) < self.dim as i32)
            .then_some((offset / 2) as usize)
    }

    pub fn jx(&self) -> CMatrix {
        (&self.jplus + &self.jminus) * real(0.5)
    }

    pub fn jy(&self) -> CMatrix {
        (&self.jplus - &self.jminus) * (-0.5 * I)
    }

    /// `exp(−i·angle·J_y)`.
    pub fn rotation_y(&self, angle: f64) -> Result<CMatrix> {
        crate::linalg::hermitian_function(&self.jy(), |x| C64::from_polar(1.0, -angle * x))
    }
}

/// Ladder and `J_z` matrices for spin `j`, with
/// `⟨J,M+1|J⁺|J,M⟩ = √(J(J+1) − M(M+1))`.
pub fn ladder_matrices(j: f64) -> Result<SpinSector> {
    let j = HalfInt::from_f64(j)?;
    if j.twice() < 0 {
        return Err(Error::InvalidSpin(j.value()));
    }
    Ok(sector(j))
}

pub(crate) fn sector(j: HalfInt) -> SpinSector {
    let jv = j.value();
    let dim = (j.twice() + 1) as usize;
    let m = |i: usize| jv - i as f64;
    let mut jplus = CMatrix::zeros(dim, dim);
    for col in 1..dim {
        let mm = m(col);
        jplus[(col - 1, col)] = real((jv * (jv + 1.0) - mm * (mm + 1.0)).sqrt());
    }
    let jminus = jplus.adjoint();
    let jz = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            real(m(r))
        } else {
            C64::new(0.0, 0.0)
        }
    });
    SpinSector {
        j,
        dim,
        jplus,
        jminus,
        jz,
    }
}

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` in the Condon–Shortley
/// phase convention.
pub fn clebsch_gordan(j1: f64, j2: f64, m1: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    let [j1, j2, m1, m2, j, m] = [j1, j2, m1, m2, j, m].map(HalfInt::from_f64);
    cg(j1?, j2?, m1?, m2?, j?, m?)
}

pub(crate) fn cg(
    j1: HalfInt,
    j2: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    for (jj, mm) in [(j1, m1), (j2, m2), (j, m)] {
        if jj.twice() < 0 {
            return Err(Error::InvalidSpin(jj.value()));
        }
        if mm.abs() > jj || (jj.twice() - mm.twice()) % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "projection {mm} is not on the ladder of spin {jj}"
            )));
        }
    }
    if m != m1 + m2 || j < (j1 - j2).abs() || j > j1 + j2 || (j1 + j2 - j).twice() % 2 != 0 {
        return Ok(0.0);
    }

    // every quantity below is a non-negative integer once the selection rules hold
    let n = |h: HalfInt| -> i64 { (h.twice() / 2) as i64 };
    let lf = |k: i64| ln_factorial(k as u32);

    let a = n(j1 + j2 - j);
    let b = n(j1 - m1);
    let c = n(j2 + m2);
    let d = n(j - j2 + m1);
    let e = n(j - j1 - m2);

    let ln_pre = 0.5
        * (((j.twice() + 1) as f64).ln() + lf(n(j + j1 - j2)) + lf(n(j - j1 + j2)) + lf(a)
            - lf(n(j1 + j2 + j) + 1)
            + lf(n(j + m))
            + lf(n(j - m))
            + lf(n(j1 - m1))
            + lf(n(j1 + m1))
            + lf(n(j2 - m2))
            + lf(n(j2 + m2)));

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = lf(k) + lf(a - k) + lf(b - k) + lf(c - k) + lf(d + k) + lf(e + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (ln_pre - ln_den).exp();
    }
    Ok(sum)
}
