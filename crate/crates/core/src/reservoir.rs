//! Squeezed-vacuum reservoir: parameters, jump operator and Lindblad
//! generators.
//!
//! Both generators act on raw matrices so the integrator can call them on
//! intermediate Runge–Kutta stages that are not valid density matrices.

use crate::error::{Error, Result};
use crate::linalg::{kron, real, CMatrix, C64};
use crate::spin::SpinSector;
use crate::state_prep::wrap_angle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirParams {
    pub r: f64,
    pub varphi: f64,
    pub n_bar: f64,
    pub m_bar: C64,
    pub gamma: f64,
}

/// `n̄ = sinh²r`, `m̄ = sinh r cosh r e^{iφ}`.
pub fn squeezing_params(r: f64, varphi: f64, gamma: f64) -> Result<ReservoirParams> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "squeezing strength must be a finite non-negative number, got {r}"
        )));
    }
    if !varphi.is_finite() {
        return Err(Error::InvalidParameter(
            "squeezing phase must be finite".into(),
        ));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "decay rate must be positive, got {gamma}"
        )));
    }
    let (s, c) = (r.sinh(), r.cosh());
    if !(s * s * c * c).is_finite() {
        return Err(Error::InvalidParameter(format!(
            "squeezing strength {r} overflows the reservoir moments"
        )));
    }
    Ok(ReservoirParams {
        r,
        varphi,
        n_bar: s * s,
        m_bar: C64::from_polar(s * c, varphi),
        gamma,
    })
}

impl ReservoirParams {
    pub fn vacuum(gamma: f64) -> Result<Self> {
        squeezing_params(0.0, 0.0, gamma)
    }

    /// Same phase and rate, different squeezing strength.
    pub fn with_r(&self, r: f64) -> Result<Self> {
        squeezing_params(r, self.varphi, self.gamma)
    }
}

/// `δ = φ_squeeze − 2φ_charger`, wrapped into `[−π, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativePhase {
    pub delta: f64,
}

impl RelativePhase {
    pub fn new(varphi: f64, phi: f64) -> Self {
        Self {
            delta: wrap_angle(varphi - 2.0 * phi),
        }
    }
}

/// `L = J⁻ cosh r e^{iφ/2} + J⁺ sinh r e^{−iφ/2}`.
pub fn jump_operator(
    params: &ReservoirParams,
    jplus: &CMatrix,
    jminus: &CMatrix,
) -> Result<CMatrix> {
    same_shape(jplus, jminus)?;
    let a = C64::from_polar(params.r.cosh(), 0.5 * params.varphi);
    let b = C64::from_polar(params.r.sinh(), -0.5 * params.varphi);
    Ok(jminus * a + jplus * b)
}

fn same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows() * a.nrows(),
            found: b.nrows() * b.ncols(),
        });
    }
    Ok(())
}

/// `γ(2LρL† − L†Lρ − ρL†L)`
pub fn lindblad_rhs_compact(rho: &CMatrix, l: &CMatrix, gamma: f64) -> Result<CMatrix> {
    same_shape(rho, l)?;
    Ok(CompactGenerator::new(l.clone(), gamma).apply(rho))
}

/// Four-term generator with independent `n̄` and `m̄`:
///
/// ```text
/// γ(n̄+1)(2J⁻ρJ⁺ − {J⁺J⁻,ρ}) + γn̄(2J⁺ρJ⁻ − {J⁻J⁺,ρ})
///   + γm̄(2J⁻ρJ⁻ − {J⁻J⁻,ρ}) + γm̄*(2J⁺ρJ⁺ − {J⁺J⁺,ρ})
/// ```
///
/// The anomalous terms are placed so that the pure squeezed vacuum reduces
/// exactly to [`lindblad_rhs_compact`] with [`jump_operator`].
pub fn lindblad_rhs_general(
    rho: &CMatrix,
    n_bar: f64,
    m_bar: C64,
    jplus: &CMatrix,
    jminus: &CMatrix,
    gamma: f64,
) -> Result<CMatrix> {
    same_shape(jplus, jminus)?;
    same_shape(rho, jplus)?;
    if !(n_bar >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mean photon number must be non-negative, got {n_bar}"
        )));
    }
    let bound = n_bar * (n_bar + 1.0);
    let m_sq = m_bar.norm_sqr();
    if m_sq > bound * (1.0 + 1e-12) + 1e-15 {
        return Err(Error::UnphysicalCorrelation { m_sq, bound });
    }
    let dissipator = |a: &CMatrix, b: &CMatrix| -> CMatrix {
        // 2 a ρ b − {b a, ρ}
        let ba = b * a;
        (a * rho * b) * real(2.0) - &ba * rho - rho * &ba
    };
    let out = dissipator(jminus, jplus) * real(gamma * (n_bar + 1.0))
        + dissipator(jplus, jminus) * real(gamma * n_bar)
        + dissipator(jminus, jminus) * (m_bar * gamma)
        + dissipator(jplus, jplus) * (m_bar.conj() * gamma);
    Ok(out)
}

/// Compact generator with `L†L` cached, for repeated application.
#[derive(Debug, Clone)]
pub struct CompactGenerator {
    l: CMatrix,
    l_dag: CMatrix,
    ldl: CMatrix,
    gamma: f64,
}

impl CompactGenerator {
    pub fn new(l: CMatrix, gamma: f64) -> Self {
        let l_dag = l.adjoint();
        let ldl = &l_dag * &l;
        Self {
            l,
            l_dag,
            ldl,
            gamma,
        }
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    /// Upper bound `4γ‖L‖₂²` on the spectral radius of the superoperator.
    pub fn spectral_bound(&self) -> Result<f64> {
        let sigma = crate::linalg::svd(&self.l)?
            .singular_values
            .first()
            .copied()
            .unwrap_or(0.0);
        Ok(4.0 * self.gamma * sigma * sigma)
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = (&self.l * rho * &self.l_dag) * real(2.0);
        out -= &self.ldl * rho;
        out -= rho * &self.ldl;
        out * real(self.gamma)
    }
}

/// Vectorized generator (without the factor `γ`) acting on the column-stacked
/// `(J, K)` coherence block:
/// `2 L̄_K ⊗ L_J − I ⊗ L_J†L_J − (L_K†L_K)ᵀ ⊗ I`.
pub fn liouvillian_block(
    sector_j: &SpinSector,
    sector_k: &SpinSector,
    params: &ReservoirParams,
) -> Result<CMatrix> {
    let lj = jump_operator(params, &sector_j.jplus, &sector_j.jminus)?;
    let lk = jump_operator(params, &sector_k.jplus, &sector_k.jminus)?;
    let (dj, dk) = (sector_j.dim, sector_k.dim);
    let ljl = lj.adjoint() * &lj;
    let lkl = lk.adjoint() * &lk;
    Ok(kron(&lk.conjugate(), &lj) * real(2.0)
        - kron(&CMatrix::identity(dk, dk), &ljl)
        - kron(&lkl.transpose(), &CMatrix::identity(dj, dj)))
}
