//! Energy, ergotropy (total, incoherent, coherent), l1 coherence and
//! logarithmic negativity.

use crate::density::{Basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::geometry::SystemGeometry;
use crate::linalg::{hermitian_eigen, hermitian_part, real, CMatrix};

/// Eigenvalues in `[−CLIP_TOL, 0)` are treated as round-off and set to zero.
pub const CLIP_TOL: f64 = 1e-9;

/// Hamiltonian with its spectrum sorted ascending.
#[derive(Debug, Clone)]
pub struct BatteryHamiltonian {
    pub h: CMatrix,
    pub energies: Vec<f64>,
    /// Energy eigenvectors as columns, matching `energies`.
    pub eigenvectors: CMatrix,
    n_spins: Option<usize>,
}

impl BatteryHamiltonian {
    /// `ħω(J_z + N_B/2)` with `ħω = 1` in the battery Dicke basis
    /// (`M` descending), so the ground state has zero energy.
    pub fn battery(n_b: usize) -> Self {
        let d = n_b + 1;
        let h = CMatrix::from_fn(d, d, |i, k| {
            if i == k {
                real((n_b - i) as f64)
            } else {
                real(0.0)
            }
        });
        let energies = (0..d).map(|j| j as f64).collect();
        let eigenvectors = CMatrix::from_fn(
            d,
            d,
            |i, j| if i == n_b - j { real(1.0) } else { real(0.0) },
        );
        Self {
            h,
            energies,
            eigenvectors,
            n_spins: Some(n_b),
        }
    }

    /// Arbitrary Hermitian Hamiltonian; degenerate levels keep the
    /// eigensolver's order.
    pub fn from_matrix(h: CMatrix) -> Result<Self> {
        let (energies, eigenvectors) = hermitian_eigen(&h)?;
        Ok(Self {
            h: hermitian_part(&h),
            energies,
            eigenvectors,
            n_spins: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Spin count used for per-spin normalization, if known.
    pub fn n_spins(&self) -> Option<usize> {
        self.n_spins
    }

    fn check(&self, rho: &CMatrix) -> Result<()> {
        if rho.nrows() != self.dim() || rho.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.nrows(),
            });
        }
        Ok(())
    }
}

/// State eigenvalues sorted descending, after clipping.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: CMatrix,
}

pub fn spectrum(rho: &CMatrix) -> Result<Spectrum> {
    let (mut values, vectors) = hermitian_eigen(rho)?;
    if let Some(&lowest) = values.first() {
        if lowest < -CLIP_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
    }
    for v in values.iter_mut() {
        *v = v.max(0.0);
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidState("state has zero trace".into()));
    }
    let n = values.len();
    let values: Vec<f64> = values.iter().rev().map(|v| v / total).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| vectors[(i, n - 1 - j)]);
    Ok(Spectrum { values, vectors })
}

/// `Σ_k r_k |e_k⟩⟨e_k|` with populations descending against ascending energies.
pub fn passive_state(rho: &DensityMatrix, h: &BatteryHamiltonian) -> Result<DensityMatrix> {
    h.check(rho.data())?;
    let spec = spectrum(rho.data())?;
    let d = h.dim();
    let mut out = CMatrix::zeros(d, d);
    for (k, r) in spec.values.iter().enumerate() {
        let e = h.eigenvectors.column(k);
        out += e * e.adjoint() * real(*r);
    }
    DensityMatrix::from_parts(out, rho.basis(), rho.dims())
}

fn energy_of(rho: &CMatrix, h: &BatteryHamiltonian) -> f64 {
    (&h.h * rho).trace().re
}

fn ergotropy_matrix(rho: &CMatrix, h: &BatteryHamiltonian) -> Result<f64> {
    h.check(rho)?;
    let spec = spectrum(rho)?;
    // Σ_{i,j} r_i ε_j (|⟨r_i|e_j⟩|² − δ_ij)
    let overlaps = spec.vectors.adjoint() * &h.eigenvectors;
    let mut w = 0.0;
    for (i, r) in spec.values.iter().enumerate() {
        for (j, eps) in h.energies.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            w += r * eps * (overlaps[(i, j)].norm_sqr() - delta);
        }
    }
    Ok(w.max(0.0))
}

pub fn ergotropy(rho: &DensityMatrix, h: &BatteryHamiltonian) -> Result<f64> {
    ergotropy_matrix(rho.data(), h)
}

/// Completely dephased state in the energy eigenbasis.
pub fn dephase(rho: &CMatrix, h: &BatteryHamiltonian) -> CMatrix {
    let in_energy = h.eigenvectors.adjoint() * rho * &h.eigenvectors;
    let diag = CMatrix::from_diagonal(&in_energy.diagonal());
    &h.eigenvectors * diag * h.eigenvectors.adjoint()
}

/// `(W_P, W_C)` where `W_P` is the ergotropy of the dephased state.
pub fn ergotropy_split(rho: &DensityMatrix, h: &BatteryHamiltonian) -> Result<(f64, f64)> {
    let w = ergotropy_matrix(rho.data(), h)?;
    let w_p = ergotropy_matrix(&dephase(rho.data(), h), h)?;
    Ok((w_p, w - w_p))
}

/// Sum of off-diagonal moduli in the energy eigenbasis.
pub fn l1_coherence(rho: &DensityMatrix, h: &BatteryHamiltonian) -> Result<f64> {
    h.check(rho.data())?;
    let m = h.eigenvectors.adjoint() * rho.data() * &h.eigenvectors;
    let mut c = 0.0;
    for i in 0..m.nrows() {
        for k in 0..m.ncols() {
            if i != k {
                c += m[(i, k)].norm();
            }
        }
    }
    Ok(c)
}

/// `(E, E/N_B)`; the second entry is `None` without a spin count.
pub fn energy(rho_b: &DensityMatrix, h: &BatteryHamiltonian) -> Result<(f64, Option<f64>)> {
    h.check(rho_b.data())?;
    let e = energy_of(rho_b.data(), h);
    Ok((e, h.n_spins().map(|n| e / n as f64)))
}

/// Subsystem whose indices are transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Charger,
    Battery,
}

pub fn partial_transpose(rho: &CMatrix, (dc, db): (usize, usize), party: Party) -> CMatrix {
    let n = dc * db;
    CMatrix::from_fn(n, n, |row, col| {
        let (c, b) = (row / db, row % db);
        let (c2, b2) = (col / db, col % db);
        match party {
            Party::Battery => rho[(c * db + b2, c2 * db + b)],
            Party::Charger => rho[(c2 * db + b, c * db + b2)],
        }
    })
}

/// `log₂ ‖ρ^{Γ}‖₁` with the partial transpose taken over `party`.
pub fn log_negativity_wrt(
    rho: &DensityMatrix,
    geometry: &SystemGeometry,
    party: Party,
) -> Result<f64> {
    if rho.basis() != Basis::Product {
        return Err(Error::WrongBasis {
            expected: Basis::Product,
            found: rho.basis(),
        });
    }
    if rho.dim() != geometry.dim() {
        return Err(Error::DimensionMismatch {
            expected: geometry.dim(),
            found: rho.dim(),
        });
    }
    let pt = partial_transpose(rho.data(), geometry.dims(), party);
    let (values, _) = hermitian_eigen(&pt)?;
    let norm: f64 = values.iter().map(|v| v.abs()).sum();
    Ok(norm.log2().max(0.0))
}

/// Logarithmic negativity in bits, transposing the battery.
pub fn log_negativity(rho: &DensityMatrix, geometry: &SystemGeometry) -> Result<f64> {
    log_negativity_wrt(rho, geometry, Party::Battery)
}

/// Metrics of one joint state. Energies in units of `ħω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgotropyReport {
    pub n_b: usize,
    pub energy: f64,
    pub ergotropy: f64,
    pub incoherent: f64,
    pub coherent: f64,
    pub coherence: f64,
    pub log_negativity: f64,
}

impl ErgotropyReport {
    pub fn energy_per_spin(&self) -> f64 {
        self.energy / self.n_b as f64
    }

    pub fn ergotropy_per_spin(&self) -> f64 {
        self.ergotropy / self.n_b as f64
    }

    pub fn incoherent_per_spin(&self) -> f64 {
        self.incoherent / self.n_b as f64
    }

    pub fn coherent_per_spin(&self) -> f64 {
        self.coherent / self.n_b as f64
    }
}

/// Full report for a joint charger–battery state in either basis.
pub fn report(
    rho: &DensityMatrix,
    geometry: &SystemGeometry,
    h: &BatteryHamiltonian,
) -> Result<ErgotropyReport> {
    let product = geometry.in_basis(rho, Basis::Product)?;
    let rho_b = geometry.partial_trace_charger(&product)?;
    let (energy, _) = energy(&rho_b, h)?;
    let w = ergotropy(&rho_b, h)?;
    let (w_p, w_c) = ergotropy_split(&rho_b, h)?;
    Ok(ErgotropyReport {
        n_b: geometry.n_b,
        energy,
        ergotropy: w,
        incoherent: w_p,
        coherent: w_c,
        coherence: l1_coherence(&rho_b, h)?,
        log_negativity: log_negativity(&product, geometry)?,
    })
}

/// Unit-trace Hermitian state from a raw matrix without positivity checks.
pub fn subsystem_state(m: CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::from_parts(m, Basis::Subsystem, None)
}
