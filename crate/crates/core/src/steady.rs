//! Steady states by per-block null-space projection, the biorthogonal
//! eigenbasis of the jump operator, and closed-form few-spin solutions.

use rayon::prelude::*;

use crate::density::{Basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::geometry::{Parity, SystemGeometry};
use crate::linalg::{
    hermitian_part, null_space, real, solve_matrix, unvectorize, vectorize, CMatrix, CVector, C64,
};
use crate::reservoir::{liouvillian_block, ReservoirParams};
use crate::spin::{sector, HalfInt};

/// Singular values below this fraction of the largest count as zero.
pub const NULL_TOL: f64 = 1e-10;
/// Minimum ratio between the smallest kept and the largest discarded singular value.
pub const MIN_GAP: f64 = 1e6;

/// Right and left eigenvectors of the jump operator restricted to one sector,
/// normalized so that `‖Ψ‖ = 1` and `⟨Φ_M|Ψ_M⟩ = 1`. Index `i` corresponds
/// to `M = J − i`.
#[derive(Debug, Clone)]
pub struct BiorthogonalSector {
    pub j: HalfInt,
    pub alpha: f64,
    pub psi: Vec<CVector>,
    pub phi: Vec<CVector>,
    pub lambdas: Vec<f64>,
}

impl BiorthogonalSector {
    /// Index of `M = 0` for integer `J`.
    pub fn zero_mode(&self) -> Option<usize> {
        self.j.is_integer().then_some(self.j.twice() as usize / 2)
    }
}

/// Eigenvectors `Ψ_{J,M} ∝ e^{(α − iφ/2)J_z} e^{−iπJ_y/2}|J,M⟩` and
/// `Φ_{J,M} ∝ e^{(−α − iφ/2)J_z} e^{−iπJ_y/2}|J,M⟩` with `α = ½ ln tanh r`
/// and eigenvalue `√(2 sinh 2r)·M`.
pub fn biorthogonal_sector(j: f64, params: &ReservoirParams) -> Result<BiorthogonalSector> {
    let j = HalfInt::from_f64(j)?;
    if j.twice() < 0 {
        return Err(Error::InvalidSpin(j.value()));
    }
    if params.r == 0.0 {
        return Err(Error::SingularAtZeroSqueezing);
    }
    let s = sector(j);
    let alpha = 0.5 * params.r.tanh().ln();
    let rot = s.rotation_y(std::f64::consts::FRAC_PI_2)?;
    let scale = (2.0 * (2.0 * params.r).sinh()).sqrt();
    let mut psi = Vec::with_capacity(s.dim);
    let mut phi = Vec::with_capacity(s.dim);
    let mut lambdas = Vec::with_capacity(s.dim);
    for i in 0..s.dim {
        let col = rot.column(i);
        let weighted = |a: f64| {
            CVector::from_fn(s.dim, |k, _| {
                let m = s.m_at(k).value();
                col[k] * C64::new(a * m, -0.5 * params.varphi * m).exp()
            })
        };
        let mut right = weighted(alpha);
        right /= real(right.norm());
        let left = weighted(-alpha);
        let overlap = left.dotc(&right);
        let left = left / overlap.conj();
        psi.push(right);
        phi.push(left);
        lambdas.push(scale * s.m_at(i).value());
    }
    Ok(BiorthogonalSector {
        j,
        alpha,
        psi,
        phi,
        lambdas,
    })
}

/// Stationary state of an odd-parity sector for `r > 0`:
/// `ρ_J ∝ Σ_{M,N} ⟨Φ_M|Φ_N⟩/(MN) |Ψ_M⟩⟨Ψ_N|`, trace one.
pub fn odd_sector_steady_state(j: f64, params: &ReservoirParams) -> Result<CMatrix> {
    let b = biorthogonal_sector(j, params)?;
    if b.j.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "sector J = {} has a pure dark state; the mixed form needs half-integer J",
            b.j
        )));
    }
    let dim = b.psi.len();
    let ms: Vec<f64> = (0..dim).map(|i| b.j.value() - i as f64).collect();
    let mut rho = CMatrix::zeros(dim, dim);
    for mi in 0..dim {
        for ni in 0..dim {
            let w = b.phi[mi].dotc(&b.phi[ni]) / (ms[mi] * ms[ni]);
            rho += &b.psi[mi] * b.psi[ni].adjoint() * w;
        }
    }
    let tr = rho.trace();
    Ok(rho / tr)
}

/// The two dark states of the `N_C = N_B = 1` system in the product basis
/// `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.
pub fn dark_states_n1(params: &ReservoirParams) -> (CVector, CVector) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let d1 = CVector::from_vec(vec![real(0.0), real(h), real(-h), real(0.0)]);
    let n = params.n_bar;
    let pre = ((1.0 + n) / (1.0 + 2.0 * n)).sqrt();
    let up = C64::from_polar(params.m_bar.norm() / (1.0 + n), -params.varphi);
    let d2 = CVector::from_vec(vec![up * pre, real(0.0), real(0.0), real(-pre)]);
    (d1, d2)
}

/// Closed-form `N = 1` steady state in the product basis for a charger
/// starting at `(θ, φ)`.
pub fn analytic_rho_ss_n1(theta: f64, phi: f64, params: &ReservoirParams) -> CMatrix {
    let (d1, d2) = dark_states_n1(params);
    let n = params.n_bar;
    let k = 0.5 * theta.sin() * ((1.0 + n) / (2.0 + 4.0 * n)).sqrt();
    let p11 = &d1 * d1.adjoint();
    let p22 = &d2 * d2.adjoint();
    let p21 = &d2 * d1.adjoint();
    let p12 = &d1 * d2.adjoint();
    p11 * real((1.0 + theta.cos()) / 4.0) + p22 * real((3.0 - theta.cos()) / 4.0)
        - p21 * C64::from_polar(k, phi)
        - p12 * C64::from_polar(k, -phi)
}

/// Battery steady state for `N_C = N_B = 1`, basis `{|↓⟩, |↑⟩}`.
pub fn analytic_rho_b_n1(theta: f64, delta: f64, params: &ReservoirParams) -> CMatrix {
    let n = params.n_bar;
    let m = params.m_bar.norm();
    let d = 8.0 * (1.0 + 2.0 * n);
    let off = (C64::from_polar(m, delta) + (1.0 + n)) * (-2.0 * theta.sin() / d);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            real((7.0 + 8.0 * n - theta.cos()) / d),
            off,
            off.conj(),
            real((1.0 + 8.0 * n + theta.cos()) / d),
        ],
    )
}

/// Closed-form battery ergotropy for `N_C = N_B = 1` (units of `ħω`),
/// evaluated in the rationalized form so it is never negative.
pub fn analytic_ergotropy_n1(theta: f64, delta: f64, params: &ReservoirParams) -> f64 {
    let n = params.n_bar;
    let m = params.m_bar.norm();
    let (s2, c) = (theta.sin().powi(2), theta.cos());
    let root = (10.0 - 6.0 * c
        + (3.0 + 12.0 * n + 8.0 * n * n) * s2
        + 8.0 * (1.0 + n) * m * s2 * delta.cos())
    .sqrt();
    let num = 4.0 * (1.0 + 2.0 * n + 2.0 * m * delta.cos()) * (1.0 + n) * s2;
    num / (8.0 * (1.0 + 2.0 * n) * (3.0 - c + root))
}

/// Closed-form battery energy for `N_C = N_B = 1` (units of `ħω`).
pub fn analytic_energy_n1(theta: f64, params: &ReservoirParams) -> f64 {
    0.5 - (3.0 - theta.cos()) / (8.0 * (1.0 + 2.0 * params.n_bar))
}

/// Battery steady state for `N_C = N_B = 2`, `θ = φ = 0`, in the basis
/// `|1,−1⟩, |1,0⟩, |1,1⟩`.
pub fn analytic_rho_b_n2_theta0(params: &ReservoirParams, delta: f64) -> CMatrix {
    let n = params.n_bar;
    let (n2, n3) = (n * n, n * n * n);
    let den = 12.0 * (1.0 + 2.0 * n) * (3.0 + 8.0 * n + 8.0 * n2);
    let corner = C64::from_polar(3.0 * params.m_bar.norm() / den, delta);
    let mut rho = CMatrix::zeros(3, 3);
    rho[(0, 0)] = real((19.0 + 79.0 * n + 120.0 * n2 + 64.0 * n3) / den);
    rho[(1, 1)] = real((13.0 + 58.0 * n + 96.0 * n2 + 64.0 * n3) / den);
    rho[(2, 2)] = real((4.0 + 31.0 * n + 72.0 * n2 + 64.0 * n3) / den);
    rho[(0, 2)] = corner;
    rho[(2, 0)] = corner.conj();
    rho
}

/// `C_JJ = Σ_M ⟨J,M|ρ|J,M⟩` for every sector, in sector order.
pub fn sector_populations(rho: &DensityMatrix, geometry: &SystemGeometry) -> Result<Vec<f64>> {
    let coupled = geometry.in_basis(rho, Basis::Coupled)?;
    Ok((0..geometry.sectors.len())
        .map(|s| {
            geometry
                .sector_range(s)
                .map(|i| coupled.data()[(i, i)].re)
                .sum()
        })
        .collect())
}

/// Sector weights of a steady state. Cross coefficients are the overlaps
/// with the unit-norm stationary block (phase fixed so its largest entry is
/// real and positive), present only where that block is one-dimensional.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateWeights {
    pub parity: Parity,
    pub sector_j: Vec<HalfInt>,
    pub populations: Vec<f64>,
    pub cross: Vec<(HalfInt, HalfInt, C64)>,
}

impl SteadyStateWeights {
    pub fn cross_coefficient(&self, j: HalfInt, k: HalfInt) -> Option<C64> {
        self.cross
            .iter()
            .find(|(a, b, _)| *a == j && *b == k)
            .map(|&(_, _, c)| c)
    }

    pub fn population(&self, j: HalfInt) -> Option<f64> {
        self.sector_j
            .iter()
            .position(|&x| x == j)
            .map(|i| self.populations[i])
    }
}

#[derive(Debug, Clone)]
struct BlockProjector {
    a: usize,
    b: usize,
    null_dim: usize,
    projector: CMatrix,
    unit_vector: Option<CMatrix>,
}

/// Precomputed spectral projectors onto the stationary subspace of every
/// `(J, K)` coherence block with `J ≥ K`. Reusable across initial states
/// sharing the same geometry and reservoir.
#[derive(Debug, Clone)]
pub struct SteadyStateProjector {
    geometry: SystemGeometry,
    blocks: Vec<BlockProjector>,
}

impl SteadyStateProjector {
    pub fn new(geometry: &SystemGeometry, params: &ReservoirParams) -> Result<Self> {
        let n = geometry.sectors.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let blocks = pairs
            .par_iter()
            .map(|&(a, b)| block_projector(geometry, params, a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            geometry: geometry.clone(),
            blocks,
        })
    }

    pub fn geometry(&self) -> &SystemGeometry {
        &self.geometry
    }

    /// Stationary-space dimension of block `(J, K)`.
    pub fn null_dim(&self, j: HalfInt, k: HalfInt) -> Option<usize> {
        let (a, b) = (
            self.geometry.sector_index(j)?,
            self.geometry.sector_index(k)?,
        );
        let (a, b) = (a.min(b), a.max(b));
        self.blocks
            .iter()
            .find(|p| p.a == a && p.b == b)
            .map(|p| p.null_dim)
    }

    /// Steady state reached from `rho0`, returned in the basis of `rho0`.
    pub fn apply(&self, rho0: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(self.apply_with_weights(rho0)?.0)
    }

    pub fn apply_with_weights(
        &self,
        rho0: &DensityMatrix,
    ) -> Result<(DensityMatrix, SteadyStateWeights)> {
        let g = &self.geometry;
        let coupled = g.in_basis(rho0, Basis::Coupled)?;
        let x = coupled.data();
        let d = g.dim();
        let mut out = CMatrix::zeros(d, d);
        let mut cross = Vec::new();
        for p in &self.blocks {
            let (ra, rb) = (g.sector_range(p.a), g.sector_range(p.b));
            let (da, db) = (ra.len(), rb.len());
            let block = x.view((ra.start, rb.start), (da, db)).into_owned();
            let projected = unvectorize(&(&p.projector * vectorize(&block)), da, db)?;
            if let Some(v) = &p.unit_vector {
                if p.a != p.b {
                    let c = v.zip_fold(&projected, C64::new(0.0, 0.0), |acc, vi, bi| {
                        acc + vi.conj() * bi
                    });
                    let (ja, jb) = (g.sectors[p.a].j, g.sectors[p.b].j);
                    cross.push((ja, jb, c));
                    cross.push((jb, ja, c.conj()));
                }
            }
            out.view_mut((ra.start, rb.start), (da, db))
                .copy_from(&projected);
            if p.a != p.b {
                out.view_mut((rb.start, ra.start), (db, da))
                    .copy_from(&projected.adjoint());
            }
        }
        let out = hermitian_part(&out);
        let steady = DensityMatrix::from_parts(out, Basis::Coupled, Some(g.dims()))?;
        let populations = (0..g.sectors.len())
            .map(|s| g.sector_range(s).map(|i| steady.data()[(i, i)].re).sum())
            .collect();
        let weights = SteadyStateWeights {
            parity: g.parity,
            sector_j: g.sectors.iter().map(|s| s.j).collect(),
            populations,
            cross,
        };
        Ok((g.in_basis(&steady, rho0.basis())?, weights))
    }
}

fn block_projector(
    geometry: &SystemGeometry,
    params: &ReservoirParams,
    a: usize,
    b: usize,
) -> Result<BlockProjector> {
    let (sa, sb) = (&geometry.sectors[a], &geometry.sectors[b]);
    let lv = liouvillian_block(sa, sb, params)?;
    let (ns, gap) = null_space(&lv, NULL_TOL)?;
    if gap.gap < MIN_GAP {
        return Err(Error::AmbiguousNullSpace {
            j: sa.j.value(),
            k: sb.j.value(),
            gap: gap.gap,
        });
    }
    let n = lv.nrows();
    let null_dim = ns.dim();
    if null_dim == 0 {
        return Ok(BlockProjector {
            a,
            b,
            null_dim,
            projector: CMatrix::zeros(n, n),
            unit_vector: None,
        });
    }
    // P = V (W†V)⁻¹ W†
    let overlap = ns.left.adjoint() * &ns.right;
    let coeffs = solve_matrix(&overlap, &ns.left.adjoint())?;
    let projector = &ns.right * coeffs;
    let unit_vector = (null_dim == 1).then(|| {
        let v = ns.right.column(0).into_owned();
        let pivot = v.iter().copied().fold(C64::new(0.0, 0.0), |best, z| {
            if z.norm() > best.norm() {
                z
            } else {
                best
            }
        });
        let v = v * (pivot.conj() / pivot.norm());
        unvectorize(&v, sa.dim, sb.dim).expect("null vector has block shape")
    });
    Ok(BlockProjector {
        a,
        b,
        null_dim,
        projector,
        unit_vector,
    })
}

/// Steady state reached from `rho0` under the squeezed-reservoir generator,
/// returned in the same basis as `rho0`.
pub fn steady_state(
    rho0: &DensityMatrix,
    geometry: &SystemGeometry,
    params: &ReservoirParams,
) -> Result<DensityMatrix> {
    SteadyStateProjector::new(geometry, params)?.apply(rho0)
}

pub fn steady_state_with_weights(
    rho0: &DensityMatrix,
    geometry: &SystemGeometry,
    params: &ReservoirParams,
) -> Result<(DensityMatrix, SteadyStateWeights)> {
    SteadyStateProjector::new(geometry, params)?.apply_with_weights(rho0)
}
