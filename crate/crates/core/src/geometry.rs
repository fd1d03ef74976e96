//! Charger ⊗ battery geometry: sector structure, the Clebsch–Gordan change
//! of basis, collective operators and the partial trace.

use std::ops::Range;

use crate::density::{Basis, DensityMatrix, Ket};
use crate::error::{Error, Result};
use crate::linalg::{kron, real, CMatrix, CVector};
use crate::spin::{cg, sector, HalfInt, SpinSector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone)]
pub struct SystemGeometry {
    pub n_c: usize,
    pub n_b: usize,
    pub j_c: HalfInt,
    pub j_b: HalfInt,
    /// Coupled sectors ordered by descending `J`.
    pub sectors: Vec<SpinSector>,
    offsets: Vec<usize>,
    /// Rows: coupled basis; columns: product basis.
    u_cg: CMatrix,
    pub parity: Parity,
    charger: SpinSector,
    battery: SpinSector,
}

impl SystemGeometry {
    pub fn new(n_c: usize, n_b: usize) -> Result<Self> {
        if n_c == 0 || n_b == 0 {
            return Err(Error::InvalidParameter(format!(
                "spin counts must be positive, got N_C = {n_c}, N_B = {n_b}"
            )));
        }
        let j_c = HalfInt::from_twice(n_c as i32);
        let j_b = HalfInt::from_twice(n_b as i32);
        let charger = sector(j_c);
        let battery = sector(j_b);

        let j_max = j_c + j_b;
        let j_min = (j_c - j_b).abs();
        let sectors: Vec<SpinSector> = (j_min.twice()..=j_max.twice())
            .rev()
            .step_by(2)
            .map(|t| sector(HalfInt::from_twice(t)))
            .collect();
        let mut offsets = Vec::with_capacity(sectors.len() + 1);
        let mut acc = 0;
        for s in &sectors {
            offsets.push(acc);
            acc += s.dim;
        }
        offsets.push(acc);

        let d = (n_c + 1) * (n_b + 1);
        debug_assert_eq!(acc, d);
        let mut u_cg = CMatrix::zeros(d, d);
        for (si, s) in sectors.iter().enumerate() {
            for mi in 0..s.dim {
                let row = offsets[si] + mi;
                let m = s.m_at(mi);
                for ci in 0..charger.dim {
                    let mc = charger.m_at(ci);
                    let mb = m - mc;
                    let Some(bi) = battery.index_of(mb) else {
                        continue;
                    };
                    let c = cg(j_c, j_b, mc, mb, s.j, m)?;
                    u_cg[(row, ci * battery.dim + bi)] = real(c);
                }
            }
        }

        let parity = if (n_c + n_b).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        };
        Ok(Self {
            n_c,
            n_b,
            j_c,
            j_b,
            sectors,
            offsets,
            u_cg,
            parity,
            charger,
            battery,
        })
    }

    /// Full Hilbert-space dimension `(N_C+1)(N_B+1)`.
    pub fn dim(&self) -> usize {
        (self.n_c + 1) * (self.n_b + 1)
    }

    /// `(N_C+1, N_B+1)`
    pub fn dims(&self) -> (usize, usize) {
        (self.n_c + 1, self.n_b + 1)
    }

    pub fn change_of_basis(&self) -> &CMatrix {
        &self.u_cg
    }

    pub fn charger_sector(&self) -> &SpinSector {
        &self.charger
    }

    pub fn battery_sector(&self) -> &SpinSector {
        &self.battery
    }

    /// Coupled-basis index range of sector `idx`.
    pub fn sector_range(&self, idx: usize) -> Range<usize> {
        self.offsets[idx]..self.offsets[idx + 1]
    }

    pub fn sector_index(&self, j: HalfInt) -> Option<usize> {
        self.sectors.iter().position(|s| s.j == j)
    }

    /// `(Ĵ⁺, Ĵ⁻)` for the whole system in the product basis.
    pub fn collective_product(&self) -> (CMatrix, CMatrix) {
        let id_c = CMatrix::identity(self.charger.dim, self.charger.dim);
        let id_b = CMatrix::identity(self.battery.dim, self.battery.dim);
        let jplus = kron(&self.charger.jplus, &id_b) + kron(&id_c, &self.battery.jplus);
        let jminus = jplus.adjoint();
        (jplus, jminus)
    }

    /// `(Ĵ⁺, Ĵ⁻)` in the coupled basis, assembled block by block.
    pub fn collective_coupled(&self) -> (CMatrix, CMatrix) {
        let d = self.dim();
        let mut jplus = CMatrix::zeros(d, d);
        for (i, s) in self.sectors.iter().enumerate() {
            let r = self.sector_range(i);
            jplus
                .view_mut((r.start, r.start), (s.dim, s.dim))
                .copy_from(&s.jplus);
        }
        let jminus = jplus.adjoint();
        (jplus, jminus)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }

    pub fn to_coupled(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.convert(rho, Basis::Product, Basis::Coupled)
    }

    pub fn to_product(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.convert(rho, Basis::Coupled, Basis::Product)
    }

    /// Returns the state in the requested basis, converting if needed.
    pub fn in_basis(&self, rho: &DensityMatrix, basis: Basis) -> Result<DensityMatrix> {
        match (rho.basis(), basis) {
            (a, b) if a == b => {
                self.check_dim(rho.dim())?;
                Ok(rho.clone())
            }
            (Basis::Product, Basis::Coupled) => self.to_coupled(rho),
            (Basis::Coupled, Basis::Product) => self.to_product(rho),
            (found, expected) => Err(Error::WrongBasis { expected, found }),
        }
    }

    fn convert(&self, rho: &DensityMatrix, from: Basis, to: Basis) -> Result<DensityMatrix> {
        if rho.basis() != from {
            return Err(Error::WrongBasis {
                expected: from,
                found: rho.basis(),
            });
        }
        self.check_dim(rho.dim())?;
        let data = match to {
            Basis::Coupled => &self.u_cg * rho.data() * self.u_cg.adjoint(),
            _ => self.u_cg.adjoint() * rho.data() * &self.u_cg,
        };
        DensityMatrix::from_parts(data, to, Some(self.dims()))
    }

    pub fn ket_to_coupled(&self, ket: &Ket) -> Result<Ket> {
        if ket.basis != Basis::Product {
            return Err(Error::WrongBasis {
                expected: Basis::Product,
                found: ket.basis,
            });
        }
        self.check_dim(ket.amplitudes.len())?;
        Ok(Ket {
            amplitudes: &self.u_cg * &ket.amplitudes,
            basis: Basis::Coupled,
        })
    }

    pub fn ket_to_product(&self, ket: &Ket) -> Result<Ket> {
        if ket.basis != Basis::Coupled {
            return Err(Error::WrongBasis {
                expected: Basis::Coupled,
                found: ket.basis,
            });
        }
        self.check_dim(ket.amplitudes.len())?;
        Ok(Ket {
            amplitudes: self.u_cg.adjoint() * &ket.amplitudes,
            basis: Basis::Product,
        })
    }

    /// Battery state `Tr_C ρ` in the battery Dicke basis (`M_B` descending).
    pub fn partial_trace_charger(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.basis() != Basis::Product {
            return Err(Error::WrongBasis {
                expected: Basis::Product,
                found: rho.basis(),
            });
        }
        self.check_dim(rho.dim())?;
        let data = partial_trace_first(rho.data(), self.dims());
        DensityMatrix::from_parts(data, Basis::Subsystem, None)
    }

    /// Charger state `Tr_B ρ` in the charger Dicke basis.
    pub fn partial_trace_battery(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.basis() != Basis::Product {
            return Err(Error::WrongBasis {
                expected: Basis::Product,
                found: rho.basis(),
            });
        }
        self.check_dim(rho.dim())?;
        let (dc, db) = self.dims();
        let data = CMatrix::from_fn(dc, dc, |i, k| {
            (0..db).map(|b| rho.data()[(i * db + b, k * db + b)]).sum()
        });
        DensityMatrix::from_parts(data, Basis::Subsystem, None)
    }

    /// Product-basis column vector from charger and battery kets.
    pub fn product_ket(&self, charger: &CVector, battery: &CVector) -> Result<Ket> {
        self.check_dim(charger.len() * battery.len())?;
        Ok(Ket {
            amplitudes: charger.kronecker(battery),
            basis: Basis::Product,
        })
    }
}

/// `Tr_A` of a matrix on `A ⊗ B` with `A` index major.
pub(crate) fn partial_trace_first(m: &CMatrix, (da, db): (usize, usize)) -> CMatrix {
    CMatrix::from_fn(db, db, |i, k| {
        (0..da).map(|a| m[(a * db + i, a * db + k)]).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, C64};

    fn basis_ket(d: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[i] = real(1.0);
        v
    }

    #[test]
    fn sector_structure() {
        let g = SystemGeometry::new(3, 2).unwrap();
        let js: Vec<i32> = g.sectors.iter().map(|s| s.j.twice()).collect();
        assert_eq!(js, vec![5, 3, 1]);
        assert_eq!(g.sectors.iter().map(|s| s.dim).sum::<usize>(), g.dim());
        assert_eq!(g.parity, Parity::Odd);
        assert_eq!(SystemGeometry::new(2, 2).unwrap().parity, Parity::Even);
        assert!(SystemGeometry::new(0, 2).is_err());
    }

    #[test]
    fn change_of_basis_is_unitary() {
        for n_c in 1..=8 {
            for n_b in 1..=8 {
                let g = SystemGeometry::new(n_c, n_b).unwrap();
                let u = g.change_of_basis();
                let err = max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(g.dim(), g.dim()));
                assert!(err < 1e-12, "({n_c},{n_b}): {err:e}");
            }
        }
    }

    #[test]
    fn coupled_rows_diagonalize_total_spin() {
        // brute force: J² = J⁻J⁺ + Jz² + Jz over the product space
        for (n_c, n_b) in [(1, 1), (2, 1), (3, 2), (4, 4)] {
            let g = SystemGeometry::new(n_c, n_b).unwrap();
            let (jp, jm) = g.collective_product();
            let dc = g.charger_sector().dim;
            let db = g.battery_sector().dim;
            let jz = kron(&g.charger_sector().jz, &CMatrix::identity(db, db))
                + kron(&CMatrix::identity(dc, dc), &g.battery_sector().jz);
            let j2 = &jm * &jp + &jz * &jz + &jz;
            let u = g.change_of_basis();
            for (si, s) in g.sectors.iter().enumerate() {
                let jv = s.j.value();
                for row in g.sector_range(si) {
                    let v = u.row(row).adjoint();
                    let m = s.m_at(row - g.sector_range(si).start).value();
                    assert!((&j2 * &v - &v * real(jv * (jv + 1.0))).norm() < 1e-12);
                    assert!((&jz * &v - &v * real(m)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn collective_operators_block_diagonal_in_coupled_basis() {
        for (n_c, n_b) in [(1, 1), (2, 3), (4, 4), (8, 8)] {
            let g = SystemGeometry::new(n_c, n_b).unwrap();
            let (jp, _) = g.collective_product();
            let u = g.change_of_basis();
            let jp_coupled = u * jp * u.adjoint();
            let (blocks, _) = g.collective_coupled();
            assert!(max_abs_diff(&jp_coupled, &blocks) < 1e-12);
        }
    }

    #[test]
    fn stretched_and_singlet_states() {
        let g = SystemGeometry::new(1, 1).unwrap();
        let up_up = Ket {
            amplitudes: basis_ket(4, 0),
            basis: Basis::Product,
        };
        let c = g.ket_to_coupled(&up_up).unwrap();
        assert!((c.amplitudes[0] - real(1.0)).norm() < 1e-15);

        let h = 1.0 / 2f64.sqrt();
        let singlet = Ket {
            amplitudes: (basis_ket(4, 1) - basis_ket(4, 2)) * real(h),
            basis: Basis::Product,
        };
        let c = g.ket_to_coupled(&singlet).unwrap();
        // |J=0,M=0⟩ is the last coupled coordinate
        assert!((c.amplitudes[3] - real(1.0)).norm() < 1e-14);
        assert!(c.amplitudes.rows(0, 3).norm() < 1e-14);
        let back = g.ket_to_product(&c).unwrap();
        assert!((back.amplitudes - singlet.amplitudes).norm() < 1e-14);
    }

    #[test]
    fn density_round_trip_and_basis_checks() {
        let g = SystemGeometry::new(2, 3).unwrap();
        let ket = CVector::from_fn(g.dim(), |i, _| C64::new(i as f64 + 1.0, 0.5 * i as f64));
        let rho = DensityMatrix::from_ket(&ket, Basis::Product, Some(g.dims())).unwrap();
        let coupled = g.to_coupled(&rho).unwrap();
        assert_eq!(coupled.basis(), Basis::Coupled);
        let back = g.to_product(&coupled).unwrap();
        assert!(max_abs_diff(back.data(), rho.data()) < 1e-12);
        assert!(g.to_product(&rho).is_err());
        assert!(g.to_coupled(&coupled).is_err());
        let other = SystemGeometry::new(1, 1).unwrap();
        assert!(matches!(
            other.to_coupled(&rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let g = SystemGeometry::new(2, 1).unwrap();
        let rc = CMatrix::from_diagonal(&CVector::from_vec(vec![real(0.5), real(0.3), real(0.2)]));
        let rb = CMatrix::from_row_slice(
            2,
            2,
            &[
                real(0.6),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                real(0.4),
            ],
        );
        let rho = DensityMatrix::new(kron(&rc, &rb), Basis::Product, Some(g.dims())).unwrap();
        let b = g.partial_trace_charger(&rho).unwrap();
        assert!(max_abs_diff(b.data(), &rb) < 1e-15);
        let c = g.partial_trace_battery(&rho).unwrap();
        assert!(max_abs_diff(c.data(), &rc) < 1e-15);
        let coupled = g.to_coupled(&rho).unwrap();
        assert!(g.partial_trace_charger(&coupled).is_err());
    }
}
