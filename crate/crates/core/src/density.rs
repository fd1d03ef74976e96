//! Density matrices and kets tagged with the basis they are expressed in.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_error, CMatrix, CVector};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `|J_C, M_C⟩ ⊗ |J_B, M_B⟩`, charger index major.
    Product,
    /// `⊕_J |J, M⟩`, sectors by descending `J`, `M` descending within each.
    Coupled,
    /// Dicke basis of a single subsystem (for example the battery after
    /// tracing out the charger).
    Subsystem,
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
    basis: Basis,
    dims: Option<(usize, usize)>,
}

impl DensityMatrix {
    /// Validates all invariants. `dims` is required for the product basis.
    pub fn new(data: CMatrix, basis: Basis, dims: Option<(usize, usize)>) -> Result<Self> {
        let rho = Self::from_parts(data, basis, dims)?;
        rho.validate(HERMITICITY_TOL, TRACE_TOL, POSITIVITY_TOL)?;
        Ok(rho)
    }

    /// Checks shapes only; used for states produced by trusted numerical paths.
    pub(crate) fn from_parts(
        data: CMatrix,
        basis: Basis,
        dims: Option<(usize, usize)>,
    ) -> Result<Self> {
        let n = data.nrows();
        if data.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: data.ncols(),
            });
        }
        match (basis, dims) {
            (Basis::Product, None) => {
                return Err(Error::InvalidState(
                    "product-basis state needs subsystem dimensions".into(),
                ))
            }
            (_, Some((a, b))) if a * b != n => {
                return Err(Error::DimensionMismatch {
                    expected: a * b,
                    found: n,
                })
            }
            _ => {}
        }
        Ok(Self { data, basis, dims })
    }

    /// Pure state `|ψ⟩⟨ψ|`; the ket is normalized first.
    pub fn from_ket(ket: &CVector, basis: Basis, dims: Option<(usize, usize)>) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite ket".into()));
        }
        let psi = ket / crate::linalg::real(norm);
        Self::from_parts(&psi * psi.adjoint(), basis, dims)
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.data * &self.data).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigenvalues(&self.data)?
            .first()
            .copied()
            .unwrap_or(0.0))
    }

    pub fn validate(&self, herm_tol: f64, trace_tol: f64, pos_tol: f64) -> Result<()> {
        let herm = hermiticity_error(&self.data);
        if herm > herm_tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian: deviation {herm:e}"
            )));
        }
        let tr = self.data.trace();
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = self.min_eigenvalue()?;
        if min_eig < -pos_tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    /// Frobenius norm of the difference; both states must share a basis.
    pub fn distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::WrongBasis {
                expected: self.basis,
                found: other.basis,
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok((&self.data - &other.data).norm())
    }
}

/// State vector tagged with its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    pub amplitudes: CVector,
    pub basis: Basis,
}
