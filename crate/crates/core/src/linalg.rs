//! Dense complex matrix helpers shared by the physics modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_error(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// `(m + m†) / 2`
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * real(0.5)
}

/// Column-stacking vectorization, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
pub fn vectorize(m: &CMatrix) -> CVector {
    // nalgebra stores matrices column-major
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, nrows: usize, ncols: usize) -> Result<CMatrix> {
    if v.len() != nrows * ncols {
        return Err(Error::DimensionMismatch {
            expected: nrows * ncols,
            found: v.len(),
        });
    }
    Ok(CMatrix::from_column_slice(nrows, ncols, v.as_slice()))
}

/// Iteration cap for the iterative decompositions; far above what a
/// well-conditioned input of desk-scale size needs.
const MAX_ITERATIONS: usize = 100_000;

/// The iterative decompositions never terminate on NaN input.
fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::LinearAlgebra("matrix has non-finite entries".into()))
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Only the lower triangle is read, so the input should be Hermitian to
/// round-off.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    check_finite(m)?;
    let eig = SymmetricEigen::try_new(hermitian_part(m), f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| Error::LinearAlgebra("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|(values, _)| values)
}

/// Singular value decomposition with singular values sorted descending.
pub struct SortedSvd {
    pub singular_values: Vec<f64>,
    /// Left singular vectors as columns, in the order of `singular_values`.
    pub u: CMatrix,
    /// Right singular vectors as columns, in the order of `singular_values`.
    pub v: CMatrix,
}

pub fn svd(m: &CMatrix) -> Result<SortedSvd> {
    let n = m.nrows().min(m.ncols());
    check_finite(m)?;
    let dec = SVD::try_new_unordered(m.clone(), true, true, f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| Error::LinearAlgebra("SVD did not converge".into()))?;
    let u = dec.u.expect("u requested");
    let v_t = dec.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    Ok(SortedSvd {
        singular_values: order.iter().map(|&k| dec.singular_values[k]).collect(),
        u: CMatrix::from_fn(u.nrows(), n, |i, j| u[(i, order[j])]),
        v: CMatrix::from_fn(v_t.ncols(), n, |i, j| v_t[(order[j], i)].conj()),
    })
}

/// Right and left null spaces of a square matrix.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Columns spanning `{x : A x = 0}`.
    pub right: CMatrix,
    /// Columns spanning `{y : A† y = 0}`.
    pub left: CMatrix,
}

impl NullSpace {
    pub fn dim(&self) -> usize {
        self.right.ncols()
    }
}

/// Outcome of numerical rank detection, before deciding whether it is trustworthy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankGap {
    pub null_dim: usize,
    /// Ratio between the smallest retained and the largest discarded singular
    /// value; infinite when nothing or everything is discarded.
    pub gap: f64,
}

/// Null spaces of a square matrix from one SVD. Singular values below
/// `rel_tol * s_max` count as zero; a gap ratio below `min_gap` is reported
/// through the returned [`RankGap`] so the caller can refuse to guess.
pub fn null_space(m: &CMatrix, rel_tol: f64) -> Result<(NullSpace, RankGap)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let s_max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if s_max == 0.0 {
        let id = CMatrix::identity(n, n);
        return Ok((
            NullSpace {
                right: id.clone(),
                left: id,
            },
            RankGap {
                null_dim: n,
                gap: f64::INFINITY,
            },
        ));
    }
    let dec = svd(m)?;
    let s = &dec.singular_values;
    let threshold = rel_tol * s[0];
    let rank = s.iter().take_while(|&&x| x >= threshold).count();
    let null_dim = n - rank;
    let gap = if null_dim == 0 || rank == 0 {
        f64::INFINITY
    } else {
        s[rank - 1] / s[rank].max(f64::MIN_POSITIVE)
    };
    let right = dec.v.columns(rank, null_dim).into_owned();
    let left = dec.u.columns(rank, null_dim).into_owned();
    Ok((NullSpace { right, left }, RankGap { null_dim, gap }))
}

/// Solve a small dense linear system `a x = b`.
pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::LinearAlgebra("singular linear system".into()))
}

pub fn solve_matrix(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::LinearAlgebra("singular linear system".into()))
}

/// Matrix function `f(H)` of a Hermitian matrix through its eigenbasis.
pub fn hermitian_function(h: &CMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&x| f(x)),
    ));
    Ok(&vectors * diag * vectors.adjoint())
}
