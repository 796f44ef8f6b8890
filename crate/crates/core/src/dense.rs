//! Dense complex linear algebra backend.
//!
//! Storage is `nalgebra::DMatrix<Complex64>` throughout the crate; the
//! factorizations that nalgebra lacks for complex data (full SVD with both
//! unitary factors, generalized Schur / QZ) are delegated to `faer`.

use faer::{Mat, MatRef};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

fn to_faer(m: &CMatrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full singular value decomposition `M = U diag(s) V^H`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(m: &CMatrix) -> Result<Svd> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(Svd {
            u: CMatrix::identity(r, r),
            s: Vec::new(),
            v: CMatrix::identity(c, c),
        });
    }
    let f = to_faer(m);
    let dec = f
        .svd()
        .map_err(|e| Error::Backend(format!("svd did not converge: {e:?}")))?;
    let k = r.min(c);
    let s = (0..k).map(|i| dec.S()[i].re).collect();
    Ok(Svd {
        u: from_faer(dec.U()),
        s,
        v: from_faer(dec.V()),
    })
}

pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(Vec::new());
    }
    let f = to_faer(m);
    f.singular_values()
        .map_err(|e| Error::Backend(format!("svd did not converge: {e:?}")))
}

/// Relative threshold used when none is configured: `max(rows, cols) · ε`.
pub fn default_rank_rtol(rows: usize, cols: usize) -> f64 {
    rows.max(cols).max(1) as f64 * f64::EPSILON
}

/// Numerical rank from sorted singular values. A singular value counts as
/// zero when `σ ≤ rtol · σ_max`.
pub fn rank_from_singular_values(s: &[f64], rows: usize, cols: usize, rtol: Option<f64>) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let thresh = rtol.unwrap_or_else(|| default_rank_rtol(rows, cols)) * smax;
    s.iter().filter(|&&x| x > thresh).count()
}

pub fn rank(m: &CMatrix, rtol: Option<f64>) -> Result<usize> {
    let s = singular_values(m)?;
    Ok(rank_from_singular_values(&s, m.nrows(), m.ncols(), rtol))
}

/// Rank with threshold `rtol·max(σ_max, scale)`, so near-zero matrices drawn
/// from a larger family count as rank deficient.
pub fn rank_scaled(m: &CMatrix, rtol: Option<f64>, scale: f64) -> Result<usize> {
    let s = singular_values(m)?;
    let smax = s.first().copied().unwrap_or(0.0).max(scale);
    if smax == 0.0 {
        return Ok(0);
    }
    let thresh = rtol.unwrap_or_else(|| default_rank_rtol(m.nrows(), m.ncols())) * smax;
    Ok(s.iter().filter(|&&x| x > thresh).count())
}

/// Orthonormal basis of the numerical right nullspace, one vector per column.
pub fn right_nullspace(m: &CMatrix, rtol: Option<f64>) -> Result<CMatrix> {
    let dec = svd(m)?;
    let r = rank_from_singular_values(&dec.s, m.nrows(), m.ncols(), rtol);
    let c = m.ncols();
    Ok(dec.v.columns(r, c - r).into_owned())
}

/// Basis of the numerical left nullspace as rows `y^T` with `y^T M ≈ 0`.
pub fn left_nullspace(m: &CMatrix, rtol: Option<f64>) -> Result<CMatrix> {
    let dec = svd(m)?;
    let r = rank_from_singular_values(&dec.s, m.nrows(), m.ncols(), rtol);
    let rows = m.nrows();
    // u_k^H M = σ_k v_k^H, so the rows of U^H past the rank annihilate M.
    Ok(dec.u.columns(r, rows - r).adjoint())
}

/// Right and left singular vectors of the smallest singular value, returned
/// as `(x, y^T, σ_min)` with `M x ≈ σ` and `y^T M ≈ σ`.
pub fn smallest_singular_pair(m: &CMatrix) -> Result<(nalgebra::DVector<C64>, nalgebra::RowDVector<C64>, f64)> {
    let dec = svd(m)?;
    let (r, c) = m.shape();
    let sigma = if r == c {
        dec.s.last().copied().unwrap_or(0.0)
    } else {
        0.0
    };
    let x = dec.v.column(c - 1).into_owned();
    let y = dec.u.column(r - 1).adjoint();
    Ok((x, y, sigma))
}

/// Solve `A X = B` for square `A` with partial pivoting LU.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    if a.nrows() == 0 {
        return Some(CMatrix::zeros(0, b.ncols()));
    }
    a.clone().lu().solve(b)
}

/// Minimum-norm least-squares solution of `A X ≈ B`.
pub fn lstsq(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let dec = svd(a)?;
    let r = rank_from_singular_values(&dec.s, a.nrows(), a.ncols(), None);
    let uh_b = dec.u.columns(0, r).adjoint() * b;
    let mut y = uh_b;
    for (i, mut row) in y.row_iter_mut().enumerate() {
        row /= C64::new(dec.s[i], 0.0);
    }
    Ok(dec.v.columns(0, r) * y)
}

pub fn determinant(a: &CMatrix) -> C64 {
    if a.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    a.clone().lu().determinant()
}

/// Generalized eigenvalues of `A x = λ B x` as homogeneous pairs `(α, β)`
/// with `λ = α / β`, together with the right eigenvectors (columns).
pub fn generalized_eigen(a: &CMatrix, b: &CMatrix) -> Result<(Vec<(C64, C64)>, CMatrix)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    // The backend's workspace sizing panics on 1×1 input.
    if n == 1 {
        return Ok((vec![(a[(0, 0)], b[(0, 0)])], CMatrix::identity(1, 1)));
    }
    let fa = to_faer(a);
    let fb = to_faer(b);
    let dec = fa
        .generalized_eigen(&fb)
        .map_err(|e| Error::Backend(format!("QZ did not converge: {e:?}")))?;
    let pairs = (0..n).map(|i| (dec.S_a()[i], dec.S_b()[i])).collect();
    Ok((pairs, from_faer(dec.U())))
}

/// Eigenvalues of a square complex matrix.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let fa = to_faer(a);
    fa.eigenvalues()
        .map_err(|e| Error::Backend(format!("eigenvalue iteration did not converge: {e:?}")))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
