//! Minimal polynomial bases of right and left null spaces by a degree sweep
//! over block convolution matrices.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::polymat::{Basis, PolyMatrix};
use crate::sampler::Sampler;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimalBasisResult {
    pub side: Side,
    /// Basis vectors as columns (right) or rows (left), monomial basis.
    pub vectors: PolyMatrix,
    /// Degrees of the basis vectors, ascending.
    pub indices: Vec<usize>,
}

impl MinimalBasisResult {
    pub fn empty(side: Side, len: usize) -> Self {
        let vectors = match side {
            Side::Right => PolyMatrix::zeros(len, 0, 0, Basis::Monomial),
            Side::Left => PolyMatrix::zeros(0, len, 0, Basis::Monomial),
        };
        Self {
            side,
            vectors,
            indices: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Vector `i` as a column (right) or row (left), trimmed to its degree.
    pub fn vector(&self, i: usize) -> PolyMatrix {
        let v = match self.side {
            Side::Right => self.vectors.block(0..self.vectors.rows(), i..i + 1),
            Side::Left => self.vectors.block(i..i + 1, 0..self.vectors.cols()),
        };
        v.truncated(self.indices[i])
    }

    /// Assembles from `(degree, column polynomial)` pairs in ascending degree.
    pub(crate) fn from_columns(side: Side, len: usize, cols: Vec<(usize, PolyMatrix)>) -> Result<Self> {
        if cols.is_empty() {
            return Ok(Self::empty(side, len));
        }
        let g = cols.iter().map(|(d, _)| *d).max().unwrap_or(0);
        let padded: Vec<PolyMatrix> = cols.iter().map(|(_, v)| v.with_grade(g)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&PolyMatrix> = padded.iter().collect();
        let stacked = PolyMatrix::hstack(&refs)?;
        let vectors = match side {
            Side::Right => stacked,
            Side::Left => stacked.transpose(),
        };
        Ok(Self {
            side,
            vectors,
            indices: cols.into_iter().map(|(d, _)| d).collect(),
        })
    }
}

/// First entry whose modulus is within a relative `1e-8` of the largest,
/// so near-ties resolve by position rather than by rounding.
pub(crate) fn pivot_index<'a>(entries: impl Iterator<Item = &'a C64> + Clone) -> usize {
    let max = entries.clone().map(|z| z.norm()).fold(0.0, f64::max);
    entries
        .into_iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-8))
        .unwrap_or(0)
}

/// Polynomial column of `rows` entries from stacked coefficients.
fn column_from_stacked(rows: usize, v: &[C64]) -> PolyMatrix {
    PolyMatrix::from_stacked(Basis::Monomial, rows, v).expect("stacked length is a multiple of rows")
}

/// Right minimal basis by increasing degree.
///
/// At degree `δ` the kernel of the convolution matrix `T_δ` is reduced
/// modulo the shifts `λ^j v` of the vectors already found; what remains are
/// the new basis vectors of degree exactly `δ`.
fn right_sweep(p: &PolyMatrix, rtol: Option<f64>) -> Result<Vec<(usize, PolyMatrix)>> {
    let p = p.to_monomial();
    let (_, c) = p.shape();
    let nullity = c - p.generic_rank_with(&mut Sampler::default(), 5, rtol)?;
    if nullity == 0 {
        return Ok(Vec::new());
    }
    let cap = (p.rows() + p.cols()) * p.grade().max(1);
    let mut found: Vec<(usize, DVector<C64>)> = Vec::new();
    for delta in 0..=cap {
        let t = p.convolution(delta);
        let ker = dense::right_nullspace(&t, rtol)?;
        let len = c * (delta + 1);
        let shifts: Vec<DVector<C64>> = found
            .iter()
            .flat_map(|(db, v)| {
                (0..=delta - db).map(move |j| {
                    let mut s = DVector::zeros(len);
                    s.rows_mut(j * c, v.len()).copy_from(v);
                    s
                })
            })
            .collect();
        let (w, dim_s) = if shifts.is_empty() {
            (ker.clone(), 0)
        } else {
            let s = CMatrix::from_columns(&shifts);
            let dec = dense::svd(&s)?;
            let rk = dense::rank_from_singular_values(&dec.s, s.nrows(), s.ncols(), None);
            let q = dec.u.columns(0, rk).into_owned();
            let proj = &q * (q.adjoint() * &ker);
            (&ker - proj, rk)
        };
        let k_new = ker.ncols().saturating_sub(dim_s);
        if k_new > 0 {
            let dec = dense::svd(&w)?;
            for i in 0..k_new {
                let mut v = dec.u.column(i).into_owned();
                // Largest entry of the leading coefficient becomes 1.
                let imax = pivot_index(v.rows(delta * c, c).iter());
                let pivot = v[delta * c + imax];
                if pivot.norm() == 0.0 {
                    return Err(Error::Backend("degree sweep produced a vector of lower degree".into()));
                }
                v /= pivot;
                v[delta * c + imax] = C64::new(1.0, 0.0);
                found.push((delta, v));
            }
        }
        if found.len() >= nullity {
            found.truncate(nullity);
            return Ok(found
                .into_iter()
                .map(|(d, v)| (d, column_from_stacked(c, v.as_slice())))
                .collect());
        }
    }
    Err(Error::SweepCapExceeded(cap))
}

/// Minimal basis of the right or left null space of any polynomial matrix.
pub fn polynomial_nullspace_of(p: &PolyMatrix, side: Side, rtol: Option<f64>) -> Result<MinimalBasisResult> {
    let (cols, len) = match side {
        Side::Right => (right_sweep(p, rtol)?, p.cols()),
        Side::Left => (right_sweep(&p.transpose(), rtol)?, p.rows()),
    };
    MinimalBasisResult::from_columns(side, len, cols)
}

/// Minimal basis of the null space of the pencil `L1 λ + L0`.
///
/// A regular side yields an empty basis.
pub fn polynomial_nullspace(l0: &CMatrix, l1: &CMatrix, side: Side) -> Result<MinimalBasisResult> {
    if l0.shape() != l1.shape() {
        return Err(Error::DimensionMismatch {
            op: "polynomial_nullspace",
            lhs: l0.shape(),
            rhs: l1.shape(),
        });
    }
    let p = PolyMatrix::new(Basis::Monomial, vec![l0.clone(), l1.clone()])?;
    polynomial_nullspace_of(&p, side, None)
}

/// The three minimal-basis conditions for a computed basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisCertificate {
    /// `‖P·V‖ / (‖P‖‖V‖)` on coefficients (or `V·P` on the left).
    pub residual: f64,
    /// Full rank at five random points and at zero.
    #[serde(rename = "fullRank")]
    pub full_rank: bool,
    /// Highest-degree coefficient matrix has full rank.
    pub reduced: bool,
}

impl BasisCertificate {
    pub fn passes(&self, residual_tol: f64) -> bool {
        self.residual <= residual_tol && self.full_rank && self.reduced
    }
}

/// Pointwise rank and reducedness of a basis with the given degrees.
pub fn structure_checks(vectors: &PolyMatrix, degrees: &[usize], side: Side) -> Result<(bool, bool)> {
    let k = degrees.len();
    if k == 0 {
        return Ok((true, true));
    }
    let v = match side {
        Side::Right => vectors.clone(),
        Side::Left => vectors.transpose(),
    };
    let rtol = Some(1e-8);
    let mut pts = Sampler::new(crate::DEFAULT_SEED ^ 0xB45E).unit_circle_points(5);
    pts.push(C64::new(0.0, 0.0));
    let mut full = true;
    for x in pts {
        full &= dense::rank(&v.eval(x), rtol)? == k;
    }
    let mut hc = CMatrix::zeros(v.rows(), k);
    let mono = v.to_monomial();
    for (i, &d) in degrees.iter().enumerate() {
        hc.set_column(i, &mono.coeff(d).column(i));
    }
    Ok((full, dense::rank(&hc, rtol)? == k))
}

pub fn certify_basis(p: &PolyMatrix, basis: &MinimalBasisResult) -> Result<BasisCertificate> {
    if basis.is_empty() {
        return Ok(BasisCertificate {
            residual: 0.0,
            full_rank: true,
            reduced: true,
        });
    }
    let prod = match basis.side {
        Side::Right => p.matmul(&basis.vectors)?,
        Side::Left => basis.vectors.matmul(p)?,
    };
    let residual = prod.norm() / (p.norm() * basis.vectors.norm()).max(f64::MIN_POSITIVE);
    let (full_rank, reduced) = structure_checks(&basis.vectors, &basis.indices, basis.side)?;
    Ok(BasisCertificate {
        residual,
        full_rank,
        reduced,
    })
}
