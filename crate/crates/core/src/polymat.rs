//! Polynomial matrices in the monomial or Chebyshev (first kind) basis.
//!
//! A [`PolyMatrix`] of grade `g` stores `g + 1` constant coefficients in
//! ascending degree; `coeffs[k]` multiplies the basis function of degree `k`.
//! Trailing zero coefficients are allowed, so `degree ≤ grade`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::sampler::Sampler;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    /// `φ₀ = 1`, `φ₁ = λ`, `φ_{j+1} = 2λφ_j − φ_{j−1}`.
    Chebyshev1,
}

impl Basis {
    /// Monomial coefficients of the basis functions of degree `0..=g`.
    /// Row `k` holds `β_k` in ascending powers.
    pub fn monomial_table(self, g: usize) -> Vec<Vec<f64>> {
        let mut t: Vec<Vec<f64>> = Vec::with_capacity(g + 1);
        for k in 0..=g {
            let mut row = vec![0.0; g + 1];
            match (self, k) {
                (Basis::Monomial, _) | (Basis::Chebyshev1, 0 | 1) => row[k] = 1.0,
                (Basis::Chebyshev1, _) => {
                    for j in 0..k {
                        row[j + 1] += 2.0 * t[k - 1][j];
                    }
                    for j in 0..=g {
                        row[j] -= t[k - 2][j];
                    }
                }
            }
            t.push(row);
        }
        t
    }

    /// Expansion of `β_i·β_j` as `(degree, weight)` terms.
    pub fn product(self, i: usize, j: usize) -> Vec<(usize, f64)> {
        match self {
            Basis::Monomial => vec![(i + j, 1.0)],
            // φ_i φ_j = ½(φ_{i+j} + φ_{|i−j|}).
            Basis::Chebyshev1 if i == 0 || j == 0 => vec![(i + j, 1.0)],
            Basis::Chebyshev1 => vec![(i + j, 0.5), (i.abs_diff(j), 0.5)],
        }
    }

    /// Scalar values `β_0(x), …, β_g(x)`.
    pub fn values(self, g: usize, x: C64) -> Vec<C64> {
        let mut v = Vec::with_capacity(g + 1);
        for k in 0..=g {
            let b = match (self, k) {
                (_, 0) => C64::new(1.0, 0.0),
                (Basis::Monomial, _) | (Basis::Chebyshev1, 1) => v[k - 1] * x,
                (Basis::Chebyshev1, _) => v[k - 1] * x * 2.0 - v[k - 2],
            };
            v.push(b);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::PolyMatrixJson", into = "crate::json::PolyMatrixJson")]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    basis: Basis,
    coeffs: Vec<CMatrix>,
}

impl PolyMatrix {
    /// Builds from ascending coefficients. At least one coefficient is required.
    pub fn new(basis: Basis, coeffs: Vec<CMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Malformed("polynomial matrix needs at least one coefficient".into()))?;
        let shape = first.shape();
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != shape) {
            return Err(Error::DimensionMismatch {
                op: "PolyMatrix::new",
                lhs: shape,
                rhs: bad.shape(),
            });
        }
        Ok(Self {
            rows: shape.0,
            cols: shape.1,
            basis,
            coeffs,
        })
    }

    pub fn zeros(rows: usize, cols: usize, grade: usize, basis: Basis) -> Self {
        Self {
            rows,
            cols,
            basis,
            coeffs: vec![CMatrix::zeros(rows, cols); grade + 1],
        }
    }

    pub fn constant(m: CMatrix, basis: Basis) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            basis,
            coeffs: vec![m],
        }
    }

    pub fn identity(n: usize, basis: Basis) -> Self {
        Self::constant(CMatrix::identity(n, n), basis)
    }

    /// `1×1` matrix from scalar coefficients.
    pub fn scalar(basis: Basis, coeffs: &[C64]) -> Result<Self> {
        Self::new(basis, coeffs.iter().map(|&c| CMatrix::from_element(1, 1, c)).collect())
    }

    /// `1×1` matrix from real scalar coefficients.
    pub fn scalar_real(basis: Basis, coeffs: &[f64]) -> Self {
        let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::scalar(basis, &c).expect("non-empty coefficient list")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn grade(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    /// Coefficient of degree `k`, zero beyond the grade.
    pub fn coeff(&self, k: usize) -> CMatrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.rows, self.cols))
    }

    pub fn into_coeffs(self) -> Vec<CMatrix> {
        self.coeffs
    }

    /// Largest `k` with `coeffs[k] ≠ 0`; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.iter().any(|z| *z != C64::new(0.0, 0.0)))
    }

    /// Degree ignoring coefficients with Frobenius norm `≤ atol`.
    pub fn numerical_degree(&self, atol: f64) -> Option<usize> {
        self.coeffs.iter().rposition(|c| dense::frobenius(c) > atol)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// `sqrt(Σ_k ‖P_k‖_F²)`.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn eval(&self, x: C64) -> CMatrix {
        let g = self.grade();
        match self.basis {
            Basis::Monomial => {
                let mut acc = self.coeffs[g].clone();
                for k in (0..g).rev() {
                    acc *= x;
                    acc += &self.coeffs[k];
                }
                acc
            }
            Basis::Chebyshev1 => {
                // Clenshaw: b_k = c_k + 2x b_{k+1} − b_{k+2}; P = c_0 + x b_1 − b_2.
                let zero = CMatrix::zeros(self.rows, self.cols);
                let (mut b1, mut b2) = (zero.clone(), zero);
                for k in (1..=g).rev() {
                    let b0 = &self.coeffs[k] + &b1 * (x * 2.0) - &b2;
                    b2 = b1;
                    b1 = b0;
                }
                &self.coeffs[0] + b1 * x - b2
            }
        }
    }

    /// Same grade, monomial basis, identical values.
    /// Upper bound on `‖P(x)‖_F`: `Σ ‖P_k‖_F ρ^k` with `|φ_k(x)| ≤ ρ^k`.
    pub fn eval_bound(&self, x: C64) -> f64 {
        let r = x.norm();
        let rho = match self.basis {
            Basis::Monomial => r.max(1.0),
            Basis::Chebyshev1 => r + (r * r + 1.0).sqrt(),
        };
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * rho + crate::dense::frobenius(c))
    }

    pub fn to_monomial(&self) -> PolyMatrix {
        if self.basis == Basis::Monomial {
            return self.clone();
        }
        let g = self.grade();
        let table = Basis::Chebyshev1.monomial_table(g);
        let mut out = vec![CMatrix::zeros(self.rows, self.cols); g + 1];
        for (k, ck) in self.coeffs.iter().enumerate() {
            for (j, &t) in table[k].iter().enumerate().take(k + 1) {
                if t != 0.0 {
                    out[j] += ck * C64::new(t, 0.0);
                }
            }
        }
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            basis: Basis::Monomial,
            coeffs: out,
        }
    }

    /// Zero-pads to grade `g`.
    pub fn with_grade(&self, g: usize) -> Result<PolyMatrix> {
        let deg = self.degree().unwrap_or(0);
        if g < deg {
            return Err(Error::GradeTooSmall { grade: g, degree: deg });
        }
        let mut coeffs: Vec<CMatrix> = self.coeffs.iter().take(g + 1).cloned().collect();
        coeffs.resize(g + 1, CMatrix::zeros(self.rows, self.cols));
        Ok(PolyMatrix { coeffs, ..self.clone() })
    }

    /// Monomial `λ^g P(1/λ)`.
    pub fn reversal(&self, g: usize) -> Result<PolyMatrix> {
        let mut m = self.to_monomial().with_grade(g)?;
        m.coeffs.reverse();
        Ok(m)
    }

    /// Maximum numerical rank of `P(λ₀)` over `k` unit-circle samples.
    pub fn generic_rank_with(&self, sampler: &mut Sampler, k: usize, rtol: Option<f64>) -> Result<usize> {
        let mut best = 0;
        for x in sampler.unit_circle_points(k) {
            best = best.max(dense::rank(&self.eval(x), rtol)?);
        }
        Ok(best)
    }

    /// Rank over the rational functions, from 5 seeded samples.
    pub fn generic_rank(&self, sampler: &mut Sampler) -> Result<usize> {
        self.generic_rank_with(sampler, 5, None)
    }

    fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> PolyMatrix {
        let coeffs: Vec<CMatrix> = self.coeffs.iter().map(f).collect();
        let (rows, cols) = coeffs[0].shape();
        PolyMatrix {
            rows,
            cols,
            basis: self.basis,
            coeffs,
        }
    }

    pub fn scale(&self, s: C64) -> PolyMatrix {
        self.map(|c| c * s)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn transpose(&self) -> PolyMatrix {
        self.map(|c| c.transpose())
    }

    /// Rows `r` and columns `c` of every coefficient.
    pub fn block(&self, r: Range<usize>, c: Range<usize>) -> PolyMatrix {
        let (r0, c0) = (r.start, c.start);
        let (nr, nc) = (r.len(), c.len());
        self.map(|m| m.view((r0, c0), (nr, nc)).into_owned())
    }

    /// Constant left factor: `M·P(λ)`.
    pub fn left_mul_const(&self, m: &CMatrix) -> Result<PolyMatrix> {
        if m.ncols() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "left_mul_const",
                lhs: m.shape(),
                rhs: self.shape(),
            });
        }
        Ok(self.map(|c| m * c))
    }

    /// Constant right factor: `P(λ)·M`.
    pub fn right_mul_const(&self, m: &CMatrix) -> Result<PolyMatrix> {
        if m.nrows() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "right_mul_const",
                lhs: self.shape(),
                rhs: m.shape(),
            });
        }
        Ok(self.map(|c| c * m))
    }

    /// Brings two operands to a common basis (monomial unless both agree).
    fn harmonize(a: &PolyMatrix, b: &PolyMatrix) -> (PolyMatrix, PolyMatrix) {
        if a.basis == b.basis {
            (a.clone(), b.clone())
        } else {
            (a.to_monomial(), b.to_monomial())
        }
    }

    /// Sum; grade is the larger of the two.
    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let (a, b) = Self::harmonize(self, other);
        let g = a.grade().max(b.grade());
        let coeffs = (0..=g).map(|k| a.coeff(k) + b.coeff(k)).collect();
        Ok(PolyMatrix { coeffs, ..a })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.add(&other.neg())
    }

    /// Product with grade the sum of the two, in the shared basis (monomial
    /// when the bases differ).
    pub fn matmul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let (a, b) = Self::harmonize(self, other);
        let (ga, gb) = (a.grade(), b.grade());
        let mut coeffs = vec![CMatrix::zeros(a.rows, b.cols); ga + gb + 1];
        for (i, ai) in a.coeffs.iter().enumerate() {
            for (j, bj) in b.coeffs.iter().enumerate() {
                let prod = ai * bj;
                for (k, w) in a.basis.product(i, j) {
                    coeffs[k] += &prod * C64::new(w, 0.0);
                }
            }
        }
        Ok(PolyMatrix {
            rows: a.rows,
            cols: b.cols,
            basis: a.basis,
            coeffs,
        })
    }

    fn stack(parts: &[&PolyMatrix], horizontal: bool) -> Result<PolyMatrix> {
        let first = parts.first().ok_or_else(|| Error::Malformed("empty stack".into()))?;
        let same_basis = parts.iter().all(|p| p.basis == first.basis);
        let parts: Vec<PolyMatrix> = parts
            .iter()
            .map(|p| if same_basis { (*p).clone() } else { p.to_monomial() })
            .collect();
        let basis = parts[0].basis;
        for p in &parts {
            let ok = if horizontal {
                p.rows == first.rows
            } else {
                p.cols == first.cols
            };
            if !ok {
                return Err(Error::DimensionMismatch {
                    op: if horizontal { "hstack" } else { "vstack" },
                    lhs: first.shape(),
                    rhs: p.shape(),
                });
            }
        }
        let g = parts.iter().map(|p| p.grade()).max().unwrap_or(0);
        let (rows, cols) = if horizontal {
            (first.rows, parts.iter().map(|p| p.cols).sum())
        } else {
            (parts.iter().map(|p| p.rows).sum(), first.cols)
        };
        let coeffs = (0..=g)
            .map(|k| {
                let mut m = CMatrix::zeros(rows, cols);
                let mut off = 0;
                for p in &parts {
                    let c = p.coeff(k);
                    if horizontal {
                        m.view_mut((0, off), c.shape()).copy_from(&c);
                        off += p.cols;
                    } else {
                        m.view_mut((off, 0), c.shape()).copy_from(&c);
                        off += p.rows;
                    }
                }
                m
            })
            .collect();
        Ok(PolyMatrix {
            rows,
            cols,
            basis,
            coeffs,
        })
    }

    pub fn hstack(parts: &[&PolyMatrix]) -> Result<PolyMatrix> {
        Self::stack(parts, true)
    }

    pub fn vstack(parts: &[&PolyMatrix]) -> Result<PolyMatrix> {
        Self::stack(parts, false)
    }

    /// Matrix sending the stacked coefficients `[v_0; …; v_g]` of a vector
    /// polynomial of grade `g` (same basis) to those of `P·v`, grade `grade(P) + g`.
    pub fn convolution(&self, g: usize) -> CMatrix {
        let gp = self.grade();
        let (r, c) = self.shape();
        let mut t = CMatrix::zeros(r * (gp + g + 1), c * (g + 1));
        for (i, pi) in self.coeffs.iter().enumerate() {
            for j in 0..=g {
                for (k, w) in self.basis.product(i, j) {
                    let mut v = t.view_mut((k * r, j * c), (r, c));
                    v += pi * C64::new(w, 0.0);
                }
            }
        }
        t
    }

    /// Inverse of stacking: column vector of `rows·(g+1)` entries to a
    /// `rows × 1` polynomial of grade `g`.
    pub fn from_stacked(basis: Basis, rows: usize, v: &[C64]) -> Result<PolyMatrix> {
        if rows == 0 || !v.len().is_multiple_of(rows) || v.is_empty() {
            return Err(Error::Malformed(format!(
                "cannot split {} entries into blocks of {rows}",
                v.len()
            )));
        }
        let coeffs = v
            .chunks(rows)
            .map(|ch| CMatrix::from_column_slice(rows, 1, ch))
            .collect();
        PolyMatrix::new(basis, coeffs)
    }

    /// First `count` Taylor coefficients at `x`: `P(x + t) = Σ_j T_j t^j`.
    pub fn taylor(&self, x: C64, count: usize) -> Vec<CMatrix> {
        let mut a = self.to_monomial().coeffs;
        let n = a.len();
        // Repeated synthetic division by (λ − x); after pass i, a[i] is T_i.
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let next = a[k + 1].clone();
                a[k] += next * x;
            }
        }
        a.resize(count.max(n), CMatrix::zeros(self.rows, self.cols));
        a.truncate(count);
        a
    }

    /// Sets coefficient entries with modulus `≤ atol` to exactly zero.
    pub fn clean(&self, atol: f64) -> PolyMatrix {
        self.map(|c| c.map(|z| if z.norm() <= atol { C64::new(0.0, 0.0) } else { z }))
    }

    /// Keeps the coefficients of degree `0..=g`, padding with zeros.
    pub fn truncated(&self, g: usize) -> PolyMatrix {
        let coeffs = (0..=g).map(|k| self.coeff(k)).collect();
        PolyMatrix { coeffs, ..self.clone() }
    }

    /// Drops trailing coefficients that are exactly zero, keeping grade ≥ 0.
    pub fn trimmed(&self) -> PolyMatrix {
        let d = self.degree().unwrap_or(0);
        let mut out = self.clone();
        out.coeffs.truncate(d + 1);
        out
    }

    /// Largest coefficient-wise difference after bringing both to monomial form.
    pub fn max_abs_diff(&self, other: &PolyMatrix) -> Result<f64> {
        let d = self.sub(other)?.to_monomial();
        Ok(d.coeffs
            .iter()
            .flat_map(|c| c.iter().map(|z| z.norm()))
            .fold(0.0, f64::max))
    }
}
