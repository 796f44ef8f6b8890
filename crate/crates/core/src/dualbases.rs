//! Dual minimal basis pairs `(K, N)` with unimodular completions.
//!
//! For block size `s` and grade `d`, `K` is `(d−1)s × ds` of degree one and
//! `N` is `s × ds` with every row of degree `d − 1`. The completions satisfy
//! `K̂Nᵀ = I`, `KN̂ᵀ = I`, `K̂N̂ᵀ = 0`, so `[K; K̂]⁻¹ = [N̂ᵀ Nᵀ]`.

use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::polymat::{Basis, PolyMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualBasisPair {
    pub s: usize,
    pub d: usize,
    pub basis: Basis,
    pub k: PolyMatrix,
    pub n: PolyMatrix,
    pub khat: PolyMatrix,
    pub nhat: PolyMatrix,
}

impl DualBasisPair {
    /// Degree of `N`.
    pub fn rho(&self) -> usize {
        self.d - 1
    }
}

/// Places `w·I_s` at block `(bi, bj)`.
fn put_identity(m: &mut CMatrix, s: usize, bi: usize, bj: usize, w: f64) {
    for t in 0..s {
        m[(bi * s + t, bj * s + t)] += C64::new(w, 0.0);
    }
}

fn pair_from(s: usize, d: usize, basis: Basis, k0: CMatrix, k1: CMatrix) -> Result<DualBasisPair> {
    let k = PolyMatrix::new(basis, vec![k0, k1])?;
    // N block j is β_{d−1−j}·I.
    let mut ncoeffs = vec![CMatrix::zeros(s, d * s); d];
    for (j, c) in (0..d).rev().enumerate() {
        put_identity(&mut ncoeffs[c], s, 0, j, 1.0);
    }
    let n = PolyMatrix::new(basis, ncoeffs)?;
    let (khat, nhat) = completion(&k, &n)?;
    Ok(DualBasisPair {
        s,
        d,
        basis,
        k,
        n,
        khat,
        nhat,
    })
}

fn check_sizes(s: usize, d: usize) -> Result<()> {
    if s == 0 || d == 0 {
        return Err(Error::Precondition(format!(
            "dual pair needs s ≥ 1 and d ≥ 1, got s={s}, d={d}"
        )));
    }
    Ok(())
}

/// Block Kronecker pair: `K` rows `[−I, λI]`, `N = [λ^{d−1}I … λI I]`.
pub fn monomial_pair(s: usize, d: usize) -> Result<DualBasisPair> {
    check_sizes(s, d)?;
    let rows = (d - 1) * s;
    let mut k0 = CMatrix::zeros(rows, d * s);
    let mut k1 = CMatrix::zeros(rows, d * s);
    for i in 0..d - 1 {
        put_identity(&mut k0, s, i, i, -1.0);
        put_identity(&mut k1, s, i, i + 1, 1.0);
    }
    pair_from(s, d, Basis::Monomial, k0, k1)
}

/// Chebyshev pair: interior rows `[−½I, λI, −½I]`, last row `[−I, λI]`,
/// `N = [φ_{d−1}I … φ₁I φ₀I]`.
pub fn chebyshev_pair(s: usize, d: usize) -> Result<DualBasisPair> {
    check_sizes(s, d)?;
    let rows = (d - 1) * s;
    let mut k0 = CMatrix::zeros(rows, d * s);
    let mut k1 = CMatrix::zeros(rows, d * s);
    if d >= 2 {
        for i in 0..d - 2 {
            put_identity(&mut k0, s, i, i, -0.5);
            put_identity(&mut k1, s, i, i + 1, 1.0);
            put_identity(&mut k0, s, i, i + 2, -0.5);
        }
        put_identity(&mut k0, s, d - 2, d - 2, -1.0);
        put_identity(&mut k1, s, d - 2, d - 1, 1.0);
    }
    pair_from(s, d, Basis::Chebyshev1, k0, k1)
}

pub fn pair(basis: Basis, s: usize, d: usize) -> Result<DualBasisPair> {
    match basis {
        Basis::Monomial => monomial_pair(s, d),
        Basis::Chebyshev1 => chebyshev_pair(s, d),
    }
}

/// `K̂ = [0 … 0 I_s]` and the unique `N̂` of degree `≤ d − 2` with
/// `KN̂ᵀ = I`, `K̂N̂ᵀ = 0`.
///
/// `K̂` relies on the last block of `Nᵀ` being `β₀I = I`.
pub fn completion(k: &PolyMatrix, n: &PolyMatrix) -> Result<(PolyMatrix, PolyMatrix)> {
    let s = n.rows();
    let width = n.cols();
    if k.cols() != width || s == 0 || !width.is_multiple_of(s) || k.rows() + s != width {
        return Err(Error::Precondition(
            "malformed dual pair: incompatible K and N sizes".into(),
        ));
    }
    let basis = k.basis();
    let d = width / s;
    let mut sel = CMatrix::zeros(s, width);
    put_identity(&mut sel, s, 0, d - 1, 1.0);
    let khat = PolyMatrix::constant(sel, basis);
    let malformed = || Error::Precondition("malformed dual pair: K̂·Nᵀ ≠ I".into());
    if khat
        .matmul(&n.transpose())?
        .max_abs_diff(&PolyMatrix::identity(s, basis))?
        > 1e-13
    {
        return Err(malformed());
    }
    if d == 1 {
        return Ok((khat, PolyMatrix::zeros(0, width, 0, basis)));
    }

    // Columns of N̂ᵀ stacked by coefficient: [v_0; …; v_{d−2}], each of length ds.
    let g = d - 2;
    let kr = k.rows();
    let ck = k.with_grade(1)?.convolution(g);
    let ch = khat.convolution(g);
    let mut sys = CMatrix::zeros(ck.nrows() + ch.nrows(), ck.ncols());
    sys.view_mut((0, 0), ck.shape()).copy_from(&ck);
    sys.view_mut((ck.nrows(), 0), ch.shape()).copy_from(&ch);
    let mut rhs = CMatrix::zeros(sys.nrows(), kr);
    for i in 0..kr {
        rhs[(i, i)] = C64::new(1.0, 0.0);
    }
    let x = dense::lstsq(&sys, &rhs)?;
    if dense::frobenius(&(&sys * &x - &rhs)) > 1e-10 {
        return Err(Error::Precondition(
            "malformed dual pair: [K; K̂] is not unimodular".into(),
        ));
    }
    // x column i holds the coefficients of column i of N̂ᵀ, i.e. row i of N̂.
    let coeffs = (0..=g)
        .map(|c| x.view((c * width, 0), (width, kr)).transpose())
        .collect();
    Ok((khat, PolyMatrix::new(basis, coeffs)?))
}
