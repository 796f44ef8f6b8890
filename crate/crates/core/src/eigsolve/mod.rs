//! Pencil eigenvalues, pole/zero classification, local partial
//! multiplicities and invariant orders at infinity.

mod nullspace;

pub(crate) use nullspace::pivot_index;

pub use nullspace::{
    certify_basis, polynomial_nullspace, polynomial_nullspace_of, structure_checks, BasisCertificate,
    MinimalBasisResult, Side,
};

use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::json::{complex, Complex};
use crate::linbuild::StructuredLinearization;
use crate::polymat::{Basis, PolyMatrix};
use crate::sampler::Sampler;
use crate::{Error, Result, Tolerances};

/// Generalized eigenvalues of `L1 λ + L0`.
#[derive(Clone, Debug)]
pub struct PencilEig {
    /// Homogeneous pairs with `λ = α/β`.
    pub pairs: Vec<(C64, C64)>,
    /// `infinite[i]` marks pair `i` as an eigenvalue at infinity.
    pub infinite: Vec<bool>,
    pub right_vectors: Option<CMatrix>,
    pub left_vectors: Option<CMatrix>,
    pub regular: bool,
}

impl PencilEig {
    pub fn finite(&self) -> Vec<C64> {
        self.pairs
            .iter()
            .zip(&self.infinite)
            .filter(|(_, &inf)| !inf)
            .map(|((a, b), _)| a / b)
            .collect()
    }

    pub fn infinite_count(&self) -> usize {
        self.infinite.iter().filter(|&&b| b).count()
    }
}

/// Chordal distance of `(α, β)` to infinity.
fn chordal_beta(a: C64, b: C64) -> f64 {
    b.norm() / (a.norm_sqr() + b.norm_sqr()).sqrt()
}

/// Solves `(L1 λ + L0) v = 0`.
///
/// Infinite eigenvalues are counted structurally, from the partial
/// multiplicities of `L1 + λ L0` at zero, and assigned to the pairs with the
/// smallest chordal `|β|`: a Jordan chain of length `k` at infinity only
/// perturbs `β` to about `ε^{1/k}`, so a fixed cutoff on `β` is unreliable.
pub fn pencil_eigs(l0: &CMatrix, l1: &CMatrix) -> Result<PencilEig> {
    let (r, c) = l0.shape();
    if r != c || l1.shape() != (r, c) {
        return Err(Error::NotSquare(r, c));
    }
    if r == 0 {
        return Ok(PencilEig {
            pairs: Vec::new(),
            infinite: Vec::new(),
            right_vectors: None,
            left_vectors: None,
            regular: true,
        });
    }
    let mut s = Sampler::default();
    let mut regular = false;
    for x in s.unit_circle_points(3) {
        if dense::rank(&(l0 + l1 * x), None)? == r {
            regular = true;
            break;
        }
    }
    let (pairs, vecs) = dense::generalized_eigen(&(-l0), l1)?;
    if pairs.iter().any(|(a, b)| !(a.is_finite() && b.is_finite())) {
        return Err(Error::Backend("QZ produced non-finite values".into()));
    }
    let mut infinite = vec![false; r];
    if regular {
        let rev = PolyMatrix::new(Basis::Monomial, vec![l1.clone(), l0.clone()])?;
        let k_inf: usize = partial_multiplicities_at(&rev, C64::new(0.0, 0.0), None)?.iter().sum();
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&i, &j| chordal_beta(pairs[i].0, pairs[i].1).total_cmp(&chordal_beta(pairs[j].0, pairs[j].1)));
        for &i in order.iter().take(k_inf) {
            infinite[i] = true;
        }
    } else {
        for (i, (a, b)) in pairs.iter().enumerate() {
            infinite[i] = chordal_beta(*a, *b) <= 1e3 * f64::EPSILON;
        }
    }
    Ok(PencilEig {
        pairs,
        infinite,
        right_vectors: Some(vecs),
        left_vectors: None,
        regular,
    })
}

/// Taylor-coefficient block Toeplitz matrix of order `ℓ`:
/// block `(i, j)` is `T_{i−j}` for `i ≥ j`.
fn toeplitz(taylor: &[CMatrix], l: usize) -> CMatrix {
    let (r, c) = taylor[0].shape();
    let mut t = CMatrix::zeros(r * (l + 1), c * (l + 1));
    for i in 0..=l {
        for j in 0..=i {
            t.view_mut((i * r, j * c), (r, c)).copy_from(&taylor[i - j]);
        }
    }
    t
}

/// Partial multiplicities of `x` as a zero of `P`, ascending.
///
/// With `r` the generic rank and `c` the column count,
/// `dim ker T_ℓ = (ℓ+1)(c − r) + Σ_i min(κ_i, ℓ+1)`.
pub fn partial_multiplicities_at(p: &PolyMatrix, x: C64, rtol: Option<f64>) -> Result<Vec<usize>> {
    let (rows, cols) = p.shape();
    if rows == 0 || cols == 0 {
        return Ok(Vec::new());
    }
    let r = p.generic_rank(&mut Sampler::default())?;
    let defect = cols - r;
    let cap = r * p.grade().max(1) + 1;
    let taylor = p.taylor(x, cap + 1);
    let mut counts = Vec::new();
    let mut prev = 0usize;
    for l in 0..=cap {
        let t = toeplitz(&taylor, l);
        let nullity = t.ncols() - dense::rank(&t, rtol)?;
        let eta = nullity.saturating_sub((l + 1) * defect);
        let at_least = eta.saturating_sub(prev);
        if at_least == 0 {
            break;
        }
        counts.push(at_least);
        prev = eta;
    }
    // counts[ℓ] = #{κ ≥ ℓ+1}.
    let mut out = Vec::new();
    for (l, &cnt) in counts.iter().enumerate() {
        let next = counts.get(l + 1).copied().unwrap_or(0);
        for _ in 0..cnt.saturating_sub(next) {
            out.push(l + 1);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub lambda: Complex,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub lambda: Complex,
    pub classified: bool,
    /// `(rank[A;C] = n, rank[A B] = n)` at `λ₀`.
    pub minimality: (bool, bool),
    /// Lies within matching tolerance of a pole.
    #[serde(rename = "atPole")]
    pub at_pole: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub poles: Vec<Pole>,
    pub zeros: Vec<Zero>,
    #[serde(rename = "infinityOrders")]
    pub infinity_orders: Option<Vec<i64>>,
    /// `(left, right)` infinity minimality.
    #[serde(rename = "infinityMinimality")]
    pub infinity_minimality: (bool, bool),
    pub grade: usize,
}

impl SpectralReport {
    pub fn zero_values(&self) -> Vec<C64> {
        self.zeros.iter().map(|z| C64::new(z.lambda[0], z.lambda[1])).collect()
    }

    pub fn pole_values(&self) -> Vec<C64> {
        self.poles
            .iter()
            .flat_map(|p| std::iter::repeat_n(C64::new(p.lambda[0], p.lambda[1]), p.count))
            .collect()
    }
}

/// Groups values within matching tolerance; representatives are cluster means.
pub fn cluster(values: &[C64], tol: &Tolerances) -> Vec<(C64, usize)> {
    let mut groups: Vec<(C64, Vec<C64>)> = Vec::new();
    for &v in values {
        match groups.iter_mut().find(|(rep, _)| tol.matches(*rep, v)) {
            Some((rep, members)) => {
                members.push(v);
                *rep = members.iter().sum::<C64>() / members.len() as f64;
            }
            None => groups.push((v, vec![v])),
        }
    }
    groups.into_iter().map(|(rep, m)| (rep, m.len())).collect()
}

/// Relative rank cutoff at a computed eigenvalue, which carries backward
/// error well above `ε`.
pub fn local_rank_rtol(tol: &Tolerances) -> Option<f64> {
    Some(tol.rank.unwrap_or(0.0).max(tol.matching))
}

/// Poles from `L_A`, zeros from `𝓛` tagged with pointwise minimality.
pub fn classify(sl: &StructuredLinearization, tol: &Tolerances) -> Result<SpectralReport> {
    let (rows, cols) = sl.shape();
    if rows != cols {
        return Err(Error::NotSquare(rows, cols));
    }
    let r = &sl.realization;
    let (la0, la1) = sl.state_pencil();
    let state = pencil_eigs(&la0, &la1)?;
    if !state.regular {
        return Err(Error::IrregularState);
    }
    let pole_values = state.finite();
    let poles: Vec<Pole> = cluster(&pole_values, tol)
        .into_iter()
        .map(|(v, count)| Pole {
            lambda: complex(v),
            count,
        })
        .collect();

    let full = pencil_eigs(&sl.l0, &sl.l1)?;
    if !full.regular {
        return Err(Error::SingularPencil);
    }
    let rtol = local_rank_rtol(tol);
    let zeros = full
        .finite()
        .into_iter()
        .map(|z| {
            let minimality = r.check_finite_minimality(z, rtol)?;
            Ok(Zero {
                lambda: complex(z),
                classified: minimality.0 && minimality.1,
                minimality,
                at_pole: pole_values.iter().any(|&p| tol.matches(z, p)),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let inf_min = r.check_infinity_minimality_with(sl.grades(), tol.rank)?;
    let infinity_orders = if inf_min.0 && inf_min.1 {
        Some(invariant_orders_at_infinity(sl, tol)?)
    } else {
        None
    };
    Ok(SpectralReport {
        poles,
        zeros,
        infinity_orders,
        infinity_minimality: inf_min,
        grade: sl.rho_d + 1,
    })
}

/// Generic rank of the transfer function from five seeded samples.
pub fn transfer_generic_rank(sl: &StructuredLinearization, tol: &Tolerances) -> Result<usize> {
    let mut s = Sampler::default();
    let mut best = 0;
    for x in s.unit_circle_points(5) {
        let rx = sl.realization.transfer_eval(x)?;
        best = best.max(dense::rank(&rx, tol.rank)?);
    }
    Ok(best)
}

/// `q = (−e_t, …, −e_1, 0, …, 0, ẽ_1, …, ẽ_u) − g` with `g = ρ_D + 1`,
/// `e` from `rev₁ L_A` and `ẽ` from `rev₁ 𝓛` at zero.
pub fn invariant_orders_at_infinity(sl: &StructuredLinearization, tol: &Tolerances) -> Result<Vec<i64>> {
    let inf = sl.realization.check_infinity_minimality_with(sl.grades(), tol.rank)?;
    if !(inf.0 && inf.1) {
        return Err(Error::Precondition(format!(
            "infinity minimality fails (left {}, right {})",
            inf.0, inf.1
        )));
    }
    let g = (sl.rho_d + 1) as i64;
    let zero = C64::new(0.0, 0.0);
    let (la0, la1) = sl.state_pencil();
    let rev_state = PolyMatrix::new(Basis::Monomial, vec![la1, la0])?;
    let rev_full = PolyMatrix::new(Basis::Monomial, vec![sl.l1.clone(), sl.l0.clone()])?;
    let e = partial_multiplicities_at(&rev_state, zero, tol.rank)?;
    let et = partial_multiplicities_at(&rev_full, zero, tol.rank)?;
    let r = transfer_generic_rank(sl, tol)?;
    let (t, u) = (e.len(), et.len());
    if t + u > r {
        return Err(Error::InconsistentRank { t, u, r });
    }
    let mut q: Vec<i64> = e.iter().rev().map(|&x| -(x as i64)).collect();
    q.extend(std::iter::repeat_n(0, r - t - u));
    q.extend(et.iter().map(|&x| x as i64));
    Ok(q.into_iter().map(|x| x - g).collect())
}
