//! Pull-backs from `𝓛` to `R`: eigenvectors, right and left minimal bases
//! with their indices, and the one-sided factorization residuals used to
//! certify the construction.
//!
//! Column layout of `𝓛`: state block of width `n(1+ρ_A)`, then the input
//! block of width `m(1+ρ_D)`. Row layout: `n(1+ρ_A)` state rows, `p` output
//! rows, `mρ_D` rows of `K_D`.

use nalgebra::{DVector, RowDVector};
use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::eigsolve::{self, BasisCertificate, MinimalBasisResult, Side};
use crate::json::{self, Complex};
use crate::linbuild::{self, MinimalityReport, StructuredLinearization};
use crate::polymat::PolyMatrix;
use crate::sampler::Sampler;
use crate::{Error, Result, Tolerances, DEFAULT_SEED};

fn column(v: &DVector<C64>) -> CMatrix {
    CMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

fn check_len(op: &'static str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::DimensionMismatch {
            op,
            lhs: (got, 1),
            rhs: (want, 1),
        });
    }
    Ok(())
}

/// Fails with `SingularState` unless `A(λ₀)` is invertible.
fn require_regular_state(sl: &StructuredLinearization, x0: C64) -> Result<()> {
    let n = sl.realization.n();
    sl.realization.solve_state(x0, &CMatrix::zeros(n, 1)).map(|_| ())
}

/// `x̃ = [−N_A(λ₀)ᵀA(λ₀)⁻¹B(λ₀)x; N_D(λ₀)ᵀx]`.
pub fn lift_right_eigvec(sl: &StructuredLinearization, x0: C64, x: &DVector<C64>) -> Result<DVector<C64>> {
    let r = &sl.realization;
    check_len("lift_right_eigvec", x.len(), r.m())?;
    let ainv_bx = r.solve_state(x0, &column(&(r.b().eval(x0) * x)))?;
    let upper = -(sl.pair_a.n.eval(x0).transpose() * ainv_bx);
    let lower = sl.pair_d.n.eval(x0).transpose() * x;
    Ok(DVector::from_iterator(
        upper.len() + lower.len(),
        upper.iter().chain(lower.iter()).copied(),
    ))
}

/// `x = K̂_D(λ₀)·x̃_lower`, the last `m` entries of `x̃`.
pub fn recover_right_eigvec(sl: &StructuredLinearization, x0: C64, xt: &DVector<C64>) -> Result<DVector<C64>> {
    let cols = sl.shape().1;
    check_len("recover_right_eigvec", xt.len(), cols)?;
    require_regular_state(sl, x0)?;
    let w = sl.state_width();
    let x = sl.pair_d.khat.eval(x0) * xt.rows(w, cols - w);
    if x.norm() <= 1e3 * f64::EPSILON * xt.norm() {
        return Err(Error::Precondition(
            "recovered x vanishes: the null vector belongs to the unclassified part".into(),
        ));
    }
    Ok(x)
}

/// `ỹᵀ = [yᵀM_C(λ₀)L_A(λ₀)⁻¹, yᵀ, −yᵀM_R(λ₀)N̂_D(λ₀)ᵀ]`.
///
/// Then `ỹᵀ𝓛(λ₀) = [0, yᵀR(λ₀)K̂_D(λ₀)]`, which vanishes exactly when
/// `yᵀ` is a left null vector of `R(λ₀)`.
pub fn lift_left_eigvec(sl: &StructuredLinearization, x0: C64, y: &RowDVector<C64>) -> Result<RowDVector<C64>> {
    let p = sl.realization.p();
    check_len("lift_left_eigvec", y.len(), p)?;
    require_regular_state(sl, x0)?;
    let w = sl.state_width();
    let l = sl.eval(x0);
    let la = l.view((0, 0), (w, w)).into_owned();
    let l21 = l.view((w, 0), (p, w)).into_owned();
    let rhs = CMatrix::from_iterator(w, 1, (y * l21).iter().copied());
    let state = dense::solve(&la.transpose(), &rhs).ok_or(Error::SingularState(x0))?;
    let tail = -(y * sl.m_r_eval(x0)? * sl.pair_d.nhat.eval(x0).transpose());
    let parts = (-state).transpose();
    Ok(RowDVector::from_iterator(
        w + p + tail.len(),
        parts.iter().chain(y.iter()).chain(tail.iter()).copied(),
    ))
}

/// `yᵀ` = entries `[n(1+ρ_A), n(1+ρ_A)+p)` of `ỹᵀ`.
pub fn recover_left_eigvec(sl: &StructuredLinearization, x0: C64, yt: &RowDVector<C64>) -> Result<RowDVector<C64>> {
    check_len("recover_left_eigvec", yt.len(), sl.shape().0)?;
    require_regular_state(sl, x0)?;
    let y = yt.columns(sl.state_width(), sl.realization.p()).into_owned();
    if y.norm() <= 1e3 * f64::EPSILON * yt.norm() {
        return Err(Error::Precondition(
            "recovered y vanishes: the null vector belongs to the unclassified part".into(),
        ));
    }
    Ok(y)
}

/// A recovered eigentriple of `R` at a classified zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenpairR {
    pub lambda: Complex,
    #[serde(with = "json::opt_vector")]
    pub x: Option<DVector<C64>>,
    /// The left vector, stored as a column.
    #[serde(rename = "yT", with = "json::opt_vector")]
    pub y: Option<DVector<C64>>,
    /// `(‖R(λ₀)x‖/‖x‖, ‖yᵀR(λ₀)‖/‖y‖)`.
    pub residuals: (Option<f64>, Option<f64>),
    /// `‖R(λ₀)‖_F`, the scale of the residuals.
    #[serde(rename = "transferNorm")]
    pub transfer_norm: Option<f64>,
    /// `‖x̃ − lift(x)‖/‖x̃‖`: the upper block agrees with `−N_AᵀA⁻¹Bx`.
    pub consistency: Option<f64>,
    pub note: Option<String>,
}

impl EigenpairR {
    fn skipped(x0: C64, note: String) -> Self {
        Self {
            lambda: json::complex(x0),
            x: None,
            y: None,
            residuals: (None, None),
            transfer_norm: None,
            consistency: None,
            note: Some(note),
        }
    }

    /// Worst of the two relative residuals, if both vectors exist.
    pub fn worst_residual(&self) -> Option<f64> {
        match self.residuals {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        }
    }
}

/// Up to three inverse iteration steps `v ← M⁻¹v`, each kept only if it
/// lowers `‖Mv‖/‖v‖`. Near an eigenvalue this pulls `v` onto the smallest singular
/// direction of `M`, which a cancelling recovery can miss when `‖M‖` is
/// large.
fn polish(m: &CMatrix, mut v: DVector<C64>) -> DVector<C64> {
    let res = |u: &DVector<C64>| (m * u).norm() / u.norm();
    for _ in 0..3 {
        match dense::solve(m, &column(&v)) {
            Some(w) if w.iter().all(|z| z.is_finite()) && w.norm() > 0.0 => {
                let w = DVector::from_column_slice(w.as_slice()) * C64::new(v.norm() / w.norm(), 0.0);
                if res(&w) >= res(&v) {
                    break;
                }
                v = w;
            }
            _ => break,
        }
    }
    v
}

/// Recovers `x` and `yᵀ` from the singular vectors of `𝓛(λ₀)` for its
/// smallest singular value, then [`polish`]es each against `R(λ₀)`.
pub fn eigenpair_at(sl: &StructuredLinearization, x0: C64) -> Result<EigenpairR> {
    let (xt, yt, _) = dense::smallest_singular_pair(&sl.eval(x0))?;
    let x = recover_right_eigvec(sl, x0, &xt)?;
    let y = recover_left_eigvec(sl, x0, &yt)?;
    let rx = sl.realization.transfer_eval(x0)?;
    let consistency = (&xt - lift_right_eigvec(sl, x0, &x)?).norm() / xt.norm();
    let x = polish(&rx, x);
    let y = polish(&rx.transpose(), y.transpose());
    let right = (&rx * &x).norm() / x.norm();
    let left = (rx.transpose() * &y).norm() / y.norm();
    Ok(EigenpairR {
        lambda: json::complex(x0),
        x: Some(x),
        y: Some(y),
        residuals: (Some(right), Some(left)),
        transfer_norm: Some(dense::frobenius(&rx)),
        consistency: Some(consistency),
        note: None,
    })
}

/// One entry per classified zero. Zeros that coincide with a pole have
/// singular `A(λ₀)` and are reported without vectors.
pub fn eigenpairs(sl: &StructuredLinearization, tol: &Tolerances) -> Result<Vec<EigenpairR>> {
    let report = eigsolve::classify(sl, tol)?;
    report
        .zeros
        .iter()
        .filter(|z| z.classified)
        .map(|z| {
            let x0 = json::from_complex(z.lambda);
            if z.at_pole {
                return Ok(EigenpairR::skipped(
                    x0,
                    "zero coincides with a pole: A(λ₀) is singular".into(),
                ));
            }
            match eigenpair_at(sl, x0) {
                Err(Error::SingularState(_)) => Ok(EigenpairR::skipped(x0, "A(λ₀) is numerically singular".into())),
                Err(Error::Precondition(msg)) => Ok(EigenpairR::skipped(x0, msg)),
                other => other,
            }
        })
        .collect()
}

/// Sampled minimality: all finite eigenvalues of `L_A`, those of `𝓛` when
/// it is regular, and 20 seeded random points.
///
/// `rank[A;C]` and `rank[A B]` can only drop where `A` is singular, so the
/// `L_A` eigenvalues already make the finite part a full check up to the
/// rank tolerance.
pub fn minimality_proxy(sl: &StructuredLinearization, tol: &Tolerances) -> Result<MinimalityReport> {
    let (la0, la1) = sl.state_pencil();
    let mut points = eigsolve::pencil_eigs(&la0, &la1)?.finite();
    if sl.shape().0 == sl.shape().1 {
        let lin = eigsolve::pencil_eigs(&sl.l0, &sl.l1)?;
        if lin.regular {
            points.extend(lin.finite());
        }
    }
    let mut s = Sampler::new(DEFAULT_SEED ^ 0x9A0C);
    points.extend((0..20).map(|_| s.complex_normal()));
    linbuild::minimality_report(&sl.realization, &points, sl.grades(), eigsolve::local_rank_rtol(tol))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullspaceCertificates {
    /// The basis of `𝓛`, checked on coefficients.
    pub pencil: BasisCertificate,
    /// The basis of `R`, residual checked pointwise as `‖R U‖/(‖R‖‖U‖)`.
    pub transfer: BasisCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveredNullspace {
    pub side: Side,
    #[serde(rename = "basisR")]
    pub basis_r: MinimalBasisResult,
    #[serde(rename = "basisL")]
    pub basis_l: MinimalBasisResult,
    /// `ρ_D` on the right, `0` on the left.
    pub shift: usize,
    pub certificates: NullspaceCertificates,
    pub preconditions: MinimalityReport,
    /// `(deg z_i, deg x_i)` for each right vector `z_i = [y_i; x_i]`.
    #[serde(rename = "degreeLaw")]
    pub degree_law: Vec<(usize, usize)>,
    /// Largest coefficient dropped when cutting `u_i` to its predicted degree.
    pub truncation: f64,
    /// Preconditions of the side hold and both certificates pass.
    pub ok: bool,
}

impl RecoveredNullspace {
    pub fn degree_law_holds(&self) -> bool {
        self.degree_law.iter().all(|(z, x)| z == x)
    }
}

/// Scales so the largest entry of the top coefficient is exactly 1.
fn normalize_top(v: &PolyMatrix, degree: usize) -> PolyMatrix {
    let top = v.coeff(degree);
    let pivot = top[eigsolve::pivot_index(top.iter())];
    if pivot.norm() == 0.0 {
        return v.clone();
    }
    v.scale(C64::new(1.0, 0.0) / pivot)
}

fn transfer_certificate(sl: &StructuredLinearization, basis: &MinimalBasisResult) -> Result<BasisCertificate> {
    if basis.is_empty() {
        return Ok(BasisCertificate {
            residual: 0.0,
            full_rank: true,
            reduced: true,
        });
    }
    let mut s = Sampler::new(DEFAULT_SEED ^ 0x7E57);
    let mut residual: f64 = 0.0;
    let mut used = 0;
    while used < 5 {
        let x0 = s.complex_normal();
        let rx = match sl.realization.transfer_eval(x0) {
            Ok(rx) => rx,
            Err(Error::SingularState(_)) => continue,
            Err(e) => return Err(e),
        };
        let u = basis.vectors.eval(x0);
        let prod = match basis.side {
            Side::Right => &rx * &u,
            Side::Left => &u * &rx,
        };
        let denom = (dense::frobenius(&rx) * dense::frobenius(&u)).max(f64::MIN_POSITIVE);
        residual = residual.max(dense::frobenius(&prod) / denom);
        used += 1;
    }
    let (full_rank, reduced) = eigsolve::structure_checks(&basis.vectors, &basis.indices, basis.side)?;
    Ok(BasisCertificate {
        residual,
        full_rank,
        reduced,
    })
}

/// Right minimal basis of `R` from that of `𝓛`: `u_i = K̂_D x_i` with
/// indices `ε_i − ρ_D`.
pub fn recover_right_minimal_basis(sl: &StructuredLinearization, tol: &Tolerances) -> Result<RecoveredNullspace> {
    let preconditions = minimality_proxy(sl, tol)?;
    let cond = preconditions.infinity.0 && preconditions.finite.iter().all(|p| p.left);
    let basis_l = eigsolve::polynomial_nullspace(&sl.l0, &sl.l1, Side::Right)?;
    let (w, cols) = (sl.state_width(), sl.shape().1);
    let khat = sl.pair_d.khat.coeff(0);
    let rho = sl.rho_d;
    let mut shift_ok = true;
    let mut truncation: f64 = 0.0;
    let mut degree_law = Vec::with_capacity(basis_l.len());
    let mut out = Vec::with_capacity(basis_l.len());
    for (i, &eps) in basis_l.indices.iter().enumerate() {
        let z = basis_l.vector(i);
        let lower = z.block(w..cols, 0..1);
        degree_law.push((eps, lower.numerical_degree(1e-9).unwrap_or(0)));
        let target = eps.checked_sub(rho).unwrap_or_else(|| {
            shift_ok = false;
            0
        });
        let u = lower.left_mul_const(&khat)?;
        truncation = (target + 1..=u.grade())
            .map(|k| u.coeff(k).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(truncation, f64::max);
        out.push((target, normalize_top(&u.truncated(target), target)));
    }
    out.sort_by_key(|(d, _)| *d);
    let basis_r = MinimalBasisResult::from_columns(Side::Right, sl.realization.m(), out)?;
    finish(
        sl,
        Side::Right,
        basis_r,
        basis_l,
        rho,
        preconditions,
        cond && shift_ok,
        degree_law,
        truncation,
        tol,
    )
}

/// Left minimal basis of `R` from that of `𝓛`: the middle `p` entries of
/// each row, indices unchanged.
pub fn recover_left_minimal_basis(sl: &StructuredLinearization, tol: &Tolerances) -> Result<RecoveredNullspace> {
    let preconditions = minimality_proxy(sl, tol)?;
    let cond = preconditions.infinity.1 && preconditions.finite.iter().all(|p| p.right);
    let basis_l = eigsolve::polynomial_nullspace(&sl.l0, &sl.l1, Side::Left)?;
    let (w, p) = (sl.state_width(), sl.realization.p());
    let out = basis_l
        .indices
        .iter()
        .enumerate()
        .map(|(i, &eta)| {
            let u = basis_l.vector(i).block(0..1, w..w + p);
            (eta, normalize_top(&u, eta).transpose())
        })
        .collect();
    let basis_r = MinimalBasisResult::from_columns(Side::Left, p, out)?;
    finish(
        sl,
        Side::Left,
        basis_r,
        basis_l,
        0,
        preconditions,
        cond,
        Vec::new(),
        0.0,
        tol,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish(
    sl: &StructuredLinearization,
    side: Side,
    basis_r: MinimalBasisResult,
    basis_l: MinimalBasisResult,
    shift: usize,
    preconditions: MinimalityReport,
    cond: bool,
    degree_law: Vec<(usize, usize)>,
    truncation: f64,
    tol: &Tolerances,
) -> Result<RecoveredNullspace> {
    let certificates = NullspaceCertificates {
        pencil: eigsolve::certify_basis(&sl.pencil(), &basis_l)?,
        transfer: transfer_certificate(sl, &basis_r)?,
    };
    let ok = cond
        && certificates.pencil.passes(tol.residual)
        && certificates.transfer.passes(tol.residual)
        && truncation <= tol.residual;
    Ok(RecoveredNullspace {
        side,
        basis_r,
        basis_l,
        shift,
        certificates,
        preconditions,
        degree_law,
        truncation,
        ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResiduals {
    /// `‖R̂(λ₀)N_D(λ₀)ᵀ − [R(λ₀); 0]‖_F`.
    pub right: f64,
    /// `‖[I_p, −M_R(λ₀)N̂_D(λ₀)ᵀ]R̂(λ₀) − R(λ₀)K̂_D(λ₀)‖_F`.
    pub left: f64,
    /// Magnitude of the terms being cancelled, for relative comparisons.
    pub scale: f64,
}

impl FactorizationResiduals {
    pub fn relative(&self) -> f64 {
        self.right.max(self.left) / self.scale.max(f64::MIN_POSITIVE)
    }
}

pub fn factorization_residuals(sl: &StructuredLinearization, x0: C64) -> Result<FactorizationResiduals> {
    let (p, m) = (sl.realization.p(), sl.realization.m());
    let rx = sl.realization.transfer_eval(x0)?;
    let m_r = sl.m_r_eval(x0)?;
    let rhat = linbuild::stack_rows(&m_r, &sl.pair_d.k.eval(x0));
    let nd = sl.pair_d.n.eval(x0);
    let nhat = sl.pair_d.nhat.eval(x0);
    let khat = sl.pair_d.khat.eval(x0);

    let want = linbuild::stack_rows(&rx, &CMatrix::zeros(m * sl.rho_d, m));
    let right = dense::frobenius(&(&rhat * nd.transpose() - want));

    let left_factor = linbuild::stack_cols(&CMatrix::identity(p, p), &-(&m_r * nhat.transpose()));
    let left = dense::frobenius(&(&left_factor * &rhat - &rx * &khat));

    let (nr, nrx) = (dense::frobenius(&rhat), dense::frobenius(&rx));
    let scale =
        (nr * dense::frobenius(&nd) + nrx).max(dense::frobenius(&left_factor) * nr + nrx * dense::frobenius(&khat));
    Ok(FactorizationResiduals { right, left, scale })
}
