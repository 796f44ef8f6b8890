//! Seeded fixtures and an executable check of every identity the
//! construction relies on.
//!
//! [`run_all`] never fails on a violated identity; violations become
//! report entries so users can certify their own realizations.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::dualbases::DualBasisPair;
use crate::eigsolve::{self, Side};
use crate::json::{self, Complex};
use crate::linbuild::{self, Realization, StructuredLinearization};
use crate::polymat::{Basis, PolyMatrix};
use crate::recover;
use crate::sampler::Sampler;
use crate::{Error, Result, Tolerances, DEFAULT_SEED};

const MAX_ATTEMPTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    Regular,
    /// `B` and `D` share an exact zero last column.
    ZeroColumnB,
    /// `C` and `D` share an exact zero last row.
    ZeroRowC,
    /// The last rows of `C` and `D` are `λ` times their first rows.
    RankDeficientD,
}

impl Structure {
    pub const ALL: [Structure; 4] = [
        Structure::Regular,
        Structure::ZeroColumnB,
        Structure::ZeroRowC,
        Structure::RankDeficientD,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub m: usize,
    /// `(d_A, d_D)`: `deg A = d_A` and `deg D = d_D`; `C` and `B` have
    /// random degrees up to the grade of their side.
    pub grades: (usize, usize),
    /// Bases of the `(A, C)` and `(B, D)` sides.
    pub bases: (Basis, Basis),
    pub structure: Structure,
}

impl FixtureSpec {
    /// Dimensions in `1..=max_dim` and grades in `1..=max_grade`, with the
    /// row or column count raised to 2 where the structure needs it.
    pub fn sample(s: &mut Sampler, max_dim: usize, max_grade: usize, structure: Structure) -> Self {
        let mut dim = || s.uniform_usize(1, max_dim);
        let (n, mut p, mut m) = (dim(), dim(), dim());
        match structure {
            Structure::ZeroColumnB => m = m.max(2),
            Structure::ZeroRowC | Structure::RankDeficientD => p = p.max(2),
            Structure::Regular => {}
        }
        let grades = (s.uniform_usize(1, max_grade), s.uniform_usize(1, max_grade));
        let mut basis = || if s.coin() { Basis::Chebyshev1 } else { Basis::Monomial };
        let bases = (basis(), basis());
        Self {
            seed: s.uniform_usize(0, u32::MAX as usize) as u64,
            n,
            p,
            m,
            grades,
            bases,
            structure,
        }
    }
}

fn random_poly(s: &mut Sampler, rows: usize, cols: usize, degree: usize, grade: usize, basis: Basis) -> PolyMatrix {
    let coeffs = (0..=grade)
        .map(|k| {
            if k <= degree {
                s.normal_matrix(rows, cols)
            } else {
                CMatrix::zeros(rows, cols)
            }
        })
        .collect();
    PolyMatrix::new(basis, coeffs).expect("equal coefficient shapes")
}

fn zero_last_column(p: &PolyMatrix) -> PolyMatrix {
    let mut coeffs = p.coeffs().to_vec();
    let j = p.cols() - 1;
    coeffs.iter_mut().for_each(|m| m.column_mut(j).fill(C64::new(0.0, 0.0)));
    PolyMatrix::new(p.basis(), coeffs).expect("shape preserved")
}

fn zero_last_row(p: &PolyMatrix) -> PolyMatrix {
    zero_last_column(&p.transpose()).transpose()
}

/// Replaces the first row by its truncation to grade − 1 and the last row
/// by `λ` times that, keeping the grade.
fn shifted_last_row(p: &PolyMatrix) -> Result<PolyMatrix> {
    let (r, c, g) = (p.rows(), p.cols(), p.grade().max(1));
    let first = p.block(0..1, 0..c).truncated(g - 1);
    let lambda = PolyMatrix::scalar_real(p.basis(), &[0.0, 1.0]);
    let last = lambda.matmul(&first)?.with_grade(g)?;
    let first = first.with_grade(g)?;
    let middle = p.with_grade(g)?.block(1..r - 1, 0..c);
    let parts: Vec<&PolyMatrix> = [&first, &middle, &last].into_iter().filter(|q| q.rows() > 0).collect();
    PolyMatrix::vstack(&parts)
}

/// Standard complex normal coefficients, structure applied, resampled
/// until `A` is regular.
pub fn gen_fixture(spec: &FixtureSpec) -> Result<Realization> {
    let FixtureSpec { n, p, m, .. } = *spec;
    let (da, dd) = spec.grades;
    if n == 0 || p == 0 || m == 0 || da == 0 || dd == 0 {
        return Err(Error::Precondition(
            "fixture dimensions and grades must be at least 1".into(),
        ));
    }
    match spec.structure {
        Structure::ZeroColumnB if m < 2 => return Err(Error::Precondition("zero-column-B needs m ≥ 2".into())),
        Structure::ZeroRowC | Structure::RankDeficientD if p < 2 => {
            return Err(Error::Precondition("row structures need p ≥ 2".into()))
        }
        _ => {}
    }
    let (ba, bd) = spec.bases;
    let mut s = Sampler::new(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let a = random_poly(&mut s, n, n, da, da, ba);
        let deg_c = s.uniform_usize(0, da);
        let c = random_poly(&mut s, p, n, deg_c, da, ba);
        let deg_b = s.uniform_usize(0, dd);
        let b = random_poly(&mut s, n, m, deg_b, dd, bd);
        let d = random_poly(&mut s, p, m, dd, dd, bd);
        let (b, c, d) = match spec.structure {
            Structure::Regular => (b, c, d),
            Structure::ZeroColumnB => (zero_last_column(&b), c, zero_last_column(&d)),
            Structure::ZeroRowC => (b, zero_last_row(&c), zero_last_row(&d)),
            Structure::RankDeficientD => (b, shifted_last_row(&c)?, shifted_last_row(&d)?),
        };
        match Realization::new(a, b, c, d) {
            Err(Error::IrregularState) => continue,
            other => return other,
        }
    }
    Err(Error::ResamplingExhausted(MAX_ATTEMPTS))
}

fn real_matrix(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, &v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
}

fn monomial(coeffs: Vec<CMatrix>) -> PolyMatrix {
    PolyMatrix::new(Basis::Monomial, coeffs).expect("equal coefficient shapes")
}

/// `R = D + f₁K₁ + f₂K₂` with `m = 2`, `D = I₂λ²`, `K₁ = e₁e₂ᵀ`,
/// `K₂ = e₂e₁ᵀ`, `f₁ = (λ²+1)(λ+2)/(λ²−λ−2)`, `f₂ = (λ²−1)λ²/(λ+2)`:
///
/// ```text
/// A = diag(λ²−λ−2, λ+2)    C = [e₁(λ²+1), e₂(λ²−1)]
/// B = [e₂ᵀ(λ+2); e₁ᵀλ²]    D = I₂λ²
/// ```
pub fn illustrative_example() -> Realization {
    let m = |v: &[f64]| real_matrix(2, 2, v);
    let a = monomial(vec![
        m(&[-2.0, 0.0, 0.0, 2.0]),
        m(&[-1.0, 0.0, 0.0, 1.0]),
        m(&[1.0, 0.0, 0.0, 0.0]),
    ]);
    let b = monomial(vec![
        m(&[0.0, 2.0, 0.0, 0.0]),
        m(&[0.0, 1.0, 0.0, 0.0]),
        m(&[0.0, 0.0, 1.0, 0.0]),
    ]);
    let c = monomial(vec![m(&[1.0, 0.0, 0.0, -1.0]), m(&[0.0; 4]), m(&[1.0, 0.0, 0.0, 1.0])]);
    let d = monomial(vec![m(&[0.0; 4]), m(&[0.0; 4]), CMatrix::identity(2, 2)]);
    Realization::new(a, b, c, d).expect("valid realization")
}

/// Monomial realization with `deg A = 3`, `deg C = 1`, `deg D = 3`,
/// `deg B = 2` and seeded coefficients.
pub fn degree_pattern(seed: u64, n: usize, p: usize, m: usize) -> Result<Realization> {
    let mut s = Sampler::new(seed);
    let mono = Basis::Monomial;
    Realization::new(
        random_poly(&mut s, n, n, 3, 3, mono),
        random_poly(&mut s, n, m, 2, 2, mono),
        random_poly(&mut s, p, n, 1, 1, mono),
        random_poly(&mut s, p, m, 3, 3, mono),
    )
}

/// `A = diag(λ−1, λ+2)` with the second state invisible from both `B` and
/// `C`: `λ = −2` is an eigenvalue of `𝓛` that is not a pole of `R`.
pub fn hidden_mode() -> Realization {
    let a = monomial(vec![real_matrix(2, 2, &[-1.0, 0.0, 0.0, 2.0]), CMatrix::identity(2, 2)]);
    let b = monomial(vec![real_matrix(2, 1, &[1.0, 0.0])]);
    let c = monomial(vec![real_matrix(1, 2, &[1.0, 0.0])]);
    let d = monomial(vec![real_matrix(1, 1, &[1.0])]);
    Realization::new(a, b, c, d).expect("valid realization")
}

pub const PRESETS: [&str; 3] = ["paper-sec5", "degree-pattern", "hidden-mode"];

pub fn preset(name: &str, seed: u64) -> Result<Realization> {
    match name {
        "paper-sec5" => Ok(illustrative_example()),
        "degree-pattern" => degree_pattern(seed, 2, 2, 2),
        "hidden-mode" => Ok(hidden_mode()),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

const NODE_ROTATION: f64 = std::f64::consts::FRAC_1_PI;

/// Monomial coefficients of a matrix polynomial of degree `< count` from
/// its values at rotated `count`-th roots of unity.
pub fn interpolate(rows: usize, cols: usize, count: usize, f: impl Fn(C64) -> Result<CMatrix>) -> Result<PolyMatrix> {
    // Rotated off the real axis so real poles are never sampled.
    let rot = C64::from_polar(1.0, NODE_ROTATION);
    let roots: Vec<C64> = (0..count)
        .map(|j| C64::from_polar(1.0, TAU * j as f64 / count as f64))
        .collect();
    let values = roots.iter().map(|&w| f(w * rot)).collect::<Result<Vec<_>>>()?;
    let coeffs = (0..count)
        .map(|k| {
            let mut acc = CMatrix::zeros(rows, cols);
            for (j, v) in values.iter().enumerate() {
                acc += v * roots[(j * k) % count].conj();
            }
            acc * (rot.powi(-(k as i32)) / count as f64)
        })
        .collect();
    PolyMatrix::new(Basis::Monomial, coeffs)
}

/// `δ(λ)R(λ)` with `δ = det A`, a polynomial matrix of degree at most
/// `n·deg A + max(deg D, deg B)`, by evaluation and interpolation.
pub fn cleared_transfer(r: &Realization) -> Result<PolyMatrix> {
    let (da, dd) = r.default_grades();
    let count = r.n() * da + dd + 1;
    let p = interpolate(r.p(), r.m(), count, |x| {
        Ok(r.transfer_eval(x)? * dense::determinant(&r.a().eval(x)))
    })?;
    Ok(p.clean(1e-12 * p.norm()))
}

/// `deg(numerator) − deg(denominator)` of `det R` for square `R`, from the
/// cleared determinant `det(δR) = δ^p det R`.
pub fn degree_balance(r: &Realization) -> Result<i64> {
    if r.p() != r.m() {
        return Err(Error::NotSquare(r.p(), r.m()));
    }
    let (da, dd) = r.default_grades();
    let p = r.p();
    let deg_delta = {
        let count = r.n() * da + 1;
        let delta = interpolate(1, 1, count, |x| {
            Ok(CMatrix::from_element(1, 1, dense::determinant(&r.a().eval(x))))
        })?;
        delta.numerical_degree(1e-10 * delta.norm())
    };
    let count = p * (r.n() * da + dd) + 1;
    let det = interpolate(1, 1, count, |x| {
        let cleared = r.transfer_eval(x)? * dense::determinant(&r.a().eval(x));
        Ok(CMatrix::from_element(1, 1, dense::determinant(&cleared)))
    })?;
    match (det.numerical_degree(1e-10 * det.norm()), deg_delta) {
        (Some(dn), Some(dd)) => Ok(dn as i64 - (p * dd) as i64),
        _ => Err(Error::Precondition("det R vanishes identically".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    /// The identity being checked.
    pub identity: String,
    pub status: Status,
    #[serde(rename = "worstResidual")]
    pub worst_residual: Option<f64>,
    pub lambda: Option<Complex>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    /// No entry failed.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    fn push(&mut self, name: &str, identity: &str, status: Status) -> &mut CheckEntry {
        self.entries.push(CheckEntry {
            name: name.to_string(),
            identity: identity.to_string(),
            status,
            worst_residual: None,
            lambda: None,
            detail: String::new(),
        });
        self.entries.last_mut().expect("just pushed")
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Worst value and where it occurred.
#[derive(Default)]
struct Worst {
    value: f64,
    at: Option<C64>,
}

impl Worst {
    fn record(&mut self, value: f64, at: C64) {
        if value > self.value || self.at.is_none() {
            self.value = value.max(self.value);
            self.at = Some(at);
        }
    }

    fn fill(&self, e: &mut CheckEntry) {
        e.worst_residual = Some(self.value);
        e.lambda = self.at.map(json::complex);
    }
}

/// `count` seeded points where `A` is invertible.
fn regular_points(r: &Realization, s: &mut Sampler, count: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count * 10 {
        if out.len() == count {
            break;
        }
        let x = s.complex_normal();
        if r.solve_state(x, &CMatrix::zeros(r.n(), 1)).is_ok() {
            out.push(x);
        }
    }
    out
}

fn pair_identity_residual(pair: &DualBasisPair, x: C64) -> f64 {
    let (k, n, kh, nh) = (pair.k.eval(x), pair.n.eval(x), pair.khat.eval(x), pair.nhat.eval(x));
    let eye = |r: usize| CMatrix::identity(r, r);
    [
        dense::frobenius(&(&k * n.transpose())),
        dense::frobenius(&(&k * nh.transpose() - eye(k.nrows()))),
        dense::frobenius(&(&kh * nh.transpose())),
        dense::frobenius(&(&kh * n.transpose() - eye(kh.nrows()))),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn check_pairs(rep: &mut CheckReport, sl: &StructuredLinearization, pts: &[C64], tol: &Tolerances) {
    let mut w = Worst::default();
    for &x in pts {
        let scale = x.norm().max(1.0).powi(sl.rho_a.max(sl.rho_d) as i32);
        w.record(pair_identity_residual(&sl.pair_a, x) / scale, x);
        w.record(pair_identity_residual(&sl.pair_d, x) / scale, x);
    }
    let e = rep.push(
        "dual-bases",
        "K·Nᵀ = 0, K·N̂ᵀ = I, K̂·N̂ᵀ = 0, K̂·Nᵀ = I",
        status(w.value <= tol.residual),
    );
    w.fill(e);
}

fn check_row_pencils(rep: &mut CheckReport, sl: &StructuredLinearization, pts: &[C64], tol: &Tolerances) {
    let r = &sl.realization;
    let mut w = Worst::default();
    for &x in pts {
        let (na, nd) = (sl.pair_a.n.eval(x).transpose(), sl.pair_d.n.eval(x).transpose());
        for (m, nt, p) in [
            (&sl.m_a, &na, r.a()),
            (&sl.m_c, &na, r.c()),
            (&sl.m_b, &nd, r.b()),
            (&sl.m_d, &nd, r.d()),
        ] {
            let want = p.eval(x);
            let res = dense::frobenius(&(m.eval(x) * nt - &want)) / p.eval_bound(x).max(f64::MIN_POSITIVE);
            w.record(res, x);
        }
    }
    let e = rep.push(
        "row-pencils",
        "M_X(λ)·N_X(λ)ᵀ = X(λ) for X = A, B, C, D",
        status(w.value <= tol.residual),
    );
    w.fill(e);
}

fn check_factorizations(rep: &mut CheckReport, sl: &StructuredLinearization, pts: &[C64]) -> Result<()> {
    let mut w = Worst::default();
    for &x in pts {
        w.record(recover::factorization_residuals(sl, x)?.relative(), x);
    }
    let e = rep.push(
        "one-sided-factorizations",
        "R̂·N_Dᵀ = [R; 0] and [I, −M_R·N̂_Dᵀ]·R̂ = R·K̂_D",
        status(w.value <= 1e-10),
    );
    w.fill(e);
    Ok(())
}

fn check_rank_relation(
    rep: &mut CheckReport,
    sl: &StructuredLinearization,
    pts: &[C64],
    tol: &Tolerances,
) -> Result<()> {
    let r = &sl.realization;
    let rtol = eigsolve::local_rank_rtol(tol);
    let mut bad = Vec::new();
    for &x in pts {
        let lhs = dense::rank(&sl.eval(x), rtol)?;
        let rhs = dense::rank(&r.transfer_eval(x)?, rtol)? + r.n() + sl.s;
        if lhs != rhs {
            bad.push((x, lhs, rhs));
        }
    }
    let e = rep.push(
        "rank-relation",
        "rank 𝓛(λ₀) = rank R(λ₀) + n + s",
        status(bad.is_empty()),
    );
    e.worst_residual = Some(bad.len() as f64);
    if let Some(&(x, l, rr)) = bad.first() {
        e.lambda = Some(json::complex(x));
        e.detail = format!("rank 𝓛 = {l}, rank R + n + s = {rr}");
    } else {
        e.detail = format!("{} points", pts.len());
    }
    Ok(())
}

/// Runs every check against `r` built with its default grades.
pub fn run_all(r: &Realization) -> Result<CheckReport> {
    run_all_with(r, &Tolerances::default(), DEFAULT_SEED)
}

pub fn run_all_with(r: &Realization, tol: &Tolerances, seed: u64) -> Result<CheckReport> {
    let sl = linbuild::build(r)?;
    let mut s = Sampler::new(seed);
    let pts = regular_points(r, &mut s, 10);
    let mut rep = CheckReport::default();

    check_pairs(&mut rep, &sl, &pts, tol);
    check_row_pencils(&mut rep, &sl, &pts, tol);
    check_factorizations(&mut rep, &sl, &pts)?;
    check_rank_relation(&mut rep, &sl, &pts[..pts.len().min(5)], tol)?;

    let proxy = recover::minimality_proxy(&sl, tol)?;
    let bad: Vec<&linbuild::PointMinimality> = proxy.finite.iter().filter(|p| !(p.left && p.right)).collect();
    let e = rep.push(
        "minimality-finite",
        "rank[A;C](λ₀) = rank[A B](λ₀) = n at sampled λ₀",
        status(bad.is_empty()),
    );
    e.detail = if bad.is_empty() {
        format!("{} points", proxy.finite.len())
    } else {
        format!("fails at {} of {} points", bad.len(), proxy.finite.len())
    };
    e.lambda = bad.first().map(|p| p.lambda);
    let (il, ir) = proxy.infinity;
    let e = rep.push(
        "minimality-infinity",
        "rank[rev A(0); rev C(0)] = rank[rev A(0), rev B(0)] = n",
        status(il && ir),
    );
    e.detail = format!("left {il}, right {ir}");

    let square = sl.shape().0 == sl.shape().1;
    let regular = square && eigsolve::pencil_eigs(&sl.l0, &sl.l1)?.regular;
    if regular {
        check_spectrum(&mut rep, &sl, tol)?;
    } else {
        let e = rep.push(
            "spectrum",
            "eigenvalues of 𝓛 are zeros of R where minimal",
            Status::Skip,
        );
        e.detail = "𝓛 is singular or rectangular".into();
        rep.push(
            "eigenvectors",
            "R(λ₀)x = 0 and yᵀR(λ₀) = 0 for recovered x, yᵀ",
            Status::Skip,
        )
        .detail = "𝓛 is singular or rectangular".into();
    }
    check_lift_identity(&mut rep, &sl, &pts);
    check_infinity(&mut rep, &sl, tol, il && ir)?;
    check_nullspaces(&mut rep, &sl, tol)?;
    Ok(rep)
}

fn check_spectrum(rep: &mut CheckReport, sl: &StructuredLinearization, tol: &Tolerances) -> Result<()> {
    let spec = eigsolve::classify(sl, tol)?;
    let unclassified: Vec<String> = spec
        .zeros
        .iter()
        .filter(|z| !z.classified)
        .map(|z| format!("{:.6}{:+.6}i", z.lambda[0], z.lambda[1]))
        .collect();
    let count: usize = spec.poles.iter().map(|p| p.count).sum();
    let e = rep.push(
        "spectrum",
        "eigenvalues of 𝓛 are zeros of R where minimal",
        Status::Pass,
    );
    e.detail = format!(
        "{} pole values ({count} with multiplicity), {} zeros, unclassified: [{}]",
        spec.poles.len(),
        spec.zeros.len() - unclassified.len(),
        unclassified.join(", ")
    );

    let pairs = recover::eigenpairs(sl, tol)?;
    let mut w = Worst::default();
    let mut skipped = 0;
    for p in &pairs {
        match (p.worst_residual(), p.transfer_norm) {
            (Some(res), Some(norm)) => w.record(res / norm.max(1.0), json::from_complex(p.lambda)),
            _ => skipped += 1,
        }
    }
    let e = rep.push(
        "eigenvectors",
        "R(λ₀)x = 0 and yᵀR(λ₀) = 0 for recovered x, yᵀ",
        if pairs.len() == skipped {
            Status::Skip
        } else {
            status(w.value <= tol.residual)
        },
    );
    w.fill(e);
    e.detail = format!("{} eigenpairs, {skipped} at poles", pairs.len());
    Ok(())
}

fn check_lift_identity(rep: &mut CheckReport, sl: &StructuredLinearization, pts: &[C64]) {
    let m = sl.realization.m();
    let mut w = Worst::default();
    let mut s = Sampler::new(DEFAULT_SEED ^ 0x11F7);
    for &x0 in pts {
        let x = nalgebra::DVector::from_iterator(m, (0..m).map(|_| s.complex_normal()));
        let back = recover::lift_right_eigvec(sl, x0, &x).and_then(|xt| recover::recover_right_eigvec(sl, x0, &xt));
        match back {
            Ok(back) => w.record((back - &x).norm() / x.norm(), x0),
            Err(_) => w.record(f64::INFINITY, x0),
        }
    }
    let e = rep.push(
        "recover-lift",
        "K̂_D·N_Dᵀ = I: recover(lift(x)) = x",
        status(w.value <= 1e-13),
    );
    w.fill(e);
}

fn check_infinity(rep: &mut CheckReport, sl: &StructuredLinearization, tol: &Tolerances, minimal: bool) -> Result<()> {
    const IDENTITY: &str = "q = (−e reversed, 0, ẽ) − g from rev₁ L_A and rev₁ 𝓛 at 0";
    if !minimal {
        rep.push("infinity-orders", IDENTITY, Status::Skip).detail = "not minimal at infinity".into();
        return Ok(());
    }
    match eigsolve::invariant_orders_at_infinity(sl, tol) {
        Ok(q) => {
            let r = &sl.realization;
            let square_regular = r.p() == r.m() && eigsolve::transfer_generic_rank(sl, tol)? == r.p();
            let total: i64 = q.iter().sum();
            let (st, detail) = if square_regular {
                let balance = degree_balance(r)?;
                // Σ q = deg den − deg num of det R.
                (
                    status(total == -balance),
                    format!("orders {q:?}, sum {total}, cleared-determinant balance {balance}"),
                )
            } else {
                (Status::Pass, format!("orders {q:?}"))
            };
            rep.push("infinity-orders", IDENTITY, st).detail = detail;
        }
        Err(e @ Error::InconsistentRank { .. }) => {
            rep.push("infinity-orders", IDENTITY, Status::Fail).detail = e.to_string();
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn check_nullspaces(rep: &mut CheckReport, sl: &StructuredLinearization, tol: &Tolerances) -> Result<()> {
    let r = &sl.realization;
    let rank = eigsolve::transfer_generic_rank(sl, tol)?;
    let oracle = cleared_transfer(r)?;
    for (side, name, nullity) in [(Side::Right, "right", r.m() - rank), (Side::Left, "left", r.p() - rank)] {
        let identity = match side {
            Side::Right => "right indices of R = right indices of 𝓛 − ρ_D",
            Side::Left => "left indices of R = left indices of 𝓛",
        };
        if nullity == 0 {
            rep.push(&format!("{name}-nullspace"), identity, Status::Skip).detail =
                "R has full rank on this side".into();
            continue;
        }
        let rec = match side {
            Side::Right => recover::recover_right_minimal_basis(sl, tol)?,
            Side::Left => recover::recover_left_minimal_basis(sl, tol)?,
        };
        let direct = eigsolve::polynomial_nullspace_of(&oracle, side, Some(1e-10))?;
        let ok = rec.ok && direct.indices == rec.basis_r.indices && rec.basis_r.len() == nullity;
        let e = rep.push(&format!("{name}-nullspace"), identity, status(ok));
        e.worst_residual = Some(rec.certificates.pencil.residual.max(rec.certificates.transfer.residual));
        e.detail = format!(
            "𝓛 indices {:?}, R indices {:?}, δR indices {:?}, certificates ok {}",
            rec.basis_l.indices, rec.basis_r.indices, direct.indices, rec.ok
        );
        if side == Side::Right {
            let identity = "deg z = deg x for right null vectors z = [y; x] of 𝓛";
            let st = if rec.preconditions.infinity.0 {
                status(rec.degree_law_holds())
            } else {
                Status::Skip
            };
            rep.push("degree-law", identity, st).detail = format!("{:?}", rec.degree_law);
        }
    }
    Ok(())
}
