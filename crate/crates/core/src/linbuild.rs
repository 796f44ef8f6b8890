//! Realizations `(A, B, C, D)` and the structured linearization
//!
//! ```text
//!         ⎡  M_A   M_B ⎤
//! 𝓛(λ) =  ⎢  K_A    0  ⎥
//!         ⎢ −M_C   M_D ⎥
//!         ⎣   0    K_D ⎦
//! ```
//!
//! where `[M_A; K_A]` and `[M_D; K_D]` are degenerate block minimal basis
//! pencils with `M_X N_Xᵀ = X`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::dualbases::{self, DualBasisPair};
use crate::json::DenseJson;
use crate::polymat::{Basis, PolyMatrix};
use crate::sampler::Sampler;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealizationJson", into = "RealizationJson")]
pub struct Realization {
    a: PolyMatrix,
    b: PolyMatrix,
    c: PolyMatrix,
    d: PolyMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RealizationJson {
    #[serde(rename = "A")]
    a: PolyMatrix,
    #[serde(rename = "B")]
    b: PolyMatrix,
    #[serde(rename = "C")]
    c: PolyMatrix,
    #[serde(rename = "D")]
    d: PolyMatrix,
}

impl TryFrom<RealizationJson> for Realization {
    type Error = Error;
    fn try_from(j: RealizationJson) -> Result<Self> {
        Realization::new(j.a, j.b, j.c, j.d)
    }
}

impl From<Realization> for RealizationJson {
    fn from(r: Realization) -> Self {
        Self {
            a: r.a,
            b: r.b,
            c: r.c,
            d: r.d,
        }
    }
}

fn mismatch(op: &'static str, lhs: (usize, usize), rhs: (usize, usize)) -> Error {
    Error::DimensionMismatch { op, lhs, rhs }
}

impl Realization {
    /// Validates shapes, per-side bases, `n ≥ 1` and regularity of `A`.
    pub fn new(a: PolyMatrix, b: PolyMatrix, c: PolyMatrix, d: PolyMatrix) -> Result<Self> {
        let n = a.rows();
        if n == 0 {
            return Err(Error::EmptyState);
        }
        if a.cols() != n {
            return Err(mismatch("Realization: A square", a.shape(), (n, n)));
        }
        if b.rows() != n {
            return Err(mismatch("Realization: B rows", b.shape(), a.shape()));
        }
        if c.cols() != n {
            return Err(mismatch("Realization: C cols", c.shape(), a.shape()));
        }
        if d.shape() != (c.rows(), b.cols()) {
            return Err(mismatch("Realization: D", d.shape(), (c.rows(), b.cols())));
        }
        if a.basis() != c.basis() {
            return Err(Error::BasisMismatch("A and C must share a basis"));
        }
        if b.basis() != d.basis() {
            return Err(Error::BasisMismatch("B and D must share a basis"));
        }
        let r = Self { a, b, c, d };
        // Probabilistic certificate: full rank at one of three seeded points.
        if r.a.generic_rank_with(&mut Sampler::default(), 3, None)? < n {
            return Err(Error::IrregularState);
        }
        Ok(r)
    }

    /// Parses then validates, so malformed JSON (`Error::Json`) is kept
    /// apart from a well-formed but invalid realization.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: RealizationJson = serde_json::from_str(text)?;
        j.try_into()
    }

    pub fn a(&self) -> &PolyMatrix {
        &self.a
    }
    pub fn b(&self) -> &PolyMatrix {
        &self.b
    }
    pub fn c(&self) -> &PolyMatrix {
        &self.c
    }
    pub fn d(&self) -> &PolyMatrix {
        &self.d
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.rows()
    }
    pub fn p(&self) -> usize {
        self.d.rows()
    }
    pub fn m(&self) -> usize {
        self.d.cols()
    }

    pub fn basis_a(&self) -> Basis {
        self.a.basis()
    }
    pub fn basis_d(&self) -> Basis {
        self.d.basis()
    }

    /// `(max(1, deg A, deg C), max(1, deg D, deg B))`.
    pub fn default_grades(&self) -> (usize, usize) {
        let deg = |p: &PolyMatrix| p.degree().unwrap_or(0);
        (
            1.max(deg(&self.a)).max(deg(&self.c)),
            1.max(deg(&self.d)).max(deg(&self.b)),
        )
    }

    /// Largest coefficient norm over the four blocks.
    pub fn scale(&self) -> f64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|p| p.norm())
            .fold(0.0, f64::max)
    }

    /// `D(λ₀) + C(λ₀)A(λ₀)⁻¹B(λ₀)` through one LU solve.
    pub fn transfer_eval(&self, x: C64) -> Result<CMatrix> {
        let ainv_b = self.solve_state(x, &self.b.eval(x))?;
        Ok(self.d.eval(x) + self.c.eval(x) * ainv_b)
    }

    /// `A(λ₀)⁻¹ Y`, failing when `A(λ₀)` is numerically singular.
    pub fn solve_state(&self, x: C64, y: &CMatrix) -> Result<CMatrix> {
        let ax = self.a.eval(x);
        let s = dense::singular_values(&ax)?;
        let smax = s.first().copied().unwrap_or(0.0);
        let smin = s.last().copied().unwrap_or(0.0);
        if smin <= 1e3 * f64::EPSILON * smax || smax == 0.0 {
            return Err(Error::SingularState(x));
        }
        dense::solve(&ax, y).ok_or(Error::SingularState(x))
    }

    /// `(rank[A;C](λ₀) = n, rank[A B](λ₀) = n)`.
    ///
    /// Singular values are measured against the coefficient scale at `|λ₀|`,
    /// so a block that vanishes up to rounding is rank deficient.
    pub fn check_finite_minimality(&self, x: C64, rtol: Option<f64>) -> Result<(bool, bool)> {
        let n = self.n();
        let (ax, bx, cx) = (self.a.eval(x), self.b.eval(x), self.c.eval(x));
        let sa = self.a.eval_bound(x);
        let left = stack_rows(&ax, &cx);
        let right = stack_cols(&ax, &bx);
        let left_scale = sa.hypot(self.c.eval_bound(x));
        let right_scale = sa.hypot(self.b.eval_bound(x));
        Ok((
            dense::rank_scaled(&left, rtol, left_scale)? == n,
            dense::rank_scaled(&right, rtol, right_scale)? == n,
        ))
    }

    /// Infinity minimality for grades `(d_A, d_D)`:
    /// `rank[rev A(0); rev C(0)] = n`, `rank[rev A(0), rev B(0)] = n`.
    pub fn check_infinity_minimality_with(&self, grades: (usize, usize), rtol: Option<f64>) -> Result<(bool, bool)> {
        let (da, dd) = grades;
        let zero = C64::new(0.0, 0.0);
        let ra = self.a.reversal(da)?.eval(zero);
        let rc = self.c.reversal(da)?.eval(zero);
        let rb = self.b.reversal(dd)?.eval(zero);
        let n = self.n();
        Ok((
            dense::rank(&stack_rows(&ra, &rc), rtol)? == n,
            dense::rank(&stack_cols(&ra, &rb), rtol)? == n,
        ))
    }

    pub fn check_infinity_minimality(&self) -> Result<(bool, bool)> {
        self.check_infinity_minimality_with(self.default_grades(), None)
    }
}

pub(crate) fn stack_rows(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    m.view_mut((0, 0), top.shape()).copy_from(top);
    m.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    m
}

pub(crate) fn stack_cols(left: &CMatrix, right: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(left.nrows(), left.ncols() + right.ncols());
    m.view_mut((0, 0), left.shape()).copy_from(left);
    m.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    m
}

/// `M_P` with `M_P(λ)·N(λ)ᵀ = P(λ)` for the pair's grade.
///
/// Monomial: `[P_d λ + P_{d−1}, P_{d−2}, …, P_0]`.
/// Chebyshev: `[2P_d λ + P_{d−1}, P_{d−2} − P_d, P_{d−3}, …, P_0]`.
pub fn row_pencil(p: &PolyMatrix, d: usize, pair: &DualBasisPair) -> Result<PolyMatrix> {
    row_pencil_at(p, d, d, pair)
}

/// [`row_pencil`] of `P` at its own grade `k = max(1, deg P)`, preceded by
/// `d − k` zero blocks: `[0, …, 0, P_k λ + P_{k−1}, …, P_0]` in the
/// monomial case. This is the form used for `M_B`.
pub fn row_pencil_trailing(p: &PolyMatrix, d: usize, pair: &DualBasisPair) -> Result<PolyMatrix> {
    let k = p.degree().unwrap_or(0).max(1);
    row_pencil_at(p, k.min(d), d, pair)
}

/// The grade-`k` row pencil placed in the last `k` of `d` blocks. Valid
/// because the last `k` blocks of `N` are the grade-`k` dual basis.
fn row_pencil_at(p: &PolyMatrix, k: usize, d: usize, pair: &DualBasisPair) -> Result<PolyMatrix> {
    if p.basis() != pair.basis {
        return Err(Error::BasisMismatch("row_pencil: P and pair"));
    }
    if pair.d != d || pair.s != p.cols() {
        return Err(Error::Precondition(format!(
            "row_pencil: pair has (s, d) = ({}, {}), need ({}, {d})",
            pair.s,
            pair.d,
            p.cols()
        )));
    }
    let deg = p.degree().unwrap_or(0);
    if d < deg.max(1) {
        return Err(Error::GradeTooSmall { grade: d, degree: deg });
    }
    let (r, c) = p.shape();
    let pk = |k: usize| p.coeff(k);
    let mut m0 = CMatrix::zeros(r, d * c);
    let mut m1 = CMatrix::zeros(r, d * c);
    // Block `off + j` pairs with β_{k−1−j}.
    let off = d - k;
    let put = |m: &mut CMatrix, j: usize, v: CMatrix| {
        let mut blk = m.view_mut((0, (off + j) * c), (r, c));
        blk += v;
    };
    if k == 1 {
        put(&mut m1, 0, pk(1));
        put(&mut m0, 0, pk(0));
    } else {
        match p.basis() {
            Basis::Monomial => {
                put(&mut m1, 0, pk(k));
                put(&mut m0, 0, pk(k - 1));
            }
            Basis::Chebyshev1 => {
                put(&mut m1, 0, pk(k) * C64::new(2.0, 0.0));
                put(&mut m0, 0, pk(k - 1));
                put(&mut m0, 1, -pk(k));
            }
        }
        for j in 1..k {
            put(&mut m0, j, pk(k - 1 - j));
        }
    }
    PolyMatrix::new(p.basis(), vec![m0, m1])
}

/// Half-open row and column ranges of a block inside `𝓛`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 4]", into = "[usize; 4]")]
pub struct BlockRange {
    pub r0: usize,
    pub r1: usize,
    pub c0: usize,
    pub c1: usize,
}

impl From<[usize; 4]> for BlockRange {
    fn from(a: [usize; 4]) -> Self {
        Self {
            r0: a[0],
            r1: a[1],
            c0: a[2],
            c1: a[3],
        }
    }
}

impl From<BlockRange> for [usize; 4] {
    fn from(b: BlockRange) -> Self {
        [b.r0, b.r1, b.c0, b.c1]
    }
}

#[derive(Clone, Debug)]
pub struct StructuredLinearization {
    pub l0: CMatrix,
    pub l1: CMatrix,
    pub rho_a: usize,
    pub rho_d: usize,
    /// `n ρ_A + m ρ_D`.
    pub s: usize,
    pub blocks: BTreeMap<String, BlockRange>,
    pub pair_a: DualBasisPair,
    pub pair_d: DualBasisPair,
    pub m_a: PolyMatrix,
    pub m_b: PolyMatrix,
    pub m_c: PolyMatrix,
    pub m_d: PolyMatrix,
    pub realization: Realization,
}

/// Builds `𝓛` with the default grades.
pub fn build(r: &Realization) -> Result<StructuredLinearization> {
    let (da, dd) = r.default_grades();
    build_with_grades(r, da, dd)
}

/// Builds `𝓛` with grades raised to at least the defaults.
pub fn build_with_grades(r: &Realization, da: usize, dd: usize) -> Result<StructuredLinearization> {
    let (min_a, min_d) = r.default_grades();
    if da < min_a {
        return Err(Error::GradeTooSmall {
            grade: da,
            degree: min_a,
        });
    }
    if dd < min_d {
        return Err(Error::GradeTooSmall {
            grade: dd,
            degree: min_d,
        });
    }
    let (n, p, m) = (r.n(), r.p(), r.m());
    let pair_a = dualbases::pair(r.basis_a(), n, da)?;
    let pair_d = dualbases::pair(r.basis_d(), m, dd)?;
    // C and B are seen through the partner's dual basis: size s = n or m.
    let m_a = row_pencil(&r.a, da, &pair_a)?;
    let m_c = row_pencil(&r.c, da, &pair_a)?;
    let m_b = row_pencil_trailing(&r.b, dd, &pair_d)?;
    let m_d = row_pencil(&r.d, dd, &pair_d)?;

    let wa = n * da;
    let wd = m * dd;
    let rows = wa + p + m * (dd - 1);
    let cols = wa + wd;
    let mut l0 = CMatrix::zeros(rows, cols);
    let mut l1 = CMatrix::zeros(rows, cols);
    let mut blocks = BTreeMap::new();

    let mut place = |name: &str, r0: usize, c0: usize, blk: &PolyMatrix, sign: f64| {
        let (h, w) = blk.shape();
        // Adding +0 turns the −0 entries of negated blocks into +0.
        let signed = |m: CMatrix| m.map(|z| z * sign + C64::new(0.0, 0.0));
        l0.view_mut((r0, c0), (h, w)).copy_from(&signed(blk.coeff(0)));
        l1.view_mut((r0, c0), (h, w)).copy_from(&signed(blk.coeff(1)));
        blocks.insert(
            name.to_string(),
            BlockRange {
                r0,
                r1: r0 + h,
                c0,
                c1: c0 + w,
            },
        );
    };
    place("M_A", 0, 0, &m_a, 1.0);
    place("M_B", 0, wa, &m_b, 1.0);
    place("K_A", n, 0, &pair_a.k, 1.0);
    place("M_C", wa, 0, &m_c, -1.0);
    place("M_D", wa, wa, &m_d, 1.0);
    place("K_D", wa + p, wa, &pair_d.k, 1.0);
    blocks.insert(
        "L_A".to_string(),
        BlockRange {
            r0: 0,
            r1: wa,
            c0: 0,
            c1: wa,
        },
    );

    Ok(StructuredLinearization {
        l0,
        l1,
        rho_a: da - 1,
        rho_d: dd - 1,
        s: n * (da - 1) + m * (dd - 1),
        blocks,
        pair_a,
        pair_d,
        m_a,
        m_b,
        m_c,
        m_d,
        realization: r.clone(),
    })
}

impl StructuredLinearization {
    pub fn grades(&self) -> (usize, usize) {
        (self.rho_a + 1, self.rho_d + 1)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.l0.shape()
    }

    /// Width of the state block, `n(1 + ρ_A)`.
    pub fn state_width(&self) -> usize {
        self.realization.n() * (self.rho_a + 1)
    }

    pub fn eval(&self, x: C64) -> CMatrix {
        &self.l0 + &self.l1 * x
    }

    /// `𝓛(λ)` as a monomial grade-one polynomial matrix.
    pub fn pencil(&self) -> PolyMatrix {
        PolyMatrix::new(Basis::Monomial, vec![self.l0.clone(), self.l1.clone()]).expect("consistent shapes")
    }

    /// State pencil `L_A = [M_A; K_A]` as `(L0, L1)`.
    pub fn state_pencil(&self) -> (CMatrix, CMatrix) {
        let w = self.state_width();
        (
            self.l0.view((0, 0), (w, w)).into_owned(),
            self.l1.view((0, 0), (w, w)).into_owned(),
        )
    }

    /// `M_R(λ₀) = M_D(λ₀) + C(λ₀)A(λ₀)⁻¹M_B(λ₀)`.
    pub fn m_r_eval(&self, x: C64) -> Result<CMatrix> {
        let r = &self.realization;
        let ainv_mb = r.solve_state(x, &self.m_b.eval(x))?;
        Ok(self.m_d.eval(x) + r.c.eval(x) * ainv_mb)
    }

    /// `R̂(λ₀) = [M_R(λ₀); K_D(λ₀)]`.
    pub fn hat_transfer_eval(&self, x: C64) -> Result<CMatrix> {
        Ok(stack_rows(&self.m_r_eval(x)?, &self.pair_d.k.eval(x)))
    }

    pub fn export(&self) -> LinearizationExport {
        LinearizationExport {
            l0: DenseJson::from(&self.l0),
            l1: DenseJson::from(&self.l1),
            blocks: self.blocks.clone(),
            rho_a: self.rho_a,
            rho_d: self.rho_d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearizationExport {
    #[serde(rename = "L0")]
    pub l0: DenseJson,
    #[serde(rename = "L1")]
    pub l1: DenseJson,
    pub blocks: BTreeMap<String, BlockRange>,
    #[serde(rename = "rhoA")]
    pub rho_a: usize,
    #[serde(rename = "rhoD")]
    pub rho_d: usize,
}

/// Pointwise and at-infinity minimality for a set of points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub finite: Vec<PointMinimality>,
    pub infinity: (bool, bool),
    pub grades: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMinimality {
    pub lambda: crate::json::Complex,
    pub left: bool,
    pub right: bool,
}

impl MinimalityReport {
    pub fn all_ok(&self) -> bool {
        self.infinity.0 && self.infinity.1 && self.finite.iter().all(|p| p.left && p.right)
    }
}

pub fn minimality_report(
    r: &Realization,
    points: &[C64],
    grades: (usize, usize),
    rtol: Option<f64>,
) -> Result<MinimalityReport> {
    let finite = points
        .iter()
        .map(|&x| {
            let (left, right) = r.check_finite_minimality(x, rtol)?;
            Ok(PointMinimality {
                lambda: crate::json::complex(x),
                left,
                right,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MinimalityReport {
        finite,
        infinity: r.check_infinity_minimality_with(grades, None)?,
        grades,
    })
}
