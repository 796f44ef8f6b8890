//! Scalar rational equations `c(λ)/a(λ) = d(λ)/b(λ)` with `a, c` in the
//! monomial basis and `b, d` in the Chebyshev basis.
//!
//! The realization is `A = a`, `B = b`, `C = −c`, `D = d`, so the transfer
//! function is `r(λ) = d − c·a⁻¹·b` and the assembled `(2,1)` block of `𝓛`
//! is `+M_c`. The eigenvalues of `𝓛` are the roots of `a·d − b·c`.

use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::eigsolve;
use crate::json::{self, Complex};
use crate::linbuild::{self, Realization};
use crate::polymat::{Basis, PolyMatrix};
use crate::sampler::Sampler;
use crate::{Error, Result, Tolerances, DEFAULT_SEED};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarEquation {
    a: PolyMatrix,
    c: PolyMatrix,
    b: PolyMatrix,
    d: PolyMatrix,
}

fn scalar_coeffs(p: &PolyMatrix) -> Vec<C64> {
    p.coeffs().iter().map(|m| m[(0, 0)]).collect()
}

fn require_scalar(p: &PolyMatrix, basis: Basis, what: &'static str) -> Result<()> {
    if p.shape() != (1, 1) {
        return Err(Error::DimensionMismatch {
            op: what,
            lhs: p.shape(),
            rhs: (1, 1),
        });
    }
    if p.basis() != basis {
        return Err(Error::BasisMismatch(what));
    }
    Ok(())
}

impl ScalarEquation {
    /// `a, c` monomial and `b, d` Chebyshev, each pair padded to a common
    /// grade `max(deg, deg)`.
    pub fn new(a: PolyMatrix, c: PolyMatrix, b: PolyMatrix, d: PolyMatrix) -> Result<Self> {
        require_scalar(&a, Basis::Monomial, "ScalarEquation: a")?;
        require_scalar(&c, Basis::Monomial, "ScalarEquation: c")?;
        require_scalar(&b, Basis::Chebyshev1, "ScalarEquation: b")?;
        require_scalar(&d, Basis::Chebyshev1, "ScalarEquation: d")?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::Precondition("a and b must be nonzero".into()));
        }
        let deg = |p: &PolyMatrix| p.degree().unwrap_or(0);
        let n = deg(&a).max(deg(&c));
        let m = deg(&b).max(deg(&d));
        let fit = |p: &PolyMatrix, g: usize| p.trimmed().with_grade(g);
        Ok(Self {
            a: fit(&a, n)?,
            c: fit(&c, n)?,
            b: fit(&b, m)?,
            d: fit(&d, m)?,
        })
    }

    /// From ascending coefficient lists: `a, c` monomial, `b, d` Chebyshev.
    pub fn from_coeffs(a: &[C64], c: &[C64], b: &[C64], d: &[C64]) -> Result<Self> {
        let mono = |v: &[C64]| PolyMatrix::scalar(Basis::Monomial, v);
        let cheb = |v: &[C64]| PolyMatrix::scalar(Basis::Chebyshev1, v);
        Self::new(mono(a)?, mono(c)?, cheb(b)?, cheb(d)?)
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

    /// `(n, m)`.
    pub fn grades(&self) -> (usize, usize) {
        (self.a.grade(), self.b.grade())
    }

    /// `c(λ₀)b(λ₀) − a(λ₀)d(λ₀)`.
    pub fn cleared_eval(&self, x: C64) -> C64 {
        let e = |p: &PolyMatrix| p.eval(x)[(0, 0)];
        e(&self.c) * e(&self.b) - e(&self.a) * e(&self.d)
    }

    /// `(Σ|a_k|·Σ|b_k| + Σ|c_k|·Σ|d_k|)·max(1, |λ₀|)^{n+m}` over monomial
    /// coefficients, a bound on both products in the cleared form.
    pub fn residual_scale(&self, x: C64) -> f64 {
        let l1 = |p: &PolyMatrix| scalar_coeffs(&p.to_monomial()).iter().map(|z| z.norm()).sum::<f64>();
        let (n, m) = self.grades();
        (l1(&self.a) * l1(&self.b) + l1(&self.c) * l1(&self.d)) * x.norm().max(1.0).powi((n + m) as i32)
    }

    pub fn realization(&self) -> Result<Realization> {
        Realization::new(self.a.clone(), self.b.clone(), self.c.neg(), self.d.clone())
    }
}

/// Roots of `Σ coeffs[k] λ^k` from the companion matrix.
///
/// Exact trailing zeros lower the degree; exact leading zeros are returned
/// as exact zero roots.
pub fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let zero = C64::new(0.0, 0.0);
    let Some(top) = coeffs.iter().rposition(|&z| z != zero) else {
        return Err(Error::IdenticallyZero);
    };
    let low = coeffs.iter().position(|&z| z != zero).unwrap_or(0);
    let core = &coeffs[low..=top];
    let k = core.len() - 1;
    let mut roots = vec![zero; low];
    if k > 0 {
        let lead = core[k];
        let comp = CMatrix::from_fn(k, k, |i, j| {
            if i == 0 {
                -core[k - 1 - j] / lead
            } else if i == j + 1 {
                C64::new(1.0, 0.0)
            } else {
                zero
            }
        });
        roots.extend(dense::eigenvalues(&comp)?);
    }
    Ok(roots)
}

/// Roots of a scalar polynomial matrix in either basis.
pub fn scalar_roots(p: &PolyMatrix) -> Result<Vec<C64>> {
    companion_roots(&scalar_coeffs(&p.to_monomial()))
}

/// `c/a` has no common root; with `c ≡ 0` this needs `a` constant.
pub fn irreducibility_check(a: &PolyMatrix, c: &PolyMatrix) -> Result<bool> {
    irreducibility_check_with(a, c, &Tolerances::default())
}

pub fn irreducibility_check_with(a: &PolyMatrix, c: &PolyMatrix, tol: &Tolerances) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Precondition("a must be nonzero".into()));
    }
    if c.is_zero() {
        return Ok(a.degree() == Some(0));
    }
    let ra = scalar_roots(a)?;
    let rc = scalar_roots(c)?;
    Ok(!ra.iter().any(|&x| rc.iter().any(|&y| tol.matches(x, y))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub lambda: Complex,
    /// `|c(λ₀)b(λ₀) − a(λ₀)d(λ₀)|`.
    pub residual: f64,
    pub scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ExclusionReason {
    /// `b(λ₀) = 0`: a pole of `d/b`.
    PoleOfRight,
    /// Minimality fails at `λ₀`, so it is an eigenvalue of `𝓛` only.
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Excluded {
    pub lambda: Complex,
    pub reason: ExclusionReason,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<Root>,
    pub excluded: Vec<Excluded>,
    /// `(n, m)`.
    pub grades: (usize, usize),
}

impl RootReport {
    pub fn root_values(&self) -> Vec<C64> {
        self.roots.iter().map(|r| json::from_complex(r.lambda)).collect()
    }
}

/// `r ≡ 0` when the cleared form vanishes, relative to its terms, at 20
/// seeded unit-circle points.
fn identically_zero(eq: &ScalarEquation) -> bool {
    let mut s = Sampler::new(DEFAULT_SEED ^ 0x5CA1);
    s.unit_circle_points(20).into_iter().all(|x| {
        let e = |p: &PolyMatrix| p.eval(x)[(0, 0)].norm();
        let terms = e(&eq.c) * e(&eq.b) + e(&eq.a) * e(&eq.d);
        eq.cleared_eval(x).norm() <= 1e-12 * terms
    })
}

pub fn solve_scalar(eq: &ScalarEquation, tol: &Tolerances) -> Result<RootReport> {
    if !irreducibility_check_with(&eq.a, &eq.c, tol)? {
        return Err(Error::Reducible);
    }
    if identically_zero(eq) {
        return Err(Error::IdenticallyZero);
    }
    let sl = linbuild::build(&eq.realization()?)?;
    let report = eigsolve::classify(&sl, tol)?;
    let b_roots = scalar_roots(&eq.b)?;
    let mut roots = Vec::new();
    let mut excluded = Vec::new();
    for z in &report.zeros {
        let x = json::from_complex(z.lambda);
        let reason = if !z.classified {
            Some(ExclusionReason::Unclassified)
        } else if b_roots.iter().any(|&p| tol.matches(x, p)) {
            Some(ExclusionReason::PoleOfRight)
        } else {
            None
        };
        match reason {
            Some(reason) => excluded.push(Excluded {
                lambda: z.lambda,
                reason,
            }),
            None => roots.push(Root {
                lambda: z.lambda,
                residual: eq.cleared_eval(x).norm(),
                scale: eq.residual_scale(x),
            }),
        }
    }
    Ok(RootReport {
        roots,
        excluded,
        grades: eq.grades(),
    })
}
