//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here calls the library's evaluators or solvers: polynomials are
//! evaluated by their own recurrences, linear algebra goes through nalgebra
//! and scalar polynomials are plain coefficient vectors.
#![allow(dead_code)]

use nalgebra::DMatrix;
use ratlin::{Basis, PolyMatrix, Realization, C64};

pub type Mat = DMatrix<C64>;
/// Ascending monomial coefficients.
pub type Poly = Vec<C64>;
/// Row-major entries, each a scalar polynomial.
pub type PolyMat = Vec<Vec<Poly>>;

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Basis function values `φ_0(x), …, φ_g(x)`.
fn basis_values(basis: Basis, g: usize, x: C64) -> Vec<C64> {
    let mut v = vec![c(1.0)];
    for k in 1..=g {
        let next = match (basis, k) {
            (Basis::Monomial, _) => v[k - 1] * x,
            (Basis::Chebyshev1, 1) => x,
            (Basis::Chebyshev1, _) => x * v[k - 1] * 2.0 - v[k - 2],
        };
        v.push(next);
    }
    v
}

pub fn eval(p: &PolyMatrix, x: C64) -> Mat {
    let phi = basis_values(p.basis(), p.grade(), x);
    p.coeffs()
        .iter()
        .zip(&phi)
        .fold(Mat::zeros(p.rows(), p.cols()), |acc, (ck, &f)| acc + ck * f)
}

/// Monomial coefficients of `T_0, …, T_g`.
fn chebyshev_in_monomials(g: usize) -> Vec<Poly> {
    let mut t: Vec<Poly> = vec![vec![c(1.0)], vec![c(0.0), c(1.0)]];
    for k in 2..=g {
        let mut next = vec![c(0.0); k + 1];
        for (j, &a) in t[k - 1].iter().enumerate() {
            next[j + 1] += a * 2.0;
        }
        for (j, &a) in t[k - 2].iter().enumerate() {
            next[j] -= a;
        }
        t.push(next);
    }
    t.truncate(g + 1);
    t
}

/// Entrywise monomial form.
pub fn entries(p: &PolyMatrix) -> PolyMat {
    let g = p.grade();
    let table: Vec<Poly> = match p.basis() {
        Basis::Monomial => (0..=g)
            .map(|k| {
                let mut e = vec![c(0.0); k + 1];
                e[k] = c(1.0);
                e
            })
            .collect(),
        Basis::Chebyshev1 => chebyshev_in_monomials(g),
    };
    (0..p.rows())
        .map(|i| {
            (0..p.cols())
                .map(|j| {
                    let mut out = vec![c(0.0); g + 1];
                    for (k, phi) in table.iter().enumerate() {
                        let a = p.coeffs()[k][(i, j)];
                        for (t, &b) in phi.iter().enumerate() {
                            out[t] += a * b;
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

pub fn poly_mul(a: &[C64], b: &[C64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![c(0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[C64], b: &[C64]) -> Poly {
    (0..a.len().max(b.len()))
        .map(|k| a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn poly_scale(a: &[C64], s: C64) -> Poly {
    a.iter().map(|&x| x * s).collect()
}

pub fn poly_eval(a: &[C64], x: C64) -> C64 {
    a.iter().rev().fold(c(0.0), |acc, &k| acc * x + k)
}

/// Drops trailing coefficients below `rtol` times the largest one.
pub fn poly_trim(a: &[C64], rtol: f64) -> Poly {
    let big = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let keep = a.iter().rposition(|z| z.norm() > rtol * big).map_or(0, |k| k + 1);
    a[..keep].to_vec()
}

pub fn degree(a: &[C64], rtol: f64) -> Option<usize> {
    poly_trim(a, rtol).len().checked_sub(1)
}

/// Roots from the companion matrix (complex Schur), each polished by a
/// few Newton steps. Exact zero trailing coefficients become zero roots.
pub fn poly_roots(a: &[C64]) -> Vec<C64> {
    let a = poly_trim(a, 0.0);
    let zeros = a.iter().position(|z| z.norm() != 0.0).unwrap_or(0);
    let q = &a[zeros..];
    let n = q.len().saturating_sub(1);
    let mut roots = vec![c(0.0); zeros];
    if n == 0 {
        return roots;
    }
    let lead = q[n];
    let comp = Mat::from_fn(n, n, |i, j| {
        if i == 0 {
            -q[n - 1 - j] / lead
        } else if i == j + 1 {
            c(1.0)
        } else {
            c(0.0)
        }
    });
    let eig = nalgebra::linalg::Schur::new(comp)
        .eigenvalues()
        .expect("complex Schur is triangular");
    let dq: Poly = (1..=n).map(|k| q[k] * k as f64).collect();
    for mut z in eig.iter().copied() {
        for _ in 0..3 {
            let d = poly_eval(&dq, z);
            if d.norm() == 0.0 {
                break;
            }
            let step = poly_eval(q, z) / d;
            // Newton only where it contracts; clustered roots stay put.
            if step.norm() > 1e-6 * z.norm().max(1.0) {
                break;
            }
            z -= step;
        }
        roots.push(z);
    }
    roots
}

/// Every value of `got` pairs with a distinct value of `want` within
/// `tol·max(1, |want|)`.
pub fn multiset_match(got: &[C64], want: &[C64], tol: f64) -> bool {
    if got.len() != want.len() {
        return false;
    }
    // Greedy on sorted order is unreliable for clusters; use an assignment
    // search that is exact for the small sizes tested.
    fn search(got: &[C64], want: &[C64], used: &mut [bool], tol: f64) -> bool {
        let Some((&g, rest)) = got.split_first() else {
            return true;
        };
        for k in 0..want.len() {
            if !used[k] && (g - want[k]).norm() <= tol * want[k].norm().max(1.0) {
                used[k] = true;
                if search(rest, want, used, tol) {
                    return true;
                }
                used[k] = false;
            }
        }
        false
    }
    search(got, want, &mut vec![false; want.len()], tol)
}

/// Monomial coefficients of a scalar polynomial of degree `< count` from
/// values at rotated roots of unity (the rotation avoids real poles).
pub fn interpolate(count: usize, f: impl Fn(C64) -> C64) -> Poly {
    let rot = C64::from_polar(1.0, 0.37);
    let w: Vec<C64> = (0..count)
        .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / count as f64))
        .collect();
    let vals: Vec<C64> = w.iter().map(|&wk| f(rot * wk)).collect();
    (0..count)
        .map(|j| {
            let s: C64 = (0..count).map(|k| vals[k] * w[k].powu(j as u32).conj()).sum();
            s / count as f64 / rot.powu(j as u32)
        })
        .collect()
}

pub fn solve(a: &Mat, b: &Mat) -> Mat {
    a.clone().lu().solve(b).expect("nonsingular")
}

/// `D + C A⁻¹ B` at `x`.
pub fn transfer(r: &Realization, x: C64) -> Mat {
    eval(r.d(), x) + eval(r.c(), x) * solve(&eval(r.a(), x), &eval(r.b(), x))
}

pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Numerical rank with cutoff `rtol·σ_max`, `rtol = max(rows, cols)·ε` by default.
pub fn rank(m: &Mat, rtol: Option<f64>) -> usize {
    let s = singular_values(m);
    let top = s.iter().copied().fold(0.0, f64::max);
    let rtol = rtol.unwrap_or(m.nrows().max(m.ncols()) as f64 * f64::EPSILON);
    s.iter().filter(|&&v| v > rtol * top).count()
}

pub fn frob(m: &Mat) -> f64 {
    m.norm()
}

pub fn pm_eval(p: &PolyMat, x: C64) -> Mat {
    let (r, cc) = (p.len(), p.first().map_or(0, |row| row.len()));
    Mat::from_fn(r, cc, |i, j| poly_eval(&p[i][j], x))
}

pub fn pm_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Vec::new(), |acc, k| poly_add(&acc, &poly_mul(&row[k], &b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn pm_add(a: &PolyMat, b: &PolyMat) -> PolyMat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| poly_add(p, q)).collect())
        .collect()
}

fn minor(a: &PolyMat, skip_r: usize, skip_c: usize) -> PolyMat {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_c)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// Laplace expansion along the first row.
pub fn pm_det(a: &PolyMat) -> Poly {
    match a.len() {
        0 => vec![c(1.0)],
        1 => a[0][0].clone(),
        _ => (0..a.len()).fold(Vec::new(), |acc, j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            poly_add(
                &acc,
                &poly_scale(&poly_mul(&a[0][j], &pm_det(&minor(a, 0, j))), c(sign)),
            )
        }),
    }
}

/// Transposed cofactor matrix: `A·adj(A) = det(A)·I`.
pub fn pm_adjugate(a: &PolyMat) -> PolyMat {
    let n = a.len();
    if n == 1 {
        return vec![vec![vec![c(1.0)]]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    poly_scale(&pm_det(&minor(a, j, i)), c(sign))
                })
                .collect()
        })
        .collect()
}

/// `det(A)·R = det(A)·D + C·adj(A)·B` in exact polynomial arithmetic.
pub fn cleared(r: &Realization) -> (PolyMat, Poly) {
    let (a, b, cc, d) = (entries(r.a()), entries(r.b()), entries(r.c()), entries(r.d()));
    let delta = pm_det(&a);
    let dd: PolyMat = d
        .iter()
        .map(|row| row.iter().map(|p| poly_mul(&delta, p)).collect())
        .collect();
    (pm_add(&dd, &pm_mul(&pm_mul(&cc, &pm_adjugate(&a)), &b)), delta)
}

pub fn pm_transpose(a: &PolyMat) -> PolyMat {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn pm_max_degree(a: &PolyMat) -> usize {
    a.iter().flatten().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0)
}

/// Block Toeplitz matrix of `v ↦ P·v` on vectors of degree `≤ k`.
fn convolution(p: &PolyMat, k: usize) -> Mat {
    let (r, cc, g) = (p.len(), p[0].len(), pm_max_degree(p));
    let mut t = Mat::zeros(r * (g + k + 1), cc * (k + 1));
    for j in 0..=k {
        for i in 0..r {
            for l in 0..cc {
                for (e, &z) in p[i][l].iter().enumerate() {
                    t[((e + j) * r + i, j * cc + l)] += z;
                }
            }
        }
    }
    t
}

/// Right minimal indices from the nullities `N_k` of the degree-`k`
/// convolution maps: `#{ε_i ≤ k} = N_k − N_{k−1}`.
pub fn right_minimal_indices(p: &PolyMat, rtol: f64) -> Vec<usize> {
    let (r, cc) = (p.len(), p.first().map_or(0, |row| row.len()));
    if cc == 0 {
        return Vec::new();
    }
    let g = pm_max_degree(p);
    // Generic rank from a few points.
    let pts = [C64::new(0.31, 0.77), C64::new(-0.64, 0.21), C64::new(0.12, -0.93)];
    let generic = pts.iter().map(|&x| rank(&pm_eval(p, x), Some(1e-9))).max().unwrap_or(0);
    let nullity = cc - generic.min(r);
    let mut out = Vec::new();
    let mut prev_count = 0;
    let mut prev_nullity = 0;
    // Minimal indices never exceed the sum of the row degrees.
    for k in 0..=(g * r + 1) {
        if out.len() == nullity {
            break;
        }
        let t = convolution(p, k);
        let null_k = t.ncols() - rank(&t, Some(rtol));
        let count = null_k - prev_nullity;
        for _ in prev_count..count {
            out.push(k);
        }
        prev_count = count;
        prev_nullity = null_k;
    }
    out
}

pub fn left_minimal_indices(p: &PolyMat, rtol: f64) -> Vec<usize> {
    right_minimal_indices(&pm_transpose(p), rtol)
}

/// A `PolyMat` evaluated from a monomial `PolyMatrix` built by the library.
pub fn from_monomial(p: &PolyMatrix) -> PolyMat {
    assert_eq!(p.basis(), Basis::Monomial);
    entries(p)
}
