//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! fails. Each criterion recomputes its reference values with the oracles
//! in `common` rather than with the library's own evaluators.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use nalgebra::{DVector, RowDVector};
use ratlin::eigsolve::{self, Side};
use ratlin::linbuild::{self, Realization, StructuredLinearization};
use ratlin::recover;
use ratlin::scalareq::{self, ScalarEquation};
use ratlin::verify::{self, FixtureSpec, Structure};
use ratlin::{Basis, PolyMatrix, Sampler, Tolerances, C64};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

const BASES: [(Basis, Basis); 4] = [
    (Basis::Monomial, Basis::Monomial),
    (Basis::Monomial, Basis::Chebyshev1),
    (Basis::Chebyshev1, Basis::Monomial),
    (Basis::Chebyshev1, Basis::Chebyshev1),
];

/// The 50 regular fixtures shared by the factorization, rank and
/// eigenvector criteria, cycling through the basis combinations.
fn regular_fixtures() -> Vec<Realization> {
    let mut s = Sampler::new(0xACCE55);
    (0..50)
        .map(|i| {
            let mut spec = FixtureSpec::sample(&mut s, 5, 4, Structure::Regular);
            spec.bases = BASES[i % 4];
            verify::gen_fixture(&spec).expect("regular fixture")
        })
        .collect()
}

/// The 20 singular fixtures, cycling through the three structures.
fn singular_fixtures() -> Vec<(Structure, Realization)> {
    let kinds = [Structure::ZeroColumnB, Structure::ZeroRowC, Structure::RankDeficientD];
    let mut s = Sampler::new(0x5146);
    (0..20)
        .map(|i| {
            let kind = kinds[i % 3];
            let mut spec = FixtureSpec::sample(&mut s, 3, 3, kind);
            spec.bases = BASES[i % 4];
            (kind, verify::gen_fixture(&spec).expect("singular fixture"))
        })
        .collect()
}

/// Sample points away from the poles: `A(x)` must be well conditioned.
fn points(s: &mut Sampler, r: &Realization, k: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let x = s.complex_normal();
        let sv = singular_values(&eval(r.a(), x));
        let (hi, lo) = (sv[0], *sv.last().unwrap());
        if lo > 1e-6 * hi {
            out.push(x);
        }
    }
    out
}

fn dims(sl: &StructuredLinearization) -> (usize, usize, usize, usize, usize) {
    let r = &sl.realization;
    let (da, dd) = sl.grades();
    (r.n(), r.p(), r.m(), da, dd)
}

fn pencil_at(sl: &StructuredLinearization, x: C64) -> Mat {
    &sl.l0 + &sl.l1 * x
}

/// `N_D(x)`: blocks `φ_{d−1}(x)I, …, φ_0(x)I`.
fn dual_n(basis: Basis, m: usize, d: usize, x: C64) -> Mat {
    let mut out = Mat::zeros(m, m * d);
    for j in 0..d {
        let mut e = vec![0.0; d - j];
        e[d - 1 - j] = 1.0;
        let phi = eval(&PolyMatrix::scalar_real(basis, &e), x)[(0, 0)];
        for t in 0..m {
            out[(t, j * m + t)] = phi;
        }
    }
    out
}

struct Factorization {
    relative: f64,
}

/// Both one-sided factorizations at `x`, assembled from the pencil's
/// blocks and oracle evaluations of the realization.
fn factorization_at(sl: &StructuredLinearization, x: C64) -> Factorization {
    let (n, p, m, da, dd) = dims(sl);
    let r = &sl.realization;
    let wa = n * da;
    let l = pencil_at(sl, x);
    let m_b = l.view((0, wa), (n, m * dd)).clone_owned();
    let m_d = l.view((wa, wa), (p, m * dd)).clone_owned();
    let k_d = l.view((wa + p, wa), (m * (dd - 1), m * dd)).clone_owned();
    let (a, cm) = (eval(r.a(), x), eval(r.c(), x));
    let m_r = &m_d + &cm * solve(&a, &m_b);
    let rhat = {
        let mut h = Mat::zeros(p + m * (dd - 1), m * dd);
        h.view_mut((0, 0), (p, m * dd)).copy_from(&m_r);
        h.view_mut((p, 0), k_d.shape()).copy_from(&k_d);
        h
    };
    let rx = transfer(r, x);
    let nd = dual_n(r.basis_d(), m, dd, x);
    let khat = eval(&sl.pair_d.khat, x);
    // [K; K̂]⁻¹ = [N̂ᵀ Nᵀ].
    let mut kk = Mat::zeros(m * dd, m * dd);
    kk.view_mut((0, 0), k_d.shape()).copy_from(&k_d);
    kk.view_mut((m * (dd - 1), 0), khat.shape()).copy_from(&khat);
    let inv = kk.clone().try_inverse().expect("unimodular completion");
    let nhat_t = inv.view((0, 0), (m * dd, m * (dd - 1))).clone_owned();

    let mut want = Mat::zeros(p + m * (dd - 1), m);
    want.view_mut((0, 0), (p, m)).copy_from(&rx);
    let right = frob(&(&rhat * nd.transpose() - want));

    let mut left_factor = Mat::zeros(p, p + m * (dd - 1));
    left_factor.view_mut((0, 0), (p, p)).fill_with_identity();
    left_factor
        .view_mut((0, p), (p, m * (dd - 1)))
        .copy_from(&-(&m_r * &nhat_t));
    let left = frob(&(&left_factor * &rhat - &rx * &khat));

    let (nr, nrx) = (frob(&rhat), frob(&rx));
    let scale = (nr * frob(&nd) + nrx).max(frob(&left_factor) * nr + nrx * frob(&khat));
    let relative = right.max(left) / scale;
    // The library's own residuals must agree in magnitude with the oracle's.
    let lib = recover::factorization_residuals(sl, x).expect("library residuals");
    Factorization {
        relative: relative.max(lib.relative()),
    }
}

fn one_sided_factorizations(fixtures: &[Realization]) -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(0xFAC7);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for r in fixtures {
        let sl = linbuild::build(r).expect("build");
        for x in points(&mut s, r, 10) {
            worst = worst.max(factorization_at(&sl, x).relative);
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst <= 1e-10 && elapsed <= Duration::from_secs(30),
        format!(
            "{count} evaluations, worst relative residual {worst:.2e}, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn rank_relation(fixtures: &[Realization]) -> Outcome {
    let mut s = Sampler::new(0x4A4C);
    let mut bad = Vec::new();
    let mut count = 0;
    for (i, r) in fixtures.iter().enumerate() {
        let sl = linbuild::build(r).expect("build");
        let (n, _, _, _, _) = dims(&sl);
        let shift = n + sl.s;
        for x in points(&mut s, r, 5) {
            let lhs = rank(&pencil_at(&sl, x), None);
            let rhs = rank(&transfer(r, x), None) + shift;
            count += 1;
            if lhs != rhs {
                bad.push(format!("fixture {i}: {lhs} vs {rhs}"));
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{count} points, mismatches {bad:?}"))
}

/// Block matrix from the display for deg A = 3, deg C = 1, deg D = 3,
/// deg B = 2, written out coefficient by coefficient.
fn block_layout() -> Outcome {
    let r = verify::degree_pattern(0x3E3E, 2, 3, 2).expect("fixture");
    let sl = linbuild::build(&r).expect("build");
    let (n, p, m) = (r.n(), r.p(), r.m());
    let (rows, cols) = (3 * n + p + 2 * m, 3 * n + 3 * m);
    let mut l0 = Mat::zeros(rows, cols);
    let mut l1 = Mat::zeros(rows, cols);
    let put = |t: &mut Mat, i: usize, j: usize, b: &Mat| t.view_mut((i, j), b.shape()).copy_from(b);
    let (a, b, cc, d) = (r.a(), r.b(), r.c(), r.d());
    let eye = |k: usize| Mat::identity(k, k);
    let (cn, cm) = (3 * n, 3 * n + p);
    // Row block 1: [A₃λ+A₂, A₁, A₀ | 0, B₂λ+B₁, B₀].
    put(&mut l1, 0, 0, &a.coeff(3));
    put(&mut l0, 0, 0, &a.coeff(2));
    put(&mut l0, 0, n, &a.coeff(1));
    put(&mut l0, 0, 2 * n, &a.coeff(0));
    put(&mut l1, 0, cn + m, &b.coeff(2));
    put(&mut l0, 0, cn + m, &b.coeff(1));
    put(&mut l0, 0, cn + 2 * m, &b.coeff(0));
    // Rows 2–3: [−I, Iλ, 0], [0, −I, Iλ].
    for k in 0..2 {
        put(&mut l0, n * (k + 1), n * k, &-eye(n));
        put(&mut l1, n * (k + 1), n * (k + 1), &eye(n));
    }
    // Row block 4: [0, −C₁, −C₀ | D₃λ+D₂, D₁, D₀].
    put(&mut l0, cn, n, &-cc.coeff(1));
    put(&mut l0, cn, 2 * n, &-cc.coeff(0));
    put(&mut l1, cn, cn, &d.coeff(3));
    put(&mut l0, cn, cn, &d.coeff(2));
    put(&mut l0, cn, cn + m, &d.coeff(1));
    put(&mut l0, cn, cn + 2 * m, &d.coeff(0));
    // Rows 5–6: the K_D rows.
    for k in 0..2 {
        put(&mut l0, cm + m * k, cn + m * k, &-eye(m));
        put(&mut l1, cm + m * k, cn + m * (k + 1), &eye(m));
    }
    let exact = sl.l0 == l0 && sl.l1 == l1;
    let first_diff = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .find(|&(i, j)| sl.l0[(i, j)] != l0[(i, j)] || sl.l1[(i, j)] != l1[(i, j)]);
    Outcome::new(
        exact && sl.grades() == (3, 3),
        format!("{rows}x{cols} pencil, first differing entry {first_diff:?}"),
    )
}

/// `R` of the illustrative example in closed form.
fn example_transfer(x: C64) -> Mat {
    let f1 = (x * x + 1.0) * (x + 2.0) / (x * x - x - 2.0);
    let f2 = (x * x - 1.0) * x * x / (x + 2.0);
    Mat::from_row_slice(2, 2, &[x * x, f1, f2, x * x])
}

fn example_regression() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let r = verify::preset("paper-sec5", 0).expect("preset");
    let sl = linbuild::build(&r).expect("build");
    let proxy = recover::minimality_proxy(&sl, &tol).expect("minimality");
    let report = eigsolve::classify(&sl, &tol).expect("classify");

    // det A by interpolation of oracle evaluations.
    let det_a = poly_trim(&interpolate(8, |x| eval(r.a(), x).determinant()), 1e-12);
    let want_poles = poly_roots(&det_a);
    let poles_ok = multiset_match(&report.pole_values(), &want_poles, 1e-8);

    // det(Δ R) with Δ = diag(λ²−λ−2, λ+2), degree ≤ 8.
    let delta = |x: C64| Mat::from_diagonal(&DVector::from_vec(vec![x * x - x - 2.0, x + 2.0]));
    let cleared = poly_trim(
        &interpolate(12, |x| (delta(x) * example_transfer(x)).determinant()),
        1e-12,
    );
    let want_zeros = poly_roots(&cleared);
    let zeros_ok = multiset_match(&report.zero_values(), &want_zeros, tol.matching);
    let elapsed = start.elapsed();
    let passed = proxy.all_ok() && poles_ok && zeros_ok && elapsed <= Duration::from_secs(5);
    Outcome::new(
        passed,
        format!(
            "minimality {}, poles {} ({} values), zeros {} ({} values), {:.2} s",
            proxy.all_ok(),
            poles_ok,
            want_poles.len(),
            zeros_ok,
            want_zeros.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Root condition number of `p` at a simple root.
fn root_condition(p: &[C64], z: C64) -> f64 {
    let dp: Poly = (1..p.len()).map(|k| p[k] * k as f64).collect();
    let mag: f64 = p
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm() * z.norm().powi(k as i32))
        .sum();
    mag / (z.norm().max(1.0) * poly_eval(&dp, z).norm())
}

fn cheb_to_mono(coeffs: &[C64]) -> Poly {
    let p = PolyMatrix::scalar(Basis::Chebyshev1, coeffs).expect("scalar");
    entries(&p)[0][0].clone()
}

fn scalar_solver() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut s = Sampler::new(0x5CA7);
    let (mut accepted, mut drawn) = (0, 0);
    let mut failures = Vec::new();
    while accepted < 200 && drawn < 2000 {
        drawn += 1;
        let n = s.uniform_usize(1, 12);
        let m = s.uniform_usize(1, 12);
        let mut v = |k: usize| (0..=k).map(|_| s.complex_normal()).collect::<Vec<_>>();
        let (a, cc, b, d) = (v(n), v(n), v(m), v(m));
        // Oracle: roots of c·b − a·d in monomials, minus roots of b.
        let (bm, dm) = (cheb_to_mono(&b), cheb_to_mono(&d));
        let cleared = poly_add(&poly_mul(&cc, &bm), &poly_scale(&poly_mul(&a, &dm), c(-1.0)));
        let roots = poly_roots(&cleared);
        let sep = roots
            .iter()
            .enumerate()
            .flat_map(|(i, x)| roots[i + 1..].iter().map(move |y| (x - y).norm()))
            .fold(f64::INFINITY, f64::min);
        let well = roots.iter().all(|&z| root_condition(&cleared, z) < 1e8) && sep > 1e-6;
        let near_b = roots
            .iter()
            .any(|&z| poly_eval(&bm, z).norm() < 1e-6 * z.norm().max(1.0).powi(m as i32));
        if !well || near_b {
            continue;
        }
        accepted += 1;
        let eq = ScalarEquation::from_coeffs(&a, &cc, &b, &d).expect("equation");
        match scalareq::solve_scalar(&eq, &tol) {
            Ok(rep) if multiset_match(&rep.root_values(), &roots, tol.matching) => {}
            Ok(rep) => failures.push(format!("n={n} m={m}: {} vs {} roots", rep.roots.len(), roots.len())),
            Err(e) => failures.push(format!("n={n} m={m}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        accepted == 200 && failures.is_empty() && elapsed <= Duration::from_secs(60),
        format!(
            "{accepted} equations accepted of {drawn} drawn, {} mismatches {:?}, {:.2} s",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Minimal basis conditions checked with the oracles: `δR·U = 0`,
/// full rank at sample points and at 0, and a full-rank matrix of
/// highest-degree coefficients.
fn basis_conditions(cleared: &PolyMat, basis: &PolyMatrix, indices: &[usize], side: Side) -> (f64, bool, bool) {
    let u = from_monomial(basis);
    let (r, u) = match side {
        Side::Right => (cleared.clone(), u),
        Side::Left => (pm_transpose(cleared), pm_transpose(&u)),
    };
    if indices.is_empty() {
        return (0.0, true, true);
    }
    let prod = pm_mul(&r, &u);
    let big = |p: &PolyMat| p.iter().flatten().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let residual = big(&prod) / (big(&r) * big(&u)).max(f64::MIN_POSITIVE);
    let k = indices.len();
    let pts = [
        c(0.0),
        C64::new(0.4, 0.8),
        C64::new(-0.9, 0.3),
        C64::new(0.2, -1.1),
        c(1.3),
        C64::new(-0.5, -0.5),
    ];
    let full_rank = pts.iter().all(|&x| rank(&pm_eval(&u, x), Some(1e-10)) == k);
    let lead = Mat::from_fn(u.len(), k, |i, j| u[i][j].get(indices[j]).copied().unwrap_or_default());
    let reduced = rank(&lead, Some(1e-10)) == k;
    (residual, full_rank, reduced)
}

struct NullspaceRun {
    kind: Structure,
    right: ratlin::recover::RecoveredNullspace,
    left: ratlin::recover::RecoveredNullspace,
    oracle: (Vec<usize>, Vec<usize>),
    cleared: PolyMat,
    lower_start: usize,
}

fn nullspace_runs(fixtures: &[(Structure, Realization)]) -> Vec<NullspaceRun> {
    let tol = Tolerances::default();
    fixtures
        .iter()
        .map(|(kind, r)| {
            let sl = linbuild::build(r).expect("build");
            let (cleared, _) = cleared(r);
            NullspaceRun {
                kind: *kind,
                right: recover::recover_right_minimal_basis(&sl, &tol).expect("right basis"),
                left: recover::recover_left_minimal_basis(&sl, &tol).expect("left basis"),
                oracle: (
                    right_minimal_indices(&cleared, 1e-10),
                    left_minimal_indices(&cleared, 1e-10),
                ),
                cleared,
                lower_start: sl.state_width(),
            }
        })
        .collect()
}

fn index_shift_law(runs: &[NullspaceRun]) -> Outcome {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let mut singular = 0;
    for (i, run) in runs.iter().enumerate() {
        let shifted: Vec<usize> = run.right.basis_l.indices.iter().map(|e| e - run.right.shift).collect();
        if shifted != run.oracle.0 || run.right.basis_r.indices != run.oracle.0 {
            bad.push(format!("{i} {:?} right: {shifted:?} vs {:?}", run.kind, run.oracle.0));
        }
        if run.left.basis_l.indices != run.oracle.1 || run.left.basis_r.indices != run.oracle.1 {
            bad.push(format!(
                "{i} {:?} left: {:?} vs {:?}",
                run.kind, run.left.basis_l.indices, run.oracle.1
            ));
        }
        singular += usize::from(!run.oracle.0.is_empty() || !run.oracle.1.is_empty());
        for (rec, side) in [(&run.right, Side::Right), (&run.left, Side::Left)] {
            let (res, full, reduced) = basis_conditions(&run.cleared, &rec.basis_r.vectors, &rec.basis_r.indices, side);
            worst = worst.max(res);
            if res > 1e-10 || !full || !reduced {
                bad.push(format!(
                    "{i} {side:?} basis: residual {res:.1e}, full rank {full}, reduced {reduced}"
                ));
            }
        }
    }
    Outcome::new(
        bad.is_empty() && singular == runs.len(),
        format!(
            "{} fixtures ({singular} singular), worst basis residual {worst:.2e}, problems {bad:?}",
            runs.len()
        ),
    )
}

fn eigenvector_recovery(fixtures: &[Realization]) -> Outcome {
    let tol = Tolerances::default();
    let example = verify::preset("paper-sec5", 0).expect("preset");
    let mut worst: f64 = 0.0;
    let mut worst_lift: f64 = 0.0;
    let (mut checked, mut at_poles) = (0, 0);
    let mut bad = Vec::new();
    let mut s = Sampler::new(0x11F7);
    for (i, r) in fixtures.iter().chain(std::iter::once(&example)).enumerate() {
        let sl = linbuild::build(r).expect("build");
        for x0 in points(&mut s, r, 2) {
            let x = DVector::from_iterator(r.m(), (0..r.m()).map(|_| s.complex_normal()));
            let back =
                recover::recover_right_eigvec(&sl, x0, &recover::lift_right_eigvec(&sl, x0, &x).unwrap()).unwrap();
            worst_lift = worst_lift.max((back - &x).norm() / x.norm());
            let y = RowDVector::from_iterator(r.p(), (0..r.p()).map(|_| s.complex_normal()));
            let back = recover::recover_left_eigvec(&sl, x0, &recover::lift_left_eigvec(&sl, x0, &y).unwrap()).unwrap();
            worst_lift = worst_lift.max((back - &y).norm() / y.norm());
        }
        // Rectangular R of full normal rank has no finite eigenvalues.
        if r.p() != r.m() {
            continue;
        }
        let pairs = match recover::eigenpairs(&sl, &tol) {
            Ok(p) => p,
            Err(e) => {
                bad.push(format!("fixture {i}: {e}"));
                continue;
            }
        };
        for e in pairs {
            let x0 = C64::new(e.lambda[0], e.lambda[1]);
            let (Some(x), Some(y)) = (&e.x, &e.y) else {
                // Only zeros that coincide with a pole may come without vectors.
                match e.note.as_deref() {
                    Some(note) if note.contains("coincides with a pole") => at_poles += 1,
                    note => bad.push(format!("fixture {i}: skipped {x0} ({note:?})")),
                }
                continue;
            };
            // Residuals recomputed with the oracle transfer function.
            let rx = transfer(r, x0);
            let right = (&rx * x).norm() / x.norm();
            let left = (y.transpose() * &rx).norm() / y.norm();
            worst = worst.max(right).max(left);
            checked += 1;
            if right > 1e-8 || left > 1e-8 {
                // Report how far two double-precision evaluations of R(λ₀) disagree.
                let noise = sl
                    .realization
                    .transfer_eval(x0)
                    .map(|lib| frob(&(lib - &rx)))
                    .unwrap_or(f64::NAN);
                bad.push(format!(
                    "fixture {i} at {x0:.4}: ({right:.1e}, {left:.1e}), |R| {:.1e}, evaluation spread {noise:.1e}",
                    frob(&rx)
                ));
            }
        }
    }
    Outcome::new(
        bad.is_empty() && worst_lift <= 1e-13,
        format!(
            "{checked} eigenpairs, {at_poles} zeros at poles skipped, worst residual {worst:.2e}, \
             worst recover∘lift {worst_lift:.2e}, problems {:?}",
            bad.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn scalar_realization(a: &[f64], b: &[f64], cc: &[f64], d: &[f64]) -> Realization {
    let p = |v: &[f64]| PolyMatrix::scalar_real(Basis::Monomial, v);
    Realization::new(p(a), p(b), p(cc), p(d)).expect("scalar realization")
}

fn infinity_orders() -> Outcome {
    let tol = Tolerances::default();
    let orders = |r: &Realization| {
        let sl = linbuild::build(r).expect("build");
        eigsolve::invariant_orders_at_infinity(&sl, &tol).map_err(|e| e.to_string())
    };
    // R = λ: rev₁R = λ·(1/λ) = 1 has no zero at 0, so q = 0 − 1.
    let lambda = orders(&scalar_realization(&[-1.0, 1.0], &[0.0], &[0.0], &[0.0, 1.0]));
    // R = 1/λ: rev₁R = λ² has a double zero at 0, so q = 2 − 1.
    let inverse = orders(&scalar_realization(&[0.0, 1.0], &[1.0], &[1.0], &[0.0]));

    // Σq = deg det Δ − deg det(ΔR) for the illustrative example.
    let r = verify::preset("paper-sec5", 0).expect("preset");
    let delta = |x: C64| Mat::from_diagonal(&DVector::from_vec(vec![x * x - x - 2.0, x + 2.0]));
    let num = interpolate(12, |x| (delta(x) * example_transfer(x)).determinant());
    let den = interpolate(12, |x| delta(x).determinant());
    let balance = degree(&den, 1e-10).unwrap() as i64 - degree(&num, 1e-10).unwrap() as i64;
    let example = orders(&r);
    let sum = example.as_ref().map(|q| q.iter().sum::<i64>());
    let passed = lambda == Ok(vec![-1]) && inverse == Ok(vec![1]) && sum == Ok(balance);
    Outcome::new(
        passed,
        format!("R=λ {lambda:?}, R=1/λ {inverse:?}, example {example:?} with balance {balance}"),
    )
}

fn degree_law(runs: &[NullspaceRun]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        if !run.right.preconditions.infinity.0 {
            continue;
        }
        let z = from_monomial(&run.right.basis_l.vectors);
        for (k, &eps) in run.right.basis_l.indices.iter().enumerate() {
            let col: Vec<&Poly> = z.iter().map(|row| &row[k]).collect();
            let top = col.iter().flat_map(|p| p.iter()).map(|w| w.norm()).fold(0.0, f64::max);
            let deg_of = |rows: &[&Poly]| {
                rows.iter()
                    .filter_map(|p| p.iter().rposition(|w| w.norm() > 1e-9 * top))
                    .max()
                    .unwrap_or(0)
            };
            let (whole, lower) = (deg_of(&col), deg_of(&col[run.lower_start..]));
            checked += 1;
            if whole != lower || whole != eps {
                bad.push(format!(
                    "fixture {i} vector {k}: deg z {whole}, lower block {lower}, index {eps}"
                ));
            }
        }
    }
    Outcome::new(
        bad.is_empty() && checked > 0,
        format!("{checked} right null vectors, problems {bad:?}"),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let fixtures = regular_fixtures();
    let runs = nullspace_runs(&singular_fixtures());
    let criteria: Vec<Criterion> = vec![
        (
            "one-sided factorizations",
            Box::new(|| one_sided_factorizations(&fixtures)),
        ),
        ("rank relation", Box::new(|| rank_relation(&fixtures))),
        ("block layout golden", Box::new(block_layout)),
        ("illustrative example regression", Box::new(example_regression)),
        ("scalar solver oracle", Box::new(scalar_solver)),
        ("minimal index shift law", Box::new(|| index_shift_law(&runs))),
        ("eigenvector recovery", Box::new(|| eigenvector_recovery(&fixtures))),
        ("invariant orders at infinity", Box::new(infinity_orders)),
        ("degree law", Box::new(|| degree_law(&runs))),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        failed += usize::from(!out.passed);
        println!(
            "{} [{}] {name}: {}",
            if out.passed { "PASS" } else { "FAIL" },
            k + 1,
            out.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
