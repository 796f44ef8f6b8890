//! Plain-text tables. JSON output goes through `ratlin::json::to_string`.

use std::fmt::Write;

use ratlin::eigsolve::SpectralReport;
use ratlin::json::Complex;
use ratlin::linbuild::{LinearizationExport, MinimalityReport};
use ratlin::recover::{EigenpairR, RecoveredNullspace};
use ratlin::scalareq::RootReport;
use ratlin::verify::{CheckReport, Status};

use crate::output::{EigsOutput, InfinityOutput};

fn z(c: Complex) -> String {
    let sign = if c[1] < 0.0 { '-' } else { '+' };
    format!("{:.9}{sign}{:.9}i", c[0], c[1].abs())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn minimality(out: &mut String, m: &MinimalityReport) {
    let bad: Vec<_> = m.finite.iter().filter(|p| !(p.left && p.right)).collect();
    let _ = writeln!(
        out,
        "minimality: {} sampled points, {} failing; at infinity left {}, right {}",
        m.finite.len(),
        bad.len(),
        flag(m.infinity.0),
        flag(m.infinity.1)
    );
    for p in bad {
        let _ = writeln!(
            out,
            "  fails at {} (left {}, right {})",
            z(p.lambda),
            flag(p.left),
            flag(p.right)
        );
    }
}

pub fn linearize(e: &LinearizationExport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "pencil {}x{}  rhoA {}  rhoD {}",
        e.l0.rows, e.l0.cols, e.rho_a, e.rho_d
    );
    let _ = writeln!(out, "{:<10} {:>9} {:>9}", "block", "rows", "cols");
    for (name, b) in &e.blocks {
        let _ = writeln!(
            out,
            "{name:<10} {:>9} {:>9}",
            format!("{}..{}", b.r0, b.r1),
            format!("{}..{}", b.c0, b.c1)
        );
    }
    out
}

fn spectral(out: &mut String, s: &SpectralReport) {
    let _ = writeln!(out, "poles ({}):", s.poles.len());
    for p in &s.poles {
        let _ = writeln!(out, "  {}  x{}", z(p.lambda), p.count);
    }
    let _ = writeln!(out, "zeros ({}):", s.zeros.len());
    for q in &s.zeros {
        let tag = match (q.classified, q.at_pole) {
            (false, _) => "unclassified",
            (true, true) => "zero at pole",
            (true, false) => "zero",
        };
        let _ = writeln!(out, "  {}  {tag}", z(q.lambda));
    }
    match &s.infinity_orders {
        Some(q) => {
            let _ = writeln!(out, "infinity orders: {q:?}");
        }
        None => {
            let _ = writeln!(out, "infinity orders: unavailable (not minimal at infinity)");
        }
    }
}

fn eigenpair(out: &mut String, e: &EigenpairR) {
    match &e.note {
        Some(note) => {
            let _ = writeln!(out, "  {}  skipped: {note}", z(e.lambda));
        }
        None => {
            let _ = writeln!(
                out,
                "  {}  right {}  left {}  |R| {}",
                z(e.lambda),
                opt(e.residuals.0),
                opt(e.residuals.1),
                opt(e.transfer_norm)
            );
        }
    }
}

pub fn eigs(o: &EigsOutput) -> String {
    let mut out = String::new();
    spectral(&mut out, &o.spectral);
    let _ = writeln!(out, "eigenpairs ({}):", o.eigenpairs.len());
    for e in &o.eigenpairs {
        eigenpair(&mut out, e);
    }
    minimality(&mut out, &o.minimality);
    out
}

pub fn infinity(o: &InfinityOutput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "grade {}", o.grade);
    let _ = writeln!(out, "orders {:?}", o.orders);
    minimality(&mut out, &o.minimality);
    out
}

pub fn nullspace(n: &RecoveredNullspace) -> String {
    let mut out = String::new();
    let side = match n.side {
        ratlin::Side::Left => "left",
        ratlin::Side::Right => "right",
    };
    let _ = writeln!(out, "{side} minimal basis: {} vectors", n.basis_r.len());
    let _ = writeln!(out, "indices of R:      {:?}", n.basis_r.indices);
    let _ = writeln!(out, "indices of pencil: {:?}  (shift {})", n.basis_l.indices, n.shift);
    let c = &n.certificates;
    let _ = writeln!(
        out,
        "certificates: pencil residual {:.3e}, transfer residual {:.3e}",
        c.pencil.residual, c.transfer.residual
    );
    let _ = writeln!(out, "degree law holds: {}", flag(n.degree_law_holds()));
    let _ = writeln!(out, "ok: {}", flag(n.ok));
    minimality(&mut out, &n.preconditions);
    out
}

pub fn scalar(r: &RootReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "grades n={} m={}", r.grades.0, r.grades.1);
    let _ = writeln!(out, "roots ({}):", r.roots.len());
    for root in &r.roots {
        let _ = writeln!(
            out,
            "  {}  residual {:.3e}  scale {:.3e}",
            z(root.lambda),
            root.residual,
            root.scale
        );
    }
    if !r.excluded.is_empty() {
        let _ = writeln!(out, "excluded ({}):", r.excluded.len());
        for e in &r.excluded {
            let _ = writeln!(out, "  {}  {:?}", z(e.lambda), e.reason);
        }
    }
    out
}

pub fn check(r: &CheckReport) -> String {
    let mut out = String::new();
    for e in &r.entries {
        let status = match e.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let at = e.lambda.map(|l| format!(" at {}", z(l))).unwrap_or_default();
        let _ = writeln!(
            out,
            "{status}  {:<28} worst {}{at}  {}",
            e.name,
            opt(e.worst_residual),
            e.detail
        );
    }
    let _ = writeln!(
        out,
        "{}",
        if r.passed() {
            "all checks passed"
        } else {
            "some checks failed"
        }
    );
    out
}
