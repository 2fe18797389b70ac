//! Report serialization: deterministic number formatting and the CSV
//! layouts for audit and bound tables.

use bistar::bounds::{AuditRow, BoundProfile};

/// Shortest-roundtrip decimal for a float; `inf`/`nan` spelled out, integral
/// values printed without a trailing `.0`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

pub const AUDIT_HEADER: &str = "function,alpha,class,forward_min_re,inverse_min_re,inverse_rho,norm,yamashita,theorem1,derivation_phi,derivation_case2,majorant_sup,rahmatan_A,rahmatan_B,violations,derivation_consistency";

pub const BOUNDS_HEADER: &str =
    "alpha,yamashita,theorem1,derivation_phi,derivation_case2,majorant_sup,rahmatan_A,rahmatan_B";

fn bounds_cells(b: &BoundProfile<f64>) -> String {
    [
        fmt_num(b.yamashita),
        fmt_num(b.theorem1_stated),
        fmt_num(b.derivation_phi),
        fmt_opt(b.derivation_case2),
        fmt_num(b.majorant_sup),
        fmt_num(b.rahmatan_a),
        fmt_num(b.rahmatan_b),
    ]
    .join(",")
}

/// Two CSV lines per audit row, one per class kind. Stated-bound violations
/// appear on the line of the class they quantify over; the informational
/// derivation-consistency flags ride on the starlike line.
pub fn audit_csv_lines(row: &AuditRow<f64>) -> Vec<String> {
    let norm = fmt_opt(row.norm.as_ref().map(|n| n.value));
    let mut lines = Vec::with_capacity(2);
    for class in ["starlike", "v"] {
        let audit = match class {
            "starlike" => &row.starlike,
            _ => &row.v,
        };
        let (fwd, inv, rho) = match audit {
            Some(a) => (
                fmt_num(a.forward.empirical_min_re),
                fmt_num(a.inverse.empirical_min_re),
                fmt_opt(a.inverse.inverse_domain_radius),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        let class_violations: Vec<&str> = row
            .violations
            .iter()
            .map(|s| s.as_str())
            .filter(|name| match class {
                "starlike" => matches!(*name, "yamashita" | "theorem1" | "rahmatan_A"),
                _ => matches!(*name, "rahmatan_B"),
            })
            .collect();
        let consistency = if class == "starlike" {
            row.derivation_flags.join(";")
        } else {
            String::new()
        };
        lines.push(format!(
            "{},{},{},{},{},{},{},{},{},{}",
            row.function,
            fmt_num(row.alpha),
            class,
            fwd,
            inv,
            rho,
            norm,
            bounds_cells(&row.bounds),
            class_violations.join(";"),
            consistency,
        ));
    }
    lines
}

pub fn bounds_csv_line(b: &BoundProfile<f64>) -> String {
    format!("{},{}", fmt_num(b.alpha), bounds_cells(b))
}
