use std::fmt::Write;

use crate::experiment::{NormalityAudit, Verdict, WitnessKind};

pub const HEADER: &str = "Exp. Num. | Cases | δ>0 | Percentage | δ<0 | Ratio";

/// Header, one row and the verdict.
pub fn summarize(audit: &NormalityAudit, exp_num: u32) -> String {
    let c = &audit.counts;
    format!(
        "{HEADER}\n{exp_num} | {} | {} | {} | {} | {}\nverdict: {}\n",
        c.provable,
        c.positive,
        c.positive_percentage(),
        c.negative,
        c.ratio(),
        audit.verdict
    )
}

/// The summary followed by class counts, the bound table and witnesses.
pub fn audit_report(audit: &NormalityAudit, exp_num: u32) -> String {
    let mut s = summarize(audit, exp_num);
    let c = &audit.counts;
    let _ = writeln!(s);
    let _ = writeln!(s, "cells: {}", audit.total());
    let _ = writeln!(s, "provable: {} (no reference: {})", c.provable, audit.no_reference);
    let _ = writeln!(s, "zero: {}", audit.zero);
    let _ = writeln!(s, "negative: {} ({})", c.negative, c.negative_percentage());
    let _ = writeln!(s, "unprovable: {}", audit.unprovable);
    let _ = writeln!(s, "budget exhausted: {}", audit.budget);
    let _ = writeln!(
        s,
        "trivial cells positive: {}/{} ({})",
        audit.trivial_positive,
        audit.trivial_checked,
        audit.trivial_rate()
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "min δ by family and theory size");
    let _ = writeln!(s, "family | size | min δ");
    for row in &audit.epsilon {
        let v = row.min_delta.map_or("NA".to_string(), |v| v.to_string());
        let _ = writeln!(s, "{} | {} | {}", row.family, row.size, v);
    }
    if let Verdict::NotNormal(ws) = &audit.verdict {
        let _ = writeln!(s);
        let _ = writeln!(s, "witnesses (row, column, δ)");
        for w in ws {
            let kind = match w.kind {
                WitnessKind::NegativeSpeedup => "negative",
                WitnessKind::TrivialNotPositive => "trivial not positive",
            };
            let _ = writeln!(s, "{} | {} | {} | {kind}", w.row, w.column, w.delta);
        }
    }
    s
}
