//! JSON serialization of verification reports: per identity
//! `{name, status, residual}` with an `all_passed` summary.

use fvir_core::Report;
use serde_json::{json, Value};

pub fn report_to_json(report: &Report) -> Value {
    json!({
        "all_passed": report.all_passed(),
        "identities": report
            .items
            .iter()
            .map(|i| {
                json!({
                    "name": i.name,
                    "status": if i.pass { "pass" } else { "fail" },
                    "residual": i.residual,
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn report_to_text(report: &Report) -> String {
    let mut s = String::new();
    for item in &report.items {
        s.push_str(if item.pass { "PASS " } else { "FAIL " });
        s.push_str(&item.name);
        if !item.pass {
            s.push_str(" | residual: ");
            s.push_str(&item.residual);
        }
        s.push('\n');
    }
    s.push_str(&format!(
        "{} identities, {} failed\n",
        report.items.len(),
        report.items.iter().filter(|i| !i.pass).count()
    ));
    s
}
