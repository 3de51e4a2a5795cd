//! Deterministic CSV output for time series and field snapshots. No
//! timestamps; a version header line only, so identical runs produce
//! identical bytes.

use crate::grid::GridField;
use crate::solver::TimeSeries;
use std::fmt::Write as _;
use std::path::Path;

const VERSION_LINE: &str = concat!("# fvir ", env!("CARGO_PKG_VERSION"));

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render the diagnostics table: `t`, every conserved functional, the
/// relative drifts from t = 0 in the same order, and the largest |mean of m|.
pub fn time_series_csv(ts: &TimeSeries) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{VERSION_LINE}");
    let mut header = vec!["t".to_string()];
    header.extend(ts.labels.iter().cloned());
    header.extend(ts.labels.iter().map(|l| format!("drift_{l}")));
    header.push("max_mean_m".to_string());
    let _ = writeln!(s, "{}", header.join(","));
    for (row, rec) in ts.records.iter().enumerate() {
        let mut cells = vec![fmt_num(rec.t)];
        cells.extend(rec.values.iter().map(|v| fmt_num(*v)));
        cells.extend(ts.drifts(row).iter().map(|v| fmt_num(*v)));
        cells.push(fmt_num(rec.max_mean_m));
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Render one field snapshot: `x` and one column per algebra component.
pub fn field_csv(field: &GridField) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{VERSION_LINE}");
    let mut header = vec!["x".to_string()];
    header.extend((1..=field.dim()).map(|c| format!("m{c}")));
    let _ = writeln!(s, "{}", header.join(","));
    for j in 0..field.n() {
        let mut cells = vec![fmt_num(field.x(j))];
        cells.extend((0..field.dim()).map(|c| fmt_num(field.get(j, c))));
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Snapshot file path: `<stem>_fields_<index>.csv` next to the main output.
pub fn snapshot_path(out: &Path, index: usize) -> std::path::PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}_fields_{index:06}.csv"))
}
