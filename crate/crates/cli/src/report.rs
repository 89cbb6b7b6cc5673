//! CSV and JSON renderings of a coverage report.

use ratioci::simulator::{CoverageReport, CoverageRow};
use ratioci::text::fmt_sig;

pub const CSV_HEADER: [&str; 18] = [
    "cell_id",
    "x_family",
    "x_param",
    "y_family",
    "y_param",
    "n",
    "method",
    "alpha",
    "R",
    "covered",
    "coverage",
    "mc_se",
    "bounded",
    "excl_unbounded",
    "whole_line",
    "general_union",
    "one_sided_warn",
    "errors",
];

fn csv_record(row: &CoverageRow) -> [String; 18] {
    [
        row.cell_id.to_string(),
        row.x_family.clone(),
        row.x_param.clone(),
        row.y_family.clone(),
        row.y_param.clone(),
        row.n.to_string(),
        row.method.clone(),
        fmt_sig(row.alpha),
        row.replications.to_string(),
        row.covered.to_string(),
        fmt_sig(row.coverage),
        fmt_sig(row.mc_se),
        row.bounded.to_string(),
        row.excl_unbounded.to_string(),
        row.whole_line.to_string(),
        row.general_union.to_string(),
        row.one_sided_warn.to_string(),
        row.errors.to_string(),
    ]
}

pub fn to_csv(report: &CoverageReport) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in &report.rows {
        w.write_record(csv_record(row)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn to_json(report: &CoverageReport) -> String {
    let mut s = serde_json::to_string_pretty(&report.rows).expect("rows serialize");
    s.push('\n');
    s
}
