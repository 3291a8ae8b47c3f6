//! Result rows: time, end gap, nodes and cuts by family, as CSV or an
//! aligned text table.

use std::collections::BTreeMap;
use std::io::Write;

use crate::cuts::Family;
use crate::dcg::DcgReport;
use crate::error::{GsoError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub instance: String,
    pub method: String,
    /// Termination reason, or `error: …` for a failed run.
    pub status: String,
    pub time_s: f64,
    /// Relative gap at termination in minimization space, never negative.
    pub end_gap: Option<f64>,
    pub nodes: Option<f64>,
    pub cuts: BTreeMap<Family, f64>,
    pub value: Option<f64>,
    /// Agreement with exhaustive search: `exact`, `mismatch` or `open`.
    pub exact: Option<String>,
}

pub const REPORT_COLUMNS_HEAD: [&str; 7] = ["instance", "method", "status", "time_s", "end_gap", "nodes", "cuts"];
pub const REPORT_COLUMNS_TAIL: [&str; 2] = ["value", "exact"];

/// Full CSV header: fixed head, one `cuts_<FAMILY>` column per family, tail.
pub fn report_header() -> Vec<String> {
    REPORT_COLUMNS_HEAD
        .iter()
        .map(|s| s.to_string())
        .chain(Family::ALL.iter().map(|f| format!("cuts_{}", f.as_str())))
        .chain(REPORT_COLUMNS_TAIL.iter().map(|s| s.to_string()))
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ReportRow {
    pub fn from_report(instance: &str, method: &str, r: &DcgReport) -> Self {
        ReportRow {
            instance: instance.into(),
            method: method.into(),
            status: r.termination.as_str().into(),
            time_s: r.time_s,
            end_gap: Some(r.gap),
            nodes: Some(r.nodes as f64),
            cuts: r.cuts_by_family.iter().map(|(f, c)| (*f, *c as f64)).collect(),
            value: Some(r.value).filter(|v| v.is_finite()),
            exact: None,
        }
    }

    pub fn from_error(instance: &str, method: &str, err: &GsoError) -> Self {
        ReportRow {
            instance: instance.into(),
            method: method.into(),
            status: format!("error: {}", err),
            time_s: 0.0,
            end_gap: None,
            nodes: None,
            cuts: BTreeMap::new(),
            value: None,
            exact: None,
        }
    }

    pub fn is_error(&self) -> bool {
        self.status.starts_with("error")
    }

    pub fn cuts_total(&self) -> f64 {
        self.cuts.values().fold(0.0, |a, c| a + c)
    }

    /// Cells in header order. `with_time = false` blanks `time_s`, which is
    /// the only wall-clock-dependent column.
    pub fn cells(&self, with_time: bool) -> Vec<String> {
        let mut out = vec![
            self.instance.clone(),
            self.method.clone(),
            self.status.clone(),
            if with_time { format!("{:.6}", self.time_s) } else { String::new() },
            opt(self.end_gap),
            opt(self.nodes),
            if self.end_gap.is_some() { self.cuts_total().to_string() } else { String::new() },
        ];
        for f in Family::ALL {
            out.push(self.cuts.get(&f).map(|c| c.to_string()).unwrap_or_else(|| {
                if self.end_gap.is_some() { "0".into() } else { String::new() }
            }));
        }
        out.push(opt(self.value));
        out.push(self.exact.clone().unwrap_or_default());
        out
    }
}

pub fn write_report_csv<W: Write>(rows: &[ReportRow], writer: W, with_time: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(report_header())?;
    for r in rows {
        w.write_record(r.cells(with_time))?;
    }
    w.flush()?;
    Ok(())
}

pub fn report_csv_string(rows: &[ReportRow], with_time: bool) -> String {
    let mut buf = Vec::new();
    write_report_csv(rows, &mut buf, with_time).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

fn short(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e5 || v.abs() < 1e-3 {
        format!("{:.3e}", v)
    } else {
        format!("{:.4}", v)
    }
}

fn count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{:.1}", v)
    }
}

/// Human-readable table with the columns time (s), end gap, # nodes, # cuts.
/// `with_time = false` blanks the time column.
pub fn render_table(rows: &[ReportRow], with_time: bool) -> String {
    let header = [
        "instance", "method", "status", "time (s)", "end gap", "# nodes", "# cuts", "by family", "value", "exact",
    ];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let fams: Vec<String> = r
                .cuts
                .iter()
                .filter(|(_, &c)| c > 0.0)
                .map(|(f, &c)| format!("{}:{}", f.as_str(), count(c)))
                .collect();
            vec![
                r.instance.clone(),
                r.method.clone(),
                r.status.clone(),
                if with_time { format!("{:.3}", r.time_s) } else { String::new() },
                r.end_gap.map(short).unwrap_or_default(),
                r.nodes.map(count).unwrap_or_default(),
                if r.end_gap.is_some() { count(r.cuts_total()) } else { String::new() },
                fams.join(" "),
                r.value.map(|v| format!("{:.6}", v)).unwrap_or_default(),
                r.exact.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let numeric = [false, false, false, true, true, true, true, false, true, false];
    let line = |cells: Vec<String>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let pad = widths[j] - c.chars().count();
                if numeric[j] {
                    format!("{}{}", " ".repeat(pad), c)
                } else {
                    format!("{}{}", c, " ".repeat(pad))
                }
            })
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out.push('\n');
    out.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
    out.push('\n');
    for row in body {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

/// One `average` row per method (in order of first appearance) over the
/// rows that did not fail.
pub fn average_rows(rows: &[ReportRow]) -> Vec<ReportRow> {
    let mut methods: Vec<&str> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
    }
    methods
        .into_iter()
        .map(|m| {
            let all: Vec<&ReportRow> = rows.iter().filter(|r| r.method == m).collect();
            let ok: Vec<&ReportRow> = all.iter().copied().filter(|r| !r.is_error()).collect();
            let optimal = ok.iter().filter(|r| r.status == "optimal").count();
            let k = ok.len() as f64;
            let mean = |g: &dyn Fn(&ReportRow) -> Option<f64>| -> Option<f64> {
                let v: Vec<f64> = ok.iter().filter_map(|r| g(r)).collect();
                (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
            };
            let mut cuts = BTreeMap::new();
            if k > 0.0 {
                for r in &ok {
                    for (f, c) in &r.cuts {
                        *cuts.entry(*f).or_insert(0.0) += c / k;
                    }
                }
            }
            let with_exact: Vec<&str> = ok.iter().filter_map(|r| r.exact.as_deref()).collect();
            let exact = (!with_exact.is_empty()).then(|| {
                let hits = with_exact.iter().filter(|e| **e == "exact").count();
                if hits == all.len() {
                    "exact".to_string()
                } else {
                    format!("{}/{} exact", hits, all.len())
                }
            });
            ReportRow {
                instance: "average".into(),
                method: m.into(),
                status: format!("{}/{} optimal", optimal, all.len()),
                time_s: mean(&|r| Some(r.time_s)).unwrap_or(0.0),
                end_gap: mean(&|r| r.end_gap),
                nodes: mean(&|r| r.nodes),
                cuts,
                value: mean(&|r| r.value),
                exact,
            }
        })
        .collect()
}
