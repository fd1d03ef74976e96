//! Result tables and their CSV, JSON and SVG renderings.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const STEADY_COLUMNS: [&str; 7] = ["sweep_value", "E_B", "W_B", "W_B_P", "W_B_C", "C_B", "S_B"];
pub const DYNAMICS_COLUMNS: [&str; 7] = ["t", "E_B", "W_B", "W_B_P", "W_B_C", "C_B", "S_B"];
pub const POWER_COLUMNS: [&str; 5] = [
    "sweep_value",
    "P_W_max",
    "t_P_W_max",
    "P_E_max",
    "t_P_E_max",
];

/// Numeric table; the first column is the abscissa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Fifteen significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.14e}")
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        if self.rows.is_empty() {
            return Err(CliError::Output("refusing to emit an empty table".into()));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_number(x)))
                .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let bad = |e: csv::Error| CliError::Output(format!("malformed CSV: {e}"));
        let columns: Vec<String> = r
            .headers()
            .map_err(bad)?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Output(format!("malformed CSV number: {e}")))?;
            if row.len() != columns.len() {
                return Err(CliError::Output("ragged CSV row".into()));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))
    }

    /// Line plot of the given columns (all but the first when `None`)
    /// against the first column.
    pub fn to_svg(&self, columns: Option<&[&str]>) -> Result<String, CliError> {
        if self.rows.is_empty() {
            return Err(CliError::Output("refusing to plot an empty table".into()));
        }
        let names: Vec<&str> = match columns {
            Some(c) => c.to_vec(),
            None => self.columns[1..].iter().map(String::as_str).collect(),
        };
        let series: Vec<(&str, Vec<f64>)> = names
            .iter()
            .map(|&n| {
                self.column(n)
                    .map(|v| (n, v))
                    .ok_or_else(|| CliError::Output(format!("no column '{n}'")))
            })
            .collect::<Result<_, _>>()?;
        let x: Vec<f64> = self.rows.iter().map(|r| r[0]).collect();
        Ok(render_svg(&self.columns[0], &x, &series))
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if hi - lo > 0.0 {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn render_svg(x_label: &str, x: &[f64], series: &[(&str, Vec<f64>)]) -> String {
    let (w, h, m) = (720.0, 440.0, 60.0);
    let (x0, x1) = bounds(x.iter().copied());
    let (y0, y1) = bounds(series.iter().flat_map(|(_, v)| v.iter().copied()));
    let px = |v: f64| m + (v - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |v: f64| h - m - (v - y0) / (y1 - y0) * (h - 2.0 * m);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {t} V{b} H{r}" fill="none" stroke="black"/>"#,
        t = m,
        b = h - m,
        r = w - m
    );
    for (v, anchor_y) in [(y0, py(y0)), (y1, py(y1))] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{anchor_y:.1}" font-size="11" text-anchor="end">{v:.3e}</text>"#,
            m - 4.0
        );
    }
    for v in [x0, x1] {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" font-size="11" text-anchor="middle">{v:.3}</text>"#,
            px(v),
            h - m + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{x_label}</text>"#,
        w / 2.0,
        h - 16.0
    );
    for (i, (name, ys)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = x
            .iter()
            .zip(ys)
            .map(|(&a, &b)| format!("{:.2},{:.2}", px(a), py(b)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = m + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" font-size="12" fill="{color}">{name}</text>"#,
            w - m + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `contents` to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, contents)
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
