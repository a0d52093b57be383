//! CSV and JSON export.
//!
//! Every CSV file opens with `# key = value` comment lines, then one header
//! row. Numbers are written with 17 significant digits so that they parse
//! back to the same `f64`.

use std::io::{self, Write};

use serde::Serialize;

use crate::moving_plane::ZFields;
use crate::supinf::{RowStatus, SweepReport};
use crate::{BlowupReport, EFProfile, SolutionProfile};

/// `# key = value` lines written at the top of every file.
pub type Header = [(String, String)];

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Commas and newlines would break the row structure.
fn text_cell(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub fn write_csv<W: Write>(
    out: &mut W,
    header: &Header,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> io::Result<()> {
    for (k, v) in header {
        writeln!(out, "# {k} = {}", v.replace('\n', " "))?;
    }
    writeln!(out, "{}", columns.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn pairs<W: Write>(out: &mut W, header: &Header, cols: [&str; 2], xs: &[f64], ys: &[f64]) -> io::Result<()> {
    let rows = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| vec![format_number(*x), format_number(*y)]);
    write_csv(out, header, &cols, rows)
}

/// Columns `r,u`.
pub fn write_profile<W: Write>(out: &mut W, header: &Header, p: &SolutionProfile) -> io::Result<()> {
    pairs(out, header, ["r", "u"], p.nodes(), p.values())
}

/// Columns `t,w`.
pub fn write_ef<W: Write>(out: &mut W, header: &Header, w: &EFProfile) -> io::Result<()> {
    pairs(out, header, ["t", "w"], w.t(), w.w())
}

/// Columns `u0,y,l,L,beta,bubble_distance`.
pub fn write_blowup<W: Write>(out: &mut W, header: &Header, report: &BlowupReport) -> io::Result<()> {
    let rows = report.rows.iter().map(|d| {
        [d.u0, d.y, d.l, d.big_l, d.beta, d.bubble_distance]
            .into_iter()
            .map(format_number)
            .collect()
    });
    write_csv(out, header, &["u0", "y", "l", "L", "beta", "bubble_distance"], rows)
}

/// Columns `t,z1,z2`.
pub fn write_z_fields<W: Write>(out: &mut W, header: &Header, z: &ZFields) -> io::Result<()> {
    let rows = (0..z.t.len()).map(|i| vec![format_number(z.t[i]), format_number(z.z1[i]), format_number(z.z2[i])]);
    write_csv(out, header, &["t", "z1", "z2"], rows)
}

/// One row per family member.
pub fn write_sweep<W: Write>(out: &mut W, header: &Header, report: &SweepReport) -> io::Result<()> {
    let value_col = if report.theorem.uses_product() {
        "product"
    } else {
        "sup_k_alone"
    };
    let rows = report.rows.iter().map(|r| {
        let status = match r.status {
            RowStatus::Included => "included",
            RowStatus::Excluded => "excluded",
            RowStatus::Skipped => "skipped",
        };
        vec![
            format_number(r.parameter),
            status.to_string(),
            opt(r.sup_k),
            opt(r.inf_omega),
            opt(r.value),
            opt(r.closed_form),
            text_cell(r.error.as_deref().unwrap_or("")),
        ]
    });
    write_csv(
        out,
        header,
        &[
            "parameter",
            "status",
            "sup_k",
            "inf_omega",
            value_col,
            "closed_form",
            "error",
        ],
        rows,
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
