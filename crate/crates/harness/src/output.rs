//! CSV and text-table rendering of sweep records.

use std::fmt::Write as _;
use std::fs::File;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::sweep::{ErrorRecord, SweepKind};

pub const CSV_HEADER: [&str; 12] = [
    "kind",
    "case",
    "epsilon",
    "h",
    "tau",
    "T",
    "e_err",
    "n_err",
    "order_e",
    "order_n",
    "ref_descriptor",
    "wall_time",
];

/// Six significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.5e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), fmt_sig)
}

fn csv_row(r: &ErrorRecord) -> Vec<String> {
    let descriptor = match &r.failure {
        Some(msg) => format!("failed: {msg}"),
        None => r.ref_descriptor.clone(),
    };
    vec![
        r.kind.to_string(),
        r.case.to_string(),
        fmt_sig(r.epsilon),
        fmt_sig(r.h),
        fmt_sig(r.tau),
        fmt_sig(r.final_time),
        fmt_opt(r.e_err),
        fmt_opt(r.n_err),
        fmt_opt(r.order_e),
        fmt_opt(r.order_n),
        descriptor,
        format!("{:.3}", r.wall_time),
    ]
}

/// Writes `records` with a header row. Refuses an empty record list.
pub fn write_csv(path: &Path, records: &[ErrorRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(HarnessError::Config("no records to write".into()));
    }
    let io = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record(csv_row(r)).map_err(csv_err)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// Table text laid out as error rows with a rate line beneath each.
pub fn render_table(records: &[ErrorRecord]) -> String {
    let Some(first) = records.first() else {
        return String::new();
    };
    let kind = first.kind;
    let mut out = String::new();
    let blocks: [(&str, Pick, Pick); 2] = [
        ("e^eps(T)", |r| r.e_err, |r| r.order_e),
        ("n^eps(T)", |r| r.n_err, |r| r.order_n),
    ];
    for (label, pick, order) in blocks {
        if kind.is_resonance() {
            render_chain(&mut out, records, label, pick, order);
        } else {
            render_rows(&mut out, records, label, pick, order);
        }
        out.push('\n');
    }
    out
}

type Pick = fn(&ErrorRecord) -> Option<f64>;

fn cell_err(v: Option<f64>) -> String {
    v.map_or_else(|| "failed".into(), |x| format!("{x:.2E}"))
}

fn cell_order(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.2}"))
}

fn render_rows(out: &mut String, records: &[ErrorRecord], label: &str, pick: Pick, order: Pick) {
    let spatial = records[0].kind == SweepKind::Spatial;
    let mut rows: Vec<Vec<&ErrorRecord>> = Vec::new();
    for r in records {
        match rows.last_mut() {
            Some(row) if row[0].epsilon == r.epsilon => row.push(r),
            _ => rows.push(vec![r]),
        }
    }
    let header: Vec<String> = rows[0]
        .iter()
        .map(|r| {
            let p = if spatial { r.h } else { r.tau };
            format!("{}={}", if spatial { "h" } else { "tau" }, trim_float(p))
        })
        .collect();
    let lines: Vec<(String, Vec<String>, Vec<String>)> = rows
        .iter()
        .map(|row| {
            (
                format!("eps={}", eps_label(row[0].epsilon)),
                row.iter().map(|r| cell_err(pick(r))).collect(),
                row.iter().map(|r| cell_order(order(r))).collect(),
            )
        })
        .collect();
    let width = width_of(
        lines
            .iter()
            .flat_map(|(_, e, r)| e.iter().chain(r))
            .chain(&header),
    );
    let _ = writeln!(out, "{:<14}{}", label, pad_all(&header, width));
    for (name, errs, rates) in &lines {
        let _ = writeln!(out, "{:<14}{}", name, pad_all(errs, width));
        let _ = writeln!(out, "{:<14}{}", "rate", pad_all(rates, width));
    }
}

fn render_chain(out: &mut String, records: &[ErrorRecord], label: &str, pick: Pick, order: Pick) {
    let header: Vec<String> = records
        .iter()
        .map(|r| format!("eps={},tau={}", eps_label(r.epsilon), trim_float(r.tau)))
        .collect();
    let errs: Vec<String> = records.iter().map(|r| cell_err(pick(r))).collect();
    let rates: Vec<String> = records.iter().map(|r| cell_order(order(r))).collect();
    let width = width_of(header.iter().chain(&errs).chain(&rates));
    let _ = writeln!(out, "{:<14}{}", records[0].case, pad_all(&header, width));
    let _ = writeln!(out, "{:<14}{}", label, pad_all(&errs, width));
    let _ = writeln!(out, "{:<14}{}", "order in time", pad_all(&rates, width));
}

fn width_of<'a>(cells: impl Iterator<Item = &'a String>) -> usize {
    cells.map(|c| c.len()).max().unwrap_or(0).max(9) + 2
}

fn pad_all(cells: &[String], width: usize) -> String {
    cells.iter().map(|c| format!("{c:>width$}")).collect()
}

fn trim_float(x: f64) -> String {
    format!("{x}")
}

/// `1`, `1/2`, `1/64` for powers of two, decimal otherwise.
pub fn eps_label(eps: f64) -> String {
    if eps == 1.0 {
        return "1".into();
    }
    let inv = 1.0 / eps;
    if (inv - inv.round()).abs() < 1e-9 {
        format!("1/{}", inv.round() as u64)
    } else {
        trim_float(eps)
    }
}
