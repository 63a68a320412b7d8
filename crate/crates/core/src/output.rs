//! CSV tables and plot scripts.
//!
//! The CSV has a fixed header, one row per grid sample, printf-style `%.12e`
//! numbers, `,` separators and `\n` line endings. Undefined fields (lasing
//! rows, b at ħω = μ) are empty. A `#`-prefixed footer lists the squeezed
//! intervals and the deepest squeezing.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::pipeline::{RowFlag, SpectrumRow, SpectrumTable};
use crate::squeezing::EnergyInterval;

pub const COLUMNS: [&str; 13] = [
    "energy_ev",
    "chi_re",
    "chi_im",
    "n_re",
    "n_im",
    "t_abs2",
    "r_abs2",
    "b",
    "i_over_k",
    "s_at_phase",
    "s_min",
    "s_max",
    "flags",
];

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed spectrum table at line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// C `printf("%.12e")` formatting: 12 fractional digits, signed exponent with
/// at least two digits.
pub fn format_sci(value: f64) -> String {
    let s = format!("{value:.12e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponent present");
    let exp: i32 = exponent.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn push_field(line: &mut String, value: Option<f64>) {
    if let Some(v) = value {
        line.push_str(&format_sci(v));
    }
}

/// Renders the table as CSV text.
pub fn format_csv(table: &SpectrumTable) -> String {
    let mut out = String::with_capacity(table.rows.len() * 220);
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for row in &table.rows {
        let fields = [
            Some(row.energy_ev),
            Some(row.chi_re),
            Some(row.chi_im),
            Some(row.n_re),
            Some(row.n_im),
            row.t_abs2,
            row.r_abs2,
            row.b,
            row.i_over_k,
            row.s_at_phase,
            row.s_min,
            row.s_max,
        ];
        for field in fields {
            push_field(&mut out, field);
            out.push(',');
        }
        out.push_str(row.flag.token());
        out.push('\n');
    }
    let report = &table.report;
    let _ = writeln!(
        out,
        "# squeezed_intervals,{}",
        report.squeezed_intervals.len()
    );
    for EnergyInterval { start, end } in &report.squeezed_intervals {
        let _ = writeln!(
            out,
            "# squeezed_interval,{},{}",
            format_sci(*start),
            format_sci(*end)
        );
    }
    if let Some((e, v)) = report.global_minimum {
        let _ = writeln!(out, "# global_min,{},{}", format_sci(e), format_sci(v));
    }
    if let Some(check) = &report.crossover {
        let _ = writeln!(
            out,
            "# crossover,{},{}",
            format_sci(check.chemical_potential),
            if check.clusters() {
                "SQUEEZED"
            } else {
                "CLASSICAL"
            }
        );
    }
    out
}

pub fn emit_csv(table: &SpectrumTable, path: &Path) -> Result<(), OutputError> {
    std::fs::write(path, format_csv(table)).map_err(|source| OutputError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses the data rows of a table written by [`format_csv`]; footer lines are skipped.
pub fn parse_csv(text: &str) -> Result<Vec<SpectrumRow>, OutputError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == COLUMNS.join(",") => {}
        _ => {
            return Err(OutputError::Malformed {
                line: 1,
                message: "missing or unexpected header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (index, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        let malformed = |message: String| OutputError::Malformed {
            line: index + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != COLUMNS.len() {
            return Err(malformed(format!(
                "expected {} fields, found {}",
                COLUMNS.len(),
                fields.len()
            )));
        }
        let mut values = [None; 12];
        for (slot, field) in values.iter_mut().zip(&fields) {
            if !field.is_empty() {
                *slot = Some(
                    field
                        .parse::<f64>()
                        .map_err(|_| malformed(format!("bad number {field:?}")))?,
                );
            }
        }
        let required =
            |i: usize| values[i].ok_or_else(|| malformed(format!("{} is empty", COLUMNS[i])));
        let flag = RowFlag::from_token(fields[12])
            .ok_or_else(|| malformed(format!("unknown flag {:?}", fields[12])))?;
        rows.push(SpectrumRow {
            energy_ev: required(0)?,
            chi_re: required(1)?,
            chi_im: required(2)?,
            n_re: required(3)?,
            n_im: required(4)?,
            t_abs2: values[5],
            r_abs2: values[6],
            b: values[7],
            i_over_k: values[8],
            s_at_phase: values[9],
            s_min: values[10],
            s_max: values[11],
            flag,
        });
    }
    Ok(rows)
}

/// Standalone matplotlib script plotting the table at `csv_relative_path`
/// (resolved next to the script): squeezing envelopes with the input
/// reference lines, and χ″.
pub fn plot_script(table: &SpectrumTable, csv_relative_path: &str) -> String {
    let meta = &table.meta;
    let mut markers = String::new();
    if let Some(mu) = meta.chemical_potential {
        let _ = writeln!(
            markers,
            "for ax in axes:\n    ax.axvline({}, color=\"tab:red\", lw=0.8, ls=\":\", label=\"μ\" if ax is axes[0] else None)",
            format_sci(mu)
        );
    }
    if let Some(ex) = meta.resonance_ev {
        let _ = writeln!(
            markers,
            "for ax in axes:\n    ax.axvline({}, color=\"tab:green\", lw=0.8, ls=\":\", label=\"E_x\" if ax is axes[0] else None)",
            format_sci(ex)
        );
    }
    format!(
        r##"#!/usr/bin/env python3
"""Squeezing spectrum behind the slab, |xi| = {magnitude}."""
import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV_PATH = os.path.join(HERE, "{csv}")
INPUT_MIN = {input_min}
INPUT_MAX = {input_max}

with open(CSV_PATH, newline="") as fh:
    rows = [r for r in csv.DictReader(line for line in fh if not line.startswith("#"))]


def col(name):
    return [float(r[name]) if r[name] != "" else float("nan") for r in rows]


energy = col("energy_ev")
fig, axes = plt.subplots(2, 1, sharex=True, figsize=(7, 6))

axes[0].plot(energy, col("s_max"), color="0.6", label="S_max")
axes[0].plot(energy, col("s_min"), color="k", label="S_min")
axes[0].axhline(INPUT_MAX, color="0.6", ls="--", lw=1, label="input")
axes[0].axhline(INPUT_MIN, color="k", ls="--", lw=1)
axes[0].axhline(0.0, color="0.8", lw=0.5)
axes[0].set_ylabel("S / K")

axes[1].plot(energy, col("chi_im"), color="tab:blue")
axes[1].axhline(0.0, color="0.8", lw=0.5)
axes[1].set_ylabel("chi''")
axes[1].set_xlabel("photon energy (eV)")

{markers}
axes[0].legend(loc="best", fontsize="small")
fig.tight_layout()
fig.savefig(os.path.splitext(CSV_PATH)[0] + ".png", dpi=150)
"##,
        magnitude = meta.squeeze_magnitude,
        csv = csv_relative_path,
        input_min = format_sci(meta.input_min),
        input_max = format_sci(meta.input_max),
        markers = markers,
    )
}

pub fn emit_plot_script(
    table: &SpectrumTable,
    csv_relative_path: &str,
    path: &Path,
) -> Result<(), OutputError> {
    std::fs::write(path, plot_script(table, csv_relative_path)).map_err(|source| OutputError::Io {
        path: path.display().to_string(),
        source,
    })
}
