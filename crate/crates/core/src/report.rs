//! Rendering of verification reports as JSON, markdown and CSV.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::lie::{CharacterRecord, CheckKind, TheoremReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (json, md or csv)")),
        }
    }
}

pub fn render(report: &TheoremReport, format: Format) -> String {
    match format {
        Format::Json => render_json(report),
        Format::Markdown => render_markdown(report),
        Format::Csv => render_csv(&report.characters),
    }
}

pub fn render_json(report: &TheoremReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn matrix(rows: &[Vec<u32>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

pub fn render_markdown(report: &TheoremReport) -> String {
    let mut out = String::new();
    let name = format!("{}({},{})", report.family, report.n, report.q);
    let _ = writeln!(out, "# {name}\n");
    let _ = writeln!(out, "- |G| = {}", report.group_order);
    let _ = writeln!(out, "- classes = {}", report.num_classes);
    let _ = writeln!(
        out,
        "- field: F_{}^{} with modulus {:?} (entries are base-{} encodings)",
        report.field.p, report.field.k, report.field.modulus, report.field.p
    );
    let _ = writeln!(out, "- s = {}", matrix(&report.s));
    let _ = writeln!(out, "- z = s^2 = {} ({})", matrix(&report.z), report.z_kind);
    let _ = writeln!(out, "- seed = {}, prime = {}\n", report.seed, report.prime);

    let _ = writeln!(out, "| χ | degree | ε | ω(z) | regular | semisimple | real | dual |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|---|");
    for c in &report.characters {
        let dual = match c.dual_index {
            Some(j) => format!("{}{}", if c.dual_sign < 0 { "-" } else { "+" }, j),
            None => "?".to_string(),
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            c.index,
            c.degree,
            c.epsilon,
            c.omega_z,
            yes_no(c.regular),
            yes_no(c.semisimple),
            yes_no(c.real),
            dual
        );
    }

    let mut tally: BTreeMap<CheckKind, (usize, usize)> = BTreeMap::new();
    for c in &report.checks {
        let e = tally.entry(c.check).or_default();
        if c.passed {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    let _ = writeln!(out, "\n| check | theorem | passed | failed |");
    let _ = writeln!(out, "|---|---|---|---|");
    for (k, (p, f)) in &tally {
        let _ = writeln!(out, "| {} | {} | {p} | {f} |", kebab(*k), k.theorem());
    }
    let failures: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    if !failures.is_empty() {
        let _ = writeln!(out, "\n## Failures\n");
        for c in failures {
            let who = c.character.map_or("group".to_string(), |i| format!("χ{i}"));
            let _ = writeln!(out, "- {} at {who}: {}", kebab(c.check), c.detail);
        }
    }
    out
}

fn kebab(k: CheckKind) -> String {
    serde_json::to_value(k)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CsvRow {
    index: usize,
    degree: u64,
    epsilon: i8,
    omega_z: String,
    regular: String,
    semisimple: String,
    real: String,
    dual_index: String,
    dual_sign: i8,
}

fn parse_flag(s: &str) -> Result<bool, String> {
    match s {
        "yes" => Ok(true),
        "no" => Ok(false),
        other => Err(format!("expected yes/no, got {other:?}")),
    }
}

pub fn render_csv(rows: &[CharacterRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in rows {
        w.serialize(CsvRow {
            index: c.index,
            degree: c.degree,
            epsilon: c.epsilon,
            omega_z: c.omega_z.clone(),
            regular: yes_no(c.regular).into(),
            semisimple: yes_no(c.semisimple).into(),
            real: yes_no(c.real).into(),
            dual_index: c.dual_index.map_or(String::new(), |j| j.to_string()),
            dual_sign: c.dual_sign,
        })
        .expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn parse_csv(text: &str) -> Result<Vec<CharacterRecord>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize::<CsvRow>()
        .map(|row| {
            let row = row.map_err(|e| e.to_string())?;
            Ok(CharacterRecord {
                index: row.index,
                degree: row.degree,
                epsilon: row.epsilon,
                omega_z: row.omega_z,
                regular: parse_flag(&row.regular)?,
                semisimple: parse_flag(&row.semisimple)?,
                real: parse_flag(&row.real)?,
                dual_index: if row.dual_index.is_empty() {
                    None
                } else {
                    Some(row.dual_index.parse().map_err(|e| format!("{e}"))?)
                },
                dual_sign: row.dual_sign,
            })
        })
        .collect()
}
