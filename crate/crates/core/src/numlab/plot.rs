use std::fmt::Write as _;

use num_traits::ToPrimitive;

use super::{CoverLevel, GrowthResult};
use crate::exactnum::format_rational;

const ROW_HEIGHT: f64 = 0.04;
const BAR_HEIGHT: f64 = 0.03;

/// A header row plus data rows, all as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// One row of bars per level, one rectangle per interval, on the unit width.
pub fn emit_svg(levels: &[CoverLevel]) -> String {
    let height = ROW_HEIGHT * levels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 1 {height}" width="1000" height="{}">"#,
        (height * 1000.0).round()
    );
    for (row, level) in levels.iter().enumerate() {
        let y = row as f64 * ROW_HEIGHT;
        let width = level.length.to_f64().unwrap_or(0.0);
        let _ = writeln!(out, r#"  <g id="depth-{}">"#, level.depth);
        for c in level.offsets() {
            let x = c.to_f64().unwrap_or(0.0);
            let _ = writeln!(
                out,
                r#"    <rect x="{x}" y="{y}" width="{width}" height="{BAR_HEIGHT}"/>"#
            );
        }
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    out
}

/// RFC 4180 text with a header row and LF line endings.
pub fn emit_csv(table: &Table) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("records are UTF-8")
}

pub fn growth_table(growth: &GrowthResult) -> Table {
    Table {
        header: vec!["L".to_string(), "N_L".to_string()],
        rows: growth
            .counts
            .iter()
            .enumerate()
            .map(|(l, n)| vec![l.to_string(), n.to_string()])
            .collect(),
    }
}

/// `depth,offset,length` with exact rationals.
pub fn cover_table(levels: &[CoverLevel]) -> Table {
    Table {
        header: ["depth", "offset", "length"].map(String::from).to_vec(),
        rows: levels
            .iter()
            .flat_map(|level| {
                level.offsets().into_iter().map(move |c| {
                    vec![
                        level.depth.to_string(),
                        format_rational(&c),
                        format_rational(&level.length),
                    ]
                })
            })
            .collect(),
    }
}
