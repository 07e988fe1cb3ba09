use std::io::Write;

use super::eval::AccuracyTable;
use crate::error::Result;

/// One row of an accuracy report: a dataset evaluated under one parameter setting.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub dataset: String,
    pub table: AccuracyTable,
    pub pathlet_size: usize,
    pub level: usize,
    pub codebook_size: usize,
}

fn header(rows: &[ReportRow]) -> Vec<String> {
    let tops = rows.first().map(|r| r.table.tops.clone()).unwrap_or_default();
    let mut h = vec!["dataset".to_string()];
    h.extend(tops.iter().map(|n| format!("Top-{n}")));
    h.extend(["w", "m", "M"].map(String::from));
    h
}

fn cells(row: &ReportRow) -> Vec<String> {
    let mut c = vec![row.dataset.clone()];
    c.extend(
        row.table
            .tops
            .iter()
            .map(|&n| format!("{:.2}", 100.0 * row.table.accuracy(n).unwrap_or(0.0))),
    );
    c.extend([row.pathlet_size, row.level, row.codebook_size].map(|v| v.to_string()));
    c
}

/// CSV with columns `dataset, Top-N…, w, m, M`; accuracies in percent.
pub fn write_report_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(rows))?;
    for r in rows {
        w.write_record(cells(r))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Fixed-width text table with the same columns as the CSV.
pub fn render_report_text(rows: &[ReportRow]) -> String {
    let mut table = vec![header(rows)];
    table.extend(rows.iter().map(cells));
    let widths: Vec<usize> = (0..table[0].len())
        .map(|j| table.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, r) in table.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(j, (c, &w))| if j == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
            out.push('\n');
        }
    }
    out
}
