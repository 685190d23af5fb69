//! CSV and aligned-text rendering of trial reports.

use crate::experiment::TrialReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum TableFormat {
    #[default]
    Csv,
    Table,
}

pub const COLUMNS: [&str; 14] = [
    "input",
    "n",
    "time_avg_ms",
    "time_max_ms",
    "time_min_ms",
    "c_avg",
    "c_max",
    "c_min",
    "gamma_avg",
    "l_avg",
    "p_avg",
    "n_avg",
    "p_per_call",
    "s_avg_pct",
];

/// Numeric cells of one report row, in [`COLUMNS`] order after `input`, `n`.
fn cells(r: &TrialReport, with_time: bool, digits: usize) -> Vec<String> {
    let t = r.time_ms();
    let c = r.comparisons();
    let time = |x: f64| if with_time { format!("{x:.3}") } else { "0".to_string() };
    let f = |x: f64| format!("{x:.digits$}");
    vec![
        r.spec.family.to_string(),
        r.n().to_string(),
        time(t.avg),
        time(t.max),
        time(t.min),
        f(c.avg),
        f(c.max),
        f(c.min),
        f(r.gamma_avg()),
        f(r.l_avg()),
        f(r.p_avg_ln()),
        f(r.n_avg_ln()),
        f(r.p_avg()),
        f(r.s_avg_pct()),
    ]
}

/// Renders one row per report. With `with_time == false` the time columns
/// are zeroed so that repeated runs produce identical bytes.
pub fn emit_table(reports: &[TrialReport], format: TableFormat, with_time: bool) -> String {
    match format {
        TableFormat::Csv => emit_csv(reports, with_time),
        TableFormat::Table => emit_text(reports, with_time),
    }
}

fn emit_csv(reports: &[TrialReport], with_time: bool) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for r in reports {
        w.write_record(cells(r, with_time, 4)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

fn emit_text(reports: &[TrialReport], with_time: bool) -> String {
    let rows: Vec<Vec<String>> = std::iter::once(COLUMNS.iter().map(|s| s.to_string()).collect())
        .chain(reports.iter().map(|r| cells(r, with_time, 2)))
        .collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|j| rows.iter().map(|row| row[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(j, (cell, &w))| if j == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{TrialRecord, TrialReport};
    use crate::generate::{Family, InputSpec};
    use frselect::Metrics;

    fn report() -> TrialReport {
        let metrics = Metrics {
            comparisons: 150,
            partition_mass: 100,
            select_partitions: 1,
            sselect_calls: 2,
            sselect_partitions: 6,
            sampled: 1,
            ..Metrics::default()
        };
        TrialReport {
            spec: InputSpec::new(Family::Onezero, 100),
            records: vec![TrialRecord {
                trial: 0,
                k: 50,
                value: 0,
                metrics,
                time_ms: 1.25,
                trace: None,
            }],
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let csv = emit_table(&[], TableFormat::Csv, true);
        assert_eq!(csv, format!("{}\n", COLUMNS.join(",")));
    }

    #[test]
    fn onezero_row_prints_one_and_a_half() {
        let csv = emit_table(&[report()], TableFormat::Csv, false);
        let row = csv.lines().nth(1).unwrap();
        assert!(row.starts_with("onezero,100,0,0,0,1.5000,1.5000,1.5000,"), "{row}");
        assert!(!csv.contains('\r'));
        let text = emit_table(&[report()], TableFormat::Table, true);
        assert!(text.contains("1.50"));
        assert!(text.contains("1.250"));
    }
}
