//! Matching feature matrices: distances, rankings and Top-N evaluation.

mod distance;
mod eval;
mod report;

pub use distance::{chi2_distance, manhattan_distance, Metric};
pub use eval::{evaluate_loo, evaluate_queryset, rank, AccuracyTable, Candidate, DocumentDescriptor, RankingResult};
pub use report::{ReportRow, write_report_csv, render_report_text};
