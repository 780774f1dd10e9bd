//! Experiment configuration, runner and reports.

mod config;
mod recipes;
mod report;
mod run;

pub use config::{ExperimentConfig, ExperimentKind};
pub use recipes::{is_1d, set_1d, set_2d, PlanarSet};
pub use report::{
    emit_report, parse_report_json, Format, E1_COLUMNS, E2_COLUMNS, E3_COLUMNS, E4_COLUMNS, E5_COLUMNS,
};
pub use run::{
    random_composed, run_experiment, AuditRecord, E1Row, E2Row, E3Row, E4Row, E5Row, ExperimentReport, Metric,
    Rows, Timing,
};

#[cfg(test)]
mod tests;
