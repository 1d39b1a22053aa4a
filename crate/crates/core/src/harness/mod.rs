//! Parameter sweeps, disease presets, seeding and CSV output.

mod preset;
mod run;
mod spec;

pub use preset::{load_preset, DiseasePreset, PRESETS};
pub use run::{
    aggregate, expand_cells, run_experiment, summarize_run, write_aggregate_csv, AggregateRow, CellFailure, CellKey,
    ExperimentOutput, RunSummary, AGGREGATE_COLUMNS, TOP_COMMUNITIES,
};
pub use spec::ExperimentSpec;
