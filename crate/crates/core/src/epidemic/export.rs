use std::path::{Path, PathBuf};

use super::engine::{DailyRecord, Trajectory};
use crate::error::{Error, Result};
use crate::metrics::threat_levels;

pub const TRAJECTORY_COLUMNS: [&str; 16] = [
    "day",
    "S",
    "E",
    "I",
    "R",
    "H",
    "new_infections",
    "tests_used",
    "positives_found",
    "positive_rate",
    "quarantined_cumulative",
    "threat_level_actual",
    "ctd",
    "rt_tests",
    "rt_positives",
    "hospitalizations",
];

pub const INFECTION_COLUMNS: [&str; 4] = ["node", "time", "infector", "secondary_count"];

/// `<dir>/<stem>.infections.csv` next to a trajectory file.
pub fn infections_path(trajectory_path: &Path) -> PathBuf {
    let stem = trajectory_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    trajectory_path.with_file_name(format!("{stem}.infections.csv"))
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::TrajectoryFormat {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn csv_err(path: &Path, err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => format_err(path, format!("{other:?}")),
    }
}

/// One row per day.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut out = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    out.write_record(TRAJECTORY_COLUMNS).map_err(|e| csv_err(path, e))?;
    let new: Vec<usize> = traj.daily.iter().map(|d| d.new_infections).collect();
    let levels = threat_levels(&new, traj.node_count)?;
    for (d, level) in traj.daily.iter().zip(&levels.daily_level) {
        let row = [
            d.day.to_string(),
            d.s.to_string(),
            d.e.to_string(),
            d.i.to_string(),
            d.r.to_string(),
            d.h.to_string(),
            d.new_infections.to_string(),
            d.tests_used.to_string(),
            d.positives_found.to_string(),
            d.positive_rate.to_string(),
            d.quarantined_cumulative.to_string(),
            level.to_string(),
            d.ctd.to_string(),
            d.rt_tests.to_string(),
            d.rt_positives.to_string(),
            d.hospitalizations.to_string(),
        ];
        out.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    out.flush()?;
    Ok(())
}

/// One row per infection in infection order; seeds have an empty infector.
pub fn write_infections_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut out = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    out.write_record(INFECTION_COLUMNS).map_err(|e| csv_err(path, e))?;
    for (rec, count) in traj.infections.iter().zip(&traj.secondary_counts) {
        let infector = rec.infector.map(|v| v.to_string()).unwrap_or_default();
        out.write_record([rec.node.to_string(), rec.time.to_string(), infector, count.to_string()])
            .map_err(|e| csv_err(path, e))?;
    }
    out.flush()?;
    Ok(())
}

fn column_index(path: &Path, headers: &csv::StringRecord, wanted: &[&str]) -> Result<Vec<usize>> {
    wanted
        .iter()
        .map(|w| {
            headers
                .iter()
                .position(|c| c == *w)
                .ok_or_else(|| format_err(path, format!("missing column `{w}`")))
        })
        .collect()
}

fn field<T: std::str::FromStr>(path: &Path, row: &csv::StringRecord, col: usize) -> Result<T> {
    let raw = row.get(col).unwrap_or("");
    raw.trim().parse().map_err(|_| {
        let line = row.position().map_or(0, |p| p.line());
        format_err(path, format!("line {line}: bad value `{raw}`"))
    })
}

/// Reads the daily records back. Columns may appear in any order; the
/// threat level column is recomputable and ignored.
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<DailyRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let wanted: Vec<&str> = TRAJECTORY_COLUMNS
        .iter()
        .copied()
        .filter(|c| *c != "threat_level_actual")
        .collect();
    let idx = column_index(path, reader.headers().map_err(|e| csv_err(path, e))?, &wanted)?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(path, e))?;
        out.push(DailyRecord {
            day: field(path, &row, idx[0])?,
            s: field(path, &row, idx[1])?,
            e: field(path, &row, idx[2])?,
            i: field(path, &row, idx[3])?,
            r: field(path, &row, idx[4])?,
            h: field(path, &row, idx[5])?,
            new_infections: field(path, &row, idx[6])?,
            tests_used: field(path, &row, idx[7])?,
            positives_found: field(path, &row, idx[8])?,
            positive_rate: field(path, &row, idx[9])?,
            quarantined_cumulative: field(path, &row, idx[10])?,
            ctd: field(path, &row, idx[11])?,
            rt_tests: field(path, &row, idx[12])?,
            rt_positives: field(path, &row, idx[13])?,
            hospitalizations: field(path, &row, idx[14])?,
        });
    }
    Ok(out)
}

/// Secondary counts from an infection log, in infection order. Seeds
/// (rows without an infector) are skipped unless `include_seeds`.
pub fn read_secondary_counts(path: &Path, include_seeds: bool) -> Result<Vec<u32>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let headers = reader.headers().map_err(|e| csv_err(path, e))?;
    let idx = column_index(path, headers, &["infector", "secondary_count"])?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let seed = row.get(idx[0]).is_none_or(|s| s.trim().is_empty());
        if include_seeds || !seed {
            out.push(field(path, &row, idx[1])?);
        }
    }
    Ok(out)
}
