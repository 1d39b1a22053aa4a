use std::fmt;

use super::positive_rate;
use crate::epidemic::Trajectory;
use crate::error::{Error, Result};

pub const THREAT_WINDOW_DAYS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThreatBasis {
    Actual,
    ConfirmedCounts,
    PositiveRateAll,
    PositiveRateRtOnly,
}

impl ThreatBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            ThreatBasis::Actual => "actual",
            ThreatBasis::ConfirmedCounts => "confirmed_counts",
            ThreatBasis::PositiveRateAll => "positive_rate_all",
            ThreatBasis::PositiveRateRtOnly => "positive_rate_rt_only",
        }
    }
}

impl fmt::Display for ThreatBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreatSeries {
    pub daily_level: Vec<u8>,
    pub basis: ThreatBasis,
}

impl ThreatSeries {
    pub fn max_level(&self) -> u8 {
        self.daily_level.iter().copied().max().unwrap_or(1)
    }
}

/// Level 1..=5 for a 14-day count per 100 000 people. Ranges are half-open.
pub fn threat_level(per_100k: f64) -> u8 {
    if per_100k < 25.0 {
        1
    } else if per_100k < 50.0 {
        2
    } else if per_100k < 150.0 {
        3
    } else if per_100k < 250.0 {
        4
    } else {
        5
    }
}

/// Levels from real-valued daily new infections over a trailing 14-day window
/// (partial during the first 13 days).
pub fn threat_levels_from_series(new_infections: &[f64], n: usize, basis: ThreatBasis) -> Result<ThreatSeries> {
    if n == 0 {
        return Err(Error::param("N", "must be > 0"));
    }
    let scale = 100_000.0 / n as f64;
    let mut window = 0.0;
    let mut daily_level = Vec::with_capacity(new_infections.len());
    for (d, &x) in new_infections.iter().enumerate() {
        window += x;
        if d >= THREAT_WINDOW_DAYS {
            window -= new_infections[d - THREAT_WINDOW_DAYS];
        }
        daily_level.push(threat_level(window * scale));
    }
    Ok(ThreatSeries { daily_level, basis })
}

pub fn threat_levels(new_infections: &[usize], n: usize) -> Result<ThreatSeries> {
    let series: Vec<f64> = new_infections.iter().map(|&x| x as f64).collect();
    threat_levels_from_series(&series, n, ThreatBasis::Actual)
}

fn differenced_prevalence(rates: impl Iterator<Item = f64>, n: usize) -> Vec<f64> {
    let mut prev = 0.0;
    rates
        .map(|rate| {
            let prevalence = rate * n as f64;
            let new = (prevalence - prev).max(0.0);
            prev = prevalence;
            new
        })
        .collect()
}

/// Threat levels as a surveillance system would infer them from the run.
pub fn inferred_threat_levels(traj: &Trajectory, basis: ThreatBasis) -> Result<ThreatSeries> {
    let n = traj.node_count;
    let series: Vec<f64> = match basis {
        ThreatBasis::Actual => traj.daily.iter().map(|d| d.new_infections as f64).collect(),
        ThreatBasis::ConfirmedCounts => traj
            .daily
            .iter()
            .map(|d| (d.positives_found + d.hospitalizations) as f64)
            .collect(),
        ThreatBasis::PositiveRateAll => differenced_prevalence(traj.daily.iter().map(|d| d.positive_rate), n),
        ThreatBasis::PositiveRateRtOnly => {
            if !traj.random_testing_recorded {
                return Err(Error::MissingRandomTesting(basis.as_str()));
            }
            differenced_prevalence(
                traj.daily
                    .iter()
                    .map(|d| positive_rate(d.rt_positives, d.rt_tests, d.ctd, n)),
                n,
            )
        }
    };
    threat_levels_from_series(&series, n, basis)
}
