use std::fmt;
use std::str::FromStr;

use crate::error::{check_probability, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// No testing at all.
    None,
    /// Random testing.
    Rt,
    /// Forward contact tracing: FIFO queue.
    Fct,
    /// Backward contact tracing: contacts of the most recent positives first.
    Bct,
    /// Contact-tracing oracle: truly infected queue entries first.
    Cto,
    /// Global oracle: the queue holds exactly the currently infected.
    Got,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::None,
        Strategy::Rt,
        Strategy::Fct,
        Strategy::Bct,
        Strategy::Cto,
        Strategy::Got,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::Rt => "rt",
            Strategy::Fct => "fct",
            Strategy::Bct => "bct",
            Strategy::Cto => "cto",
            Strategy::Got => "got",
        }
    }

    pub fn uses_queue(self) -> bool {
        matches!(self, Strategy::Fct | Strategy::Bct | Strategy::Cto | Strategy::Got)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::param("strategy", format!("unknown strategy `{s}` (expected none|rt|fct|bct|cto|got)"))
            })
    }
}

/// Tests reserved for random testing under the mixed allocation:
/// half the budget, capped at 100, and nothing below 10 daily tests.
pub fn mixed_rt_share(daily_tests: usize) -> usize {
    if daily_tests < 10 {
        0
    } else {
        (daily_tests / 2).min(100)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterventionPlan {
    pub strategy: Strategy,
    pub daily_tests: usize,
    /// Probability each contact of a confirmed case is traced.
    pub p_c: f64,
    /// Probability a confirmed case is quarantined.
    pub p_q: f64,
    /// Tests spent on random testing before the strategy runs; 0 disables mixing.
    pub mixed_rt_share: usize,
}

impl InterventionPlan {
    pub fn new(strategy: Strategy, daily_tests: usize, p_c: f64, p_q: f64, mixed: bool) -> Result<Self> {
        let share = if mixed { mixed_rt_share(daily_tests) } else { 0 };
        Self::with_share(strategy, daily_tests, p_c, p_q, share)
    }

    pub fn with_share(
        strategy: Strategy,
        daily_tests: usize,
        p_c: f64,
        p_q: f64,
        mixed_rt_share: usize,
    ) -> Result<Self> {
        check_probability("P_c", p_c)?;
        check_probability("P_q", p_q)?;
        if mixed_rt_share > daily_tests {
            return Err(Error::param(
                "mixed_rt_share",
                format!("{mixed_rt_share} exceeds daily_tests = {daily_tests}"),
            ));
        }
        Ok(Self {
            strategy,
            daily_tests,
            p_c,
            p_q,
            mixed_rt_share,
        })
    }

    /// The no-intervention baseline.
    pub fn none() -> Self {
        Self {
            strategy: Strategy::None,
            daily_tests: 0,
            p_c: 1.0,
            p_q: 1.0,
            mixed_rt_share: 0,
        }
    }

    /// Whether random-testing counters form a meaningful surveillance signal.
    pub fn records_random_testing(&self) -> bool {
        self.daily_tests > 0 && (self.strategy == Strategy::Rt || self.mixed_rt_share > 0)
    }
}
