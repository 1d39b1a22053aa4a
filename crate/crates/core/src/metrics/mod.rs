//! Derived quantities computed from finished runs.

mod community;
mod correlation;
mod dispersion;
mod threat;

pub use community::{community_infection, community_infection_in, component_mean_infection};
pub use correlation::{daily_correlation, pearson};
pub use dispersion::{estimate_dispersion, nb_score, DispersionEstimate, KHat, K_HAT_CAP};
pub use threat::{
    inferred_threat_levels, threat_level, threat_levels, threat_levels_from_series, ThreatBasis, ThreatSeries,
    THREAT_WINDOW_DAYS,
};

use crate::epidemic::Trajectory;

/// `((positives / tests)(N − ctd) + ctd) / N`; the ratio term is 0 when no
/// tests were run.
pub fn positive_rate(positives: usize, tests: usize, ctd: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let ratio = if tests == 0 {
        0.0
    } else {
        positives as f64 / tests as f64
    };
    (ratio * (n - ctd.min(n)) as f64 + ctd as f64) / n as f64
}

/// Day of the last infection caused during the run (0 if none).
pub fn days_to_end(traj: &Trajectory) -> u32 {
    traj.days_to_end
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_rate_examples() {
        assert!((positive_rate(10, 100, 500, 100_000) - 0.1045).abs() < 1e-15);
        assert_eq!(positive_rate(0, 50, 0, 1000), 0.0);
        assert_eq!(positive_rate(40, 40, 0, 1000), 1.0);
        assert_eq!(positive_rate(0, 0, 10, 100), 0.1);
    }

    #[test]
    fn positive_rate_is_monotone() {
        let n = 1000;
        for tests in [1usize, 10, 100] {
            for ctd in [0usize, 10, 500] {
                for pos in 0..tests {
                    assert!(positive_rate(pos + 1, tests, ctd, n) >= positive_rate(pos, tests, ctd, n));
                    assert!(positive_rate(pos, tests, ctd + 1, n) >= positive_rate(pos, tests, ctd, n));
                }
            }
        }
    }
}
