use crate::error::{check_rate, Error, Result};

/// Default truncation of the negative-binomial upper tail.
pub const DEFAULT_TAIL_MASS: f64 = 1e-10;

const MAX_SUPPORT: usize = 50_000_000;

/// Epidemic parameters that fix the shape of a superspreading network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    /// Negative-binomial dispersion of secondary infections.
    pub k: f64,
    /// Basic reproduction number.
    pub r0: f64,
    /// Infection rate per edge per day.
    pub beta: f64,
    /// Recovery rate per day.
    pub gamma: f64,
}

impl ShapeParams {
    /// Mean of the excess-degree negative binomial, `R0 (gamma + beta) / beta`.
    pub fn excess_degree_mean(&self) -> f64 {
        self.r0 * (self.gamma + self.beta) / self.beta
    }
}

/// Probability that an infectious node infects a given neighbour before
/// recovering: `beta / (gamma + beta)`.
pub fn infection_probability(beta: f64, gamma: f64) -> Result<f64> {
    check_rate("beta", beta)?;
    check_rate("gamma", gamma)?;
    if beta <= 0.0 {
        return Err(Error::param("beta", "must be > 0"));
    }
    Ok(beta / (gamma + beta))
}

/// Truncated degree distribution of a superspreading network.
///
/// Node degrees start at 1. `probabilities[d - 1]` holds `p(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    probabilities: Vec<f64>,
    mean_degree: f64,
    params: Option<ShapeParams>,
}

impl DegreeDistribution {
    /// Builds a distribution from raw weights over degrees `1..=weights.len()`.
    /// Weights are normalised; all must be finite and non-negative.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("weights", "empty degree support"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::param("weights", "weights must be finite and >= 0"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::param("weights", "weights sum to zero"));
        }
        let probabilities: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
        let mean_degree = probabilities
            .iter()
            .enumerate()
            .map(|(idx, p)| (idx + 1) as f64 * p)
            .sum();
        Ok(Self {
            probabilities,
            mean_degree,
            params: None,
        })
    }

    /// Point mass on a single degree.
    pub fn constant(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::param("degree", "must be >= 1"));
        }
        let mut weights = vec![0.0; degree];
        weights[degree - 1] = 1.0;
        Self::from_weights(weights)
    }

    pub fn probability(&self, degree: usize) -> f64 {
        if degree == 0 {
            return 0.0;
        }
        self.probabilities.get(degree - 1).copied().unwrap_or(0.0)
    }

    /// `p(1), p(2), ...` up to the truncation degree.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn mean_degree(&self) -> f64 {
        self.mean_degree
    }

    /// Largest degree with non-zero support after truncation.
    pub fn truncation_degree(&self) -> usize {
        self.probabilities.len()
    }

    pub fn params(&self) -> Option<ShapeParams> {
        self.params
    }

    /// `E[d^power]` under the distribution.
    pub fn moment(&self, power: i32) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(idx, p)| ((idx + 1) as f64).powi(power) * p)
            .sum()
    }
}

/// Degree distribution whose excess degrees, thinned by the per-edge
/// infection probability, give NB(k, R0) secondary infections.
///
/// With `q` the NB(k, mean `R0 / T`) pmf, `p(i) ∝ q(i - 1) / i`. The
/// support is cut at the first degree where the remaining NB tail falls
/// below `tail_mass`, and the kept mass is renormalised.
pub fn derive_degree_distribution(
    k: f64,
    r0: f64,
    beta: f64,
    gamma: f64,
    tail_mass: f64,
) -> Result<DegreeDistribution> {
    check_rate("k", k)?;
    check_rate("R0", r0)?;
    if k <= 0.0 {
        return Err(Error::param("k", "must be > 0"));
    }
    if r0 <= 0.0 {
        return Err(Error::param("R0", "must be > 0"));
    }
    if !(tail_mass > 0.0 && tail_mass <= 1e-6) {
        return Err(Error::param("tail_mass", format!("must lie in (0, 1e-6], got {tail_mass}")));
    }
    let transmissibility = infection_probability(beta, gamma)?;
    let params = ShapeParams { k, r0, beta, gamma };
    let mean = r0 / transmissibility;

    // NB pmf by recurrence: q0 = (k/(k+m))^k, q(j+1) = q(j) (j+k)/(j+1) * m/(k+m).
    let success = k / (k + mean);
    let ratio_limit = mean / (k + mean);
    let mut q = success.powf(k);
    let mut cdf = 0.0;
    let mut weights = Vec::new();
    let mut j = 0usize;
    loop {
        cdf += q;
        weights.push(q / (j + 1) as f64);
        let next_ratio = (j as f64 + k) / (j as f64 + 1.0) * ratio_limit;
        // Geometric bound on the remaining tail; robust where 1 - cdf has cancelled.
        let sup_ratio = next_ratio.max(ratio_limit);
        let bound = if sup_ratio < 1.0 {
            q * next_ratio / (1.0 - sup_ratio)
        } else {
            f64::INFINITY
        };
        if 1.0 - cdf < tail_mass || bound < tail_mass {
            break;
        }
        if weights.len() >= MAX_SUPPORT {
            return Err(Error::param(
                "k",
                format!("degree support exceeds {MAX_SUPPORT} before the tail drops below {tail_mass}"),
            ));
        }
        q *= next_ratio;
        j += 1;
    }

    let mut dist = DegreeDistribution::from_weights(weights)?;
    dist.params = Some(params);
    Ok(dist)
}
