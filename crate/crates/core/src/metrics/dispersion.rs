use crate::error::{Error, Result};

/// Largest finite estimate; also the value reported for Poisson-like samples.
pub const K_HAT_CAP: f64 = 1e6;
const K_HAT_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KHat {
    Finite(f64),
    /// Variance does not exceed the mean: no finite maximiser.
    PoissonLike,
}

impl KHat {
    /// The estimate with the Poisson-like sentinel reported as the cap.
    pub fn capped(self) -> f64 {
        match self {
            KHat::Finite(k) => k,
            KHat::PoissonLike => K_HAT_CAP,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, KHat::Finite(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionEstimate {
    pub k_hat: KHat,
    pub mean_hat: f64,
    pub sample_size: usize,
}

/// Derivative in `k` of the negative-binomial log-likelihood with the mean
/// held at `mean`, given `tail[j]` = number of counts greater than `j`.
pub fn nb_score(k: f64, tail: &[usize], n: usize, mean: f64) -> f64 {
    let digamma_part: f64 = tail.iter().enumerate().map(|(j, &c)| c as f64 / (k + j as f64)).sum();
    digamma_part + n as f64 * (k / (k + mean)).ln()
}

/// Maximum-likelihood dispersion of secondary-infection counts.
pub fn estimate_dispersion(counts: &[u32]) -> Result<DispersionEstimate> {
    let n = counts.len();
    if n < 2 {
        return Err(Error::param("counts", format!("need at least 2 counts, got {n}")));
    }
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n as f64;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let poisson_like = DispersionEstimate {
        k_hat: KHat::PoissonLike,
        mean_hat: mean,
        sample_size: n,
    };
    if mean == 0.0 || var <= mean {
        return Ok(poisson_like);
    }

    let max = *counts.iter().max().unwrap() as usize;
    let mut tail = vec![0usize; max];
    for &c in counts {
        for t in tail.iter_mut().take(c as usize) {
            *t += 1;
        }
    }
    let score = |k: f64| nb_score(k, &tail, n, mean);

    if score(K_HAT_CAP) >= 0.0 {
        return Ok(poisson_like);
    }
    let k_hat = if score(K_HAT_FLOOR) <= 0.0 {
        K_HAT_FLOOR
    } else {
        let (mut lo, mut hi) = (K_HAT_FLOOR.ln(), K_HAT_CAP.ln());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if score(mid.exp()) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 {
                break;
            }
        }
        (0.5 * (lo + hi)).exp()
    };
    Ok(DispersionEstimate {
        k_hat: KHat::Finite(k_hat),
        mean_hat: mean,
        sample_size: n,
    })
}
