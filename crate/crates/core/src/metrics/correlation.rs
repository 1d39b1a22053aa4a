use crate::error::{Error, Result};

/// Pearson correlation; `None` when either series is constant or shorter
/// than two points.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len().min(b.len());
    if n < 2 {
        return None;
    }
    let ma = a[..n].iter().sum::<f64>() / n as f64;
    let mb = b[..n].iter().sum::<f64>() / n as f64;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a[..n].iter().zip(&b[..n]) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Within-run correlation of daily positive rates with daily infection
/// ratios. `Ok(None)` when undefined (fewer than 3 days or a constant series).
pub fn daily_correlation(positive_rates: &[f64], infection_ratios: &[f64]) -> Result<Option<f64>> {
    if positive_rates.len() != infection_ratios.len() {
        return Err(Error::param(
            "series",
            format!("length mismatch: {} vs {}", positive_rates.len(), infection_ratios.len()),
        ));
    }
    if positive_rates.len() < 3 {
        return Ok(None);
    }
    Ok(pearson(positive_rates, infection_ratios))
}
