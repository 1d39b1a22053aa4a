use super::components::connected_components;
use super::degree::DegreeDistribution;
use super::network::ContactNetwork;

/// `(1/N) (<d^2> - <d>)^2 / <d>^3`, the expected clustering of a
/// configuration-model graph with the given degree distribution.
pub fn expected_clustering_coefficient(dist: &DegreeDistribution, n: usize) -> f64 {
    clustering_from_moments(dist.moment(1), dist.moment(2), n)
}

fn clustering_from_moments(m1: f64, m2: f64, n: usize) -> f64 {
    if m1 <= 0.0 || n == 0 {
        return 0.0;
    }
    (m2 - m1).powi(2) / (m1.powi(3) * n as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStats {
    pub empirical_mean_degree: f64,
    /// `degree_histogram[d]` is the number of nodes with degree `d`.
    pub degree_histogram: Vec<usize>,
    /// Configuration-model clustering evaluated on the empirical degree moments.
    pub clustering_coefficient_expected: f64,
    /// Connected-component sizes, descending.
    pub component_sizes: Vec<usize>,
}

impl NetworkStats {
    /// Degree at or below which a `quantile` fraction of nodes lie.
    pub fn degree_quantile(&self, quantile: f64) -> usize {
        let n: usize = self.degree_histogram.iter().sum();
        let target = (quantile * n as f64).ceil() as usize;
        let mut seen = 0;
        for (d, &count) in self.degree_histogram.iter().enumerate() {
            seen += count;
            if seen >= target.max(1) {
                return d;
            }
        }
        self.degree_histogram.len().saturating_sub(1)
    }

    /// Complementary CDF `P(D >= d)` for every degree in the histogram.
    pub fn degree_ccdf(&self) -> Vec<f64> {
        let n: usize = self.degree_histogram.iter().sum();
        let mut remaining = n;
        self.degree_histogram
            .iter()
            .map(|&count| {
                let p = remaining as f64 / n as f64;
                remaining -= count;
                p
            })
            .collect()
    }
}

pub fn network_stats(net: &ContactNetwork) -> NetworkStats {
    let n = net.node_count();
    let max_degree = (0..n as u32).map(|u| net.degree(u)).max().unwrap_or(0);
    let mut degree_histogram = vec![0usize; max_degree + 1];
    let (mut s1, mut s2) = (0.0f64, 0.0f64);
    for u in 0..n as u32 {
        let d = net.degree(u);
        degree_histogram[d] += 1;
        s1 += d as f64;
        s2 += (d * d) as f64;
    }
    let (m1, m2) = if n > 0 { (s1 / n as f64, s2 / n as f64) } else { (0.0, 0.0) };
    NetworkStats {
        empirical_mean_degree: m1,
        degree_histogram,
        clustering_coefficient_expected: clustering_from_moments(m1, m2, n),
        component_sizes: connected_components(net).sizes,
    }
}
