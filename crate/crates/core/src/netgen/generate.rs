use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Gamma;

use super::degree::{infection_probability, DegreeDistribution};
use super::network::{ContactNetwork, NetworkKind};
use crate::error::{check_rate, Error, Result};
use crate::rng::{self, SimRng};

fn check_node_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::param("N", format!("must be >= 2, got {n}")));
    }
    if n > u32::MAX as usize {
        return Err(Error::param("N", "exceeds u32 node id range"));
    }
    Ok(())
}

/// Configuration-model network with degrees drawn i.i.d. from `dist`.
///
/// Degrees above `N - 1` are clamped (and counted). An odd degree sum is
/// repaired by bumping one uniformly chosen node. Stubs are paired
/// uniformly; self-loops and parallel edges are erased.
pub fn generate_superspreading_network(
    dist: &DegreeDistribution,
    n: usize,
    seed: u64,
) -> Result<ContactNetwork> {
    check_node_count(n)?;
    let mut rng = rng::stream(seed, rng::STREAM_NETWORK);
    let sampler = WeightedIndex::new(dist.probabilities())
        .map_err(|e| Error::param("dist", e.to_string()))?;

    let max_degree = n - 1;
    let mut clamped = 0usize;
    let mut degrees: Vec<usize> = (0..n)
        .map(|_| {
            let d = sampler.sample(&mut rng) + 1;
            if d > max_degree {
                clamped += 1;
                max_degree
            } else {
                d
            }
        })
        .collect();

    if degrees.iter().sum::<usize>() % 2 == 1 {
        let node = rng.random_range(0..n);
        if degrees[node] < max_degree {
            degrees[node] += 1;
        } else {
            degrees[node] -= 1;
        }
    }

    let edges = match_stubs(&degrees, &mut rng);
    Ok(ContactNetwork::from_edges(n, NetworkKind::Superspreading, &edges)?.with_clamped_degrees(clamped))
}

/// Uniform stub matching. Returned pairs may contain loops and repeats.
fn match_stubs(degrees: &[usize], rng: &mut SimRng) -> Vec<(u32, u32)> {
    let mut stubs: Vec<u32> = Vec::with_capacity(degrees.iter().sum());
    for (node, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(node as u32, d));
    }
    stubs.shuffle(rng);
    stubs.chunks_exact(2).map(|pair| (pair[0], pair[1])).collect()
}

fn er_mean_degree(r0: f64, beta: f64, gamma: f64, n: usize) -> Result<f64> {
    check_node_count(n)?;
    check_rate("R0", r0)?;
    let transmissibility = infection_probability(beta, gamma)?;
    let mean = r0 / transmissibility;
    if mean >= (n - 1) as f64 {
        return Err(Error::param(
            "R0",
            format!("mean degree {mean} must be below N - 1 = {}", n - 1),
        ));
    }
    Ok(mean)
}

/// Erdős–Rényi network with mean degree `R0 (gamma + beta) / beta`: each
/// of the `N (N - 1) / 2` pairs is an edge independently with probability
/// `mean / (N - 1)`.
pub fn generate_er_network(r0: f64, beta: f64, gamma: f64, n: usize, seed: u64) -> Result<ContactNetwork> {
    let mean = er_mean_degree(r0, beta, gamma, n)?;
    let mut rng = rng::stream(seed, rng::STREAM_NETWORK);
    let edges = erdos_renyi_edges(n, mean / (n - 1) as f64, &mut rng);
    ContactNetwork::from_edges(n, NetworkKind::ErdosRenyi, &edges)
}

/// ER topology plus per-node infection rates ~ Gamma(shape k, scale beta / k).
pub fn generate_gamma_infectiousness_network(
    k: f64,
    r0: f64,
    beta: f64,
    gamma: f64,
    n: usize,
    seed: u64,
) -> Result<ContactNetwork> {
    check_rate("k", k)?;
    if k <= 0.0 {
        return Err(Error::param("k", "must be > 0"));
    }
    let mean = er_mean_degree(r0, beta, gamma, n)?;
    let mut rng = rng::stream(seed, rng::STREAM_NETWORK);
    let edges = erdos_renyi_edges(n, mean / (n - 1) as f64, &mut rng);
    let rate_dist = Gamma::new(k, beta / k).map_err(|e| Error::param("k", e.to_string()))?;
    let rates: Vec<f64> = (0..n).map(|_| rate_dist.sample(&mut rng)).collect();
    Ok(ContactNetwork::from_edges(n, NetworkKind::GammaInfectiousness, &edges)?.with_infection_rates(rates))
}

/// Bernoulli(p) over all unordered pairs, visiting only the included ones
/// by geometric skipping (Batagelj & Brandes).
fn erdos_renyi_edges(n: usize, p: f64, rng: &mut SimRng) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    if p <= 0.0 {
        return edges;
    }
    if p >= 1.0 {
        for v in 1..n as u32 {
            for w in 0..v {
                edges.push((w, v));
            }
        }
        return edges;
    }
    let log_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / log_q).floor();
        // Skips past the end of the pair space simply terminate the walk.
        if skip >= (n * n) as f64 {
            break;
        }
        w += 1 + skip as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as u32, v as u32));
        }
    }
    edges
}
