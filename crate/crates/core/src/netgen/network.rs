use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetworkKind {
    Superspreading,
    ErdosRenyi,
    GammaInfectiousness,
}

impl NetworkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Superspreading => "superspreading",
            NetworkKind::ErdosRenyi => "erdos_renyi",
            NetworkKind::GammaInfectiousness => "gamma_infectiousness",
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "superspreading" => Ok(NetworkKind::Superspreading),
            "erdos_renyi" | "er" => Ok(NetworkKind::ErdosRenyi),
            "gamma_infectiousness" | "gamma" => Ok(NetworkKind::GammaInfectiousness),
            other => Err(Error::param(
                "network_kind",
                format!("unknown kind `{other}` (expected superspreading|erdos_renyi|gamma_infectiousness)"),
            )),
        }
    }
}

/// Immutable simple undirected graph in compressed adjacency form.
///
/// Neighbour lists are sorted ascending; the graph has no self-loops and no
/// parallel edges, and `j ∈ adj(i) ⇔ i ∈ adj(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactNetwork {
    kind: NetworkKind,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    infection_rates: Option<Vec<f64>>,
    clamped_degrees: usize,
}

impl ContactNetwork {
    /// Builds a simple graph from an arbitrary edge list. Self-loops and
    /// duplicate edges are dropped.
    pub fn from_edges(node_count: usize, kind: NetworkKind, edges: &[(u32, u32)]) -> Result<Self> {
        if node_count > u32::MAX as usize {
            return Err(Error::param("N", "node count exceeds u32 range"));
        }
        let mut canon: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(Error::param(
                    "edges",
                    format!("edge ({u}, {v}) out of range for N = {node_count}"),
                ));
            }
            if u != v {
                canon.push((u.min(v), u.max(v)));
            }
        }
        canon.sort_unstable();
        canon.dedup();

        let mut degree = vec![0usize; node_count];
        for &(u, v) in &canon {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..node_count].to_vec();
        let mut neighbors = vec![0u32; canon.len() * 2];
        for &(u, v) in &canon {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for i in 0..node_count {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Ok(Self {
            kind,
            offsets,
            neighbors,
            infection_rates: None,
            clamped_degrees: 0,
        })
    }

    pub(crate) fn with_infection_rates(mut self, rates: Vec<f64>) -> Self {
        debug_assert_eq!(rates.len(), self.node_count());
        self.infection_rates = Some(rates);
        self
    }

    pub(crate) fn with_clamped_degrees(mut self, clamped: usize) -> Self {
        self.clamped_degrees = clamped;
        self
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    #[inline]
    pub fn neighbors(&self, node: u32) -> &[u32] {
        let i = node as usize;
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, node: u32) -> usize {
        let i = node as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Per-node infection rates; only set for gamma-infectiousness networks.
    pub fn infection_rates(&self) -> Option<&[f64]> {
        self.infection_rates.as_deref()
    }

    /// Number of sampled degrees that exceeded `N - 1` and were clamped.
    pub fn clamped_degrees(&self) -> usize {
        self.clamped_degrees
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.node_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }
}
