//! Contact-network generation.
//!
//! Superspreading networks are configuration-model graphs whose degree
//! distribution is chosen so that, once each edge transmits with
//! probability `T = beta / (gamma + beta)`, the number of secondary
//! infections along a random edge is negative binomial with mean `R0` and
//! dispersion `k`.

mod components;
mod degree;
mod generate;
mod io;
mod network;
mod stats;

pub use components::{connected_components, Components, UnionFind};
pub use degree::{
    derive_degree_distribution, infection_probability, DegreeDistribution, ShapeParams,
    DEFAULT_TAIL_MASS,
};
pub use generate::{
    generate_er_network, generate_gamma_infectiousness_network, generate_superspreading_network,
};
pub use io::{rates_path, read_network, write_network};
pub use network::{ContactNetwork, NetworkKind};
pub use stats::{expected_clustering_coefficient, network_stats, NetworkStats};
