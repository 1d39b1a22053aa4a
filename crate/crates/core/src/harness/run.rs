use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::spec::ExperimentSpec;
use crate::epidemic::{
    infections_path, run_epidemic, transmitted_secondary_counts, write_infections_csv, write_trajectory_csv,
    EpidemicParams, Model, Trajectory,
};
use crate::error::{Error, Result};
use crate::interventions::{InterventionPlan, Strategy};
use crate::metrics::{
    daily_correlation, estimate_dispersion, inferred_threat_levels, community_infection_in, KHat, ThreatBasis,
};
use crate::netgen::{
    connected_components, derive_degree_distribution, generate_er_network, generate_gamma_infectiousness_network,
    generate_superspreading_network, Components, ContactNetwork, NetworkKind, DEFAULT_TAIL_MASS,
};
use crate::rng::{network_seed, replica_seed, stable_hash};

/// Largest communities considered by the community-infection metric.
pub const TOP_COMMUNITIES: usize = 5;

/// One point of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellKey {
    pub model: Model,
    pub network_kind: NetworkKind,
    pub n: usize,
    pub i0: usize,
    pub beta: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub r0: f64,
    pub k: f64,
    pub p_h: f64,
    pub strategy: Strategy,
    pub mixed: bool,
    pub daily_tests: usize,
}

impl CellKey {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.model
            .cmp(&other.model)
            .then(self.network_kind.as_str().cmp(other.network_kind.as_str()))
            .then(self.n.cmp(&other.n))
            .then(self.i0.cmp(&other.i0))
            .then(self.beta.total_cmp(&other.beta))
            .then(self.gamma.total_cmp(&other.gamma))
            .then(self.kappa.total_cmp(&other.kappa))
            .then(self.r0.total_cmp(&other.r0))
            .then(self.k.total_cmp(&other.k))
            .then(self.p_h.total_cmp(&other.p_h))
            .then((self.strategy as u8).cmp(&(other.strategy as u8)))
            .then(self.mixed.cmp(&other.mixed))
            .then(self.daily_tests.cmp(&other.daily_tests))
    }

    /// Parameters that determine the contact networks. Cells differing
    /// only in epidemic or intervention settings share networks.
    pub fn network_identity(&self) -> String {
        let k = match self.network_kind {
            NetworkKind::ErdosRenyi => None,
            _ => Some(self.k),
        };
        format!(
            "{}|{}|{:?}|{:?}|{:?}|{:?}",
            self.network_kind, self.n, k, self.r0, self.beta, self.gamma
        )
    }

    pub fn epidemic_params(&self) -> Result<EpidemicParams> {
        EpidemicParams::new(self.model, self.beta, self.gamma, self.kappa, self.p_h, self.i0)
    }

    pub fn plan(&self, spec: &ExperimentSpec) -> Result<InterventionPlan> {
        InterventionPlan::new(self.strategy, self.daily_tests, spec.p_c, spec.p_q, self.mixed)
    }
}

/// Every grid cell, sorted by key.
pub fn expand_cells(spec: &ExperimentSpec) -> Vec<CellKey> {
    let mut cells = Vec::with_capacity(spec.total_cells());
    for &model in &spec.model {
        for &network_kind in &spec.network_kind {
            for &n in &spec.n {
                for &i0 in &spec.i0 {
                    for &beta in &spec.beta {
                        for &gamma in &spec.gamma {
                            for &kappa in &spec.kappa {
                                for &r0 in &spec.r0 {
                                    for &k in &spec.k {
                                        for &p_h in &spec.p_h {
                                            for &strategy in &spec.strategy {
                                                for &mixed in &spec.mixed {
                                                    for &daily_tests in &spec.daily_tests {
                                                        cells.push(CellKey {
                                                            model,
                                                            network_kind,
                                                            n,
                                                            i0,
                                                            beta,
                                                            gamma,
                                                            kappa,
                                                            r0,
                                                            k,
                                                            p_h,
                                                            strategy,
                                                            mixed,
                                                            daily_tests,
                                                        });
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    cells.sort_by(|a, b| a.cmp_key(b));
    cells.dedup_by(|a, b| a.cmp_key(b) == Ordering::Equal);
    cells
}

/// Per-run metrics that feed the aggregate row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub final_fraction: f64,
    pub top_community_fraction: f64,
    pub days_to_end: u32,
    pub correlation: Option<f64>,
    pub max_threat_actual: u8,
    pub max_threat_confirmed: u8,
    pub max_threat_posrate: u8,
    pub max_threat_rt_only: Option<u8>,
    /// `None` when fewer than two nodes were infected by transmission.
    pub k_hat: Option<KHat>,
    /// Offspring counts the estimate was computed from.
    pub secondary_counts: Vec<u32>,
}

/// Correlation days: every completed day, i.e. each day that ended with an
/// intervention step. The final, partial day is left out.
fn correlation_series(traj: &Trajectory) -> (Vec<f64>, Vec<f64>) {
    let n = traj.node_count as f64;
    let days = traj.daily.len().saturating_sub(1);
    traj.daily[..days]
        .iter()
        .map(|d| (d.positive_rate, d.infected() as f64 / n))
        .unzip()
}

pub fn summarize_run(traj: &Trajectory, components: &Components, first_m: usize) -> Result<RunSummary> {
    let (rates, ratios) = correlation_series(traj);
    let counts = transmitted_secondary_counts(traj, first_m)?;
    let k_hat = if counts.len() >= 2 {
        Some(estimate_dispersion(&counts)?.k_hat)
    } else {
        None
    };
    let max = |basis| inferred_threat_levels(traj, basis).map(|s| s.max_level());
    let max_threat_rt_only = if traj.random_testing_recorded {
        Some(max(ThreatBasis::PositiveRateRtOnly)?)
    } else {
        None
    };
    Ok(RunSummary {
        final_fraction: traj.final_fraction(),
        top_community_fraction: community_infection_in(components, &traj.ever_infected(), TOP_COMMUNITIES)?,
        days_to_end: traj.days_to_end,
        correlation: daily_correlation(&rates, &ratios)?,
        max_threat_actual: max(ThreatBasis::Actual)?,
        max_threat_confirmed: max(ThreatBasis::ConfirmedCounts)?,
        max_threat_posrate: max(ThreatBasis::PositiveRateAll)?,
        max_threat_rt_only,
        k_hat,
        secondary_counts: counts,
    })
}

/// One aggregated cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub key: CellKey,
    pub mean_final_infection_fraction: f64,
    pub mean_top5_community_fraction: f64,
    pub mean_days_to_end: f64,
    /// `None` when no run had a defined correlation.
    pub mean_daily_correlation: Option<f64>,
    pub max_threat_actual: f64,
    pub max_threat_confirmed: f64,
    pub max_threat_posrate: f64,
    pub max_threat_rt_only: Option<f64>,
    /// Mean finite dispersion estimate, Poisson-like runs excluded.
    pub k_hat_mean: Option<f64>,
    /// One estimate from every run's counts taken together; the cap when
    /// Poisson-like.
    pub k_hat_pooled: Option<f64>,
    pub replicas: usize,
    pub correlation_excluded: usize,
    pub k_hat_poisson_like: usize,
    pub k_hat_undefined: usize,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn aggregate(key: CellKey, runs: &[RunSummary]) -> AggregateRow {
    let m = |f: &dyn Fn(&RunSummary) -> f64| mean(runs.iter().map(f)).unwrap_or(0.0);
    let correlations: Vec<f64> = runs.iter().filter_map(|r| r.correlation).collect();
    let rt_only: Vec<f64> = runs.iter().filter_map(|r| r.max_threat_rt_only.map(f64::from)).collect();
    let finite_k: Vec<f64> = runs
        .iter()
        .filter_map(|r| match r.k_hat {
            Some(KHat::Finite(k)) => Some(k),
            _ => None,
        })
        .collect();
    let pooled: Vec<u32> = runs.iter().flat_map(|r| r.secondary_counts.iter().copied()).collect();
    let k_hat_pooled = estimate_dispersion(&pooled).ok().map(|e| e.k_hat.capped());
    AggregateRow {
        key,
        mean_final_infection_fraction: m(&|r| r.final_fraction),
        mean_top5_community_fraction: m(&|r| r.top_community_fraction),
        mean_days_to_end: m(&|r| f64::from(r.days_to_end)),
        mean_daily_correlation: mean(correlations.iter().copied()),
        max_threat_actual: m(&|r| f64::from(r.max_threat_actual)),
        max_threat_confirmed: m(&|r| f64::from(r.max_threat_confirmed)),
        max_threat_posrate: m(&|r| f64::from(r.max_threat_posrate)),
        max_threat_rt_only: mean(rt_only.iter().copied()),
        k_hat_mean: mean(finite_k.iter().copied()),
        k_hat_pooled,
        replicas: runs.len(),
        correlation_excluded: runs.len() - correlations.len(),
        k_hat_poisson_like: runs.iter().filter(|r| r.k_hat == Some(KHat::PoissonLike)).count(),
        k_hat_undefined: runs.iter().filter(|r| r.k_hat.is_none()).count(),
    }
}

pub const AGGREGATE_COLUMNS: [&str; 28] = [
    "model",
    "network_kind",
    "N",
    "I0",
    "beta",
    "gamma",
    "kappa",
    "R0",
    "k",
    "p_H",
    "strategy",
    "mixed",
    "daily_tests",
    "mean_final_infection_fraction",
    "mean_top5_community_fraction",
    "mean_days_to_end",
    "mean_daily_correlation",
    "max_threat_actual",
    "max_threat_confirmed",
    "max_threat_posrate",
    "max_threat_rt_only",
    "k_hat_mean",
    "replicas",
    "correlation_excluded",
    "k_hat_poisson_like",
    "k_hat_undefined",
    "k_hat_pooled",
    "cell",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl AggregateRow {
    fn record(&self, cell: &str) -> Vec<String> {
        let k = &self.key;
        vec![
            k.model.to_string(),
            k.network_kind.to_string(),
            k.n.to_string(),
            k.i0.to_string(),
            k.beta.to_string(),
            k.gamma.to_string(),
            k.kappa.to_string(),
            k.r0.to_string(),
            k.k.to_string(),
            k.p_h.to_string(),
            k.strategy.to_string(),
            k.mixed.to_string(),
            k.daily_tests.to_string(),
            self.mean_final_infection_fraction.to_string(),
            self.mean_top5_community_fraction.to_string(),
            self.mean_days_to_end.to_string(),
            opt(self.mean_daily_correlation),
            self.max_threat_actual.to_string(),
            self.max_threat_confirmed.to_string(),
            self.max_threat_posrate.to_string(),
            opt(self.max_threat_rt_only),
            opt(self.k_hat_mean),
            self.replicas.to_string(),
            self.correlation_excluded.to_string(),
            self.k_hat_poisson_like.to_string(),
            self.k_hat_undefined.to_string(),
            opt(self.k_hat_pooled),
            cell.to_string(),
        ]
    }
}

fn cell_name(index: usize) -> String {
    format!("cell{index:04}")
}

pub fn write_aggregate_csv(path: &Path, rows: &[(usize, AggregateRow)]) -> Result<()> {
    let to_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    };
    let mut out = csv::Writer::from_path(path).map_err(to_err)?;
    out.write_record(AGGREGATE_COLUMNS).map_err(to_err)?;
    for (index, row) in rows {
        out.write_record(row.record(&cell_name(*index))).map_err(to_err)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug)]
pub struct CellFailure {
    pub key: CellKey,
    pub error: String,
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<AggregateRow>,
    pub failures: Vec<CellFailure>,
    pub aggregate_path: PathBuf,
    /// Summaries per cell, in network-then-replica order.
    pub runs: Vec<Vec<RunSummary>>,
}

struct NetworkInstance {
    net: ContactNetwork,
    components: Components,
    seed: u64,
}

fn build_networks(key: &CellKey, spec: &ExperimentSpec) -> Result<Vec<NetworkInstance>> {
    let cell_hash = stable_hash(key.network_identity().as_bytes());
    let dist = match key.network_kind {
        NetworkKind::Superspreading => Some(derive_degree_distribution(
            key.k,
            key.r0,
            key.beta,
            key.gamma,
            DEFAULT_TAIL_MASS,
        )?),
        _ => None,
    };
    (0..spec.networks_per_cell)
        .into_par_iter()
        .map(|idx| {
            let seed = network_seed(spec.base_seed, cell_hash, idx as u64);
            let net = match key.network_kind {
                NetworkKind::Superspreading => {
                    generate_superspreading_network(dist.as_ref().expect("distribution"), key.n, seed)?
                }
                NetworkKind::ErdosRenyi => generate_er_network(key.r0, key.beta, key.gamma, key.n, seed)?,
                NetworkKind::GammaInfectiousness => {
                    generate_gamma_infectiousness_network(key.k, key.r0, key.beta, key.gamma, key.n, seed)?
                }
            };
            let components = connected_components(&net);
            Ok(NetworkInstance { net, components, seed })
        })
        .collect()
}

fn trajectory_dir(spec: &ExperimentSpec) -> PathBuf {
    spec.output_dir.join("trajectories")
}

fn run_cell(
    index: usize,
    key: &CellKey,
    networks: &[NetworkInstance],
    spec: &ExperimentSpec,
) -> Result<Vec<RunSummary>> {
    let params = key.epidemic_params()?;
    let plan = key.plan(spec)?;
    let jobs: Vec<(usize, usize)> = (0..networks.len())
        .flat_map(|i| (0..spec.replicas_per_network).map(move |r| (i, r)))
        .collect();
    jobs.par_iter()
        .map(|&(i, r)| {
            let inst = &networks[i];
            let traj = run_epidemic(&inst.net, &params, &plan, replica_seed(inst.seed, r as u64))?;
            if spec.emit_trajectories {
                let path = trajectory_dir(spec).join(format!("{}_net{i:02}_rep{r:02}.csv", cell_name(index)));
                write_trajectory_csv(&path, &traj)?;
                write_infections_csv(&infections_path(&path), &traj)?;
            }
            summarize_run(&traj, &inst.components, spec.first_m)
        })
        .collect()
}

/// Runs every cell of `spec` and writes `aggregate.csv` (plus per-run
/// trajectories when enabled) under the output directory.
///
/// A failing cell is reported in `failures` and left out of the aggregate;
/// the remaining cells still run.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    fs::create_dir_all(&spec.output_dir)?;
    if spec.emit_trajectories {
        fs::create_dir_all(trajectory_dir(spec))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.parallel)
        .build()
        .map_err(|e| Error::param("parallel", e.to_string()))?;
    let cells = expand_cells(spec);

    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    for (idx, key) in cells.iter().enumerate() {
        let id = key.network_identity();
        match groups.iter_mut().find(|(g, _)| *g == id) {
            Some((_, members)) => members.push(idx),
            None => groups.push((id, vec![idx])),
        }
    }

    let mut results: Vec<Option<Result<Vec<RunSummary>>>> = (0..cells.len()).map(|_| None).collect();
    pool.install(|| {
        for (_, members) in &groups {
            match build_networks(&cells[members[0]], spec) {
                Ok(networks) => {
                    let outcomes: Vec<Result<Vec<RunSummary>>> = members
                        .par_iter()
                        .map(|&idx| run_cell(idx, &cells[idx], &networks, spec))
                        .collect();
                    for (&idx, outcome) in members.iter().zip(outcomes) {
                        results[idx] = Some(outcome);
                    }
                }
                Err(e) => {
                    let msg = e.to_string();
                    for &idx in members {
                        results[idx] = Some(Err(Error::param("network", msg.clone())));
                    }
                }
            }
        }
    });

    let mut rows = Vec::new();
    let mut indexed = Vec::new();
    let mut failures = Vec::new();
    let mut runs = Vec::new();
    for (idx, (key, result)) in cells.iter().zip(results).enumerate() {
        match result.expect("every cell visited") {
            Ok(summaries) => {
                let row = aggregate(*key, &summaries);
                indexed.push((idx, row.clone()));
                rows.push(row);
                runs.push(summaries);
            }
            Err(e) => failures.push(CellFailure {
                key: *key,
                error: e.to_string(),
            }),
        }
    }
    let aggregate_path = spec.output_dir.join("aggregate.csv");
    write_aggregate_csv(&aggregate_path, &indexed)?;
    Ok(ExperimentOutput {
        rows,
        failures,
        aggregate_path,
        runs,
    })
}
