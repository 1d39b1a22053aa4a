use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::params::{EpidemicParams, Model};
use super::rate_tree::RateTree;
use super::state::{Compartment, Event, SimulationState, Transition, NO_NODE};
use crate::error::{Error, Result};
use crate::interventions::{daily_step, register_hospitalization, InterventionPlan, TestOutcome};
use crate::metrics::positive_rate;
use crate::netgen::ContactNetwork;
use crate::rng::{stream, SimRng, STREAM_EPIDEMIC, STREAM_INTERVENTION};

/// Counters for day `d`: events in `[d, d + 1)` and the tests run at
/// `t = d + 1`. Compartment counts are taken after those tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DailyRecord {
    pub day: u32,
    pub s: usize,
    pub e: usize,
    pub i: usize,
    pub r: usize,
    pub h: usize,
    /// Seeds count towards day 0.
    pub new_infections: usize,
    pub tests_used: usize,
    pub positives_found: usize,
    pub positive_rate: f64,
    pub quarantined_cumulative: usize,
    /// Confirmed, still infected nodes before the day's tests.
    pub ctd: usize,
    pub rt_tests: usize,
    pub rt_positives: usize,
    pub hospitalizations: usize,
}

impl DailyRecord {
    pub fn infected(&self) -> usize {
        self.e + self.i
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfectionRecord {
    pub node: u32,
    pub time: f64,
    /// `None` for seeds.
    pub infector: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub node_count: usize,
    pub daily: Vec<DailyRecord>,
    pub final_infected_total: usize,
    /// Day of the last non-seed infection; 0 if there was none.
    pub days_to_end: u32,
    /// Every infection, in the order it happened.
    pub infections: Vec<InfectionRecord>,
    /// Direct infections caused, aligned with `infections`.
    pub secondary_counts: Vec<u32>,
    pub final_compartments: Vec<Compartment>,
    pub event_log: Vec<Event>,
    pub random_testing_recorded: bool,
}

impl Trajectory {
    pub fn final_fraction(&self) -> f64 {
        if self.node_count == 0 {
            0.0
        } else {
            self.final_infected_total as f64 / self.node_count as f64
        }
    }

    /// Whether each node was ever infected.
    pub fn ever_infected(&self) -> Vec<bool> {
        let mut out = vec![false; self.node_count];
        for rec in &self.infections {
            out[rec.node as usize] = true;
        }
        out
    }
}

/// Secondary-infection counts of the first `first_m` infected nodes
/// (seeds included), in infection order.
pub fn secondary_infection_counts(traj: &Trajectory, first_m: usize) -> Result<Vec<u32>> {
    if first_m == 0 {
        return Err(Error::param("first_m", "must be >= 1"));
    }
    let m = first_m.min(traj.secondary_counts.len());
    Ok(traj.secondary_counts[..m].to_vec())
}

/// Secondary-infection counts of the first `first_m` nodes infected by
/// transmission, skipping the seeds, in infection order.
///
/// Nodes reached along an edge have excess-degree offspring, which is where
/// the negative-binomial law holds; seeds are drawn by plain degree.
pub fn transmitted_secondary_counts(traj: &Trajectory, first_m: usize) -> Result<Vec<u32>> {
    if first_m == 0 {
        return Err(Error::param("first_m", "must be >= 1"));
    }
    Ok(traj
        .infections
        .iter()
        .zip(&traj.secondary_counts)
        .filter(|(rec, _)| rec.infector.is_some())
        .take(first_m)
        .map(|(_, &c)| c)
        .collect())
}

struct Engine<'a> {
    net: &'a ContactNetwork,
    params: &'a EpidemicParams,
    plan: &'a InterventionPlan,
    state: SimulationState,
    tree: RateTree,
    /// Active susceptible neighbours of each node.
    sus_neighbors: Vec<u32>,
    epi_rng: SimRng,
    int_rng: SimRng,
    day_infections: usize,
    day_hospitalizations: usize,
    last_infection_time: Option<f64>,
}

impl<'a> Engine<'a> {
    fn new(net: &'a ContactNetwork, params: &'a EpidemicParams, plan: &'a InterventionPlan, seed: u64) -> Self {
        let n = net.node_count();
        Self {
            net,
            params,
            plan,
            state: SimulationState::new(n),
            tree: RateTree::new(n),
            sus_neighbors: (0..n as u32).map(|v| net.degree(v) as u32).collect(),
            epi_rng: stream(seed, STREAM_EPIDEMIC),
            int_rng: stream(seed, STREAM_INTERVENTION),
            day_infections: 0,
            day_hospitalizations: 0,
            last_infection_time: None,
        }
    }

    fn beta_of(&self, node: u32) -> f64 {
        match self.net.infection_rates() {
            Some(rates) => rates[node as usize],
            None => self.params.beta,
        }
    }

    fn infection_rate(&self, node: u32) -> f64 {
        if self.state.is_active(node) {
            self.beta_of(node) * self.sus_neighbors[node as usize] as f64
        } else {
            0.0
        }
    }

    fn rate(&self, node: u32) -> f64 {
        match self.state.compartment(node) {
            Compartment::E => self.params.kappa,
            Compartment::I => self.params.gamma + self.params.eta + self.infection_rate(node),
            _ => 0.0,
        }
    }

    fn refresh(&mut self, node: u32) {
        let r = self.rate(node);
        self.tree.set(node as usize, r);
    }

    /// `node` stops being an active susceptible: its infectious neighbours
    /// lose a target.
    fn withdraw_susceptible(&mut self, node: u32) {
        for &w in self.net.neighbors(node) {
            self.sus_neighbors[w as usize] -= 1;
            if self.state.compartment(w) == Compartment::I {
                self.refresh(w);
            }
        }
    }

    fn infect(&mut self, node: u32, source: u32) {
        self.state.record_infection(node, source);
        let next = if source != NO_NODE && self.params.model == Model::Seir {
            Compartment::E
        } else {
            Compartment::I
        };
        if self.state.is_active(node) {
            self.withdraw_susceptible(node);
        }
        self.state.set_compartment(node, next);
        let transition = if source == NO_NODE {
            Transition::Seeded
        } else {
            Transition::Infected { source }
        };
        self.state.log(node, transition);
        self.day_infections += 1;
        self.refresh(node);
    }

    fn random_seeds(&mut self) -> Vec<u32> {
        let n = self.net.node_count();
        let count = self.params.initial_infected.min(n);
        let mut seeds: Vec<u32> = index::sample(&mut self.epi_rng, n, count)
            .into_iter()
            .map(|v| v as u32)
            .collect();
        seeds.sort_unstable();
        seeds
    }

    /// Uniform active susceptible neighbour of `node`; at least one exists.
    fn pick_target(&mut self, node: u32) -> u32 {
        let nbrs = self.net.neighbors(node);
        let is_target = |state: &SimulationState, w: u32| state.compartment(w) == Compartment::S && state.is_active(w);
        for _ in 0..32 {
            let w = nbrs[self.epi_rng.random_range(0..nbrs.len())];
            if is_target(&self.state, w) {
                return w;
            }
        }
        let j = self.epi_rng.random_range(0..self.sus_neighbors[node as usize] as usize);
        nbrs.iter()
            .copied()
            .filter(|&w| is_target(&self.state, w))
            .nth(j)
            .expect("susceptible neighbour count out of sync")
    }

    fn fire(&mut self) {
        let total = self.tree.total();
        let node = self.tree.find(self.epi_rng.random::<f64>() * total) as u32;
        match self.state.compartment(node) {
            Compartment::E => {
                self.state.set_compartment(node, Compartment::I);
                self.state.log(node, Transition::Activated);
                self.refresh(node);
            }
            Compartment::I => {
                let u = self.epi_rng.random::<f64>() * self.tree.get(node as usize);
                if u < self.params.gamma {
                    self.state.set_compartment(node, Compartment::R);
                    self.state.log(node, Transition::Recovered);
                    self.refresh(node);
                } else if u < self.params.gamma + self.params.eta {
                    self.state.set_compartment(node, Compartment::H);
                    self.state.log(node, Transition::Hospitalized);
                    self.refresh(node);
                    self.day_hospitalizations += 1;
                    register_hospitalization(&mut self.state, self.net, self.plan, &mut self.int_rng, node);
                } else if self.sus_neighbors[node as usize] > 0 {
                    let target = self.pick_target(node);
                    self.last_infection_time = Some(self.state.time);
                    self.infect(target, node);
                }
            }
            _ => unreachable!("zero-rate node selected"),
        }
    }

    fn intervene(&mut self) -> (usize, TestOutcome) {
        let ctd = self.state.confirmed_unrecovered_count();
        let outcome = daily_step(&mut self.state, self.net, self.plan, &mut self.int_rng);
        let dirty = std::mem::take(&mut self.state.dirty);
        for node in dirty {
            match self.state.compartment(node) {
                Compartment::S => self.withdraw_susceptible(node),
                _ => self.refresh(node),
            }
        }
        (ctd, outcome)
    }

    fn close_day(&mut self, ctd: usize, outcome: TestOutcome) -> DailyRecord {
        let st = &self.state;
        let n = st.node_count();
        let record = DailyRecord {
            day: st.day(),
            s: st.count(Compartment::S),
            e: st.count(Compartment::E),
            i: st.count(Compartment::I),
            r: st.count(Compartment::R),
            h: st.count(Compartment::H),
            new_infections: self.day_infections,
            tests_used: outcome.tests_used,
            positives_found: outcome.positives,
            positive_rate: positive_rate(outcome.positives, outcome.tests_used, ctd, n),
            quarantined_cumulative: st.quarantined_cumulative(),
            ctd,
            rt_tests: outcome.tests_by_rt,
            rt_positives: outcome.positives_by_rt,
            hospitalizations: self.day_hospitalizations,
        };
        self.day_infections = 0;
        self.day_hospitalizations = 0;
        record
    }

    fn run(mut self, seeds: Option<&[u32]>) -> Trajectory {
        let seeds = match seeds {
            Some(s) => s.to_vec(),
            None => self.random_seeds(),
        };
        for node in seeds {
            self.infect(node, NO_NODE);
        }
        let mut daily = Vec::new();
        let mut boundary = 1.0;
        while !self.state.infected.is_empty() {
            let total = self.tree.total();
            let dt: f64 = Exp1.sample(&mut self.epi_rng);
            let t = self.state.time + dt / total;
            if t >= boundary {
                self.state.time = boundary;
                let (ctd, outcome) = self.intervene();
                daily.push(self.close_day(ctd, outcome));
                self.state.advance_day();
                boundary += 1.0;
                continue;
            }
            self.state.time = t;
            self.fire();
        }
        let ctd = self.state.confirmed_unrecovered_count();
        daily.push(self.close_day(ctd, TestOutcome::default()));
        self.finish(daily)
    }

    fn finish(self, daily: Vec<DailyRecord>) -> Trajectory {
        let state = self.state;
        let n = state.node_count();
        let infections: Vec<InfectionRecord> = state
            .infection_order
            .iter()
            .zip(&state.infection_times)
            .map(|(&node, &time)| InfectionRecord {
                node,
                time,
                infector: state.infector(node),
            })
            .collect();
        let mut secondary_counts = vec![0u32; infections.len()];
        for rec in &infections {
            if let Some(src) = rec.infector {
                let rank = state.infection_rank(src).expect("infector was infected") as usize;
                secondary_counts[rank] += 1;
            }
        }
        Trajectory {
            node_count: n,
            daily,
            final_infected_total: n - state.count(Compartment::S),
            days_to_end: self.last_infection_time.map_or(0, |t| t.floor() as u32),
            infections,
            secondary_counts,
            final_compartments: state.compartment,
            event_log: state.event_log,
            random_testing_recorded: self.plan.records_random_testing(),
        }
    }
}

/// Runs one epidemic to extinction under `plan`, interventions firing at
/// every integer day.
pub fn run_epidemic(
    net: &ContactNetwork,
    params: &EpidemicParams,
    plan: &InterventionPlan,
    seed: u64,
) -> Result<Trajectory> {
    if params.initial_infected > net.node_count() {
        return Err(Error::param(
            "I0",
            format!("{} exceeds node count {}", params.initial_infected, net.node_count()),
        ));
    }
    Ok(Engine::new(net, params, plan, seed).run(None))
}

/// As [`run_epidemic`], but starting from the given seed nodes instead of
/// `initial_infected` uniformly chosen ones.
pub fn run_epidemic_with_seeds(
    net: &ContactNetwork,
    params: &EpidemicParams,
    plan: &InterventionPlan,
    seed: u64,
    seeds: &[u32],
) -> Result<Trajectory> {
    let n = net.node_count();
    let mut seen = vec![false; n];
    for &v in seeds {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return Err(Error::param("seeds", format!("invalid or repeated seed node {v}")));
        }
    }
    Ok(Engine::new(net, params, plan, seed).run(Some(seeds)))
}
