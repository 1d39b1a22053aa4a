use crate::interventions::TracingQueue;

pub(crate) const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Compartment {
    S,
    E,
    I,
    R,
    H,
}

impl Compartment {
    pub const ALL: [Compartment; 5] = [
        Compartment::S,
        Compartment::E,
        Compartment::I,
        Compartment::R,
        Compartment::H,
    ];

    /// E and I test positive.
    pub fn is_infected(self) -> bool {
        matches!(self, Compartment::E | Compartment::I)
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    Seeded,
    Infected { source: u32 },
    Activated,
    Recovered,
    Hospitalized,
    Quarantined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub node: u32,
    pub transition: Transition,
}

/// Unordered set of node ids with O(1) insert and remove.
#[derive(Debug, Clone, Default)]
pub(crate) struct NodeSet {
    members: Vec<u32>,
    position: Vec<u32>,
}

impl NodeSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            members: Vec::new(),
            position: vec![NO_NODE; n],
        }
    }

    pub(crate) fn insert(&mut self, node: u32) {
        if self.position[node as usize] == NO_NODE {
            self.position[node as usize] = self.members.len() as u32;
            self.members.push(node);
        }
    }

    pub(crate) fn remove(&mut self, node: u32) {
        let pos = self.position[node as usize];
        if pos == NO_NODE {
            return;
        }
        let last = self.members.pop().unwrap();
        if last != node {
            self.members[pos as usize] = last;
            self.position[last as usize] = pos;
        }
        self.position[node as usize] = NO_NODE;
    }

    pub(crate) fn as_slice(&self) -> &[u32] {
        &self.members
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Per-run mutable state shared by the event engine and the daily
/// intervention step.
#[derive(Debug, Clone)]
pub struct SimulationState {
    pub(crate) compartment: Vec<Compartment>,
    pub(crate) active: Vec<bool>,
    pub(crate) confirmed: Vec<bool>,
    pub(crate) confirmed_unrecovered: usize,
    pub(crate) day: u32,
    pub(crate) time: f64,
    pub(crate) infector: Vec<u32>,
    /// Position of each node in infection order, `NO_NODE` if never infected.
    pub(crate) infection_rank: Vec<u32>,
    pub(crate) infection_order: Vec<u32>,
    pub(crate) infection_times: Vec<f64>,
    pub(crate) infected: NodeSet,
    pub(crate) queue: TracingQueue,
    /// `day + 1` of the last test a node received; 0 if never tested.
    pub(crate) tested_stamp: Vec<u32>,
    /// Nodes whose rates must be recomputed after the intervention step.
    pub(crate) dirty: Vec<u32>,
    pub(crate) counts: [usize; 5],
    pub(crate) quarantined_cumulative: usize,
    pub(crate) event_log: Vec<Event>,
}

impl SimulationState {
    /// All nodes susceptible and active at day 0.
    pub fn new(node_count: usize) -> Self {
        let mut counts = [0; 5];
        counts[Compartment::S.index()] = node_count;
        Self {
            compartment: vec![Compartment::S; node_count],
            active: vec![true; node_count],
            confirmed: vec![false; node_count],
            confirmed_unrecovered: 0,
            day: 0,
            time: 0.0,
            infector: vec![NO_NODE; node_count],
            infection_rank: vec![NO_NODE; node_count],
            infection_order: Vec::new(),
            infection_times: Vec::new(),
            infected: NodeSet::new(node_count),
            queue: TracingQueue::new(node_count),
            tested_stamp: vec![0; node_count],
            dirty: Vec::new(),
            counts,
            quarantined_cumulative: 0,
            event_log: Vec::new(),
        }
    }

    /// A snapshot with the given compartments. Infected nodes are entered
    /// in infection order by ascending node id; no infector is recorded.
    pub fn from_compartments(compartments: &[Compartment]) -> Self {
        let mut state = Self::new(compartments.len());
        for (node, &c) in compartments.iter().enumerate() {
            if c != Compartment::S {
                if c.is_infected() || c == Compartment::R || c == Compartment::H {
                    state.record_infection(node as u32, NO_NODE);
                }
                state.set_compartment(node as u32, c);
            }
        }
        state
    }

    pub fn node_count(&self) -> usize {
        self.compartment.len()
    }

    pub fn compartment(&self, node: u32) -> Compartment {
        self.compartment[node as usize]
    }

    pub fn is_active(&self, node: u32) -> bool {
        self.active[node as usize]
    }

    pub fn is_confirmed(&self, node: u32) -> bool {
        self.confirmed[node as usize]
    }

    /// Confirmed nodes still in E or I.
    pub fn confirmed_unrecovered_count(&self) -> usize {
        self.confirmed_unrecovered
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn count(&self, c: Compartment) -> usize {
        self.counts[c.index()]
    }

    pub fn infector(&self, node: u32) -> Option<u32> {
        match self.infector[node as usize] {
            NO_NODE => None,
            v => Some(v),
        }
    }

    pub fn queue(&self) -> &TracingQueue {
        &self.queue
    }

    pub fn quarantined_cumulative(&self) -> usize {
        self.quarantined_cumulative
    }

    pub fn event_log(&self) -> &[Event] {
        &self.event_log
    }

    /// Nodes currently in E or I, in no particular order.
    pub fn currently_infected(&self) -> &[u32] {
        self.infected.as_slice()
    }

    /// Infection order rank (0 = first infected).
    pub fn infection_rank(&self, node: u32) -> Option<u32> {
        match self.infection_rank[node as usize] {
            NO_NODE => None,
            r => Some(r),
        }
    }

    pub(crate) fn record_infection(&mut self, node: u32, source: u32) {
        debug_assert_eq!(self.infection_rank[node as usize], NO_NODE);
        self.infector[node as usize] = source;
        self.infection_rank[node as usize] = self.infection_order.len() as u32;
        self.infection_order.push(node);
        self.infection_times.push(self.time);
    }

    pub(crate) fn set_compartment(&mut self, node: u32, next: Compartment) {
        let prev = self.compartment[node as usize];
        if prev == next {
            return;
        }
        self.counts[prev.index()] -= 1;
        self.counts[next.index()] += 1;
        self.compartment[node as usize] = next;
        if self.confirmed[node as usize] && prev.is_infected() && !next.is_infected() {
            self.confirmed_unrecovered -= 1;
        }
        if next.is_infected() {
            self.infected.insert(node);
        } else {
            self.infected.remove(node);
        }
    }

    /// Marks a node as a known positive and drops it from the tracing queue.
    pub fn mark_confirmed(&mut self, node: u32) {
        if self.confirmed[node as usize] {
            return;
        }
        self.confirmed[node as usize] = true;
        if self.compartment[node as usize].is_infected() {
            self.confirmed_unrecovered += 1;
        }
        self.queue.remove(node);
    }

    /// Moves the clock to the next day; today's test marks expire.
    pub fn advance_day(&mut self) {
        self.day += 1;
    }

    pub(crate) fn quarantine(&mut self, node: u32) {
        if !self.active[node as usize] {
            return;
        }
        self.active[node as usize] = false;
        self.quarantined_cumulative += 1;
        self.dirty.push(node);
        self.log(node, Transition::Quarantined);
    }

    pub(crate) fn log(&mut self, node: u32, transition: Transition) {
        self.event_log.push(Event {
            time: self.time,
            node,
            transition,
        });
    }

    pub(crate) fn was_tested_today(&self, node: u32) -> bool {
        self.tested_stamp[node as usize] == self.day + 1
    }

    pub(crate) fn mark_tested(&mut self, node: u32) {
        self.tested_stamp[node as usize] = self.day + 1;
    }
}
