use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rand::seq::index;
use rand::Rng;

use super::plan::{InterventionPlan, Strategy};
use super::queue::{got_refill, priority_key, PriorityKey, PushOutcome};
use crate::epidemic::{Compartment, SimulationState};
use crate::netgen::ContactNetwork;
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TestOutcome {
    pub tests_used: usize,
    pub positives: usize,
    /// Tests spent on uniformly random selection (mixed share or fall-through).
    pub tests_by_rt: usize,
    pub positives_by_rt: usize,
    pub newly_quarantined: usize,
}

/// Eligible for a random test: not a confirmed case that is still infected,
/// not hospitalised, not already tested today.
fn rt_eligible(state: &SimulationState, node: u32) -> bool {
    let c = state.compartment(node);
    !(state.is_confirmed(node) && c.is_infected()) && c != Compartment::H && !state.was_tested_today(node)
}

/// Uniform sample without replacement of up to `budget` eligible nodes.
/// If fewer are eligible, all of them are returned.
pub fn select_random_tests(state: &SimulationState, budget: usize, rng: &mut SimRng) -> Vec<u32> {
    let n = state.node_count();
    if budget == 0 || n == 0 {
        return Vec::new();
    }
    // Rejection sampling is cheap while the pool is large relative to the budget.
    let mut chosen: Vec<u32> = Vec::with_capacity(budget.min(n));
    let mut seen: HashSet<u32> = HashSet::with_capacity(budget.min(n));
    let mut rejections = 0usize;
    let max_rejections = 8 * budget + 64;
    while chosen.len() < budget && rejections < max_rejections {
        let node = rng.random_range(0..n as u32);
        if rt_eligible(state, node) && seen.insert(node) {
            chosen.push(node);
        } else {
            rejections += 1;
        }
    }
    if chosen.len() < budget {
        let rest: Vec<u32> = (0..n as u32)
            .filter(|&v| rt_eligible(state, v) && !seen.contains(&v))
            .collect();
        let want = (budget - chosen.len()).min(rest.len());
        chosen.extend(index::sample(rng, rest.len(), want).into_iter().map(|i| rest[i]));
    }
    chosen
}

/// Heap of queue entries for the current day, keyed by strategy priority.
struct DayQueue {
    heap: BinaryHeap<Reverse<(PriorityKey, u32)>>,
    accepts_new: bool,
}

impl DayQueue {
    fn push(&mut self, state: &SimulationState, strategy: Strategy, node: u32) {
        if let Some(entry) = state.queue().get(node) {
            self.heap.push(Reverse((priority_key(&entry, strategy, state), node)));
        }
    }

    fn pop(&mut self, state: &SimulationState, strategy: Strategy) -> Option<u32> {
        while let Some(Reverse((key, node))) = self.heap.pop() {
            match state.queue().get(node) {
                Some(entry) if priority_key(&entry, strategy, state) == key => return Some(node),
                _ => continue,
            }
        }
        None
    }
}

/// Confirms a positive: quarantine with probability `P_q`, then trace each
/// unconfirmed neighbour with probability `P_c`.
fn confirm_positive(
    state: &mut SimulationState,
    net: &ContactNetwork,
    plan: &InterventionPlan,
    rng: &mut SimRng,
    node: u32,
    day_queue: Option<&mut DayQueue>,
) -> bool {
    state.mark_confirmed(node);
    let quarantined = plan.p_q > 0.0 && rng.random_bool(plan.p_q);
    if quarantined {
        state.quarantine(node);
    }
    trace_contacts(state, net, plan, rng, node, day_queue);
    quarantined
}

fn trace_contacts(
    state: &mut SimulationState,
    net: &ContactNetwork,
    plan: &InterventionPlan,
    rng: &mut SimRng,
    node: u32,
    mut day_queue: Option<&mut DayQueue>,
) {
    if plan.p_c <= 0.0 {
        return;
    }
    let day = state.day();
    for &contact in net.neighbors(node) {
        if state.is_confirmed(contact) || !rng.random_bool(plan.p_c) {
            continue;
        }
        let outcome = state.queue.push(contact, day, day);
        if outcome != PushOutcome::Unchanged {
            if let Some(dq) = day_queue.as_deref_mut() {
                if dq.accepts_new {
                    dq.push(state, plan.strategy, contact);
                }
            }
        }
    }
}

/// Hospitalisation confirms the node without a test and traces its
/// contacts. The node itself has already left the network through H.
pub fn register_hospitalization(
    state: &mut SimulationState,
    net: &ContactNetwork,
    plan: &InterventionPlan,
    rng: &mut SimRng,
    node: u32,
) {
    state.mark_confirmed(node);
    trace_contacts(state, net, plan, rng, node, None);
}

struct Tester<'a> {
    state: &'a mut SimulationState,
    net: &'a ContactNetwork,
    plan: &'a InterventionPlan,
    rng: &'a mut SimRng,
    outcome: TestOutcome,
}

impl Tester<'_> {
    fn run_test(&mut self, node: u32, random: bool, day_queue: Option<&mut DayQueue>) {
        self.state.mark_tested(node);
        self.state.queue.remove(node);
        self.outcome.tests_used += 1;
        if random {
            self.outcome.tests_by_rt += 1;
        }
        if self.state.compartment(node).is_infected() {
            self.outcome.positives += 1;
            if random {
                self.outcome.positives_by_rt += 1;
            }
            if confirm_positive(self.state, self.net, self.plan, self.rng, node, day_queue) {
                self.outcome.newly_quarantined += 1;
            }
        }
    }

    fn random_round(&mut self, budget: usize) {
        for node in select_random_tests(self.state, budget, self.rng) {
            self.run_test(node, true, None);
        }
    }

    fn remaining(&self) -> usize {
        self.plan.daily_tests - self.outcome.tests_used
    }

    fn queue_round(&mut self) {
        let strategy = self.plan.strategy;
        let mut day_queue = DayQueue {
            heap: BinaryHeap::new(),
            accepts_new: strategy != Strategy::Got,
        };
        let nodes = if strategy == Strategy::Got {
            got_refill(self.state)
        } else {
            self.state.queue.entries().into_iter().map(|e| e.node).collect()
        };
        for node in nodes {
            day_queue.push(self.state, strategy, node);
        }
        while self.remaining() > 0 {
            let Some(node) = day_queue.pop(self.state, strategy) else {
                break;
            };
            // Traced again after a negative test today: stays queued for tomorrow.
            if self.state.was_tested_today(node) {
                continue;
            }
            self.run_test(node, false, Some(&mut day_queue));
        }
    }
}

/// One day's testing under `plan`, at the state's current day.
///
/// The mixed random-testing share is spent first. Tracing strategies then
/// pop the queue in priority order; contacts traced from today's positives
/// join today's queue (except under the global oracle, whose queue is the
/// set of infected nodes). Budget left once the queue runs dry goes to
/// random testing.
pub fn daily_step(
    state: &mut SimulationState,
    net: &ContactNetwork,
    plan: &InterventionPlan,
    rng: &mut SimRng,
) -> TestOutcome {
    if plan.strategy == Strategy::None || plan.daily_tests == 0 {
        return TestOutcome::default();
    }
    let mut tester = Tester {
        state,
        net,
        plan,
        rng,
        outcome: TestOutcome::default(),
    };
    tester.random_round(plan.mixed_rt_share.min(plan.daily_tests));
    if plan.strategy.uses_queue() {
        tester.queue_round();
    }
    tester.random_round(tester.remaining());
    tester.outcome
}
