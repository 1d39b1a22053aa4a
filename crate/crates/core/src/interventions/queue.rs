use std::cmp::Reverse;

use super::plan::Strategy;
use crate::epidemic::SimulationState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueueEntry {
    pub node: u32,
    pub enqueue_day: u32,
    /// Day the most recent positive that implicated this node was confirmed.
    pub source_positive_day: u32,
    /// Insertion sequence number; FIFO order.
    pub seq: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushOutcome {
    Added,
    /// Already queued; a newer source moved it forward under backward tracing.
    Reprioritized,
    Unchanged,
}

/// Nodes awaiting a test, at most once each.
#[derive(Debug, Clone)]
pub struct TracingQueue {
    slots: Vec<Option<QueueEntry>>,
    members: Vec<u32>,
    listed: Vec<bool>,
    len: usize,
    next_seq: u64,
}

impl TracingQueue {
    pub fn new(node_count: usize) -> Self {
        Self {
            slots: vec![None; node_count],
            members: Vec::new(),
            listed: vec![false; node_count],
            len: 0,
            next_seq: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, node: u32) -> bool {
        self.slots[node as usize].is_some()
    }

    pub fn get(&self, node: u32) -> Option<QueueEntry> {
        self.slots[node as usize]
    }

    pub fn push(&mut self, node: u32, day: u32, source_positive_day: u32) -> PushOutcome {
        let slot = &mut self.slots[node as usize];
        if let Some(entry) = slot {
            if source_positive_day > entry.source_positive_day {
                entry.source_positive_day = source_positive_day;
                return PushOutcome::Reprioritized;
            }
            return PushOutcome::Unchanged;
        }
        *slot = Some(QueueEntry {
            node,
            enqueue_day: day,
            source_positive_day,
            seq: self.next_seq,
        });
        self.next_seq += 1;
        self.len += 1;
        if !self.listed[node as usize] {
            self.listed[node as usize] = true;
            self.members.push(node);
        }
        PushOutcome::Added
    }

    pub fn remove(&mut self, node: u32) -> Option<QueueEntry> {
        let entry = self.slots[node as usize].take();
        if entry.is_some() {
            self.len -= 1;
        }
        entry
    }

    pub fn clear(&mut self) {
        for &node in &self.members {
            self.slots[node as usize] = None;
            self.listed[node as usize] = false;
        }
        self.members.clear();
        self.len = 0;
    }

    /// Live entries in FIFO order. Compacts stale bookkeeping.
    pub fn entries(&mut self) -> Vec<QueueEntry> {
        let slots = &self.slots;
        let listed = &mut self.listed;
        self.members.retain(|&node| {
            let live = slots[node as usize].is_some();
            if !live {
                listed[node as usize] = false;
            }
            live
        });
        let mut out: Vec<QueueEntry> = self
            .members
            .iter()
            .filter_map(|&node| self.slots[node as usize])
            .collect();
        out.sort_unstable_by_key(|e| e.seq);
        out
    }
}

/// Sort key: smaller is tested earlier.
pub(crate) type PriorityKey = (u8, Reverse<u32>, u64);

pub(crate) fn priority_key(entry: &QueueEntry, strategy: Strategy, state: &SimulationState) -> PriorityKey {
    match strategy {
        Strategy::Bct => (0, Reverse(entry.source_positive_day), entry.seq),
        Strategy::Cto => {
            let tier = if state.compartment(entry.node).is_infected() { 0 } else { 1 };
            (tier, Reverse(0), entry.seq)
        }
        Strategy::None | Strategy::Rt | Strategy::Fct | Strategy::Got => (0, Reverse(0), entry.seq),
    }
}

/// Visit order of the queue under a tracing strategy.
///
/// FCT is FIFO; BCT serves contacts of the most recently confirmed
/// positives first, FIFO within a day; CTO serves truly infected entries
/// first, FIFO within each tier.
pub fn order_queue(queue: &mut TracingQueue, strategy: Strategy, state: &SimulationState) -> Vec<u32> {
    let mut entries = queue.entries();
    entries.sort_by_key(|e| priority_key(e, strategy, state));
    entries.into_iter().map(|e| e.node).collect()
}

/// Replaces the queue with every currently infected, unconfirmed, active
/// node, in order of infection.
pub fn got_refill(state: &mut SimulationState) -> Vec<u32> {
    let mut targets: Vec<u32> = state
        .currently_infected()
        .iter()
        .copied()
        .filter(|&n| !state.is_confirmed(n) && state.is_active(n))
        .collect();
    targets.sort_unstable_by_key(|&n| state.infection_rank(n));
    let day = state.day();
    state.queue.clear();
    for &node in &targets {
        state.queue.push(node, day, day);
    }
    targets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epidemic::Compartment;

    #[test]
    fn no_duplicates_and_reprioritisation() {
        let mut q = TracingQueue::new(4);
        assert_eq!(q.push(1, 0, 0), PushOutcome::Added);
        assert_eq!(q.push(1, 1, 0), PushOutcome::Unchanged);
        assert_eq!(q.push(1, 2, 2), PushOutcome::Reprioritized);
        assert_eq!(q.len(), 1);
        assert_eq!(q.get(1).unwrap().source_positive_day, 2);
        assert_eq!(q.get(1).unwrap().enqueue_day, 0);
        q.remove(1);
        assert!(q.is_empty());
        assert_eq!(q.push(1, 3, 3), PushOutcome::Added);
        assert_eq!(q.entries().len(), 1);
    }

    #[test]
    fn fct_is_fifo() {
        let state = SimulationState::new(3);
        let mut q = TracingQueue::new(3);
        q.push(2, 0, 0);
        q.push(0, 0, 0);
        q.push(1, 0, 0);
        assert_eq!(order_queue(&mut q, Strategy::Fct, &state), vec![2, 0, 1]);
    }

    #[test]
    fn bct_prefers_recent_sources() {
        let state = SimulationState::new(3);
        let mut q = TracingQueue::new(3);
        q.push(0, 1, 1);
        q.push(1, 3, 3);
        q.push(2, 2, 2);
        assert_eq!(order_queue(&mut q, Strategy::Bct, &state), vec![1, 2, 0]);
    }

    #[test]
    fn cto_puts_infected_first() {
        let state = SimulationState::from_compartments(&[Compartment::S, Compartment::I, Compartment::S]);
        let mut q = TracingQueue::new(3);
        q.push(0, 0, 0);
        q.push(1, 0, 0);
        q.push(2, 0, 0);
        assert_eq!(order_queue(&mut q, Strategy::Cto, &state), vec![1, 0, 2]);
    }

    #[test]
    fn got_refill_with_no_infected_empties_queue() {
        let mut state = SimulationState::new(3);
        state.queue.push(1, 0, 0);
        assert!(got_refill(&mut state).is_empty());
        assert!(state.queue().is_empty());
    }
}
