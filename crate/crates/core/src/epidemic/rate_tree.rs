/// Complete binary sum tree over per-node event rates.
///
/// Updates recompute parents from their children, so the root never
/// accumulates drift from repeated incremental adjustments.
#[derive(Debug, Clone)]
pub(crate) struct RateTree {
    leaves: usize,
    sums: Vec<f64>,
}

impl RateTree {
    pub(crate) fn new(n: usize) -> Self {
        let leaves = n.max(1).next_power_of_two();
        Self {
            leaves,
            sums: vec![0.0; 2 * leaves],
        }
    }

    pub(crate) fn total(&self) -> f64 {
        self.sums[1]
    }

    pub(crate) fn get(&self, i: usize) -> f64 {
        self.sums[self.leaves + i]
    }

    pub(crate) fn set(&mut self, i: usize, rate: f64) {
        let mut pos = self.leaves + i;
        if self.sums[pos] == rate {
            return;
        }
        self.sums[pos] = rate;
        while pos > 1 {
            pos /= 2;
            self.sums[pos] = self.sums[2 * pos] + self.sums[2 * pos + 1];
        }
    }

    /// Leaf whose cumulative interval contains `target`, for
    /// `0 <= target < total()`. Never returns a zero-rate leaf.
    pub(crate) fn find(&self, mut target: f64) -> usize {
        let mut pos = 1;
        while pos < self.leaves {
            let left = self.sums[2 * pos];
            let right = self.sums[2 * pos + 1];
            if left > 0.0 && (target < left || right <= 0.0) {
                pos *= 2;
            } else {
                target -= left;
                pos = 2 * pos + 1;
            }
        }
        pos - self.leaves
    }
}
