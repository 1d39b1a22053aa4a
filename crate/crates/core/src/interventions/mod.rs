//! Daily budget-limited testing and contact tracing.

mod plan;
mod queue;
mod step;

pub use plan::{mixed_rt_share, InterventionPlan, Strategy};
pub use queue::{got_refill, order_queue, PushOutcome, QueueEntry, TracingQueue};
pub use step::{daily_step, register_hospitalization, select_random_tests, TestOutcome};
