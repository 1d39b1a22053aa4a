//! Continuous-time SIR/SEIR dynamics with daily interventions.

mod engine;
mod export;
mod params;
mod rate_tree;
mod state;

pub use engine::{
    run_epidemic, run_epidemic_with_seeds, secondary_infection_counts, transmitted_secondary_counts, DailyRecord, InfectionRecord, Trajectory,
};
pub use export::{
    infections_path, read_secondary_counts, read_trajectory_csv, write_infections_csv, write_trajectory_csv,
    INFECTION_COLUMNS, TRAJECTORY_COLUMNS,
};
pub use params::{hospitalization_rate, EpidemicParams, Model};
pub use state::{Compartment, Event, SimulationState, Transition};
