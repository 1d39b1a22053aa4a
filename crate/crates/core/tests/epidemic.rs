use tracesim::epidemic::*;
use tracesim::interventions::{InterventionPlan, Strategy};
use tracesim::netgen::*;

fn complete_graph(n: u32) -> ContactNetwork {
    let edges: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    ContactNetwork::from_edges(n as usize, NetworkKind::Superspreading, &edges).unwrap()
}

/// Final-size law of SIR on a complete graph, from the embedded jump chain
/// of the (S, I) Markov process. Index = number ever infected.
fn complete_graph_final_size(n: usize, i0: usize, beta: f64, gamma: f64) -> Vec<f64> {
    fn absorb(s: usize, i: usize, n: usize, beta: f64, gamma: f64, out: &mut [f64], weight: f64) {
        if i == 0 {
            out[n - s] += weight;
            return;
        }
        let infect = beta * (s * i) as f64;
        let recover = gamma * i as f64;
        let total = infect + recover;
        if s > 0 {
            absorb(s - 1, i + 1, n, beta, gamma, out, weight * infect / total);
        }
        absorb(s, i - 1, n, beta, gamma, out, weight * recover / total);
    }
    let mut out = vec![0.0; n + 1];
    absorb(n - i0, i0, n, beta, gamma, &mut out, 1.0);
    out
}

#[test]
fn three_node_oracle_values() {
    let law = complete_graph_final_size(3, 1, 1.0, 1.0);
    assert!(law[0].abs() < 1e-12);
    assert!((law[1] - 1.0 / 3.0).abs() < 1e-12);
    assert!((law[2] - 1.0 / 6.0).abs() < 1e-12);
    assert!((law[3] - 1.0 / 2.0).abs() < 1e-12);
}

#[test]
fn three_node_final_size_matches_markov_chain() {
    let net = complete_graph(3);
    let params = EpidemicParams::sir(1.0, 1.0, 0.0, 1).unwrap();
    let plan = InterventionPlan::none();
    let runs = 100_000;
    let mut hist = [0usize; 4];
    for seed in 0..runs {
        let traj = run_epidemic(&net, &params, &plan, seed).unwrap();
        hist[traj.final_infected_total] += 1;
    }
    let law = complete_graph_final_size(3, 1, 1.0, 1.0);
    let tv: f64 = (0..4).map(|k| (hist[k] as f64 / runs as f64 - law[k]).abs()).sum::<f64>() / 2.0;
    assert!(tv < 0.01, "total variation {tv}, hist {hist:?}, law {law:?}");
}

#[test]
fn no_seeds_ends_at_day_zero() {
    let net = complete_graph(5);
    let params = EpidemicParams::sir(3.0, 0.1, 0.0, 0).unwrap();
    let traj = run_epidemic(&net, &params, &InterventionPlan::none(), 1).unwrap();
    assert_eq!(traj.daily.len(), 1);
    assert_eq!(traj.final_infected_total, 0);
    assert_eq!(traj.days_to_end, 0);
    assert!(traj.infections.is_empty());
}

#[test]
fn too_many_seeds_is_an_error() {
    let net = complete_graph(3);
    let params = EpidemicParams::sir(1.0, 1.0, 0.0, 4).unwrap();
    assert!(run_epidemic(&net, &params, &InterventionPlan::none(), 1).is_err());
    let params = EpidemicParams::sir(1.0, 1.0, 0.0, 1).unwrap();
    assert!(run_epidemic_with_seeds(&net, &params, &InterventionPlan::none(), 1, &[0, 0]).is_err());
}

fn sample_network(n: usize, seed: u64) -> ContactNetwork {
    let dist = derive_degree_distribution(0.3, 2.5, 0.6, 0.05, DEFAULT_TAIL_MASS).unwrap();
    generate_superspreading_network(&dist, n, seed).unwrap()
}

#[test]
fn runs_are_deterministic() {
    let net = sample_network(3_000, 2);
    let params = EpidemicParams::seir(0.6, 0.05, 0.2, 0.05, 10).unwrap();
    let plan = InterventionPlan::new(Strategy::Bct, 30, 1.0, 1.0, true).unwrap();
    let a = run_epidemic(&net, &params, &plan, 77).unwrap();
    let b = run_epidemic(&net, &params, &plan, 77).unwrap();
    assert_eq!(a.daily, b.daily);
    assert_eq!(a.infections, b.infections);
    assert_eq!(a.event_log, b.event_log);
    let c = run_epidemic(&net, &params, &plan, 78).unwrap();
    assert_ne!(a.infections, c.infections);
}

/// Replays the event log and checks every structural invariant of a run.
fn check_event_log(net: &ContactNetwork, params: &EpidemicParams, traj: &Trajectory) {
    let n = net.node_count();
    let mut comp = vec![Compartment::S; n];
    let mut active = vec![true; n];
    let mut infected_by: Vec<Option<Option<u32>>> = vec![None; n];
    let mut last_time = 0.0;
    for ev in &traj.event_log {
        assert!(ev.time >= last_time, "log out of order");
        last_time = ev.time;
        let v = ev.node as usize;
        match ev.transition {
            Transition::Seeded => {
                assert_eq!(ev.time, 0.0);
                assert_eq!(comp[v], Compartment::S);
                assert!(infected_by[v].is_none());
                infected_by[v] = Some(None);
                comp[v] = Compartment::I;
            }
            Transition::Infected { source } => {
                let s = source as usize;
                assert_eq!(comp[v], Compartment::S, "reinfection of {v}");
                assert!(active[v], "quarantined node {v} infected");
                assert_eq!(comp[s], Compartment::I, "source {s} not infectious");
                assert!(active[s], "quarantined source {s} transmitted");
                assert!(net.has_edge(source, ev.node));
                assert!(infected_by[v].is_none(), "infector set twice");
                infected_by[v] = Some(Some(source));
                comp[v] = match params.model {
                    Model::Sir => Compartment::I,
                    Model::Seir => Compartment::E,
                };
            }
            Transition::Activated => {
                assert_eq!(comp[v], Compartment::E);
                comp[v] = Compartment::I;
            }
            Transition::Recovered => {
                assert_eq!(comp[v], Compartment::I);
                comp[v] = Compartment::R;
            }
            Transition::Hospitalized => {
                assert_eq!(comp[v], Compartment::I);
                comp[v] = Compartment::H;
            }
            Transition::Quarantined => {
                assert_eq!(ev.time.fract(), 0.0, "quarantine off a day boundary");
                assert!(active[v]);
                active[v] = false;
            }
        }
    }
    assert_eq!(comp, traj.final_compartments);
    assert!(comp.iter().all(|c| !c.is_infected()));
    let ever = comp.iter().filter(|&&c| c != Compartment::S).count();
    assert_eq!(ever, traj.final_infected_total);
    assert_eq!(traj.infections.len(), traj.final_infected_total);
    for rec in &traj.infections {
        assert_eq!(infected_by[rec.node as usize], Some(rec.infector));
    }
    let new_total: usize = traj.daily.iter().map(|d| d.new_infections).sum();
    assert_eq!(new_total, traj.final_infected_total);
    for (i, d) in traj.daily.iter().enumerate() {
        assert_eq!(d.day as usize, i);
        assert_eq!(d.s + d.e + d.i + d.r + d.h, n);
    }
    let last = traj.infections.iter().filter(|r| r.infector.is_some()).map(|r| r.time).fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.max(t))));
    assert_eq!(traj.days_to_end, last.map_or(0, |t| t.floor() as u32));
}

#[test]
fn event_logs_respect_invariants() {
    let net = sample_network(4_000, 5);
    let cases = [
        (EpidemicParams::sir(0.6, 0.05, 0.05, 10).unwrap(), Strategy::Fct),
        (EpidemicParams::sir(1.0, 0.25, 0.0, 10).unwrap(), Strategy::None),
        (EpidemicParams::seir(0.6, 0.05, 0.2, 0.05, 10).unwrap(), Strategy::Got),
        (EpidemicParams::seir(0.6, 0.1, 0.2, 0.2, 10).unwrap(), Strategy::Cto),
        (EpidemicParams::sir(0.6, 0.05, 0.05, 10).unwrap(), Strategy::Rt),
    ];
    for (params, strategy) in cases {
        let plan = InterventionPlan::new(strategy, 40, 1.0, 0.8, false).unwrap();
        for seed in 0..5 {
            let traj = run_epidemic(&net, &params, &plan, seed).unwrap();
            check_event_log(&net, &params, &traj);
        }
    }
}

#[test]
fn gamma_infectiousness_runs_use_node_rates() {
    let net = generate_gamma_infectiousness_network(0.2, 2.5, 0.6, 0.05, 3_000, 4).unwrap();
    let params = EpidemicParams::sir(0.6, 0.05, 0.0, 10).unwrap();
    for seed in 0..5 {
        let traj = run_epidemic(&net, &params, &InterventionPlan::none(), seed).unwrap();
        check_event_log(&net, &params, &traj);
        // A node whose own rate is zero can never transmit.
        let rates = net.infection_rates().unwrap();
        for rec in &traj.infections {
            if let Some(src) = rec.infector {
                assert!(rates[src as usize] > 0.0);
            }
        }
    }
}

#[test]
fn star_hub_infects_nearly_every_leaf() {
    let leaves = 50u32;
    let edges: Vec<(u32, u32)> = (1..=leaves).map(|v| (0, v)).collect();
    let net = ContactNetwork::from_edges(leaves as usize + 1, NetworkKind::Superspreading, &edges).unwrap();
    let params = EpidemicParams::sir(100.0, 0.01, 0.0, 1).unwrap();
    let traj = run_epidemic_with_seeds(&net, &params, &InterventionPlan::none(), 3, &[0]).unwrap();
    let counts = secondary_infection_counts(&traj, 100).unwrap();
    assert_eq!(traj.infections[0].node, 0);
    assert!(counts[0] >= leaves - 1, "hub infected {}", counts[0]);
    assert!(counts[1..].iter().all(|&c| c == 0));
}

#[test]
fn immediate_die_out_gives_zero_counts() {
    // No edges: seeds can only recover.
    let net = ContactNetwork::from_edges(20, NetworkKind::Superspreading, &[]).unwrap();
    let params = EpidemicParams::sir(1.0, 1.0, 0.0, 10).unwrap();
    let traj = run_epidemic(&net, &params, &InterventionPlan::none(), 0).unwrap();
    assert_eq!(secondary_infection_counts(&traj, 100).unwrap(), vec![0; 10]);
    assert!(transmitted_secondary_counts(&traj, 100).unwrap().is_empty());
    assert_eq!(traj.days_to_end, 0);
    assert!(secondary_infection_counts(&traj, 0).is_err());
}

#[test]
fn secondary_counts_follow_infection_order() {
    let net = sample_network(3_000, 8);
    let params = EpidemicParams::sir(0.6, 0.05, 0.0, 10).unwrap();
    let traj = run_epidemic(&net, &params, &InterventionPlan::none(), 4).unwrap();
    let all = secondary_infection_counts(&traj, usize::MAX).unwrap();
    assert_eq!(all.len(), traj.final_infected_total);
    assert_eq!(all.iter().map(|&c| c as usize).sum::<usize>(), traj.final_infected_total - 10);
    assert_eq!(secondary_infection_counts(&traj, 100).unwrap(), all[..100.min(all.len())]);
    let transmitted = transmitted_secondary_counts(&traj, 100).unwrap();
    assert_eq!(transmitted, all[10..(110).min(all.len())]);
}

#[test]
fn seir_seeds_start_infectious() {
    let net = complete_graph(10);
    let params = EpidemicParams::seir(1.0, 0.5, 0.2, 0.0, 2).unwrap();
    let traj = run_epidemic(&net, &params, &InterventionPlan::none(), 9).unwrap();
    let seeded: Vec<_> = traj
        .event_log
        .iter()
        .filter(|e| e.transition == Transition::Seeded)
        .collect();
    assert_eq!(seeded.len(), 2);
    // Seeds never pass through E, so they are never activated.
    for e in seeded {
        assert!(!traj
            .event_log
            .iter()
            .any(|x| x.node == e.node && x.transition == Transition::Activated));
    }
}

#[test]
fn hospitalisation_share_matches_p_h() {
    let net = ContactNetwork::from_edges(20_000, NetworkKind::Superspreading, &[]).unwrap();
    let params = EpidemicParams::sir(1.0, 0.25, 0.2, 20_000).unwrap();
    let traj = run_epidemic(&net, &params, &InterventionPlan::none(), 1).unwrap();
    let h = traj.final_compartments.iter().filter(|&&c| c == Compartment::H).count() as f64 / 20_000.0;
    assert!((h - 0.2).abs() < 0.01, "{h}");
}

#[test]
fn trajectory_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let net = sample_network(2_000, 1);
    let params = EpidemicParams::sir(0.6, 0.05, 0.05, 10).unwrap();
    let plan = InterventionPlan::new(Strategy::Fct, 20, 1.0, 1.0, true).unwrap();
    let traj = run_epidemic(&net, &params, &plan, 3).unwrap();
    let path = dir.path().join("run.csv");
    write_trajectory_csv(&path, &traj).unwrap();
    write_infections_csv(&infections_path(&path), &traj).unwrap();
    assert_eq!(read_trajectory_csv(&path).unwrap(), traj.daily);
    let header = std::fs::read_to_string(&path).unwrap();
    let header = header.lines().next().unwrap();
    assert!(header.starts_with(
        "day,S,E,I,R,H,new_infections,tests_used,positives_found,positive_rate,quarantined_cumulative,threat_level_actual"
    ));
    let log = infections_path(&path);
    assert_eq!(log.file_name().unwrap(), "run.infections.csv");
    assert_eq!(read_secondary_counts(&log, true).unwrap(), traj.secondary_counts);
    assert_eq!(
        read_secondary_counts(&log, false).unwrap(),
        transmitted_secondary_counts(&traj, usize::MAX).unwrap()
    );
}
