use tracesim::epidemic::*;
use tracesim::interventions::*;
use tracesim::netgen::*;
use tracesim::rng::{stream, STREAM_INTERVENTION};

/// Two hospitalised cases, 0 and 1. Node 0 touched 2 (I), 3 (S), 4 (I);
/// node 1 touched 5 (S), 6 (S), 7 (I). Nodes 8 and 9 are infected but
/// untraceable; 10..32 are susceptible bystanders.
fn toy() -> (ContactNetwork, SimulationState) {
    let edges = [(0, 2), (0, 3), (0, 4), (1, 5), (1, 6), (1, 7)];
    let net = ContactNetwork::from_edges(32, NetworkKind::Superspreading, &edges).unwrap();
    let mut comps = vec![Compartment::S; 32];
    comps[0] = Compartment::H;
    comps[1] = Compartment::H;
    for v in [2, 4, 7, 8, 9] {
        comps[v] = Compartment::I;
    }
    (net, SimulationState::from_compartments(&comps))
}

fn toy_positives(strategy: Strategy, budget: usize, seed: u64) -> TestOutcome {
    let (net, mut state) = toy();
    let plan = InterventionPlan::new(strategy, budget, 1.0, 1.0, false).unwrap();
    let mut rng = stream(seed, STREAM_INTERVENTION);
    register_hospitalization(&mut state, &net, &plan, &mut rng, 0);
    register_hospitalization(&mut state, &net, &plan, &mut rng, 1);
    assert_eq!(state.queue().len(), 6);
    daily_step(&mut state, &net, &plan, &mut rng)
}

#[test]
fn toy_example_positives_per_strategy() {
    for (budget, fct, cto, got) in [(6, 3, 3, 5), (5, 2, 3, 5)] {
        for seed in 0..20 {
            assert_eq!(toy_positives(Strategy::Fct, budget, seed).positives, fct);
            assert_eq!(toy_positives(Strategy::Bct, budget, seed).positives, fct);
            assert_eq!(toy_positives(Strategy::Cto, budget, seed).positives, cto);
            assert_eq!(toy_positives(Strategy::Got, budget, seed).positives, got);
        }
    }
}

#[test]
fn toy_example_random_testing_expectation() {
    // 30 eligible nodes (the two hospitalised are excluded), 5 infected.
    for budget in [5usize, 6] {
        let reps = 20_000;
        let total: usize = (0..reps).map(|s| toy_positives(Strategy::Rt, budget, s).positives).sum();
        let mean = total as f64 / reps as f64;
        let expected = budget as f64 * 5.0 / 30.0;
        // Hypergeometric sd for one draw is below 0.8; 5 standard errors.
        assert!((mean - expected).abs() < 5.0 * 0.8 / (reps as f64).sqrt(), "{mean} vs {expected}");
    }
}

#[test]
fn toy_example_tests_used_and_quarantine() {
    let out = toy_positives(Strategy::Fct, 6, 1);
    assert_eq!(out.tests_used, 6);
    assert_eq!(out.tests_by_rt, 0);
    assert_eq!(out.newly_quarantined, 3);
    let got = toy_positives(Strategy::Got, 6, 1);
    assert_eq!(got.tests_used, 6);
    // Five queue tests, then one leftover random test among negatives.
    assert_eq!(got.tests_by_rt, 1);
    assert_eq!(got.positives_by_rt, 0);
}

#[test]
fn random_selection_is_uniform_over_eligible_nodes() {
    let n = 100_000usize;
    let mut comps = vec![Compartment::S; n];
    for v in comps.iter_mut().take(500) {
        *v = Compartment::I;
    }
    let mut state = SimulationState::from_compartments(&comps);
    for v in 0..500 {
        state.mark_confirmed(v);
    }
    let budget = 1000;
    let repeats = 10_000;
    let mut rng = stream(11, STREAM_INTERVENTION);
    let mut hits = vec![0u32; n];
    for _ in 0..repeats {
        let picks = select_random_tests(&state, budget, &mut rng);
        assert_eq!(picks.len(), budget);
        for &v in &picks {
            hits[v as usize] += 1;
        }
    }
    assert!(hits[..500].iter().all(|&h| h == 0), "confirmed infected node sampled");
    let eligible = (n - 500) as f64;
    let p = budget as f64 / eligible;
    let expected = repeats as f64 * p;
    let var = repeats as f64 * p * (1.0 - p);
    let chi2: f64 = hits[500..].iter().map(|&h| (h as f64 - expected).powi(2) / var).sum();
    let df = eligible - 1.0;
    let z = (chi2 - df) / (2.0 * df).sqrt();
    assert!(z.abs() < 4.0, "chi-square z = {z}");
}

#[test]
fn random_selection_without_replacement_and_small_pools() {
    let mut comps = vec![Compartment::S; 10];
    comps[0] = Compartment::H;
    comps[1] = Compartment::I;
    let mut state = SimulationState::from_compartments(&comps);
    state.mark_confirmed(1);
    let mut rng = stream(3, STREAM_INTERVENTION);
    for _ in 0..100 {
        let mut picks = select_random_tests(&state, 50, &mut rng);
        picks.sort_unstable();
        assert_eq!(picks, (2..10).collect::<Vec<u32>>());
        let few = select_random_tests(&state, 3, &mut rng);
        let mut uniq = few.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), 3);
    }
    assert!(select_random_tests(&state, 0, &mut rng).is_empty());
}

#[test]
fn retraced_node_is_kept_for_tomorrow() {
    // h is hospitalised with contacts a (S) and b (I); b also touched a.
    let (h, a, b) = (0u32, 1u32, 2u32);
    let net = ContactNetwork::from_edges(12, NetworkKind::Superspreading, &[(h, a), (h, b), (a, b)]).unwrap();
    let mut comps = vec![Compartment::S; 12];
    comps[h as usize] = Compartment::H;
    comps[b as usize] = Compartment::I;
    let mut state = SimulationState::from_compartments(&comps);
    let plan = InterventionPlan::new(Strategy::Fct, 4, 1.0, 1.0, false).unwrap();
    let mut rng = stream(5, STREAM_INTERVENTION);
    register_hospitalization(&mut state, &net, &plan, &mut rng, h);
    let out = daily_step(&mut state, &net, &plan, &mut rng);
    assert_eq!(out.tests_used, 4);
    assert_eq!(out.positives, 1);
    assert_eq!(out.tests_by_rt, 2);
    assert!(state.queue().contains(a), "re-traced negative dropped");
    assert!(!state.queue().contains(b));
    assert!(state.is_confirmed(b));
    assert!(!state.is_active(b));
    // Next day the queued node is tested first.
    state.advance_day();
    let plan = InterventionPlan::new(Strategy::Fct, 1, 1.0, 1.0, false).unwrap();
    let out = daily_step(&mut state, &net, &plan, &mut rng);
    assert_eq!((out.tests_used, out.tests_by_rt), (1, 0));
    assert!(state.queue().is_empty());
}

#[test]
fn queue_never_holds_confirmed_nodes() {
    let dist = derive_degree_distribution(0.1, 2.5, 0.6, 0.05, DEFAULT_TAIL_MASS).unwrap();
    let net = generate_superspreading_network(&dist, 2_000, 3).unwrap();
    let mut comps = vec![Compartment::S; 2_000];
    for v in (0..2_000).step_by(7) {
        comps[v] = Compartment::I;
    }
    let mut state = SimulationState::from_compartments(&comps);
    for strategy in [Strategy::Fct, Strategy::Bct, Strategy::Cto, Strategy::Rt] {
        let plan = InterventionPlan::new(strategy, 25, 1.0, 0.5, true).unwrap();
        let mut rng = stream(9, STREAM_INTERVENTION);
        for _ in 0..10 {
            let out = daily_step(&mut state, &net, &plan, &mut rng);
            assert!(out.tests_used <= 25);
            assert!(out.tests_by_rt >= plan.mixed_rt_share);
            let mut q = state.queue().clone();
            for e in q.entries() {
                assert!(!state.is_confirmed(e.node));
            }
            state.advance_day();
        }
    }
}

#[test]
fn mixed_share_examples() {
    assert_eq!(mixed_rt_share(0), 0);
    assert_eq!(mixed_rt_share(9), 0);
    assert_eq!(mixed_rt_share(10), 5);
    assert_eq!(mixed_rt_share(100), 50);
    assert_eq!(mixed_rt_share(1000), 100);
    assert!(InterventionPlan::with_share(Strategy::Fct, 5, 1.0, 1.0, 6).is_err());
    assert!(InterventionPlan::new(Strategy::Fct, 5, 1.5, 1.0, false).is_err());
}

#[test]
fn order_queue_examples() {
    let state = SimulationState::from_compartments(&[Compartment::S, Compartment::I, Compartment::S, Compartment::I]);
    let mut q = TracingQueue::new(4);
    q.push(0, 0, 0);
    q.push(1, 0, 0);
    q.push(2, 1, 1);
    q.push(3, 1, 1);
    assert_eq!(order_queue(&mut q.clone(), Strategy::Fct, &state), vec![0, 1, 2, 3]);
    assert_eq!(order_queue(&mut q.clone(), Strategy::Bct, &state), vec![2, 3, 0, 1]);
    assert_eq!(order_queue(&mut q.clone(), Strategy::Cto, &state), vec![1, 3, 0, 2]);
    // A newer positive pulls an old entry forward under backward tracing.
    assert_eq!(q.push(0, 2, 2), PushOutcome::Reprioritized);
    assert_eq!(order_queue(&mut q, Strategy::Bct, &state), vec![0, 2, 3, 1]);
}

fn sample_network(n: usize, seed: u64) -> ContactNetwork {
    let dist = derive_degree_distribution(0.1, 2.5, 0.6, 0.05, DEFAULT_TAIL_MASS).unwrap();
    generate_superspreading_network(&dist, n, seed).unwrap()
}

#[test]
fn daily_budget_is_spent_exactly() {
    let net = sample_network(5_000, 1);
    let params = EpidemicParams::sir(0.6, 0.05, 0.05, 10).unwrap();
    for strategy in Strategy::ALL {
        for mixed in [false, true] {
            let plan = InterventionPlan::new(strategy, 40, 1.0, 1.0, mixed).unwrap();
            let traj = run_epidemic(&net, &params, &plan, 2).unwrap();
            let (last, days) = traj.daily.split_last().unwrap();
            assert_eq!(last.tests_used, 0);
            for d in days {
                let want = if strategy == Strategy::None { 0 } else { 40 };
                assert_eq!(d.tests_used, want, "{strategy:?} day {}", d.day);
                assert!(d.positives_found <= d.tests_used);
                assert!(d.rt_tests >= plan.mixed_rt_share.min(want));
                assert!(d.rt_positives <= d.positives_found);
            }
        }
    }
}

#[test]
fn global_oracle_finds_at_least_as_many_as_tracing_oracle() {
    let net = sample_network(10_000, 4);
    let params = EpidemicParams::sir(0.6, 0.05, 0.05, 10).unwrap();
    let got = InterventionPlan::new(Strategy::Got, 5, 1.0, 1.0, false).unwrap();
    let cto = InterventionPlan::new(Strategy::Cto, 5, 1.0, 1.0, false).unwrap();
    let (mut sum_got, mut sum_cto) = (0, 0);
    for seed in 0..200 {
        let a = run_epidemic(&net, &params, &got, seed).unwrap();
        let b = run_epidemic(&net, &params, &cto, seed).unwrap();
        // Same epidemic stream: day 0 state is identical before testing.
        assert_eq!(a.daily[0].new_infections, b.daily[0].new_infections);
        assert!(a.daily[0].positives_found >= b.daily[0].positives_found);
        sum_got += a.daily[0].positives_found;
        sum_cto += b.daily[0].positives_found;
    }
    assert!(sum_got > sum_cto);
}

#[test]
fn testing_without_tracing_or_quarantine_changes_nothing() {
    let net = sample_network(5_000, 6);
    let params = EpidemicParams::sir(0.6, 0.05, 0.05, 10).unwrap();
    for strategy in [Strategy::Rt, Strategy::Fct, Strategy::Got] {
        let plan = InterventionPlan::new(strategy, 50, 0.0, 0.0, false).unwrap();
        for seed in 0..5 {
            let base = run_epidemic(&net, &params, &InterventionPlan::none(), seed).unwrap();
            let tested = run_epidemic(&net, &params, &plan, seed).unwrap();
            assert_eq!(base.infections, tested.infections);
            assert!(tested.daily.iter().all(|d| d.quarantined_cumulative == 0));
        }
    }
}

#[test]
fn quarantine_counts_are_cumulative() {
    let net = sample_network(5_000, 7);
    let params = EpidemicParams::sir(0.6, 0.05, 0.05, 10).unwrap();
    let plan = InterventionPlan::new(Strategy::Fct, 30, 1.0, 1.0, false).unwrap();
    let traj = run_epidemic(&net, &params, &plan, 1).unwrap();
    let mut prev = 0;
    let mut positives = 0;
    for d in &traj.daily {
        assert!(d.quarantined_cumulative >= prev);
        positives += d.positives_found;
        // P_q = 1: every positive test quarantines.
        assert_eq!(d.quarantined_cumulative, positives);
        prev = d.quarantined_cumulative;
    }
}
