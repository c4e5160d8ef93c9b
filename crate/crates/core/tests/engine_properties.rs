use dvrsim::comm::db_to_linear;
use dvrsim::stats::{little_audit, summarize, SummaryOptions};
use dvrsim::{run, PolicyKind, ScenarioConfig, StopRule};

fn case2(rho: f64, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        area: 60.0,
        arrival_rate: 1.0,
        reception_time: 2.0,
        speed: 10.0,
        snr_c: db_to_linear(17.0),
        beta: 2.0,
        alpha: 4.0,
        collectors: 1,
        seed,
    }
    .with_load(rho)
}

fn all_single_policies() -> Vec<PolicyKind> {
    vec![
        PolicyKind::Fcfs,
        PolicyKind::FcfsReturn,
        PolicyKind::TspnCyclic,
        PolicyKind::GridPartitioning,
    ]
}

#[test]
fn messages_are_conserved() {
    for kind in all_single_policies() {
        let cfg = case2(0.6, 4);
        let mut p = kind.build(&cfg).unwrap();
        let t = run(&cfg, p.as_mut(), StopRule::messages(5000, &cfg)).unwrap();
        assert_eq!(t.generated, t.completed.len() + t.in_system.len(), "{kind}");
        assert_eq!(t.occupancy.last().unwrap().1, t.in_system.len());
        let mut ids: Vec<_> = t.completed.iter().chain(&t.in_system).map(|m| m.id).collect();
        ids.sort_unstable();
        assert!(ids.iter().enumerate().all(|(i, &id)| i == id));
        // at most one message per collector can be in reception at the stop
        assert!(t.in_system.iter().filter(|m| m.reception_start.is_some()).count() <= 1);
    }
}

#[test]
fn delay_identity_holds_per_message() {
    for kind in all_single_policies() {
        let cfg = case2(0.7, 8);
        let mut p = kind.build(&cfg).unwrap();
        let t = run(&cfg, p.as_mut(), StopRule::messages(5000, &cfg)).unwrap();
        for m in &t.completed {
            let total = m.departure_time.unwrap() - m.arrival_time;
            let parts = m.wait_travel.unwrap() + m.wait_service.unwrap() + cfg.reception_time;
            assert!((total - parts).abs() <= 1e-9 * total.max(1.0), "{kind}: {m:?}");
            assert!(m.wait_travel.unwrap() >= -1e-9 && m.wait_service.unwrap() >= 0.0);
        }
        let r = summarize(&t, &SummaryOptions::default());
        let sum = r.mean_wd.mean + r.mean_ws.mean + cfg.reception_time;
        assert!((r.mean_t.mean - sum).abs() <= 1e-9 * r.mean_t.mean);
    }
}

#[test]
fn departures_are_ordered_and_receptions_do_not_overlap() {
    let cfg = case2(0.8, 2);
    let mut p = PolicyKind::TspnCyclic.build(&cfg).unwrap();
    let t = run(&cfg, p.as_mut(), StopRule::messages(5000, &cfg)).unwrap();
    for w in t.completed.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        assert!(a.departure_time <= b.departure_time);
        assert!(b.reception_start.unwrap() >= a.departure_time.unwrap() - 1e-9);
    }
    assert!(t.receiving_fraction() <= 1.0);
}

#[test]
fn runs_replay_under_the_same_seed() {
    for kind in all_single_policies() {
        let cfg = case2(0.5, 21);
        let mut a = kind.build(&cfg).unwrap();
        let mut b = kind.build(&cfg).unwrap();
        let ta = run(&cfg, a.as_mut(), StopRule::messages(3000, &cfg)).unwrap();
        let tb = run(&cfg, b.as_mut(), StopRule::messages(3000, &cfg)).unwrap();
        assert_eq!(ta, tb);
        let mut c = kind.build(&cfg.with_seed(22)).unwrap();
        let tc = run(&cfg.with_seed(22), c.as_mut(), StopRule::messages(3000, &cfg)).unwrap();
        assert_ne!(ta.completed, tc.completed);
    }
}

#[test]
fn infinite_speed_never_delays_fcfs() {
    for seed in 0..5 {
        let slow = case2(0.6, seed);
        let fast = ScenarioConfig {
            speed: f64::INFINITY,
            ..slow.clone()
        };
        let run_with = |cfg: &ScenarioConfig| {
            let mut p = PolicyKind::Fcfs.build(cfg).unwrap();
            run(cfg, p.as_mut(), StopRule::messages(4000, cfg).with_divergence(None)).unwrap()
        };
        let (a, b) = (run_with(&slow), run_with(&fast));
        let mut fast_t = vec![f64::NAN; b.generated.max(a.generated)];
        for m in &b.completed {
            fast_t[m.id] = m.departure_time.unwrap();
        }
        let mut compared = 0;
        for m in a.completed.iter().filter(|m| m.id < fast_t.len() && !fast_t[m.id].is_nan()) {
            assert!(fast_t[m.id] <= m.departure_time.unwrap() + 1e-9, "seed {seed} message {}", m.id);
            compared += 1;
        }
        assert!(compared > 3000);
        for m in &b.completed {
            assert!(m.wait_travel.unwrap().abs() < 1e-9);
        }
    }
}

#[test]
fn center_parked_attributes_all_waiting_to_service() {
    let cfg = ScenarioConfig {
        snr_c: db_to_linear(40.0),
        ..case2(0.6, 3)
    };
    let mut p = PolicyKind::CenterParked.build(&cfg).unwrap();
    let t = run(&cfg, p.as_mut(), StopRule::messages(5000, &cfg)).unwrap();
    assert_eq!(t.total_travel_distance, 0.0);
    for m in &t.completed {
        assert_eq!(m.wait_travel.unwrap(), 0.0);
    }
}

#[test]
fn littles_law_on_moderate_runs() {
    for kind in all_single_policies() {
        let cfg = case2(0.5, 13);
        let mut p = kind.build(&cfg).unwrap();
        let t = run(&cfg, p.as_mut(), StopRule::messages(50_000, &cfg)).unwrap();
        let r = summarize(&t, &SummaryOptions::default());
        let audit = little_audit(&r);
        assert!(audit.passes(), "{kind}: {audit:?}");
        assert!((r.rho_measured - 0.5).abs() < 0.02);
    }
}

#[test]
fn horizon_stop_reports_unfinished_work() {
    let cfg = case2(0.9, 5);
    let mut p = PolicyKind::GridPartitioning.build(&cfg).unwrap();
    let t = run(&cfg, p.as_mut(), StopRule::horizon(500.0)).unwrap();
    assert_eq!(t.end_time, 500.0);
    assert!(t.completed.iter().all(|m| m.departure_time.unwrap() <= 500.0));
    assert!(t.in_system.iter().all(|m| m.arrival_time <= 500.0));
}

#[test]
fn policy_and_scenario_must_agree_on_collectors() {
    let one = case2(0.5, 1);
    let four = ScenarioConfig {
        collectors: 4,
        ..one.clone()
    };
    let mut p = PolicyKind::GridPartitioning.build(&one).unwrap();
    assert!(run(&four, p.as_mut(), StopRule::messages(10, &four)).is_err());
    let bad = ScenarioConfig { alpha: 7.0, ..one };
    let mut p = PolicyKind::Fcfs.build(&case2(0.5, 1)).unwrap();
    assert!(run(&bad, p.as_mut(), StopRule::messages(10, &bad)).is_err());
}
