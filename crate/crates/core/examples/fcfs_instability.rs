//! FCFS travels to every message in turn, so near saturation it falls
//! behind while the partitioning policies keep up.

use dvrsim::comm::db_to_linear;
use dvrsim::stats::{summarize, SummaryOptions};
use dvrsim::{run, PolicyKind, ScenarioConfig, StopRule};

fn main() -> dvrsim::Result<()> {
    let cfg = ScenarioConfig {
        area: 60.0,
        arrival_rate: 1.0,
        reception_time: 2.0,
        speed: 10.0,
        snr_c: db_to_linear(17.0),
        beta: 2.0,
        alpha: 4.0,
        collectors: 1,
        seed: 2,
    }
    .with_load(0.95);
    for kind in [PolicyKind::Fcfs, PolicyKind::TspnCyclic, PolicyKind::GridPartitioning] {
        let mut policy = kind.build(&cfg)?;
        let trace = run(&cfg, policy.as_mut(), StopRule::messages(50_000, &cfg))?;
        let r = summarize(&trace, &SummaryOptions::default());
        let peak = trace.occupancy.iter().map(|o| o.1).max().unwrap_or(0);
        println!(
            "{:<18} {:<12} peak N {:>5}, still queued {:>5}, T {:>8.2}",
            kind.to_string(),
            r.stability.to_string(),
            peak,
            trace.in_system.len(),
            r.mean_t.mean
        );
    }
    Ok(())
}
