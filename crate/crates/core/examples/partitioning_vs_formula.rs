//! Grid partitioning against its closed-form delay, with the lower bound
//! for reference.

use dvrsim::bounds::{partitioning_delay, single_collector_lb};
use dvrsim::comm::db_to_linear;
use dvrsim::stats::{summarize, SummaryOptions};
use dvrsim::{run, PolicyKind, ScenarioConfig, StopRule};

fn main() -> dvrsim::Result<()> {
    let base = ScenarioConfig {
        area: 60.0,
        arrival_rate: 1.0,
        reception_time: 2.0,
        speed: 10.0,
        snr_c: db_to_linear(17.0),
        beta: 2.0,
        alpha: 4.0,
        collectors: 1,
        seed: 1,
    };
    println!("{:>5} {:>16} {:>9} {:>9}", "rho", "sim T", "formula", "bound");
    for rho in [0.3, 0.5, 0.7, 0.9] {
        let cfg = base.with_load(rho);
        let mut policy = PolicyKind::GridPartitioning.build(&cfg)?;
        let trace = run(&cfg, policy.as_mut(), StopRule::messages(40_000, &cfg))?;
        let r = summarize(&trace, &SummaryOptions::default());
        println!(
            "{rho:>5} {:>9.3} ±{:<5.3} {:>9.3} {:>9.3}",
            r.mean_t.mean,
            r.mean_t.half_width,
            partitioning_delay(&cfg),
            single_collector_lb(&cfg)
        );
    }
    Ok(())
}
