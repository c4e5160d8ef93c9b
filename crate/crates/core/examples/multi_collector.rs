//! Four collectors, one per quarter of the square, each running grid
//! partitioning or TSPN on its own subregion.

use dvrsim::bounds::{multi_lb_avg, multi_partitioning_delay};
use dvrsim::comm::db_to_linear;
use dvrsim::stats::{summarize, SummaryOptions};
use dvrsim::{run, PolicyKind, ScenarioConfig, StopRule};

fn main() -> dvrsim::Result<()> {
    let base = ScenarioConfig {
        area: 500.0,
        arrival_rate: 1.0,
        reception_time: 2.0,
        speed: 1.0,
        snr_c: db_to_linear(20.0),
        beta: 2.0,
        alpha: 4.0,
        collectors: 4,
        seed: 1,
    };
    let kinds = [
        PolicyKind::MultiPartitioning(Box::new(PolicyKind::GridPartitioning)),
        PolicyKind::MultiPartitioning(Box::new(PolicyKind::TspnCyclic)),
    ];
    println!("{:>5} {:>10} {:>10} {:>9} {:>9}", "rho", "grid T", "tspn T", "formula", "bound");
    for rho in [0.3, 0.5, 0.7] {
        let cfg = base.with_load(rho);
        let mut sims = Vec::new();
        for kind in &kinds {
            let mut policy = kind.build(&cfg)?;
            let trace = run(&cfg, policy.as_mut(), StopRule::messages(40_000, &cfg))?;
            sims.push(summarize(&trace, &SummaryOptions::default()).mean_t.mean);
        }
        println!(
            "{rho:>5} {:>10.2} {:>10.2} {:>9.2} {:>9.2}",
            sims[0],
            sims[1],
            multi_partitioning_delay(&cfg)?,
            multi_lb_avg(&cfg)
        );
    }
    Ok(())
}
