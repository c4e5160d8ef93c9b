//! When the disk around the center covers the whole square, the collector
//! never moves and the system is an M/D/1 queue.

use dvrsim::bounds::pk_mg1_wait;
use dvrsim::comm::db_to_linear;
use dvrsim::stats::{summarize, SummaryOptions};
use dvrsim::{run, PolicyKind, ScenarioConfig, StopRule};

fn main() -> dvrsim::Result<()> {
    let base = ScenarioConfig {
        area: 60.0,
        arrival_rate: 1.0,
        reception_time: 1.0,
        speed: 1.0,
        snr_c: db_to_linear(35.0),
        beta: 2.0,
        alpha: 4.0,
        collectors: 1,
        seed: 3,
    };
    println!("r* = {:.3}, half diagonal = {:.3}", base.r_star(), (base.area / 2.0).sqrt());
    println!("{:>5} {:>14} {:>8}", "rho", "sim W", "P-K W");
    for rho in [0.2, 0.5, 0.8] {
        let cfg = base.with_load(rho);
        let mut policy = PolicyKind::CenterParked.build(&cfg)?;
        let trace = run(&cfg, policy.as_mut(), StopRule::messages(50_000, &cfg))?;
        let r = summarize(&trace, &SummaryOptions::default());
        println!(
            "{rho:>5} {:>8.4} ±{:.3} {:>8.4}",
            r.mean_w(),
            r.ci_w(),
            pk_mg1_wait(cfg.arrival_rate, cfg.reception_time)
        );
    }
    Ok(())
}
