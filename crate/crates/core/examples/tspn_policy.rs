//! Cyclic TSPN epochs: each tour serves the messages present when it
//! starts. Prints the first few epochs and the tour-length statistics.

use dvrsim::comm::db_to_linear;
use dvrsim::policies::TspnCyclic;
use dvrsim::stats::{summarize, SummaryOptions};
use dvrsim::tspn::grid_cover_cap;
use dvrsim::{run, ScenarioConfig, StopRule};

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
        seed: 5,
    }
    .with_load(0.8);
    let mut policy = TspnCyclic::new(cfg.region(), cfg.r_star());
    let trace = run(&cfg, &mut policy, StopRule::messages(20_000, &cfg))?;
    let epochs = policy.epochs();
    for e in epochs.iter().skip(100).take(5) {
        println!(
            "epoch at t={:>9.2}: {:>3} messages, tour {:>6.2} ({:?})",
            e.start_time,
            e.frozen.len(),
            e.tour_length,
            e.kind
        );
    }
    let longest = epochs.iter().map(|e| e.tour_length).fold(0.0, f64::max);
    println!(
        "{} epochs, longest tour {longest:.2}, grid-cover cap {:.2}",
        epochs.len(),
        grid_cover_cap(policy.grid())
    );
    let r = summarize(&trace, &SummaryOptions::default());
    println!("T = {:.3} ± {:.3} ({})", r.mean_t.mean, r.mean_t.half_width, r.stability);
    Ok(())
}
