//! Log-log fit of `T - s` against `1 / (1 - rho)` for grid partitioning.
//! A slope near one means delay grows like `1 / (1 - rho)`.

use dvrsim::comm::db_to_linear;
use dvrsim::stats::{scaling_fit, summarize, SummaryOptions};
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
        seed: 4,
    };
    let mut points = Vec::new();
    for rho in [0.6, 0.7, 0.8, 0.9, 0.95] {
        let cfg = base.with_load(rho);
        let mut policy = PolicyKind::GridPartitioning.build(&cfg)?;
        let trace = run(&cfg, policy.as_mut(), StopRule::messages(40_000, &cfg))?;
        let t = summarize(&trace, &SummaryOptions::default()).mean_t.mean;
        println!("rho {rho:<5} T {t:.3}");
        points.push((rho, t));
    }
    let fit = scaling_fit(&points, base.reception_time)?;
    println!("slope {:.3} ± {:.3}, R² {:.4}", fit.slope, fit.slope_ci, fit.r_squared);
    Ok(())
}
