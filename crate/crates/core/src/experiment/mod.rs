//! Load sweeps over policies and seeds, and their result tables.

mod config;
mod output;

pub use config::{parse_seeds, ExperimentSpec, ScenarioTemplate};
pub use output::{dump_messages, format_sig, render_messages, render_table, write_atomic, write_table, HEADER};

use rayon::prelude::*;

use crate::bounds::BoundReport;
use crate::engine::{run, EventTrace, StopRule};
use crate::error::{Error, Result};
use crate::policies::PolicyKind;
use crate::stats::{merge, summarize, SimResult};

/// One line of the result table. `sim` is `None` in bounds-only tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub policy: Option<PolicyKind>,
    pub snr_db: f64,
    pub rho: f64,
    pub lambda: f64,
    pub bounds: BoundReport,
    pub sim: Option<SimResult>,
}

impl ResultRow {
    /// Simulated mean delay over the matching lower bound.
    pub fn ratio_sim_lb(&self) -> Option<f64> {
        self.sim.as_ref().map(|s| s.mean_t.mean / self.bounds.lower_bound())
    }

    /// Partitioning delay formula over the matching lower bound.
    pub fn ratio_formula_lb(&self) -> f64 {
        self.bounds.policy_formula() / self.bounds.lower_bound()
    }
}

/// Formula values for every `(snr, rho)` point, no simulation.
pub fn bounds_table(spec: &ExperimentSpec) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for &snr in &spec.snr_db {
        for &rho in &spec.loads {
            let cfg = spec.scenario(snr, rho, 0);
            rows.push(ResultRow {
                policy: None,
                snr_db: snr,
                rho,
                lambda: cfg.arrival_rate,
                bounds: BoundReport::evaluate(&cfg, spec.excess),
                sim: None,
            });
        }
    }
    rows
}

/// Simulate one replication.
pub fn run_cell(spec: &ExperimentSpec, policy: &PolicyKind, snr_db: f64, rho: f64, seed: u64) -> Result<EventTrace> {
    let cfg = spec.scenario(snr_db, rho, seed);
    cfg.validate()?;
    let mut p = policy.build(&cfg)?;
    run(&cfg, p.as_mut(), StopRule::messages(spec.messages, &cfg))
}

/// Run every `(policy, snr, rho, seed)` cell on up to `parallel` threads and
/// merge replications per `(policy, snr, rho)`. Rows come out in
/// policy, snr, rho order regardless of scheduling.
pub fn run_experiment(spec: &ExperimentSpec, parallel: usize) -> Result<Vec<ResultRow>> {
    if spec.policies.is_empty() && !spec.loads.is_empty() {
        return Err(Error::Configuration("no policies to simulate".into()));
    }
    // surface configuration errors before spending time on the sweep
    for policy in &spec.policies {
        for &snr in &spec.snr_db {
            policy.build(&spec.scenario(snr, 0.5, 0))?;
        }
    }
    let mut cells = Vec::new();
    for (pi, policy) in spec.policies.iter().enumerate() {
        for &snr in &spec.snr_db {
            for &rho in &spec.loads {
                for &seed in &spec.seeds {
                    cells.push((pi, policy, snr, rho, seed));
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .map_err(|e| Error::Configuration(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<SimResult>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(_, policy, snr, rho, seed)| {
                let trace = run_cell(spec, policy, snr, rho, seed)?;
                let mut r = summarize(&trace, &spec.summary);
                r.seeds = vec![seed];
                Ok(r)
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let per_row = spec.seeds.len().max(1);
    let mut rows = Vec::new();
    for (chunk, cell) in results.chunks(per_row).zip(cells.chunks(per_row)) {
        let (_, policy, snr, rho, _) = cell[0];
        let cfg = spec.scenario(snr, rho, 0);
        rows.push(ResultRow {
            policy: Some(policy.clone()),
            snr_db: snr,
            rho,
            lambda: cfg.arrival_rate,
            bounds: BoundReport::evaluate(&cfg, spec.excess),
            sim: Some(merge(chunk)?),
        });
    }
    Ok(rows)
}

/// First policy, first SNR, first load and first seed of the experiment, for
/// message dumps.
pub fn trace_run(spec: &ExperimentSpec) -> Result<EventTrace> {
    let policy = spec
        .policies
        .first()
        .ok_or_else(|| Error::Configuration("trace needs at least one policy".into()))?;
    let rho = *spec
        .loads
        .first()
        .ok_or_else(|| Error::Configuration("trace needs at least one load in sweep.rho".into()))?;
    run_cell(spec, policy, spec.snr_db[0], rho, spec.seeds[0])
}
