//! Discrete-event simulation of mobile data collectors that gather messages
//! from a square region over a disk-shaped reception range, together with
//! the closed-form delay bounds the routing policies are measured against.
//!
//! The pieces, bottom up:
//!
//! * [`model`]: points, squares, scenario parameters and message records.
//! * [`comm`]: the SNR threshold and the reception radius `r*` it induces.
//! * [`grid`]: the cell partition of a region into squares of diagonal `2 r*`.
//! * [`engine`]: the event loop and the [`Policy`] interface.
//! * [`policies`]: FCFS, grid partitioning, tour-based and multi-collector policies.
//! * [`tspn`]: tour planning through reception disks.
//! * [`bounds`]: lower bounds and policy delay formulas.
//! * [`stats`]: steady-state estimators and stability verdicts.
//! * [`experiment`]: config files, load sweeps and result tables.
//!
//! ```
//! use dvrsim::{bounds, engine, policies::PolicyKind, stats, ScenarioConfig};
//!
//! let cfg = ScenarioConfig {
//!     area: 60.0,
//!     arrival_rate: 1.0,
//!     reception_time: 2.0,
//!     speed: 10.0,
//!     snr_c: dvrsim::comm::db_to_linear(17.0),
//!     beta: 2.0,
//!     alpha: 4.0,
//!     collectors: 1,
//!     seed: 1,
//! }
//! .with_load(0.5);
//! let mut policy = PolicyKind::GridPartitioning.build(&cfg).unwrap();
//! let trace = engine::run(&cfg, policy.as_mut(), engine::StopRule::messages(5_000, &cfg)).unwrap();
//! let result = stats::summarize(&trace, &stats::SummaryOptions::default());
//! assert!(result.mean_t.mean >= bounds::single_collector_lb(&cfg) * 0.9);
//! ```

pub mod bounds;
pub mod comm;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod model;
pub mod policies;
pub mod stats;
pub mod tspn;

pub use engine::{run, run_scripted, Action, DecisionContext, EventTrace, Policy, StopRule};
pub use error::{Error, Result};
pub use model::{Message, Point, ScenarioConfig, Square};
pub use policies::PolicyKind;
pub use stats::{SimResult, Stability};
