//! Collector routing policies.

mod fcfs;
mod multi;
mod partitioning;
mod tspn_cyclic;

use std::fmt;
use std::str::FromStr;

pub use fcfs::{CenterParked, Fcfs};
pub use multi::MultiPartitioning;
pub use partitioning::GridPartitioning;
pub use tspn_cyclic::{Epoch, TspnCyclic};

use crate::engine::Policy;
use crate::error::{Error, Result};
use crate::model::{ScenarioConfig, Square};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicyKind {
    CenterParked,
    Fcfs,
    FcfsReturn,
    TspnCyclic,
    GridPartitioning,
    MultiPartitioning(Box<PolicyKind>),
}

impl PolicyKind {
    /// Build a policy for `cfg`. Single-collector kinds need `m = 1`;
    /// `MultiPartitioning` needs `m` to be a perfect square.
    pub fn build(&self, cfg: &ScenarioConfig) -> Result<Box<dyn Policy + Send>> {
        let r_star = cfg.r_star();
        match self {
            PolicyKind::MultiPartitioning(inner) => {
                if matches!(**inner, PolicyKind::MultiPartitioning(_)) {
                    return Err(Error::Configuration(
                        "multi_partitioning cannot nest another multi_partitioning".into(),
                    ));
                }
                let m = cfg.collectors;
                let j = perfect_square_root(m).ok_or_else(|| {
                    Error::Configuration(format!(
                        "multi_partitioning needs a square number of collectors, got {m}"
                    ))
                })?;
                let mut failure = None;
                let policy = MultiPartitioning::new(cfg.region(), j, |sub| {
                    match inner.build_single(sub, r_star) {
                        Ok(p) => p,
                        Err(e) => {
                            failure.get_or_insert(e);
                            Box::new(Fcfs::new(sub, r_star))
                        }
                    }
                });
                match failure {
                    Some(e) => Err(e),
                    None => Ok(Box::new(policy)),
                }
            }
            single => {
                if cfg.collectors != 1 {
                    return Err(Error::Configuration(format!(
                        "{single} is a single-collector policy but the scenario has {} collectors",
                        cfg.collectors
                    )));
                }
                single.build_single(cfg.region(), r_star)
            }
        }
    }

    fn build_single(&self, region: Square, r_star: f64) -> Result<Box<dyn Policy + Send>> {
        Ok(match self {
            PolicyKind::CenterParked => Box::new(CenterParked::new(region, r_star)?),
            PolicyKind::Fcfs => Box::new(Fcfs::new(region, r_star)),
            PolicyKind::FcfsReturn => Box::new(Fcfs::returning(region, r_star)),
            PolicyKind::TspnCyclic => Box::new(TspnCyclic::new(region, r_star)),
            PolicyKind::GridPartitioning => Box::new(GridPartitioning::new(region, r_star)),
            PolicyKind::MultiPartitioning(_) => unreachable!("handled by build"),
        })
    }
}

pub fn perfect_square_root(m: usize) -> Option<usize> {
    let j = (m as f64).sqrt().round() as usize;
    (j >= 1 && j * j == m).then_some(j)
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::CenterParked => f.write_str("center_parked"),
            PolicyKind::Fcfs => f.write_str("fcfs"),
            PolicyKind::FcfsReturn => f.write_str("fcfs_return"),
            PolicyKind::TspnCyclic => f.write_str("tspn"),
            PolicyKind::GridPartitioning => f.write_str("grid_partitioning"),
            PolicyKind::MultiPartitioning(inner) => write!(f, "multi_partitioning({inner})"),
        }
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    /// Accepts the `Display` names; `multi_partitioning` alone wraps
    /// `grid_partitioning`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("multi_partitioning") {
            let rest = rest.trim();
            if rest.is_empty() {
                return Ok(PolicyKind::MultiPartitioning(Box::new(PolicyKind::GridPartitioning)));
            }
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("malformed policy `{s}`"))?;
            return Ok(PolicyKind::MultiPartitioning(Box::new(inner.parse()?)));
        }
        match s {
            "center_parked" => Ok(PolicyKind::CenterParked),
            "fcfs" => Ok(PolicyKind::Fcfs),
            "fcfs_return" => Ok(PolicyKind::FcfsReturn),
            "tspn" | "tspn_cyclic" => Ok(PolicyKind::TspnCyclic),
            "grid_partitioning" | "partitioning" => Ok(PolicyKind::GridPartitioning),
            other => Err(format!(
                "unknown policy `{other}` (expected center_parked, fcfs, fcfs_return, tspn, grid_partitioning or multi_partitioning(<inner>))"
            )),
        }
    }
}
