//! Experiment files.
//!
//! One `key = value` pair per line. Keys are dotted (`scenario.area`),
//! `#` starts a comment, blank lines are ignored and list values are
//! comma-separated. Every key may appear at most once.
//!
//! | key | value | default |
//! |-----|-------|---------|
//! | `scenario.area` | region area `A` | required |
//! | `scenario.speed` | collector speed `v`, or `inf` | required |
//! | `scenario.reception_time` | reception time `s` | required |
//! | `scenario.snr_db` | `SNRc` in dB | required unless `sweep.snr_db` |
//! | `scenario.beta` | SNR threshold (linear) | `2` |
//! | `scenario.alpha` | path-loss exponent in `[2, 6]` | `4` |
//! | `scenario.collectors` | number of collectors `m` | `1` |
//! | `policies` | list of policy names | empty |
//! | `sweep.rho` | list of loads in `(0, 1.2]` | empty |
//! | `sweep.snr_db` | list of `SNRc` values in dB | `scenario.snr_db` |
//! | `seeds` | list of seeds, or `a..b` inclusive | `1` |
//! | `stop.messages` | completed messages per run | `100000` |
//! | `stats.warmup` | warmup fraction | `0.2` |
//! | `stats.batches` | batch count | `32` |
//! | `bounds.excess` | `exact` or `simplified` | `exact` |
//! | `output.results` | result table file name | `results.csv` |
//! | `output.trace` | message dump file name | `trace.csv` |
//!
//! Loads are per collector: the arrival rate is `rho * m / s`.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::bounds::ExcessModel;
use crate::comm::db_to_linear;
use crate::error::{Error, Result};
use crate::model::ScenarioConfig;
use crate::policies::PolicyKind;
use crate::stats::SummaryOptions;

/// Physical scenario of an experiment, with the SNR in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTemplate {
    pub area: f64,
    pub speed: f64,
    pub reception_time: f64,
    pub beta: f64,
    pub alpha: f64,
    pub collectors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub scenario: ScenarioTemplate,
    pub policies: Vec<PolicyKind>,
    pub loads: Vec<f64>,
    pub snr_db: Vec<f64>,
    pub seeds: Vec<u64>,
    pub messages: usize,
    pub summary: SummaryOptions,
    pub excess: ExcessModel,
    pub results_file: String,
    pub trace_file: String,
}

impl ExperimentSpec {
    /// Concrete scenario for one sweep point.
    pub fn scenario(&self, snr_db: f64, rho: f64, seed: u64) -> ScenarioConfig {
        let t = &self.scenario;
        ScenarioConfig {
            area: t.area,
            arrival_rate: rho * t.collectors as f64 / t.reception_time,
            reception_time: t.reception_time,
            speed: t.speed,
            snr_c: db_to_linear(snr_db),
            beta: t.beta,
            alpha: t.alpha,
            collectors: t.collectors,
            seed,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse experiment text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries: HashMap<String, (usize, String)> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |key: &str, message: &str| Error::Parse {
                path: origin.to_string(),
                line,
                key: key.to_string(),
                message: message.to_string(),
            };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(content, "expected `key = value`"))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(err(key, "unknown key"));
            }
            if let Some((first, _)) = entries.get(key) {
                return Err(err(key, &format!("duplicate key (first set on line {first})")));
            }
            entries.insert(key.to_string(), (line, value.trim().to_string()));
        }
        Reader { origin, entries }.build()
    }
}

const KNOWN_KEYS: &[&str] = &[
    "scenario.area",
    "scenario.speed",
    "scenario.reception_time",
    "scenario.snr_db",
    "scenario.beta",
    "scenario.alpha",
    "scenario.collectors",
    "policies",
    "sweep.rho",
    "sweep.snr_db",
    "seeds",
    "stop.messages",
    "stats.warmup",
    "stats.batches",
    "bounds.excess",
    "output.results",
    "output.trace",
];

struct Reader<'a> {
    origin: &'a str,
    entries: HashMap<String, (usize, String)>,
}

impl Reader<'_> {
    fn error(&self, key: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.origin.to_string(),
            line: self.entries.get(key).map_or(0, |e| e.0),
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.1.as_str())
    }

    fn value<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|_| self.error(key, format!("cannot parse `{v}`"))))
            .transpose()
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        self.value(key)?.ok_or_else(|| self.error(key, "missing required key"))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(raw) = self.raw(key) else {
            return Ok(None);
        };
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|v| v.parse::<T>().map_err(|_| self.error(key, format!("cannot parse list item `{v}`"))))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn build(self) -> Result<ExperimentSpec> {
        let positive = |key: &str, v: f64| -> Result<f64> {
            if v > 0.0 {
                Ok(v)
            } else {
                Err(self.error(key, "must be positive"))
            }
        };
        let scenario = ScenarioTemplate {
            area: positive("scenario.area", self.required("scenario.area")?)?,
            speed: positive("scenario.speed", self.required("scenario.speed")?)?,
            reception_time: positive("scenario.reception_time", self.required("scenario.reception_time")?)?,
            beta: positive("scenario.beta", self.value("scenario.beta")?.unwrap_or(2.0))?,
            alpha: self.value("scenario.alpha")?.unwrap_or(4.0),
            collectors: self.value("scenario.collectors")?.unwrap_or(1),
        };
        if !(2.0..=6.0).contains(&scenario.alpha) {
            return Err(self.error("scenario.alpha", "path-loss exponent must lie in [2, 6]"));
        }
        if scenario.collectors == 0 {
            return Err(self.error("scenario.collectors", "at least one collector is required"));
        }

        let policies = match self.raw("policies") {
            None => Vec::new(),
            Some(raw) => split_policies(raw)
                .into_iter()
                .map(|p| p.parse::<PolicyKind>().map_err(|e| self.error("policies", e)))
                .collect::<Result<_>>()?,
        };

        let loads: Vec<f64> = self.list("sweep.rho")?.unwrap_or_default();
        if let Some(bad) = loads.iter().find(|&&r| !(r > 0.0 && r <= 1.2)) {
            return Err(self.error("sweep.rho", format!("load {bad} outside (0, 1.2]")));
        }

        let snr_db = match self.list::<f64>("sweep.snr_db")? {
            Some(v) if !v.is_empty() => {
                if self.raw("scenario.snr_db").is_some() {
                    return Err(self.error("sweep.snr_db", "give either scenario.snr_db or sweep.snr_db"));
                }
                v
            }
            Some(_) => return Err(self.error("sweep.snr_db", "empty list")),
            None => vec![self.required::<f64>("scenario.snr_db")?],
        };
        if let Some(bad) = snr_db.iter().find(|v| !v.is_finite()) {
            return Err(self.error("sweep.snr_db", format!("non-finite SNR {bad}")));
        }

        let seeds = match self.raw("seeds") {
            None => vec![1],
            Some(raw) => parse_seeds(raw).map_err(|e| self.error("seeds", e))?,
        };

        let messages = self.value("stop.messages")?.unwrap_or(100_000usize);
        if messages == 0 {
            return Err(self.error("stop.messages", "must be at least 1"));
        }
        let mut summary = SummaryOptions::default();
        if let Some(w) = self.value::<f64>("stats.warmup")? {
            if !(0.0..1.0).contains(&w) {
                return Err(self.error("stats.warmup", "fraction must lie in [0, 1)"));
            }
            summary.warmup_fraction = w;
        }
        if let Some(b) = self.value::<usize>("stats.batches")? {
            if b < 20 {
                return Err(self.error("stats.batches", "need at least 20 batches"));
            }
            summary.batches = b;
        }
        let excess = match self.raw("bounds.excess") {
            None | Some("exact") => ExcessModel::Exact,
            Some("simplified") => ExcessModel::Simplified,
            Some(other) => {
                return Err(self.error("bounds.excess", format!("expected exact or simplified, got `{other}`")))
            }
        };
        Ok(ExperimentSpec {
            scenario,
            policies,
            loads,
            snr_db,
            seeds,
            messages,
            summary,
            excess,
            results_file: self.raw("output.results").unwrap_or("results.csv").to_string(),
            trace_file: self.raw("output.trace").unwrap_or("trace.csv").to_string(),
        })
    }
}

/// Split on commas that are not inside parentheses.
fn split_policies(raw: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in raw.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(raw[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(raw[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

/// `1, 2, 5` or an inclusive range `1..5`.
pub fn parse_seeds(raw: &str) -> std::result::Result<Vec<u64>, String> {
    let raw = raw.trim();
    let seeds: Vec<u64> = if let Some((a, b)) = raw.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
        if b < a {
            return Err(format!("empty seed range {a}..{b}"));
        }
        (a..=b).collect()
    } else {
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| format!("bad seed `{s}`")))
            .collect::<std::result::Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err("at least one seed is required".into());
    }
    Ok(seeds)
}
