//! Steady-state estimates from event traces.
//!
//! Per-message averages use batch means over the post-warmup messages, in
//! arrival order. The window ends at the earliest arrival that was still in
//! the system when the run stopped, so every counted message completed and
//! long late delays are not silently dropped.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::engine::EventTrace;
use crate::error::{Error, Result};
use crate::model::Message;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Diverged,
    Inconclusive,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Diverged => "diverged",
            Stability::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryOptions {
    /// Fraction of completed messages (in arrival order) discarded.
    pub warmup_fraction: f64,
    pub batches: usize,
    /// Fewer counted messages than this makes the verdict inconclusive.
    pub min_messages: usize,
    pub confidence: f64,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        Self {
            warmup_fraction: 0.2,
            batches: 32,
            min_messages: 1000,
            confidence: 0.95,
        }
    }
}

/// Point estimate with a confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn contains(&self, value: f64) -> bool {
        (value - self.mean).abs() <= self.half_width
    }

    pub fn lower(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mean_t: Estimate,
    pub mean_wd: Estimate,
    pub mean_ws: Estimate,
    /// Time-averaged number of messages in the system.
    pub mean_n: Estimate,
    /// Arrival rate measured over the counted window.
    pub lambda_measured: f64,
    /// Fraction of collector time spent receiving.
    pub rho_measured: f64,
    pub stability: Stability,
    pub messages_counted: usize,
    pub reception_time: f64,
    pub seeds: Vec<u64>,
}

impl SimResult {
    pub fn mean_w(&self) -> f64 {
        self.mean_wd.mean + self.mean_ws.mean
    }

    /// Half-width of the wait estimate; waits and delays differ by the constant `s`.
    pub fn ci_w(&self) -> f64 {
        self.mean_t.half_width
    }
}

/// Two-sided Student-t quantile for `dof` degrees of freedom.
pub fn t_quantile(confidence: f64, dof: usize) -> f64 {
    let t = StudentsT::new(0.0, 1.0, dof.max(1) as f64).expect("valid t distribution");
    t.inverse_cdf(0.5 + confidence / 2.0)
}

/// Mean and t-interval half-width of i.i.d.-ish samples.
pub fn mean_ci(samples: &[f64], confidence: f64) -> Estimate {
    let n = samples.len();
    if n == 0 {
        return Estimate {
            mean: f64::NAN,
            half_width: f64::INFINITY,
        };
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Estimate {
            mean,
            half_width: f64::INFINITY,
        };
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Estimate {
        mean,
        half_width: t_quantile(confidence, n - 1) * (var / n as f64).sqrt(),
    }
}

/// Batch-means estimate: the overall mean with a CI from `batches`
/// contiguous batch averages. Leftover samples join the last batch.
pub fn batch_means(samples: &[f64], batches: usize, confidence: f64) -> Estimate {
    let n = samples.len();
    let mean = if n == 0 {
        f64::NAN
    } else {
        samples.iter().sum::<f64>() / n as f64
    };
    let b = batches.min(n);
    if b < 2 {
        return Estimate {
            mean,
            half_width: f64::INFINITY,
        };
    }
    let size = n / b;
    let avgs: Vec<f64> = (0..b)
        .map(|i| {
            let end = if i + 1 == b { n } else { (i + 1) * size };
            let chunk = &samples[i * size..end];
            chunk.iter().sum::<f64>() / chunk.len() as f64
        })
        .collect();
    Estimate {
        mean,
        half_width: mean_ci(&avgs, confidence).half_width,
    }
}

/// Integral of the step function `occupancy` over `[a, b]`.
fn occupancy_integral(occupancy: &[(f64, usize)], a: f64, b: f64) -> f64 {
    if b <= a || occupancy.is_empty() {
        return 0.0;
    }
    let mut i = occupancy.partition_point(|&(t, _)| t <= a).saturating_sub(1);
    let mut total = 0.0;
    let mut t = a;
    while t < b {
        let level = occupancy[i].1 as f64;
        let next = occupancy.get(i + 1).map_or(b, |&(u, _)| u.min(b));
        total += level * (next - t).max(0.0);
        t = next;
        i += 1;
        if i >= occupancy.len() {
            total += occupancy[occupancy.len() - 1].1 as f64 * (b - t).max(0.0);
            break;
        }
    }
    total
}

/// Time average of `N(t)` over `[a, b]` with a batch-means CI over equal
/// time slices.
pub fn time_average(occupancy: &[(f64, usize)], a: f64, b: f64, batches: usize, confidence: f64) -> Estimate {
    if b <= a {
        return Estimate {
            mean: f64::NAN,
            half_width: f64::INFINITY,
        };
    }
    let mean = occupancy_integral(occupancy, a, b) / (b - a);
    let k = batches.max(2);
    let width = (b - a) / k as f64;
    let slices: Vec<f64> = (0..k)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == k { b } else { lo + width };
            occupancy_integral(occupancy, lo, hi) / (hi - lo)
        })
        .collect();
    Estimate {
        mean,
        half_width: mean_ci(&slices, confidence).half_width,
    }
}

/// Relative CI width under which a run counts as settled.
pub const TIGHT_RELATIVE_CI: f64 = 0.25;

/// Stability verdict from occupancy samples over `[0, end_time]`.
///
/// Diverged when `N` exceeded `threshold`, or when the last third of the
/// run averages more than 1.5 times the middle third with non-overlapping
/// CIs (linear growth from zero gives 5/3).
/// Otherwise stable if the CI over the last two thirds is tight and the
/// last-third CI overlaps the middle-third CI, inconclusive if not (a slow
/// upward drift lands here).
pub fn detect_divergence(occupancy: &[(f64, usize)], end_time: f64, threshold: Option<f64>) -> Stability {
    if let Some(th) = threshold {
        if occupancy.iter().any(|&(_, n)| n as f64 > th) {
            return Stability::Diverged;
        }
    }
    if occupancy.is_empty() || end_time <= 0.0 {
        return Stability::Inconclusive;
    }
    let third = end_time / 3.0;
    let mid = time_average(occupancy, third, 2.0 * third, 10, 0.95);
    let last = time_average(occupancy, 2.0 * third, end_time, 10, 0.95);
    if last.mean > 1.5 * mid.mean && last.lower() > mid.upper() {
        return Stability::Diverged;
    }
    // Precision is judged on the whole post-warmup span: one third alone is
    // too short near saturation, where correlation times are long.
    let settled = time_average(occupancy, third, end_time, 20, 0.95);
    let tight = settled.mean == 0.0 || settled.half_width <= TIGHT_RELATIVE_CI * settled.mean;
    let drifting = last.lower() > mid.upper();
    if tight && !drifting {
        Stability::Stable
    } else {
        Stability::Inconclusive
    }
}

/// Messages counted by [`summarize`], in arrival order.
pub fn counted_messages(trace: &EventTrace, warmup_fraction: f64) -> Vec<&Message> {
    let first_open = trace.in_system.iter().map(|m| m.id).min().unwrap_or(usize::MAX);
    let mut done: Vec<&Message> = trace.completed.iter().filter(|m| m.id < first_open).collect();
    done.sort_by_key(|m| m.id);
    let skip = ((done.len() as f64) * warmup_fraction.clamp(0.0, 1.0)).floor() as usize;
    done.split_off(skip)
}

/// Steady-state summary of one replication.
pub fn summarize(trace: &EventTrace, opts: &SummaryOptions) -> SimResult {
    let counted = counted_messages(trace, opts.warmup_fraction);
    let t: Vec<f64> = counted.iter().map(|m| m.system_time().unwrap()).collect();
    let wd: Vec<f64> = counted.iter().map(|m| m.wait_travel.unwrap()).collect();
    let ws: Vec<f64> = counted.iter().map(|m| m.wait_service.unwrap()).collect();
    let conf = opts.confidence;

    let (start, stop) = match (counted.first(), counted.last()) {
        (Some(a), Some(b)) => (a.arrival_time, b.arrival_time),
        _ => (0.0, trace.end_time),
    };
    let stop = if stop > start { stop } else { trace.end_time };
    let mean_n = time_average(&trace.occupancy, start, stop, opts.batches, conf);
    let lambda_measured = if stop > start && counted.len() > 1 {
        (counted.len() - 1) as f64 / (stop - start)
    } else {
        f64::NAN
    };

    let stability = if trace.diverged {
        Stability::Diverged
    } else {
        match detect_divergence(&trace.occupancy, trace.end_time, trace.divergence_threshold) {
            Stability::Diverged => Stability::Diverged,
            _ if counted.len() < opts.min_messages => Stability::Inconclusive,
            v => v,
        }
    };

    SimResult {
        mean_t: batch_means(&t, opts.batches, conf),
        mean_wd: batch_means(&wd, opts.batches, conf),
        mean_ws: batch_means(&ws, opts.batches, conf),
        mean_n,
        lambda_measured,
        rho_measured: trace.receiving_fraction().min(1.0),
        stability,
        messages_counted: counted.len(),
        reception_time: trace.reception_time,
        seeds: Vec::new(),
    }
}

/// Little's-law check `N = lambda T` on one summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LittleAudit {
    pub mean_n: f64,
    pub lambda_t: f64,
    pub gap: f64,
    /// `ci_N + lambda * ci_T`.
    pub tolerance: f64,
}

impl LittleAudit {
    pub fn passes(&self) -> bool {
        self.gap <= self.tolerance
    }
}

pub fn little_audit(result: &SimResult) -> LittleAudit {
    let lambda_t = result.lambda_measured * result.mean_t.mean;
    LittleAudit {
        mean_n: result.mean_n.mean,
        lambda_t,
        gap: (result.mean_n.mean - lambda_t).abs(),
        tolerance: result.mean_n.half_width + result.lambda_measured * result.mean_t.half_width,
    }
}

fn pool(parts: &[(Estimate, f64)]) -> Estimate {
    let total: f64 = parts.iter().map(|p| p.1).sum();
    let mean = parts.iter().map(|(e, w)| e.mean * w).sum::<f64>() / total;
    let var = parts.iter().map(|(e, w)| (e.half_width * w / total).powi(2)).sum::<f64>();
    Estimate {
        mean,
        half_width: var.sqrt(),
    }
}

/// Pool independent replications, weighting by counted messages. Half-widths
/// combine as independent errors. Any diverged replication makes the pooled
/// verdict diverged; any inconclusive one makes it inconclusive.
pub fn merge(results: &[SimResult]) -> Result<SimResult> {
    let first = results
        .first()
        .ok_or_else(|| Error::Configuration("no replications to merge".into()))?;
    let w = |r: &SimResult| r.messages_counted.max(1) as f64;
    let pick = |f: fn(&SimResult) -> Estimate| -> Estimate {
        pool(&results.iter().map(|r| (f(r), w(r))).collect::<Vec<_>>())
    };
    let stability = if results.iter().any(|r| r.stability == Stability::Diverged) {
        Stability::Diverged
    } else if results.iter().any(|r| r.stability == Stability::Inconclusive) {
        Stability::Inconclusive
    } else {
        Stability::Stable
    };
    let total: f64 = results.iter().map(w).sum();
    let wavg = |f: fn(&SimResult) -> f64| results.iter().map(|r| f(r) * w(r)).sum::<f64>() / total;
    Ok(SimResult {
        mean_t: pick(|r| r.mean_t),
        mean_wd: pick(|r| r.mean_wd),
        mean_ws: pick(|r| r.mean_ws),
        mean_n: pick(|r| r.mean_n),
        lambda_measured: wavg(|r| r.lambda_measured),
        rho_measured: wavg(|r| r.rho_measured),
        stability,
        messages_counted: results.iter().map(|r| r.messages_counted).sum(),
        reception_time: first.reception_time,
        seeds: results.iter().flat_map(|r| r.seeds.iter().copied()).collect(),
    })
}

/// Least-squares fit of `log(T - s)` against `log(1 / (1 - rho))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    /// 95% half-width of the slope.
    pub slope_ci: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
    /// Indices of input points dropped because `T <= s`.
    pub excluded: Vec<usize>,
}

/// Fit the delay scaling exponent. Needs at least five load points in `(0, 1)`;
/// points with `T <= s` are excluded and listed.
pub fn scaling_fit(points: &[(f64, f64)], s: f64) -> Result<ScalingFit> {
    if points.len() < 5 {
        return Err(Error::Configuration(format!(
            "scaling fit needs at least 5 load points, got {}",
            points.len()
        )));
    }
    if let Some(&(rho, _)) = points.iter().find(|p| !(p.0 > 0.0 && p.0 < 1.0)) {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            reason: "scaling fit needs loads in (0, 1)",
        });
    }
    let mut excluded = Vec::new();
    let mut xy = Vec::new();
    for (i, &(rho, t)) in points.iter().enumerate() {
        if t > s && t.is_finite() {
            xy.push(((1.0 / (1.0 - rho)).ln(), (t - s).ln()));
        } else {
            excluded.push(i);
        }
    }
    let n = xy.len();
    if n < 3 {
        return Err(Error::Configuration(format!("only {n} usable points after excluding T <= s")));
    }
    let nf = n as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xy.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let se = (sse / (nf - 2.0) / sxx).sqrt();
    Ok(ScalingFit {
        slope,
        slope_ci: t_quantile(0.95, n - 2) * se,
        intercept,
        r_squared: if syy > 0.0 { 1.0 - sse / syy } else { 1.0 },
        residuals,
        excluded,
    })
}
