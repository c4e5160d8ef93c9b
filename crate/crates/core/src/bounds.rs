//! Closed-form delay bounds and policy delay formulas.
//!
//! Every function returns `f64::INFINITY` when the relevant load is at or
//! above one. Single-collector formulas use `rho = lambda * s` and ignore
//! `cfg.collectors`; the `multi_*` formulas use `rho = lambda * s / m`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::RegionGrid;
use crate::model::{ScenarioConfig, Square};
use crate::policies::perfect_square_root;

/// Three-digit approximation of `E[|U|] / sqrt(A)` for a uniform point `U`
/// about the center of a square.
pub const MEAN_CENTER_DISTANCE_COEFF: f64 = 0.383;

/// `E[|U|] / sqrt(A)` evaluated exactly: `(sqrt(2) + asinh(1)) / 6`.
pub fn mean_center_distance_exact_coeff() -> f64 {
    (std::f64::consts::SQRT_2 + 1f64.asinh()) / 6.0
}

/// How the travel term `E[(|U| - r*)^+]` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExcessModel {
    /// Quadrature of the exact expectation.
    #[default]
    Exact,
    /// The looser `max(0, 0.383 sqrt(A) - r*)` for quick curves.
    Simplified,
}

/// M/G/1 waiting time with deterministic service `s`: `lambda s^2 / (2 (1 - lambda s))`.
pub fn pk_mg1_wait(lambda: f64, s: f64) -> f64 {
    let rho = lambda * s;
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    lambda * s * s / (2.0 * (1.0 - rho))
}

/// `E[max(0, |U - c| - r*)]` for `U` uniform on the square of area `area`
/// and `c` its center, by semi-analytic quadrature (closed-form inner
/// integral, adaptive Simpson outer integral), absolute error well below
/// `1e-6 sqrt(A)`.
pub fn expected_excess_distance(area: f64, r_star: f64) -> f64 {
    let h = 0.5 * area.sqrt();
    let r = r_star.max(0.0);
    if r * r >= 2.0 * h * h {
        return 0.0;
    }
    let inner = |x: f64| excess_column(x, h, r);
    let mut cuts = vec![0.0];
    for c in [(r * r - h * h).max(0.0).sqrt(), r] {
        if c > 0.0 && c < h {
            cuts.push(c);
        }
    }
    cuts.push(h);
    cuts.sort_by(f64::total_cmp);
    let eps = 1e-10 * area.sqrt() * h * h;
    let total: f64 = cuts
        .windows(2)
        .map(|w| adaptive_simpson(&inner, w[0], w[1], eps / cuts.len() as f64))
        .sum();
    total / (h * h)
}

/// The looser travel term `max(0, 0.383 sqrt(A) - r*)`.
pub fn excess_distance_floor(area: f64, r_star: f64) -> f64 {
    (MEAN_CENTER_DISTANCE_COEFF * area.sqrt() - r_star).max(0.0)
}

pub fn excess_distance(area: f64, r_star: f64, model: ExcessModel) -> f64 {
    match model {
        ExcessModel::Exact => expected_excess_distance(area, r_star),
        ExcessModel::Simplified => excess_distance_floor(area, r_star),
    }
}

/// `int_0^y sqrt(x^2 + t^2) dt`.
fn arc_integral(x: f64, y: f64) -> f64 {
    let hyp = x.hypot(y);
    let log_term = if x == 0.0 { 0.0 } else { x * x * (y / x.abs()).asinh() };
    0.5 * (y * hyp + log_term)
}

/// `int_0^h max(0, sqrt(x^2 + y^2) - r) dy`.
fn excess_column(x: f64, h: f64, r: f64) -> f64 {
    let y0 = if x >= r { 0.0 } else { (r * r - x * x).sqrt() };
    if y0 >= h {
        return 0.0;
    }
    (arc_integral(x, h) - arc_integral(x, y0)) - r * (h - y0)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * eps {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, eps, 48)
}

/// Lower bound on the optimal single-collector delay:
/// `E[(|U| - r*)^+] / (v (1 - rho)) + lambda s^2 / (2 (1 - rho)) + s`.
pub fn single_collector_lb(cfg: &ScenarioConfig) -> f64 {
    single_collector_lb_with(cfg, ExcessModel::Exact)
}

pub fn single_collector_lb_with(cfg: &ScenarioConfig, model: ExcessModel) -> f64 {
    let (lambda, s, v) = (cfg.arrival_rate, cfg.reception_time, cfg.speed);
    let rho = lambda * s;
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let travel = excess_distance(cfg.area, cfg.r_star(), model);
    travel / (v * (1.0 - rho)) + pk_mg1_wait(lambda, s) + s
}

/// Reservation-system delay of the grid partitioning policy on `region`
/// with arrival rate `lambda`:
/// `lambda s^2 / (2 (1 - rho)) + (n_s - rho) / (2 v (1 - rho)) * hop + s`,
/// where `hop = sqrt(2) r_eff` is the cell side (zero for a single cell).
fn reservation_delay(region: Square, lambda: f64, s: f64, v: f64, r_star: f64) -> f64 {
    let rho = lambda * s;
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let grid = RegionGrid::new(region, r_star);
    let n_s = grid.num_cells() as f64;
    lambda * s * s / (2.0 * (1.0 - rho)) + (n_s - rho) / (2.0 * v * (1.0 - rho)) * grid.reservation_hop() + s
}

/// Single-collector grid partitioning delay.
pub fn partitioning_delay(cfg: &ScenarioConfig) -> f64 {
    reservation_delay(
        cfg.region(),
        cfg.arrival_rate,
        cfg.reception_time,
        cfg.speed,
        cfg.r_star(),
    )
}

/// Zero-travel M/D/m bound before flooring:
/// `lambda s^2 / (2 m^2 (1 - rho)) - ((m - 1) / m) (s / 2) + s`.
pub fn multi_lb_mdm_raw(cfg: &ScenarioConfig) -> f64 {
    let (lambda, s) = (cfg.arrival_rate, cfg.reception_time);
    let m = cfg.collectors as f64;
    let rho = cfg.rho();
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    lambda * s * s / (2.0 * m * m * (1.0 - rho)) - (m - 1.0) / m * (s / 2.0) + s
}

/// [`multi_lb_mdm_raw`] floored at `s`.
pub fn multi_lb_mdm(cfg: &ScenarioConfig) -> f64 {
    multi_lb_mdm_raw(cfg).max(cfg.reception_time)
}

/// `(2/3) sqrt(A / (m pi))`, mean distance to the center of a disk of area `A/m`.
pub fn disk_mean_distance(area: f64, m: usize) -> f64 {
    2.0 / 3.0 * (area / (m as f64 * PI)).sqrt()
}

/// Bound for partitioning policies:
/// `max(0, (2/3) sqrt(A / (m pi)) - r*) / (v (1 - rho)) + s`.
pub fn multi_lb_partition_class(cfg: &ScenarioConfig) -> f64 {
    let rho = cfg.rho();
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let travel = (disk_mean_distance(cfg.area, cfg.collectors) - cfg.r_star()).max(0.0);
    travel / (cfg.speed * (1.0 - rho)) + cfg.reception_time
}

/// Average of the two multi-collector bounds:
/// `lambda s^2 / (4 m^2 (1 - rho)) + max(0, ...) / (2 v (1 - rho)) - ((m - 1) / m) (s / 4) + s`.
pub fn multi_lb_avg(cfg: &ScenarioConfig) -> f64 {
    let (lambda, s, v) = (cfg.arrival_rate, cfg.reception_time, cfg.speed);
    let m = cfg.collectors as f64;
    let rho = cfg.rho();
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let travel = (disk_mean_distance(cfg.area, cfg.collectors) - cfg.r_star()).max(0.0);
    lambda * s * s / (4.0 * m * m * (1.0 - rho)) + travel / (2.0 * v * (1.0 - rho))
        - (m - 1.0) / m * (s / 4.0)
        + s
}

/// Generalized partitioning delay: each of the `m` equal squares behaves as a
/// single-collector partitioning system with rate `lambda / m`.
pub fn multi_partitioning_delay(cfg: &ScenarioConfig) -> Result<f64> {
    let m = cfg.collectors;
    let j = perfect_square_root(m).ok_or_else(|| {
        Error::Configuration(format!("equal square subregions need a square number of collectors, got {m}"))
    })?;
    let sub = cfg.region().split(j)[0];
    Ok(reservation_delay(
        sub,
        cfg.arrival_rate / m as f64,
        cfg.reception_time,
        cfg.speed,
        cfg.r_star(),
    ))
}

/// `x * max(0, c1 sqrt(x) - c2)`, convex and increasing on `x >= 0`.
pub fn excess_cost(x: f64, c1: f64, c2: f64) -> f64 {
    x * (c1 * x.sqrt() - c2).max(0.0)
}

/// All formulas evaluated for one scenario. Multi-collector entries are
/// `None` for `m = 1`; `multi_partitioning` is also `None` when `m` is not a
/// perfect square.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rho: f64,
    pub r_star: f64,
    pub pk_wait: f64,
    pub single_lb: f64,
    pub partitioning: f64,
    pub multi_lb_mdm_raw: Option<f64>,
    pub multi_lb_mdm: Option<f64>,
    pub multi_lb_partition: Option<f64>,
    pub multi_lb_avg: Option<f64>,
    pub multi_partitioning: Option<f64>,
}

impl BoundReport {
    pub fn evaluate(cfg: &ScenarioConfig, model: ExcessModel) -> Self {
        let multi = cfg.collectors > 1;
        Self {
            rho: cfg.rho(),
            r_star: cfg.r_star(),
            pk_wait: pk_mg1_wait(cfg.arrival_rate, cfg.reception_time),
            single_lb: single_collector_lb_with(cfg, model),
            partitioning: partitioning_delay(cfg),
            multi_lb_mdm_raw: multi.then(|| multi_lb_mdm_raw(cfg)),
            multi_lb_mdm: multi.then(|| multi_lb_mdm(cfg)),
            multi_lb_partition: multi.then(|| multi_lb_partition_class(cfg)),
            multi_lb_avg: multi.then(|| multi_lb_avg(cfg)),
            multi_partitioning: if multi {
                multi_partitioning_delay(cfg).ok()
            } else {
                None
            },
        }
    }

    /// The lower bound a simulated delay is checked against: the
    /// single-collector bound for `m = 1`, the averaged bound otherwise.
    pub fn lower_bound(&self) -> f64 {
        self.multi_lb_avg.unwrap_or(self.single_lb)
    }

    /// Closed-form delay of the partitioning policy matching the scenario.
    pub fn policy_formula(&self) -> f64 {
        self.multi_partitioning.unwrap_or(self.partitioning)
    }
}
