use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::ResultRow;
use crate::engine::EventTrace;
use crate::error::{Error, Result};

/// Result table columns, in order.
pub const HEADER: &[&str] = &[
    "policy",
    "snr_db",
    "r_star",
    "rho",
    "lambda",
    "mean_T",
    "ci_T",
    "mean_Wd",
    "ci_Wd",
    "mean_Ws",
    "ci_Ws",
    "mean_N",
    "ci_N",
    "rho_measured",
    "stability",
    "messages",
    "seeds",
    "pk_wait",
    "lb_single",
    "partitioning",
    "lb_mdm",
    "lb_partition",
    "lb_avg",
    "multi_partitioning",
    "ratio_sim_lb",
    "ratio_formula_lb",
];

/// `x` rounded to `digits` significant digits, trailing zeros trimmed.
/// Fixed notation for magnitudes in `[1e-4, 1e6)`, scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().unwrap();
    let exp = rounded.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        let s = format!("{:.*e}", digits - 1, rounded);
        let (mantissa, e) = s.split_once('e').unwrap();
        format!("{}e{e}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_sig(x, 6)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn render_table(rows: &[ResultRow]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for row in rows {
        let b = &row.bounds;
        let sim = row.sim.as_ref();
        let seeds = sim
            .map(|s| s.seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        let fields = [
            row.policy.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "-".into()),
            num(row.snr_db),
            num(b.r_star),
            num(row.rho),
            num(row.lambda),
            opt(sim.map(|s| s.mean_t.mean)),
            opt(sim.map(|s| s.mean_t.half_width)),
            opt(sim.map(|s| s.mean_wd.mean)),
            opt(sim.map(|s| s.mean_wd.half_width)),
            opt(sim.map(|s| s.mean_ws.mean)),
            opt(sim.map(|s| s.mean_ws.half_width)),
            opt(sim.map(|s| s.mean_n.mean)),
            opt(sim.map(|s| s.mean_n.half_width)),
            opt(sim.map(|s| s.rho_measured)),
            sim.map(|s| s.stability.to_string()).unwrap_or_default(),
            sim.map(|s| s.messages_counted.to_string()).unwrap_or_default(),
            seeds,
            num(b.pk_wait),
            num(b.single_lb),
            num(b.partitioning),
            opt(b.multi_lb_mdm),
            opt(b.multi_lb_partition),
            opt(b.multi_lb_avg),
            opt(b.multi_partitioning),
            opt(row.ratio_sim_lb()),
            num(row.ratio_formula_lb()),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents).map_err(|source| Error::Io {
        path: tmp.clone(),
        source,
    })?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

pub fn write_table(rows: &[ResultRow], path: &Path) -> Result<()> {
    write_atomic(path, &render_table(rows))
}

/// Per-message CSV of the completed messages in departure order. Values are
/// written with full precision so rows replay exactly.
pub fn render_messages(trace: &EventTrace) -> String {
    let mut out = String::from("id,arrival_time,x,y,reception_start,departure_time,Wd,Ws\n");
    for m in &trace.completed {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            m.id,
            m.arrival_time,
            m.location.x,
            m.location.y,
            m.reception_start.unwrap(),
            m.departure_time.unwrap(),
            m.wait_travel.unwrap(),
            m.wait_service.unwrap(),
        );
    }
    out
}

pub fn dump_messages(trace: &EventTrace, path: &Path) -> Result<()> {
    write_atomic(path, &render_messages(trace))
}
