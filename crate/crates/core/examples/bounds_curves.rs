//! Delay formulas over load for several SNR thresholds, written as a table
//! through the experiment layer (same output as `dvrsim bounds`).

use dvrsim::experiment::{bounds_table, render_table, ExperimentSpec};

const CONFIG: &str = "
scenario.area = 200
scenario.speed = 1
scenario.reception_time = 1
sweep.snr_db = 10, 20, 30
sweep.rho = 0.1, 0.3, 0.5, 0.7, 0.9
";

fn main() -> dvrsim::Result<()> {
    let spec = ExperimentSpec::parse(CONFIG, "bounds_curves")?;
    let rows = bounds_table(&spec);
    println!("{:>6} {:>5} {:>9} {:>13}", "SNR dB", "rho", "bound", "partitioning");
    for row in &rows {
        println!(
            "{:>6} {:>5} {:>9.3} {:>13.3}",
            row.snr_db, row.rho, row.bounds.single_lb, row.bounds.partitioning
        );
    }
    let csv = render_table(&rows);
    println!("\n{} csv lines, header: {}", csv.lines().count(), csv.lines().next().unwrap_or(""));
    Ok(())
}
