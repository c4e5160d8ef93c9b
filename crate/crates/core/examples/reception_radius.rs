//! Reception radius `r* = (SNRc / beta)^(1/alpha)` across SNR thresholds,
//! with the grid it induces on a 60-area square.

use dvrsim::comm::{db_to_linear, reception_radius};
use dvrsim::grid::build_grid;

fn main() -> dvrsim::Result<()> {
    let area = 60.0;
    println!("{:>7} {:>8} {:>6} {:>8}", "SNR dB", "r*", "cells", "cycle");
    for db in [10.0, 17.0, 20.0, 25.0, 30.0, 35.0] {
        let r = reception_radius(db_to_linear(db), 2.0, 4.0)?;
        let grid = build_grid(area, r);
        println!("{db:>7} {r:>8.4} {:>6} {:>8.3}", grid.num_cells(), grid.cycle_length());
    }
    Ok(())
}
